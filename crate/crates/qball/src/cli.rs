//! CLI front end (stub while the crate scaffolds).
