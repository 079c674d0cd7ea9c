//! Self-check suite (stub while the crate scaffolds).
