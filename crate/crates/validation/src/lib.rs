//! Acceptance checks for `pdmi` live in `tests/acceptance.rs`.
