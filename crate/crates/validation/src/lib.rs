//! Acceptance checks for `c2game` live in `tests/acceptance.rs`.
