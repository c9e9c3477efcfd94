//! Test-only package. The acceptance suite lives in `tests/acceptance.rs`;
//! it is kept apart so that it runs after every other test target.
