//! Holds the `acceptance` test target (`tests/acceptance.rs`), which prints
//! one PASS/FAIL line per acceptance criterion. Kept in its own package so
//! that the unit and integration tests of the other crates run before it.
