//! Holds the end-to-end acceptance test target; see tests/acceptance.rs.
