//! Library side of the `pdmi` command-line tool: JSON descriptors and the
//! seeded verification suites.

pub mod descriptor;
pub mod suites;
