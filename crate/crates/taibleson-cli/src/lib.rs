//! Library side of the command-line tool: file formats and the
//! verification suite (shared by the binary and the integration tests).

pub mod accept;
pub mod json;
