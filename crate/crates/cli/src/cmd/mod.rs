//! One module per subcommand. Each validates its flags, runs the library
//! module, writes artifacts through a `RunWriter` and returns the manifest;
//! check-style subcommands write their report first and only then fail, so
//! the evidence survives a failed check.

pub mod enumerate;
pub mod gaussian;
pub mod phi4;
pub mod pivot;
pub mod polymer;
pub mod portrait;
pub mod rgflow;
pub mod susy;
pub mod wsaw;
