pub mod cli;
pub mod cubic;
pub mod cuberoot;
pub mod error;
pub mod exactnum;
pub mod matpow;
pub mod mthroot;
pub mod oracle;
pub mod polyroot;
pub mod report;

pub use error::{Error, Result};
