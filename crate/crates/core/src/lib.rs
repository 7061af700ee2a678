pub mod bounds;
pub mod search;
pub mod codes;
pub mod error;
pub mod formats;
pub mod gfq;
pub mod grassmann;
pub mod hamming;
pub mod netsim;
pub mod store;

pub use error::{Error, Result};
