pub mod error;
pub mod families;
pub mod gegenbauer;
pub mod io;
pub mod numerics;
pub mod pipeline;
pub mod pointset;
pub mod scheme;
pub mod theorems;

pub use error::{Error, Result};
