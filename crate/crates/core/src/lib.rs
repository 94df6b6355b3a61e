pub mod error;
pub mod exactnum;

pub use error::{Error, Result};
pub mod poly;
pub mod localform;
pub mod gksiegel;
pub mod density;
pub mod siegelmass;
pub mod eisenstein;
pub mod verify;
