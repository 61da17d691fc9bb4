pub mod error;
pub mod lie;
pub mod linalg;
pub mod orbit;
pub mod ncps;
pub mod dynamics;
pub mod verify;
pub mod cli;
