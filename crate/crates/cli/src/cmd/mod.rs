pub mod constants;
pub mod plot;
pub mod simulate;
pub mod verify;
