pub mod analyze;
pub mod plot;
pub mod sweep;
pub mod verify;
