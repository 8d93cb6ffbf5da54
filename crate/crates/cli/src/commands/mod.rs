pub mod attack;
pub mod bound;
pub mod calibrate;
pub mod simulate;
