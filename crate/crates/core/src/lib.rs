pub mod ring;
pub mod groebner;
pub mod systems;
pub mod tracker;
pub mod obstruction;
pub mod cli;
