//! Non-kissing complexes of grid shapes, their Grid-Tamari flip orders, and
//! the lattices of biclosed segment sets that they are quotients of.

pub mod biclosed;
pub mod cambrian;
pub mod grassmann;
pub mod grid;
pub mod nkcomplex;
pub mod poset;
pub mod stellation;
pub mod verify;
