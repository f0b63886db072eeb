#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod complexes;
pub mod linalg;
pub mod morita;
pub mod omega;
pub mod pairing;
pub mod structures;
