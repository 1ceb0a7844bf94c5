//! Complementary quantum channel pairs built by gluing isometries, their
//! channel coherent information, and two-copy nonadditivity.

pub mod asymptotics;
pub mod channels;
pub mod coherent_info;
pub mod erasure;
pub mod error;
pub mod gluing;
pub mod nonadditivity;
pub mod numkernel;
pub mod optimize;
pub mod qubit_models;
pub mod random;
pub mod verify;

pub use channels::{concatenate, entropy_bias, make_pair, ChannelPair, Isometry, Pdi, Superoperator};
pub use error::{Error, Result};
pub use numkernel::{Complex64, ComplexMatrix};
