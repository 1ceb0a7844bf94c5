//! Guide chapters compiled as doctests; one module per chapter so a failure
//! points at its source file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/channels.md")]
pub mod channels {}
#[doc = include_str!("../../../book/src/gluing.md")]
pub mod gluing {}
#[doc = include_str!("../../../book/src/erasure.md")]
pub mod erasure {}
#[doc = include_str!("../../../book/src/qubit-models.md")]
pub mod qubit_models {}
#[doc = include_str!("../../../book/src/nonadditivity.md")]
pub mod nonadditivity {}
#[doc = include_str!("../../../book/src/asymptotics.md")]
pub mod asymptotics {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
