//! The guide under `book/`, one module per chapter, so `cargo test --doc`
//! runs every listing.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/geometry.md")]
pub mod geometry {}

#[doc = include_str!("../../../book/src/lambda.md")]
pub mod lambda {}

#[doc = include_str!("../../../book/src/symmetry.md")]
pub mod symmetry {}

#[doc = include_str!("../../../book/src/oracles.md")]
pub mod oracles {}

#[doc = include_str!("../../../book/src/sweeps.md")]
pub mod sweeps {}

#[doc = include_str!("../../../book/src/accuracy.md")]
pub mod accuracy {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
