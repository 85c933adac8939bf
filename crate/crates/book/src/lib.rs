//! The guide in `book/src`, one module per chapter, so that `cargo test`
//! runs every snippet in it.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/grids.md")]
pub mod grids {}

#[doc = include_str!("../../../book/src/semigroup.md")]
pub mod semigroup {}

#[doc = include_str!("../../../book/src/integrator.md")]
pub mod integrator {}

#[doc = include_str!("../../../book/src/lifespan.md")]
pub mod lifespan {}

#[doc = include_str!("../../../book/src/test_functions.md")]
pub mod test_functions {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
