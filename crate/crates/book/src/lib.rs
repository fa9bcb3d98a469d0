//! The guide's chapters, included as modules so that their code listings run
//! as doc-tests against the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/grid.md")]
pub mod grid {}

#[doc = include_str!("../../../book/src/stationary.md")]
pub mod stationary {}

#[doc = include_str!("../../../book/src/scheme.md")]
pub mod scheme {}

#[doc = include_str!("../../../book/src/diagnostics.md")]
pub mod diagnostics {}

#[doc = include_str!("../../../book/src/running.md")]
pub mod running {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
