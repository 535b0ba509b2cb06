//! The guide's chapters, compiled as module docs so that `cargo test` runs their listings.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}

#[doc = include_str!("../../../book/src/forms.md")]
pub mod forms {}

#[doc = include_str!("../../../book/src/milnor.md")]
pub mod milnor {}

#[doc = include_str!("../../../book/src/lstar.md")]
pub mod lstar {}

#[doc = include_str!("../../../book/src/kmw.md")]
pub mod kmw {}

#[doc = include_str!("../../../book/src/spectrum.md")]
pub mod spectrum {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
