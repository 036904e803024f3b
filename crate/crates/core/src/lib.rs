//! Explicit free generators of ideals in weakly ramified Galois extensions of
//! local fields, together with the associated order of those ideals.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod extension;
pub mod ff;
pub mod generator;
pub mod group;
pub mod job;
pub mod lattice;
pub mod local;
pub mod module;

pub use error::{Error, Result};

// The guide's snippets run as doc-tests, one module per chapter so a failure
// points at its chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/local-fields.md")]
    mod local_fields {}
    #[doc = include_str!("../../../book/src/ramification.md")]
    mod ramification {}
    #[doc = include_str!("../../../book/src/freeness.md")]
    mod freeness {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/splitting.md")]
    mod splitting {}
    #[doc = include_str!("../../../book/src/associated-order.md")]
    mod associated_order {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
