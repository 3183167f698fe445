//! Coexistence of effects in generalized probability theories.

pub mod coexistence;
pub mod error;
pub mod geometry;
pub mod theory;
pub mod verify;

pub use error::{Error, Result};

/// Guide chapters, compiled so their snippets run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/theories.md")]
    mod theories {}
    #[doc = include_str!("../../../book/src/extremal.md")]
    mod extremal {}
    #[doc = include_str!("../../../book/src/coexistence.md")]
    mod coexistence {}
    #[doc = include_str!("../../../book/src/regions.md")]
    mod regions {}
    #[doc = include_str!("../../../book/src/vanishing.md")]
    mod vanishing {}
    #[doc = include_str!("../../../book/src/quantum-limit.md")]
    mod quantum_limit {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
