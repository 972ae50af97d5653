//! Thermodynamics, correlations and entanglement of the spin-1/2 XX chain
//! with alternating exchange and alternating field, in the thermodynamic
//! limit and on finite rings.
//!
//! Start with [`model::ChainParams`] and [`model::Thermal`]; every other
//! module takes those two plus a [`quadrature::QuadSpec`]. The guide in
//! `book/` walks through each module.

pub mod correlations;
pub mod entanglement;
pub mod error;
pub mod ground;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod thermo;

pub use error::{Error, Result};

// The guide's snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/thermodynamics.md")]
    mod thermodynamics {}
    #[doc = include_str!("../../../book/src/correlations.md")]
    mod correlations {}
    #[doc = include_str!("../../../book/src/ground-state.md")]
    mod ground_state {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
