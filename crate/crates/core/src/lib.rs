pub mod aut;
pub mod curve;
pub mod error;
pub mod field;
pub mod numerical;
pub mod orders;
pub mod polyfam;
pub mod report;
pub mod semigroup;
pub mod series;
pub mod witness;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/places.md")]
    mod places {}
    #[doc = include_str!("../../../book/src/orders.md")]
    mod orders {}
    #[doc = include_str!("../../../book/src/polyfam.md")]
    mod polyfam {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/witnesses.md")]
    mod witnesses {}
    #[doc = include_str!("../../../book/src/semigroups.md")]
    mod semigroups {}
    #[doc = include_str!("../../../book/src/automorphisms.md")]
    mod automorphisms {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
