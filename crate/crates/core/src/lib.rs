//! Weisfeiler-Leman refinement and bijective pebble games on finite groups
//! given by Cayley tables, with the normal-structure computations
//! (radical, socle, socle factors, permutation kernel) they rely on.
//!
//! ```
//! use groupwl::group::{Group, GroupName};
//! use groupwl::wl::{distinguishes, Rounds, Version, WlParams};
//!
//! let z6 = Group::named(&GroupName::Cyclic(6)).unwrap();
//! let s3 = Group::named(&GroupName::Symmetric(3)).unwrap();
//! assert!(distinguishes(&z6, &s3, &WlParams::new(1, 2, Version::II), Rounds::Stable).unwrap());
//! ```

pub mod analysis;
pub mod canon;
pub mod catalog;
pub mod experiments;
pub mod game;
pub mod group;
pub mod structure;
pub mod wl;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/structure.md")]
    mod structure {}
    #[doc = include_str!("../../../book/src/types.md")]
    mod types {}
    #[doc = include_str!("../../../book/src/wl.md")]
    mod wl {}
    #[doc = include_str!("../../../book/src/game.md")]
    mod game {}
    #[doc = include_str!("../../../book/src/canon.md")]
    mod canon {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
