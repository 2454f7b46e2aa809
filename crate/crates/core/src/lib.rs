//! Infinite periodic factors of D0L-systems.
//!
//! A primitive word `v` is an infinite periodic factor of a D0L-system when
//! `v^k` occurs in its language for every `k`. [`engine::analyze`] decides
//! whether such words exist and lists all of them, one conjugacy class at a
//! time, without iterating the system.
//!
//! ```
//! use d0l::engine::analyze;
//! use d0l::D0LSystem;
//!
//! let s = D0LSystem::parse(&["a", "b"], &[("a", "ab"), ("b", "ab")], "a")?;
//! let report = analyze(&s)?;
//! let classes: Vec<String> =
//!     report.classes.iter().map(|c| s.alphabet().render(c.representative())).collect();
//! assert_eq!(classes, ["ab"]);
//! # Ok::<(), d0l::Error>(())
//! ```
//!
//! The guide in `book/` walks through each stage; its code blocks run as
//! doc-tests of this crate.

pub mod alphabet;
pub mod cli;
pub mod code;
pub mod engine;
pub mod error;
pub mod morphism;
pub mod oracle;
pub mod pushy;
pub mod simplify;
pub mod unbounded;
pub mod words;

pub use alphabet::Alphabet;
pub use error::{Error, Result};
pub use morphism::{
    bounded_letters, compose, mortal_letters, D0LSystem, LetterClassification, Morphism,
};
pub use words::{Letter, Word};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/systems.md")]
    mod systems {}
    #[doc = include_str!("../../../book/src/simplification.md")]
    mod simplification {}
    #[doc = include_str!("../../../book/src/bounded.md")]
    mod bounded {}
    #[doc = include_str!("../../../book/src/unbounded.md")]
    mod unbounded {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
