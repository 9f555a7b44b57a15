//! Congruence arithmetic Fuchsian data from rational quaternion algebras.
//!
//! The crate builds the norm-one unit group Gamma of the standard order in
//! (a,b/Q) and its principal congruence subgroups Gamma(q), and measures both
//! sides of the systole growth law at desk scale:
//!
//! - exact unit-group indices [Gamma : Gamma(q)] by direct enumeration,
//!   prime-power lifting, and CRT ([`congruence`]);
//! - rigorous trace floors and certified small-trace witnesses for Gamma(q),
//!   reduced to representation of n^2 q^2 + 2n by the indefinite ternary form
//!   a Y1^2 + b Y2^2 - ab Y3^2 ([`systole`], [`ternary`], [`local`]);
//! - the graph-side analogue: girth of LPS Cayley graphs of PGL2/PSL2 over
//!   Z/q ([`lps`]).
//!
//! The `systole-lab` binary exposes the pipelines; see [`cli`].

pub mod arith;
pub mod cli;
pub mod congruence;
pub mod error;
pub mod local;
pub mod lps;
pub mod quaternion;
pub mod report;
pub mod systole;
pub mod ternary;

pub use error::{Error, Result};
