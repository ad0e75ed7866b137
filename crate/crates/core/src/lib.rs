//! Extremal polyomino chains for degree-based topological indices.
//!
//! Chains grown to the right or downward are encoded as link vectors
//! ([`chain`]). Any index `sum f(d_u, d_v)` over such chains decomposes into
//! per-square increments ([`index`]), which makes the best value over all
//! `2^(n-2)` chains computable in `O(n)` by dynamic programming ([`dp`]),
//! together with the exact number of optimal chains and every one of them.
//! [`oracle`] provides brute-force ground truth, and [`azi`] states the
//! augmented Zagreb results as checkable claims.
//!
//! ```
//! use polychain::{dp, index};
//!
//! let azi = index::preset("azi").unwrap();
//! let best = dp::maximize(&azi, 6, None).unwrap();
//! assert_eq!(best.value.exact().unwrap(), "10790359/54000");
//! assert_eq!(best.witness.to_string(), "1,2,2,1");
//! ```

pub mod azi;
pub mod chain;
pub mod dp;
pub mod error;
pub mod index;
pub mod oracle;
pub mod report;
pub mod value;

pub use chain::{Link, LinkVector};
pub use dp::{Engine, ExtremalResult, Objective};
pub use error::{Error, Result};
pub use index::{IndexFunction, GTable};
pub use value::{Mode, Value};
