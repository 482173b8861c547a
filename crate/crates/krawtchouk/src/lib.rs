//! Krawtchouk polynomials `K_n(x; N, p, q)`: an exact rational oracle and the
//! twelve WKB approximations that cover the `(x, n)` square.
//!
//! ```
//! use krawtchouk::{approx, ClassifierConfig, ExactTable, Params};
//!
//! let params = Params::from_q_str(100, "0.64894783").unwrap();
//! let table = ExactTable::build(&params);
//! let v = approx(30, 40, &params.shape(), &ClassifierConfig::default()).unwrap();
//! let err = krawtchouk::metric::normalized_error(&v, &table, 40, 30);
//! assert!(err < 0.1);
//! ```

pub mod error;
pub mod exact;
pub mod metric;
pub mod regions;
pub mod scaled;
pub mod special;
pub mod state;
pub mod wkb;

pub use error::{Error, Result};
pub use exact::{ExactTable, Params};
pub use regions::{approx, ApproxValue};
pub use state::{classify, ClassifierConfig, RegionId, RegionTag, ScaledPoint, Shape};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/exact.md")]
    pub mod exact {}
    #[doc = include_str!("../../../book/src/state_space.md")]
    pub mod state_space {}
    #[doc = include_str!("../../../book/src/wkb.md")]
    pub mod wkb {}
    #[doc = include_str!("../../../book/src/regions.md")]
    pub mod regions {}
    #[doc = include_str!("../../../book/src/special.md")]
    pub mod special {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
