//! Optimal posted-price revenue for a single buyer with a known valuation
//! distribution, together with numerical checks of the two classical lower
//! bounds on that revenue:
//!
//! * `u(V) >= G[V] / e`, where `G[V] = exp(E[log V])` is the geometric
//!   expectation, with equality exactly for the equal-revenue law
//!   `F(p) = 1 - c/p`;
//! * `u(V) >= (1 - 2^{4/3} delta^{1/3}) E[V]` when `G[V] = (1 - delta) E[V]`.
//!
//! Distributions are described either directly through the [`Distribution`]
//! trait or with a small text language (see [`spec`]):
//!
//! ```
//! use posted_price::{spec, revenue};
//!
//! let d = spec::parse_and_build("exponential(rate=1)").unwrap();
//! let opt = revenue::optimal_revenue(d.as_ref(), 4096, 1e-9);
//! assert!((opt.value - (-1.0f64).exp()).abs() < 1e-9);
//! ```

pub mod bounds;
pub mod cli;
pub mod dist;
mod error;
pub mod lambert;
pub mod mc;
pub mod moments;
pub mod num_fmt;
pub mod quadrature;
pub mod report;
pub mod revenue;
pub mod spec;
pub mod stats;

pub use dist::{Atom, Distribution, Support};
pub use error::{Error, Result};
