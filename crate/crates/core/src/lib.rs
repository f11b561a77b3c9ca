//! Exact computations around the norm principle for quadratic forms.
//!
//! Given a quadratic space `(V, q)` over a base domain (the rationals, an odd
//! prime field, or the local ring of rational functions regular at the
//! origin) and a value `a = q(u)` over a finite étale extension
//! `E = D[t]/(f)`, [`witness::norm_principle_witness`] produces explicit base
//! vectors `w_k` with `∏ q(w_k) = N_{E/D}(a)` exactly, with the factor count
//! congruent to `[E : D]` mod 2.

pub mod cli;
pub mod error;
pub mod etale;
pub mod oracle;
pub mod matrix;
pub mod poly;
pub mod quadform;
pub mod scalar;
pub mod spinor;
pub mod witness;

pub use error::{Error, Result};
