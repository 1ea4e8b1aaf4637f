//! Exact point counting over finite fields, zeta functions, Newton and Hodge
//! polygons, F-isocrystal slopes, and checkers for the classical point-count
//! congruences (Chevalley–Warning, Ax–Katz, Wan, Moreno–Moreno, Ekedahl,
//! Esnault).
//!
//! Everything is exact: finite-field elements are coefficient vectors, p-adic
//! integers are fixed-precision residues, and all rational data uses
//! arbitrary-precision integers.

pub mod congruence;
pub mod corpus;
pub mod error;
pub mod ffield;
pub mod isocrystal;
pub mod padic;
pub mod polygon;
pub mod polysys;
pub mod rational;
pub mod zeta;

pub use error::{Error, Result};

use serde::Serialize;

/// Outcome of a theorem check. A failing verdict is data, not an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}
