use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::decomp::singular_values;
use super::matrix::{check_same, CMatrix};
use crate::error::{Error, Result};

/// Exponent of a Schatten norm: `p ∈ [1, ∞)` or the operator norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchattenP {
    Finite(f64),
    Infinity,
}

impl SchattenP {
    pub const TRACE: SchattenP = SchattenP::Finite(1.0);
    pub const FROBENIUS: SchattenP = SchattenP::Finite(2.0);
    pub const OPERATOR: SchattenP = SchattenP::Infinity;

    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(SchattenP::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(SchattenP::Finite(p))
        } else {
            Err(Error::invalid(format!("Schatten exponent must be >= 1, got {p}")))
        }
    }
}

impl fmt::Display for SchattenP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchattenP::Finite(p) => write!(f, "{p}"),
            SchattenP::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for SchattenP {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "infinity" | "∞" | "op" => Ok(SchattenP::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::invalid(format!("not a Schatten exponent: {other:?}")))?;
                SchattenP::new(p)
            }
        }
    }
}

impl Serialize for SchattenP {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SchattenP {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `XY − YX`. When `X` is exactly `Y*` the result is replaced by its
/// Hermitian part.
pub fn commutator(x: &CMatrix, y: &CMatrix) -> Result<CMatrix> {
    check_same(x, y)?;
    let c = &(x * y) - &(y * x);
    if *x == y.adjoint() {
        Ok(c.hermitian_part())
    } else {
        Ok(c)
    }
}

/// The self-commutator `[A*, A]`.
pub fn self_commutator(a: &CMatrix) -> CMatrix {
    commutator(&a.adjoint(), a).expect("same dimension")
}

/// `(Σ σ_i^p)^{1/p}` over the singular values; `Infinity` gives `max σ_i`.
pub fn schatten_norm(a: &CMatrix, p: SchattenP) -> Result<f64> {
    if let SchattenP::Finite(q) = p {
        SchattenP::new(q)?;
    }
    Ok(schatten_from_singular(&singular_values(a), p))
}

/// Schatten norm from precomputed singular values (descending order not required).
pub fn schatten_from_singular(sv: &[f64], p: SchattenP) -> f64 {
    let top = sv.iter().copied().fold(0.0, f64::max);
    match p {
        SchattenP::Infinity => top,
        _ if top == 0.0 => 0.0,
        SchattenP::Finite(1.0) => sv.iter().sum(),
        SchattenP::Finite(2.0) => sv.iter().map(|s| s * s).sum::<f64>().sqrt(),
        SchattenP::Finite(q) => top * sv.iter().map(|s| (s / top).powf(q)).sum::<f64>().powf(1.0 / q),
    }
}

pub fn operator_norm(a: &CMatrix) -> f64 {
    singular_values(a)[0]
}

/// Norms of a matrix evaluated from one singular value computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport {
    pub operator_norm: f64,
    pub schatten: Vec<(SchattenP, f64)>,
    pub frobenius: f64,
    pub normality_defect: f64,
}

impl NormReport {
    pub fn schatten(&self, p: SchattenP) -> Option<f64> {
        self.schatten.iter().find(|(q, _)| *q == p).map(|&(_, v)| v)
    }
}

pub fn norm_report(a: &CMatrix, ps: &[SchattenP]) -> NormReport {
    let sv = singular_values(a);
    NormReport {
        operator_norm: sv[0],
        schatten: ps.iter().map(|&p| (p, schatten_from_singular(&sv, p))).collect(),
        frobenius: schatten_from_singular(&sv, SchattenP::FROBENIUS),
        normality_defect: operator_norm(&self_commutator(a)),
    }
}
