//! Seiberg-Witten polynomial bookkeeping for knot surgery and the
//! two-component link operation, basic-class readout, and pairwise
//! distinction of surgery families.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::fourman::LatticeVector;
use crate::alexander::{knot_alexander, AlexanderError};
use crate::laurent::LaurentPoly;
use crate::linkdiag::{twist_knot_with_clasp, Clasp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("variable mismatch: expected {expected:?}, got {got:?}")]
    VariableMismatch { expected: Vec<String>, got: Vec<String> },
    #[error("elliptic surfaces E(n) with n < 2 are not supported (got {0})")]
    UnsupportedBelowTwo(i64),
    #[error("polynomial {0} is not symmetric under inverting all variables")]
    NotSymmetric(String),
    #[error("{classes} classes for {vars} variables, or classes of unequal rank")]
    ClassMap { classes: usize, vars: usize },
    #[error(transparent)]
    Alexander(#[from] AlexanderError),
}

/// A Seiberg-Witten polynomial: the variable `t_i` stands for the class
/// `scale * class_map[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SWPolynomial {
    poly: LaurentPoly,
    class_map: Vec<LatticeVector>,
    scale: i64,
}

impl SWPolynomial {
    pub fn new(poly: LaurentPoly, class_map: Vec<LatticeVector>, scale: i64) -> Result<Self, SurgeryError> {
        let rank = class_map.first().map_or(0, LatticeVector::rank);
        if class_map.len() != poly.nvars() || class_map.iter().any(|c| c.rank() != rank) {
            return Err(SurgeryError::ClassMap { classes: class_map.len(), vars: poly.nvars() });
        }
        if !poly.is_inversion_symmetric() {
            return Err(SurgeryError::NotSymmetric(poly.to_string()));
        }
        Ok(Self { poly, class_map, scale })
    }

    /// Variable `i` maps to the `i`-th standard basis vector.
    pub fn standard(poly: LaurentPoly) -> Result<Self, SurgeryError> {
        let n = poly.nvars();
        Self::new(poly, (0..n).map(|i| LatticeVector::unit(n, i)).collect(), 1)
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn class_map(&self) -> &[LatticeVector] {
        &self.class_map
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn with_scale(mut self, scale: i64) -> Self {
        self.scale = scale;
        self
    }

    pub fn variables(&self) -> &[String] {
        self.poly.variables()
    }
}

/// Multiplies by the Alexander polynomial of the surgery knot. A knot
/// polynomial in `t` is accepted for a half-fiber variable `s` and read as
/// `Delta(s^2)`.
pub fn knot_surgery_sw(sw: &SWPolynomial, delta_k: &LaurentPoly) -> Result<SWPolynomial, SurgeryError> {
    let mismatch = || SurgeryError::VariableMismatch {
        expected: sw.variables().to_vec(),
        got: delta_k.variables().to_vec(),
    };
    if delta_k.nvars() != 1 || sw.poly.nvars() != 1 {
        return Err(mismatch());
    }
    let delta = if delta_k.variables() == sw.variables() {
        delta_k.clone()
    } else if sw.variables()[0] == "s" && delta_k.variables()[0] == "t" {
        delta_k.substitute_powers(2).renamed(&["s"])
    } else {
        return Err(mismatch());
    };
    let product = &sw.poly * &delta;
    let poly = product.centered().unwrap_or(product);
    SWPolynomial::new(poly, sw.class_map.clone(), sw.scale)
}

/// Link operation on two elliptic fibers: `Delta_L(t1^2, t2^2)` in centered
/// form, with `t_i` dual to the `i`-th fiber.
pub fn link_operation_sw(delta_l: &LaurentPoly) -> Result<SWPolynomial, SurgeryError> {
    if delta_l.nvars() != 2 {
        return Err(SurgeryError::VariableMismatch {
            expected: vec!["t1".into(), "t2".into()],
            got: delta_l.variables().to_vec(),
        });
    }
    let doubled = delta_l.substitute_powers(2);
    let poly = doubled.centered().expect("doubled exponents have even span");
    SWPolynomial::standard(poly)
}

/// `scale * sum_i e_i * class_map[i]` over the support, deduplicated and
/// sorted in descending order.
pub fn basic_classes(sw: &SWPolynomial) -> Vec<LatticeVector> {
    let rank = sw.class_map.first().map_or(0, LatticeVector::rank);
    let mut out: Vec<LatticeVector> = sw
        .poly
        .terms()
        .map(|(e, _)| {
            e.iter()
                .zip(&sw.class_map)
                .fold(LatticeVector::zero(rank), |acc, (&k, c)| acc.add(&c.scale(k as i64)))
                .scale(sw.scale)
        })
        .collect();
    out.sort();
    out.dedup();
    out.reverse();
    out
}

/// True when the two polynomials differ even after units and global
/// inversion of the variables.
pub fn distinguish(a: &SWPolynomial, b: &SWPolynomial) -> Result<bool, SurgeryError> {
    if a.variables() != b.variables() {
        return Err(SurgeryError::VariableMismatch {
            expected: a.variables().to_vec(),
            got: b.variables().to_vec(),
        });
    }
    Ok(!a.poly.associates_up_to_inversion(&b.poly))
}

/// `(s - s^-1)^(n-2)` in the half-fiber variable `s` (fiber `t = s^2`).
pub fn elliptic_sw(n: i64) -> Result<SWPolynomial, SurgeryError> {
    if n < 2 {
        return Err(SurgeryError::UnsupportedBelowTwo(n));
    }
    let base = LaurentPoly::univariate("s", -1, &[1, 0, -1]).scale(-1);
    SWPolynomial::standard(base.pow((n - 2) as u32))
}

/// The K3 surface in the fiber variable `t`: constant 1.
pub fn e2_sw() -> SWPolynomial {
    SWPolynomial::standard(LaurentPoly::one(&["t"])).unwrap()
}

/// Knot surgery on `E(2)` along the `n`-th twist knot.
pub fn e2_twist_sw(n: i64, clasp: Clasp) -> Result<SWPolynomial, SurgeryError> {
    let pd = twist_knot_with_clasp(n, clasp).map_err(AlexanderError::from)?;
    let delta = knot_alexander(&pd)?;
    knot_surgery_sw(&e2_sw(), &delta)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SWReport {
    pub family: String,
    pub n: i64,
    pub sw: String,
    pub basic_classes: Vec<LatticeVector>,
}

impl SWReport {
    pub fn new(family: &str, n: i64, sw: &SWPolynomial) -> Self {
        Self {
            family: family.to_string(),
            n,
            sw: sw.poly.to_compact_string(),
            basic_classes: basic_classes(sw),
        }
    }
}
