//! Handle decompositions, intersection forms and their invariants,
//! Gram-level Kirby moves, and the exceptional-class obstruction for
//! basic-class sets.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freegroup::AbelianGroup;
use crate::matrix::{kernel_basis, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FourManError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("form is not unimodular (|det| = {0})")]
    NonUnimodular(BigInt),
    #[error("definite forms of rank {0} > 8 are not supported")]
    DefiniteRankTooLarge(usize),
    #[error("cannot blow down basis vector {index}: its square is {square}, not +-1")]
    IllegalBlowDown { index: usize, square: i64 },
    #[error("handle slide needs two distinct indices below {rank}, got {i} and {j}")]
    IllegalSlide { i: usize, j: usize, rank: usize },
    #[error("blow-up sign must be +1 or -1, got {0}")]
    BlowUpSign(i64),
    #[error("basic class set is not closed under negation")]
    AsymmetricClassSet,
    #[error("lattice vector has length {got}, lattice rank is {expected}")]
    VectorLength { got: usize, expected: usize },
    #[error("homeomorphism verdicts need simply-connected inputs")]
    NotSimplyConnected,
}

/// One- and two-handle data of a 4-dimensional handlebody.
///
/// `linking` is the symmetric linking matrix of the 2-handles (framings on
/// the diagonal); row `i` of `one_handle_linking` counts, with sign, how often
/// 2-handle `i` runs over each 1-handle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HandleJson", into = "HandleJson")]
pub struct HandleDecomposition {
    one_handles: usize,
    linking: IntMatrix,
    one_handle_linking: IntMatrix,
}

/// Wire format of a handle decomposition; `B` may be omitted when there
/// are no 1-handles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HandleJson {
    #[serde(default)]
    pub one_handles: usize,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<i64>>,
    #[serde(rename = "B", default)]
    pub b: Option<Vec<Vec<i64>>>,
}

impl HandleJson {
    pub fn build(self) -> Result<HandleDecomposition, FourManError> {
        self.try_into()
    }
}

impl TryFrom<HandleJson> for HandleDecomposition {
    type Error = FourManError;

    fn try_from(j: HandleJson) -> Result<Self, Self::Error> {
        let q = IntMatrix::try_from(j.q).map_err(|e| FourManError::DimensionMismatch(e.to_string()))?;
        let b = match j.b {
            Some(rows) if !rows.is_empty() => {
                IntMatrix::try_from(rows).map_err(|e| FourManError::DimensionMismatch(e.to_string()))?
            }
            _ => IntMatrix::zeros(q.nrows(), j.one_handles),
        };
        Self::new(j.one_handles, q, b)
    }
}

impl From<HandleDecomposition> for HandleJson {
    fn from(h: HandleDecomposition) -> Self {
        HandleJson {
            one_handles: h.one_handles,
            q: h.linking.to_rows(),
            b: Some(h.one_handle_linking.to_rows()),
        }
    }
}

impl HandleDecomposition {
    pub fn new(one_handles: usize, linking: IntMatrix, one_handle_linking: IntMatrix) -> Result<Self, FourManError> {
        if !linking.is_square() {
            return Err(FourManError::DimensionMismatch(format!(
                "linking matrix is {}x{}",
                linking.nrows(),
                linking.ncols()
            )));
        }
        if !linking.is_symmetric() {
            return Err(FourManError::NotSymmetric);
        }
        let h2 = linking.nrows();
        if (one_handle_linking.nrows(), one_handle_linking.ncols()) != (h2, one_handles) {
            return Err(FourManError::DimensionMismatch(format!(
                "one-handle matrix is {}x{}, expected {h2}x{one_handles}",
                one_handle_linking.nrows(),
                one_handle_linking.ncols()
            )));
        }
        Ok(Self { one_handles, linking, one_handle_linking })
    }

    /// Two-handles only.
    pub fn two_handles(linking: IntMatrix) -> Result<Self, FourManError> {
        let n = linking.nrows();
        Self::new(0, linking, IntMatrix::zeros(n, 0))
    }

    pub fn one_handles(&self) -> usize {
        self.one_handles
    }

    pub fn linking(&self) -> &IntMatrix {
        &self.linking
    }

    pub fn one_handle_linking(&self) -> &IntMatrix {
        &self.one_handle_linking
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub h1: AbelianGroup,
    pub h2_rank: usize,
    /// Intersection form on `H_2`, in the kernel basis of the boundary map.
    pub h2_form: IntMatrix,
    pub boundary_h1: AbelianGroup,
    pub form: FormInvariants,
}

pub fn homology(h: &HandleDecomposition) -> Homology {
    let b = &h.one_handle_linking;
    let h1 = AbelianGroup::from_relations(b);
    // H_2 = ker(B^T : Z^h2 -> Z^h1); the chain complex has nothing in degree 3
    let k = kernel_basis(&b.transpose());
    let h2_form = k.transpose().mul(&h.linking).mul(&k);
    // dotted circles behave like 0-framed unknots for the boundary
    let stacked = IntMatrix::block(&h.linking, b, &b.transpose(), &IntMatrix::zeros(h.one_handles, h.one_handles));
    let boundary_h1 = AbelianGroup::from_relations(&stacked);
    Homology {
        h1,
        h2_rank: k.ncols(),
        form: form_invariants_of(&h2_form),
        h2_form,
        boundary_h1,
    }
}

/// Symmetric integer form with named basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GramJson", into = "GramJson")]
pub struct GramForm {
    gram: IntMatrix,
    labels: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramJson {
    pub gram: Vec<Vec<i64>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

impl GramJson {
    pub fn build(self) -> Result<GramForm, FourManError> {
        self.try_into()
    }
}

impl TryFrom<GramJson> for GramForm {
    type Error = FourManError;

    fn try_from(j: GramJson) -> Result<Self, Self::Error> {
        let g = IntMatrix::try_from(j.gram).map_err(|e| FourManError::DimensionMismatch(e.to_string()))?;
        match j.labels {
            Some(l) => GramForm::with_labels(g, l),
            None => GramForm::new(g),
        }
    }
}

impl From<GramForm> for GramJson {
    fn from(g: GramForm) -> Self {
        GramJson { gram: g.gram.to_rows(), labels: Some(g.labels) }
    }
}

impl GramForm {
    /// Basis labelled `e1, e2, ...`.
    pub fn new(gram: IntMatrix) -> Result<Self, FourManError> {
        let labels = (1..=gram.nrows()).map(|i| format!("e{i}")).collect();
        Self::with_labels(gram, labels)
    }

    pub fn with_labels(gram: IntMatrix, labels: Vec<String>) -> Result<Self, FourManError> {
        if !gram.is_square() {
            return Err(FourManError::DimensionMismatch(format!("Gram matrix is {}x{}", gram.nrows(), gram.ncols())));
        }
        if !gram.is_symmetric() {
            return Err(FourManError::NotSymmetric);
        }
        if labels.len() != gram.nrows() {
            return Err(FourManError::DimensionMismatch(format!(
                "{} labels for rank {}",
                labels.len(),
                gram.nrows()
            )));
        }
        Ok(Self { gram, labels })
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        Self::new(IntMatrix::diagonal(entries)).expect("diagonal matrices are symmetric")
    }

    /// The hyperbolic plane `[[0,1],[1,0]]`.
    pub fn hyperbolic() -> Self {
        Self::new(IntMatrix::from_rows(&[[0, 1], [1, 0]])).unwrap()
    }

    /// `k` orthogonal copies of the hyperbolic plane.
    pub fn hyperbolic_sum(k: usize) -> Self {
        let mut g = Self::new(IntMatrix::zeros(0, 0)).unwrap();
        for _ in 0..k {
            g = g.direct_sum(&Self::hyperbolic());
        }
        g
    }

    /// The positive definite E8 lattice (Dynkin diagram with the branch at
    /// the third node).
    pub fn e8() -> Self {
        let mut g = IntMatrix::diagonal(&[2; 8]);
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)] {
            g[(a, b)] = -1;
            g[(b, a)] = -1;
        }
        Self::new(g).unwrap()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        // keep labels distinct when both sides use the default names
        let mut seen = BTreeSet::new();
        for (i, l) in labels.iter_mut().enumerate() {
            if !seen.insert(l.clone()) {
                *l = format!("e{}", i + 1);
                seen.insert(l.clone());
            }
        }
        Self { gram: self.gram.direct_sum(&other.gram), labels }
    }

    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let gy = self.gram.apply(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn square(&self, x: &[i64]) -> i64 {
        self.pair(x, x)
    }

    /// `M g M^T`: the rows of `m` are the new basis vectors.
    pub fn transform(&self, m: &IntMatrix) -> Self {
        Self { gram: m.congruence(&self.gram), labels: self.labels.clone() }
    }

    pub fn invariants(&self) -> FormInvariants {
        form_invariants_of(&self.gram)
    }

    pub fn apply(&self, mv: GramMove) -> Result<Self, FourManError> {
        gram_move(self, mv)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Definiteness {
    Positive,
    Negative,
    Indefinite,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormInvariants {
    pub rank: usize,
    pub signature: i64,
    pub parity: Parity,
    pub definiteness: Definiteness,
    pub det_abs: BigInt,
    pub b_plus: usize,
    pub b_minus: usize,
}

impl FormInvariants {
    pub fn is_unimodular(&self) -> bool {
        self.det_abs.is_one()
    }
}

impl fmt::Display for FormInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parity = match self.parity {
            Parity::Even => "even",
            Parity::Odd => "odd",
        };
        let def = match self.definiteness {
            Definiteness::Positive => "positive definite",
            Definiteness::Negative => "negative definite",
            Definiteness::Indefinite => "indefinite",
            Definiteness::Degenerate => "degenerate",
        };
        write!(
            f,
            "rank {}, sigma {}, {parity}, {def}, |det| {}",
            self.rank, self.signature, self.det_abs
        )
    }
}

/// Diagonal of a rational congruence diagonalization of a symmetric matrix.
pub fn rational_diagonalization(g: &IntMatrix) -> Vec<BigRational> {
    let n = g.nrows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from_integer(g[(i, j)].into())).collect())
        .collect();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(p) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                swap_basis(&mut a, k, p);
            } else if let Some(p) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // e_k + e_p has square 2 a_kp != 0
                add_basis(&mut a, k, p, &BigRational::one());
            } else {
                // e_k is orthogonal to the rest
                diag.push(BigRational::zero());
                continue;
            }
        }
        let pivot = a[k][k].clone();
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = -(&a[r][k] / &pivot);
            add_basis(&mut a, r, k, &f);
        }
        diag.push(pivot);
    }
    diag
}

fn swap_basis(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// `e_i <- e_i + f e_j` applied as a congruence.
fn add_basis(a: &mut [Vec<BigRational>], i: usize, j: usize, f: &BigRational) {
    let n = a.len();
    for c in 0..n {
        let v = &a[j][c] * f;
        a[i][c] += v;
    }
    for r in 0..n {
        let v = &a[r][j] * f;
        a[r][i] += v;
    }
}

pub fn form_invariants(g: &GramForm) -> FormInvariants {
    form_invariants_of(&g.gram)
}

fn form_invariants_of(g: &IntMatrix) -> FormInvariants {
    let diag = rational_diagonalization(g);
    let b_plus = diag.iter().filter(|d| d.is_positive()).count();
    let b_minus = diag.iter().filter(|d| d.is_negative()).count();
    let nullity = diag.len() - b_plus - b_minus;
    let parity = if (0..g.nrows()).all(|i| g[(i, i)] % 2 == 0) { Parity::Even } else { Parity::Odd };
    let definiteness = if nullity > 0 {
        Definiteness::Degenerate
    } else if b_minus == 0 {
        Definiteness::Positive
    } else if b_plus == 0 {
        Definiteness::Negative
    } else {
        Definiteness::Indefinite
    };
    FormInvariants {
        rank: g.nrows(),
        signature: b_plus as i64 - b_minus as i64,
        parity,
        definiteness,
        det_abs: g.determinant().abs(),
        b_plus,
        b_minus,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormObstruction {
    Rank,
    Signature,
    Parity,
    /// Definite forms with matching invariants and no congruence.
    NoCongruence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormVerdict {
    /// `witness` is a unimodular `M` with `M g1 M^T = g2` when one was
    /// constructed (definite case); indefinite forms are decided by
    /// rank, signature and parity alone.
    Isomorphic { witness: Option<IntMatrix> },
    NotIsomorphic(FormObstruction),
}

impl FormVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, FormVerdict::Isomorphic { .. })
    }
}

pub fn forms_isomorphic(g1: &GramForm, g2: &GramForm) -> Result<FormVerdict, FourManError> {
    let (a, b) = (g1.invariants(), g2.invariants());
    for inv in [&a, &b] {
        if !inv.is_unimodular() {
            return Err(FourManError::NonUnimodular(inv.det_abs.clone()));
        }
    }
    if a.rank != b.rank {
        return Ok(FormVerdict::NotIsomorphic(FormObstruction::Rank));
    }
    if a.signature != b.signature {
        return Ok(FormVerdict::NotIsomorphic(FormObstruction::Signature));
    }
    if a.parity != b.parity {
        return Ok(FormVerdict::NotIsomorphic(FormObstruction::Parity));
    }
    if a.definiteness == Definiteness::Indefinite {
        return Ok(FormVerdict::Isomorphic { witness: None });
    }
    if a.rank > 8 {
        return Err(FourManError::DefiniteRankTooLarge(a.rank));
    }
    let sign = if a.definiteness == Definiteness::Negative { -1 } else { 1 };
    let p1 = scaled(&g1.gram, sign);
    let p2 = scaled(&g2.gram, sign);
    Ok(match definite_congruence(&p1, &p2) {
        Some(m) => FormVerdict::Isomorphic { witness: Some(m) },
        None => FormVerdict::NotIsomorphic(FormObstruction::NoCongruence),
    })
}

fn scaled(g: &IntMatrix, s: i64) -> IntMatrix {
    let rows: Vec<Vec<i64>> = g.to_rows().into_iter().map(|r| r.into_iter().map(|x| x * s).collect()).collect();
    IntMatrix::from_rows(&rows)
}

/// All `x` with `x g x^T = norm` for positive definite `g`, by
/// Fincke-Pohst enumeration on a floating Cholesky factor and exact
/// confirmation of every hit.
pub fn vectors_of_norm(g: &IntMatrix, norm: i64) -> Vec<Vec<i64>> {
    let n = g.nrows();
    if n == 0 {
        return if norm == 0 { vec![vec![]] } else { vec![] };
    }
    // q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2
    let mut q = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            q[i][j] = g[(i, j)] as f64;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let bound = norm as f64 + 1e-6;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    enumerate_level(&q, g, n - 1, bound, norm, &mut x, &mut out);
    out.sort();
    out
}

fn enumerate_level(
    q: &[Vec<f64>],
    g: &IntMatrix,
    i: usize,
    remaining: f64,
    norm: i64,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    let n = q.len();
    let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let radius = (remaining.max(0.0) / q[i][i]).sqrt();
    let lo = (center - radius - 1e-9).ceil() as i64;
    let hi = (center + radius + 1e-9).floor() as i64;
    for v in lo..=hi {
        x[i] = v;
        let d = v as f64 - center;
        let rest = remaining - q[i][i] * d * d;
        if rest < -1e-6 {
            continue;
        }
        if i == 0 {
            let gx = g.apply(x);
            let exact: i64 = x.iter().zip(&gx).map(|(a, b)| a * b).sum();
            if exact == norm {
                out.push(x.clone());
            }
        } else {
            enumerate_level(q, g, i - 1, rest, norm, x, out);
        }
    }
    x[i] = 0;
}

/// Unimodular `M` with `M g1 M^T = g2` for positive definite forms.
fn definite_congruence(g1: &IntMatrix, g2: &IntMatrix) -> Option<IntMatrix> {
    let n = g1.nrows();
    let mut by_norm: std::collections::BTreeMap<i64, Vec<Vec<i64>>> = std::collections::BTreeMap::new();
    for i in 0..n {
        by_norm.entry(g2[(i, i)]).or_insert_with(|| vectors_of_norm(g1, g2[(i, i)]));
    }
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(n);
    if assign_rows(g1, g2, &by_norm, &mut rows) {
        Some(IntMatrix::from_rows(&rows))
    } else {
        None
    }
}

fn assign_rows(
    g1: &IntMatrix,
    g2: &IntMatrix,
    by_norm: &std::collections::BTreeMap<i64, Vec<Vec<i64>>>,
    rows: &mut Vec<Vec<i64>>,
) -> bool {
    let i = rows.len();
    if i == g1.nrows() {
        return true;
    }
    for v in &by_norm[&g2[(i, i)]] {
        let gv = g1.apply(v);
        let fits = rows.iter().enumerate().all(|(j, r)| {
            let p: i64 = r.iter().zip(&gv).map(|(a, b)| a * b).sum();
            p == g2[(j, i)]
        });
        if fits {
            rows.push(v.clone());
            if assign_rows(g1, g2, by_norm, rows) {
                return true;
            }
            rows.pop();
        }
    }
    false
}

/// Kirby moves as they act on an intersection form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GramMove {
    /// Direct sum with `<sign>`; the new vector is labelled `E<k>`.
    BlowUp(i64),
    /// Removes a basis vector of square `+-1` after sliding the others off it.
    BlowDown(usize),
    /// `e_i <- e_i + sign * e_j`.
    HandleSlide { i: usize, j: usize, sign: i64 },
}

pub fn gram_move(g: &GramForm, mv: GramMove) -> Result<GramForm, FourManError> {
    let n = g.rank();
    match mv {
        GramMove::BlowUp(s) => {
            if s.abs() != 1 {
                return Err(FourManError::BlowUpSign(s));
            }
            let k = (1..).find(|k| !g.labels.contains(&format!("E{k}"))).unwrap();
            let mut labels = g.labels.clone();
            labels.push(format!("E{k}"));
            Ok(GramForm { gram: g.gram.direct_sum(&IntMatrix::diagonal(&[s])), labels })
        }
        GramMove::BlowDown(i) => {
            if i >= n {
                return Err(FourManError::DimensionMismatch(format!("index {i} out of range for rank {n}")));
            }
            let s = g.gram[(i, i)];
            if s.abs() != 1 {
                return Err(FourManError::IllegalBlowDown { index: i, square: s });
            }
            // e_j <- e_j - (e_j.e_i / s) e_i makes e_i orthogonal to the rest
            let mut m = IntMatrix::identity(n);
            for j in 0..n {
                if j != i {
                    m[(j, i)] = -g.gram[(j, i)] * s;
                }
            }
            let slid = m.congruence(&g.gram);
            let keep: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let gram = slid.minor(&[i], &[i]);
            let labels = keep.iter().map(|&j| g.labels[j].clone()).collect();
            Ok(GramForm { gram, labels })
        }
        GramMove::HandleSlide { i, j, sign } => {
            if i == j || i >= n || j >= n || sign.abs() != 1 {
                return Err(FourManError::IllegalSlide { i, j, rank: n });
            }
            let mut m = IntMatrix::identity(n);
            m[(i, j)] = sign;
            Ok(g.transform(&m))
        }
    }
}

/// Closed 4-manifold data for homeomorphism decisions: the intersection
/// form and a caller-asserted simple-connectivity flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedManifold {
    pub name: String,
    pub form: GramForm,
    pub simply_connected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomeomorphismVerdict {
    pub homeomorphic: bool,
    pub obstruction: Option<FormObstruction>,
    pub invariants: (FormInvariants, FormInvariants),
}

pub fn homeomorphism_verdict(a: &ClosedManifold, b: &ClosedManifold) -> Result<HomeomorphismVerdict, FourManError> {
    if !a.simply_connected || !b.simply_connected {
        return Err(FourManError::NotSimplyConnected);
    }
    let verdict = forms_isomorphic(&a.form, &b.form)?;
    let obstruction = match verdict {
        FormVerdict::Isomorphic { .. } => None,
        FormVerdict::NotIsomorphic(o) => Some(o),
    };
    Ok(HomeomorphismVerdict {
        homeomorphic: obstruction.is_none(),
        obstruction,
        invariants: (a.form.invariants(), b.form.invariants()),
    })
}

/// Reduced intersection form of the plug double glued by the `n`-th power
/// of the boundary twist: `2H` for even `n`, `2<1> + 2<-1>` for odd `n`.
pub fn twisted_double(n: i64) -> ClosedManifold {
    let form = if n % 2 == 0 {
        GramForm::hyperbolic_sum(2)
    } else {
        GramForm::diagonal(&[1, 1, -1, -1])
    };
    ClosedManifold { name: format!("D_{n}"), form, simply_connected: true }
}

/// Whether the `n`-th twist extends as a homeomorphism over the plug, read
/// off from the homeomorphism type of the twisted double against the
/// untwisted one.
pub fn twist_extends(n: i64) -> Result<bool, FourManError> {
    Ok(homeomorphism_verdict(&twisted_double(0), &twisted_double(n))?.homeomorphic)
}

/// Integer coordinates in a labelled lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Self(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    /// `(self - o) / 2` when integral.
    pub fn half_difference(&self, o: &Self) -> Option<Self> {
        let d = self.sub(o);
        d.0.iter().all(|x| x % 2 == 0).then(|| Self(d.0.iter().map(|x| x / 2).collect()))
    }

    /// Linear combination of basis labels, e.g. `T1+T2`, `-2E1`, `0`.
    pub fn display_with(&self, labels: &[String]) -> String {
        let mut s = String::new();
        for (c, l) in self.0.iter().zip(labels) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else if s.is_empty() { "" } else { "+" };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            s.push_str(&format!("{sign}{mag}{l}"));
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalityVerdict {
    /// The class set is empty; nothing can be concluded.
    Inconclusive,
    /// `classes = { k + e, k - e : k in shifts }` with `e . e = -1`.
    PairingFound { exceptional: LatticeVector, shifts: Vec<LatticeVector> },
    /// No candidate class of square `-1` splits the set. Every candidate is
    /// listed with its square.
    NoExceptionalPairing { candidates: Vec<(LatticeVector, i64)> },
}

/// Looks for a square `-1` class `e` such that the basic classes are exactly
/// `{k +- e}` for some set of `k`, as they must be after a blow-up.
pub fn minimality_obstruction(
    lattice: &GramForm,
    classes: &[LatticeVector],
) -> Result<MinimalityVerdict, FourManError> {
    let rank = lattice.rank();
    if let Some(v) = classes.iter().find(|v| v.rank() != rank) {
        return Err(FourManError::VectorLength { got: v.rank(), expected: rank });
    }
    let set: BTreeSet<LatticeVector> = classes.iter().cloned().collect();
    if set.iter().any(|v| !set.contains(&v.neg())) {
        return Err(FourManError::AsymmetricClassSet);
    }
    if set.is_empty() {
        return Ok(MinimalityVerdict::Inconclusive);
    }
    let mut cands: BTreeSet<LatticeVector> = BTreeSet::new();
    for u in &set {
        for v in &set {
            if u != v {
                if let Some(h) = u.half_difference(v) {
                    cands.insert(h);
                }
            }
        }
        cands.insert(u.clone());
        cands.insert(u.neg());
    }
    cands.remove(&LatticeVector::zero(rank));
    // try the candidates with positive leading coordinate first
    let mut ordered: Vec<LatticeVector> = cands.into_iter().collect();
    ordered.reverse();
    for e in &ordered {
        if lattice.square(&e.0) != -1 {
            continue;
        }
        let shifts: BTreeSet<LatticeVector> = set
            .iter()
            .filter(|b| set.contains(&b.sub(&e.scale(2))))
            .map(|b| b.sub(e))
            .collect();
        let covered: BTreeSet<LatticeVector> = shifts.iter().flat_map(|k| [k.add(e), k.sub(e)]).collect();
        if covered == set {
            return Ok(MinimalityVerdict::PairingFound { exceptional: e.clone(), shifts: shifts.into_iter().collect() });
        }
    }
    Ok(MinimalityVerdict::NoExceptionalPairing {
        candidates: ordered.into_iter().map(|e| {
            let s = lattice.square(&e.0);
            (e, s)
        }).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn homology_examples() {
        // 0-framed trefoil
        let h = homology(&HandleDecomposition::two_handles(m(&[&[0]])).unwrap());
        assert_eq!(h.boundary_h1.to_string(), "Z");
        assert_eq!(h.h2_rank, 1);
        // lens space
        let h = homology(&HandleDecomposition::two_handles(m(&[&[5]])).unwrap());
        assert_eq!(h.boundary_h1.to_string(), "Z/5");
        // cancelling pair
        for k in -3..=3 {
            let d = HandleDecomposition::new(1, m(&[&[k]]), m(&[&[1]])).unwrap();
            let h = homology(&d);
            assert!(h.h1.is_trivial() && h.boundary_h1.is_trivial());
            assert_eq!(h.h2_rank, 0);
        }
        // a 2-handle running twice over a 1-handle
        let d = HandleDecomposition::new(1, m(&[&[0]]), m(&[&[2]])).unwrap();
        assert_eq!(homology(&d).h1.to_string(), "Z/2");
        assert!(matches!(
            HandleDecomposition::new(2, m(&[&[1]]), m(&[&[1]])),
            Err(FourManError::DimensionMismatch(_))
        ));
        assert_eq!(
            HandleDecomposition::two_handles(m(&[&[0, 1], &[2, 0]])),
            Err(FourManError::NotSymmetric)
        );
    }

    #[test]
    fn handle_json() {
        let h: HandleDecomposition =
            serde_json::from_str(r#"{"one_handles":1,"Q":[[0,0],[0,0]],"B":[[1],[0]]}"#).unwrap();
        let r = homology(&h);
        assert!(r.h1.is_trivial());
        assert_eq!(r.h2_rank, 1);
        let bad = serde_json::from_str::<HandleDecomposition>(r#"{"one_handles":2,"Q":[[1]],"B":[[1]]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn invariants_examples() {
        let h = GramForm::hyperbolic().invariants();
        assert_eq!((h.rank, h.signature, h.parity), (2, 0, Parity::Even));
        assert!(h.is_unimodular());
        assert_eq!(h.definiteness, Definiteness::Indefinite);
        let d = GramForm::diagonal(&[1, 1, -1, -1]).invariants();
        assert_eq!((d.rank, d.signature, d.parity), (4, 0, Parity::Odd));
        let e8 = GramForm::e8().invariants();
        assert_eq!((e8.rank, e8.signature, e8.parity), (8, 8, Parity::Even));
        assert!(e8.is_unimodular());
        let z = GramForm::diagonal(&[0, 3]).invariants();
        assert_eq!(z.definiteness, Definiteness::Degenerate);
        assert_eq!(z.signature, 1);
    }

    #[test]
    fn isomorphism_examples() {
        let two_h = GramForm::hyperbolic_sum(2);
        let odd = GramForm::diagonal(&[1, 1, -1, -1]);
        assert_eq!(forms_isomorphic(&two_h, &odd), Ok(FormVerdict::NotIsomorphic(FormObstruction::Parity)));
        let c = GramForm::hyperbolic().transform(&m(&[&[2, 1], &[1, 0]]));
        assert!(forms_isomorphic(&GramForm::hyperbolic(), &c).unwrap().is_isomorphic());
        let p = m(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        assert!(forms_isomorphic(&two_h, &two_h.transform(&p)).unwrap().is_isomorphic());
        assert!(matches!(
            forms_isomorphic(&GramForm::diagonal(&[2]), &GramForm::diagonal(&[2])),
            Err(FourManError::NonUnimodular(_))
        ));
        let big = GramForm::diagonal(&[1; 9]);
        assert_eq!(forms_isomorphic(&big, &big), Err(FourManError::DefiniteRankTooLarge(9)));
    }

    #[test]
    fn definite_search() {
        // E8 against a scrambled copy, and against the odd form I_8
        let e8 = GramForm::e8();
        let mut s = IntMatrix::identity(8);
        s[(0, 3)] = 1;
        s[(5, 1)] = -1;
        s[(7, 2)] = 1;
        let copy = e8.transform(&s);
        match forms_isomorphic(&e8, &copy).unwrap() {
            FormVerdict::Isomorphic { witness: Some(w) } => assert_eq!(w.congruence(e8.gram()), *copy.gram()),
            v => panic!("{v:?}"),
        }
        assert_eq!(
            forms_isomorphic(&e8, &GramForm::diagonal(&[1; 8])),
            Ok(FormVerdict::NotIsomorphic(FormObstruction::Parity))
        );
        let neg = GramForm::diagonal(&[-1, -1, -1]);
        let scrambled = neg.transform(&m(&[&[1, 1, 0], &[0, 1, 0], &[0, 1, 1]]));
        assert!(forms_isomorphic(&neg, &scrambled).unwrap().is_isomorphic());
        assert_eq!(vectors_of_norm(e8.gram(), 2).len(), 240);
    }

    #[test]
    fn moves() {
        let h = GramForm::hyperbolic();
        let up = h.apply(GramMove::BlowUp(-1)).unwrap();
        assert_eq!(up.labels().last().unwrap(), "E1");
        assert_eq!(up.invariants().signature, -1);
        assert_eq!(up.apply(GramMove::BlowDown(2)).unwrap(), h);
        assert!(matches!(h.apply(GramMove::BlowDown(0)), Err(FourManError::IllegalBlowDown { .. })));
        assert!(matches!(h.apply(GramMove::HandleSlide { i: 1, j: 1, sign: 1 }), Err(FourManError::IllegalSlide { .. })));
        let s = GramForm::hyperbolic_sum(2).apply(GramMove::HandleSlide { i: 0, j: 3, sign: -1 }).unwrap();
        assert!(forms_isomorphic(&s, &GramForm::hyperbolic_sum(2)).unwrap().is_isomorphic());
        // blowing down a non-orthogonal -1 vector
        let g = GramForm::new(m(&[&[-1, 2], &[2, 1]])).unwrap();
        let d = g.apply(GramMove::BlowDown(0)).unwrap();
        assert_eq!(d.gram(), &m(&[&[5]]));
        assert_eq!(d.invariants().signature, g.invariants().signature + 1);
    }

    #[test]
    fn doubles() {
        for n in 0..6 {
            let d = twisted_double(n);
            let even = d.form.invariants().parity == Parity::Even;
            assert_eq!(even, n % 2 == 0);
            assert_eq!(twist_extends(n).unwrap(), n % 2 == 0);
        }
        let mixed = ClosedManifold {
            name: "X".into(),
            form: GramForm::diagonal(&[1, -1]).direct_sum(&GramForm::hyperbolic()),
            simply_connected: true,
        };
        let hh = ClosedManifold { name: "Y".into(), form: GramForm::hyperbolic_sum(2), simply_connected: true };
        let v = homeomorphism_verdict(&mixed, &hh).unwrap();
        assert_eq!(v.obstruction, Some(FormObstruction::Parity));
        let loose = ClosedManifold { simply_connected: false, ..hh.clone() };
        assert_eq!(homeomorphism_verdict(&hh, &loose), Err(FourManError::NotSimplyConnected));
    }

    #[test]
    fn minimality() {
        let t = GramForm::with_labels(IntMatrix::zeros(2, 2), vec!["T1".into(), "T2".into()]).unwrap();
        let b = vec![LatticeVector(vec![1, 1]), LatticeVector(vec![-1, -1])];
        match minimality_obstruction(&t, &b).unwrap() {
            MinimalityVerdict::NoExceptionalPairing { candidates } => {
                assert!(candidates.contains(&(LatticeVector(vec![1, 1]), 0)));
            }
            v => panic!("{v:?}"),
        }
        let e = GramForm::with_labels(IntMatrix::diagonal(&[-1]), vec!["E".into()]).unwrap();
        assert_eq!(
            minimality_obstruction(&e, &[LatticeVector(vec![1]), LatticeVector(vec![-1])]),
            Ok(MinimalityVerdict::PairingFound {
                exceptional: LatticeVector(vec![1]),
                shifts: vec![LatticeVector(vec![0])]
            })
        );
        assert_eq!(minimality_obstruction(&t, &[]), Ok(MinimalityVerdict::Inconclusive));
        assert_eq!(
            minimality_obstruction(&t, &[LatticeVector(vec![1, 0])]),
            Err(FourManError::AsymmetricClassSet)
        );
        assert_eq!(LatticeVector(vec![1, -2]).display_with(&["T1".into(), "T2".into()]), "T1-2T2");
    }

    #[test]
    fn blown_up_classes_split() {
        // H + <-1> with classes {+-k +- e}
        let g = GramForm::hyperbolic().apply(GramMove::BlowUp(-1)).unwrap();
        let k = LatticeVector(vec![1, 1, 0]);
        let e = LatticeVector(vec![0, 0, 1]);
        let b = vec![k.add(&e), k.sub(&e), k.neg().add(&e), k.neg().sub(&e)];
        match minimality_obstruction(&g, &b).unwrap() {
            MinimalityVerdict::PairingFound { exceptional, shifts } => {
                assert_eq!(g.square(&exceptional.0), -1);
                assert_eq!(shifts.len(), 2);
            }
            v => panic!("{v:?}"),
        }
    }
}
