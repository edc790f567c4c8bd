//! Shared oracles and diagram catalogs for the integration tests.
#![allow(dead_code)]

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use kirbykit::alexander::{knot_alexander, link_alexander, wirtinger_matrix, AlexanderMatrix};
use kirbykit::freegroup::{color_word, fox_derivative, Letter, Word};
use kirbykit::laurent::LaurentPoly;
use kirbykit::linkdiag::{torus_link_2_2n, trefoil, twist_knot_with_clasp, two_braid_closure, unknot, Clasp, PDCode};
use kirbykit::matrix::IntMatrix;

/// Every freely reduced word of length at most `max_len` on `ngens` generators.
pub fn reduced_words(ngens: usize, max_len: usize) -> Vec<Word> {
    let letters: Vec<Letter> = (0..ngens).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect();
    let mut layer: Vec<Vec<Letter>> = vec![vec![]];
    let mut all = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last().is_some_and(|&last| last == l.inv()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        all.extend(next.iter().map(|v| Word::from_letters(v.iter().copied())));
        layer = next;
    }
    all
}

/// Checks `sum_j dw/dx_j (t_j - 1) = w - 1` on all reduced words over three
/// generators. Returns the number of words, or the count and first failure.
pub fn fox_identity_exhaustive(max_len: usize) -> Result<usize, (usize, String)> {
    let vars = ["t1", "t2", "t3"];
    let col: Vec<LaurentPoly> = (0..3).map(|i| LaurentPoly::var(&vars, i)).collect();
    let one = LaurentPoly::one(&vars);
    let words = reduced_words(3, max_len);
    for w in &words {
        let mut lhs = LaurentPoly::zero(&vars);
        for j in 0..3 {
            let d = fox_derivative(w, j, &col).unwrap();
            lhs = &lhs + &(&d * &(&col[j] - &one));
        }
        if lhs != &color_word(w, &col) - &one {
            return Err((words.len(), format!("{w:?}")));
        }
    }
    Ok(words.len())
}

/// Knot and link diagrams from the built-in families with parameter up to `n`.
pub fn all_diagrams_up_to(n: i64) -> Vec<(String, PDCode)> {
    let mut out = vec![("unknot".to_string(), unknot()), ("trefoil".to_string(), trefoil())];
    for k in 1..=n {
        out.push((format!("twist_knot({k})"), twist_knot_with_clasp(k, Clasp::Standard).unwrap()));
        out.push((format!("twist_knot_alt({k})"), twist_knot_with_clasp(k, Clasp::Alternate).unwrap()));
        out.push((format!("torus_link_2_2n({k})"), torus_link_2_2n(k).unwrap()));
        out.push((format!("two_braid_closure({k})"), two_braid_closure(k as usize)));
    }
    out
}

fn minor_choices(m: &AlexanderMatrix) -> Vec<(Vec<usize>, usize)> {
    // the Wirtinger matrix of a connected diagram is square
    let n = m.ncols();
    if m.nrows() == 0 {
        return vec![(vec![], 0)];
    }
    let mut v: Vec<(Vec<usize>, usize)> = (0..n).map(|j| (vec![m.nrows() - 1], j)).collect();
    v.extend((0..m.nrows()).map(|i| (vec![i], 0)));
    v
}

/// Inversion symmetry of the Alexander polynomial, and agreement of the
/// first minors over a spread of deleted rows and columns.
pub fn check_alexander_symmetry_and_deletion(pd: &PDCode) -> Result<(), String> {
    let (w, m) = wirtinger_matrix(pd).map_err(|e| e.to_string())?;
    let mu = pd.num_components();
    let delta = if mu == 1 { knot_alexander(pd) } else { link_alexander(pd) }.map_err(|e| e.to_string())?;
    if !delta.is_inversion_symmetric() {
        return Err(format!("not symmetric: {delta}"));
    }
    for (rows, col) in minor_choices(&m) {
        let minor = m.minor_det(&rows, col).map_err(|e| e.to_string())?;
        let q = if mu == 1 {
            minor
        } else {
            let k = w.generator_component[col];
            let f = &LaurentPoly::var(&w.variables, k - 1) - &LaurentPoly::one(&w.variables);
            minor.exact_div(&f).map_err(|e| format!("rows {rows:?} col {col}: {e}"))?
        };
        let agrees = if delta.is_zero() { q.is_zero() } else { q.associates(&delta) };
        if !agrees {
            return Err(format!("rows {rows:?} col {col}: {q} vs {delta}"));
        }
    }
    Ok(())
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of all
/// `k x k` minors and `s_k = d_k / d_(k-1)`.
pub fn determinantal_divisor_factors(a: &IntMatrix) -> Vec<i64> {
    let (r, c) = (a.nrows(), a.ncols());
    let mut prev = num_bigint::BigInt::from(1);
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut d = num_bigint::BigInt::zero();
        for rows in (0..r).combinations(k) {
            for cols in (0..c).combinations(k) {
                let drop_r: Vec<usize> = (0..r).filter(|i| !rows.contains(i)).collect();
                let drop_c: Vec<usize> = (0..c).filter(|j| !cols.contains(j)).collect();
                d = d.gcd(&a.minor(&drop_r, &drop_c).determinant());
            }
        }
        if d.is_zero() {
            break;
        }
        out.push((&d / &prev).to_i64().unwrap());
        prev = d;
    }
    out
}

pub fn poly(s: &str, vars: &[&str]) -> LaurentPoly {
    LaurentPoly::parse_with_vars(s, vars).unwrap()
}
