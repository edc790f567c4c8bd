//! Alexander matrices via Fox calculus and Alexander polynomials of knots
//! and links.
//!
//! For a knot the polynomial is a first minor of the Wirtinger Alexander
//! matrix. For a link with `mu >= 2` components, deleting the column of a
//! generator on component `k` gives `Delta * (t_k - 1)`, and the factor is
//! divided out exactly.

use thiserror::Error;

use crate::freegroup::{color_word, fox_derivative, FreeGroupError, GroupPresentation};
use crate::laurent::{LaurentError, LaurentPoly};
use crate::linkdiag::{wirtinger, DiagramError, PDCode, Wirtinger};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlexanderError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    FreeGroup(#[from] FreeGroupError),
    #[error("expected a knot, got {0} components")]
    NotAKnot(usize),
    #[error("expected at least two components, got {0}")]
    NotALink(usize),
    #[error("minor is not divisible by (t_{component} - 1); the diagram violates the Wirtinger conventions")]
    ExactDivisionFailed { component: usize },
    #[error("minors disagree up to units: {0} vs {1}")]
    DeletionDependence(String, String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlexanderMatrix {
    /// Rows indexed by relators, columns by generators.
    pub entries: Vec<Vec<LaurentPoly>>,
    pub coloring: Vec<LaurentPoly>,
    pub variables: Vec<String>,
}

impl AlexanderMatrix {
    pub fn nrows(&self) -> usize {
        self.entries.len()
    }

    pub fn ncols(&self) -> usize {
        self.coloring.len()
    }

    /// Determinant after removing the given rows and one column. Returns
    /// zero when too few rows remain to form a square minor.
    pub fn minor_det(&self, drop_rows: &[usize], drop_col: usize) -> Result<LaurentPoly, AlexanderError> {
        let rows: Vec<Vec<LaurentPoly>> = self
            .entries
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop_rows.contains(i))
            .map(|(_, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != drop_col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let n = self.ncols() - 1;
        if rows.len() < n {
            return Ok(LaurentPoly::zero(&self.variables));
        }
        if rows.len() > n {
            return Err(AlexanderError::NotSquare(rows.len(), n));
        }
        Ok(determinant(rows, &self.variables))
    }

    /// Rows to drop so that a first minor is square.
    fn surplus_rows(&self, keep_from_end: bool) -> Vec<usize> {
        let excess = self.nrows().saturating_sub(self.ncols().saturating_sub(1));
        if keep_from_end {
            (0..excess).collect()
        } else {
            (self.nrows() - excess..self.nrows()).collect()
        }
    }
}

pub fn alexander_matrix(p: &GroupPresentation, coloring: &[LaurentPoly]) -> Result<AlexanderMatrix, AlexanderError> {
    if coloring.len() != p.ngens() {
        return Err(FreeGroupError::ColoringLength { got: coloring.len(), expected: p.ngens() }.into());
    }
    let variables = coloring
        .first()
        .map(|c| c.variables().to_vec())
        .unwrap_or_default();
    let entries = p
        .relators()
        .iter()
        .map(|r| {
            (0..p.ngens())
                .map(|g| fox_derivative(r, g, coloring))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AlexanderMatrix { entries, coloring: coloring.to_vec(), variables })
}

/// Fraction-free (Bareiss) determinant over the Laurent ring.
pub fn determinant(mut a: Vec<Vec<LaurentPoly>>, vars: &[String]) -> LaurentPoly {
    let n = a.len();
    if n == 0 {
        return LaurentPoly::one(vars);
    }
    let mut negate = false;
    let mut prev = LaurentPoly::one(vars);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return LaurentPoly::zero(vars);
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev).expect("Bareiss quotients are exact");
            }
            a[i][k] = LaurentPoly::zero(vars);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

pub fn wirtinger_matrix(pd: &PDCode) -> Result<(Wirtinger, AlexanderMatrix), AlexanderError> {
    let w = wirtinger(pd)?;
    let m = alexander_matrix(&w.group, &w.coloring)?;
    Ok((w, m))
}

/// Alexander polynomial of a knot diagram, in unit-normal form.
pub fn knot_alexander(pd: &PDCode) -> Result<LaurentPoly, AlexanderError> {
    if pd.num_components() != 1 {
        return Err(AlexanderError::NotAKnot(pd.num_components()));
    }
    let (_, m) = wirtinger_matrix(pd)?;
    let last = m.ncols() - 1;
    let d = m.minor_det(&m.surplus_rows(false), last)?;
    if m.ncols() > 1 {
        let check = m.minor_det(&m.surplus_rows(true), 0)?;
        if !d.associates(&check) {
            return Err(AlexanderError::DeletionDependence(d.to_string(), check.to_string()));
        }
    }
    Ok(d.normalize_units())
}

/// Multivariable Alexander polynomial of a link with at least two
/// components, in unit-normal form. Every column deletion is checked.
pub fn link_alexander(pd: &PDCode) -> Result<LaurentPoly, AlexanderError> {
    let mu = pd.num_components();
    if mu < 2 {
        return Err(AlexanderError::NotALink(mu));
    }
    let (w, m) = wirtinger_matrix(pd)?;
    let drop = m.surplus_rows(false);
    let mut result: Option<LaurentPoly> = None;
    for j in 0..m.ncols() {
        let k = w.generator_component[j];
        let minor = m.minor_det(&drop, j)?;
        let factor = &LaurentPoly::var(&w.variables, k - 1) - &LaurentPoly::one(&w.variables);
        let q = minor
            .exact_div(&factor)
            .map_err(|_: LaurentError| AlexanderError::ExactDivisionFailed { component: k })?;
        match &result {
            None => result = Some(q),
            Some(r) if r.associates(&q) => {}
            Some(r) => return Err(AlexanderError::DeletionDependence(r.to_string(), q.to_string())),
        }
    }
    Ok(result.expect("links have generators").normalize_units())
}

/// Single-variable Alexander polynomial: `(t - 1) * Delta(t, ..., t)` for
/// links, `Delta` itself for knots.
pub fn single_variable(delta: &LaurentPoly) -> LaurentPoly {
    let mu = delta.nvars();
    let t = ["t"];
    let img = vec![vec![1]; mu];
    let d = delta.substitute_monomials(&t, &img);
    if mu <= 1 {
        return d.normalize_units();
    }
    let factor = LaurentPoly::parse_with_vars("t - 1", &t).unwrap();
    (&factor * &d).normalize_units()
}

/// Checks the row identity `sum_j A_ij (c(g_j) - 1) = c(r_i) - 1`.
pub fn fundamental_identity_holds(p: &GroupPresentation, m: &AlexanderMatrix) -> bool {
    let one = LaurentPoly::one(&m.variables);
    p.relators().iter().zip(&m.entries).all(|(r, row)| {
        let lhs = row
            .iter()
            .zip(&m.coloring)
            .fold(LaurentPoly::zero(&m.variables), |acc, (a, c)| &acc + &(a * &(c - &one)));
        lhs == &color_word(r, &m.coloring) - &one
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::Word;
    use crate::linkdiag::{hopf_link, split_unlink, trefoil, unknot};

    fn poly(s: &str, vars: &[&str]) -> LaurentPoly {
        LaurentPoly::parse_with_vars(s, vars).unwrap()
    }

    #[test]
    fn trefoil_matrix_rows() {
        let (w, m) = wirtinger_matrix(&trefoil()).unwrap();
        assert!(fundamental_identity_holds(&w.group, &m));
        let t = ["t"];
        let mut expected = vec![poly("1 - t", &t), poly("t", &t), poly("-1", &t)];
        expected.sort_by_key(|p| p.to_string());
        for row in &m.entries {
            let mut r = row.clone();
            r.sort_by_key(|p| p.to_string());
            assert_eq!(r, expected);
        }
    }

    #[test]
    fn commutator_matrix() {
        let p = GroupPresentation::new(
            vec!["x".into(), "y".into()],
            vec![Word::commutator(&Word::generator(0), &Word::generator(1))],
        )
        .unwrap();
        let v = ["t1", "t2"];
        let col = vec![LaurentPoly::var(&v, 0), LaurentPoly::var(&v, 1)];
        let m = alexander_matrix(&p, &col).unwrap();
        assert_eq!(m.entries, vec![vec![poly("1 - t2", &v), poly("t1 - 1", &v)]]);
        // dropping the y column leaves 1 - t2 = -(t2 - 1)
        let minor = m.minor_det(&[], 1).unwrap();
        assert!(minor.exact_div(&poly("t2 - 1", &v)).unwrap().associates(&LaurentPoly::one(&v)));

        let free = GroupPresentation::new(vec!["x".into()], vec![]).unwrap();
        let m = alexander_matrix(&free, &[LaurentPoly::var(&["t"], 0)]).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (0, 1));
    }

    #[test]
    fn small_knots_and_links() {
        assert!(knot_alexander(&unknot()).unwrap().is_one());
        assert_eq!(knot_alexander(&trefoil()).unwrap(), poly("t^2 - t + 1", &["t"]));
        assert!(link_alexander(&hopf_link()).unwrap().is_one());
        assert!(link_alexander(&split_unlink()).unwrap().is_zero());
        assert_eq!(knot_alexander(&hopf_link()), Err(AlexanderError::NotAKnot(2)));
        assert_eq!(link_alexander(&trefoil()), Err(AlexanderError::NotALink(1)));
    }

    #[test]
    fn determinant_small() {
        let t = vec!["t".to_string()];
        let a = vec![
            vec![poly("t", &["t"]), poly("1", &["t"])],
            vec![poly("1", &["t"]), poly("t", &["t"])],
        ];
        assert_eq!(determinant(a, &t), poly("t^2 - 1", &["t"]));
        let z = vec![
            vec![poly("0", &["t"]), poly("1", &["t"])],
            vec![poly("1", &["t"]), poly("0", &["t"])],
        ];
        assert_eq!(determinant(z, &t), poly("-1", &["t"]));
    }

    #[test]
    fn single_variable_reduction() {
        let v = ["t1", "t2"];
        // Hopf link: (t - 1) * 1
        assert_eq!(single_variable(&LaurentPoly::one(&v)), poly("t - 1", &["t"]).normalize_units());
    }
}
