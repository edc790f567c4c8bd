//! Free groups, finite presentations and Fox free differential calculus.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::matrix::{smith_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeGroupError {
    #[error("generator index {0} out of range for {1} generators")]
    GeneratorOutOfRange(usize, usize),
    #[error("unknown generator or macro in {0:?}")]
    UnknownName(String),
    #[error("word parse error at byte {pos} in {text:?}: {msg}")]
    Parse { text: String, pos: usize, msg: String },
    #[error("macro expansion too deep (cyclic macro {0}?)")]
    MacroDepth(String),
    #[error("coloring of generator {0} is not a unit monomial")]
    NonMonomialColoring(usize),
    #[error("coloring has {got} entries, expected {expected}")]
    ColoringLength { got: usize, expected: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Self { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Self { gen: self.gen, inverse: !self.inverse }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// Freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Self(vec![Letter::new(g, false)])
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Self::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// From signed 1-based generator codes, e.g. `[1, -2]` is `x0 x1^-1`.
    pub fn from_signed(codes: &[i32]) -> Self {
        Self::from_letters(codes.iter().map(|&c| {
            assert!(c != 0, "generator codes are 1-based");
            Letter::new(c.unsigned_abs() as usize - 1, c < 0)
        }))
    }

    fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inv()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Self::identity(), |acc, _| acc.concat(&base))
    }

    /// `[u, v] = u v u^-1 v^-1`
    pub fn commutator(u: &Self, v: &Self) -> Self {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    /// `v^-1 u v`
    pub fn conjugate_by(&self, v: &Self) -> Self {
        v.inverse().concat(self).concat(v)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    pub fn exponent_vector(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0; ngens];
        for l in &self.0 {
            v[l.gen] += l.exponent();
        }
        v
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        WordDisplay { word: self, names }
    }
}

struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return f.write_str("1");
        }
        for (k, l) in self.word.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            let name = self.names.get(l.gen).cloned().unwrap_or_else(|| format!("x{}", l.gen));
            f.write_str(&name)?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, FreeGroupError> {
        let n = generators.len();
        for r in &relators {
            if let Some(g) = r.max_generator().filter(|&g| g >= n) {
                return Err(FreeGroupError::GeneratorOutOfRange(g, n));
            }
        }
        Ok(Self { generators, relators })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Relator exponent vectors as matrix rows.
    pub fn relation_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| r.exponent_vector(self.ngens()))
            .collect();
        let mut m = IntMatrix::zeros(rows.len(), self.ngens());
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn abelianize(&self) -> AbelianGroup {
        AbelianGroup::from_relations(&self.relation_matrix())
    }

    /// Whether `u` and `v` have the same image in the abelianization.
    pub fn h1_equal(&self, u: &Word, v: &Word) -> bool {
        let n = self.ngens();
        let diff: Vec<i64> = u
            .exponent_vector(n)
            .iter()
            .zip(v.exponent_vector(n))
            .map(|(a, b)| a - b)
            .collect();
        self.abelianize().is_zero(&diff)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, FreeGroupError> {
        parse_word(text, &self.generators, &BTreeMap::new())
    }

    pub fn from_json(s: &str) -> Result<Self, PresentationLoadError> {
        let raw: PresentationJson = serde_json::from_str(s)?;
        Ok(raw.build()?)
    }
}

#[derive(Debug, Error)]
pub enum PresentationLoadError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Word(#[from] FreeGroupError),
}

/// On-disk presentation. Macros are expanded before the relators are parsed.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    #[serde(default)]
    pub macros: BTreeMap<String, String>,
}

impl PresentationJson {
    pub fn build(&self) -> Result<GroupPresentation, FreeGroupError> {
        let relators = self
            .relators
            .iter()
            .map(|r| parse_word(r, &self.generators, &self.macros))
            .collect::<Result<Vec<_>, _>>()?;
        GroupPresentation::new(self.generators.clone(), relators)
    }
}

/// Finitely generated abelian group `Z^r + Z/d_1 + ... + Z/d_k`, together with
/// the coordinate change that projects generator exponent vectors onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// `d_i >= 2`, `d_i | d_{i+1}`.
    pub torsion: Vec<i64>,
    // x -> x * change, then coordinate i lives in Z/diag[i] (0 means Z)
    change: IntMatrix,
    diag: Vec<i64>,
}

impl AbelianGroup {
    /// `Z^n / rowspace(relations)` with `n = relations.ncols()`.
    pub fn from_relations(relations: &IntMatrix) -> Self {
        let n = relations.ncols();
        let snf = smith_normal_form(relations);
        let factors = snf.invariant_factors();
        let mut diag = vec![0; n];
        diag[..factors.len()].copy_from_slice(&factors);
        Self {
            free_rank: n - factors.len(),
            torsion: factors.iter().copied().filter(|&d| d > 1).collect(),
            change: snf.right,
            diag,
        }
    }

    pub fn trivial() -> Self {
        Self::from_relations(&IntMatrix::zeros(0, 0))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn order(&self) -> Option<i64> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Coordinates in `Z/d_i` (reduced) and `Z` summands, in SNF order.
    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        let x = self.change.left_apply(v);
        x.iter()
            .zip(&self.diag)
            .filter(|(_, &d)| d != 1)
            .map(|(&c, &d)| if d == 0 { c } else { c.rem_euclid(d) })
            .collect()
    }

    pub fn is_zero(&self, v: &[i64]) -> bool {
        self.project(v).iter().all(|&c| c == 0)
    }

    pub fn same_isomorphism_type(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Fox derivative `d w / d x_gen`, evaluated through a coloring that sends
/// every generator to a unit monomial.
pub fn fox_derivative(
    w: &Word,
    gen: usize,
    coloring: &[LaurentPoly],
) -> Result<LaurentPoly, FreeGroupError> {
    let vars = coloring
        .first()
        .map(|c| c.variables().to_vec())
        .unwrap_or_default();
    for (i, c) in coloring.iter().enumerate() {
        if !c.is_unit() {
            return Err(FreeGroupError::NonMonomialColoring(i));
        }
    }
    if let Some(g) = w.max_generator().filter(|&g| g >= coloring.len()) {
        return Err(FreeGroupError::GeneratorOutOfRange(g, coloring.len()));
    }
    let inverses: Vec<LaurentPoly> = coloring.iter().map(unit_inverse).collect();
    let mut prefix = LaurentPoly::one(&vars);
    let mut acc = LaurentPoly::zero(&vars);
    for l in w.letters() {
        if l.inverse {
            prefix = &prefix * &inverses[l.gen];
            if l.gen == gen {
                acc = &acc - &prefix;
            }
        } else {
            if l.gen == gen {
                acc = &acc + &prefix;
            }
            prefix = &prefix * &coloring[l.gen];
        }
    }
    Ok(acc)
}

/// Image of a word under a unit-monomial coloring.
pub fn color_word(w: &Word, coloring: &[LaurentPoly]) -> LaurentPoly {
    let vars = coloring
        .first()
        .map(|c| c.variables().to_vec())
        .unwrap_or_default();
    w.letters().iter().fold(LaurentPoly::one(&vars), |acc, l| {
        if l.inverse {
            &acc * &unit_inverse(&coloring[l.gen])
        } else {
            &acc * &coloring[l.gen]
        }
    })
}

fn unit_inverse(u: &LaurentPoly) -> LaurentPoly {
    // (±x^v)^-1 = ±x^-v
    u.invert_variables()
}

const MAX_MACRO_DEPTH: usize = 16;

/// Parse a word such as `a[f,c^-1]`, `(Xb)^-1 a X b` or `f^-1 Y X`.
/// Identifier runs are split greedily into known generator and macro names.
pub fn parse_word(
    text: &str,
    generators: &[String],
    macros: &BTreeMap<String, String>,
) -> Result<Word, FreeGroupError> {
    let mut p = WordParser { text, pos: 0, generators, macros, depth: 0 };
    let w = p.word()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(w)
}

struct WordParser<'a> {
    text: &'a str,
    pos: usize,
    generators: &'a [String],
    macros: &'a BTreeMap<String, String>,
    depth: usize,
}

impl WordParser<'_> {
    fn error(&self, msg: &str) -> FreeGroupError {
        FreeGroupError::Parse { text: self.text.to_string(), pos: self.pos, msg: msg.to_string() }
    }

    fn bytes(&self) -> &[u8] {
        self.text.as_bytes()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len()
            && (self.bytes()[self.pos].is_ascii_whitespace() || matches!(self.bytes()[self.pos], b'*' | b'.'))
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes().get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Word, FreeGroupError> {
        let mut w = Word::identity();
        while let Some(c) = self.peek() {
            if c == b')' || c == b']' || c == b',' {
                break;
            }
            for f in self.factor()? {
                w = w.concat(&f);
            }
        }
        Ok(w)
    }

    // An identifier run may expand to several factors; the exponent binds to the last.
    fn factor(&mut self) -> Result<Vec<Word>, FreeGroupError> {
        let mut atoms = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.int()?;
            let last = atoms.pop().expect("atom is nonempty");
            atoms.push(last.pow(k));
        }
        Ok(atoms)
    }

    fn int(&mut self) -> Result<i32, FreeGroupError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes().get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.text.len() && self.bytes()[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error("expected integer exponent"))
    }

    fn atom(&mut self) -> Result<Vec<Word>, FreeGroupError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(vec![w])
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b',')?;
                let v = self.word()?;
                self.expect(b']')?;
                Ok(vec![Word::commutator(&u, &v)])
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(vec![Word::identity()])
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.text.len()
                    && (self.bytes()[self.pos].is_ascii_alphanumeric() || self.bytes()[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let run = &self.text[start..self.pos];
                self.split_identifiers(run)
            }
            _ => Err(self.error("expected a generator, '(' or '['")),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), FreeGroupError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn split_identifiers(&self, run: &str) -> Result<Vec<Word>, FreeGroupError> {
        let mut out = Vec::new();
        let mut rest = run;
        while !rest.is_empty() {
            let best = self
                .generators
                .iter()
                .chain(self.macros.keys())
                .filter(|name| rest.starts_with(name.as_str()))
                .max_by_key(|name| name.len())
                .ok_or_else(|| FreeGroupError::UnknownName(rest.to_string()))?;
            if let Some(g) = self.generators.iter().position(|n| n == best) {
                out.push(Word::generator(g));
            } else {
                if self.depth >= MAX_MACRO_DEPTH {
                    return Err(FreeGroupError::MacroDepth(best.clone()));
                }
                let body = &self.macros[best];
                let mut inner = WordParser {
                    text: body,
                    pos: 0,
                    generators: self.generators,
                    macros: self.macros,
                    depth: self.depth + 1,
                };
                let w = inner.word()?;
                inner.skip_ws();
                if inner.pos != body.len() {
                    return Err(inner.error("unexpected character in macro body"));
                }
                out.push(w);
            }
            rest = &rest[best.len()..];
        }
        Ok(out)
    }
}

/// Presentation of the fundamental group of the plug boundary, generators
/// `a, b, c, d, f` with `X = [b^-1, d]`, `Y = [a^-1, c]`.
pub fn plug_boundary_json() -> PresentationJson {
    PresentationJson {
        generators: ["a", "b", "c", "d", "f"].map(String::from).to_vec(),
        relators: ["[f,b^-1]", "[f,a^-1]", "a[f,c^-1]", "b[f,d^-1]", "f^-1 Y X"]
            .map(String::from)
            .to_vec(),
        macros: [("X", "[b^-1,d]"), ("Y", "[a^-1,c]")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
    }
}

pub fn plug_boundary_presentation() -> GroupPresentation {
    plug_boundary_json().build().expect("built-in presentation parses")
}

/// Images of `a, b, c, d, f` under the boundary diffeomorphism of the plug.
pub fn phi_induced_images() -> Vec<Word> {
    let json = plug_boundary_json();
    [
        "(Xb)^-1 a X b",
        "b",
        "(Xb)^-1 a (Xb) a^-1 c (Xb)",
        "d (Xd)^-1 a (Xd)",
        "f",
    ]
    .iter()
    .map(|s| parse_word(s, &json.generators, &json.macros).expect("built-in word parses"))
    .collect()
}
