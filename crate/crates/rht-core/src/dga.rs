//! Finitely generated free graded-commutative differential algebras over the
//! rationals, with generators in degrees >= 2: monomial bases per degree,
//! Leibniz differentials, degreewise cohomology, morphisms, and the text
//! expression grammar used for serialized models.
//!
//! Elements are sorted monomial -> coefficient maps. A monomial is a sorted
//! list of generator indices (repeats encode powers); odd generators never
//! repeat. Koszul signs for reordering are fixed by generator order.

use crate::qcore::{kernel_basis, rat_from_str, rat_to_string, QMatrix, QVector, Rat};
use num::{One, Zero};
use std::cell::RefCell;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

/// Sorted generator indices with multiplicity.
pub type Monomial = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DgaElement {
    terms: BTreeMap<Monomial, Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DgaError {
    #[error("generator degree must be at least 2: `{0}`")]
    DegreeTooSmall(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("differential of `{name}` has degree {got}, expected {expected}")]
    BadDiffDegree {
        name: String,
        got: String,
        expected: usize,
    },
    #[error("d^2 is nonzero on generator `{0}`")]
    SquareNonzero(String),
    #[error("expression parse error: {0}")]
    Parse(String),
    #[error("morphism does not commute with differentials on `{0}`")]
    NotChainMap(String),
}

impl DgaElement {
    pub fn zero() -> Self {
        DgaElement::default()
    }

    pub fn one() -> Self {
        let mut e = Self::zero();
        e.insert(Vec::new(), Rat::one());
        e
    }

    pub fn generator(i: usize) -> Self {
        let mut e = Self::zero();
        e.insert(vec![i], Rat::one());
        e
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut e = Self::zero();
        e.insert(m, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    fn insert(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &DgaElement) -> DgaElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DgaElement) -> DgaElement {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> DgaElement {
        if c.is_zero() {
            return DgaElement::zero();
        }
        DgaElement {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }
}

/// Merges two sorted monomials with the Koszul sign determined by the
/// generators' degrees; `None` when an odd generator repeats.
fn mul_monomials(gens: &[Generator], a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut neg = false;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            if a[i] == b[j] && gens[a[i]].degree % 2 == 1 {
                return None;
            }
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] moves left past a[i..]; count odd-odd transpositions
            if gens[b[j]].degree % 2 == 1 {
                let odd_passed = a[i..].iter().filter(|&&g| gens[g].degree % 2 == 1).count();
                if odd_passed % 2 == 1 {
                    neg = !neg;
                }
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, neg))
}

/// A free graded-commutative DGA on named generators of degree >= 2.
#[derive(Debug)]
pub struct FreeDga {
    gens: Vec<Generator>,
    diff: Vec<DgaElement>,
    minimal: bool,
    basis_cache: RefCell<BTreeMap<usize, Vec<Monomial>>>,
}

impl Clone for FreeDga {
    fn clone(&self) -> Self {
        FreeDga {
            gens: self.gens.clone(),
            diff: self.diff.clone(),
            minimal: self.minimal,
            basis_cache: RefCell::new(self.basis_cache.borrow().clone()),
        }
    }
}

impl PartialEq for FreeDga {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.diff == other.diff
    }
}

impl FreeDga {
    /// Builds the algebra and verifies degrees and d^2 = 0 on generators.
    pub fn new(gens: Vec<Generator>, diff: Vec<DgaElement>) -> Result<Self, DgaError> {
        assert_eq!(gens.len(), diff.len(), "one differential per generator");
        let mut seen = std::collections::HashSet::new();
        for g in &gens {
            if g.degree < 2 {
                return Err(DgaError::DegreeTooSmall(g.name.clone()));
            }
            if !seen.insert(g.name.clone()) {
                return Err(DgaError::DuplicateName(g.name.clone()));
            }
        }
        let a = FreeDga {
            gens,
            diff,
            minimal: false,
            basis_cache: RefCell::new(BTreeMap::new()),
        };
        for (i, g) in a.gens.iter().enumerate() {
            let dg = &a.diff[i];
            if !dg.is_zero() {
                match a.degree_of(dg) {
                    Some(d) if d == g.degree + 1 => {}
                    d => {
                        return Err(DgaError::BadDiffDegree {
                            name: g.name.clone(),
                            got: d.map_or("mixed".to_string(), |x| x.to_string()),
                            expected: g.degree + 1,
                        })
                    }
                }
            }
            if !a.differential(dg).is_zero() {
                return Err(DgaError::SquareNonzero(g.name.clone()));
            }
        }
        let minimal = a
            .diff
            .iter()
            .all(|d| d.terms.keys().all(|m| m.len() >= 2));
        Ok(FreeDga { minimal, ..a })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator_diff(&self, i: usize) -> &DgaElement {
        &self.diff[i]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Number of generators of each degree up to `max_degree`.
    pub fn generator_counts(&self, max_degree: usize) -> Vec<usize> {
        let mut counts = vec![0; max_degree + 1];
        for g in &self.gens {
            if g.degree <= max_degree {
                counts[g.degree] += 1;
            }
        }
        counts
    }

    /// Every generator's differential is decomposable.
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn monomial_degree(&self, m: &Monomial) -> usize {
        m.iter().map(|&i| self.gens[i].degree).sum()
    }

    /// Degree when homogeneous (`None` for mixed, `Some(0)` for constants).
    pub fn degree_of(&self, e: &DgaElement) -> Option<usize> {
        let mut degs = e.terms.keys().map(|m| self.monomial_degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn mul(&self, a: &DgaElement, b: &DgaElement) -> DgaElement {
        let mut out = DgaElement::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((m, neg)) = mul_monomials(&self.gens, ma, mb) {
                    let c = if neg { -(ca * cb) } else { ca * cb };
                    out.insert(m, c);
                }
            }
        }
        out
    }

    /// Leibniz extension of the generator differentials.
    pub fn differential(&self, e: &DgaElement) -> DgaElement {
        let mut out = DgaElement::zero();
        for (m, c) in &e.terms {
            for (pos, &gi) in m.iter().enumerate() {
                // skip repeated positions: d hits each distinct factor once
                // per occurrence, which the loop already provides
                let dg = &self.diff[gi];
                if dg.is_zero() {
                    continue;
                }
                let prefix: Monomial = m[..pos].to_vec();
                let suffix: Monomial = m[pos + 1..].to_vec();
                let prefix_deg: usize = prefix.iter().map(|&i| self.gens[i].degree).sum();
                let sign = if prefix_deg % 2 == 1 {
                    -Rat::one()
                } else {
                    Rat::one()
                };
                let rest = self.mul(
                    &DgaElement::monomial(prefix, c * sign),
                    &self.mul(dg, &DgaElement::monomial(suffix, Rat::one())),
                );
                out = out.add(&rest);
            }
        }
        out
    }

    /// All monomials of total degree m, square-free in odd generators,
    /// lexicographic in generator order.
    pub fn monomial_basis(&self, m: usize) -> Vec<Monomial> {
        if let Some(b) = self.basis_cache.borrow().get(&m) {
            return b.clone();
        }
        let mut out = Vec::new();
        let mut cur: Monomial = Vec::new();
        self.basis_rec(0, m, &mut cur, &mut out);
        self.basis_cache.borrow_mut().insert(m, out.clone());
        out
    }

    fn basis_rec(&self, start: usize, remaining: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..self.gens.len() {
            let d = self.gens[i].degree;
            if d > remaining {
                continue;
            }
            cur.push(i);
            let next_start = if d % 2 == 1 { i + 1 } else { i };
            self.basis_rec(next_start, remaining - d, cur, out);
            cur.pop();
        }
    }

    /// Coordinates of a homogeneous element in the degree-m monomial basis.
    pub fn to_vector(&self, e: &DgaElement, m: usize) -> QVector {
        let basis = self.monomial_basis(m);
        let pos: BTreeMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut v = vec![Rat::zero(); basis.len()];
        for (mono, c) in &e.terms {
            let i = *pos.get(mono).expect("element lives in degree m");
            v[i] = c.clone();
        }
        v
    }

    pub fn from_vector(&self, v: &[Rat], m: usize) -> DgaElement {
        let basis = self.monomial_basis(m);
        assert_eq!(v.len(), basis.len());
        let mut e = DgaElement::zero();
        for (mono, c) in basis.into_iter().zip(v) {
            e.insert(mono, c.clone());
        }
        e
    }

    /// Matrix of d: degree m -> m+1 in the monomial bases.
    pub fn differential_matrix(&self, m: usize) -> QMatrix {
        let src = self.monomial_basis(m);
        let rows = self.monomial_basis(m + 1).len();
        let cols: Vec<QVector> = src
            .iter()
            .map(|mono| {
                let d = self.differential(&DgaElement::monomial(mono.clone(), Rat::one()));
                self.to_vector(&d, m + 1)
            })
            .collect();
        QMatrix::from_cols(&cols, rows)
    }

    /// Dimension and canonical representatives of H^m.
    pub fn cohomology(&self, m: usize) -> (usize, Vec<DgaElement>) {
        let ker = kernel_basis(&self.differential_matrix(m));
        let image: Vec<QVector> = if m == 0 {
            Vec::new()
        } else {
            let d = self.differential_matrix(m - 1);
            (0..d.cols()).map(|j| d.col(j)).collect()
        };
        let chosen = crate::qcore::complete_basis(&image, &ker).expect("dimensions agree");
        let reps: Vec<DgaElement> = chosen
            .into_iter()
            .map(|i| self.from_vector(&ker[i], m))
            .collect();
        (reps.len(), reps)
    }

    /// Expression text: terms `coeff*name^k*...` joined by ` + `; `0` if zero.
    pub fn to_expr(&self, e: &DgaElement) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in &e.terms {
            let mut factors = vec![rat_to_string(c)];
            let mut i = 0;
            while i < m.len() {
                let g = m[i];
                let mut k = 1;
                while i + k < m.len() && m[i + k] == g {
                    k += 1;
                }
                if k == 1 {
                    factors.push(self.gens[g].name.clone());
                } else {
                    factors.push(format!("{}^{}", self.gens[g].name, k));
                }
                i += k;
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }

    /// Parses the grammar produced by `to_expr`.
    pub fn parse_expr(&self, s: &str) -> Result<DgaElement, DgaError> {
        let s = s.trim();
        if s == "0" {
            return Ok(DgaElement::zero());
        }
        let mut out = DgaElement::zero();
        for term in s.split('+') {
            let mut mono: Monomial = Vec::new();
            let mut coeff = Rat::one();
            for (fi, factor) in term.trim().split('*').enumerate() {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(DgaError::Parse(format!("empty factor in `{term}`")));
                }
                if fi == 0 && factor.chars().next().is_some_and(|c| c.is_ascii_digit() || c == '-') {
                    coeff = rat_from_str(factor)
                        .ok_or_else(|| DgaError::Parse(format!("bad coefficient `{factor}`")))?;
                    continue;
                }
                let (name, power) = match factor.split_once('^') {
                    Some((n, p)) => (
                        n,
                        p.parse::<usize>()
                            .map_err(|_| DgaError::Parse(format!("bad power in `{factor}`")))?,
                    ),
                    None => (factor, 1),
                };
                let gi = self
                    .lookup(name)
                    .ok_or_else(|| DgaError::Parse(format!("unknown generator `{name}`")))?;
                mono.extend(std::iter::repeat_n(gi, power));
            }
            mono.sort_unstable();
            // reject odd squares instead of silently dropping them
            for w in mono.windows(2) {
                if w[0] == w[1] && self.gens[w[0]].degree % 2 == 1 {
                    return Err(DgaError::Parse(format!(
                        "odd generator `{}` squared",
                        self.gens[w[0]].name
                    )));
                }
            }
            out.insert(mono, coeff);
        }
        Ok(out)
    }
}

/// A DGA morphism determined by generator images in the target algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct DgaMorphism {
    pub images: Vec<DgaElement>,
}

impl DgaMorphism {
    /// Checks degree preservation and d-commutation on every generator.
    pub fn new(
        source: &FreeDga,
        target: &FreeDga,
        images: Vec<DgaElement>,
    ) -> Result<Self, DgaError> {
        assert_eq!(images.len(), source.generators().len());
        let m = DgaMorphism { images };
        for (i, g) in source.generators().iter().enumerate() {
            if !m.images[i].is_zero() && target.degree_of(&m.images[i]) != Some(g.degree) {
                return Err(DgaError::BadDiffDegree {
                    name: g.name.clone(),
                    got: target
                        .degree_of(&m.images[i])
                        .map_or("mixed".into(), |d| d.to_string()),
                    expected: g.degree,
                });
            }
            let lhs = target.differential(&m.images[i]);
            let rhs = m.apply(source, target, source.generator_diff(i));
            if lhs != rhs {
                return Err(DgaError::NotChainMap(g.name.clone()));
            }
        }
        Ok(m)
    }

    /// Multiplicative extension to an arbitrary element.
    pub fn apply(&self, _source: &FreeDga, target: &FreeDga, e: &DgaElement) -> DgaElement {
        let mut out = DgaElement::zero();
        for (mono, c) in e.terms() {
            let mut acc = DgaElement::monomial(Vec::new(), c.clone());
            for &gi in mono {
                acc = target.mul(&acc, &self.images[gi]);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }
}

/// Convenience constructor used across tests and fixtures:
/// generators given as (name, degree), differentials as expression strings
/// parsed after all generators exist.
pub fn free_dga(gens: &[(&str, usize)], diffs: &[&str]) -> Result<FreeDga, DgaError> {
    let generators: Vec<Generator> = gens
        .iter()
        .map(|(n, d)| Generator {
            name: n.to_string(),
            degree: *d,
        })
        .collect();
    // two-phase: build with zero differentials to get a parser context
    let zero = vec![DgaElement::zero(); generators.len()];
    let proto = FreeDga::new(generators.clone(), zero)?;
    let diff: Result<Vec<DgaElement>, DgaError> =
        diffs.iter().map(|s| proto.parse_expr(s)).collect();
    FreeDga::new(generators, diff?)
}
