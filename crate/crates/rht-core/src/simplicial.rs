//! Finite simplicial sets in canonical Eilenberg-Zilber encoding, validation
//! of the simplicial identities, and normalized cochain complexes over the
//! rationals.
//!
//! A simplicial set is stored by its nondegenerate simplices only; every face
//! target is a `SimplexRef`, i.e. a (possibly empty) strictly decreasing
//! degeneracy word applied to a nondegenerate simplex. Face operators on
//! degenerate simplices are evaluated through the simplicial identities and
//! renormalized, so all comparisons happen in canonical form.

use crate::qcore::{kernel_basis, QMatrix, Rat};
use num::One;
use std::collections::HashMap;
use std::fmt;

/// Position of a nondegenerate simplex: (dimension, index within dimension).
pub type SimplexKey = (usize, usize);

/// A simplex in canonical form: iterated degeneracy of a nondegenerate one.
/// `degeneracies` is strictly decreasing; empty means nondegenerate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplexRef {
    pub degeneracies: Vec<usize>,
    pub target: SimplexKey,
}

impl SimplexRef {
    pub fn nondegenerate(target: SimplexKey) -> Self {
        SimplexRef {
            degeneracies: Vec::new(),
            target,
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.degeneracies.is_empty()
    }

    /// Dimension of the simplex this reference denotes.
    pub fn dim(&self) -> usize {
        self.target.0 + self.degeneracies.len()
    }
}

/// Rewrites `s_m . word` into canonical (strictly decreasing) form using
/// s_a s_b = s_{b+1} s_a for a <= b.
pub fn prepend_degeneracy(m: usize, word: &[usize]) -> Vec<usize> {
    match word.split_first() {
        None => vec![m],
        Some((&head, rest)) => {
            if m > head {
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(m);
                w.extend_from_slice(word);
                w
            } else {
                let mut w = prepend_degeneracy(m, rest);
                w.insert(0, head + 1);
                w
            }
        }
    }
}

/// Normalizes an arbitrary degeneracy word (operator order: leftmost applied
/// last) into the canonical strictly decreasing form.
pub fn normalize_degeneracy_word(word: &[usize]) -> Vec<usize> {
    let mut canon: Vec<usize> = Vec::new();
    for &j in word.iter().rev() {
        canon = prepend_degeneracy(j, &canon);
    }
    canon
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub simplex: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.simplex, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimplicialError {
    #[error("unknown simplex id `{0}`")]
    UnknownId(String),
    #[error("duplicate simplex id `{0}`")]
    DuplicateId(String),
    #[error("invalid simplicial set: {0}")]
    Invalid(String),
    #[error("degree out of range: {0}")]
    DegreeOutOfRange(isize),
}

/// Raw face table: per dimension, per simplex, the ordered list of
/// (degeneracy word, target id) pairs.
pub type RawFaces = Vec<Vec<Vec<(Vec<usize>, String)>>>;

/// A finite simplicial set: nondegenerate simplices per dimension with string
/// identifiers, and for every simplex of dimension >= 1 its ordered faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSimplicialSet {
    ids: Vec<Vec<String>>,
    index: HashMap<String, SimplexKey>,
    /// faces[n][i] holds the n+1 face references of the i-th n-simplex, n >= 1.
    faces: Vec<Vec<Vec<SimplexRef>>>,
}

impl FiniteSimplicialSet {
    /// Builds from raw data. Degeneracy words in face references are
    /// normalized; structural errors (unknown ids, bad dimensions) are hard
    /// errors while identity violations are reported by `validate`.
    pub fn new(
        ids: Vec<Vec<String>>,
        raw_faces: RawFaces,
    ) -> Result<Self, SimplicialError> {
        let mut index = HashMap::new();
        for (n, level) in ids.iter().enumerate() {
            for (i, id) in level.iter().enumerate() {
                if index.insert(id.clone(), (n, i)).is_some() {
                    return Err(SimplicialError::DuplicateId(id.clone()));
                }
            }
        }
        let dim = ids.len().saturating_sub(1);
        let mut faces: Vec<Vec<Vec<SimplexRef>>> = vec![Vec::new()];
        for n in 1..=dim {
            let level = raw_faces.get(n).ok_or_else(|| {
                SimplicialError::Invalid(format!("missing face table for dimension {n}"))
            })?;
            if level.len() != ids[n].len() {
                return Err(SimplicialError::Invalid(format!(
                    "face table for dimension {n} has {} entries, expected {}",
                    level.len(),
                    ids[n].len()
                )));
            }
            let mut out_level = Vec::with_capacity(level.len());
            for (i, fs) in level.iter().enumerate() {
                if fs.len() != n + 1 {
                    return Err(SimplicialError::Invalid(format!(
                        "simplex `{}` of dimension {n} has {} faces, expected {}",
                        ids[n][i],
                        fs.len(),
                        n + 1
                    )));
                }
                let mut refs = Vec::with_capacity(n + 1);
                for (word, target_id) in fs {
                    let &target = index
                        .get(target_id)
                        .ok_or_else(|| SimplicialError::UnknownId(target_id.clone()))?;
                    let degeneracies = normalize_degeneracy_word(word);
                    let r = SimplexRef {
                        degeneracies,
                        target,
                    };
                    if r.dim() + 1 != n {
                        return Err(SimplicialError::Invalid(format!(
                            "face of `{}` has dimension {}, expected {}",
                            ids[n][i],
                            r.dim(),
                            n - 1
                        )));
                    }
                    refs.push(r);
                }
                out_level.push(refs);
            }
            faces.push(out_level);
        }
        Ok(FiniteSimplicialSet { ids, index, faces })
    }

    /// Maximal nondegenerate dimension.
    pub fn dim(&self) -> usize {
        self.ids.len().saturating_sub(1)
    }

    pub fn count(&self, n: usize) -> usize {
        self.ids.get(n).map_or(0, |l| l.len())
    }

    pub fn total_count(&self) -> usize {
        self.ids.iter().map(|l| l.len()).sum()
    }

    pub fn id(&self, key: SimplexKey) -> &str {
        &self.ids[key.0][key.1]
    }

    pub fn lookup(&self, id: &str) -> Option<SimplexKey> {
        self.index.get(id).copied()
    }

    pub fn keys(&self, n: usize) -> impl Iterator<Item = SimplexKey> + '_ {
        (0..self.count(n)).map(move |i| (n, i))
    }

    pub fn all_keys(&self) -> impl Iterator<Item = SimplexKey> + '_ {
        (0..=self.dim()).flat_map(|n| self.keys(n))
    }

    /// Face table entry of a nondegenerate simplex (n >= 1).
    pub fn face(&self, key: SimplexKey, i: usize) -> &SimplexRef {
        &self.faces[key.0][key.1][i]
    }

    /// Face operator on a simplex in canonical form, returning canonical form.
    /// Uses d_i s_j identities to push the face past the degeneracy word.
    pub fn face_of_ref(&self, r: &SimplexRef, i: usize) -> SimplexRef {
        match r.degeneracies.split_first() {
            None => self.face(r.target, i).clone(),
            Some((&j, rest)) => {
                let inner = SimplexRef {
                    degeneracies: rest.to_vec(),
                    target: r.target,
                };
                if i == j || i == j + 1 {
                    inner
                } else if i < j {
                    let f = self.face_of_ref(&inner, i);
                    SimplexRef {
                        degeneracies: prepend_degeneracy(j - 1, &f.degeneracies),
                        target: f.target,
                    }
                } else {
                    let f = self.face_of_ref(&inner, i - 1);
                    SimplexRef {
                        degeneracies: prepend_degeneracy(j, &f.degeneracies),
                        target: f.target,
                    }
                }
            }
        }
    }

    /// Image of a nondegenerate m-simplex under the simplicial operator
    /// induced by a strictly monotone injection f: [k] -> [m], i.e. the
    /// composite of the face operators at the complement of im(f), applied in
    /// decreasing index order.
    pub fn injection_image(&self, key: SimplexKey, f_values: &[usize]) -> SimplexRef {
        let m = key.0;
        let mut r = SimplexRef::nondegenerate(key);
        for i in (0..=m).rev() {
            if !f_values.contains(&i) {
                r = self.face_of_ref(&r, i);
            }
        }
        r
    }

    /// Checks all structural invariants that are data (not hard errors):
    /// the simplicial identities d_i d_j = d_{j-1} d_i for i < j on every
    /// nondegenerate simplex of dimension >= 2.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for n in 2..=self.dim() {
            for key in self.keys(n).collect::<Vec<_>>() {
                let whole = SimplexRef::nondegenerate(key);
                for j in 1..=n {
                    for i in 0..j {
                        let a = self.face_of_ref(&self.face_of_ref(&whole, j), i);
                        let b = self.face_of_ref(&self.face_of_ref(&whole, i), j - 1);
                        if a != b {
                            violations.push(Violation {
                                simplex: self.id(key).to_string(),
                                message: format!(
                                    "identity d_{i} d_{j} = d_{} d_{i} fails",
                                    j - 1
                                ),
                            });
                        }
                    }
                }
            }
        }
        violations
    }

    /// Number of connected components (via vertices and nondegenerate edges).
    pub fn components(&self) -> usize {
        let n0 = self.count(0);
        if n0 == 0 {
            return 0;
        }
        let mut parent: Vec<usize> = (0..n0).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..self.count(1) {
            let a = self.face_of_ref(&SimplexRef::nondegenerate((1, i)), 0).target.1;
            let b = self.face_of_ref(&SimplexRef::nondegenerate((1, i)), 1).target.1;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        (0..n0)
            .filter(|&i| find(&mut parent, i) == i)
            .count()
    }
}

/// The normalized rational cochain complex of a finite simplicial set.
/// `d[k]` is the coboundary C^k -> C^{k+1}; bases are the nondegenerate
/// simplices in the set's stored order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplexQ {
    dims: Vec<usize>,
    d: Vec<QMatrix>,
}

impl CochainComplexQ {
    pub fn from_parts(dims: Vec<usize>, d: Vec<QMatrix>) -> Self {
        assert_eq!(d.len(), dims.len());
        CochainComplexQ { dims, d }
    }

    /// Dimension of C^k (zero outside the stored range).
    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    pub fn top(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    /// Coboundary matrix C^k -> C^{k+1}; the zero map outside the range.
    pub fn d(&self, k: usize) -> QMatrix {
        if k < self.d.len() {
            self.d[k].clone()
        } else {
            QMatrix::zero(self.dim(k + 1), self.dim(k))
        }
    }

    pub fn betti(&self, k: usize) -> usize {
        let ker = self.dim(k) - self.d(k).rank();
        let im = if k == 0 { 0 } else { self.d(k - 1).rank() };
        ker - im
    }

    /// Canonical representatives of a basis of H^k: kernel basis vectors of
    /// d^k completed against the image of d^{k-1}.
    pub fn cohomology_basis(&self, k: usize) -> Vec<crate::qcore::QVector> {
        let ker = kernel_basis(&self.d(k));
        let image: Vec<crate::qcore::QVector> = if k == 0 {
            Vec::new()
        } else {
            let dk = self.d(k - 1);
            (0..dk.cols()).map(|j| dk.col(j)).collect()
        };
        let chosen = crate::qcore::complete_basis(&image, &ker).expect("dims agree");
        chosen.into_iter().map(|i| ker[i].clone()).collect()
    }
}

/// Normalized cochain complex with the convention
/// (d psi)(sigma) = sum_i (-1)^i psi(d_i sigma), degenerate faces dropped.
pub fn cochain_complex(x: &FiniteSimplicialSet) -> CochainComplexQ {
    let top = x.dim();
    let dims: Vec<usize> = (0..=top).map(|n| x.count(n)).collect();
    let mut d = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let rows = if k < top { x.count(k + 1) } else { 0 };
        let mut m = QMatrix::zero(rows, x.count(k));
        for i in 0..rows {
            let key = (k + 1, i);
            for face_idx in 0..=(k + 1) {
                let f = x.face(key, face_idx);
                if f.is_nondegenerate() {
                    let sign = if face_idx % 2 == 0 {
                        Rat::one()
                    } else {
                        -Rat::one()
                    };
                    let col = f.target.1;
                    let cur = m.get(i, col) + sign;
                    m.set(i, col, cur);
                }
            }
        }
        d.push(m);
    }
    CochainComplexQ::from_parts(dims, d)
}

/// k-th rational Betti number.
pub fn betti(x: &FiniteSimplicialSet, k: isize) -> Result<usize, SimplicialError> {
    if k < 0 {
        return Err(SimplicialError::DegreeOutOfRange(k));
    }
    let k = k as usize;
    if k > x.dim() {
        return Ok(0);
    }
    Ok(cochain_complex(x).betti(k))
}

/// The standard simplex Delta[n]: nondegenerate k-simplices are the strictly
/// increasing (k+1)-tuples in {0..n}; ids join the vertices with '.'.
pub fn standard_simplex(n: usize) -> FiniteSimplicialSet {
    build_from_tuples(n, &increasing_tuples_all(n))
}

pub fn tuple_id(t: &[usize]) -> String {
    t.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(".")
}

fn increasing_tuples_all(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..=n {
        out.extend(increasing_tuples(n, k));
    }
    out
}

/// All strictly increasing (k+1)-tuples in {0..n}.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k + 1);
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            if n + 1 - v >= left {
                cur.push(v);
                rec(v + 1, n, left - 1, cur, out);
                cur.pop();
            }
        }
    }
    rec(0, n, k + 1, &mut cur, &mut out);
    out
}

/// Builds the simplicial set whose nondegenerate simplices are a family of
/// vertex tuples closed under taking faces (a simplicial complex).
pub fn build_from_tuples(_n: usize, tuples: &[Vec<usize>]) -> FiniteSimplicialSet {
    let top = tuples.iter().map(|t| t.len() - 1).max().unwrap_or(0);
    let mut ids: Vec<Vec<String>> = vec![Vec::new(); top + 1];
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 1];
    for t in tuples {
        let k = t.len() - 1;
        ids[k].push(tuple_id(t));
        by_dim[k].push(t.clone());
    }
    let mut faces: RawFaces = vec![Vec::new()];
    for k in 1..=top {
        let mut level = Vec::new();
        for t in &by_dim[k] {
            let mut fs = Vec::with_capacity(k + 1);
            for i in 0..=k {
                let mut face = t.clone();
                face.remove(i);
                fs.push((Vec::new(), tuple_id(&face)));
            }
            level.push(fs);
        }
        faces.push(level);
    }
    FiniteSimplicialSet::new(ids, faces).expect("complex data is structurally valid")
}
