//! Polynomial differential forms with rational coefficients on the standard
//! n-simplex, simplicial operators, Whitney forms, integration, the de Rham /
//! Whitney pair, and Dupont's projector and homotopies.
//!
//! Forms are stored in canonical coordinates: t_0 and dt_0 are eliminated via
//! t_0 = 1 - sum t_i and dt_0 = -sum dt_i. Exterior generators are kept with
//! strictly increasing indices, Koszul signs absorbed into the coefficients.
//!
//! Text serialization (used by golden tests): terms sorted by (exterior index
//! set, exponent vector), each rendered `coeff*t1^a1*...*tn^an*dt{c1}*dt{c2}`
//! with unit exponents omitting `^1`, degree-zero monomials omitting the `t`
//! part, and the zero form rendered `0`. Coefficients are `p` or `p/q`.

use crate::qcore::{factorial, Rat};
use num::{BigInt, One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// (exterior indices, exponent vector); indices strictly increasing in 1..=n,
/// exponent vector has length n.
type Term = (Vec<usize>, Vec<u32>);

/// A polynomial differential form on the standard `ambient`-simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyForm {
    ambient: usize,
    terms: BTreeMap<Term, Rat>,
}

/// Strictly monotone injection [p] -> [n].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Injection {
    pub ambient: usize,
    pub values: Vec<usize>,
}

impl Injection {
    pub fn new(ambient: usize, values: Vec<usize>) -> Self {
        assert!(values.windows(2).all(|w| w[0] < w[1]), "not strictly monotone");
        assert!(values.iter().all(|&v| v <= ambient), "value out of range");
        assert!(!values.is_empty());
        Injection { ambient, values }
    }

    pub fn degree(&self) -> usize {
        self.values.len() - 1
    }
}

/// All strictly monotone injections [p] -> [m].
pub fn injections(p: usize, m: usize) -> Vec<Vec<usize>> {
    crate::simplicial::increasing_tuples(m, p)
}

/// Sign of merging two strictly increasing exterior index lists; `None` when
/// they share an index (the product vanishes).
fn merge_exterior(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut neg = false;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] moves left past the remaining a[i..] factors.
            if (a.len() - i) % 2 == 1 {
                neg = !neg;
            }
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, neg))
}

impl PolyForm {
    pub fn zero(ambient: usize) -> Self {
        PolyForm {
            ambient,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ambient: usize, c: Rat) -> Self {
        let mut f = Self::zero(ambient);
        f.insert_term(Vec::new(), vec![0; ambient], c);
        f
    }

    pub fn one(ambient: usize) -> Self {
        Self::constant(ambient, Rat::one())
    }

    /// The coordinate t_i, 1 <= i <= n.
    pub fn var_t(ambient: usize, i: usize) -> Self {
        assert!((1..=ambient).contains(&i));
        let mut exps = vec![0; ambient];
        exps[i - 1] = 1;
        let mut f = Self::zero(ambient);
        f.insert_term(Vec::new(), exps, Rat::one());
        f
    }

    /// The generator dt_i, 1 <= i <= n.
    pub fn var_dt(ambient: usize, i: usize) -> Self {
        assert!((1..=ambient).contains(&i));
        let mut f = Self::zero(ambient);
        f.insert_term(vec![i], vec![0; ambient], Rat::one());
        f
    }

    /// Barycentric coordinate t_i for 0 <= i <= n (t_0 = 1 - sum t_j).
    pub fn bary_t(ambient: usize, i: usize) -> Self {
        if i == 0 {
            let mut f = Self::one(ambient);
            for j in 1..=ambient {
                f = f.sub(&Self::var_t(ambient, j));
            }
            f
        } else {
            Self::var_t(ambient, i)
        }
    }

    /// Barycentric differential dt_i for 0 <= i <= n (dt_0 = -sum dt_j).
    pub fn bary_dt(ambient: usize, i: usize) -> Self {
        if i == 0 {
            let mut f = Self::zero(ambient);
            for j in 1..=ambient {
                f = f.sub(&Self::var_dt(ambient, j));
            }
            f
        } else {
            Self::var_dt(ambient, i)
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exterior degree when homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|(c, _)| c.len());
        let first = degs.next()?;
        if degs.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Total polynomial degree over all terms (coefficient growth guard).
    pub fn poly_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(_, exps)| exps.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn insert_term(&mut self, dts: Vec<usize>, exps: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let key = (dts, exps);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let mut out = self.clone();
        for ((dts, exps), c) in &other.terms {
            out.insert_term(dts.clone(), exps.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> PolyForm {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> PolyForm {
        if c.is_zero() {
            return PolyForm::zero(self.ambient);
        }
        PolyForm {
            ambient: self.ambient,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    /// Graded-commutative product with Koszul signs.
    pub fn mul(&self, other: &PolyForm) -> PolyForm {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let mut out = PolyForm::zero(self.ambient);
        for ((ca, ea), va) in &self.terms {
            for ((cb, eb), vb) in &other.terms {
                let Some((dts, neg)) = merge_exterior(ca, cb) else {
                    continue;
                };
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let mut coeff = va * vb;
                if neg {
                    coeff = -coeff;
                }
                out.insert_term(dts, exps, coeff);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> PolyForm {
        let mut acc = PolyForm::one(self.ambient);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exterior derivative: d(t^a dt_C) = sum_i a_i t^{a - e_i} dt_i ^ dt_C.
    pub fn diff(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.ambient);
        for ((dts, exps), c) in &self.terms {
            for (i0, &a) in exps.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let i = i0 + 1;
                let Some((new_dts, neg)) = merge_exterior(&[i], dts) else {
                    continue;
                };
                let mut new_exps = exps.clone();
                new_exps[i0] -= 1;
                let mut coeff = c * Rat::from(BigInt::from(a));
                if neg {
                    coeff = -coeff;
                }
                out.insert_term(new_dts, new_exps, coeff);
            }
        }
        out
    }

    /// Algebra-map substitution into forms on Delta[target]: t_i maps to
    /// `images[i-1]` (a 0-form of ambient `target`), dt_i to d(images[i-1]).
    pub fn substitute(&self, target: usize, images: &[PolyForm]) -> PolyForm {
        assert_eq!(images.len(), self.ambient, "one image per variable");
        assert!(images.iter().all(|f| f.ambient == target));
        let d_images: Vec<PolyForm> = images.iter().map(|f| f.diff()).collect();
        let mut out = PolyForm::zero(target);
        for ((dts, exps), c) in &self.terms {
            let mut acc = PolyForm::constant(target, c.clone());
            for (i0, &a) in exps.iter().enumerate() {
                if a > 0 {
                    acc = acc.mul(&images[i0].pow(a));
                }
                if acc.is_zero() {
                    break;
                }
            }
            for &i in dts {
                acc = acc.mul(&d_images[i - 1]);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Text form per the grammar in the module docs. Bit-exact and total.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for ((dts, exps), c) in &self.terms {
            let mut factors = vec![crate::qcore::rat_to_string(c)];
            for (i0, &a) in exps.iter().enumerate() {
                if a == 1 {
                    factors.push(format!("t{}", i0 + 1));
                } else if a > 1 {
                    factors.push(format!("t{}^{}", i0 + 1, a));
                }
            }
            for &i in dts {
                factors.push(format!("dt{i}"));
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Pullback along a monotone map f: [n] -> [m] of a form on Delta[m];
/// f^*(t_i) = sum over f(j) = i of t_j in barycentric coordinates.
pub fn simplicial_op(eta: &PolyForm, f: &[usize], target_n: usize) -> PolyForm {
    let m = eta.ambient();
    assert_eq!(f.len(), target_n + 1, "map defined on [target_n]");
    assert!(f.windows(2).all(|w| w[0] <= w[1]), "not monotone");
    assert!(f.iter().all(|&v| v <= m), "value out of range");
    let mut images = Vec::with_capacity(m);
    for i in 1..=m {
        let mut img = PolyForm::zero(target_n);
        for (j, &fj) in f.iter().enumerate() {
            if fj == i {
                img = img.add(&PolyForm::bary_t(target_n, j));
            }
        }
        images.push(img);
    }
    eta.substitute(target_n, &images)
}

/// Face operator d_i: forms on Delta[n+1] -> forms on Delta[n].
pub fn face_op(eta: &PolyForm, i: usize) -> PolyForm {
    let m = eta.ambient();
    assert!(m >= 1 && i <= m);
    let f: Vec<usize> = (0..m).map(|k| if k < i { k } else { k + 1 }).collect();
    simplicial_op(eta, &f, m - 1)
}

/// Degeneracy operator s_j: forms on Delta[n] -> forms on Delta[n+1].
pub fn degeneracy_op(eta: &PolyForm, j: usize) -> PolyForm {
    let m = eta.ambient();
    assert!(j <= m);
    let f: Vec<usize> = (0..=(m + 1)).map(|k| if k <= j { k } else { k - 1 }).collect();
    simplicial_op(eta, &f, m + 1)
}

/// Whitney form of a monotone map given by its values in [n]:
/// p! sum_i (-1)^i t_{f(i)} dt_{f(0)} ... (omit i) ... dt_{f(p)}.
/// Vanishes when f is not injective.
pub fn whitney(values: &[usize], ambient: usize) -> PolyForm {
    let p = values.len() - 1;
    let mut out = PolyForm::zero(ambient);
    for i in 0..=p {
        let mut term = PolyForm::bary_t(ambient, values[i]);
        for (k, &v) in values.iter().enumerate() {
            if k != i {
                term = term.mul(&PolyForm::bary_dt(ambient, v));
            }
        }
        if i % 2 == 1 {
            term = term.neg();
        }
        out = out.add(&term);
    }
    out.scale(&Rat::from(factorial(p)))
}

/// Integral over the whole standard k-simplex of a form on Delta[k].
/// Only the top-degree part contributes; on canonical monomials
/// t^a dt_1 ... dt_k the value is (prod a_i!) / (sum a_i + k)!.
pub fn top_integral(eta: &PolyForm) -> Rat {
    let k = eta.ambient();
    let full: Vec<usize> = (1..=k).collect();
    let mut acc = Rat::zero();
    for ((dts, exps), c) in &eta.terms {
        if *dts != full {
            continue;
        }
        let mut num = BigInt::one();
        let mut total: usize = 0;
        for &a in exps {
            num *= factorial(a as usize);
            total += a as usize;
        }
        let den = factorial(total + k);
        acc += c * Rat::new(num, den);
    }
    acc
}

/// Integral of a form on Delta[n] over the face spanned by the strictly
/// increasing vertex tuple `sigma`: pull back along the inclusion, then
/// integrate over the standard simplex of that dimension.
pub fn integrate(eta: &PolyForm, sigma: &[usize]) -> Rat {
    assert!(sigma.windows(2).all(|w| w[0] < w[1]), "not a simplex");
    assert!(sigma.iter().all(|&v| v <= eta.ambient()), "not in Delta[n]");
    let k = sigma.len() - 1;
    top_integral(&simplicial_op(eta, sigma, k))
}

/// Cochain on Delta[n]: coefficients on strictly increasing vertex tuples.
pub type SimplexCochain = BTreeMap<Vec<usize>, Rat>;

/// de Rham map: sigma maps to the integral of eta over its face. Zero values
/// are dropped; all dimensions are scanned, degree mismatches integrate to 0.
pub fn de_rham(eta: &PolyForm, ambient: usize) -> SimplexCochain {
    let mut out = SimplexCochain::new();
    for k in 0..=ambient {
        for sigma in crate::simplicial::increasing_tuples(ambient, k) {
            let v = integrate(eta, &sigma);
            if !v.is_zero() {
                out.insert(sigma, v);
            }
        }
    }
    out
}

/// Whitney map: linear extension of dual-basis cochain -> Whitney form.
pub fn whitney_map(c: &SimplexCochain, ambient: usize) -> PolyForm {
    let mut out = PolyForm::zero(ambient);
    for (sigma, v) in c {
        out = out.add(&whitney(sigma, ambient).scale(v));
    }
    out
}

/// Dupont projector onto the Whitney subspace:
/// pi_m(eta) = sum_p sum_{f in I(p,m)} (int f^* eta) omega_f.
pub fn dupont_projector(eta: &PolyForm) -> PolyForm {
    let m = eta.ambient();
    let mut out = PolyForm::zero(m);
    for p in 0..=m {
        for f in injections(p, m) {
            let coeff = integrate(eta, &f);
            if !coeff.is_zero() {
                out = out.add(&whitney(&f, m).scale(&coeff));
            }
        }
    }
    out
}

/// Dupont's vertex homotopy h_j: pull back along the dilation toward vertex
/// j, split off the ds-component, and integrate s over [0, 1] termwise.
///
/// The s variable is carried as an extra first coordinate: the substitution
/// sends t_k to (1 - s) t_k (plus s when k = j), computed in an (m+1)-variable
/// form where variable 1 is s and variable k+1 is t_k.
pub fn dupont_h_vertex(eta: &PolyForm, j: usize) -> PolyForm {
    let m = eta.ambient();
    assert!(j <= m);
    let ext = m + 1;
    let s = PolyForm::var_t(ext, 1);
    let one_minus_s = PolyForm::one(ext).sub(&s);
    let mut images = Vec::with_capacity(m);
    for k in 1..=m {
        let mut img = one_minus_s.mul(&PolyForm::var_t(ext, k + 1));
        if k == j {
            img = img.add(&s);
        }
        images.push(img);
    }
    let pulled = eta.substitute(ext, &images);
    // Extract the ds-part (index 1 is first when present, so no extra sign)
    // and integrate: int_0^1 s^b ds = 1/(b+1).
    let mut out = PolyForm::zero(m);
    for ((dts, exps), c) in &pulled.terms {
        if dts.first() != Some(&1) {
            continue;
        }
        let b = exps[0] as i64;
        let coeff = c * crate::qcore::rat(1, b + 1);
        let new_dts: Vec<usize> = dts[1..].iter().map(|&i| i - 1).collect();
        let new_exps: Vec<u32> = exps[1..].to_vec();
        out.insert_term(new_dts, new_exps, coeff);
    }
    out
}

/// Composite vertex homotopy h_f = h_{f(p)} o ... o h_{f(0)}.
pub fn dupont_h_injection(eta: &PolyForm, values: &[usize]) -> PolyForm {
    let mut acc = dupont_h_vertex(eta, values[0]);
    for &v in &values[1..] {
        if acc.is_zero() {
            break;
        }
        acc = dupont_h_vertex(&acc, v);
    }
    acc
}

/// Dupont homotopy h_{Delta[m]}(eta) = sum_{p<m} sum_{f in I(p,m)} omega_f h_f(eta).
pub fn dupont_h(eta: &PolyForm) -> PolyForm {
    let m = eta.ambient();
    let mut out = PolyForm::zero(m);
    for p in 0..m {
        for f in injections(p, m) {
            let hf = dupont_h_injection(eta, &f);
            if !hf.is_zero() {
                out = out.add(&whitney(&f, m).mul(&hf));
            }
        }
    }
    out
}
