//! Deciding isomorphism of finitely generated free DGAs over the rationals.
//!
//! The problem is phrased as an orbit problem: block-diagonal invertible
//! matrices (one block per degree up to twice the maximal generator degree)
//! act on the vector of multiplication and differential structure constants;
//! two algebras are isomorphic exactly when the vectors lie in one orbit.
//!
//! The solver works degreewise on generator images. For a minimal algebra
//! the differential of a degree-p generator only involves generators of
//! lower degree, so once those images are fixed the degree-p constraints are
//! affine-linear and solvable exactly. Genuinely free directions (cocycle
//! kernels) are sampled from a small deterministic candidate set; the outcome
//! is three-valued, and `NoIso` is only claimed when the elimination was
//! exhaustive (every sampled kernel was trivial) or a dimension certificate
//! applies.

use crate::dga::{DgaElement, DgaMorphism, FreeDga, Monomial};
use crate::qcore::{kernel_basis, rat, solve_linear, QMatrix, QVector, Rat, RowSpace};
use num::{One, Zero};

/// The orbit problem data for a pair of algebras: block dimensions and the
/// flattened structure-constant vectors of both sides.
#[derive(Debug, Clone)]
pub struct OrbitInstance {
    pub source: FreeDga,
    pub target: FreeDga,
    /// Maximal generator degree over both algebras.
    pub max_gen_degree: usize,
    /// Monomial-basis dimensions k_p for p = 0..=2D.
    pub blocks: Vec<usize>,
    /// Structure constants of the target (multiplication slots i <= j with
    /// i + j <= 2D, then differential slots p <= 2D - 1).
    pub x: QVector,
    /// Structure constants of the source, same slot order.
    pub y: QVector,
}

#[derive(Debug, Clone)]
pub enum BuildResult {
    Instance(Box<OrbitInstance>),
    /// Graded dimensions differ: no isomorphism can exist.
    ImmediateNo {
        degree: usize,
        source_dim: usize,
        target_dim: usize,
    },
}

/// A named invariant mismatch refuting isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    GeneratorCount {
        degree: usize,
        source: usize,
        target: usize,
    },
    CohomologyDim {
        degree: usize,
        source: usize,
        target: usize,
    },
    CupRank {
        i: usize,
        j: usize,
        source: usize,
        target: usize,
    },
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::GeneratorCount { degree, source, target } => write!(
                f,
                "generator count in degree {degree}: {source} vs {target}"
            ),
            Witness::CohomologyDim { degree, source, target } => {
                write!(f, "H^{degree} dimension: {source} vs {target}")
            }
            Witness::CupRank { i, j, source, target } => write!(
                f,
                "rank of H^{i} x H^{j} -> H^{} multiplication: {source} vs {target}",
                i + j
            ),
        }
    }
}

/// An explicit isomorphism: generator images plus the induced basis blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoWitness {
    pub images: Vec<DgaElement>,
    /// g^p on monomial bases for p = 0..=2D.
    pub blocks: Vec<QMatrix>,
}

#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Iso(Box<IsoWitness>),
    NoIso(String),
    Unknown,
}

fn two_d(m: &FreeDga, n: &FreeDga) -> usize {
    let d = m
        .generators()
        .iter()
        .chain(n.generators())
        .map(|g| g.degree)
        .max()
        .unwrap_or(0);
    2 * d
}

/// Extracts the flattened structure constants of one algebra.
fn structure_vector(a: &FreeDga, top: usize) -> QVector {
    let mut out = Vec::new();
    // multiplication slots, i <= j, i + j <= top, in increasing (i, j)
    for i in 2..=top {
        for j in i..=top {
            if i + j > top {
                break;
            }
            let bi = a.monomial_basis(i);
            let bj = a.monomial_basis(j);
            for ma in &bi {
                for mb in &bj {
                    let prod = a.mul(
                        &DgaElement::monomial(ma.clone(), Rat::one()),
                        &DgaElement::monomial(mb.clone(), Rat::one()),
                    );
                    out.extend(a.to_vector(&prod, i + j));
                }
            }
        }
    }
    // differential slots
    for p in 2..top {
        let m = a.differential_matrix(p);
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.push(m.get(r, c).clone());
            }
        }
    }
    out
}

/// Builds the orbit instance, or refutes immediately on a graded-dimension
/// mismatch in some degree up to 2D.
pub fn build_orbit_instance(source: &FreeDga, target: &FreeDga) -> BuildResult {
    let top = two_d(source, target);
    let mut blocks = Vec::with_capacity(top + 1);
    for p in 0..=top {
        let ks = source.monomial_basis(p).len();
        let kt = target.monomial_basis(p).len();
        if ks != kt {
            return BuildResult::ImmediateNo {
                degree: p,
                source_dim: ks,
                target_dim: kt,
            };
        }
        blocks.push(ks);
    }
    BuildResult::Instance(Box::new(OrbitInstance {
        source: source.clone(),
        target: target.clone(),
        max_gen_degree: top / 2,
        blocks,
        x: structure_vector(target, top),
        y: structure_vector(source, top),
    }))
}

/// Forces an instance without the dimension gate; the solver re-derives the
/// dimension certificate. Test/diagnostic use.
pub fn force_orbit_instance(source: &FreeDga, target: &FreeDga) -> OrbitInstance {
    let top = two_d(source, target);
    OrbitInstance {
        source: source.clone(),
        target: target.clone(),
        max_gen_degree: top / 2,
        blocks: (0..=top).map(|p| source.monomial_basis(p).len()).collect(),
        x: structure_vector(target, top),
        y: structure_vector(source, top),
    }
}

/// Dimension of the subspace of H^{i+j} spanned by cup products of H^i and
/// H^j classes.
fn cup_rank(a: &FreeDga, i: usize, j: usize) -> usize {
    let (_, ri) = a.cohomology(i);
    let (_, rj) = a.cohomology(j);
    let mut span = RowSpace::new();
    let d = a.differential_matrix(i + j - 1);
    for c in 0..d.cols() {
        span.insert(&d.col(c));
    }
    let base = span.rank();
    for x in &ri {
        for y in &rj {
            let prod = a.mul(x, y);
            span.insert(&a.to_vector(&prod, i + j));
        }
    }
    span.rank() - base
}

/// Sound shortcuts checked before the solver: graded generator counts,
/// cohomology dimensions through 2D, and cup-product ranks.
pub fn invariant_refute(source: &FreeDga, target: &FreeDga) -> Option<Witness> {
    let top = two_d(source, target);
    let gs = source.generator_counts(top);
    let gt = target.generator_counts(top);
    for p in 0..=top {
        if gs[p] != gt[p] {
            return Some(Witness::GeneratorCount {
                degree: p,
                source: gs[p],
                target: gt[p],
            });
        }
    }
    for p in 0..=top {
        let (hs, _) = source.cohomology(p);
        let (ht, _) = target.cohomology(p);
        if hs != ht {
            return Some(Witness::CohomologyDim {
                degree: p,
                source: hs,
                target: ht,
            });
        }
    }
    for i in 2..=top {
        for j in i..=top {
            if i + j > top {
                break;
            }
            let rs = cup_rank(source, i, j);
            let rt = cup_rank(target, i, j);
            if rs != rt {
                return Some(Witness::CupRank {
                    i,
                    j,
                    source: rs,
                    target: rt,
                });
            }
        }
    }
    None
}

/// Basis blocks of the multiplicative extension of generator images.
pub fn blocks_from_images(
    source: &FreeDga,
    target: &FreeDga,
    images: &[DgaElement],
    top: usize,
) -> Vec<QMatrix> {
    let morphism = DgaMorphism {
        images: images.to_vec(),
    };
    (0..=top)
        .map(|p| {
            let basis = source.monomial_basis(p);
            let rows = target.monomial_basis(p).len();
            let cols: Vec<QVector> = basis
                .iter()
                .map(|mono| {
                    let img = morphism.apply(
                        source,
                        target,
                        &DgaElement::monomial(mono.clone(), Rat::one()),
                    );
                    target.to_vector(&img, p)
                })
                .collect();
            QMatrix::from_cols(&cols, rows)
        })
        .collect()
}

/// Exact verification of every multiplication and differential equation on
/// basis blocks, plus invertibility of each block.
pub fn check_isomorphism(source: &FreeDga, target: &FreeDga, w: &IsoWitness) -> bool {
    let top = two_d(source, target);
    if w.blocks.len() != top + 1 {
        return false;
    }
    for p in 0..=top {
        let ks = source.monomial_basis(p).len();
        if w.blocks[p].rows() != target.monomial_basis(p).len()
            || w.blocks[p].cols() != ks
            || !w.blocks[p].is_invertible()
        {
            return false;
        }
    }
    // multiplication: g^{i+j}(a * b) = g^i(a) * g^j(b) on basis pairs
    for i in 2..=top {
        for j in i..=top {
            if i + j > top {
                break;
            }
            let bi = source.monomial_basis(i);
            let bj = source.monomial_basis(j);
            for (ai, ma) in bi.iter().enumerate() {
                for (bjx, mb) in bj.iter().enumerate() {
                    let prod = source.mul(
                        &DgaElement::monomial(ma.clone(), Rat::one()),
                        &DgaElement::monomial(mb.clone(), Rat::one()),
                    );
                    let lhs = w.blocks[i + j]
                        .mul_vec(&source.to_vector(&prod, i + j))
                        .expect("block shapes");
                    let ga = target.from_vector(&w.blocks[i].col(ai), i);
                    let gb = target.from_vector(&w.blocks[j].col(bjx), j);
                    let rhs = target.to_vector(&target.mul(&ga, &gb), i + j);
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    // differentials: g^{p+1} d_M = d_N g^p
    for p in 0..top {
        let lhs = w.blocks[p + 1]
            .mul(&source.differential_matrix(p))
            .expect("shapes");
        let rhs = target
            .differential_matrix(p)
            .mul(&w.blocks[p])
            .expect("shapes");
        if lhs != rhs {
            return false;
        }
    }
    true
}

struct SearchCtx<'a> {
    source: &'a FreeDga,
    target: &'a FreeDga,
    top: usize,
    degrees: Vec<usize>,
    budget: usize,
    nodes: usize,
    exhausted_budget: bool,
    /// true while every explored branching point had a trivial kernel
    complete: bool,
}

impl SearchCtx<'_> {
    /// Generator indices of the source in a given degree.
    fn source_gens(&self, p: usize) -> Vec<usize> {
        self.source
            .generators()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.degree == p)
            .map(|(i, _)| i)
            .collect()
    }

    fn target_gens(&self, p: usize) -> Vec<usize> {
        self.target
            .generators()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.degree == p)
            .map(|(i, _)| i)
            .collect()
    }

    fn search(&mut self, level: usize, images: &mut Vec<DgaElement>) -> Option<IsoWitness> {
        if self.nodes >= self.budget {
            self.exhausted_budget = true;
            return None;
        }
        if level == self.degrees.len() {
            let full: Vec<DgaElement> = images.clone();
            let blocks = blocks_from_images(self.source, self.target, &full, self.top);
            let w = IsoWitness {
                images: full,
                blocks,
            };
            if check_isomorphism(self.source, self.target, &w) {
                return Some(w);
            }
            // a sampled branch that satisfies the generator equations but
            // fails a global check does not refute anything
            self.complete = false;
            return None;
        }
        let p = self.degrees[level];
        let src = self.source_gens(p);
        let tgt = self.target_gens(p);
        if src.len() != tgt.len() {
            // graded dims agreed, so this cannot happen; be safe
            self.complete = false;
            return None;
        }
        let basis_dim = self.target.monomial_basis(p).len();
        let d_n = self.target.differential_matrix(p);
        let kernel = kernel_basis(&d_n);
        if !kernel.is_empty() {
            self.complete = false;
        }
        // per-generator candidate lists
        let morphism_so_far = DgaMorphism {
            images: images.clone(),
        };
        let mut candidate_sets: Vec<Vec<QVector>> = Vec::with_capacity(src.len());
        for (ordinal, &gi) in src.iter().enumerate() {
            // rhs = g(d_M v) expressed in the target degree-(p+1) basis;
            // minimality guarantees only lower-degree images occur
            let dv = self.source.generator_diff(gi);
            let rhs_elt = morphism_so_far.apply(self.source, self.target, dv);
            let rhs = self.target.to_vector(&rhs_elt, p + 1);
            let Ok(particular) = solve_linear(&d_n, &rhs) else {
                self.complete = false;
                return None;
            };
            let Some(particular) = particular else {
                // affine system infeasible: no image can exist on this branch
                return None;
            };
            let mut cands: Vec<QVector> = Vec::new();
            let push = |cands: &mut Vec<QVector>, v: QVector| {
                if !cands.contains(&v) {
                    cands.push(v);
                }
            };
            // identity-shaped guess first: the ordinal-matched target generator
            let guess_idx = self
                .target
                .monomial_basis(p)
                .iter()
                .position(|m: &Monomial| m.as_slice() == [tgt[ordinal]]);
            if let Some(idx) = guess_idx {
                let mut guess = vec![Rat::zero(); basis_dim];
                guess[idx] = Rat::one();
                if d_n.mul_vec(&guess).expect("shape") == rhs {
                    push(&mut cands, guess);
                }
            }
            push(&mut cands, particular.clone());
            for k in &kernel {
                for lambda in [
                    rat(1, 1),
                    rat(-1, 1),
                    rat(2, 1),
                    rat(-2, 1),
                    rat(1, 2),
                    rat(-1, 2),
                ] {
                    let v: QVector = particular
                        .iter()
                        .zip(k)
                        .map(|(a, b)| a + &lambda * b)
                        .collect();
                    push(&mut cands, v);
                }
            }
            candidate_sets.push(cands);
        }
        // cartesian product over candidates, invertible linear part required
        self.assign(level, p, &src, &tgt, &candidate_sets, 0, images)
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        &mut self,
        level: usize,
        p: usize,
        src: &[usize],
        tgt: &[usize],
        candidate_sets: &[Vec<QVector>],
        which: usize,
        images: &mut Vec<DgaElement>,
    ) -> Option<IsoWitness> {
        if which == src.len() {
            if !self.linear_block_invertible(p, src, tgt, images) {
                return None;
            }
            return self.search(level + 1, images);
        }
        for cand in &candidate_sets[which] {
            if self.nodes >= self.budget {
                self.exhausted_budget = true;
                return None;
            }
            self.nodes += 1;
            images[src[which]] = self.target.from_vector(cand, p);
            if let Some(w) = self.assign(level, p, src, tgt, candidate_sets, which + 1, images) {
                return Some(w);
            }
        }
        images[src[which]] = DgaElement::zero();
        None
    }

    /// The generator-to-generator coefficient matrix in degree p must be
    /// invertible for the multiplicative extension to be bijective.
    fn linear_block_invertible(
        &self,
        p: usize,
        src: &[usize],
        tgt: &[usize],
        images: &[DgaElement],
    ) -> bool {
        let basis = self.target.monomial_basis(p);
        let mut m = QMatrix::zero(tgt.len(), src.len());
        for (c, &gi) in src.iter().enumerate() {
            let v = self.target.to_vector(&images[gi], p);
            for (r, &tj) in tgt.iter().enumerate() {
                let idx = basis
                    .iter()
                    .position(|mono| mono.as_slice() == [tj])
                    .expect("generator monomial present");
                m.set(r, c, v[idx].clone());
            }
        }
        m.is_invertible()
    }
}

/// Degreewise exact search for an isomorphism realizing the orbit relation.
pub fn solve_orbit(inst: &OrbitInstance, budget: usize) -> SolveOutcome {
    let top = two_d(&inst.source, &inst.target);
    // re-derive the dimension certificate (covers forced instances)
    for p in 0..=top {
        let ks = inst.source.monomial_basis(p).len();
        let kt = inst.target.monomial_basis(p).len();
        if ks != kt {
            return SolveOutcome::NoIso(format!(
                "graded dimension mismatch in degree {p}: {ks} vs {kt}"
            ));
        }
    }
    if !inst.source.is_minimal() || !inst.target.is_minimal() {
        // the degreewise linearization relies on minimality
        return SolveOutcome::Unknown;
    }
    let mut degrees: Vec<usize> = inst
        .source
        .generators()
        .iter()
        .map(|g| g.degree)
        .collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut ctx = SearchCtx {
        source: &inst.source,
        target: &inst.target,
        top,
        degrees,
        budget,
        nodes: 0,
        exhausted_budget: false,
        complete: true,
    };
    let mut images = vec![DgaElement::zero(); inst.source.generators().len()];
    match ctx.search(0, &mut images) {
        Some(w) => SolveOutcome::Iso(Box::new(w)),
        None => {
            if ctx.complete && !ctx.exhausted_budget {
                SolveOutcome::NoIso(
                    "degreewise elimination exhausted all branches without a solution".into(),
                )
            } else {
                SolveOutcome::Unknown
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::free_dga;
    use crate::qcore::rat_int;

    fn s2() -> FreeDga {
        free_dga(&[("x", 2), ("y", 3)], &["0", "1*x^2"]).unwrap()
    }

    fn s2_scaled() -> FreeDga {
        free_dga(&[("x", 2), ("y", 3)], &["0", "2*x^2"]).unwrap()
    }

    #[test]
    fn instance_on_equal_algebras() {
        let a = s2();
        match build_orbit_instance(&a, &a) {
            BuildResult::Instance(inst) => {
                assert_eq!(inst.x, inst.y);
                assert_eq!(inst.max_gen_degree, 3);
                assert_eq!(inst.blocks.len(), 7);
            }
            _ => panic!("expected instance"),
        }
    }

    #[test]
    fn immediate_no_on_dimension_mismatch() {
        let a = free_dga(&[("x", 2)], &["0"]).unwrap();
        let b = s2();
        match build_orbit_instance(&a, &b) {
            BuildResult::ImmediateNo { degree, .. } => assert_eq!(degree, 3),
            _ => panic!("expected refutation"),
        }
    }

    #[test]
    fn scaled_pair_instance_differs() {
        match build_orbit_instance(&s2(), &s2_scaled()) {
            BuildResult::Instance(inst) => assert_ne!(inst.x, inst.y),
            _ => panic!("expected instance"),
        }
    }

    #[test]
    fn identity_isomorphism() {
        let a = free_dga(&[("x", 2)], &["0"]).unwrap();
        let BuildResult::Instance(inst) = build_orbit_instance(&a, &a) else {
            panic!()
        };
        match solve_orbit(&inst, 10_000) {
            SolveOutcome::Iso(w) => {
                assert!(check_isomorphism(&a, &a, &w));
                assert_eq!(a.to_expr(&w.images[0]), "1*x");
            }
            other => panic!("expected iso, got {other:?}"),
        }
    }

    #[test]
    fn scaled_pair_is_isomorphic() {
        let m = s2();
        let n = s2_scaled();
        let BuildResult::Instance(inst) = build_orbit_instance(&m, &n) else {
            panic!()
        };
        match solve_orbit(&inst, 10_000) {
            SolveOutcome::Iso(w) => {
                assert!(check_isomorphism(&m, &n, &w));
                // x -> x, y -> y/2
                assert_eq!(n.to_expr(&w.images[0]), "1*x");
                assert_eq!(n.to_expr(&w.images[1]), "1/2*y");
                assert_eq!(*w.blocks[2].get(0, 0), rat_int(1));
                assert_eq!(*w.blocks[3].get(0, 0), crate::qcore::rat(1, 2));
            }
            other => panic!("expected iso, got {other:?}"),
        }
    }

    #[test]
    fn wrong_scaling_fails_check() {
        let m = s2();
        let n = s2_scaled();
        let images = vec![DgaElement::generator(0), DgaElement::generator(1)];
        let blocks = blocks_from_images(&m, &n, &images, two_d(&m, &n));
        let w = IsoWitness { images, blocks };
        assert!(!check_isomorphism(&m, &n, &w));
    }

    #[test]
    fn invariants_separate_cp2_from_wedge() {
        let cp2 = free_dga(&[("x", 2)], &["0"]).unwrap();
        let wedge = free_dga(&[("x", 2), ("y", 3), ("w", 4)], &["0", "1*x^2", "0"]).unwrap();
        match invariant_refute(&cp2, &wedge) {
            Some(Witness::GeneratorCount { degree: 3, source: 0, target: 1 }) => {}
            other => panic!("unexpected witness {other:?}"),
        }
        // forced instance: the solver re-derives the dimension certificate
        let forced = force_orbit_instance(&cp2, &wedge);
        assert!(matches!(solve_orbit(&forced, 10_000), SolveOutcome::NoIso(_)));
    }

    #[test]
    fn invariants_pass_on_scaled_pair() {
        assert_eq!(invariant_refute(&s2(), &s2_scaled()), None);
        assert_eq!(invariant_refute(&s2(), &s2()), None);
    }

    #[test]
    fn cup_rank_distinguishes() {
        // Lambda(x, z; dz = 0) vs itself has cup rank 1 in H^2 x H^2;
        // a wedge-like model where x^2 is killed has rank 0.
        let a = free_dga(&[("x", 2)], &["0"]).unwrap();
        let b = free_dga(&[("x", 2), ("y", 3)], &["0", "1*x^2"]).unwrap();
        assert_eq!(cup_rank(&a, 2, 2), 1);
        assert_eq!(cup_rank(&b, 2, 2), 0);
    }

    #[test]
    fn trivial_algebras_are_isomorphic() {
        let a = free_dga(&[], &[]).unwrap();
        let BuildResult::Instance(inst) = build_orbit_instance(&a, &a) else {
            panic!()
        };
        assert!(matches!(solve_orbit(&inst, 10), SolveOutcome::Iso(_)));
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let m = s2();
        let n = s2_scaled();
        let BuildResult::Instance(inst) = build_orbit_instance(&m, &n) else {
            panic!()
        };
        assert!(matches!(solve_orbit(&inst, 1), SolveOutcome::Unknown));
    }

    #[test]
    fn two_sphere_product_like_pair() {
        // different generator bases of the same algebra: x' = 2x
        let m = free_dga(&[("x", 2), ("u", 2)], &["0", "0"]).unwrap();
        let n = free_dga(&[("a", 2), ("b", 2)], &["0", "0"]).unwrap();
        let BuildResult::Instance(inst) = build_orbit_instance(&m, &n) else {
            panic!()
        };
        match solve_orbit(&inst, 10_000) {
            SolveOutcome::Iso(w) => assert!(check_isomorphism(&m, &n, &w)),
            other => panic!("expected iso, got {other:?}"),
        }
    }
}
