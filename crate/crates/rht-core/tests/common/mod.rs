//! Shared helpers for the randomized property suites: seeded random
//! simplicial complexes and cochains, plus the full set of reduction
//! identities checked exactly on one (space, cochain) sample.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rht_core::apl::{e_map, i_map, s_map, AplElement, XCochain};
use rht_core::forms::{de_rham, whitney_map, SimplexCochain};
use rht_core::qcore::{rat_int, Rat};
use rht_core::simplicial::{build_from_tuples, increasing_tuples};
use rht_core::FiniteSimplicialSet;
use std::collections::BTreeSet;

/// Random simplicial complex with dimension <= 3 and at most `max_simplices`
/// nondegenerate simplices: a few random vertex tuples closed under faces.
pub fn random_space(rng: &mut ChaCha8Rng, max_simplices: usize) -> FiniteSimplicialSet {
    loop {
        let nv: usize = rng.gen_range(3..=6);
        let verts: Vec<usize> = (0..nv).collect();
        let mut tuples: BTreeSet<Vec<usize>> = verts.iter().map(|&v| vec![v]).collect();
        for _ in 0..rng.gen_range(1..=5usize) {
            let size = rng.gen_range(2..=4.min(nv));
            let mut t: Vec<usize> = verts
                .choose_multiple(rng, size)
                .copied()
                .collect();
            t.sort_unstable();
            // close under faces: every nonempty subset of a tuple of <= 4
            // vertices, enumerated by bitmask
            for mask in 1u32..(1 << size) {
                let sub: Vec<usize> = (0..size)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| t[i])
                    .collect();
                tuples.insert(sub);
            }
        }
        let list: Vec<Vec<usize>> = tuples.into_iter().collect();
        let x = build_from_tuples(nv - 1, &list);
        if x.total_count() <= max_simplices {
            return x;
        }
    }
}

pub fn random_cochain(x: &FiniteSimplicialSet, k: usize, rng: &mut ChaCha8Rng) -> XCochain {
    let mut c = XCochain::zero(x, k);
    for v in &mut c.coeffs {
        *v = rat_int(rng.gen_range(-3..=3));
    }
    c
}

/// A polynomial form that is not itself a Whitney cochain image: a Whitney
/// image plus an exact part plus (in degree 2) a product of two images.
pub fn random_form(x: &FiniteSimplicialSet, k: usize, rng: &mut ChaCha8Rng) -> AplElement {
    let mut eta = e_map(x, &random_cochain(x, k, rng));
    if k >= 1 {
        eta = eta.add(&e_map(x, &random_cochain(x, k - 1, rng)).diff());
    }
    if k == 2 {
        let a = e_map(x, &random_cochain(x, 1, rng));
        let b = e_map(x, &random_cochain(x, 1, rng));
        eta = eta.add(&a.mul(&b));
    }
    eta
}

/// All reduction identities on one sample, exactly:
/// IE = id, EI - id = Sd + dS, S^2 = 0, IS = 0, SE = 0.
pub fn check_reduction_identities(x: &FiniteSimplicialSet, rng: &mut ChaCha8Rng) {
    let k = rng.gen_range(0..=x.dim().min(2));
    let phi = random_cochain(x, k, rng);
    let eta = random_form(x, k, rng);

    assert_eq!(i_map(x, &e_map(x, &phi)), phi, "IE = id");
    let lhs = e_map(x, &i_map(x, &eta)).sub(&eta);
    let rhs = s_map(&eta.diff()).add(&s_map(&eta).diff());
    assert_eq!(lhs, rhs, "EI - id = Sd + dS");
    assert!(s_map(&s_map(&eta)).is_zero(), "S^2 = 0");
    assert!(i_map(x, &s_map(&eta)).is_zero(), "IS = 0");
    assert!(s_map(&e_map(x, &phi)).is_zero(), "SE = 0");
}

/// The local round trip on one standard simplex: integrating the Whitney
/// form of a cochain recovers the cochain.
pub fn check_local_round_trip(rng: &mut ChaCha8Rng) {
    let m = rng.gen_range(1..=3usize);
    let k = rng.gen_range(0..=m);
    let mut c = SimplexCochain::new();
    for sigma in increasing_tuples(m, k) {
        let v: i64 = rng.gen_range(-3..=3);
        if v != 0 {
            c.insert(sigma, rat_int(v));
        }
    }
    let back = de_rham(&whitney_map(&c, m), m);
    assert_eq!(back, c, "DR o WH = id on Delta[{m}] degree {k}");
}

// silence "unused" in targets that only use a subset
#[allow(dead_code)]
pub fn _rat(v: i64) -> Rat {
    rat_int(v)
}
