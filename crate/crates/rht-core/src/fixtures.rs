//! Built-in test spaces: standard spheres as simplex boundaries, a one-point
//! wedge constructor, a minimal one-vertex 2-sphere, and a 9-vertex
//! triangulation of the complex projective plane.

use crate::simplicial::{build_from_tuples, increasing_tuples, FiniteSimplicialSet, SimplexKey};

/// The n-sphere as the boundary of the standard (n+1)-simplex: all proper
/// nonempty faces of Delta[n+1].
pub fn sphere(n: usize) -> FiniteSimplicialSet {
    let mut tuples = Vec::new();
    for k in 0..=n {
        tuples.extend(increasing_tuples(n + 1, k));
    }
    build_from_tuples(n + 1, &tuples)
}

/// S^2 with one vertex and one nondegenerate 2-simplex, all of whose faces
/// are the degenerate edge s_0 v.
pub fn small_s2() -> FiniteSimplicialSet {
    let ids = vec![vec!["v".to_string()], Vec::new(), vec!["e".to_string()]];
    let faces = vec![
        Vec::new(),
        Vec::new(),
        vec![vec![
            (vec![0], "v".to_string()),
            (vec![0], "v".to_string()),
            (vec![0], "v".to_string()),
        ]],
    ];
    FiniteSimplicialSet::new(ids, faces).expect("structurally valid")
}

/// One-point union of two simplicial sets along chosen vertices. Simplices of
/// the left factor keep their ids prefixed `l.`, the right factor is prefixed
/// `r.`, and the right basepoint is identified with the left one.
pub fn wedge(
    a: &FiniteSimplicialSet,
    b: &FiniteSimplicialSet,
    base_a: &str,
    base_b: &str,
) -> FiniteSimplicialSet {
    let ka = a.lookup(base_a).expect("left basepoint exists");
    let kb = b.lookup(base_b).expect("right basepoint exists");
    assert_eq!(ka.0, 0, "left basepoint must be a vertex");
    assert_eq!(kb.0, 0, "right basepoint must be a vertex");

    let rename_a = |key: SimplexKey| format!("l.{}", a.id(key));
    let rename_b = |key: SimplexKey| {
        if key == kb {
            format!("l.{}", a.id(ka))
        } else {
            format!("r.{}", b.id(key))
        }
    };

    let dim = a.dim().max(b.dim());
    let mut ids: Vec<Vec<String>> = vec![Vec::new(); dim + 1];
    let mut faces: crate::simplicial::RawFaces = vec![Vec::new(); dim + 1];
    for n in 0..=dim {
        for key in a.keys(n) {
            ids[n].push(rename_a(key));
            if n >= 1 {
                faces[n].push(
                    (0..=n)
                        .map(|i| {
                            let f = a.face(key, i);
                            (f.degeneracies.clone(), rename_a(f.target))
                        })
                        .collect(),
                );
            }
        }
        for key in b.keys(n) {
            if key == kb {
                continue;
            }
            ids[n].push(rename_b(key));
            if n >= 1 {
                faces[n].push(
                    (0..=n)
                        .map(|i| {
                            let f = b.face(key, i);
                            (f.degeneracies.clone(), rename_b(f.target))
                        })
                        .collect(),
                );
            }
        }
    }
    FiniteSimplicialSet::new(ids, faces).expect("wedge of valid sets is valid")
}

/// Convenience: S^m v S^n built from simplex boundaries, glued at vertex 0.
pub fn wedge_of_spheres(m: usize, n: usize) -> FiniteSimplicialSet {
    wedge(&sphere(m), &sphere(n), "0", "0")
}

/// 9-vertex triangulation of the complex projective plane (36 facets, closed
/// 4-manifold with Betti numbers 1, 0, 1, 0, 1). Facet list embedded as data;
/// see `scripts/find_cp2.py` for the symmetry search that produced it.
pub fn cp2_nine_vertex() -> FiniteSimplicialSet {
    let mut tuples: std::collections::BTreeSet<Vec<usize>> = Default::default();
    for facet in CP2_FACETS {
        for k in 0..5usize {
            for idx in increasing_tuples(4, k) {
                tuples.insert(idx.iter().map(|&i| facet[i]).collect());
            }
        }
    }
    let tuples: Vec<Vec<usize>> = tuples.into_iter().collect();
    build_from_tuples(8, &tuples)
}

/// Facets of the 9-vertex complex projective plane (output of the symmetry
/// search in `scripts/find_cp2.py`): a closed pseudomanifold with f-vector
/// (9, 36, 84, 90, 36), Betti numbers (1, 0, 1, 0, 1), and nonzero cup
/// square on H^2.
const CP2_FACETS: [[usize; 5]; 36] = [
    [0, 1, 2, 3, 4],
    [0, 1, 2, 3, 5],
    [0, 1, 2, 4, 5],
    [0, 1, 3, 4, 6],
    [0, 1, 3, 5, 7],
    [0, 1, 3, 6, 7],
    [0, 1, 4, 5, 6],
    [0, 1, 5, 6, 8],
    [0, 1, 5, 7, 8],
    [0, 1, 6, 7, 8],
    [0, 2, 3, 4, 8],
    [0, 2, 3, 5, 8],
    [0, 2, 4, 5, 6],
    [0, 2, 4, 6, 7],
    [0, 2, 4, 7, 8],
    [0, 2, 5, 6, 8],
    [0, 2, 6, 7, 8],
    [0, 3, 4, 6, 7],
    [0, 3, 4, 7, 8],
    [0, 3, 5, 7, 8],
    [1, 2, 3, 4, 8],
    [1, 2, 3, 5, 7],
    [1, 2, 3, 6, 7],
    [1, 2, 3, 6, 8],
    [1, 2, 4, 5, 7],
    [1, 2, 4, 7, 8],
    [1, 2, 6, 7, 8],
    [1, 3, 4, 6, 8],
    [1, 4, 5, 6, 8],
    [1, 4, 5, 7, 8],
    [2, 3, 5, 6, 7],
    [2, 3, 5, 6, 8],
    [2, 4, 5, 6, 7],
    [3, 4, 5, 6, 7],
    [3, 4, 5, 6, 8],
    [3, 4, 5, 7, 8],
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{betti, cochain_complex};

    #[test]
    fn spheres_have_sphere_cohomology() {
        for n in 1..=4usize {
            let s = sphere(n);
            assert!(s.validate().is_empty());
            for k in 0..=n {
                let expected = usize::from(k == 0 || k == n);
                assert_eq!(betti(&s, k as isize).unwrap(), expected, "b_{k}(S^{n})");
            }
        }
    }

    #[test]
    fn wedge_betti_adds() {
        let w = wedge_of_spheres(2, 4);
        assert!(w.validate().is_empty());
        assert_eq!(w.components(), 1);
        let c = cochain_complex(&w);
        let b: Vec<usize> = (0..=4).map(|k| c.betti(k)).collect();
        assert_eq!(b, vec![1, 0, 1, 0, 1]);
        // counts: vertices 4 + 6 - 1, top simplices 4 and 6
        assert_eq!(w.count(0), 9);
        assert_eq!(w.count(2), 4 + 20);
        assert_eq!(w.count(4), 6);
    }

    #[test]
    fn cp2_is_a_rational_cohomology_cp2() {
        let x = cp2_nine_vertex();
        assert!(x.validate().is_empty());
        assert_eq!(x.components(), 1);
        let counts: Vec<usize> = (0..=4).map(|n| x.count(n)).collect();
        assert_eq!(counts, vec![9, 36, 84, 90, 36]);
        let c = cochain_complex(&x);
        let b: Vec<usize> = (0..=4).map(|k| c.betti(k)).collect();
        assert_eq!(b, vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn wedge_of_circles() {
        let w = wedge_of_spheres(1, 1);
        let c = cochain_complex(&w);
        assert_eq!((c.betti(0), c.betti(1)), (1, 2));
    }
}
