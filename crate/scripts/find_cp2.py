#!/usr/bin/env python3
"""Search for the 9-vertex triangulation of the complex projective plane.

Vertices are the elements of (Z/3)^2, encoded as 3*a + b. The triangulation
admits the translation group T = (Z/3)^2 acting simply transitively, so its 36
facets split into four T-orbits of 5-subsets (all orbits of 5-subsets have
size 9 because fixed sets of a nonzero translation have size divisible by 3).

There are C(9,5) = 126 five-subsets, i.e. 14 orbits, and C(14,4) = 1001
candidate facet families. A candidate is accepted when

  * every 4-subset of a facet lies in exactly two facets (closed
    pseudomanifold),
  * the complex is connected with rational Betti numbers (1, 0, 1, 0, 1),
  * the cup square H^2 x H^2 -> H^4 is nonzero (computed with the
    Alexander-Whitney product on the increasing-vertex cochain basis).

All linear algebra is done exactly over Q. The accepted facet list is printed
as a Rust array literal for embedding in the fixture corpus.
"""

from fractions import Fraction
from itertools import combinations


def translate(subset, g):
    out = []
    for v in subset:
        a, b = divmod(v, 3)
        ga, gb = divmod(g, 3)
        out.append(3 * ((a + ga) % 3) + (b + gb) % 3)
    return tuple(sorted(out))


def orbit(subset):
    return sorted({translate(subset, g) for g in range(9)})


def orbits_of_5_subsets():
    seen = set()
    reps = []
    for s in combinations(range(9), 5):
        if s in seen:
            continue
        orb = orbit(s)
        seen.update(orb)
        reps.append(orb)
    return reps


def is_pseudomanifold(facets):
    counts = {}
    for f in facets:
        for ridge in combinations(f, 4):
            counts[ridge] = counts.get(ridge, 0) + 1
    return all(c == 2 for c in counts.values())


def full_complex(facets):
    """All faces of all facets, grouped by dimension."""
    faces = [set() for _ in range(5)]
    for f in facets:
        for k in range(1, 6):
            for sub in combinations(f, k):
                faces[k - 1].add(sub)
    return [sorted(level) for level in faces]


def coboundary(faces, k):
    """Matrix of d: C^k -> C^{k+1}, (d psi)(sigma) = sum (-1)^i psi(d_i sigma)."""
    if k + 1 >= len(faces) or not faces[k + 1]:
        return [[Fraction(0)] * len(faces[k])]
    idx = {s: j for j, s in enumerate(faces[k])}
    rows = []
    for sigma in faces[k + 1]:
        row = [Fraction(0)] * len(faces[k])
        for i in range(len(sigma)):
            face = sigma[:i] + sigma[i + 1:]
            row[idx[face]] += (-1) ** i
        rows.append(row)
    return rows


def rref(matrix):
    m = [row[:] for row in matrix]
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(matrix):
    return len(rref(matrix)[1])


def in_span(vectors, target):
    """Is target a linear combination of the given row vectors?"""
    if not vectors:
        return all(x == 0 for x in target)
    base = rank(vectors)
    return rank(vectors + [target]) == base


def betti_numbers(faces):
    dims = [len(level) for level in faces]
    ds = [coboundary(faces, k) for k in range(5)]
    ranks = [rank(d) for d in ds]
    out = []
    for k in range(5):
        ker = dims[k] - ranks[k]
        im = ranks[k - 1] if k > 0 else 0
        out.append(ker - im)
    return out


def kernel_vector_not_in_image(faces, k):
    """A representative cocycle for H^k (assumes H^k is 1-dimensional)."""
    d = coboundary(faces, k)
    red, pivots = rref(d)
    cols = len(d[0])
    free = [c for c in range(cols) if c not in pivots]
    image = []
    if k > 0:
        prev = coboundary(faces, k - 1)
        image = [[row[j] for row in prev] for j in range(len(prev[0]))]
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        if not in_span(image, v):
            return v
    raise AssertionError("no representative found")


def cup_square_nonzero(faces):
    alpha = kernel_vector_not_in_image(faces, 2)
    a = dict(zip(faces[2], alpha))
    beta = []
    for sigma in faces[4]:
        front, back = sigma[:3], sigma[2:]
        beta.append(a.get(front, Fraction(0)) * a.get(back, Fraction(0)))
    d3 = coboundary(faces, 3)
    image = [[row[j] for row in d3] for j in range(len(d3[0]))]
    return not in_span(image, beta)


def connected(facets):
    parent = list(range(9))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in facets:
        for v in f[1:]:
            parent[find(v)] = find(f[0])
    return len({find(v) for v in range(9)}) == 1


def main():
    orbits = orbits_of_5_subsets()
    assert len(orbits) == 14 and all(len(o) == 9 for o in orbits)
    hits = []
    for combo in combinations(range(14), 4):
        facets = sorted(f for i in combo for f in orbits[i])
        if not is_pseudomanifold(facets) or not connected(facets):
            continue
        faces = full_complex(facets)
        if betti_numbers(faces) != [1, 0, 1, 0, 1]:
            continue
        if not cup_square_nonzero(faces):
            continue
        hits.append(facets)
        print(f"orbit combo {combo}: f-vector "
              f"{tuple(len(l) for l in faces)}")
    print(f"{len(hits)} candidate(s) pass all checks")
    if hits:
        facets = hits[0]
        print("const CP2_FACETS: [[usize; 5]; 36] = [")
        for f in facets:
            print(f"    [{', '.join(map(str, f))}],")
        print("];")


if __name__ == "__main__":
    main()
