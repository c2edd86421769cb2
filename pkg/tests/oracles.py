"""Independent reference computations for the tests.

Nothing here calls the normal-form, cone or chart code under test; the
oracles are deliberately naive (minors, box enumeration, LP feasibility,
brute-force word comparison).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog


def det(rows) -> int:
    """Exact determinant by fraction-valued Gaussian elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            out = -out
        out *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return int(out)


def invariant_factors(rows, ncols) -> list[int]:
    """Smith invariants from determinantal divisors ``d_k = gcd of k-minors``."""
    nrows = len(rows)
    out, prev = [], 1
    for k in range(1, min(nrows, ncols) + 1):
        g = 0
        for ri in itertools.combinations(range(nrows), k):
            for ci in itertools.combinations(range(ncols), k):
                g = math.gcd(g, det([[rows[i][j] for j in ci] for i in ri]))
                if g == prev:
                    break
            if g == prev:
                break
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def in_cone_lp(rays, v) -> bool:
    """``v`` is a nonnegative combination of ``rays`` (LP feasibility)."""
    if not any(v):
        return True
    if not rays:
        return False
    a = np.array(rays, dtype=float).T
    res = linprog(np.zeros(len(rays)), A_eq=a, b_eq=np.array(v, dtype=float), bounds=[(0, None)] * len(rays), method="highs")
    return res.status == 0


def lattice_points_in_cone(rays, dim, radius):
    pts = []
    for v in itertools.product(range(-radius, radius + 1), repeat=dim):
        if any(v) and in_cone_lp(rays, v):
            pts.append(v)
    return pts


def brute_hilbert_basis(rays, dim) -> list[tuple]:
    """Irreducible lattice points of a pointed cone, by box enumeration.

    Every Hilbert basis element lies in the zonotope spanned by the rays, so
    a box of radius ``sum |ray entries|`` contains all of them.
    """
    radius = max(1, sum(abs(x) for r in rays for x in r))
    pts = lattice_points_in_cone(rays, dim, radius)
    s = set(pts)
    irr = []
    for v in pts:
        if not any(tuple(a - b for a, b in zip(v, u)) in s for u in pts if u != v):
            irr.append(v)
    return sorted(irr)


def sums_up_to(gens, dim, k) -> set:
    """All sums of at most ``k`` generators, with repetition."""
    out = {(0,) * dim}
    frontier = {(0,) * dim}
    for _ in range(k):
        frontier = {tuple(a + b for a, b in zip(f, g)) for f in frontier for g in gens}
        out |= frontier
    return out


def words(r, side):
    return list(itertools.product(range(side + 1), repeat=r))


def value(gens, word, dim):
    return tuple(sum(c * g[i] for c, g in zip(word, gens)) for i in range(dim))


def brute_stalk_is_iso(phi, side: int = 3, bound: int = 12):
    """Decide whether ``P / ker(phi) -> A`` is bijective by enumeration.

    The quotient comes from ``hom_cokernel``; surjectivity asks that every
    generator of A is the value of a word with entries ``<= side``, and
    injectivity asks that words with equal values are congruent.  Words
    with equal value in P must also have equal images, or phi is not a map.
    """
    from logstruct.monoids import Verdict, hom_cokernel, word_equal

    p, a = phi.source, phi.target
    ws = words(p.ngens, side)
    src_vals = {}
    for w in ws:
        src_vals.setdefault(value(p.gens, w, p.dim), set()).add(value(phi.images, w, a.dim))
    if any(len(v) > 1 for v in src_vals.values()):
        return False
    q = hom_cokernel(phi, bound=bound).monoid
    vals = {}
    for w in ws:
        vals.setdefault(value(phi.images, w, a.dim), []).append(w)
    for g in a.gens:
        if tuple(g) not in vals:
            return False
    for group in vals.values():
        for w in group[1:]:
            if word_equal(q, group[0], w) is not Verdict.EQUAL:
                return False
    return True
