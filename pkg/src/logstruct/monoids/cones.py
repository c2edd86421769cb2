"""Exact rational polyhedral cones in ``Z^k``.

All routines assume the cone is full-dimensional in the coordinates they are
given; callers change coordinates to a lattice basis of the span first.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations, product
from math import floor
from typing import Optional, Sequence

from ..errors import NotPointed
from ..intlat import (
    IntMatrix,
    in_lattice,
    saturation_basis,
    diagonal,
    dot,
    fg_group,
    inverse_unimodular,
    kernel_basis,
    lattice_basis,
    primitive,
    snf,
    vsub,
)

Vec = tuple


def rank(vectors: Sequence[Sequence[int]], dim: int) -> int:
    return len(lattice_basis(vectors, dim)) if vectors else 0


def hyperplane_normal(vectors: Sequence[Vec], dim: int) -> Optional[Vec]:
    """Primitive normal of the hyperplane spanned by ``dim - 1`` vectors."""
    if vectors:
        ker = kernel_basis(IntMatrix(vectors, ncols=dim))
    else:
        ker = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    if len(ker) != 1:
        return None
    return primitive(ker[0])


def facets(rays: Sequence[Vec], dim: int) -> list[Vec]:
    """Inner facet normals of the full-dimensional cone spanned by ``rays``.

    Returns an empty list when the cone is all of ``R^dim``.
    """
    rays = [tuple(r) for r in rays if any(r)]
    if dim == 0:
        return []
    out: list[Vec] = []
    seen = set()
    for sub in combinations(range(len(rays)), dim - 1):
        n = hyperplane_normal([rays[i] for i in sub], dim)
        if n is None or n in seen or tuple(-x for x in n) in seen:
            continue
        vals = [dot(n, r) for r in rays]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            n = tuple(-x for x in n)
        else:
            continue
        seen.add(n)
        out.append(n)
    out.sort()
    return out


def lineality_basis(rays: Sequence[Vec], dim: int) -> list[Vec]:
    """Lattice basis of the lineality space of the full-dimensional cone."""
    normals = facets(rays, dim)
    if not normals:
        return [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    return lattice_basis(kernel_basis(IntMatrix(normals, ncols=dim)), dim)


def is_pointed(rays: Sequence[Vec], dim: int) -> bool:
    return not lineality_basis(rays, dim)


def in_cone(normals: Sequence[Vec], v: Sequence[int]) -> bool:
    return all(dot(n, v) >= 0 for n in normals)


def grading(normals: Sequence[Vec], dim: int) -> Vec:
    """A functional positive on every nonzero point of a pointed cone."""
    return tuple(sum(n[i] for n in normals) for i in range(dim))


def triangulate(rays: Sequence[Vec], dim: int) -> list[tuple[int, ...]]:
    """Placing triangulation of a pointed full-dimensional cone.

    Rays are placed in the given order; each simplex is a sorted tuple of ray
    indices.
    """
    rays = [tuple(r) for r in rays]
    chosen: list[int] = []
    for i, r in enumerate(rays):
        if any(r) and rank([rays[j] for j in chosen] + [r], dim) > len(chosen):
            chosen.append(i)
        if len(chosen) == dim:
            break
    if len(chosen) < dim:
        raise ValueError("rays do not span the ambient space")
    simplices = [tuple(sorted(chosen))]
    for i, v in enumerate(rays):
        if i in chosen or not any(v):
            continue
        count: Counter = Counter()
        owner = {}
        for s in simplices:
            for j in range(dim):
                f = s[:j] + s[j + 1:]
                count[f] += 1
                owner[f] = s[j]
        new = []
        for f, c in count.items():
            if c != 1:
                continue
            n = hyperplane_normal([rays[j] for j in f], dim)
            if dot(n, rays[owner[f]]) < 0:
                n = tuple(-x for x in n)
            if dot(n, v) < 0:
                new.append(tuple(sorted(f + (i,))))
        simplices.extend(new)
    return simplices


def rational_inverse(m: IntMatrix) -> list[list[Fraction]]:
    n = m.nrows
    a = [[Fraction(x) for x in m.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def parallelepiped_points(gens: Sequence[Vec], dim: int) -> list[Vec]:
    """Lattice points ``sum(l_i g_i)`` with ``0 <= l_i < 1`` for independent ``gens``."""
    v = IntMatrix.from_columns(gens, nrows=dim)
    d, u, _w = snf(v)
    uinv = inverse_unimodular(u)
    vinv = rational_inverse(v)
    out = []
    for c in product(*[range(x) for x in diagonal(d)]):
        x = uinv @ c
        lam = [sum(r[j] * x[j] for j in range(dim)) for r in vinv]
        fl = [floor(t) for t in lam]
        out.append(vsub(x, v @ fl))
    return sorted(set(out))


def span_coordinates(vectors: Sequence[Vec], dim: int, lattice: Optional[Sequence[Vec]] = None):
    """Basis of a lattice containing ``vectors`` and their coordinates in it.

    ``lattice`` defaults to ``span(vectors) ∩ Z^dim``.
    """
    basis = list(lattice) if lattice is not None else saturation_basis(vectors, dim)
    coords = []
    for v in vectors:
        c = in_lattice(basis, v)
        if c is None:
            raise ValueError(f"{v} is not in the lattice")
        coords.append(tuple(c))
    return basis, coords


def from_coordinates(basis: Sequence[Vec], c: Sequence[int], dim: int) -> Vec:
    return tuple(sum(ci * b[i] for ci, b in zip(c, basis)) for i in range(dim))


def hilbert_basis(rays: Sequence[Vec], dim: int, lattice: Optional[Sequence[Vec]] = None) -> list[Vec]:
    """Hilbert basis of ``cone(rays) ∩ lattice`` for a pointed cone.

    ``lattice`` is a basis of a lattice whose span contains the rays; the
    default is ``span(rays) ∩ Z^dim``.
    """
    rays = [tuple(r) for r in rays if any(r)]
    if not rays:
        return []
    basis, coords = span_coordinates(rays, dim, lattice)
    k = len(basis)
    if rank(coords, k) < k:
        raise ValueError("lattice is larger than the span of the rays")
    return sorted(from_coordinates(basis, c, dim) for c in full_dim_hilbert_basis(coords, k))


def full_dim_hilbert_basis(rays: Sequence[Vec], dim: int) -> list[Vec]:
    """Hilbert basis of ``cone(rays) ∩ Z^dim`` for a pointed full-dimensional cone.

    Triangulate, collect the rays and the lattice points of every fundamental
    parallelepiped, then keep the irreducible ones.
    """
    rays = sorted({tuple(r) for r in rays if any(r)})
    if dim == 0:
        return []
    normals = facets(rays, dim)
    if rank(normals, dim) < dim:
        raise NotPointed("cone contains a line")
    cands = set(rays)
    for simplex in triangulate(rays, dim):
        cands.update(p for p in parallelepiped_points([rays[i] for i in simplex], dim) if any(p))
    deg = grading(normals, dim)
    order = sorted(cands, key=lambda x: (dot(deg, x), x))
    basis: list[Vec] = []
    for x in order:
        dx = dot(deg, x)
        if any(dot(deg, y) < dx and in_cone(normals, vsub(x, y)) for y in basis):
            continue
        basis.append(x)
    return sorted(basis)


def _quotient_by(lineality: Sequence[Vec], dim: int):
    """Projection ``Z^dim -> Z^dim / L`` and a lift, for saturated ``L``."""
    g = fg_group(list(lineality), dim)
    assert not g.torsion
    return g.to_canonical, g.from_canonical, g.rank


def normal_generators(rays: Sequence[Vec], dim: int, lattice: Optional[Sequence[Vec]] = None) -> list[Vec]:
    """Generators of ``cone(rays) ∩ lattice``; the cone may contain lines.

    The lineality lattice contributes ``±`` its basis; the pointed quotient
    contributes its Hilbert basis, lifted.
    """
    rays = [tuple(r) for r in rays if any(r)]
    if not rays:
        return []
    basis, coords = span_coordinates(rays, dim, lattice)
    k = len(basis)
    lin = lineality_basis(coords, k)
    if not lin:
        out = full_dim_hilbert_basis(coords, k)
    else:
        proj, lift, r = _quotient_by(lin, k)
        images = [proj @ x for x in coords]
        hb = full_dim_hilbert_basis(images, r) if r else []
        out = set(lin) | {tuple(-x for x in b) for b in lin} | {lift @ y for y in hb}
    return sorted(from_coordinates(basis, c, dim) for c in out)


def rays_from_inequalities(rows: Sequence[Vec], dim: int) -> tuple[list[Vec], list[Vec]]:
    """V-description of ``{x : a.x >= 0 for a in rows}``.

    Returns ``(lineality_basis, extreme_rays)``.
    """
    rows = [tuple(a) for a in rows if any(a)]
    if not rows:
        return [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)], []
    lin = kernel_basis(IntMatrix(rows, ncols=dim))
    if not lin:
        return [], facets(rows, dim)
    proj, lift, r = _quotient_by(lin, dim)
    if r == 0:
        return lin, []
    reduced = [tuple(dot(a, lift.col(j)) for j in range(r)) for a in rows]
    rays = facets(reduced, r)
    return lin, sorted(lift @ y for y in rays)


def normal_generators_from_inequalities(rows: Sequence[Vec], dim: int) -> list[Vec]:
    """Generators of ``{x in Z^dim : a.x >= 0}``."""
    lin, rays = rays_from_inequalities(rows, dim)
    gens = list(rays) + list(lin) + [tuple(-x for x in b) for b in lin]
    return normal_generators(gens, dim)
