"""Exact integer linear algebra.

Hermite and Smith normal forms over arbitrary-precision integers, canonical
forms of finitely generated abelian groups, homomorphisms between them, and
integer linear systems.

Conventions: vectors are tuples of ints, matrices act on column vectors, and a
``GroupHom`` matrix has shape ``(target.ngens, source.ngens)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import NotSurjective, TargetNotFree

Vector = tuple


class IntMatrix:
    """Immutable dense integer matrix (row-major)."""

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[Iterable[int]] = (), ncols: Optional[int] = None):
        if isinstance(rows, IntMatrix):
            self._rows, self._ncols = rows._rows, rows._ncols
            return
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self._rows = rows
        self._ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(((1 if i == j else 0) for j in range(n)) for i in range(n))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(((0,) * ncols for _ in range(nrows)), ncols=ncols)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: Optional[int] = None) -> "IntMatrix":
        cols = [tuple(c) for c in cols]
        if nrows is None:
            nrows = len(cols[0]) if cols else 0
        return cls(((c[i] for c in cols) for i in range(nrows)), ncols=len(cols))

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._rows), self._ncols)

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(x for r in self._rows for x in r)

    def row(self, i: int) -> Vector:
        return self._rows[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self._rows)

    def rows(self) -> tuple[Vector, ...]:
        return self._rows

    def columns(self) -> tuple[Vector, ...]:
        return tuple(self.col(j) for j in range(self._ncols))

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.columns(), ncols=self.nrows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self._ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            return IntMatrix(
                (tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self._rows),
                ncols=other.ncols,
            )
        v = tuple(other)
        if len(v) != self._ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self._ncols == other._ncols and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._ncols, self._rows))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self._rows]})"

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def render(self) -> str:
        return "[" + ",".join("[" + ",".join(str(x) for x in r) + "]" for r in self._rows) + "]"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.nrows
        if n != self._ncols:
            raise ValueError("determinant of non-square matrix")
        if n == 0:
            return 1
        a = [list(r) for r in self._rows]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


def as_matrix(m) -> IntMatrix:
    if isinstance(m, IntMatrix):
        return m
    if hasattr(m, "tolist"):
        m = m.tolist()
    return IntMatrix(m)


def is_unimodular(m: IntMatrix) -> bool:
    return m.nrows == m.ncols and abs(m.det()) == 1


# -- normal forms -----------------------------------------------------------


def hnf(m) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``H = U @ M``, ``U`` unimodular and ``H`` in row
    echelon form: pivots positive, entries above each pivot reduced into
    ``[0, pivot)``, zero rows last.
    """
    m = as_matrix(m)
    nr, nc = m.shape
    a = [list(r) for r in m.rows()]
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]

    def sub(i, k, q):
        if q:
            ai, ak = a[i], a[k]
            for j in range(nc):
                ai[j] -= q * ak[j]
            ui, uk = u[i], u[k]
            for j in range(nr):
                ui[j] -= q * uk[j]

    r = 0
    for c in range(nc):
        if r == nr:
            break
        while True:
            nz = [i for i in range(r, nr) if a[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(a[i][c]), i))
            if p != r:
                a[r], a[p] = a[p], a[r]
                u[r], u[p] = u[p], u[r]
            clean = True
            for i in range(r + 1, nr):
                if a[i][c]:
                    sub(i, r, a[i][c] // a[r][c])
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            sub(i, r, a[i][c] // a[r][c])
        r += 1
    return IntMatrix(a, ncols=nc), IntMatrix(u, ncols=nr)


def snf(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``D = U @ M @ V``.

    Pivot: smallest nonzero absolute value in the active block, ties broken
    by lowest ``(row, col)``.  Diagonal entries are nonnegative with
    ``d[i] | d[i+1]``; zeros come last.
    """
    m = as_matrix(m)
    nr, nc = m.shape
    a = [list(r) for r in m.rows()]
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def row_sub(i, k, q):
        ai, ak, ui, uk = a[i], a[k], u[i], u[k]
        for j in range(nc):
            ai[j] -= q * ak[j]
        for j in range(nr):
            ui[j] -= q * uk[j]

    def col_sub(j, k, q):
        for row in a:
            row[j] -= q * row[k]
        for row in v:
            row[j] -= q * row[k]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    row_sub(i, t, a[i][t] // p)
            for j in range(t + 1, nc):
                if a[t][j]:
                    col_sub(j, t, a[t][j] // p)
            if any(a[i][t] for i in range(t + 1, nr)) or any(a[t][j] for j in range(t + 1, nc)):
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                None,
            )
            if bad is not None:
                row_sub(t, bad, -1)
                continue
            if p < 0:
                a[t] = [-x for x in a[t]]
                u[t] = [-x for x in u[t]]
            break
        if best is None:
            break
    return IntMatrix(a, ncols=nc), IntMatrix(u, ncols=nr), IntMatrix(v, ncols=nc)


def diagonal(d: IntMatrix) -> list[int]:
    return [d[i, i] for i in range(min(d.shape))]


# -- linear systems ---------------------------------------------------------


def solve(a, b: Sequence[int]) -> Optional[tuple[Vector, list[Vector]]]:
    """Solve ``A x = b`` over the integers.

    Returns ``(x, kernel_basis)`` or ``None`` when no integer solution
    exists.  The particular solution is the one read off the Hermite form of
    ``A^T``, so it is deterministic.
    """
    a = as_matrix(a)
    m, n = a.shape
    b = tuple(int(x) for x in b)
    if len(b) != m:
        raise ValueError("right-hand side length mismatch")
    h, u = hnf(a.T)  # h = u @ a.T, so a @ u.T = h.T
    w = u.T
    pivots = []
    for k in range(h.nrows):
        row = h.row(k)
        c = next((j for j, x in enumerate(row) if x), None)
        if c is None:
            break
        pivots.append(c)
    rank = len(pivots)
    y = [0] * n
    for k, c in enumerate(pivots):
        acc = b[c] - sum(h[j, c] * y[j] for j in range(k))
        q, rem = divmod(acc, h[k, c])
        if rem:
            return None
        y[k] = q
    for i in range(m):
        if sum(h[j, i] * y[j] for j in range(rank)) != b[i]:
            return None
    x = w @ y
    kernel = [w.col(k) for k in range(rank, n)]
    return x, kernel


def kernel_basis(a) -> list[Vector]:
    a = as_matrix(a)
    res = solve(a, (0,) * a.nrows)
    assert res is not None
    return res[1]


def lattice_basis(vectors: Sequence[Sequence[int]], dim: Optional[int] = None) -> list[Vector]:
    """Hermite basis of the lattice spanned by ``vectors``."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return []
    h, _ = hnf(IntMatrix(vectors, ncols=dim))
    return [r for r in h.rows() if any(r)]


def saturation_basis(vectors: Sequence[Sequence[int]], dim: int) -> list[Vector]:
    """Basis of ``span(vectors) ∩ Z^dim``."""
    vectors = [tuple(v) for v in vectors if any(v)]
    if not vectors:
        return []
    ortho = kernel_basis(IntMatrix(vectors, ncols=dim))
    if not ortho:
        return [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    return lattice_basis(kernel_basis(IntMatrix(ortho, ncols=dim)), dim)


def in_lattice(basis: Sequence[Sequence[int]], v: Sequence[int]) -> Optional[Vector]:
    """Integer coordinates of ``v`` in ``basis`` (rows), or None."""
    v = tuple(v)
    if not basis:
        return () if not any(v) else None
    res = solve(IntMatrix.from_columns(basis, nrows=len(v)), v)
    return None if res is None else res[0]


def inverse_unimodular(m: IntMatrix) -> IntMatrix:
    n = m.nrows
    cols = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        res = solve(m, e)
        if res is None:
            raise ValueError("matrix is not unimodular")
        cols.append(res[0])
    return IntMatrix.from_columns(cols, nrows=n)


# -- finitely generated abelian groups --------------------------------------


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z/d1 + ... + Z/dk + Z^rank`` with ``d1 | d2 | ... | dk``, all ``>= 2``.

    Canonical coordinates list the torsion coordinates first (reduced mod
    ``d_i``) and then the free ones.  ``to_canonical`` / ``from_canonical``
    record how the generators of the presentation this group came from map
    to canonical coordinates and back; they do not take part in equality.
    """

    rank: int
    torsion: tuple[int, ...] = ()
    to_canonical: Optional[IntMatrix] = field(default=None, compare=False, repr=False)
    from_canonical: Optional[IntMatrix] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        t = tuple(self.torsion)
        object.__setattr__(self, "torsion", t)
        if any(d < 2 for d in t):
            raise ValueError("torsion coefficients must be >= 2")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError("torsion coefficients must form a divisor chain")

    @classmethod
    def free(cls, rank: int) -> "FgAbelianGroup":
        ident = IntMatrix.identity(rank)
        return cls(rank, (), ident, ident)

    @classmethod
    def cyclic(cls, n: int) -> "FgAbelianGroup":
        return fg_group([[n]], 1)

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.rank

    @property
    def moduli(self) -> tuple[int, ...]:
        """Modulus per canonical coordinate (0 for free coordinates)."""
        return self.torsion + (0,) * self.rank

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def is_free(self) -> bool:
        return not self.torsion

    def order(self) -> Optional[int]:
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def reduce(self, x: Sequence[int]) -> Vector:
        x = tuple(x)
        if len(x) != self.ngens:
            raise ValueError("element has wrong number of coordinates")
        return tuple(xi % d if d else xi for xi, d in zip(x, self.moduli))

    def zero(self) -> Vector:
        return (0,) * self.ngens

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.reduce(x))

    def equal(self, x, y) -> bool:
        return self.reduce(x) == self.reduce(y)

    def relations(self) -> IntMatrix:
        """Relation rows in canonical coordinates."""
        n = self.ngens
        return IntMatrix(
            [[d if j == i else 0 for j in range(n)] for i, d in enumerate(self.torsion)],
            ncols=n,
        )

    def project(self, x: Sequence[int]) -> Vector:
        """Canonical coordinates of an element given in presentation generators."""
        if self.to_canonical is None:
            raise ValueError("group has no presentation witness")
        return self.reduce(self.to_canonical @ x)

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"

    def describe(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


def fg_group(relations, ngens: int) -> FgAbelianGroup:
    """Canonical form of ``Z^ngens / (row lattice of relations)``."""
    rel = [tuple(r) for r in (relations.rows() if isinstance(relations, IntMatrix) else relations)]
    if not rel:
        return FgAbelianGroup.free(ngens)
    mat = IntMatrix(rel, ncols=ngens)
    d, _u, v = snf(mat)
    diag = diagonal(d) + [0] * (ngens - min(d.shape))
    keep = [i for i, x in enumerate(diag) if x != 1]
    torsion = tuple(diag[i] for i in keep if diag[i] != 0)
    rank = sum(1 for i in keep if diag[i] == 0)
    # row x of the relation lattice maps to x @ v, so generator e_j lands on row j of v
    vt = v.T
    vinv = inverse_unimodular(v)
    to_c = IntMatrix([vt.row(i) for i in keep], ncols=ngens)
    from_c = IntMatrix.from_columns([vinv.row(i) for i in keep], nrows=ngens) if keep else IntMatrix.zeros(ngens, 0)
    return FgAbelianGroup(rank, torsion, to_c, from_c)


@dataclass(frozen=True)
class GroupHom:
    source: FgAbelianGroup
    target: FgAbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        m = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.target.ngens, self.source.ngens):
            raise ValueError(f"matrix shape {m.shape} does not fit {self.target} <- {self.source}")

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.target.reduce(self.matrix @ tuple(x))

    def is_well_defined(self) -> bool:
        """Every source relation must land in the target relation lattice."""
        for i, d in enumerate(self.source.torsion):
            if not self.target.is_zero(tuple(d * c for c in self.matrix.col(i))):
                return False
        return True

    def compose(self, other: "GroupHom") -> "GroupHom":
        """``self ∘ other``."""
        return GroupHom(other.source, self.target, self.matrix @ other.matrix)

    def is_zero(self) -> bool:
        return all(self.target.is_zero(c) for c in self.matrix.columns())

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_trivial()

    def is_injective(self) -> bool:
        # x maps to zero iff  M x = T y  for some y in the target relation lattice
        n, t = self.source.ngens, self.target.ngens
        if n == 0:
            return True
        tor = self.target.torsion
        cols = list(self.matrix.columns()) + [
            tuple(-d if j == i else 0 for j in range(t)) for i, d in enumerate(tor)
        ]
        if t == 0:
            kern = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        else:
            kern = [k[:n] for k in kernel_basis(IntMatrix.from_columns(cols, nrows=t))]
        return all(self.source.is_zero(k) for k in kern)

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


def cokernel(f: GroupHom) -> tuple[FgAbelianGroup, GroupHom]:
    """Cokernel of ``f`` with its projection from ``f.target``."""
    tgt = f.target
    rel = list(tgt.relations().rows()) + list(f.matrix.columns())
    q = fg_group(rel, tgt.ngens)
    proj = GroupHom(tgt, q, q.to_canonical)
    return q, proj


def split_onto_free(p: GroupHom) -> GroupHom:
    """Section ``s`` of a surjection onto a free group, ``p ∘ s = id``."""
    if p.target.torsion:
        raise TargetNotFree(f"target {p.target} has torsion")
    coker, _ = cokernel(p)
    if not coker.is_trivial():
        raise NotSurjective(f"cokernel is {coker}")
    k = p.target.ngens
    cols = []
    for i in range(k):
        e = tuple(1 if j == i else 0 for j in range(k))
        res = solve(p.matrix, e)
        if res is None:  # pragma: no cover - excluded by the cokernel test
            raise NotSurjective(f"basis vector {i} has no preimage")
        cols.append(p.source.reduce(res[0]))
    return GroupHom(p.target, p.source, IntMatrix.from_columns(cols, nrows=p.source.ngens))


def vgcd(values: Iterable[int]) -> int:
    g = 0
    for x in values:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Vector:
    g = vgcd(v)
    return tuple(v) if g in (0, 1) else tuple(x // g for x in v)


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def vadd(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vscale(k: int, a: Sequence[int]) -> Vector:
    return tuple(k * x for x in a)
