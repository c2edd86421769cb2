"""Finitely presented commutative monoids and the bounded word problem."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterator, Optional, Sequence

from ..errors import BoundExhausted, TorsionPresent, UndecidedError, Unsupported, ValidationError
from ..intlat import FgAbelianGroup, GroupHom, IntMatrix, fg_group
from .affine import AffineMonoid
from .verdict import Verdict

Word = tuple

DEFAULT_BOUND = 32
BOX_CAP = 40000


@dataclass(frozen=True, eq=False)
class PresentedMonoid:
    """``<e_1..e_r | u_k = v_k>``; elements are words in ``N^r``.

    ``bound`` is the per-coordinate horizon used when exploring congruence
    classes.
    """

    ngens: int
    relations: tuple = ()
    bound: int = DEFAULT_BOUND
    name: str = field(default="", compare=False)
    labels: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        rels = []
        for u, v in self.relations:
            u, v = tuple(int(x) for x in u), tuple(int(x) for x in v)
            if len(u) != self.ngens or len(v) != self.ngens:
                raise ValidationError(f"relation {u} = {v} has wrong length")
            if min(u + v, default=0) < 0:
                raise ValidationError(f"relation {u} = {v} has negative entries")
            rels.append((u, v))
        object.__setattr__(self, "relations", tuple(rels))
        if self.bound < 1:
            raise ValidationError("bound must be positive")

    def __eq__(self, other) -> bool:
        return isinstance(other, PresentedMonoid) and (self.ngens, self.relations) == (other.ngens, other.relations)

    def __hash__(self) -> int:
        return hash((self.ngens, self.relations))

    def __repr__(self) -> str:
        rels = ", ".join(f"{u}={v}" for u, v in self.relations)
        return f"PresentedMonoid({self.ngens} | {rels})"

    @classmethod
    def free(cls, r: int, bound: int = DEFAULT_BOUND) -> "PresentedMonoid":
        return cls(r, (), bound)

    def with_bound(self, bound: int) -> "PresentedMonoid":
        return PresentedMonoid(self.ngens, self.relations, bound, self.name, self.labels)

    def label(self, i: int) -> str:
        if self.labels:
            return self.labels[i]
        return f"e{i + 1}"

    # -- element arithmetic ----------------------------------------------

    def zero(self) -> Word:
        return (0,) * self.ngens

    def add(self, a, b) -> Word:
        return tuple(x + y for x, y in zip(a, b))

    def element(self, word) -> Word:
        return tuple(word)

    def combine(self, word, elements) -> Word:
        out = [0] * self.ngens
        for c, e in zip(word, elements):
            if c:
                for i, x in enumerate(e):
                    out[i] += c * x
        return tuple(out)

    def word_of(self, x) -> Word:
        return tuple(x)

    def eq(self, a, b) -> Verdict:
        return word_equal(self, a, b)

    def same(self, a, b) -> bool:
        r = word_equal(self, a, b)
        if r is Verdict.UNDECIDED:
            raise UndecidedError(f"cannot decide {tuple(a)} = {tuple(b)} within bound {self.bound}")
        return r is Verdict.EQUAL

    # -- groupification ----------------------------------------------------

    @cached_property
    def gp_group(self) -> FgAbelianGroup:
        return fg_group([tuple(a - b for a, b in zip(u, v)) for u, v in self.relations], self.ngens)

    @cached_property
    def _gp_images(self) -> dict:
        return {}

    def gp_image(self, word) -> tuple:
        word = tuple(word)
        cache = self._gp_images
        img = cache.get(word)
        if img is None:
            g = self.gp_group
            img = cache[word] = g.reduce(g.to_canonical @ word)
        return img

    # -- congruence classes -------------------------------------------------

    @cached_property
    def _moves(self) -> tuple:
        moves = []
        for u, v in self.relations:
            if u != v:
                moves.append((u, v))
                moves.append((v, u))
        return tuple(moves)

    def explore(self, word, target=None, horizon: Optional[int] = None):
        """Breadth-first exploration of the class of ``word``.

        Only words with every coordinate ``<= horizon`` are visited.  Returns
        ``(visited, complete, found)``; ``complete`` means no move ever left
        the box, so ``visited`` is the whole class.
        """
        start = tuple(word)
        h = max(self.bound, max(start, default=0)) if horizon is None else horizon
        if target is not None:
            target = tuple(target)
            h = max(h, max(target, default=0))
        seen = {start}
        queue = deque([start])
        complete = True
        while queue:
            w = queue.popleft()
            if w == target:
                return seen, complete, True
            for lhs, rhs in self._moves:
                if all(a >= b for a, b in zip(w, lhs)):
                    nxt = tuple(a - b + c for a, b, c in zip(w, lhs, rhs))
                    if nxt in seen:
                        continue
                    if max(nxt) > h:
                        complete = False
                        continue
                    seen.add(nxt)
                    queue.append(nxt)
        return seen, complete, target is not None and target in seen

    @cached_property
    def unit_generators(self) -> tuple[int, ...]:
        """Generators occurring in a word equal to zero (found within the bound)."""
        cls, _, _ = self.explore(self.zero())
        return tuple(i for i in range(self.ngens) if any(w[i] for w in cls))

    def is_unit(self, word) -> bool:
        units = set(self.unit_generators)
        return all(i in units for i, c in enumerate(word) if c)

    def inverse_word(self, i: int) -> Word:
        """A word ``w`` with ``e_i + w = 0``."""
        cls, _, _ = self.explore(self.zero())
        best = min((w for w in cls if w[i]), key=lambda w: (sum(w), w))
        return tuple(c - int(j == i) for j, c in enumerate(best))

    @cached_property
    def unit_group(self) -> FgAbelianGroup:
        """Group of units, generated by ``unit_generators`` (in that order)."""
        idx = self.unit_generators
        rels = [
            tuple(u[i] - v[i] for i in idx)
            for u, v in self.relations
            if all(u[j] == 0 and v[j] == 0 for j in range(self.ngens) if j not in idx)
        ]
        return fg_group(rels, len(idx))

    def unit_coordinates(self, word) -> tuple:
        """Canonical coordinates in ``unit_group`` of a unit word."""
        g = self.unit_group
        return g.reduce(g.to_canonical @ tuple(word[i] for i in self.unit_generators))


def word_equal(q: PresentedMonoid, u, v) -> Verdict:
    """Bounded word problem: EQUAL, UNEQUAL (certified) or UNDECIDED.

    Unit words are compared exactly in the unit group; other words by
    exploring their classes up to the bound.
    """
    u, v = tuple(u), tuple(v)
    if u == v:
        return Verdict.EQUAL
    if q.gp_image(u) != q.gp_image(v):
        return Verdict.UNEQUAL
    if q.is_unit(u) and q.is_unit(v):
        same = q.unit_coordinates(u) == q.unit_coordinates(v)
        return Verdict.EQUAL if same else Verdict.UNEQUAL
    _, complete, found = q.explore(u, target=v)
    if found:
        return Verdict.EQUAL
    if complete:
        return Verdict.UNEQUAL
    _, complete, _ = q.explore(v, target=u)
    return Verdict.UNEQUAL if complete else Verdict.UNDECIDED


def words_of_degree(d: int, r: int) -> Iterator[Word]:
    """All words of total degree ``d`` in ``N^r``, lexicographically ascending."""
    if r == 0:
        if d == 0:
            yield ()
        return
    if r == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in words_of_degree(d - first, r - 1):
            yield (first,) + rest


def box_words(r: int, b: int) -> Iterator[Word]:
    return product(range(b + 1), repeat=r)


def box_side(r: int, bound: int, cap: int = BOX_CAP) -> int:
    """Largest side ``s <= bound`` with ``(s+1)^r <= cap``."""
    if r == 0:
        return bound
    s = bound
    while s > 1 and (s + 1) ** r > cap:
        s -= 1
    return s


def _reduced(u: Word, v: Word) -> tuple[Word, Word]:
    common = tuple(min(a, b) for a, b in zip(u, v))
    return tuple(a - c for a, c in zip(u, common)), tuple(b - c for b, c in zip(v, common))


def _classes_connected(q: PresentedMonoid, groups, horizon: Optional[int] = None) -> Verdict:
    """Whether each group of words lies in a single congruence class.

    Classes are first explored inside ``horizon``; pairs not joined there
    go to the full word problem.
    """
    worst = Verdict.EQUAL
    for ws in groups:
        if len(ws) < 2:
            continue
        cls, _, _ = q.explore(ws[0], horizon=horizon)
        for w in ws[1:]:
            if w in cls:
                continue
            r = word_equal(q, ws[0], w)
            if r is Verdict.UNEQUAL:
                return r
            if r is Verdict.UNDECIDED:
                worst = r
    return worst


def verify_presentation(q: PresentedMonoid, p: AffineMonoid, side: Optional[int] = None) -> bool:
    """Check that ``q`` presents ``p`` on the same generators.

    Distinct values must have distinct gp images in ``q`` (so word_equal
    certifies them unequal) and equal values within the box must be
    congruent.
    """
    if side is None:
        side = box_side(q.ngens, q.bound)
    for u, v in q.relations:
        if p.element(u) != p.element(v):
            return False
    g = q.gp_group
    coords = IntMatrix.from_columns([p.coordinates(x) for x in p.gens], nrows=p.rank) if p.gens else IntMatrix.zeros(p.rank, 0)
    induced = GroupHom(g, FgAbelianGroup.free(p.rank), coords @ g.from_canonical)
    if not induced.is_injective():
        return False
    groups: dict = {}
    for w in box_words(q.ngens, side):
        groups.setdefault(p.element(w), []).append(w)
    return _classes_connected(q, groups.values(), horizon=side) is Verdict.EQUAL


def present(p: AffineMonoid, bound: int = DEFAULT_BOUND, ceiling: Optional[int] = None) -> PresentedMonoid:
    """Finite presentation of ``p`` on its own generators.

    Words are enumerated by total degree up to ``D``; whenever a word has the
    value of an earlier, non-congruent word, the reduced pair becomes a
    relation.  ``D`` doubles until the presentation verifies, up to
    ``ceiling`` (default ``bound``).
    """
    cache = _PRESENT_CACHE.get((p, bound, ceiling))
    if cache is not None:
        return cache
    r = p.ngens
    ceiling = bound if ceiling is None else ceiling
    relations: list = []
    d = 2
    while True:
        top = min(d, ceiling)
        q = PresentedMonoid(r, tuple(relations), bound, p.name)
        reps: dict = {}
        for deg in range(top + 1):
            for w in words_of_degree(deg, r):
                val = p.element(w)
                if val not in reps:
                    reps[val] = w
                    continue
                if word_equal(q, w, reps[val]) is Verdict.EQUAL:
                    continue
                rel = _reduced(w, reps[val])
                if rel not in relations:
                    relations.append(rel)
                    q = PresentedMonoid(r, tuple(relations), bound, p.name)
        if verify_presentation(q, p):
            _PRESENT_CACHE[(p, bound, ceiling)] = q
            return q
        if top >= ceiling:
            raise BoundExhausted(f"no verified presentation found up to degree {ceiling}")
        d *= 2


_PRESENT_CACHE: dict = {}


def is_integral(q: PresentedMonoid, side: Optional[int] = None) -> Optional[bool]:
    """Cancellativity, checked on words within the box; None when undecided.

    ``q`` is integral iff words with equal gp image are congruent.
    """
    if side is None:
        side = box_side(q.ngens, q.bound, cap=20000)
    groups: dict = {}
    for w in box_words(q.ngens, side):
        groups.setdefault(q.gp_image(w), []).append(w)
    r = _classes_connected(q, groups.values(), horizon=side)
    return {Verdict.EQUAL: True, Verdict.UNEQUAL: False}.get(r)


def non_integral_witness(q: PresentedMonoid, side: Optional[int] = None) -> Optional[tuple[Word, Word]]:
    """Two distinct elements with the same gp image, if one is found."""
    if side is None:
        side = box_side(q.ngens, q.bound, cap=20000)
    groups: dict = {}
    for w in box_words(q.ngens, side):
        groups.setdefault(q.gp_image(w), []).append(w)
    for ws in groups.values():
        for w in ws[1:]:
            if word_equal(q, ws[0], w) is Verdict.UNEQUAL:
                return ws[0], w
    return None


def to_affine(q: PresentedMonoid):
    """Realise an integral, torsion-free presented monoid inside its group.

    Returns ``(affine, realization)``; generator i goes to its gp image.
    """
    from .homs import MonoidHom

    g = q.gp_group
    if g.torsion:
        raise TorsionPresent(f"groupification {g} has torsion")
    integral = is_integral(q)
    if integral is None:
        raise UndecidedError("integrality undecided within the bound")
    if not integral:
        raise Unsupported("monoid is not integral")
    images = [q.gp_image(e) for e in _basis_words(q.ngens)]
    affine = AffineMonoid.from_vectors(images, dim=g.rank, name=q.name)
    return affine, MonoidHom(q, affine, tuple(images))


def _basis_words(r: int) -> list[Word]:
    return [tuple(int(i == j) for j in range(r)) for i in range(r)]


def sharpen_presented(q: PresentedMonoid):
    """Quotient by the units: unit generators are set to zero.

    Returns ``(sharp, quotient)`` where the sharp monoid keeps the non-unit
    generators in order.
    """
    from .homs import MonoidHom

    units = set(q.unit_generators)
    keep = [i for i in range(q.ngens) if i not in units]
    rels = []
    for u, v in q.relations:
        a, b = tuple(u[i] for i in keep), tuple(v[i] for i in keep)
        if a != b and (a, b) not in rels:
            rels.append((a, b))
    labels = tuple(q.label(i) for i in keep) if q.labels else None
    sharp = PresentedMonoid(len(keep), tuple(rels), q.bound, q.name and f"{q.name}/units", labels)
    images = []
    for i in range(q.ngens):
        images.append(tuple(int(keep[j] == i) for j in range(len(keep))) if i not in units else sharp.zero())
    return sharp, MonoidHom(q, sharp, tuple(images))
