"""Finite poset sites with declared covering families."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from ..errors import ValidationError


@dataclass(frozen=True, eq=False)
class FiniteSite:
    """A finite poset whose elements are the objects of the site.

    ``below[x]`` is the set of ``y <= x``.  ``covers[x]`` lists the declared
    nontrivial covering families of ``x``; the trivial family ``{x}`` is
    always a cover and is not stored.
    """

    name: str
    elements: tuple
    below: Mapping[str, frozenset]
    covers: Mapping[str, tuple] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        name: str,
        elements: Sequence[str],
        relations: Iterable[tuple[str, str]] = (),
        covers: Mapping[str, Sequence[Sequence[str]]] | None = None,
        close: bool = False,
    ) -> "FiniteSite":
        """Build from strict relations ``(y, x)`` meaning ``y < x``.

        With ``close=False`` the relations must already be transitively
        closed; a missing composite is reported by naming the pair.
        """
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise ValidationError("duplicate site element")
        known = set(elements)
        less = {x: set() for x in elements}
        for y, x in relations:
            for e in (x, y):
                if e not in known:
                    raise ValidationError(f"unknown site element {e!r}")
            if x == y:
                raise ValidationError(f"relation {y} < {x} is not strict")
            less[x].add(y)
        if close:
            changed = True
            while changed:
                changed = False
                for x in elements:
                    extra = set().union(*(less[y] for y in less[x])) - less[x] if less[x] else set()
                    if extra:
                        less[x] |= extra
                        changed = True
        else:
            for x in elements:
                for y in sorted(less[x], key=elements.index):
                    for z in sorted(less[y], key=elements.index):
                        if z not in less[x]:
                            raise ValidationError(
                                f"order is not transitive: {z} < {y} < {x} but the pair ({z}, {x}) is not declared"
                            )
        for x in elements:
            if x in less[x] or any(x in less[y] for y in less[x]):
                raise ValidationError(f"order has a cycle through {x}")
        below = {x: frozenset(less[x] | {x}) for x in elements}
        cov = {}
        for x, fams in (covers or {}).items():
            if x not in known:
                raise ValidationError(f"cover of unknown element {x!r}")
            out = []
            for fam in fams:
                fam = tuple(fam)
                for u in fam:
                    if u not in below[x]:
                        raise ValidationError(f"cover member {u} of {x} is not below {x}")
                for y in below[x]:
                    if y != x and not any(y in below[u] for u in fam) and x not in fam:
                        raise ValidationError(f"cover {list(fam)} of {x} does not reach {y}")
                out.append(fam)
            cov[x] = tuple(out)
        return cls(name, elements, below, cov)

    # -- order -------------------------------------------------------------

    def leq(self, y: str, x: str) -> bool:
        return y in self.below[x]

    def strictly_below(self, x: str) -> list[str]:
        return [y for y in self.elements if y != x and y in self.below[x]]

    def down(self, x: str) -> list[str]:
        return [y for y in self.elements if y in self.below[x]]

    def pairs(self) -> list[tuple[str, str]]:
        """All strict pairs ``(x, y)`` with ``y < x``, in element order."""
        return [(x, y) for x in self.elements for y in self.strictly_below(x)]

    def bottom_up(self) -> list[str]:
        """Elements ordered so that everything below ``x`` comes first."""
        return sorted(self.elements, key=lambda x: (len(self.below[x]), self.elements.index(x)))

    def covered(self, x: str) -> bool:
        return bool(self.covers.get(x))

    def families(self, x: str) -> list[tuple]:
        return [(x,)] + list(self.covers.get(x, ()))

    def has_trivial_covers(self) -> bool:
        return not any(self.covers.values())

    def overlaps(self, u: str, v: str) -> list[str]:
        """Maximal elements below both ``u`` and ``v``."""
        common = [w for w in self.elements if w in self.below[u] and w in self.below[v]]
        return [w for w in common if not any(w != z and w in self.below[z] for z in common)]

    def interval(self, y: str, x: str) -> list[str]:
        """Elements ``z`` with ``y < z < x``."""
        return [z for z in self.elements if z not in (x, y) and y in self.below[z] and z in self.below[x]]

    def __repr__(self) -> str:
        return f"FiniteSite({self.name!r}, {list(self.elements)})"


def point_site(name: str = "pt", element: str = "pt") -> FiniteSite:
    return FiniteSite.build(name, [element])


@dataclass(frozen=True)
class SiteMorphism:
    """Monotone map ``source -> target`` of finite sites."""

    source: FiniteSite
    target: FiniteSite
    mapping: Mapping[str, str]

    def __post_init__(self):
        for s in self.source.elements:
            if s not in self.mapping:
                raise ValidationError(f"site map does not send {s} anywhere")
            if self.mapping[s] not in self.target.elements:
                raise ValidationError(f"{s} is sent to unknown element {self.mapping[s]}")
        for x, y in self.source.pairs():
            if not self.target.leq(self.mapping[y], self.mapping[x]):
                raise ValidationError(f"site map is not monotone on {y} < {x}")
        for x, fams in self.source.covers.items():
            for fam in fams:
                img = tuple(self.mapping[u] for u in fam)
                fx = self.mapping[x]
                if fx not in img and img not in self.target.covers.get(fx, ()):
                    raise ValidationError(f"cover {list(fam)} of {x} does not map to a cover")

    def __call__(self, s: str) -> str:
        return self.mapping[s]

    def compose(self, other: "SiteMorphism") -> "SiteMorphism":
        """``self ∘ other``."""
        return SiteMorphism(other.source, self.target, {s: self.mapping[other.mapping[s]] for s in other.source.elements})

    @classmethod
    def identity(cls, site: FiniteSite) -> "SiteMorphism":
        return cls(site, site, {x: x for x in site.elements})
