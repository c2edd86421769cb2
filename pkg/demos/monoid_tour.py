"""A walk through the monoid layer on two small examples.

Run: python3 demos/monoid_tour.py
"""

from logstruct.corpus import A1_CONE, TWO_THREE
from logstruct.monoids import (
    AffineMonoid,
    c_n,
    hilbert_basis,
    membership,
    predicates,
    present,
    saturate,
    word_equal,
)


def show(title, value):
    print(f"{title:<34} {value}")


def main():
    p = TWO_THREE
    print("The numerical monoid <2,3> inside Z")
    show("predicates", {k: v for k, v in predicates(p).as_dict().items() if isinstance(v, bool)})
    show("5 = 2 + 3?", membership(p, (5,)).coefficients)
    no = membership(p, (1,))
    show("is 1 a member?", f"{no.member} (certificate: {no.certificate})")
    show("saturation", saturate(p).gens)
    q = present(p)
    show("presentation", q.relations)
    # 3*2 and 2*3 name the same element; 2 and 3 do not
    show("word (3,0) vs (0,2)", word_equal(q, (3, 0), (0, 2)).name)
    show("word (1,0) vs (0,1)", word_equal(q, (1, 0), (0, 1)).name)
    print()

    print("The cone of the A1 singularity, <(1,0),(1,1),(1,2)>")
    show("Hilbert basis of its cone", hilbert_basis(A1_CONE.gens, 2))
    show("presentation", present(A1_CONE).relations)
    for n in (2, 3, 4):
        show(f"C_{n}", c_n(A1_CONE, n))
    print()

    print("A monoid that is saturated in its own group but not in Z^2")
    c = AffineMonoid(2, ((2, 1), (1, 2)))
    show("saturation in its group", saturate(c).gens)
    show("saturation in Z^2", saturate(c, lattice="ambient").gens)
    show("Hilbert basis of the cone in Z^2", hilbert_basis(c.gens, 2))


if __name__ == "__main__":
    main()
