"""Affine and presented commutative monoids."""

from .affine import (
    AffineMonoid,
    Membership,
    hilbert_basis,
    irreducibles,
    is_saturated,
    is_sharp,
    membership,
    saturate,
    sharpen,
    units,
)
from .constructions import (
    Cokernel,
    Groupification,
    Predicates,
    Pushout,
    as_presented,
    direct_sum,
    gp,
    group_monoid,
    hom_cokernel,
    predicates,
    pushout,
    trivial_monoid,
)
from .homs import MonoidHom
from .kummer import KummerData, c_n, kummer
from .presented import (
    PresentedMonoid,
    is_integral,
    non_integral_witness,
    present,
    sharpen_presented,
    to_affine,
    verify_presentation,
    word_equal,
)
from .verdict import Verdict, tristate
