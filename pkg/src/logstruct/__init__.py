"""Exact arithmetic for log structures on finite poset sites.

Subpackages:

- ``intlat``: integer matrices, Hermite and Smith forms, finitely generated abelian groups
- ``monoids``: affine and presented commutative monoids
- ``logsite``: sites, monoid sheaves, Kato and DF log structures, charts
- ``rootstack``: Kummer levels, root-stack towers, toric export
- ``cli``: the ``logstruct`` command
"""

from . import corpus, intlat, logsite, monoids, rootstack
from .errors import LogStructError

__version__ = "0.1.0"

__all__ = ["LogStructError", "corpus", "intlat", "logsite", "monoids", "rootstack", "__version__"]
