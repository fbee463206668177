"""Exact computations in supercharacter rings of basic classical Lie superalgebras.

The package is organized in layers: `laurent` (exact Laurent-polynomial
arithmetic on weight lattices), `rootdata` (root systems and Weyl machinery
for the supported families), `jring` (membership and invariance tests for the
supercharacter ring), `schar` (the shipped generator families and Kac-module
supercharacters), `hweights` (highest-weight admissibility), `decomp`
(constructive reduction of ring members to generators), and `groupoid`
(the Weyl-groupoid action and its invariants).
"""

from .laurent import Lattice, LaurentPoly, ExactDivisionError
from .rootdata import RootSystemData, RootSystemId, build, parse_id
from .jring import is_member, MembershipReport, invariance_obstruction
from .schar import (
    GeneratorSpec,
    special_generator,
    h_series,
    kac_supercharacter,
    even_character,
)

__all__ = [
    "Lattice",
    "LaurentPoly",
    "ExactDivisionError",
    "RootSystemData",
    "RootSystemId",
    "build",
    "parse_id",
    "is_member",
    "MembershipReport",
    "invariance_obstruction",
    "GeneratorSpec",
    "special_generator",
    "h_series",
    "kac_supercharacter",
    "even_character",
    "__version__",
]

__version__ = "0.1.0"
