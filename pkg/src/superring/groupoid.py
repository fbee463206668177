"""Super Weyl groupoid: the even Weyl group glued to the isotropic shifts.

The groupoid has two components.  One is the group W0 itself, a single-object
groupoid acting linearly on the whole weight space.  The other sits over the
set of isotropic roots: the only morphism leaving alpha besides the identities
is tau_alpha, landing at -alpha, and W0 is allowed to twist the picture, so a
general morphism alpha -> beta is a pair (w, maybe-tau) with beta = +-w(alpha).
tau_alpha moves points of the hyperplane (alpha, x) = 0 by alpha; since alpha
pairs to zero with itself the shift stays on the hyperplane.

Invariance of a Laurent polynomial under all of this is what the membership
conditions cut out, so the test here is deliberately independent of jring's
divisibility route: even invariance is checked generator by generator, and the
hyperplane condition is the exact coset-sum criterion (two exponentials agree
on the wall iff their exponents differ along Q*alpha, and composing with the
shift scales a coset by a nonzero factor exactly when (lam, alpha) != 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .jring import invariance_obstruction
from .laurent import LaurentPoly, Weight, w_neg
from .rootdata import RootSystemData
from .weyl import WeylElement, mat_apply

__all__ = [
    "AffineActionPiece",
    "ComposabilityError",
    "GroupoidMorphism",
    "all_morphisms",
    "compose",
    "group_morphism",
    "identity",
    "inverse",
    "is_invariant",
    "iso_morphism",
    "tau",
]


class ComposabilityError(ValueError):
    """Raised when two morphisms do not chain (components or bases differ)."""


@dataclass(frozen=True)
class GroupoidMorphism:
    """A morphism of the super Weyl groupoid.

    source None marks the group component (one base point, morphisms = W0).
    Otherwise source is an isotropic root, uses_tau says whether the shift
    leg is taken, and the morphism ends at w(source) or w(-source).
    """

    matrix: Tuple[Tuple[int, ...], ...]
    sign: int
    source: Optional[Weight] = None
    uses_tau: bool = False

    def __post_init__(self):
        if self.source is None and self.uses_tau:
            raise ValueError("the group component carries no shift morphisms")

    @property
    def element(self) -> WeylElement:
        return WeylElement(self.matrix, self.sign)

    def target(self) -> Optional[Weight]:
        if self.source is None:
            return None
        img = mat_apply(self.matrix, self.source)
        return w_neg(img) if self.uses_tau else img

    def is_identity(self) -> bool:
        dim = len(self.matrix)
        return (not self.uses_tau and
                self.matrix == WeylElement.identity(dim).matrix)

    def describe(self) -> str:
        if self.source is None:
            return "group element" if not self.is_identity() else "identity"
        arrow = "%s -> %s" % (self.source, self.target())
        return ("tau-shift " if self.uses_tau else "plain ") + arrow


@dataclass(frozen=True)
class AffineActionPiece:
    """The partial affine map a morphism acts by: x -> linear(x) + shift.

    hyperplane is the isotropic root cutting the domain wall (alpha, x) = 0,
    or None when the map is defined on the whole space.  A nonzero shift only
    ever appears together with a hyperplane, and equals the image of that
    root, so it is isotropic and parallel to the wall.
    """

    hyperplane: Optional[Weight]
    linear: Tuple[Tuple[int, ...], ...]
    shift: Weight

    def __post_init__(self):
        if any(self.shift) and self.hyperplane is None:
            raise ValueError("a shift needs a hyperplane domain")

    def apply(self, data: RootSystemData, x: Weight) -> Weight:
        if self.hyperplane is not None:
            from .laurent import scalar_is_zero

            if not scalar_is_zero(data.pair(x, self.hyperplane)):
                raise ValueError(
                    "%r is not on the hyperplane of %r" % (x, self.hyperplane))
        img = mat_apply(self.linear, x)
        return tuple(a + b for a, b in zip(img, self.shift))


def _require_isotropic(data: RootSystemData, alpha: Weight) -> None:
    if alpha not in data.isotropic_roots:
        raise ValueError("%r is not an isotropic root of %s" % (alpha, data.name))


def group_morphism(data: RootSystemData, w: WeylElement) -> GroupoidMorphism:
    return GroupoidMorphism(w.matrix, w.sign)


def iso_morphism(data: RootSystemData, w: WeylElement, alpha: Weight,
                 uses_tau: bool = False) -> GroupoidMorphism:
    _require_isotropic(data, alpha)
    return GroupoidMorphism(w.matrix, w.sign, alpha, uses_tau)


def tau(data: RootSystemData, alpha: Weight) -> GroupoidMorphism:
    """The shift morphism alpha -> -alpha over the identity of W0."""
    _require_isotropic(data, alpha)
    e = WeylElement.identity(data.lattice.dim)
    return GroupoidMorphism(e.matrix, 1, alpha, True)


def identity(data: RootSystemData,
             source: Optional[Weight] = None) -> GroupoidMorphism:
    if source is not None:
        _require_isotropic(data, source)
    e = WeylElement.identity(data.lattice.dim)
    return GroupoidMorphism(e.matrix, 1, source, False)


def compose(g1: GroupoidMorphism, g2: GroupoidMorphism) -> GroupoidMorphism:
    """g1 after g2.  Bases must chain: source of g1 = target of g2."""
    if (g1.source is None) != (g2.source is None):
        raise ComposabilityError("morphisms live in different components")
    w = g1.element * g2.element
    if g1.source is None:
        return GroupoidMorphism(w.matrix, w.sign)
    if g1.source != g2.target():
        raise ComposabilityError(
            "cannot compose: %s after %s" % (g1.describe(), g2.describe()))
    # the shift legs toggle: going down the wall and back cancels the shift
    return GroupoidMorphism(w.matrix, w.sign, g2.source,
                            g1.uses_tau != g2.uses_tau)


def inverse(g: GroupoidMorphism) -> GroupoidMorphism:
    w = g.element.inverse()
    if g.source is None:
        return GroupoidMorphism(w.matrix, w.sign)
    return GroupoidMorphism(w.matrix, w.sign, g.target(), g.uses_tau)


def action_piece(data: RootSystemData, g: GroupoidMorphism) -> AffineActionPiece:
    """The partial affine map pi(g)."""
    if g.source is None or not g.uses_tau:
        zero = (0,) * data.lattice.dim
        hyper = g.source if g.source is not None else None
        return AffineActionPiece(hyper, g.matrix, zero)
    shift = mat_apply(g.matrix, g.source)
    return AffineActionPiece(g.source, g.matrix, shift)


def act(data: RootSystemData, g: GroupoidMorphism, x: Weight) -> Weight:
    """Apply pi(g) to a point (scaled lattice coordinates)."""
    return action_piece(data, g).apply(data, x)


def all_morphisms(data: RootSystemData) -> Tuple[GroupoidMorphism, ...]:
    """Every morphism of both components (finite; meant for small ranks)."""
    out = [GroupoidMorphism(w.matrix, w.sign) for w in data.w0.elements()]
    for w in data.w0.elements():
        for alpha in data.isotropic_roots:
            for t in (False, True):
                out.append(GroupoidMorphism(w.matrix, w.sign, alpha, t))
    return tuple(out)


def is_invariant(data: RootSystemData, f: LaurentPoly) -> bool:
    """Invariance under the whole groupoid action.

    The group component demands plain W0-invariance.  A shift morphism
    tau_alpha fixes f exactly when, restricted to the wall of alpha, the
    composition with the shift changes nothing; support cosets along alpha
    with (lam, alpha) != 0 each pick up a nonzero factor, so their
    coefficient sums must vanish.
    """
    if f.lattice != data.lattice:
        raise ValueError("lattice mismatch")
    for gen in data.w0.generators:
        if gen.apply(f) != f:
            return False
    return invariance_obstruction(data, f) is None
