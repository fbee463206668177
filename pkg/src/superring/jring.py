"""Membership testing for the ring J(g) inside Z[P0]^{W0}.

A Weyl-invariant Laurent polynomial f belongs to J(g) when, for every
isotropic root alpha, the derivation D_alpha f = sum (alpha, lam) c_lam e^lam
lies in the principal ideal (e^alpha - 1).  For A(1,1) the isotropic roots
come in coinciding pairs and the condition sharpens to the square of the
ideal.  Membership in (e^alpha - 1) is checked coset by coset: the sum of
coefficients along every Z*alpha translation class must vanish.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple

from .laurent import (
    LaurentPoly,
    Weight,
    coset_sums,
    derivation_components,
    divide_by_ideal_gen,
    in_ideal,
    w_scale,
)
from .rootdata import RootSystemData
from .scalars import scalar_is_zero


@dataclass(frozen=True)
class MembershipReport:
    """Outcome of an is_member test, with a witness when it fails.

    failing_coset is a pair (base weight, deficit): the lexicographically
    largest support weight of the offending derivation coset together with
    the nonzero coefficient sum along that coset.  invariance_failure is the
    index of a Weyl generator that moved f, when invariance itself failed.
    """

    is_member: bool
    failing_root: Optional[Weight] = None
    failing_coset: Optional[Tuple[Weight, object]] = None
    invariance_failure: Optional[int] = None

    def __bool__(self) -> bool:
        return self.is_member


def _check_lattice(data: RootSystemData, f: LaurentPoly) -> None:
    if f.lattice != data.lattice:
        raise ValueError(
            "polynomial lives on %r but %s uses %r"
            % (f.lattice, data.name, data.lattice)
        )
    if data.degree_zero_required:
        for w in f.terms:
            if sum(w) != 0:
                raise ValueError(
                    "%s weights must have coordinate sum zero; got %r"
                    % (data.name, w)
                )


def _worst_coset(poly: LaurentPoly, alpha: Weight) -> Tuple[Weight, object]:
    # Report the failing coset whose lex-largest support weight is largest.
    sums = coset_sums(poly, alpha)
    bad = {key for key, s in sums.items() if not scalar_is_zero(s)}
    best = None
    from .laurent import coset_key

    for w in poly.terms:
        if coset_key(w, alpha) in bad and (best is None or w > best):
            best = w
    assert best is not None
    return best, sums[coset_key(best, alpha)]


def _alpha_condition(
    poly: LaurentPoly, alpha: Weight, squared: bool
) -> Optional[Tuple[Weight, object]]:
    """None if poly is in (e^alpha - 1) (squared: in its square), else witness."""
    if poly.is_zero():
        return None
    if not in_ideal(poly, alpha):
        return _worst_coset(poly, alpha)
    if squared:
        quotient = divide_by_ideal_gen(poly, alpha)
        if not in_ideal(quotient, alpha):
            return _worst_coset(quotient, alpha)
    return None


def is_member(data: RootSystemData, f: LaurentPoly) -> MembershipReport:
    """Decide whether f lies in J(g), with a failure witness if not."""
    _check_lattice(data, f)
    for idx, gen in enumerate(data.w0.generators):
        if gen.apply(f) != f:
            return MembershipReport(False, invariance_failure=idx)
    squared = data.iso_multiplicity == 2
    for alpha in data.positive_isotropic:
        for comp, _den in derivation_components(f, alpha, data.form):
            witness = _alpha_condition(comp, alpha, squared)
            if witness is not None:
                return MembershipReport(
                    False, failing_root=alpha, failing_coset=witness
                )
    return MembershipReport(True)


def _primitive_ray(alpha: Weight) -> Weight:
    g = 0
    for c in alpha:
        g = gcd(g, abs(c))
    return w_scale(alpha, Fraction(1, g)) if g > 1 else alpha


def invariance_obstruction(
    data: RootSystemData, f: LaurentPoly
) -> Optional[Tuple[Weight, Weight]]:
    """First isotropic hyperplane obstruction (alpha, coset base), or None.

    f restricted to the wall (., alpha) = 0 must be insensitive to the
    reflection-free identifications e^lam ~ e^{lam + q alpha}; concretely
    every coset along the primitive ray with (lam, alpha) != 0 must have
    vanishing coefficient sum.  Used by the groupoid layer.
    """
    for alpha in data.positive_isotropic:
        ray = _primitive_ray(alpha)
        for key, s in sorted(coset_sums(f, ray).items()):
            if scalar_is_zero(s):
                continue
            if not scalar_is_zero(data.pair(key, alpha)):
                return alpha, key
    return None


def equivalent_condition_check(data: RootSystemData, f: LaurentPoly) -> bool:
    """For A(1,1): does the derive/divide/derive reading agree with is_member?

    The squared-ideal condition can be restated as: D_alpha f is divisible
    by e^alpha - 1 and D_alpha of the quotient lands back in (e^alpha - 1).
    Returns True when that reading and the direct test reach the same verdict.
    """
    if data.iso_multiplicity != 2:
        raise ValueError("reformulation check only applies to A(1,1)")
    _check_lattice(data, f)
    direct = bool(is_member(data, f))
    reformulated = all(g.apply(f) == f for g in data.w0.generators)
    if reformulated:
        for alpha in data.positive_isotropic:
            for comp, _den in derivation_components(f, alpha, data.form):
                if comp.is_zero():
                    continue
                if not in_ideal(comp, alpha):
                    reformulated = False
                    break
                quotient = divide_by_ideal_gen(comp, alpha)
                for inner, _d in derivation_components(quotient, alpha, data.form):
                    if not in_ideal(inner, alpha):
                        reformulated = False
                        break
                if not reformulated:
                    break
            if not reformulated:
                break
    return direct == reformulated


_SUBRING_FAMILIES = {
    "GL": ("GL",),
    "degree-0": ("SL", "PSL"),
    "J0plus": ("C",),
    "even": ("A11",),
}


def subring_member(data: RootSystemData, f: LaurentPoly, subring: str) -> bool:
    """Membership in a distinguished subring of J(g).

    "GL": the part of J(gl) with integral exponents (the character ring
    image).  "degree-0": integral-class part of J(sl)/J(psl).  "J0plus":
    the subring of J(osp(2|2n)) fixed by the extra flip x -> 1/x.
    "even": the even-degree part of J for A(1,1).
    """
    if subring not in _SUBRING_FAMILIES:
        raise ValueError("unknown subring tag %r" % (subring,))
    if data.id.family not in _SUBRING_FAMILIES[subring]:
        raise ValueError(
            "subring %r is not defined for %s" % (subring, data.name)
        )
    _check_lattice(data, f)
    if not is_member(data, f):
        return False
    denom = data.lattice.denom
    if subring in ("GL", "degree-0"):
        return all(c % denom == 0 for w in f.terms for c in w)
    if subring == "J0plus":
        # f = f0(u,v) + x f1(u,v); the flip x -> 1/x fixes f0, f1 and sends
        # x to u - x, so it fixes f exactly when f1 = 0.
        flipped = LaurentPoly(
            f.lattice, {(-w[0],) + w[1:]: c for w, c in f.terms.items()}
        )
        return flipped == f
    return all(sum(w) % 2 == 0 for w in f.terms)
