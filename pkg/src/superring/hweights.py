"""Highest-weight admissibility for the systems with irreducible odd part.

For these families the even algebra splits into the special-root factor and
its orthogonal complement, with the isotropic simple root written as
delta - omega.  The level count j(L) = k - (L,delta)/(delta,delta) measures
how far a weight sits below the top level k; a dominant integral weight is a
highest weight of a finite-dimensional module iff either j <= 0 or the
reflection-group orbit of lambda + rho meets the level set L_j cut out by
j + 1 polynomial conditions.  The classical per-family clause lists
(is_admissible_kac) are implemented verbatim next to the geometric test
(is_admissible_geometric), and the equivalence of the two is re-executed
exhaustively by the test suite at desk ranks.

Weights crossing this interface are scaled lattice tuples, as everywhere in
the package.  Every operation here demands a system whose odd part is
irreducible over the even part (type II) and raises ValueError otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

from .laurent import LaurentPoly, Weight, w_add, w_scale, w_sub
from .rootdata import RootSystemData
from .scalars import scalar_is_zero
from .weyl import (
    EvenFactor,
    _basis_solver,
    decompose_into_characters,
    is_dominant_integral,
    pairing,
)


def _require_type_two(data: RootSystemData) -> None:
    if data.type_flag != "II":
        raise ValueError(
            f"{data.name} has a reducible odd part; no admissibility machinery applies")


def _block_indices(factor: EvenFactor) -> frozenset:
    idx = set()
    for p in factor.positives:
        for i, c in enumerate(p):
            if c:
                idx.add(i)
    return frozenset(idx)


def _project(w: Weight, idx: frozenset, keep: bool) -> Weight:
    return tuple(c if (i in idx) == keep else 0 for i, c in enumerate(w))


# --------------------------------------------------------------------------
# the weight type


@dataclass(frozen=True)
class HighestWeight:
    """A dominant integral weight with its two even-factor projections.

    full = mu1 + lambda2 coordinatewise; mu1 lives on the special-root block,
    lambda2 on the complementary one.
    """

    full: Weight
    mu1: Weight
    lambda2: Weight


def highest_weight(data: RootSystemData, coords) -> HighestWeight:
    """Validate rational coordinates and split them along the even factors.

    Dominance and integrality are checked against every even factor; this is
    exactly the highest-weight condition for the even algebra (for the
    orthosymplectic families it forces the epsilon-block entries to be all
    integers or all half-integers, and the delta-block entries to be
    integers).
    """
    _require_type_two(data)
    w = data.lattice.weight(*coords)
    for fac in data.even_factors:
        if not is_dominant_integral(fac, w):
            raise ValueError(
                f"{data.lattice.coords(w)} is not dominant integral for {fac.name}")
    idx1 = _block_indices(data.factor1)
    return HighestWeight(full=w,
                         mu1=_project(w, idx1, True),
                         lambda2=_project(w, idx1, False))


@dataclass(frozen=True)
class AdmissibilityVerdict:
    """Outcome of both admissibility tests for one weight.

    witness, when present, is an orbit element lying in the level set and
    implies geometric = True.
    """

    geometric: bool
    kac_list: bool
    j_value: int
    witness: Optional[Weight] = None

    def __post_init__(self):
        if self.witness is not None and not self.geometric:
            raise ValueError("a witness certifies the geometric verdict")


# --------------------------------------------------------------------------
# the level number and the level sets


def j_of(data: RootSystemData, hw) -> int:
    """Level number k - (L,delta)/(delta,delta); exact, and always an integer
    for weights on the lattice."""
    _require_type_two(data)
    w = hw.full if isinstance(hw, HighestWeight) else tuple(hw)
    sp = data.split
    ratio = pairing(data.form, data.lattice.denom, w, sp.delta) / 2
    if ratio.denominator != 1:
        raise ValueError(f"(L,delta)/(delta,delta) = {ratio} is not an integer; "
                         f"the weight is off the lattice")
    return sp.k - int(ratio)


def _f_vanishes(data: RootSystemData, nu: Weight) -> bool:
    # F(nu) = prod (nu, alpha) over the positive roots of the complement factor
    return any(scalar_is_zero(data.pair(nu, a)) for a in data.factor2.positives)


def in_Lj(data: RootSystemData, nu: Weight, j: int) -> bool:
    """Exact test of the j+1 defining conditions of the level set L_j:
    F(nu) != 0, F(nu - i*omega) = 0 for 0 < i < j, and the pairing with omega
    equals that of rho + (j-k)*omega."""
    _require_type_two(data)
    sp = data.split
    if not 1 <= j <= sp.k:
        raise ValueError(f"level index {j} outside 1..{sp.k}")
    nu = tuple(nu)
    if _f_vanishes(data, nu):
        return False
    for i in range(1, j):
        if not _f_vanishes(data, w_sub(nu, w_scale(sp.omega, i))):
            return False
    target = w_add(data.rho2, w_scale(sp.omega, j - sp.k))
    diff = data.pair(nu, sp.omega) - data.pair(target, sp.omega)
    return scalar_is_zero(diff)


def _geometric(data: RootSystemData, hw: HighestWeight):
    j = j_of(data, hw)
    if j <= 0:
        return True, None, j
    if data.factor2 is None:        # k = 0 there, so j <= 0 always; defensive
        return False, None, j
    start = w_add(hw.lambda2, data.rho2)
    for nu in sorted(data.factor2.group.orbit(start)):
        if in_Lj(data, nu, j):
            return True, nu, j
    return False, None, j


def is_admissible_geometric(data: RootSystemData, hw: HighestWeight) -> bool:
    """True when j <= 0 or the orbit of lambda2 + rho meets L_j at j = j(L)."""
    ok, _, _ = _geometric(data, hw)
    return ok


def geometric_witness(data: RootSystemData, hw: HighestWeight) -> Optional[Weight]:
    """An element of W(lambda2 + rho) inside the level set, if one exists."""
    _, witness, _ = _geometric(data, hw)
    return witness


def is_admissible_kac(data: RootSystemData, hw: HighestWeight) -> bool:
    """The classical per-family clause lists, transcribed literally.

    Coordinates follow the root tables of this package; in particular the
    D(2,1;a) clauses read the sign convention where dominant weights have
    second and third coordinates <= 0.
    """
    _require_type_two(data)
    c = data.lattice.coords(hw.full)
    fam = data.id.family
    if fam in ("B", "D"):
        m = data.id.m
        lam, mu = c[:m], c[m:]
        mu_n = mu[-1]
        if mu_n >= m:
            return True
        j = m - mu_n           # integral: the delta block is integer-valued
        if not 0 < j <= m:
            return False
        return all(x == 0 for x in lam[m - int(j):])
    if fam == "G3":
        l1, l2, mu = c
        return (mu >= 3) or (mu == 2 and l2 == 2 * l1) \
            or (mu == 0 and l1 == 0 and l2 == 0)
    if fam == "F4":
        l1, l2, l3, mu_half = c
        mu = 2 * mu_half       # the sl(2) label of the weight
        return (mu >= 4) or (mu == 3 and l1 == l2 + l3 - Fraction(1, 2)) \
            or (mu == 2 and l1 == l2 and l3 == 0) \
            or (mu == 0 and l1 == 0 and l2 == 0 and l3 == 0)
    if fam == "D21":
        l1, l2, l3 = c
        if l1 >= 2:
            return True
        if l1 == 1:
            if data.id.irrational:
                return False
            return l2 - 1 == abs(data.id.alpha) * (l3 - 1)
        return l1 == 0 and l2 == 0 and l3 == 0
    raise ValueError(f"no admissibility clause list for {data.name}")


def admissibility_verdict(data: RootSystemData, hw: HighestWeight) -> AdmissibilityVerdict:
    """Run both tests and package the outcome."""
    geo, witness, j = _geometric(data, hw)
    return AdmissibilityVerdict(geometric=geo,
                                kac_list=is_admissible_kac(data, hw),
                                j_value=j,
                                witness=witness)


# --------------------------------------------------------------------------
# the leading-term link between members and admissible weights


class LeadingTerm(NamedTuple):
    mu_star: Weight                    # maximal special-block projection
    F: LaurentPoly                     # its coefficient, on the complement block
    j: int                             # level number of mu_star
    decomposition: Dict[Weight, int]   # F as a sum of irreducible characters
    certified: Dict[Weight, bool]      # per weight: orbit meets L_j (or j <= 0)


def partial_order_geq(data: RootSystemData, mu: Weight, nu: Weight) -> bool:
    """mu - nu is a nonnegative integer combination of the special-factor
    simple roots and the weight delta.

    Since the special root beta is 2*delta, dropping beta from the generating
    set changes nothing, and the remaining generators are independent: the
    feasibility test is one exact linear solve.
    """
    _require_type_two(data)
    sp = data.split
    gens = tuple(s for s in data.factor1.simples if s != sp.beta) + (sp.delta,)
    coeffs, ok = _basis_solver(gens)(w_sub(tuple(mu), tuple(nu)))
    return ok and all(c >= 0 and c.denominator == 1 for c in coeffs)


def leading_term_analysis(data: RootSystemData, f: LaurentPoly) -> LeadingTerm:
    """Split a member along the special block, take a maximal projection in
    the partial order, and decompose its coefficient into characters of the
    complement factor.

    For members with positive level number every character appearing in the
    coefficient must have its shifted orbit meet the level set; `certified`
    records that check per weight.  A False entry on an actual member would
    falsify the structure theory, so the test suite treats it as an alarm.
    """
    _require_type_two(data)
    if f.is_zero():
        raise ValueError("the zero element has no leading term")
    if f.lattice != data.lattice:
        raise ValueError("lattice mismatch")
    idx1 = _block_indices(data.factor1)
    blocks: Dict[Weight, Dict[Weight, int]] = {}
    for w, cf in f.terms.items():
        blocks.setdefault(_project(w, idx1, True), {})[_project(w, idx1, False)] = cf
    mus = list(blocks)
    maximal = [m for m in mus
               if not any(v != m and partial_order_geq(data, v, m) for v in mus)]
    mu_star = max(maximal)
    coeff = LaurentPoly(data.lattice, blocks[mu_star])
    j = j_of(data, mu_star)
    if data.factor2 is None:
        const = coeff[data.lattice.zero]
        if LaurentPoly.const(data.lattice, const) != coeff:
            raise ValueError("coefficient of the leading block is not constant")
        dec = {data.lattice.zero: const}
        return LeadingTerm(mu_star, coeff, j, dec, {data.lattice.zero: True})
    dec = decompose_into_characters(data.factor2, coeff)
    certified: Dict[Weight, bool] = {}
    for lam in dec:
        if j <= 0:
            certified[lam] = True
        elif j > data.split.k:
            certified[lam] = False
        else:
            start = w_add(lam, data.rho2)
            certified[lam] = any(in_Lj(data, nu, j)
                                 for nu in sorted(data.factor2.group.orbit(start)))
    return LeadingTerm(mu_star, coeff, j, dec, certified)


# --------------------------------------------------------------------------
# exhaustive sweeps


def _descending(values, r: int) -> Iterator[Tuple[Fraction, ...]]:
    # nonincreasing r-tuples drawn from a descending value list
    if r == 0:
        yield ()
        return
    yield from combinations_with_replacement(values, r)


def _int_range_desc(bound: int) -> List[Fraction]:
    return [Fraction(v) for v in range(bound, -1, -1)]


def _half_range_desc(bound: int) -> List[Fraction]:
    vals = []
    h = 2 * bound - 1
    while h > 0:
        vals.append(Fraction(h, 2))
        h -= 2
    return vals


def _factor2_labels(data: RootSystemData, bound: int) -> Iterator[Tuple[Fraction, ...]]:
    """Dominant coordinate tuples for the complement-factor block."""
    fam = data.id.family
    if fam == "B":
        m = data.id.m
        if m == 0:
            yield ()
            return
        yield from _descending(_int_range_desc(bound), m)
        yield from _descending(_half_range_desc(bound), m)
    elif fam == "D":
        m = data.id.m
        for head in list(_descending(_int_range_desc(bound), m)) + \
                list(_descending(_half_range_desc(bound), m)):
            yield head
            if head[-1] != 0:
                yield head[:-1] + (-head[-1],)
    elif fam == "G3":
        for l1 in range(bound + 1):
            for l2 in range(l1, min(2 * l1, bound) + 1):
                yield (Fraction(l1), Fraction(l2))
    elif fam == "F4":
        yield from _descending(_int_range_desc(bound), 3)
        yield from _descending(_half_range_desc(bound), 3)
    elif fam == "D21":
        for l2 in range(0, -bound - 1, -1):
            for l3 in range(0, -bound - 1, -1):
                yield (Fraction(l2), Fraction(l3))
    else:
        raise ValueError(f"no enumeration for {data.name}")


def _factor1_labels(data: RootSystemData, bound: int) -> Iterator[Tuple[Fraction, ...]]:
    """Dominant coordinate tuples for the special-root block."""
    fam = data.id.family
    if fam in ("B", "D"):
        yield from _descending(_int_range_desc(bound), data.id.n)
    elif fam == "G3":
        for mu in range(bound + 1):
            yield (Fraction(mu),)
    elif fam == "F4":
        for twice in range(2 * bound + 1):
            yield (Fraction(twice, 2),)
    elif fam == "D21":
        for l1 in range(bound + 1):
            yield (Fraction(l1),)
    else:
        raise ValueError(f"no enumeration for {data.name}")


def _assemble(data: RootSystemData, lam2, mu1) -> HighestWeight:
    # D(2,1;a) carries its special block in the first coordinate; everywhere
    # else the complement block leads.
    if data.id.family == "D21":
        coords = tuple(mu1) + tuple(lam2)
    else:
        coords = tuple(lam2) + tuple(mu1)
    return highest_weight(data, coords)


def dominant_weights(data: RootSystemData, bound: int) -> Iterator[HighestWeight]:
    """Every dominant integral weight with all coordinates of size <= bound.

    Half-integer epsilon-blocks are included for the families whose weight
    lattice has them.
    """
    _require_type_two(data)
    f2 = list(_factor2_labels(data, bound))
    for mu1 in _factor1_labels(data, bound):
        for lam2 in f2:
            yield _assemble(data, lam2, mu1)


def admissibility_equivalence_failures(data: RootSystemData, bound: int) -> List[HighestWeight]:
    """Weights (all coordinates <= bound) where the geometric and the clause-list
    verdicts disagree.  Expected empty; any entry is a counterexample."""
    out = []
    for hw in dominant_weights(data, bound):
        if is_admissible_geometric(data, hw) != is_admissible_kac(data, hw):
            out.append(hw)
    return out


def level_is_attainable(data: RootSystemData, j: int, bound: int) -> bool:
    """Does any dominant complement-block weight with coordinates <= bound have
    its shifted orbit meet L_j?  Two levels are famously empty: the middle one
    for G(3) and the third one for F(4)."""
    _require_type_two(data)
    if data.factor2 is None:
        return False
    idx1 = _block_indices(data.factor1)
    seen = set()
    for lam2 in _factor2_labels(data, bound):
        full = [Fraction(0)] * data.lattice.dim
        pos = [i for i in range(data.lattice.dim) if i not in idx1]
        for i, v in zip(pos, lam2):
            full[i] = v
        w = data.lattice.weight(*full)
        if w in seen:
            continue
        seen.add(w)
        start = w_add(w, data.rho2)
        if any(in_Lj(data, nu, j) for nu in sorted(data.factor2.group.orbit(start))):
            return True
    return False
