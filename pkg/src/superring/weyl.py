"""Even Weyl groups acting on exponent lattices.

Everything here is exact: group elements are integer matrices on the scaled
coordinates, signs are tracked explicitly (every generator we ever construct
is a reflection, so the sign of a product is the product of signs), and the
character formula is an honest division of alternating sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .laurent import (
    BilinearForm,
    ExactDivisionError,
    Lattice,
    LaurentPoly,
    Weight,
    exact_div,
    w_sub,
)

Matrix = Tuple[Tuple[int, ...], ...]


def identity_matrix(dim: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim))


def mat_apply(m: Matrix, w: Weight) -> Weight:
    return tuple(sum(row[j] * w[j] for j in range(len(w))) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    cols = range(len(b[0]))
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in cols)
        for i in range(n)
    )


def mat_inverse(m: Matrix) -> Matrix:
    """Invert a unimodular integer matrix; the inverse must be integral."""
    n = len(m)
    work = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
            for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        pv = work[col][col]
        work[col] = [x / pv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    inv = []
    for i in range(n):
        row = []
        for j in range(n):
            v = work[i][n + j]
            if v.denominator != 1:
                raise ValueError("matrix is not unimodular over the lattice")
            row.append(int(v))
        inv.append(tuple(row))
    return tuple(inv)


class WeylElement:
    """A lattice automorphism together with its sign character value."""

    __slots__ = ("matrix", "sign")

    def __init__(self, matrix: Matrix, sign: int):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.matrix = matrix
        self.sign = sign

    @staticmethod
    def identity(dim: int) -> "WeylElement":
        return WeylElement(identity_matrix(dim), 1)

    def apply_weight(self, w: Weight) -> Weight:
        return mat_apply(self.matrix, w)

    def apply(self, f: LaurentPoly) -> LaurentPoly:
        out: Dict[Weight, int] = {}
        for w, c in f.terms.items():
            out[mat_apply(self.matrix, w)] = c
        return LaurentPoly(f.lattice, out)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        # (self * other)(v) = self(other(v))
        return WeylElement(mat_mul(self.matrix, other.matrix), self.sign * other.sign)

    def inverse(self) -> "WeylElement":
        return WeylElement(mat_inverse(self.matrix), self.sign)

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"WeylElement({self.matrix!r}, sign={self.sign})"


class WeylGroup:
    """Finite reflection group given by generators; elements enumerated lazily."""

    def __init__(self, lattice: Lattice, generators: Sequence[WeylElement],
                 structure: str = "", expected_order: Optional[int] = None):
        self.lattice = lattice
        self.generators = tuple(generators)
        self.structure = structure
        self.expected_order = expected_order
        self._elements: Optional[Tuple[WeylElement, ...]] = None

    def elements(self) -> Tuple[WeylElement, ...]:
        if self._elements is None:
            dim = self.lattice.dim
            seen: Dict[Matrix, WeylElement] = {}
            e = WeylElement.identity(dim)
            seen[e.matrix] = e
            frontier = [e]
            while frontier:
                nxt = []
                for g in frontier:
                    for s in self.generators:
                        h = s * g
                        if h.matrix not in seen:
                            seen[h.matrix] = h
                            nxt.append(h)
                frontier = nxt
                if len(seen) > 1_000_000:
                    raise RuntimeError("group enumeration blew past sanity cap")
            self._elements = tuple(seen.values())
            if self.expected_order is not None and len(self._elements) != self.expected_order:
                raise RuntimeError(
                    f"group {self.structure or '?'} has order {len(self._elements)}, "
                    f"expected {self.expected_order}")
        return self._elements

    def __len__(self) -> int:
        return len(self.elements())

    def orbit(self, v: Weight) -> frozenset:
        seen = {v}
        frontier = [v]
        while frontier:
            nxt = []
            for w in frontier:
                for g in self.generators:
                    u = g.apply_weight(w)
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        return frozenset(seen)

    def is_invariant(self, f: LaurentPoly) -> bool:
        # generators suffice
        return all(g.apply(f) == f for g in self.generators)


@dataclass(frozen=True)
class EvenFactor:
    """One simple (or product-of-A1) block of the even root system.

    Holds everything the character formula needs: the simple system, the full
    positive system, rho, and the reflection group, all on the ambient lattice.
    """

    name: str
    lattice: Lattice
    form: BilinearForm
    simples: Tuple[Weight, ...]
    positives: Tuple[Weight, ...]
    rho: Weight
    group: WeylGroup
    _char_cache: dict = field(default_factory=dict, compare=False, repr=False)


def orbit(group: WeylGroup, v: Weight) -> frozenset:
    return group.orbit(v)


def alternate(group: WeylGroup, f: LaurentPoly) -> LaurentPoly:
    """Signed symmetrization sum over the whole group."""
    if f.lattice != group.lattice:
        raise ValueError("lattice mismatch")
    acc: Dict[Weight, int] = {}
    for g in group.elements():
        for w, c in f.terms.items():
            img = mat_apply(g.matrix, w)
            nc = acc.get(img, 0) + g.sign * c
            if nc:
                acc[img] = nc
            elif img in acc:
                del acc[img]
    return LaurentPoly(f.lattice, acc)


def pairing(form: BilinearForm, denom: int, w: Weight, alpha: Weight) -> Fraction:
    """2(w,alpha)/(alpha,alpha) as an exact rational (irrational parts cancel)."""
    from .scalars import QAlpha

    num = form.pair(w, alpha, denom)
    den = form.pair(alpha, alpha, denom)
    if isinstance(num, QAlpha) or isinstance(den, QAlpha):
        if not isinstance(num, QAlpha):
            num = QAlpha(num, Fraction(0))
        if not isinstance(den, QAlpha):
            den = QAlpha(den, Fraction(0))
        r = num.ratio(den)
        if r is None:
            raise ValueError("pairing is not rational")
        return 2 * r
    return Fraction(2) * num / den


def dominance_pairings(factor: EvenFactor, lam: Weight) -> List[Fraction]:
    d = factor.lattice.denom
    return [pairing(factor.form, d, lam, a) for a in factor.simples]


def is_dominant(factor: EvenFactor, lam: Weight) -> bool:
    return all(p >= 0 for p in dominance_pairings(factor, lam))


def is_dominant_integral(factor: EvenFactor, lam: Weight) -> bool:
    return all(p >= 0 and p.denominator == 1 for p in dominance_pairings(factor, lam))


def weyl_character(factor: EvenFactor, lam: Weight) -> LaurentPoly:
    """Character of the irreducible with highest weight lam, by alternation.

    Exact division of the two alternating sums; the result has unit
    coefficient at lam and support inside lam minus the positive cone.
    """
    if lam in factor._char_cache:
        return factor._char_cache[lam]
    if not is_dominant(factor, lam):
        raise ValueError(f"weight {lam} is not dominant for factor {factor.name}")
    lat = factor.lattice
    rho = factor.rho
    top = tuple(a + b for a, b in zip(lam, rho))
    num = alternate(factor.group, LaurentPoly.monomial(lat, top))
    den = alternate(factor.group, LaurentPoly.monomial(lat, rho))
    if den.is_zero():
        raise RuntimeError("alternant of rho vanished; factor data is inconsistent")
    ch = exact_div(num, den)
    if ch[lam] != 1:
        raise RuntimeError("character normalization failed")
    factor._char_cache[lam] = ch
    return ch


class NotInvariantError(ValueError):
    pass


def _basis_solver(simples: Sequence[Weight]):
    """Return a function expressing integer vectors in the simple-root span.

    Gives (coeffs, ok): rational coefficients when the vector lies in the
    span, else ok=False.  Uses the normal equations; the simples are
    independent so the small Gram matrix inverts exactly.
    """
    r = len(simples)
    dim = len(simples[0])
    gram = [[sum(Fraction(simples[i][k] * simples[j][k]) for k in range(dim))
             for j in range(r)] for i in range(r)]
    # invert gram
    work = [row[:] + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(gram)]
    for col in range(r):
        piv = next(rr for rr in range(col, r) if work[rr][col] != 0)
        work[col], work[piv] = work[piv], work[col]
        pv = work[col][col]
        work[col] = [x / pv for x in work[col]]
        for rr in range(r):
            if rr != col and work[rr][col] != 0:
                fct = work[rr][col]
                work[rr] = [x - fct * y for x, y in zip(work[rr], work[col])]
    ginv = [[work[i][r + j] for j in range(r)] for i in range(r)]

    def solve(vec: Weight):
        rhs = [sum(Fraction(simples[i][k] * vec[k]) for k in range(dim)) for i in range(r)]
        coeffs = [sum(ginv[i][j] * rhs[j] for j in range(r)) for i in range(r)]
        recon = [sum(coeffs[i] * simples[i][k] for i in range(r)) for k in range(dim)]
        ok = all(recon[k] == vec[k] for k in range(dim))
        return coeffs, ok

    return solve


def root_order_geq(solver, mu: Weight, nu: Weight) -> bool:
    """mu >= nu in the order generated by the positive roots (rational cone)."""
    coeffs, ok = solver(w_sub(mu, nu))
    return ok and all(c >= 0 for c in coeffs)


def decompose_into_characters(factor: EvenFactor, f: LaurentPoly) -> Dict[Weight, int]:
    """Write an invariant polynomial as an integer combination of characters.

    Greedy: repeatedly take a dominant support weight that is maximal in the
    root order (lexicographically largest among the maximal ones), strip its
    character, and recurse.  Terminates because every subtraction stays
    strictly below the stripped weight.
    """
    if f.lattice != factor.lattice:
        raise ValueError("lattice mismatch")
    if not factor.group.is_invariant(f):
        raise NotInvariantError("input is not invariant under the factor group")
    solver = _basis_solver(factor.simples)
    out: Dict[Weight, int] = {}
    rem = f
    steps = 0
    while not rem.is_zero():
        steps += 1
        if steps > 100_000:
            raise RuntimeError("character decomposition did not terminate")
        support = rem.support()
        doms = [w for w in support if is_dominant(factor, w)]
        if not doms:
            raise NotInvariantError("no dominant weight in support; not a character sum")
        maximal = [w for w in doms
                   if not any(v != w and root_order_geq(solver, v, w) for v in support)]
        if not maximal:
            raise NotInvariantError("support has no dominant maximal weight")
        mu = max(maximal)
        c = rem[mu]
        rem = rem - weyl_character(factor, mu) * c
        out[mu] = out.get(mu, 0) + c
    return out
