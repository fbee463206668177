"""Exact multivariate Laurent polynomials over Z with rational exponent lattices.

Everything downstream (root systems, Weyl machinery, membership tests,
decompositions) runs on the two types defined here:

* a `Lattice` fixes the number of coordinates and a global denominator D; an
  exponent vector is stored as a tuple of integers *scaled by D*, so that all
  weight arithmetic is integer arithmetic and dict keys hash fast;
* a `LaurentPoly` is a dict from scaled exponent tuples to nonzero integer
  coefficients.

The module also provides the handful of ring-theoretic operations the
supercharacter rings need: the derivation D_v(e^w) = (v,w) e^w attached to a
bilinear form, coset-sum functionals and membership in / exact division by the
principal ideal (e^alpha - 1), monomial substitutions along linear maps of
lattices, and exact division by a polynomial with invertible leading
coefficient.  JSON (de)serialization is bit-exact and deterministic.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Optional

from .scalars import QAlpha, Scalar, scalar_components, scalar_is_zero

Weight = tuple  # scaled integer exponent vector


class Lattice(NamedTuple):
    """Exponent lattice (1/denom)Z^dim, exponents stored scaled by denom."""

    dim: int
    denom: int

    def weight(self, *coords) -> Weight:
        """Build a scaled weight from rational coordinates."""
        out = []
        for c in coords:
            s = Fraction(c) * self.denom
            if s.denominator != 1:
                raise ValueError(f"coordinate {c} not in (1/{self.denom})Z")
            out.append(int(s))
        return tuple(out)

    def coords(self, w: Weight) -> tuple:
        return tuple(Fraction(s, self.denom) for s in w)

    @property
    def zero(self) -> Weight:
        return (0,) * self.dim


def w_add(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def w_sub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def w_neg(a: Weight) -> Weight:
    return tuple(-x for x in a)


def w_scale(a: Weight, k: int) -> Weight:
    return tuple(k * x for x in a)


class ExactDivisionError(ArithmeticError):
    pass


class LaurentPoly:
    """Laurent polynomial: dict of scaled exponent tuple -> nonzero int."""

    __slots__ = ("lattice", "terms")

    def __init__(self, lattice: Lattice, terms: Optional[dict] = None):
        self.lattice = lattice
        # do not store zero coefficients
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, lattice: Lattice) -> "LaurentPoly":
        return cls(lattice)

    @classmethod
    def const(cls, lattice: Lattice, c: int) -> "LaurentPoly":
        return cls(lattice, {lattice.zero: int(c)})

    @classmethod
    def monomial(cls, lattice: Lattice, w: Weight, c: int = 1) -> "LaurentPoly":
        return cls(lattice, {tuple(w): int(c)})

    # -- basic queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, LaurentPoly)
            and self.lattice == other.lattice
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.lattice, frozenset(self.terms.items())))

    def __getitem__(self, w: Weight) -> int:
        return self.terms.get(tuple(w), 0)

    def support(self) -> list:
        """Support weights in deterministic (lex ascending) order."""
        return sorted(self.terms)

    def leading(self) -> tuple:
        """(weight, coeff) of the lex-greatest term; poly must be nonzero."""
        if not self.terms:
            raise ValueError("leading term of zero polynomial")
        w = max(self.terms)
        return w, self.terms[w]

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {self.lattice.zero}

    def constant_coefficient(self) -> int:
        return self.terms.get(self.lattice.zero, 0)

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if self.lattice != other.lattice:
            raise ValueError("lattice mismatch")

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.lattice, other)
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            n = out.get(w, 0) + c
            if n:
                out[w] = n
            else:
                out.pop(w, None)
        return LaurentPoly(self.lattice, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.lattice, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.lattice, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly(self.lattice)
            return LaurentPoly(self.lattice, {w: c * other for w, c in self.terms.items()})
        self._check(other)
        # iterate over the smaller factor
        a, b = (self.terms, other.terms) if len(self.terms) <= len(other.terms) else (other.terms, self.terms)
        out: dict = {}
        for wa, ca in a.items():
            for wb, cb in b.items():
                w = tuple(x + y for x, y in zip(wa, wb))
                n = out.get(w, 0) + ca * cb
                if n:
                    out[w] = n
                else:
                    del out[w]
        return LaurentPoly(self.lattice, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            # only unit monomials are invertible
            if len(self.terms) != 1:
                raise ExactDivisionError("negative power of a non-monomial")
            (w, c), = self.terms.items()
            if c not in (1, -1):
                raise ExactDivisionError("negative power needs unit coefficient")
            return LaurentPoly(self.lattice, {w_scale(w, k): c if k % 2 else 1})
        result = LaurentPoly.const(self.lattice, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def shifted(self, w: Weight) -> "LaurentPoly":
        """Multiply by the monomial e^w."""
        w = tuple(w)
        return LaurentPoly(self.lattice, {w_add(t, w): c for t, c in self.terms.items()})

    def map_coeff(self, fn: Callable[[int], int]) -> "LaurentPoly":
        return LaurentPoly(self.lattice, {w: fn(c) for w, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "LaurentPoly(0)"
        bits = []
        for w in self.support():
            bits.append(f"{self.terms[w]}*e{self.lattice.coords(w)}")
        return "LaurentPoly(" + " + ".join(bits) + ")"


# -- bilinear forms ----------------------------------------------------------------


class BilinearForm:
    """Symmetric bilinear form given by an exact Gram matrix.

    Entries are Fractions, or QAlpha for the one family whose form depends on
    an irrational parameter.  Pairings take *scaled* weights plus the lattice
    denominator, so (v, w) = v^T G w / denom^2 exactly.
    """

    __slots__ = ("gram", "dim")

    def __init__(self, gram: Iterable[Iterable[Scalar]]):
        self.gram = tuple(tuple(row) for row in gram)
        self.dim = len(self.gram)

    def pair(self, v: Weight, w: Weight, denom: int) -> Scalar:
        acc: Scalar = Fraction(0)
        for i, vi in enumerate(v):
            if not vi:
                continue
            row = self.gram[i]
            for j, wj in enumerate(w):
                if wj:
                    acc = acc + row[j] * (vi * wj)
        if isinstance(acc, QAlpha):
            return acc * Fraction(1, denom * denom)
        return acc / (denom * denom)

    def is_isotropic(self, v: Weight, denom: int) -> bool:
        return scalar_is_zero(self.pair(v, v, denom))


# -- derivations --------------------------------------------------------------------


def derivation(f: LaurentPoly, v: Weight, form: BilinearForm) -> tuple[LaurentPoly, int]:
    """D_v f = sum (v, w) c_w e^w, returned as (integer poly, common denominator).

    The scalar product must be rational on all of f's support; for QAlpha-valued
    forms use `derivation_components`.
    """
    (pa, da), (pb, _) = derivation_components(f, v, form)
    if pb.terms:
        raise ValueError("derivation has irrational component; use derivation_components")
    return pa, da


def derivation_components(
    f: LaurentPoly, v: Weight, form: BilinearForm
) -> tuple[tuple[LaurentPoly, int], tuple[LaurentPoly, int]]:
    """Split D_v f into rational and alpha components, each cleared to Z.

    Returns ((poly_a, den_a), (poly_b, den_b)) with
    D_v f = poly_a/den_a + alpha * poly_b/den_b.
    """
    denom = f.lattice.denom
    rat: dict = {}
    irr: dict = {}
    for w, c in f.terms.items():
        s = form.pair(v, w, denom)
        a, b = scalar_components(s)
        if a:
            rat[w] = a * c
        if b:
            irr[w] = b * c
    return _clear(f.lattice, rat), _clear(f.lattice, irr)


def _clear(lattice: Lattice, frac_terms: dict) -> tuple[LaurentPoly, int]:
    if not frac_terms:
        return LaurentPoly(lattice), 1
    den = 1
    for q in frac_terms.values():
        den = den * q.denominator // _gcd(den, q.denominator)
    return LaurentPoly(lattice, {w: int(q * den) for w, q in frac_terms.items()}), den


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# -- the ideal (e^alpha - 1) ---------------------------------------------------------


def coset_key(w: Weight, alpha: Weight) -> Weight:
    """Canonical representative of the coset w + Z*alpha."""
    i0 = next(i for i, a in enumerate(alpha) if a)
    k = w[i0] // alpha[i0]
    return tuple(x - k * a for x, a in zip(w, alpha))


def coset_functional(f: LaurentPoly, alpha: Weight, base: Weight) -> int:
    """Sum of f's coefficients over the coset base + Z*alpha."""
    key = coset_key(tuple(base), alpha)
    return sum(c for w, c in f.terms.items() if coset_key(w, alpha) == key)


def coset_sums(f: LaurentPoly, alpha: Weight) -> dict:
    """All coset sums of f along alpha, keyed by canonical representative."""
    out: dict = {}
    for w, c in f.terms.items():
        key = coset_key(w, alpha)
        out[key] = out.get(key, 0) + c
    return out


def in_ideal(f: LaurentPoly, alpha: Weight) -> bool:
    """f in (e^alpha - 1) iff every coset sum along alpha vanishes."""
    return all(s == 0 for s in coset_sums(f, alpha).values())


def ideal_defect(f: LaurentPoly, alpha: Weight):
    """First failing coset as (base, deficit), or None if f is in the ideal."""
    sums = coset_sums(f, alpha)
    for key in sorted(sums):
        if sums[key]:
            return key, sums[key]
    return None


def divide_by_ideal_gen(f: LaurentPoly, alpha: Weight) -> LaurentPoly:
    """Exact quotient f / (e^alpha - 1); requires f in the ideal.

    Within each coset base + Z*alpha with coefficients c_k the quotient has
    g_k = -(c_{min} + ... + c_k): comparing coefficients in (e^alpha - 1) g
    gives c_k = g_{k-1} - g_k and g vanishes far below/above the support.
    """
    alpha = tuple(alpha)
    i0 = next(i for i, a in enumerate(alpha) if a)
    buckets: dict = {}
    for w, c in f.terms.items():
        key = coset_key(w, alpha)
        pos = (w[i0] - key[i0]) // alpha[i0]
        buckets.setdefault(key, {})[pos] = c
    out: dict = {}
    for key, column in buckets.items():
        lo, hi = min(column), max(column)
        prefix = 0
        for pos in range(lo, hi + 1):
            prefix += column.get(pos, 0)
            if prefix and pos < hi:
                out[w_add(key, w_scale(alpha, pos))] = -prefix
        if prefix:
            raise ExactDivisionError("polynomial is not in the ideal (e^alpha - 1)")
    return LaurentPoly(f.lattice, out)


# -- substitution -------------------------------------------------------------------


def substitute(
    f: LaurentPoly,
    matrix: Iterable[Iterable[Fraction]],
    target: Lattice,
) -> LaurentPoly:
    """Apply a linear map on exponents: e^w -> e^(M w), combining terms.

    `matrix` has target.dim rows and f.lattice.dim columns and acts on
    unscaled coordinates.  Raises if some image leaves the target lattice.
    """
    rows = [tuple(Fraction(x) for x in row) for row in matrix]
    if len(rows) != target.dim or any(len(r) != f.lattice.dim for r in rows):
        raise ValueError("substitution matrix has wrong shape")
    src_d, tgt_d = f.lattice.denom, target.denom
    out: dict = {}
    cache: dict = {}
    for w, c in f.terms.items():
        nw = cache.get(w)
        if nw is None:
            img = []
            for row in rows:
                s = sum(rij * wj for rij, wj in zip(row, w) if wj)
                s = Fraction(s, src_d) * tgt_d
                if s.denominator != 1:
                    raise ValueError("substitution image leaves the target lattice")
                img.append(int(s))
            nw = tuple(img)
            cache[w] = nw
        n = out.get(nw, 0) + c
        if n:
            out[nw] = n
        else:
            del out[nw]
    return LaurentPoly(target, out)


# -- exact division ------------------------------------------------------------------


def exact_div(f: LaurentPoly, g: LaurentPoly, max_steps: int = 200_000) -> LaurentPoly:
    """Exact quotient f / g along the lex term order.

    Works for any divisor whose lex-leading coefficient divides every
    coefficient it meets (our divisors have leading coefficient +-1).  Raises
    ExactDivisionError if the division is not exact.
    """
    f._check(g)
    if g.is_zero():
        raise ExactDivisionError("division by zero")
    gw, gc = g.leading()
    rem = dict(f.terms)
    quot: dict = {}
    steps = 0
    while rem:
        steps += 1
        if steps > max_steps:
            raise ExactDivisionError("division did not terminate; not an exact multiple")
        w = max(rem)
        c = rem[w]
        if c % gc:
            raise ExactDivisionError("leading coefficient does not divide")
        qw = w_sub(w, gw)
        qc = c // gc
        quot[qw] = quot.get(qw, 0) + qc
        for tw, tc in g.terms.items():
            k = w_add(qw, tw)
            n = rem.get(k, 0) - qc * tc
            if n:
                rem[k] = n
            else:
                rem.pop(k, None)
    return LaurentPoly(f.lattice, quot)


def divides_exactly(f: LaurentPoly, g: LaurentPoly) -> bool:
    try:
        exact_div(f, g)
        return True
    except ExactDivisionError:
        return False


# -- JSON ---------------------------------------------------------------------------


def to_json(f: LaurentPoly) -> str:
    """Deterministic serialization: terms sorted lex, coefficients as strings."""
    doc = {
        "dim": f.lattice.dim,
        "denominator": f.lattice.denom,
        "terms": [
            {"exp": list(w), "coeff": str(f.terms[w])} for w in sorted(f.terms)
        ],
    }
    return json.dumps(doc, separators=(",", ":"), sort_keys=True)


def from_json(text: str) -> LaurentPoly:
    doc = json.loads(text)
    lattice = Lattice(int(doc["dim"]), int(doc["denominator"]))
    terms = {}
    for t in doc["terms"]:
        w = tuple(int(x) for x in t["exp"])
        if len(w) != lattice.dim:
            raise ValueError("exponent vector has wrong dimension")
        c = int(t["coeff"])
        if c:
            terms[w] = terms.get(w, 0) + c
    return LaurentPoly(lattice, terms)
