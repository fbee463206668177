"""Root-system tables for the basic classical families.

Each supported system is built once, exactly, as an immutable bundle: the
exponent lattice, the invariant form, even/odd/isotropic roots, the
distinguished simple system, the even factors with their reflection groups,
and -- for the families whose odd part is irreducible over the even part --
the split record (delta, omega, beta, k) driving the admissibility machinery.

Families and textual ids:

    gl(n,m)            general linear blocks (n or m may be 0)
    sl(n,m), n != m    traceless quotient, coordinates on a section
    psl(n,n), n > 2    further quotient; psl(2,2) is routed to A(1,1)
    A(1,1)             the doubled-root-multiplicity system
    B(m,n)             odd orthosymplectic (m may be 0), C(n), D(m,n) m >= 2
    G(3), F(4)
    D(2,1;p/q), D(2,1;irrational)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .laurent import BilinearForm, Lattice, Weight, w_add, w_neg, w_sub
from .scalars import QAlpha, scalar_is_zero
from .weyl import (
    EvenFactor,
    Matrix,
    WeylElement,
    WeylGroup,
    _basis_solver,
    identity_matrix,
    pairing,
)


# --------------------------------------------------------------------------
# identifiers


@dataclass(frozen=True)
class RootSystemId:
    family: str                     # GL SL PSL A11 B C D G3 F4 D21
    m: int = 0
    n: int = 0
    alpha: Optional[Fraction] = None
    irrational: bool = False

    def canonical(self) -> str:
        f = self.family
        if f == "GL":
            return f"gl({self.n},{self.m})"
        if f == "SL":
            return f"sl({self.n},{self.m})"
        if f == "PSL":
            return f"psl({self.n},{self.n})"
        if f == "A11":
            return "A(1,1)"
        if f == "B":
            return f"B({self.m},{self.n})"
        if f == "C":
            return f"C({self.n})"
        if f == "D":
            return f"D({self.m},{self.n})"
        if f == "G3":
            return "G(3)"
        if f == "F4":
            return "F(4)"
        if f == "D21":
            if self.irrational:
                return "D(2,1;irrational)"
            return f"D(2,1;{self.alpha})"
        raise ValueError(f"unknown family {f}")


_PATTERNS = [
    (re.compile(r"^gl\((\d+),(\d+)\)$"), "GL"),
    (re.compile(r"^sl\((\d+),(\d+)\)$"), "SL"),
    (re.compile(r"^psl\((\d+),(\d+)\)$"), "PSL"),
    (re.compile(r"^A\(1,1\)$"), "A11"),
    (re.compile(r"^B\((\d+),(\d+)\)$"), "B"),
    (re.compile(r"^C\((\d+)\)$"), "C"),
    (re.compile(r"^D\((\d+),(\d+)\)$"), "D"),
    (re.compile(r"^G\(3\)$"), "G3"),
    (re.compile(r"^F\(4\)$"), "F4"),
    (re.compile(r"^D\(2,1;(-?\d+(?:/\d+)?|irrational)\)$"), "D21"),
]

RANK_CAP = 6   # keeps every orbit and group enumeration desk-sized


def parse_id(text: str) -> RootSystemId:
    """Parse a textual system id; validates rank parameters."""
    s = text.strip().replace(" ", "")
    for pat, fam in _PATTERNS:
        mt = pat.match(s)
        if not mt:
            continue
        if fam == "D21":
            tok = mt.group(1)
            if tok == "irrational":
                return RootSystemId("D21", m=2, n=1, irrational=True)
            a = Fraction(tok)
            if a in (0, -1):
                raise ValueError("D(2,1;a) needs a outside {0,-1}; the form degenerates")
            return RootSystemId("D21", m=2, n=1, alpha=a)
        if fam in ("A11", "G3", "F4"):
            return RootSystemId(fam)
        if fam == "C":
            n = int(mt.group(1))
            if not 1 <= n <= RANK_CAP:
                raise ValueError(f"C(n) needs 1 <= n <= {RANK_CAP}")
            return RootSystemId("C", n=n)
        a, b = int(mt.group(1)), int(mt.group(2))
        if fam == "GL":
            if a + b < 1 or a > RANK_CAP or b > RANK_CAP:
                raise ValueError(f"gl(n,m) needs 1 <= n+m, ranks <= {RANK_CAP}")
            return RootSystemId("GL", n=a, m=b)
        if fam == "SL":
            if a == b:
                raise ValueError("sl(n,n) has a degenerate form; use psl(n,n) or A(1,1)")
            if a + b < 1 or a > RANK_CAP or b > RANK_CAP:
                raise ValueError(f"sl(n,m) ranks must be <= {RANK_CAP}")
            return RootSystemId("SL", n=a, m=b)
        if fam == "PSL":
            if a != b:
                raise ValueError("psl(n,m) needs n = m")
            if a == 2:
                return RootSystemId("A11")
            if not 2 < a <= RANK_CAP:
                raise ValueError(f"psl(n,n) needs 2 < n <= {RANK_CAP}")
            return RootSystemId("PSL", n=a, m=a)
        if fam == "B":
            if b < 1 or a > RANK_CAP or b > RANK_CAP:
                raise ValueError("B(m,n) needs n >= 1")
            return RootSystemId("B", m=a, n=b)
        if fam == "D":
            if a < 2 or b < 1 or a > RANK_CAP or b > RANK_CAP:
                raise ValueError("D(m,n) needs m >= 2 and n >= 1")
            return RootSystemId("D", m=a, n=b)
    raise ValueError(f"cannot parse system id {text!r}")


# --------------------------------------------------------------------------
# matrices


def _transposition(dim: int, i: int, j: int) -> Matrix:
    rows = [list(r) for r in identity_matrix(dim)]
    rows[i], rows[j] = rows[j], rows[i]
    return tuple(tuple(r) for r in rows)


def _flip(dim: int, i: int) -> Matrix:
    rows = [list(r) for r in identity_matrix(dim)]
    rows[i][i] = -1
    return tuple(tuple(r) for r in rows)


def _double_flip(dim: int, i: int, j: int) -> Matrix:
    # (..a..b..) -> (..-b..-a..): the extra reflection of an even-flip group
    rows = [[0] * dim for _ in range(dim)]
    for k in range(dim):
        if k == i:
            rows[k][j] = -1
        elif k == j:
            rows[k][i] = -1
        else:
            rows[k][k] = 1
    return tuple(tuple(r) for r in rows)


def _refl(m: Matrix) -> WeylElement:
    return WeylElement(m, -1)


# --------------------------------------------------------------------------
# even-factor builders (weights are scaled lattice tuples throughout)


def _wvec(lat: Lattice, entries: Dict[int, Fraction]) -> Weight:
    coords = [Fraction(0)] * lat.dim
    for i, c in entries.items():
        coords[i] = Fraction(c)
    return lat.weight(*coords)


def _a_factor(lat, form, off, r, label) -> Optional[EvenFactor]:
    if r < 1:
        return None
    dim = lat.dim
    simples = tuple(_wvec(lat, {off + i: 1, off + i + 1: -1}) for i in range(r - 1))
    positives = tuple(_wvec(lat, {off + i: 1, off + j: -1})
                      for i in range(r) for j in range(i + 1, r))
    # integer rho variant (true rho shifted by an invariant vector)
    rho = _wvec(lat, {off + i: r - 1 - i for i in range(r)})
    gens = [_refl(_transposition(dim, off + i, off + i + 1)) for i in range(r - 1)]
    order = 1
    for i in range(2, r + 1):
        order *= i
    group = WeylGroup(lat, gens, structure=f"S{r}", expected_order=order)
    return EvenFactor(label, lat, form, simples, positives, rho, group)


def _bc_factor(lat, form, off, r, kind, label) -> Optional[EvenFactor]:
    if r < 1:
        return None
    dim = lat.dim
    chain = [_wvec(lat, {off + i: 1, off + i + 1: -1}) for i in range(r - 1)]
    if kind == "B":
        last = _wvec(lat, {off + r - 1: 1})
        shorts = [_wvec(lat, {off + i: 1}) for i in range(r)]
        rho = _wvec(lat, {off + i: Fraction(2 * (r - i) - 1, 2) for i in range(r)})
    else:
        last = _wvec(lat, {off + r - 1: 2})
        shorts = [_wvec(lat, {off + i: 2}) for i in range(r)]
        rho = _wvec(lat, {off + i: r - i for i in range(r)})
    simples = tuple(chain + [last])
    positives = []
    for i in range(r):
        for j in range(i + 1, r):
            positives.append(_wvec(lat, {off + i: 1, off + j: -1}))
            positives.append(_wvec(lat, {off + i: 1, off + j: 1}))
    positives.extend(shorts)
    gens = [_refl(_transposition(dim, off + i, off + i + 1)) for i in range(r - 1)]
    gens.append(_refl(_flip(dim, off + r - 1)))
    group = WeylGroup(lat, gens, structure=f"{kind}{r}", expected_order=(2 ** r) * _fact(r))
    return EvenFactor(label, lat, form, simples, tuple(positives), rho, group)


def _d_factor(lat, form, off, r, label) -> EvenFactor:
    if r < 2:
        raise ValueError("even-flip factor needs rank >= 2")
    dim = lat.dim
    chain = [_wvec(lat, {off + i: 1, off + i + 1: -1}) for i in range(r - 1)]
    last = _wvec(lat, {off + r - 2: 1, off + r - 1: 1})
    simples = tuple(chain + [last])
    positives = []
    for i in range(r):
        for j in range(i + 1, r):
            positives.append(_wvec(lat, {off + i: 1, off + j: -1}))
            positives.append(_wvec(lat, {off + i: 1, off + j: 1}))
    rho = _wvec(lat, {off + i: r - 1 - i for i in range(r)})
    gens = [_refl(_transposition(dim, off + i, off + i + 1)) for i in range(r - 1)]
    gens.append(_refl(_double_flip(dim, off + r - 2, off + r - 1)))
    group = WeylGroup(lat, gens, structure=f"D{r}", expected_order=(2 ** (r - 1)) * _fact(r))
    return EvenFactor(label, lat, form, simples, tuple(positives), rho, group)


def _fact(r: int) -> int:
    out = 1
    for i in range(2, r + 1):
        out *= i
    return out


# --------------------------------------------------------------------------
# the data bundle


@dataclass(frozen=True)
class TypeTwoSplit:
    """Distinguished split of the odd direction: delta, omega, beta = 2*delta
    and the level count k (half the orbit size of omega)."""
    delta: Weight
    omega: Weight
    beta: Weight
    k: int


@dataclass(frozen=True)
class RootSystemData:
    id: RootSystemId
    name: str
    lattice: Lattice
    form: BilinearForm
    even_roots: Tuple[Weight, ...]
    odd_roots: Tuple[Weight, ...]          # listed with multiplicity
    isotropic_roots: Tuple[Weight, ...]    # distinct
    distinguished_basis: Tuple[Weight, ...]
    even_factors: Tuple[EvenFactor, ...]
    w0: WeylGroup
    rho2: Optional[Weight]
    type_flag: str                         # "I" or "II"
    split: Optional[TypeTwoSplit]
    iso_multiplicity: int
    root_span_dim: int
    positive_isotropic: Tuple[Weight, ...]
    degree_zero_required: bool = False     # psl: every term must have coord sum 0

    @property
    def factor1(self) -> Optional[EvenFactor]:
        return self.even_factors[0] if self.even_factors else None

    @property
    def factor2(self) -> Optional[EvenFactor]:
        return self.even_factors[1] if len(self.even_factors) > 1 else None

    @property
    def even_simple_roots(self) -> Tuple[Tuple[Weight, ...], ...]:
        return tuple(f.simples for f in self.even_factors)

    def all_roots(self) -> frozenset:
        return frozenset(self.even_roots) | frozenset(self.odd_roots)

    def pair(self, v: Weight, w: Weight):
        return self.form.pair(v, w, self.lattice.denom)

    def __repr__(self) -> str:
        return f"<RootSystemData {self.name}>"


def positive_odd_roots(data: RootSystemData) -> Tuple[Weight, ...]:
    """Odd roots that are nonnegative combinations of the distinguished basis.

    Multiplicity is preserved, so A(1,1) lists each of its two positives twice.
    """
    if data.id.family == "PSL":
        # the quotient kills the sum of the odd positives, so cone membership
        # no longer separates signs; keep the choice inherited upstairs
        return data.positive_isotropic
    solver = _basis_solver(data.distinguished_basis)
    out = []
    for r in data.odd_roots:
        coeffs, ok = solver(r)
        if ok and all(c >= 0 for c in coeffs):
            out.append(r)
    return tuple(out)


def is_small_orbit(factor: EvenFactor, omega: Weight) -> bool:
    """True when any two orbit points x != +-y differ by a root of the factor."""
    orb = sorted(factor.group.orbit(omega))
    roots = set(factor.positives) | {w_neg(r) for r in factor.positives}
    for i, x in enumerate(orb):
        for y in orb[i + 1:]:
            if x == w_neg(y):
                continue
            if w_sub(x, y) not in roots:
                return False
    return True


# --------------------------------------------------------------------------
# per-family construction


_CACHE: Dict[str, RootSystemData] = {}


def build(ident) -> RootSystemData:
    """Construct (and cache) the full root datum for a system id."""
    rid = ident if isinstance(ident, RootSystemId) else parse_id(str(ident))
    key = rid.canonical()
    if key not in _CACHE:
        fam = rid.family
        builder = {
            "GL": _build_gl, "SL": _build_sl, "PSL": _build_psl,
            "A11": _build_a11, "B": _build_b, "C": _build_c, "D": _build_d,
            "G3": _build_g3, "F4": _build_f4, "D21": _build_d21,
        }[fam]
        data = builder(rid)
        _check_construction(data)
        _CACHE[key] = data
    return _CACHE[key]


def _pm(vals):
    # all sign patterns over the given nonzero entries
    out = [[]]
    for v in vals:
        out = [acc + [s * v] for acc in out for s in (1, -1)]
    return out


def _build_gl(rid: RootSystemId) -> RootSystemData:
    n, m = rid.n, rid.m
    dim = n + m
    lat = Lattice(dim, 12)
    gram = tuple(tuple(Fraction(1 if i == j and i < n else (-1 if i == j else 0))
                       for j in range(dim)) for i in range(dim))
    form = BilinearForm(gram)
    even = []
    for i in range(n):
        for j in range(n):
            if i != j:
                even.append(_wvec(lat, {i: 1, j: -1}))
    for p in range(m):
        for q in range(m):
            if p != q:
                even.append(_wvec(lat, {n + p: 1, n + q: -1}))
    odd = []
    for i in range(n):
        for p in range(m):
            odd.append(_wvec(lat, {i: 1, n + p: -1}))
            odd.append(_wvec(lat, {i: -1, n + p: 1}))
    basis = [_wvec(lat, {i: 1, i + 1: -1}) for i in range(n - 1)]
    if n >= 1 and m >= 1:
        basis.append(_wvec(lat, {n - 1: 1, n: -1}))
    basis.extend(_wvec(lat, {n + p: 1, n + p + 1: -1}) for p in range(m - 1))
    factors = [f for f in (_a_factor(lat, form, 0, n, f"A{n - 1}(x)"),
                           _a_factor(lat, form, n, m, f"A{m - 1}(y)")) if f]
    gens = [g for f in factors for g in f.group.generators]
    w0 = WeylGroup(lat, gens, structure=f"S{n}xS{m}",
                   expected_order=_fact(n) * _fact(m))
    pos_iso = tuple(_wvec(lat, {i: 1, n + p: -1}) for i in range(n) for p in range(m))
    return RootSystemData(
        rid, rid.canonical(), lat, form, tuple(even), tuple(odd),
        tuple(dict.fromkeys(odd)), tuple(basis), tuple(factors), w0,
        None, "I", None, 1, max(dim - 1, 0), pos_iso)


def _section_maps(n: int, m: int):
    """Coordinate section for the traceless quotient: drop the last coordinate
    after shifting along eta = sum(x) - sum(y) to zero it."""
    full = n + m
    dim = full - 1
    eta = [1] * n + [-1] * m
    nmat = tuple(tuple((1 if i == j else 0) - eta[full - 1] * eta[i] * (1 if j == full - 1 else 0)
                       for j in range(full)) for i in range(dim))
    emat = tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(full))

    def norm_w(w: Weight) -> Weight:
        t = -w[-1] * eta[-1]
        return tuple(w[i] + t * eta[i] for i in range(dim))

    def conj(mat: Matrix) -> Matrix:
        from .weyl import mat_mul
        return mat_mul(nmat, mat_mul(mat, emat))

    return norm_w, conj


def quotient_weight_map(rid: RootSystemId):
    """Scaled-weight map from gl(n,m) onto the traceless-section lattice.

    For SL the lattices share a denominator, so the eta-shift alone does it;
    for PSL the image is rescaled onto the denom-n quotient lattice.
    """
    if rid.family == "SL":
        norm_w, _ = _section_maps(rid.n, rid.m)
        return norm_w
    if rid.family == "PSL":
        norm_w, _ = _section_maps(rid.n, rid.n)
        n = rid.n

        def mv(w: Weight) -> Weight:
            img = norm_w(w)
            out = []
            for s in img:
                v = Fraction(s * n, 12)
                if v.denominator != 1:
                    raise ValueError("weight does not live on the quotient lattice")
                out.append(int(v))
            return tuple(out)

        return mv
    raise ValueError("no quotient section for family %r" % (rid.family,))


def _map_factor(f: EvenFactor, lat, form, norm_w, conj) -> EvenFactor:
    gens = [WeylElement(conj(g.matrix), g.sign) for g in f.group.generators]
    group = WeylGroup(lat, gens, structure=f.group.structure,
                      expected_order=f.group.expected_order)
    return EvenFactor(f.name, lat, form,
                      tuple(norm_w(s) for s in f.simples),
                      tuple(norm_w(p) for p in f.positives),
                      norm_w(f.rho), group)


def _build_sl(rid: RootSystemId) -> RootSystemData:
    n, m = rid.n, rid.m
    gl = _build_gl(RootSystemId("GL", n=n, m=m))
    dim = n + m - 1
    lat = Lattice(dim, 12)
    norm_w, conj = _section_maps(n, m)
    c = Fraction(1, n - m)
    gram = tuple(tuple(
        (Fraction(1 if i == j else 0) if i < n else Fraction(-1 if i == j else 0)) - c
        for j in range(dim)) for i in range(dim))
    form = BilinearForm(gram)

    def mv(w):  # rescale gl weight (denom 12) into the section lattice
        return norm_w(w)

    even = tuple(dict.fromkeys(mv(r) for r in gl.even_roots))
    odd = tuple(mv(r) for r in gl.odd_roots)
    iso = tuple(dict.fromkeys(odd))
    if len(set(even)) != len(gl.even_roots) or len(set(odd)) != len(gl.odd_roots):
        raise RuntimeError("root images collided in the traceless section")
    basis = tuple(mv(b) for b in gl.distinguished_basis)
    factors = tuple(_map_factor(f, lat, form, mv, conj) for f in gl.even_factors)
    gens = [g for f in factors for g in f.group.generators]
    w0 = WeylGroup(lat, gens, structure=f"S{n}xS{m}",
                   expected_order=_fact(n) * _fact(m))
    pos_iso = tuple(mv(r) for r in gl.positive_isotropic)
    return RootSystemData(
        rid, rid.canonical(), lat, form, even, odd, iso, basis, factors, w0,
        None, "I", None, 1, dim, pos_iso)


def _build_psl(rid: RootSystemId) -> RootSystemData:
    n = rid.n
    gl = _build_gl(RootSystemId("GL", n=n, m=n))
    dim = 2 * n - 1
    lat = Lattice(dim, n)
    norm_w_raw, conj = _section_maps(n, n)

    def mv(w):  # gl weights carry denom 12; rescale into denom n
        img = norm_w_raw(w)
        out = []
        for s in img:
            v = Fraction(s * n, 12)
            if v.denominator != 1:
                raise ValueError("weight does not live on the quotient lattice")
            out.append(int(v))
        return tuple(out)

    gram = tuple(tuple(Fraction(1 if i == j and i < n else (-1 if i == j else 0))
                       for j in range(dim)) for i in range(dim))
    form = BilinearForm(gram)
    even = tuple(dict.fromkeys(mv(r) for r in gl.even_roots))
    odd = tuple(mv(r) for r in gl.odd_roots)
    iso = tuple(dict.fromkeys(odd))
    if len(set(odd)) != len(gl.odd_roots):
        raise RuntimeError("odd-root images collided in the quotient")
    basis = tuple(mv(b) for b in gl.distinguished_basis)

    def mvf(f: EvenFactor) -> EvenFactor:
        gens = [WeylElement(conj(g.matrix), g.sign) for g in f.group.generators]
        group = WeylGroup(lat, gens, structure=f.group.structure,
                          expected_order=f.group.expected_order)
        return EvenFactor(f.name, lat, form,
                          tuple(mv(s) for s in f.simples),
                          tuple(mv(p) for p in f.positives),
                          mv(f.rho), group)

    factors = tuple(mvf(f) for f in gl.even_factors)
    gens = [g for f in factors for g in f.group.generators]
    w0 = WeylGroup(lat, gens, structure=f"S{n}xS{n}",
                   expected_order=_fact(n) ** 2)
    pos_iso = tuple(mv(r) for r in gl.positive_isotropic)
    # the roots, and every legal weight, live on the coordinate-sum-zero slice
    return RootSystemData(
        rid, rid.canonical(), lat, form, even, odd, iso, basis, factors, w0,
        None, "I", None, 1, dim - 1, pos_iso, degree_zero_required=True)


def _build_a11(rid: RootSystemId) -> RootSystemData:
    lat = Lattice(2, 1)
    form = BilinearForm(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(-1))))
    even = tuple(_wvec(lat, {0: s * 2}) for s in (1, -1)) + \
        tuple(_wvec(lat, {1: s * 2}) for s in (1, -1))
    iso = ((1, -1), (1, 1), (-1, 1), (-1, -1))
    odd = tuple(r for r in iso for _ in range(2))   # each isotropic root twice
    basis = ((1, -1), (0, 2))
    f_eps = EvenFactor("A1(x)", lat, form, ((2, 0),), ((2, 0),), (1, 0),
                       WeylGroup(lat, [_refl(_flip(2, 0))], "A1", 2))
    f_del = EvenFactor("A1(y)", lat, form, ((0, 2),), ((0, 2),), (0, 1),
                       WeylGroup(lat, [_refl(_flip(2, 1))], "A1", 2))
    w0 = WeylGroup(lat, [_refl(_flip(2, 0)), _refl(_flip(2, 1))], "A1xA1", 4)
    return RootSystemData(
        rid, "A(1,1)", lat, form, even, odd, iso, basis,
        (f_eps, f_del), w0, None, "I", None, 2, 2, ((1, -1), (1, 1)))


def _build_c(rid: RootSystemId) -> RootSystemData:
    n = rid.n
    dim = 1 + n
    lat = Lattice(dim, 1)
    gram = tuple(tuple(Fraction(1 if i == j == 0 else (-1 if i == j else 0))
                       for j in range(dim)) for i in range(dim))
    form = BilinearForm(gram)
    even = []
    for i in range(n):
        for j in range(i + 1, n):
            for si in (1, -1):
                for sj in (1, -1):
                    even.append(_wvec(lat, {1 + i: si, 1 + j: sj}))
    for i in range(n):
        even.append(_wvec(lat, {1 + i: 2}))
        even.append(_wvec(lat, {1 + i: -2}))
    odd = []
    for j in range(n):
        for se in (1, -1):
            for sj in (1, -1):
                odd.append(_wvec(lat, {0: se, 1 + j: sj}))
    basis = [_wvec(lat, {0: 1, 1: -1})]
    basis.extend(_wvec(lat, {1 + i: 1, 2 + i: -1}) for i in range(n - 1))
    basis.append(_wvec(lat, {n: 2}))
    fac = _bc_factor(lat, form, 1, n, "C", f"C{n}(y)")
    w0 = WeylGroup(lat, fac.group.generators, structure=f"C{n}",
                   expected_order=(2 ** n) * _fact(n))
    pos_iso = tuple(_wvec(lat, {0: 1, 1 + j: s}) for j in range(n) for s in (-1, 1))
    return RootSystemData(
        rid, rid.canonical(), lat, form, tuple(even), tuple(odd),
        tuple(dict.fromkeys(odd)), tuple(basis), (fac,), w0,
        None, "I", None, 1, dim, pos_iso)


def _build_b(rid: RootSystemId) -> RootSystemData:
    m, n = rid.m, rid.n
    dim = m + n
    lat = Lattice(dim, 2)
    gram = tuple(tuple(Fraction(1 if i == j and i < m else (-1 if i == j else 0))
                       for j in range(dim)) for i in range(dim))
    form = BilinearForm(gram)
    even = []
    for i in range(m):
        for j in range(i + 1, m):
            for si in (1, -1):
                for sj in (1, -1):
                    even.append(_wvec(lat, {i: si, j: sj}))
    for i in range(m):
        even.append(_wvec(lat, {i: 1}))
        even.append(_wvec(lat, {i: -1}))
    for p in range(n):
        for q in range(p + 1, n):
            for sp in (1, -1):
                for sq in (1, -1):
                    even.append(_wvec(lat, {m + p: sp, m + q: sq}))
    for p in range(n):
        even.append(_wvec(lat, {m + p: 2}))
        even.append(_wvec(lat, {m + p: -2}))
    odd = []
    iso = []
    for i in range(m):
        for p in range(n):
            for si in (1, -1):
                for sp in (1, -1):
                    r = _wvec(lat, {i: si, m + p: sp})
                    odd.append(r)
                    iso.append(r)
    for p in range(n):
        odd.append(_wvec(lat, {m + p: 1}))
        odd.append(_wvec(lat, {m + p: -1}))
    basis = [_wvec(lat, {m + p: 1, m + p + 1: -1}) for p in range(n - 1)]
    if m >= 1:
        basis.append(_wvec(lat, {m + n - 1: 1, 0: -1}))
        basis.extend(_wvec(lat, {i: 1, i + 1: -1}) for i in range(m - 1))
        basis.append(_wvec(lat, {m - 1: 1}))
    else:
        basis.append(_wvec(lat, {m + n - 1: 1}))
    fac1 = _bc_factor(lat, form, m, n, "C", f"C{n}(y)")
    fac2 = _bc_factor(lat, form, 0, m, "B", f"B{m}(x)") if m >= 1 else None
    factors = tuple(f for f in (fac1, fac2) if f)
    gens = [g for f in factors for g in f.group.generators]
    w0 = WeylGroup(lat, gens, structure=f"C{n}xB{m}",
                   expected_order=(2 ** n) * _fact(n) * (2 ** m) * _fact(m))
    omega = _wvec(lat, {0: 1}) if m >= 1 else lat.zero
    split = TypeTwoSplit(delta=_wvec(lat, {m + n - 1: 1}), omega=omega,
                         beta=_wvec(lat, {m + n - 1: 2}), k=m)
    pos_iso = tuple(dict.fromkeys(_positive_by_basis(iso, basis)))
    return RootSystemData(
        rid, rid.canonical(), lat, form, tuple(even), tuple(odd),
        tuple(dict.fromkeys(iso)), tuple(basis), factors, w0,
        fac2.rho if fac2 else None, "II", split, 1, dim,
        tuple(dict.fromkeys(pos_iso)))


def _positive_by_basis(roots: Sequence[Weight], basis: Sequence[Weight]) -> List[Weight]:
    solver = _basis_solver(tuple(basis))
    out = []
    for r in roots:
        coeffs, ok = solver(r)
        if ok and all(c >= 0 for c in coeffs):
            out.append(r)
    return out


def _build_d(rid: RootSystemId) -> RootSystemData:
    m, n = rid.m, rid.n
    dim = m + n
    lat = Lattice(dim, 2)
    gram = tuple(tuple(Fraction(1 if i == j and i < m else (-1 if i == j else 0))
                       for j in range(dim)) for i in range(dim))
    form = BilinearForm(gram)
    even = []
    for i in range(m):
        for j in range(i + 1, m):
            for si in (1, -1):
                for sj in (1, -1):
                    even.append(_wvec(lat, {i: si, j: sj}))
    for p in range(n):
        for q in range(p + 1, n):
            for sp in (1, -1):
                for sq in (1, -1):
                    even.append(_wvec(lat, {m + p: sp, m + q: sq}))
    for p in range(n):
        even.append(_wvec(lat, {m + p: 2}))
        even.append(_wvec(lat, {m + p: -2}))
    iso = []
    for i in range(m):
        for p in range(n):
            for si in (1, -1):
                for sp in (1, -1):
                    iso.append(_wvec(lat, {i: si, m + p: sp}))
    basis = [_wvec(lat, {m + p: 1, m + p + 1: -1}) for p in range(n - 1)]
    basis.append(_wvec(lat, {m + n - 1: 1, 0: -1}))
    basis.extend(_wvec(lat, {i: 1, i + 1: -1}) for i in range(m - 2))
    basis.append(_wvec(lat, {m - 2: 1, m - 1: -1}))
    basis.append(_wvec(lat, {m - 2: 1, m - 1: 1}))
    fac1 = _bc_factor(lat, form, m, n, "C", f"C{n}(y)")
    fac2 = _d_factor(lat, form, 0, m, f"D{m}(x)")
    gens = list(fac1.group.generators) + list(fac2.group.generators)
    w0 = WeylGroup(lat, gens, structure=f"C{n}xD{m}",
                   expected_order=(2 ** n) * _fact(n) * (2 ** (m - 1)) * _fact(m))
    split = TypeTwoSplit(delta=_wvec(lat, {m + n - 1: 1}), omega=_wvec(lat, {0: 1}),
                         beta=_wvec(lat, {m + n - 1: 2}), k=m)
    pos_iso = tuple(dict.fromkeys(_positive_by_basis(iso, basis)))
    return RootSystemData(
        rid, rid.canonical(), lat, form, tuple(even), tuple(iso),
        tuple(dict.fromkeys(iso)), tuple(basis), (fac1, fac2), w0,
        fac2.rho, "II", split, 1, dim, pos_iso)


def _build_g3(rid: RootSystemId) -> RootSystemData:
    lat = Lattice(3, 1)
    form = BilinearForm(((Fraction(2), Fraction(-1), Fraction(0)),
                         (Fraction(-1), Fraction(2), Fraction(0)),
                         (Fraction(0), Fraction(0), Fraction(-2))))
    g2_pos = [(1, 0), (-1, 1), (0, 1), (1, 1), (2, 1), (1, 2)]
    even = [(a, b, 0) for (a, b) in g2_pos] + [(-a, -b, 0) for (a, b) in g2_pos]
    even += [(0, 0, 2), (0, 0, -2)]
    eps = [(1, 0), (0, 1), (-1, -1)]            # the three planar unit weights
    iso = [(a, b, s) for (a, b) in eps for s in (1, -1)]
    iso += [(-a, -b, s) for (a, b) in eps for s in (1, -1)]
    iso = list(dict.fromkeys(iso))
    odd = iso + [(0, 0, 1), (0, 0, -1)]
    basis = ((-1, -1, 1), (1, 0, 0), (-1, 1, 0))
    s1 = ((-1, 1, 0), (0, 1, 0), (0, 0, 1))     # reflection in the short (1,0)
    s2 = ((0, 1, 0), (1, 0, 0), (0, 0, 1))      # reflection in (-1,1): a swap
    g2_group = WeylGroup(lat, [_refl(s1), _refl(s2)], "G2", 12)
    fac2 = EvenFactor("G2(x)", lat, form, ((1, 0, 0), (-1, 1, 0)),
                      tuple((a, b, 0) for (a, b) in g2_pos), (2, 3, 0), g2_group)
    fac1 = EvenFactor("A1(y)", lat, form, ((0, 0, 2),), ((0, 0, 2),), (0, 0, 1),
                      WeylGroup(lat, [_refl(_flip(3, 2))], "A1", 2))
    w0 = WeylGroup(lat, list(fac1.group.generators) + list(fac2.group.generators),
                   "A1xG2", 24)
    split = TypeTwoSplit(delta=(0, 0, 1), omega=(1, 1, 0), beta=(0, 0, 2), k=3)
    pos_iso = tuple(dict.fromkeys(_positive_by_basis(iso, basis)))
    return RootSystemData(
        rid, "G(3)", lat, form, tuple(even), tuple(odd), tuple(iso),
        basis, (fac1, fac2), w0, (2, 3, 0), "II", split, 1, 3, pos_iso)


def _build_f4(rid: RootSystemId) -> RootSystemData:
    lat = Lattice(4, 2)
    form = BilinearForm(tuple(tuple(Fraction({0: 1, 1: 1, 2: 1, 3: -3}[i] if i == j else 0)
                                    for j in range(4)) for i in range(4)))
    even = []
    for i in range(3):
        for j in range(i + 1, 3):
            for si in (1, -1):
                for sj in (1, -1):
                    even.append(_wvec(lat, {i: si, j: sj}))
    for i in range(3):
        even.append(_wvec(lat, {i: 1}))
        even.append(_wvec(lat, {i: -1}))
    even.append(_wvec(lat, {3: 1}))
    even.append(_wvec(lat, {3: -1}))
    iso = [tuple(s) for s in _pm([1, 1, 1, 1])]   # scaled halves: denom 2
    odd = list(iso)
    basis = ((-1, -1, -1, 1),
             _wvec(lat, {0: 1, 1: -1}), _wvec(lat, {1: 1, 2: -1}), _wvec(lat, {2: 1}))
    fac2 = _bc_factor(lat, form, 0, 3, "B", "B3(x)")
    fac1 = EvenFactor("A1(y)", lat, form, ((0, 0, 0, 2),), ((0, 0, 0, 2),),
                      (0, 0, 0, 1),
                      WeylGroup(lat, [_refl(_flip(4, 3))], "A1", 2))
    w0 = WeylGroup(lat, list(fac1.group.generators) + list(fac2.group.generators),
                   "A1xB3", 96)
    split = TypeTwoSplit(delta=(0, 0, 0, 1), omega=(1, 1, 1, 0),
                         beta=(0, 0, 0, 2), k=4)
    pos_iso = tuple(dict.fromkeys(_positive_by_basis(iso, basis)))
    return RootSystemData(
        rid, "F(4)", lat, form, tuple(even), tuple(odd), tuple(iso),
        basis, (fac1, fac2), w0, fac2.rho, "II", split, 1, 4, pos_iso)


def _build_d21(rid: RootSystemId) -> RootSystemData:
    lat = Lattice(3, 1)
    if rid.irrational:
        a11 = QAlpha(-1, -1)
        a33 = QAlpha(0, 1)
    else:
        a11 = Fraction(-1) - rid.alpha
        a33 = rid.alpha
    zero = Fraction(0)
    form = BilinearForm(((a11, zero, zero),
                         (zero, Fraction(1), zero),
                         (zero, zero, a33)))
    even = [(2, 0, 0), (-2, 0, 0), (0, 2, 0), (0, -2, 0), (0, 0, 2), (0, 0, -2)]
    iso = [tuple(s) for s in _pm([1, 1, 1])]
    odd = list(iso)
    basis = ((1, 1, 1), (0, -2, 0), (0, 0, -2))
    fac1 = EvenFactor("A1(e1)", lat, form, ((2, 0, 0),), ((2, 0, 0),), (1, 0, 0),
                      WeylGroup(lat, [_refl(_flip(3, 0))], "A1", 2))
    fac2 = EvenFactor("A1xA1(e2,e3)", lat, form,
                      ((0, -2, 0), (0, 0, -2)), ((0, -2, 0), (0, 0, -2)),
                      (0, -1, -1),
                      WeylGroup(lat, [_refl(_flip(3, 1)), _refl(_flip(3, 2))],
                                "A1xA1", 4))
    w0 = WeylGroup(lat, [_refl(_flip(3, i)) for i in range(3)], "A1^3", 8)
    split = TypeTwoSplit(delta=(1, 0, 0), omega=(0, -1, -1), beta=(2, 0, 0), k=2)
    pos_iso = tuple(dict.fromkeys(_positive_by_basis(iso, basis)))
    return RootSystemData(
        rid, rid.canonical(), lat, form, tuple(even), tuple(odd), tuple(iso),
        basis, (fac1, fac2), w0, (0, -1, -1), "II", split, 1, 3, pos_iso)


# --------------------------------------------------------------------------
# construction-time invariants


def _rank_of(vectors: Sequence[Weight]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _check_construction(data: RootSystemData) -> None:
    d = data.lattice.denom
    allr = data.all_roots()
    for r in allr:
        if w_neg(r) not in allr:
            raise RuntimeError(f"{data.name}: roots are not symmetric at {r}")
    for r in data.isotropic_roots:
        if not scalar_is_zero(data.pair(r, r)):
            raise RuntimeError(f"{data.name}: listed isotropic root {r} is not isotropic")
    if allr and _rank_of(sorted(allr)) != data.root_span_dim:
        raise RuntimeError(f"{data.name}: root span has unexpected dimension")
    iso = set(data.isotropic_roots)
    iso_in_basis = [b for b in data.distinguished_basis if b in iso]
    if data.isotropic_roots and len(iso_in_basis) != 1:
        raise RuntimeError(f"{data.name}: distinguished basis must contain exactly "
                           f"one isotropic root, found {iso_in_basis}")
    sp = data.split
    if sp is not None:
        if w_sub(sp.beta, sp.delta) != sp.delta:
            raise RuntimeError(f"{data.name}: beta is not twice delta")
        if sp.beta not in data.even_roots:
            raise RuntimeError(f"{data.name}: beta must be an even root")
        if any(c for c in sp.omega):
            gamma = w_sub(sp.delta, sp.omega)
            if gamma != iso_in_basis[0]:
                raise RuntimeError(f"{data.name}: delta - omega is not the "
                                   f"isotropic simple root")
            f2 = data.factor2
            orb = f2.group.orbit(sp.omega)
            if len(orb) != 2 * sp.k:
                raise RuntimeError(f"{data.name}: omega orbit has {len(orb)} points, "
                                   f"expected {2 * sp.k}")
            if not is_small_orbit(f2, sp.omega):
                raise RuntimeError(f"{data.name}: omega orbit is not small")


# --------------------------------------------------------------------------
# axioms


def axioms_report(data: RootSystemData) -> Dict[str, bool]:
    """Brute-force verification of the generalized-root-system axioms.

    symmetry        R = -R and the roots span a space of the expected dimension
    integrality     2(a,b)/(a,a) is an integer for every non-isotropic a
    reflection      r_a(R) = R for every non-isotropic a
    isotropic       for isotropic a and (a,b) != 0: exactly one of b+a, b-a is
                    a root, and b -> b+-a extends to a bijection of R; with
                    doubled multiplicities only "at least one" is required
    """
    d = data.lattice.denom
    allr = data.all_roots()
    sym = all(w_neg(r) in allr for r in allr)
    span_ok = (not allr) or _rank_of(sorted(allr)) == data.root_span_dim
    integ = True
    refl = True
    for a in allr:
        aa = data.pair(a, a)
        if scalar_is_zero(aa):
            continue
        for b in allr:
            try:
                p = pairing(data.form, d, b, a)
            except ValueError:
                integ = False
                break
            if p.denominator != 1:
                integ = False
                break
            img = w_sub(b, tuple(int(p) * x for x in a))
            if img not in allr:
                refl = False
                break
        if not (integ and refl):
            break
    iso_ok = True
    doubled = data.iso_multiplicity == 2
    for a in data.isotropic_roots:
        moved = {}
        for b in allr:
            if scalar_is_zero(data.pair(a, b)):
                moved[b] = b
                continue
            plus = w_add(b, a) in allr
            minus = w_sub(b, a) in allr
            if doubled:
                if not (plus or minus):
                    iso_ok = False
                    break
            else:
                if plus == minus:
                    iso_ok = False
                    break
                moved[b] = w_add(b, a) if plus else w_sub(b, a)
        if not iso_ok:
            break
        if not doubled and set(moved.values()) != allr:
            iso_ok = False
            break
    return {
        "symmetry": sym and span_ok,
        "integrality": integ,
        "reflection": refl,
        "isotropic": iso_ok,
    }
