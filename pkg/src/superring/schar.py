"""Supercharacter generators.

The h-family comes from expanding the rational function chi(t) attached to
the standard representation as a Taylor series at t = 0; the expansion at
t = infinity gives the h^inf family.  Kac-module supercharacters multiply a
g0-character by the product of (1 - e^{-alpha}) over the odd positive
roots.  The exceptional families ship a handful of explicit invariants
(w for G(3), w1/w2/Q for F(4), Q/w_alpha for D(2,1;alpha), the omega
element for D(m,n), and (u-v)^2 for A(1,1)).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .laurent import LaurentPoly, Lattice, Weight, exact_div, w_neg
from .rootdata import (
    RootSystemData,
    RootSystemId,
    positive_odd_roots,
    quotient_weight_map,
)
from .weyl import alternate, is_dominant_integral

K_MAX_DEFAULT = 12

Series = List[LaurentPoly]


def _mono(lat: Lattice, coords) -> LaurentPoly:
    return LaurentPoly.monomial(lat, lat.weight(*coords))


def _unit(lat: Lattice, idx: int, val=1) -> LaurentPoly:
    coords = [0] * lat.dim
    coords[idx] = val
    return _mono(lat, coords)


def _ser_mul(a: Series, b: Series, k_max: int) -> Series:
    lat = a[0].lattice
    out = [LaurentPoly.zero(lat) for _ in range(k_max + 1)]
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j in range(k_max + 1 - i):
            if not b[j].is_zero():
                out[i + j] = out[i + j] + ai * b[j]
    return out


def _ser_geom(mono: LaurentPoly, k_max: int) -> Series:
    # 1/(1 - mono t) = sum mono^j t^j
    out = [LaurentPoly.const(mono.lattice, 1)]
    for _ in range(k_max):
        out.append(out[-1] * mono)
    return out


def _ser_linear(mono: LaurentPoly, k_max: int) -> Series:
    # 1 - mono t
    lat = mono.lattice
    out = [LaurentPoly.zero(lat) for _ in range(k_max + 1)]
    out[0] = LaurentPoly.const(lat, 1)
    if k_max >= 1:
        out[1] = -mono
    return out


def _ser_invert(d: Series, k_max: int) -> Series:
    """Power-series inverse; d[0] must be an invertible monomial."""
    lat = d[0].lattice
    d0 = d[0]
    if len(d0.terms) != 1 or abs(next(iter(d0.terms.values()))) != 1:
        raise ValueError("series has non-unit constant term")
    w0, c0 = next(iter(d0.terms.items()))
    inv0 = LaurentPoly.monomial(lat, w_neg(w0), c0)
    out = [inv0]
    for k in range(1, k_max + 1):
        acc = LaurentPoly.zero(lat)
        for j in range(1, min(k, len(d) - 1) + 1):
            if not d[j].is_zero():
                acc = acc + d[j] * out[k - j]
        out.append(-(inv0 * acc))
    return out


def _gl_series(lat: Lattice, n: int, m: int, k_max: int,
               x_of=None, y_of=None) -> Series:
    """Taylor coefficients of prod(1 - y_p t)/prod(1 - x_i t)."""
    if x_of is None:
        x_of = lambda i: _unit(lat, i)
    if y_of is None:
        y_of = lambda p: _unit(lat, n + p)
    ser = [LaurentPoly.const(lat, 1)] + [LaurentPoly.zero(lat)] * k_max
    for p in range(m):
        ser = _ser_mul(ser, _ser_linear(y_of(p), k_max), k_max)
    for i in range(n):
        ser = _ser_mul(ser, _ser_geom(x_of(i), k_max), k_max)
    return ser


def _bcd_series(data: RootSystemData, k_max: int, with_one: bool) -> Series:
    m, n = data.id.m, data.id.n
    lat = data.lattice
    ser = [LaurentPoly.const(lat, 1)] + [LaurentPoly.zero(lat)] * k_max
    for p in range(n):
        ser = _ser_mul(ser, _ser_linear(_unit(lat, m + p), k_max), k_max)
        ser = _ser_mul(ser, _ser_linear(_unit(lat, m + p, -1), k_max), k_max)
    if with_one:
        ser = _ser_mul(ser, _ser_geom(LaurentPoly.const(lat, 1), k_max), k_max)
    for i in range(m):
        ser = _ser_mul(ser, _ser_geom(_unit(lat, i), k_max), k_max)
        ser = _ser_mul(ser, _ser_geom(_unit(lat, i, -1), k_max), k_max)
    return ser


def h_series(data: RootSystemData, k_max: int) -> List[LaurentPoly]:
    """h_0 .. h_{k_max}: Taylor coefficients of chi(t) at zero.

    For sl the gl coefficients are pushed along the traceless section; for
    psl, where bare h_k does not live on the quotient torus, the shipped
    family is the degree-balanced products h_k h*_k realized there.
    """
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    fam = data.id.family
    lat = data.lattice
    if fam == "GL":
        return _gl_series(lat, data.id.n, data.id.m, k_max)
    if fam == "SL":
        from .rootdata import build

        gl = build("gl(%d,%d)" % (data.id.n, data.id.m))
        mv = quotient_weight_map(data.id)
        ser = h_series(gl, k_max)
        return [_push(h, lat, mv) for h in ser]
    if fam == "PSL":
        from .rootdata import build

        n = data.id.n
        gl = build("gl(%d,%d)" % (n, n))
        mv = quotient_weight_map(data.id)
        ser = h_series(gl, k_max)
        out = []
        for k, h in enumerate(ser):
            hs = _negate(h)
            out.append(_push(h * hs, lat, mv))
        return out
    if fam == "C":
        n = data.id.n
        ser = [LaurentPoly.const(lat, 1)] + [LaurentPoly.zero(lat)] * k_max
        for j in range(n):
            ser = _ser_mul(ser, _ser_linear(_unit(lat, 1 + j, 1), k_max), k_max)
            ser = _ser_mul(ser, _ser_linear(_unit(lat, 1 + j, -1), k_max), k_max)
        ser = _ser_mul(ser, _ser_geom(_unit(lat, 0, 1), k_max), k_max)
        ser = _ser_mul(ser, _ser_geom(_unit(lat, 0, -1), k_max), k_max)
        return ser
    if fam == "B":
        return _bcd_series(data, k_max, with_one=True)
    if fam == "D":
        return _bcd_series(data, k_max, with_one=False)
    if fam == "A11":
        x = _unit(lat, 0, 1)
        xi = _unit(lat, 0, -1)
        y = _unit(lat, 1, 1)
        yi = _unit(lat, 1, -1)
        ser = [LaurentPoly.const(lat, 1)] + [LaurentPoly.zero(lat)] * k_max
        ser = _ser_mul(ser, _ser_linear(y, k_max), k_max)
        ser = _ser_mul(ser, _ser_linear(yi, k_max), k_max)
        ser = _ser_mul(ser, _ser_geom(x, k_max), k_max)
        ser = _ser_mul(ser, _ser_geom(xi, k_max), k_max)
        return ser
    raise ValueError("no h-series for family %r" % (fam,))


def _push(f: LaurentPoly, lat: Lattice, mv) -> LaurentPoly:
    terms = {}
    for w, c in f.terms.items():
        img = mv(w)
        terms[img] = terms.get(img, 0) + c
    return LaurentPoly(lat, {w: c for w, c in terms.items() if c})


def _negate(f: LaurentPoly) -> LaurentPoly:
    return LaurentPoly(f.lattice, {w_neg(w): c for w, c in f.terms.items()})


def delta_element(data: RootSystemData) -> LaurentPoly:
    """Delta = prod(y_p)/prod(x_i) for gl(n,m)."""
    if data.id.family != "GL":
        raise ValueError("Delta is a gl element")
    n, m = data.id.n, data.id.m
    lat = data.lattice
    return _mono(lat, [-1] * n + [1] * m)


def h_infinity(data: RootSystemData, k: int) -> LaurentPoly:
    """Coefficient of t^{-k} in the expansion of gl's chi(t) at infinity.

    Computed honestly: substitute t = 1/s, divide the polynomial
    s^{n-m} prod(s - y_p) by prod(s - x_i) as a power series in s.
    The series starts at k = n - m; below that everything vanishes.
    """
    if data.id.family != "GL":
        raise ValueError("infinity expansion is a gl operation")
    n, m = data.id.n, data.id.m
    lat = data.lattice
    idx = k - (n - m)
    if idx < 0:
        return LaurentPoly.zero(lat)
    k_ser = idx
    one = LaurentPoly.const(lat, 1)
    num = [one] + [LaurentPoly.zero(lat)] * k_ser
    for p in range(m):
        # (s - y_p) contributes coefficients [-y_p, 1]
        fac = [-_unit(lat, n + p), one] + [LaurentPoly.zero(lat)] * max(0, k_ser - 1)
        num = _ser_mul(num, fac[: k_ser + 1], k_ser)
    den = [one] + [LaurentPoly.zero(lat)] * k_ser
    for i in range(n):
        fac = [-_unit(lat, i), one] + [LaurentPoly.zero(lat)] * max(0, k_ser - 1)
        den = _ser_mul(den, fac[: k_ser + 1], k_ser)
    inv = _ser_invert(den, k_ser)
    return _ser_mul(num, inv, k_ser)[k_ser]


def kac_supercharacter(data: RootSystemData, chi0: LaurentPoly) -> LaurentPoly:
    """sch K(V0) = prod over the odd part's weights of (1 - e^{-alpha}), times ch V0."""
    if data.type_flag != "I":
        raise ValueError(
            "%s is type II; the Kac supercharacter product here is the type I route"
            % data.name
        )
    if chi0.lattice != data.lattice:
        raise ValueError("chi0 lives on the wrong lattice")
    for g in data.w0.generators:
        if g.apply(chi0) != chi0:
            raise ValueError("chi0 is not Weyl invariant")
    lat = data.lattice
    one = LaurentPoly.const(lat, 1)
    prod = one
    if data.id.family == "A11":
        # g1 is one full copy {±alpha}; the doubled root multiplicities
        # split between the two graded pieces.
        for alpha in data.positive_isotropic:
            prod = prod * (one - LaurentPoly.monomial(lat, w_neg(alpha)))
            prod = prod * (one - LaurentPoly.monomial(lat, alpha))
    else:
        for alpha in positive_odd_roots(data):
            prod = prod * (one - LaurentPoly.monomial(lat, w_neg(alpha)))
    return prod * chi0


def even_character(data: RootSystemData, lam: Weight) -> LaurentPoly:
    """Character of the g0 module with highest weight lam (central parts ride along)."""
    if data.degree_zero_required and sum(lam) != 0:
        # off the coordinate-sum-zero slice the quotient form pairings are
        # meaningless, so reject before they mislead the dominance check
        raise ValueError(
            "%s weights must have coordinate sum zero; got %r" % (data.name, lam))
    for f in data.even_factors:
        if not is_dominant_integral(f, lam):
            raise ValueError("weight %r is not dominant integral for %s" % (lam, f.name))
    p = LaurentPoly.monomial(data.lattice, lam)
    for f in data.even_factors:
        rho = LaurentPoly.monomial(data.lattice, f.rho)
        p = exact_div(alternate(f.group, p * rho), alternate(f.group, rho))
    return p


@dataclass(frozen=True)
class GeneratorSpec:
    tag: str
    k: Optional[int] = None


_TAG_FAMILIES = {
    "h": ("GL", "SL", "PSL", "C", "B", "D", "A11"),
    "h_star": ("GL", "SL", "PSL", "A11"),
    "h_inf": ("GL",),
    "Delta": ("GL",),
    "Delta_star": ("GL",),
    "w_G3": ("G3",),
    "w1_F4": ("F4",),
    "w2_F4": ("F4",),
    "Q_F4": ("F4",),
    "Q_D21": ("D21",),
    "w_alpha_D21": ("D21",),
    "Q_A11_square": ("A11",),
    "omega_Dmn": ("D",),
}


def _sign_quotient(x: LaurentPoly, xinv: LaurentPoly, p: int) -> LaurentPoly:
    """(x^p - x^{-p})/(x - x^{-1}) as the balanced geometric sum."""
    lat = x.lattice
    if p == 0:
        return LaurentPoly.zero(lat)
    out = LaurentPoly.zero(lat)
    ap = abs(p)
    term = x ** (ap - 1) if ap > 1 else LaurentPoly.const(lat, 1)
    step = xinv * xinv
    for _ in range(ap):
        out = out + term
        term = term * step
    return out if p > 0 else -out


def special_generator(data: RootSystemData, spec: GeneratorSpec) -> LaurentPoly:
    tag = spec.tag
    if tag not in _TAG_FAMILIES:
        raise ValueError("unknown generator tag %r" % (tag,))
    if data.id.family not in _TAG_FAMILIES[tag]:
        raise ValueError("tag %r is not defined for %s" % (tag, data.name))
    lat = data.lattice
    if tag in ("h", "h_star", "h_inf"):
        if spec.k is None:
            raise ValueError("tag %r needs an index k" % (tag,))
        if tag == "h_inf":
            return h_infinity(data, spec.k)
        if spec.k < 0:
            return LaurentPoly.zero(lat)
        h = h_series(data, spec.k)[spec.k]
        return _negate(h) if tag == "h_star" else h
    if tag == "Delta":
        return delta_element(data)
    if tag == "Delta_star":
        return _negate(delta_element(data))
    if tag == "w_G3":
        x1, x2 = _unit(lat, 0), _unit(lat, 1)
        x1i, x2i = _unit(lat, 0, -1), _unit(lat, 1, -1)
        u1 = x1 + x1i
        u2 = x2 + x2i
        u3 = x1 * x2 + x1i * x2i
        v = _unit(lat, 2) + _unit(lat, 2, -1)
        one = LaurentPoly.const(lat, 1)
        return v * v - v * (u1 + u2 + u3 + one) + u1 * u2 + u1 * u3 + u2 * u3
    if tag in ("w1_F4", "w2_F4", "Q_F4"):
        # variables are the half-weights: x_i = e^{eps_i/2}, y = e^{delta/2},
        # i.e. one scaled lattice step each on the denom-2 lattice.
        def xs(i, e):
            c = [0, 0, 0, 0]
            c[i] = e
            return LaurentPoly.monomial(lat, tuple(c))

        if tag == "Q_F4":
            m = LaurentPoly.monomial(lat, (1, 1, 1, 0))
            mi = LaurentPoly.monomial(lat, (-1, -1, -1, 0))
            v = xs(3, 1) + xs(3, -1)
            q = v - m - mi
            for i in range(3):
                q = q * (v - m * xs(i, -2) - mi * xs(i, 2))
            return q
        k = 1 if tag == "w1_F4" else 2
        out = LaurentPoly.zero(lat)
        # pair sum over the full sign orbit (x_i^{2k} + x_i^{-2k})(x_j^{2k} + x_j^{-2k});
        # anything less is not invariant under single sign flips.
        for i in range(3):
            for j in range(i + 1, 3):
                out = out + (xs(i, 2 * k) + xs(i, -2 * k)) * (xs(j, 2 * k) + xs(j, -2 * k))
        for i in range(3):
            out = out + xs(i, 2 * k) + xs(i, -2 * k)
        out = out + xs(3, 2 * k) + xs(3, -2 * k)
        prod = xs(3, k) + xs(3, -k)
        for i in range(3):
            prod = prod * (xs(i, k) + xs(i, -k))
        return out - prod
    if tag == "Q_D21":
        u = [_unit(lat, i) + _unit(lat, i, -1) for i in range(3)]
        four = LaurentPoly.const(lat, 4)
        return u[0] * u[0] + u[1] * u[1] + u[2] * u[2] - u[0] * u[1] * u[2] - four
    if tag == "w_alpha_D21":
        if data.id.alpha is None:
            raise ValueError("w_alpha needs a rational alpha")
        p = data.id.alpha.numerator
        q = data.id.alpha.denominator
        x1, x2, x3 = (_unit(lat, i) for i in range(3))
        x1i, x2i, x3i = (_unit(lat, i, -1) for i in range(3))
        # head must carry x2x3 + (x2x3)^{-1} - u_1, not its negative: only then
        # does the whole expression collapse into Z[u1,u2,u3] (the single-flip
        # variances of the two summands cancel) while still restricting to
        # x2^p x3^{-q} + x2^{-p} x3^q on the wall x1 = x2 x3.
        head = x2 * x3 + x2i * x3i - x1 - x1i
        w = head * _sign_quotient(x2, x2i, p) * _sign_quotient(x3, x3i, q)
        return w + _unit(lat, 1, p) * _unit(lat, 2, -q) + _unit(lat, 1, -p) * _unit(lat, 2, q)
    if tag == "Q_A11_square":
        u = _unit(lat, 0) + _unit(lat, 0, -1)
        v = _unit(lat, 1) + _unit(lat, 1, -1)
        d = u - v
        return d * d
    if tag == "omega_Dmn":
        m, n = data.id.m, data.id.n
        omega = LaurentPoly.zero(lat)
        for mask in range(1 << m):
            if bin(mask).count("1") % 2:
                continue
            coords = [(-2 if (mask >> i) & 1 else 2) for i in range(m)] + [0] * n
            omega = omega + LaurentPoly.monomial(lat, tuple(coords))
        prod = LaurentPoly.const(lat, 1)
        for i in range(m):
            u = _unit(lat, i) + _unit(lat, i, -1)
            for p in range(n):
                v = _unit(lat, m + p) + _unit(lat, m + p, -1)
                prod = prod * (u - v)
        return omega * prod
    raise AssertionError(tag)
