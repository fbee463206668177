"""Verification sweeps: every structural claim the package makes, run as data.

Each suite is a named bundle of exact checks (integer/rational equality only,
no tolerances).  Suites produce one `CaseResult` per case; reports are merged
deterministically by sorting on the case key, so repeated runs emit identical
output byte for byte.  `SUPERRING_THREADS` caps the worker pool; the default
is serial execution, which is already deterministic.

The desk configuration in `DESK_SUITES` is the shipped acceptance surface:
`superring verify all --desk` runs it end to end.
"""

from __future__ import annotations

import os
import random
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .laurent import (BilinearForm, Lattice, LaurentPoly, Weight, derivation,
                      exact_div, from_json, to_json, w_neg)
from .rootdata import RootSystemData, axioms_report, build, quotient_weight_map
from .weyl import is_dominant_integral
from .jring import equivalent_condition_check, is_member
from .groupoid import is_invariant
from .schar import (GeneratorSpec, delta_element, even_character, h_infinity,
                    h_series, kac_supercharacter, special_generator)
from .decomp import (decompose_exceptional, decompose_gl_block,
                     decompose_typeI, schur_pair_element, wall_element)
from .hweights import admissibility_equivalence_failures, leading_term_analysis


@dataclass(frozen=True)
class CaseResult:
    suite: str
    key: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        tail = f"  ({self.detail})" if self.detail and not self.ok else ""
        return f"{mark} {self.suite}: {self.key}{tail}"


@dataclass(frozen=True)
class VerificationSuite:
    """A named sweep: which systems, at which bounds, expected to pass."""

    name: str
    systems: Tuple[str, ...] = ()
    bounds: Dict[str, int] = field(default_factory=dict)
    expected: str = "pass"

    def bound(self, key: str, default: int) -> int:
        return int(self.bounds.get(key, default))


# --------------------------------------------------------------------------
# execution plumbing

Task = Tuple[str, Callable[[], Tuple[bool, str]]]


def _max_workers() -> int:
    raw = os.environ.get("SUPERRING_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def _run_tasks(suite: str, tasks: List[Task]) -> List[CaseResult]:
    def one(task: Task) -> CaseResult:
        key, thunk = task
        try:
            ok, detail = thunk()
        except Exception as exc:          # a crash is a failing case, not a crash
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        return CaseResult(suite, key, ok, detail)

    workers = _max_workers()
    if workers == 1:
        results = [one(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, tasks))
    return sorted(results, key=lambda r: r.key)


def _seed(*parts) -> int:
    # stable across processes, unlike hash()
    return zlib.crc32("/".join(str(p) for p in parts).encode())


def _rng(*parts) -> random.Random:
    return random.Random(_seed(*parts))


# --------------------------------------------------------------------------
# shared constructors

# every gl lattice stores exponents at this denominator; the quotient maps
# onto the traceless sections expect their input at the same scale
_GL_DENOM = 12


def _int_box(dim: int, total: int) -> Iterator[Weight]:
    """All integer tuples with sum of absolute values <= total."""
    if dim == 0:
        yield ()
        return
    for v in range(-total, total + 1):
        for rest in _int_box(dim - 1, total - abs(v)):
            yield (v,) + rest


def small_dominant_weights(data: RootSystemData, height: int) -> List[Weight]:
    """Dominant-integral lattice weights of bounded size, smallest first.

    On the traceless sections the box is taken upstairs and pushed through
    the quotient map, which keeps every candidate on the legal slice."""
    fam = data.id.family
    found = set()
    if fam in ("SL", "PSL"):
        mv = quotient_weight_map(data.id)
        # the quotient map eats gl-scaled exponents
        up = Lattice(data.id.n + data.id.m, _GL_DENOM)
        for w in _int_box(data.id.n + data.id.m, height):
            img = mv(up.weight(*w))
            if data.degree_zero_required and sum(img) != 0:
                continue
            if all(is_dominant_integral(fac, img) for fac in data.even_factors):
                found.add(img)
    else:
        for w in _int_box(data.lattice.dim, height):
            sw = data.lattice.weight(*w)
            if all(is_dominant_integral(fac, sw) for fac in data.even_factors):
                found.add(sw)
    return sorted(found)


def _orbit_sum(data: RootSystemData, w: Weight) -> LaurentPoly:
    return LaurentPoly(data.lattice, {v: 1 for v in data.w0.orbit(w)})


def random_invariant(data: RootSystemData, rng: random.Random,
                     box: int = 2, terms: int = 2) -> LaurentPoly:
    """A random Weyl-invariant element: signed sum of orbit sums.

    Every weight in one sample sits in a single residue class of the exponent
    lattice, so no two support points differ by a fractional multiple of an
    isotropic root.  Reflections only move weights by root-lattice vectors,
    hence the orbits stay inside the class."""
    lat = data.lattice
    fam = data.id.family
    d = lat.denom
    offset = (0,) * lat.dim
    if d > 1 and fam == "GL" and rng.random() < 0.4:
        # a balanced fractional class: constant on each parity block
        n, m = data.id.n, data.id.m
        offset = (rng.randrange(d),) * n + (rng.randrange(d),) * m
    elif d == 2 and rng.random() < 0.4:
        # the half-integer class on the orthosymplectic and F-type lattices
        offset = (1,) * lat.dim
    f = LaurentPoly.zero(lat)
    for _ in range(rng.randint(1, terms)):
        if fam in ("SL", "PSL"):
            up = tuple(rng.randint(-box, box) * _GL_DENOM
                       for _ in range(data.id.n + data.id.m))
            w = quotient_weight_map(data.id)(up)
        else:
            w = tuple(rng.randint(-box, box) * d + o for o in offset)
        c = rng.randint(1, 3) * rng.choice((1, -1))
        f = f + _orbit_sum(data, w) * c
    return f


def _star(f: LaurentPoly) -> LaurentPoly:
    # invert every torus coordinate
    return LaurentPoly(f.lattice, {w_neg(w): c for w, c in f.terms.items()})


_H_FAMILIES = ("GL", "SL", "PSL", "C", "B", "D")
_STAR_FAMILIES = ("GL", "SL", "PSL")


def generator_inventory(data: RootSystemData, k_max: int = 8
                        ) -> List[Tuple[str, LaurentPoly]]:
    """Every shipped generator of the system, labelled.

    A(1,1) ships only the squared difference: its bare h_k images are
    deliberately not members there."""
    fam = data.id.family
    out: List[Tuple[str, LaurentPoly]] = []
    if fam in _H_FAMILIES:
        for k in range(1, k_max + 1):
            out.append((f"h[{k}]", special_generator(data, GeneratorSpec("h", k))))
    if fam in _STAR_FAMILIES:
        for k in range(1, k_max + 1):
            out.append((f"h_star[{k}]",
                        special_generator(data, GeneratorSpec("h_star", k))))
    if fam == "GL":
        out.append(("Delta", special_generator(data, GeneratorSpec("Delta"))))
        out.append(("Delta_star",
                    special_generator(data, GeneratorSpec("Delta_star"))))
    if fam == "D":
        out.append(("omega", special_generator(data, GeneratorSpec("omega_Dmn"))))
    if fam == "G3":
        out.append(("w", special_generator(data, GeneratorSpec("w_G3"))))
    if fam == "F4":
        out.append(("w1", special_generator(data, GeneratorSpec("w1_F4"))))
        out.append(("w2", special_generator(data, GeneratorSpec("w2_F4"))))
        out.append(("Q", special_generator(data, GeneratorSpec("Q_F4"))))
    if fam == "D21":
        out.append(("Q", special_generator(data, GeneratorSpec("Q_D21"))))
        if not data.id.irrational:
            out.append(("w_alpha",
                        special_generator(data, GeneratorSpec("w_alpha_D21"))))
    if fam == "A11":
        out.append(("Q", special_generator(data, GeneratorSpec("Q_A11_square"))))
    return out


# --------------------------------------------------------------------------
# suite: axioms


def _desk_axiom_systems() -> Tuple[str, ...]:
    names = []
    for n in range(1, 5):
        for m in range(1, 5):
            names.append(f"gl({n},{m})")
            if n != m:
                names.append(f"sl({n},{m})")
    names += ["psl(3,3)", "psl(4,4)", "A(1,1)"]
    for m in range(0, 5):
        for n in range(1, 5):
            names.append(f"B({m},{n})")
    for n in range(1, 5):
        names.append(f"C({n})")
    for m in range(2, 5):
        for n in range(1, 5):
            names.append(f"D({m},{n})")
    names += ["G(3)", "F(4)",
              "D(2,1;1)", "D(2,1;1/2)", "D(2,1;2/3)", "D(2,1;3)",
              "D(2,1;irrational)"]
    return tuple(names)


def _run_axioms(suite: VerificationSuite) -> List[CaseResult]:
    tasks: List[Task] = []
    for name in suite.systems:
        def thunk(name=name):
            rep = axioms_report(build(name))
            bad = sorted(k for k, v in rep.items() if not v)
            return (not bad), ("violated: " + ", ".join(bad) if bad else "")
        tasks.append((name, thunk))
    return _run_tasks(suite.name, tasks)


# --------------------------------------------------------------------------
# suite: admissibility (geometric predicate vs. clause lists)


def _run_admissibility(suite: VerificationSuite) -> List[CaseResult]:
    bound = suite.bound("bound", 5)
    tasks: List[Task] = []
    for name in suite.systems:
        def thunk(name=name):
            fails = admissibility_equivalence_failures(build(name), bound)
            if not fails:
                return True, ""
            return False, f"{len(fails)} disagreements, first {fails[0]}"
        tasks.append((f"{name} bound={bound}", thunk))
    return _run_tasks(suite.name, tasks)


# --------------------------------------------------------------------------
# suite: generators (membership of everything we ship)


def _run_generators(suite: VerificationSuite) -> List[CaseResult]:
    k_max = suite.bound("k_max", 8)
    height = suite.bound("height", 3)
    tasks: List[Task] = []
    for name in suite.systems:
        data = build(name)
        for label, poly in generator_inventory(data, k_max):
            def thunk(data=data, poly=poly):
                rep = is_member(data, poly)
                return bool(rep), "" if rep else f"rejected: {rep.failing_root}"
            tasks.append((f"{name} {label}", thunk))
        if data.type_flag == "I":
            for lam in small_dominant_weights(data, height):
                def thunk(data=data, lam=lam):
                    chi0 = even_character(data, lam)
                    rep = is_member(data, kac_supercharacter(data, chi0))
                    return bool(rep), "" if rep else f"rejected: {rep.failing_root}"
                tasks.append((f"{name} kac{list(lam)}", thunk))
    return _run_tasks(suite.name, tasks)


# --------------------------------------------------------------------------
# suite: gl identities


def h_tilde(data: RootSystemData, k: int, cache: Optional[list] = None
            ) -> LaurentPoly:
    """h_k minus the matching coefficient of the expansion at infinity."""
    if k >= 0:
        hk = (cache[k] if cache is not None and k < len(cache)
              else h_series(data, k)[k])
    else:
        hk = LaurentPoly.zero(data.lattice)
    return hk - h_infinity(data, -k)


def _det_poly(rows: List[List[LaurentPoly]], lat: Lattice) -> LaurentPoly:
    n = len(rows)
    if n == 0:
        return LaurentPoly.const(lat, 1)
    out = LaurentPoly.zero(lat)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n)
                  if perm[i] > perm[j])
        sign = -1 if inv % 2 else 1
        term = LaurentPoly.const(lat, sign)
        for i in range(n):
            term = term * rows[i][perm[i]]
        out = out + term
    return out


def _alternant(lat: Lattice, idx: Sequence[int], exps: Sequence[int]
               ) -> LaurentPoly:
    r = len(idx)
    terms: Dict[Weight, int] = {}
    for perm in permutations(range(r)):
        inv = sum(1 for i in range(r) for j in range(i + 1, r)
                  if perm[i] > perm[j])
        w = [0] * lat.dim
        for row, col in enumerate(perm):
            w[idx[row]] = exps[col] * lat.denom
        key = tuple(w)
        terms[key] = terms.get(key, 0) + (-1 if inv % 2 else 1)
    return LaurentPoly(lat, terms)


def schur_block(lat: Lattice, idx: Sequence[int], lam: Sequence[int]
                ) -> LaurentPoly:
    """Schur Laurent polynomial in the chosen coordinates, by bialternant."""
    r = len(idx)
    if len(lam) != r:
        raise ValueError("partition length must match the variable count")
    if any(lam[i] < lam[i + 1] for i in range(r - 1)):
        raise ValueError("weights must be sorted decreasing")
    num = _alternant(lat, idx, [lam[j] + (r - 1 - j) for j in range(r)])
    den = _alternant(lat, idx, [r - 1 - j for j in range(r)])
    return exact_div(num, den)


def schur_pair_product(data: RootSystemData, lam: Sequence[int],
                       mu: Sequence[int]) -> LaurentPoly:
    """Brute-force s_lam(x) s_mu(y) times the wall, no determinant involved."""
    n, m = data.id.n, data.id.m
    lat = data.lattice
    sx = schur_block(lat, range(n), lam)
    sy = schur_block(lat, range(n, n + m), mu)
    return sx * sy * wall_element(data)


def _nonincreasing(vals: Sequence[int], r: int) -> Iterator[Tuple[int, ...]]:
    for comb in combinations_with_replacement(sorted(vals, reverse=True), r):
        yield comb


def _run_gl_identities(suite: VerificationSuite) -> List[CaseResult]:
    k_max = suite.bound("k_max", 6)
    entry = suite.bound("entry", 3)
    tasks: List[Task] = []

    # literal infinity-expansion identity; carries no sign correction, so it
    # can only hold when the two variable counts agree mod 2
    for name in ("gl(2,1)", "gl(2,2)"):
        data = build(name)
        hs = h_series(data, k_max + abs(data.id.n - data.id.m) + 1)
        delta = delta_element(data)
        shift = data.id.m - data.id.n
        for k in range(0, k_max + 1):
            def thunk(data=data, hs=hs, delta=delta, shift=shift, k=k):
                idx = k + shift
                rhs = (delta * _star(hs[idx]) if idx >= 0
                       else LaurentPoly.zero(data.lattice))
                lhs = h_infinity(data, k)
                return lhs == rhs, "expansion at infinity disagrees"
            tasks.append((f"hinf-literal {name} k={k}", thunk))
        for k in range(0, k_max + 1):
            def thunk(data=data, hs=hs, delta=delta, shift=shift, k=k):
                sgn = -1 if shift % 2 else 1
                idx = k + shift
                rhs = (delta * _star(hs[idx]) * sgn if idx >= 0
                       else LaurentPoly.zero(data.lattice))
                return h_infinity(data, k) == rhs, "signed identity disagrees"
            tasks.append((f"hinf-signed {name} k={k}", thunk))

    # shifted-determinant identity on gl(2,2)
    data22 = build("gl(2,2)")
    hcache = h_series(data22, 10)
    an = LaurentPoly.monomial(data22.lattice, data22.lattice.weight(1, 1, 0, 0))
    an_inv = LaurentPoly.monomial(data22.lattice,
                                  data22.lattice.weight(-1, -1, 0, 0))
    for k1 in range(0, 4):
        for k2 in range(0, 4):
            if k1 == k2:
                continue
            for l in (-1, 0, 1, 2):
                def thunk(k1=k1, k2=k2, l=l):
                    lat = data22.lattice
                    def ht(k):
                        return h_tilde(data22, k, hcache)
                    left = _det_poly([[ht(k1), ht(k1 + 1)],
                                      [ht(k2), ht(k2 + 1)]], lat)
                    right = _det_poly([[ht(k1 + l), ht(k1 + l + 1)],
                                       [ht(k2 + l), ht(k2 + l + 1)]], lat)
                    power = LaurentPoly.const(lat, 1)
                    base = an if l >= 0 else an_inv
                    for _ in range(abs(l)):
                        power = power * base
                    # the shift contributes (x1 x2)^l and a sign (-1)^(n*l)
                    sgn = -1 if (data22.id.n * l) % 2 else 1
                    return left * power == right * sgn, "determinant shift broke"
                tasks.append((f"det-shift gl(2,2) k=({k1},{k2}) l={l}", thunk))

    # paired-Schur determinant vs. the brute product
    for name in ("gl(1,1)", "gl(2,1)"):
        data = build(name)
        n, m = data.id.n, data.id.m
        vals = range(-entry, entry + 1)
        for lam in _nonincreasing(vals, n):
            for mu in _nonincreasing(vals, m):
                def thunk(data=data, lam=lam, mu=mu):
                    got = schur_pair_element(data, lam, mu)
                    want = schur_pair_product(data, lam, mu)
                    return got == want, "determinant value disagrees"
                tasks.append(
                    (f"schur-pair {name} lam={list(lam)} mu={list(mu)}", thunk))

    return _run_tasks(suite.name, tasks)


# --------------------------------------------------------------------------
# suite: decomposition round trips


def _series_for(data: RootSystemData, k_max: int) -> List[LaurentPoly]:
    return h_series(data, k_max)


def _random_h_product(data: RootSystemData, rng: random.Random,
                      series: List[LaurentPoly], budget: int) -> LaurentPoly:
    f = LaurentPoly.const(data.lattice, 1)
    left = rng.randint(0, budget)
    while left > 0:
        k = rng.randint(1, left)
        f = f * series[k]
        left -= k
        if rng.random() < 0.35:
            break
    return f


def random_member(data: RootSystemData, rng: random.Random,
                  degree: int = 6) -> LaurentPoly:
    """A random element built straight from the shipped presentation."""
    fam = data.id.family
    lat = data.lattice
    if fam in ("GL", "SL"):
        series = _series_for(data, degree)
        f = LaurentPoly.zero(lat)
        for _ in range(rng.randint(1, 3)):
            g = _random_h_product(data, rng, series, degree)
            if fam == "GL":
                if rng.random() < 0.5:
                    g = g * _star(_random_h_product(data, rng, series,
                                                    degree // 2))
                a = rng.randint(-2, 2)
                if a:
                    n, m = data.id.n, data.id.m
                    tw = lat.weight(*((-a,) * n + (a,) * m))
                    g = g * LaurentPoly.monomial(lat, tw)
            f = f + g * (rng.randint(1, 4) * rng.choice((1, -1)))
        return f
    if fam == "C":
        series = _series_for(data, degree)
        f = LaurentPoly.zero(lat)
        for _ in range(rng.randint(1, 2)):
            g = _random_h_product(data, rng, series, degree)
            f = f + g * (rng.randint(1, 3) * rng.choice((1, -1)))
        if rng.random() < 0.5:
            pool = small_dominant_weights(data, 2)
            lam = pool[rng.randrange(len(pool))]
            kac = kac_supercharacter(data, even_character(data, lam))
            f = f + kac * (rng.randint(1, 2) * rng.choice((1, -1)))
        return f
    if fam == "G3":
        w = special_generator(data, GeneratorSpec("w_G3"))
        f = LaurentPoly.const(lat, rng.randint(-4, 4))
        for j in (1, 2, 3):
            if rng.random() < 0.5:
                f = f + (w ** j) * rng.randint(-3, 3)
        if rng.random() < 0.7:
            f = f + wall_element(data) * random_invariant(data, rng, box=1)
        return f
    if fam == "F4":
        w1 = special_generator(data, GeneratorSpec("w1_F4"))
        w2 = special_generator(data, GeneratorSpec("w2_F4"))
        f = LaurentPoly.const(lat, rng.randint(-4, 4))
        for a, b in ((1, 0), (2, 0), (0, 1), (1, 1)):
            if rng.random() < 0.4:
                f = f + (w1 ** a) * (w2 ** b) * rng.randint(-2, 2)
        if rng.random() < 0.7:
            f = f + wall_element(data) * random_invariant(data, rng, box=1)
        return f
    if fam == "D21":
        f = LaurentPoly.const(lat, rng.randint(-4, 4))
        if not data.id.irrational:
            wa = special_generator(data, GeneratorSpec("w_alpha_D21"))
            for j in (1, 2):
                if rng.random() < 0.5:
                    f = f + (wa ** j) * rng.randint(-3, 3)
        if data.id.irrational or rng.random() < 0.8:
            f = f + wall_element(data) * random_invariant(data, rng, box=1)
        return f
    if fam == "A11":
        f = LaurentPoly.const(lat, rng.randint(-4, 4))
        q = special_generator(data, GeneratorSpec("Q_A11_square"))
        f = f + q * random_invariant(data, rng, box=2)
        if rng.random() < 0.3:
            f = f + q * q * random_invariant(data, rng, box=1)
        return f
    raise ValueError(f"no presentation-based sampler for {data.name}")


def _decompose_for(data: RootSystemData, f: LaurentPoly):
    fam = data.id.family
    if fam in ("G3", "F4", "D21", "A11"):
        return decompose_exceptional(data, f)
    if fam in ("GL", "SL"):
        return decompose_gl_block(data, f)
    return decompose_typeI(data, f)


def _run_roundtrip(suite: VerificationSuite) -> List[CaseResult]:
    cases = suite.bound("cases", 100)
    degree = suite.bound("degree", 6)
    tasks: List[Task] = []
    for name in suite.systems:
        data = build(name)
        for i in range(cases):
            def thunk(data=data, name=name, i=i):
                rng = _rng("roundtrip", name, i)
                f = random_member(data, rng, degree)
                dec = _decompose_for(data, f)
                back = dec.synthesize(data)
                if back != f:
                    return False, "resynthesis differs"
                return True, ""
            tasks.append((f"{name} case={i:03d}", thunk))
    return _run_tasks(suite.name, tasks)


# --------------------------------------------------------------------------
# suite: groupoid invariance vs. membership


def _run_groupoid(suite: VerificationSuite) -> List[CaseResult]:
    cases = suite.bound("cases", 200)
    k_max = suite.bound("k_max", 6)
    tasks: List[Task] = []
    for name in suite.systems:
        data = build(name)
        for i in range(cases):
            def thunk(data=data, name=name, i=i):
                rng = _rng("groupoid", name, i)
                f = random_invariant(data, rng, box=2, terms=2)
                inv = is_invariant(data, f)
                mem = bool(is_member(data, f))
                return inv == mem, f"invariant={inv} member={mem}"
            tasks.append((f"{name} random={i:03d}", thunk))
        for label, poly in generator_inventory(data, k_max):
            def thunk(data=data, poly=poly):
                inv = is_invariant(data, poly)
                mem = bool(is_member(data, poly))
                return inv == mem and inv, f"invariant={inv} member={mem}"
            tasks.append((f"{name} gen {label}", thunk))
    return _run_tasks(suite.name, tasks)


# --------------------------------------------------------------------------
# suite: the squared wall of A(1,1)


def _a11_uv(data: RootSystemData) -> Tuple[LaurentPoly, LaurentPoly]:
    lat = data.lattice
    u = LaurentPoly(lat, {(1, 0): 1, (-1, 0): 1})
    v = LaurentPoly(lat, {(0, 1): 1, (0, -1): 1})
    return u, v


def _run_a11_wall(suite: VerificationSuite) -> List[CaseResult]:
    cases = suite.bound("cases", 100)
    data = build("A(1,1)")
    q = special_generator(data, GeneratorSpec("Q_A11_square"))
    u, v = _a11_uv(data)
    tasks: List[Task] = []

    for i in range(cases):
        def thunk(i=i):
            rng = _rng("a11-member", i)
            f = LaurentPoly.const(data.lattice, rng.randint(-4, 4)) \
                + q * random_invariant(data, rng, box=2)
            mem = bool(is_member(data, f))
            agree = equivalent_condition_check(data, f)
            return mem and agree, f"member={mem} readings-agree={agree}"
        tasks.append((f"member case={i:03d}", thunk))

    for i in range(cases):
        def thunk(i=i):
            rng = _rng("a11-nonmember", i)
            f = random_invariant(data, rng, box=3, terms=3)
            while bool(is_member(data, f)):
                f = f + random_invariant(data, rng, box=3, terms=1)
            return equivalent_condition_check(data, f), "readings disagree"
        tasks.append((f"nonmember case={i:03d}", thunk))

    def diff_thunk():
        return not bool(is_member(data, u - v)), "difference slipped in"
    tasks.append(("difference u-v", diff_thunk))

    for j in range(4):
        def thunk(j=j):
            poly_v = v ** j if j else LaurentPoly.const(data.lattice, 1)
            return (not bool(is_member(data, (u - v) * poly_v)),
                    "one-sided multiple slipped in")
        tasks.append((f"difference times v^{j}", thunk))
    for i in range(10):
        def thunk(i=i):
            rng = _rng("a11-qv", i)
            qv = LaurentPoly.zero(data.lattice)
            while qv.is_zero():
                qv = sum(((v ** j) * rng.randint(-2, 2) for j in range(4)),
                         LaurentPoly.zero(data.lattice))
            return (not bool(is_member(data, (u - v) * qv)),
                    "one-sided multiple slipped in")
        tasks.append((f"difference times q(v) case={i}", thunk))

    return _run_tasks(suite.name, tasks)


# --------------------------------------------------------------------------
# suite: leading-term certification


def _leading_members(data: RootSystemData, k_max: int
                     ) -> List[Tuple[str, LaurentPoly]]:
    fam = data.id.family
    base: List[Tuple[str, LaurentPoly]] = []
    if fam in ("B", "D"):
        hs = h_series(data, k_max)
        base += [(f"h[{k}]", hs[k]) for k in range(1, k_max + 1)]
        if fam == "D":
            base.append(("omega",
                         special_generator(data, GeneratorSpec("omega_Dmn"))))
    if fam == "G3":
        w = special_generator(data, GeneratorSpec("w_G3"))
        base += [("w", w), ("wall", wall_element(data))]
    out = list(base)
    for (la, fa), (lb, fb) in combinations_with_replacement(base, 2):
        out.append((f"{la}*{lb}", fa * fb))
    return out


def _run_leading_term(suite: VerificationSuite) -> List[CaseResult]:
    k_max = suite.bound("k_max", 6)
    tasks: List[Task] = []
    for name in suite.systems:
        data = build(name)
        for label, poly in _leading_members(data, k_max):
            def thunk(data=data, poly=poly):
                lt = leading_term_analysis(data, poly)
                bad = sorted(lam for lam, ok in lt.certified.items() if not ok)
                if bad:
                    return False, f"uncertified at level {lt.j}: {bad[:3]}"
                return True, ""
            tasks.append((f"{name} {label}", thunk))
    return _run_tasks(suite.name, tasks)


# --------------------------------------------------------------------------
# suite: engine properties


def _random_poly(rng: random.Random, lat: Lattice, terms: int = 5,
                 box: int = 5, coeff: int = 9) -> LaurentPoly:
    out: Dict[Weight, int] = {}
    for _ in range(rng.randint(0, terms)):
        w = tuple(rng.randint(-box, box) for _ in range(lat.dim))
        out[w] = out.get(w, 0) + rng.randint(-coeff, coeff)
    return LaurentPoly(lat, out)


def _random_lattice(rng: random.Random) -> Lattice:
    return Lattice(rng.randint(1, 3), rng.choice((1, 1, 2, 3)))


def _run_engine(suite: VerificationSuite) -> List[CaseResult]:
    cases = suite.bound("cases", 1000)
    tasks: List[Task] = []

    for i in range(cases):
        def thunk(i=i):
            rng = _rng("engine-ring", i)
            lat = _random_lattice(rng)
            a = _random_poly(rng, lat)
            b = _random_poly(rng, lat)
            c = _random_poly(rng, lat)
            one = LaurentPoly.const(lat, 1)
            checks = (
                (a + b) + c == a + (b + c),
                a + b == b + a,
                a * b == b * a,
                (a * b) * c == a * (b * c),
                a * (b + c) == a * b + a * c,
                a - a == LaurentPoly.zero(lat),
                one * a == a,
            )
            return all(checks), "ring axiom violated"
        tasks.append((f"ring case={i:04d}", thunk))

    for i in range(cases):
        def thunk(i=i):
            rng = _rng("engine-leibniz", i)
            lat = _random_lattice(rng)
            gram = [[Fraction(0)] * lat.dim for _ in range(lat.dim)]
            for r in range(lat.dim):
                for s in range(r, lat.dim):
                    val = Fraction(rng.randint(-3, 3))
                    gram[r][s] = gram[s][r] = val
            form = BilinearForm(gram)
            vv = tuple(rng.randint(-3, 3) for _ in range(lat.dim))
            f = _random_poly(rng, lat, terms=4, box=3)
            g = _random_poly(rng, lat, terms=4, box=3)
            pf, df = derivation(f, vv, form)
            pg, dg = derivation(g, vv, form)
            pfg, dfg = derivation(f * g, vv, form)
            lhs = pfg * (df * dg)
            rhs = (pf * g * dg + pg * f * df) * dfg
            return lhs == rhs, "product rule violated"
        tasks.append((f"leibniz case={i:04d}", thunk))

    for i in range(cases):
        def thunk(i=i):
            rng = _rng("engine-division", i)
            lat = _random_lattice(rng)
            f = _random_poly(rng, lat, terms=4, box=4)
            g = _random_poly(rng, lat, terms=3, box=4)
            while g.is_zero():
                g = _random_poly(rng, lat, terms=3, box=4)
            return exact_div(f * g, g) == f, "division round trip failed"
        tasks.append((f"division case={i:04d}", thunk))

    for i in range(cases):
        def thunk(i=i):
            rng = _rng("engine-json", i)
            lat = _random_lattice(rng)
            f = _random_poly(rng, lat, terms=6, box=6, coeff=10 ** 12)
            text = to_json(f)
            back = from_json(text)
            return back == f and to_json(back) == text, "serialisation drifted"
        tasks.append((f"json case={i:04d}", thunk))

    return _run_tasks(suite.name, tasks)


# --------------------------------------------------------------------------
# the shipped suite table


_RUNNERS: Dict[str, Callable[[VerificationSuite], List[CaseResult]]] = {
    "axioms": _run_axioms,
    "admissibility": _run_admissibility,
    "generators": _run_generators,
    "gl-identities": _run_gl_identities,
    "roundtrip": _run_roundtrip,
    "groupoid": _run_groupoid,
    "a11-wall": _run_a11_wall,
    "leading-term": _run_leading_term,
    "engine": _run_engine,
}


DESK_SUITES: Tuple[VerificationSuite, ...] = (
    VerificationSuite("axioms", _desk_axiom_systems()),
    VerificationSuite("admissibility",
                      ("B(1,1)", "B(2,1)", "B(0,2)", "D(2,1)", "G(3)", "F(4)",
                       "D(2,1;1/2)", "D(2,1;irrational)"),
                      {"bound": 5}),
    VerificationSuite("generators",
                      ("gl(1,1)", "gl(2,1)", "gl(1,2)", "gl(2,2)", "sl(2,1)",
                       "psl(3,3)", "C(2)", "C(3)", "B(1,1)", "B(2,1)",
                       "B(0,2)", "D(2,1)", "G(3)", "F(4)", "D(2,1;1/2)",
                       "D(2,1;irrational)", "A(1,1)"),
                      {"k_max": 8, "height": 3}),
    VerificationSuite("gl-identities",
                      ("gl(1,1)", "gl(2,1)", "gl(2,2)"),
                      {"k_max": 6, "entry": 3}),
    VerificationSuite("roundtrip",
                      ("gl(2,1)", "gl(2,2)", "sl(2,1)", "C(2)", "G(3)",
                       "F(4)", "D(2,1;1/2)", "D(2,1;irrational)", "A(1,1)"),
                      {"cases": 100, "degree": 6}),
    VerificationSuite("groupoid",
                      ("gl(1,1)", "gl(2,1)", "gl(2,2)", "sl(2,1)", "psl(3,3)",
                       "C(2)", "B(1,1)", "B(2,1)", "B(0,2)", "D(2,1)", "G(3)",
                       "F(4)", "D(2,1;1/2)", "D(2,1;irrational)"),
                      {"cases": 200, "k_max": 6}),
    VerificationSuite("a11-wall", ("A(1,1)",), {"cases": 100}),
    VerificationSuite("leading-term",
                      ("B(1,1)", "D(2,1)", "G(3)"), {"k_max": 6}),
    VerificationSuite("engine", (), {"cases": 1000}),
)


def suite_names() -> Tuple[str, ...]:
    return tuple(s.name for s in DESK_SUITES)


def desk_suite(name: str) -> VerificationSuite:
    for s in DESK_SUITES:
        if s.name == name:
            return s
    raise KeyError(f"unknown suite {name!r}; shipped: {', '.join(suite_names())}")


def run_suite(suite: VerificationSuite) -> List[CaseResult]:
    runner = _RUNNERS.get(suite.name)
    if runner is None:
        raise KeyError(
            f"unknown suite {suite.name!r}; shipped: {', '.join(suite_names())}")
    return runner(suite)


def run_named(name: str, systems: Optional[Sequence[str]] = None,
              **bound_overrides: int) -> List[CaseResult]:
    suite = desk_suite(name)
    if systems:
        suite = replace(suite, systems=tuple(systems))
    if bound_overrides:
        merged = dict(suite.bounds)
        merged.update({k: v for k, v in bound_overrides.items()
                       if v is not None})
        suite = replace(suite, bounds=merged)
    return run_suite(suite)


def summary(results: Sequence[CaseResult]) -> str:
    total = len(results)
    failed = sum(1 for r in results if not r.ok)
    return f"{total} cases, {failed} failed"
