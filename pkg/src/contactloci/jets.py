"""Brute-force jet enumeration over small prime fields.

For a jet centered at the origin, the t^j coefficient of f(gamma) only
involves the jet coefficients of level at most j - mu + 1, where mu is
the multiplicity of f at 0.  The pruned search therefore materializes
prefixes only up to depth m - mu + 1, testing the contact condition
f(gamma) = t^m mod t^(m+1) to the maximal precision decidable after each
level:

* level 1 faces the tangent-cone equation f_mu(a) = [mu == m], solved by
  direct enumeration of F_q^d;
* at level i >= 2 the newly decidable coefficient (of t^(i + mu - 1)) is
  an affine function of the level-i coefficients whose gradient is read
  off the partial derivatives evaluated at the current prefix, so the
  extensions form an affine subspace.  This is exact in characteristic p:
  the higher Taylor contributions are Hasse-derivative terms of order
  strictly above the tested coefficient once i >= 2.

Levels beyond the materialized depth are unconstrained and contribute a
power of q.  This prunes the naive q^(d l) search down to roughly q^dim
of the locus; a naive full enumeration is kept alongside as an
independent check for tiny instances.  Counts are exact integers,
deterministic, and can be partitioned over the first coefficient level
and merged additively.
"""

from __future__ import annotations

import csv
import itertools
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, ResourceLimitError
from .polys import SparsePolynomial, parse_polynomial

LOGGER = logging.getLogger(__name__)

DEFAULT_NODE_CAP = 1_000_000_000
PROGRESS_EVERY = 10_000_000
NODE_CAP_ENV = "CONTACTLOCI_NODE_CAP"


def _node_cap(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    return int(os.environ.get(NODE_CAP_ENV, DEFAULT_NODE_CAP))


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients c_0..c_l of a power series over F_q, truncated at t^l."""

    coeffs: tuple[int, ...]
    q: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(c % self.q for c in self.coeffs))

    @property
    def level(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, q: int, level: int) -> "TruncatedSeries":
        return cls((0,) * (level + 1), q)

    def _check(self, other: "TruncatedSeries"):
        if self.q != other.q or self.level != other.level:
            raise DomainError("series must share the field and the level")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(tuple((a + b) % self.q for a, b in zip(self.coeffs, other.coeffs)), self.q)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(_ser_mul(self.coeffs, other.coeffs, self.level, self.q), self.q)

    def scale(self, c: int) -> "TruncatedSeries":
        return TruncatedSeries(tuple((c * a) % self.q for a in self.coeffs), self.q)

    def __pow__(self, e: int) -> "TruncatedSeries":
        return TruncatedSeries(_ser_pow(self.coeffs, e, self.level, self.q), self.q)

    def order(self) -> int:
        """Index of the first nonzero coefficient; level + 1 for the zero series."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return self.level + 1


def _ser_mul(a: Sequence[int], b: Sequence[int], level: int, q: int) -> tuple[int, ...]:
    out = [0] * (level + 1)
    for i, ai in enumerate(a):
        if not ai or i > level:
            continue
        top = level - i
        for j, bj in enumerate(b[: top + 1]):
            if bj:
                out[i + j] = (out[i + j] + ai * bj) % q
    return tuple(out)


def _ser_pow(a: Sequence[int], e: int, level: int, q: int) -> tuple[int, ...]:
    out = (1,) + (0,) * level
    for _ in range(e):
        out = _ser_mul(out, a, level, q)
    return tuple(out)


def _poly_mod_q(f: SparsePolynomial, q: int) -> list[tuple[int, tuple[int, ...]]]:
    terms = []
    for exps, coeff in f.terms:
        frac = Fraction(coeff)
        if frac.denominator % q == 0:
            raise DomainError(f"coefficient {coeff} has no reduction mod {q}")
        value = frac.numerator * pow(frac.denominator, -1, q) % q
        if value:
            terms.append((value, exps))
    return terms


def _eval_terms(terms, coords: Sequence[Sequence[int]], level: int, q: int) -> tuple[int, ...]:
    """f(gamma) truncated at t^level; coords are coefficient sequences c_0..c_level."""
    total = [0] * (level + 1)
    power_cache: dict[tuple[int, int], tuple[int, ...]] = {}
    one = (1,) + (0,) * level
    for value, exps in terms:
        prod = one
        for i, e in enumerate(exps):
            if not e:
                continue
            key = (i, e)
            powed = power_cache.get(key)
            if powed is None:
                powed = _ser_pow(tuple(coords[i]), e, level, q)
                power_cache[key] = powed
            prod = _ser_mul(prod, powed, level, q)
        for n, c in enumerate(prod):
            if c:
                total[n] = (total[n] + value * c) % q
    return tuple(total)


def evaluate_on_jet(
    f: SparsePolynomial | str,
    jets: Sequence[TruncatedSeries],
    level: int | None = None,
) -> TruncatedSeries:
    """Compose f with a tuple of truncated series, exactly over F_q."""
    if isinstance(f, str):
        f, _ = parse_polynomial(f)
    if len(jets) != f.nvars:
        raise DomainError(f"f has {f.nvars} variables but {len(jets)} series were given")
    if not jets:
        raise DomainError("need at least one coordinate series")
    q = jets[0].q
    lvl = jets[0].level if level is None else level
    coords = []
    for s in jets:
        if s.q != q:
            raise DomainError("series over different fields")
        coeffs = list(s.coeffs[: lvl + 1])
        coeffs += [0] * (lvl + 1 - len(coeffs))
        coords.append(coeffs)
    return TruncatedSeries(_eval_terms(_poly_mod_q(f, q), coords, lvl, q), q)


# ---------------------------------------------------------------------------
# pruned search

class _Budget:
    def __init__(self, cap: int):
        self.cap = cap
        self.nodes = 0
        self._next_report = PROGRESS_EVERY

    def spend(self, n: int):
        self.nodes += n
        if self.nodes > self.cap:
            raise ResourceLimitError(
                f"enumeration budget exceeded ({self.nodes} > {self.cap} partial nodes)"
            )
        if self.nodes >= self._next_report:
            LOGGER.info("jet enumeration: %d partial nodes", self.nodes)
            self._next_report += PROGRESS_EVERY


def _level_solutions(grad, rhs: int, q: int, d: int):
    """Solutions a in F_q^d of grad . a == rhs."""
    if all(g == 0 for g in grad):
        if rhs % q:
            return []
        return list(itertools.product(range(q), repeat=d))
    pivot = next(i for i, g in enumerate(grad) if g)
    inv = pow(grad[pivot], -1, q)
    sols = []
    for free in itertools.product(range(q), repeat=d - 1):
        a = list(free[:pivot]) + [0] + list(free[pivot:])
        acc = sum(grad[i] * a[i] for i in range(d) if i != pivot)
        a[pivot] = (rhs - acc) * inv % q
        sols.append(tuple(a))
    return sols


def _multiplicity(terms) -> int:
    return min(sum(exps) for _, exps in terms)


def _derivatives(terms, q: int, d: int):
    """Partial derivative term lists, reduced mod q."""
    out = []
    for c in range(d):
        dterms = []
        for value, exps in terms:
            if exps[c]:
                coeff = value * exps[c] % q
                if coeff:
                    lowered = exps[:c] + (exps[c] - 1,) + exps[c + 1 :]
                    dterms.append((coeff, lowered))
        out.append(dterms)
    return out


def _coords_from_prefix(prefix, upto: int, d: int):
    coords = []
    for i in range(d):
        row = [0] * (upto + 1)
        for n, c in enumerate(prefix[i], start=1):
            if n <= upto:
                row[n] = c
        coords.append(row)
    return coords


def _level1_survivors(terms, mu: int, m: int, q: int, d: int, budget) -> list:
    """Level-1 coefficient vectors satisfying the first decidable constraint,
    the tangent-cone equation f_mu(a) = [mu == m]."""
    target = 1 if mu == m else 0
    tangent = [(v, e) for v, e in terms if sum(e) == mu]
    out = []
    for a in itertools.product(range(q), repeat=d):
        budget.spend(1)
        val = 0
        for v, exps in tangent:
            term = v
            for c in range(d):
                if exps[c]:
                    term = term * pow(a[c], exps[c], q) % q
            val = (val + term) % q
        if val == target:
            out.append(tuple((a[c],) for c in range(d)))
    return out


def _extend_prefixes(terms, derivs, mu, m, q, d, budget, survivors, i_start, i_end):
    """Extend survivors through levels i_start..i_end.

    At level i >= 2 the newly decidable constraint is the coefficient of
    t^(i + mu - 1) of f(gamma), which is affine in the level-i coefficients
    with gradient coeff_(j - i) of the partials at the current prefix; all
    higher Taylor terms have order > j for i >= 2.
    """
    for i in range(i_start, i_end + 1):
        j = i + mu - 1
        target = 1 if j == m else 0
        new = []
        for prefix in survivors:
            budget.spend(1)
            coords = _coords_from_prefix(prefix, j, d)
            base = _eval_terms(terms, coords, j, q)[j]
            lin = tuple(
                _eval_terms(derivs[c], coords, j - i, q)[j - i] for c in range(d)
            )
            rhs = (target - base) % q
            for a in _level_solutions(lin, rhs, q, d):
                budget.spend(1)
                new.append(tuple(prefix[c] + (a[c],) for c in range(d)))
        survivors = new
    return survivors


def _pruned_prefixes(terms, m: int, q: int, d: int, budget, seeds=None):
    """All prefixes of length I = m - mu + 1 meeting every contact constraint.

    Levels beyond I influence no coefficient of f(gamma) up to t^m, so the
    count at jet level l is len(prefixes) * q^(d (l - I)).
    """
    mu = _multiplicity(terms)
    if m < mu:
        return [], 0
    depth = m - mu + 1
    derivs = _derivatives(terms, q, d)
    if seeds is None:
        seeds = _level1_survivors(terms, mu, m, q, d, budget)
    survivors = _extend_prefixes(terms, derivs, mu, m, q, d, budget, seeds, 2, depth)
    return survivors, depth


def _count_chunk(args) -> int:
    """Worker entry point: count completions of the given level-1 seeds."""
    terms, m, q, d, l, seeds, cap = args
    budget = _Budget(cap)
    survivors, depth = _pruned_prefixes(terms, m, q, d, budget, seeds=seeds)
    return len(survivors) * q ** (d * (l - depth))


@dataclass(frozen=True)
class CountReport:
    poly_text: str
    m: int
    level: int
    q: int
    total: int
    strata: tuple[tuple[tuple[int, ...], int], ...] = ()
    elapsed: float = 0.0
    nodes: int = 0

    def strata_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.strata)

    def to_json_dict(self) -> dict:
        return {
            "poly": self.poly_text,
            "m": self.m,
            "level": self.level,
            "q": self.q,
            "total": self.total,
            "strata": [[list(orders), count] for orders, count in self.strata],
            "elapsed": self.elapsed,
            "nodes": self.nodes,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "CountReport":
        return cls(
            poly_text=str(data["poly"]),
            m=int(data["m"]),
            level=int(data["level"]),
            q=int(data["q"]),
            total=int(data["total"]),
            strata=tuple((tuple(int(o) for o in orders), int(count)) for orders, count in data.get("strata", ())),
            elapsed=float(data.get("elapsed", 0.0)),
            nodes=int(data.get("nodes", 0)),
        )


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            return False
        p += 1
    return True


def _prepare(f, m, l, q):
    """Validated (polynomial, reduced terms); terms is None when a nonzero
    constant term makes every centered contact count vanish."""
    if isinstance(f, str):
        f, _ = parse_polynomial(f)
    if not _is_prime(q):
        raise DomainError(f"{q} is not prime")
    if m < 1:
        raise DomainError("m must be positive")
    if l < m:
        raise DomainError("jet level must be at least m")
    terms = _poly_mod_q(f, q)
    if not terms or any(sum(exps) == 0 for _, exps in terms):
        return f, None
    return f, terms


def contact_count(
    f: SparsePolynomial | str,
    m: int,
    l: int,
    q: int,
    *,
    workers: int = 1,
    node_cap: int | None = None,
) -> CountReport:
    """Exact number of level-l jets centered at 0 with f(jet) = t^m mod t^(m+1)."""
    start = time.perf_counter()
    f, terms = _prepare(f, m, l, q)
    d = f.nvars
    text = f.render()
    cap = _node_cap(node_cap)
    if terms is None or m < _multiplicity(terms):
        return CountReport(text, m, l, q, 0, (), time.perf_counter() - start, 0)

    budget = _Budget(cap)
    mu = _multiplicity(terms)
    depth = m - mu + 1
    if workers > 1 and depth >= 2:
        seeds = _level1_survivors(terms, mu, m, q, d, budget)
        chunks = [seeds[i::workers] for i in range(workers)]
        args = [(terms, m, q, d, l, chunk, cap) for chunk in chunks if chunk]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            total = sum(pool.map(_count_chunk, args))
        return CountReport(text, m, l, q, total, (), time.perf_counter() - start, budget.nodes)

    survivors, depth = _pruned_prefixes(terms, m, q, d, budget)
    total = len(survivors) * q ** (d * (l - depth))
    return CountReport(text, m, l, q, total, (), time.perf_counter() - start, budget.nodes)


def naive_contact_count(f: SparsePolynomial | str, m: int, l: int, q: int, *, cap: int = 2_000_000) -> int:
    """Full enumeration over all q^(d l) centered jets; tiny instances only."""
    f, terms = _prepare(f, m, l, q)
    if terms is None:
        return 0
    d = f.nvars
    if q ** (d * l) > cap:
        raise ResourceLimitError(f"naive enumeration of q^(d*l) = {q ** (d * l)} jets exceeds the cap")
    target = [0] * (m + 1)
    target[m] = 1
    target = tuple(target)
    count = 0
    for flat in itertools.product(range(q), repeat=d * l):
        coords = []
        for i in range(d):
            coords.append((0,) + flat[i * l : (i + 1) * l])
        if _eval_terms(terms, [c[: m + 1] + (0,) * max(0, m + 1 - len(c)) for c in coords], m, q) == target:
            count += 1
    return count


def stratified_count(
    f: SparsePolynomial | str,
    m: int,
    l: int,
    q: int,
    *,
    node_cap: int | None = None,
) -> CountReport:
    """Contact count broken down by the vanishing orders of the coordinates.

    Orders are capped at l + 1 (the zero series).  Orders realized inside
    the constrained levels come from materialized prefixes; the levels
    beyond the constrained depth contribute combinatorially, so the free
    tail is never enumerated.
    """
    start = time.perf_counter()
    f, terms = _prepare(f, m, l, q)
    d = f.nvars
    text = f.render()
    cap = _node_cap(node_cap)
    if terms is None or m < _multiplicity(terms):
        return CountReport(text, m, l, q, 0, (), time.perf_counter() - start, 0)

    budget = _Budget(cap)
    survivors, depth = _pruned_prefixes(terms, m, q, d, budget)

    free = l - depth
    strata: dict[tuple[int, ...], int] = {}
    for prefix in survivors:
        known = []
        unknown = []
        for i in range(d):
            order = next((n for n, c in enumerate(prefix[i], start=1) if c), None)
            if order is None:
                unknown.append(i)
                known.append(None)
            else:
                known.append(order)
        base_weight = q ** (free * (d - len(unknown)))
        # zero-so-far coordinates: first nonzero entry among the free levels,
        # or identically zero (order l + 1)
        choices = []
        for _i in unknown:
            opts = [(k, (q - 1) * q ** (l - k)) for k in range(depth + 1, l + 1)]
            opts.append((l + 1, 1))
            choices.append(opts)
        for combo in itertools.product(*choices):
            orders = list(known)
            weight = base_weight
            for (i, (k, w)) in zip(unknown, combo):
                orders[i] = k
                weight *= w
            key = tuple(orders)
            strata[key] = strata.get(key, 0) + weight
    total = sum(strata.values())
    packed = tuple(sorted(strata.items()))
    return CountReport(text, m, l, q, total, packed, time.perf_counter() - start, budget.nodes)


def sum_strata(
    report: CountReport,
    minimum: Sequence[int],
    exact: Sequence[bool],
) -> int:
    """Aggregate raw order strata against a pattern.

    ``minimum`` gives the componentwise least orders and ``exact`` marks
    the coordinates that must attain them exactly; the others only need
    to reach the minimum.
    """
    total = 0
    for orders, count in report.strata:
        ok = True
        for o, lo, must in zip(orders, minimum, exact):
            if o < lo or (must and o != lo):
                ok = False
                break
        if ok:
            total += count
    return total


def closed_form_power_count(r: int, m: int, q: int, l: int | None = None) -> int:
    """Contact count for f = x^r in one variable.

    The locus is mu_r x C^(m - m/r) when r | m and empty otherwise, so the
    count is gcd(r, q - 1) * q^(l - m/r) for jets of level l >= m.
    """
    if l is None:
        l = m
    if m % r:
        return 0
    return math.gcd(r, q - 1) * q ** (l - m // r)


@dataclass(frozen=True)
class ChiFit:
    """Least-degree exact polynomial fit of point counts, evaluated at q = 1."""

    chi: int | None
    degree: int | None  # degree of the fitted count polynomial in q
    q_power: int  # common power of q stripped before interpolation
    coefficients: tuple[Fraction, ...]  # of the stripped quotient, low to high
    residual_zero: bool
    conclusive: bool
    message: str

    def count_polynomial(self) -> tuple[Fraction, ...]:
        """Coefficients of the full fitted count polynomial, low to high."""
        return (Fraction(0),) * self.q_power + self.coefficients

    def render(self) -> str:
        coeffs = self.count_polynomial()
        parts = []
        for n in range(len(coeffs) - 1, -1, -1):
            c = coeffs[n]
            if not c:
                continue
            body = "" if n == 0 else ("q" if n == 1 else f"q^{n}")
            mag = "" if (abs(c) == 1 and body) else str(abs(c))
            sep = "*" if mag and body else ""
            parts.append(("-" if c < 0 else "+", f"{mag}{sep}{body}" or "0"))
        if not parts:
            return "0"
        sign, first = parts[0]
        text = ("-" if sign == "-" else "") + first
        for sign, part in parts[1:]:
            text += f" {sign} {part}"
        return text

    def to_json_dict(self) -> dict:
        return {
            "chi": self.chi,
            "degree": self.degree,
            "q_power": self.q_power,
            "coefficients": [str(c) for c in self.coefficients],
            "residual_zero": self.residual_zero,
            "conclusive": self.conclusive,
            "message": self.message,
            "fit": self.render(),
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ChiFit":
        return cls(
            chi=None if data["chi"] is None else int(data["chi"]),
            degree=None if data["degree"] is None else int(data["degree"]),
            q_power=int(data["q_power"]),
            coefficients=tuple(Fraction(c) for c in data["coefficients"]),
            residual_zero=bool(data["residual_zero"]),
            conclusive=bool(data["conclusive"]),
            message=str(data["message"]),
        )


def interpolate_chi(counts: Sequence[tuple[int, int]], expected_dim: int | None = None) -> ChiFit:
    """Fit the least-degree polynomial through exact (q, N(q)) samples.

    A common factor q^s is stripped first (counts of the fibered strata
    carry large powers of q), the quotient is interpolated exactly, and
    the fit counts as conclusive only when at least one sample point is
    redundant (the minimal interpolant is confirmed by unused data) and
    the value at q = 1 is an integer.  The Euler characteristic estimate
    is the value of the fit at q = 1.
    """
    pts = sorted(counts)
    if len(pts) < 2:
        raise DomainError("need at least two sample primes")
    if len(set(q for q, _ in pts)) != len(pts):
        raise DomainError("duplicate sample primes")
    if any(n < 0 for _, n in pts):
        raise DomainError("counts must be nonnegative")

    if all(n == 0 for _, n in pts):
        return ChiFit(0, None, 0, (), True, True, "all counts zero")

    def v_q(q, n):
        v = 0
        while n and n % q == 0:
            n //= q
            v += 1
        return v

    s = min(v_q(q, n) for q, n in pts if n)
    quotient = [(q, Fraction(n, q ** s)) for q, n in pts]

    # Newton divided differences, exact
    xs = [Fraction(q) for q, _ in quotient]
    table = [val for _, val in quotient]
    newton = [table[0]]
    for k in range(1, len(xs)):
        table = [
            (table[i + 1] - table[i]) / (xs[i + k] - xs[i])
            for i in range(len(table) - 1)
        ]
        newton.append(table[0])

    # expand to monomial coefficients
    coeffs = [Fraction(0)] * len(xs)
    basis = [Fraction(1)]  # product (x - x_0)...(x - x_{k-1}), low to high
    for k, c in enumerate(newton):
        for n, b in enumerate(basis):
            coeffs[n] += c * b
        next_basis = [Fraction(0)] * (len(basis) + 1)
        for n, b in enumerate(basis):
            next_basis[n] -= b * xs[k]
            next_basis[n + 1] += b
        basis = next_basis

    while coeffs and not coeffs[-1]:
        coeffs.pop()
    deg = len(coeffs) - 1 if coeffs else 0
    chi_frac = sum(coeffs) if coeffs else Fraction(0)  # value at q = 1
    residual_zero = deg <= len(xs) - 2
    integral = chi_frac.denominator == 1 and all(c.denominator == 1 for c in coeffs)
    conclusive = residual_zero and integral
    if conclusive:
        message = "ok"
    else:
        message = "not polynomial-count, inconclusive"
    full_degree = s + deg
    if expected_dim is not None and conclusive and full_degree != expected_dim:
        message = f"fitted degree {full_degree} differs from expected dimension {expected_dim}"
    return ChiFit(
        chi=int(chi_frac) if integral else None,
        degree=full_degree,
        q_power=s,
        coefficients=tuple(coeffs),
        residual_zero=residual_zero,
        conclusive=conclusive,
        message=message,
    )


@dataclass(frozen=True)
class FibrationReport:
    passed: bool
    m: int
    level: int
    q: int
    d: int
    nu: int
    expected_fiber: int
    fiber_histogram: tuple[tuple[int, int], ...]  # (fiber size, number of images)
    n_source: int
    n_images: int

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "m": self.m,
            "level": self.level,
            "q": self.q,
            "d": self.d,
            "nu": self.nu,
            "expected_fiber": self.expected_fiber,
            "fiber_histogram": [[size, n] for size, n in self.fiber_histogram],
            "n_source": self.n_source,
            "n_images": self.n_images,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "FibrationReport":
        return cls(
            passed=bool(data["passed"]),
            m=int(data["m"]),
            level=int(data["level"]),
            q=int(data["q"]),
            d=int(data["d"]),
            nu=int(data["nu"]),
            expected_fiber=int(data["expected_fiber"]),
            fiber_histogram=tuple((int(a), int(b)) for a, b in data["fiber_histogram"]),
            n_source=int(data["n_source"]),
            n_images=int(data["n_images"]),
        )


def verify_chart_fibration(
    m: int,
    l: int,
    q: int,
    d: int = 2,
    nu: int = 2,
    *,
    node_cap: int | None = None,
) -> FibrationReport:
    """Check the blowup-chart fibration on jets by full enumeration.

    The chart map sends (y_1, ..., y_d) to (y_d y_1, ..., y_d y_{nu-1},
    y_nu, ..., y_d).  Restricted to level-l jets whose last coordinate has
    order exactly m, every fiber over the image must be an affine space of
    dimension (nu - 1) m.
    """
    if not (2 <= nu <= d):
        raise DomainError("need 2 <= nu <= d")
    if l < m or m < 0:
        raise DomainError("need l >= m >= 0")
    if not _is_prime(q):
        raise DomainError(f"{q} is not prime")
    n_source = q ** ((d - 1) * (l + 1)) * (q - 1) * q ** (l - m)
    cap = _node_cap(node_cap)
    if n_source > cap:
        raise ResourceLimitError(f"{n_source} source jets exceed the cap {cap}")

    expected = q ** ((nu - 1) * m)
    images: dict[tuple, int] = {}
    free_levels = l - m
    nonzero = [c for c in range(1, q)]
    for others in itertools.product(range(q), repeat=(d - 1) * (l + 1)):
        ys = [others[i * (l + 1) : (i + 1) * (l + 1)] for i in range(d - 1)]
        for lead in nonzero:
            for tail in itertools.product(range(q), repeat=free_levels):
                yd = (0,) * m + (lead,) + tail
                image = []
                for i in range(nu - 1):
                    image.append(_ser_mul(yd, ys[i], l, q))
                for i in range(nu - 1, d - 1):
                    image.append(tuple(ys[i]))
                image.append(tuple(yd))
                key = tuple(image)
                images[key] = images.get(key, 0) + 1
    histogram: dict[int, int] = {}
    for size in images.values():
        histogram[size] = histogram.get(size, 0) + 1
    passed = set(histogram) == {expected} if images else False
    return FibrationReport(
        passed=passed,
        m=m,
        level=l,
        q=q,
        d=d,
        nu=nu,
        expected_fiber=expected,
        fiber_histogram=tuple(sorted(histogram.items())),
        n_source=n_source,
        n_images=len(images),
    )


def export_counts_csv(path, counts: Iterable[tuple[int, int]]) -> None:
    """Write (q, N) sample pairs for external fitting."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["q", "count"])
        for q, n in sorted(counts):
            writer.writerow([q, n])
