"""Embedded resolution of plane curve germs by iterated point blowups.

Input is a polynomial f in Q[x,y] vanishing at the origin; the output is
the combinatorial configuration of the total transform over the origin:
exceptional curves with exact (m_i, nu_i, self-intersection) data, strict
transform components, and the dual graph edges.  The center Sigma is the
origin throughout, so the configuration describes the germ of f at 0;
intersections of components of f away from the origin are out of scope.

The state of the resolution is a worklist of local problems.  A local
problem is the germ of the current total transform at one point, given by

* up to two exceptional divisors through the point, normalized to the
  coordinate axes {u = 0} and {v = 0} of a local chart, and
* for each Q-irreducible factor of f through the point, its strict
  transform polynomial in the chart coordinates.

Blowing up the origin of a chart (u, v) produces two standard charts:

* chart I,  (u, v) = (s, s t):  the new divisor is {s = 0}; the old v-axis
  survives as {t = 0}; the old u-axis is not visible.
* chart II, (u, v) = (p q, q):  the new divisor is {q = 0}; the old u-axis
  survives as {p = 0}; the old v-axis is not visible.

Points of the new divisor needing further work are read off from the
roots of the strict transforms restricted to {s = 0}; the root at t = 0
and the chart II origin host the old axes.  Rational roots become child
problems; a Q-irreducible root cluster of degree e that is a simple,
unshared intersection is already simple normal crossing and is recorded
as a cell of count e.  Singular or shared clusters would need blowups at
non-rational centers, which this builder refuses (the exact arithmetic
stays in Q); inputs for the shipped suites keep all centers rational.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import sympy

from .errors import DomainError, ResourceLimitError
from .model import Divisor, IntersectionCell, SncConfiguration
from .polys import SparsePolynomial, parse_polynomial

# A plane curve germ is just a 2-variable sparse polynomial with no
# constant term; ``as_plane_curve`` validates this.
PlaneCurvePoly = SparsePolynomial

Poly2 = dict  # {(a, b): Fraction}, internal mutable representation


def as_plane_curve(f: SparsePolynomial | str) -> SparsePolynomial:
    if isinstance(f, str):
        poly, names = parse_polynomial(f, variables=("x", "y"))
        f = poly
    if f.nvars != 2:
        raise DomainError("plane curve germs live in two variables")
    if f.is_zero():
        raise DomainError("the zero polynomial does not define a curve")
    if f.constant_term():
        raise DomainError("the germ must vanish at the origin")
    return f


# ---------------------------------------------------------------------------
# dict-level polynomial transforms

def _mult0(g: Poly2) -> int:
    return min(a + b for (a, b) in g)


def _chart1(g: Poly2, mu: int) -> Poly2:
    # g(s, s t) / s^mu ; the exponent map (a, b) -> (a + b - mu, b) is injective
    return {(a + b - mu, b): c for (a, b), c in g.items()}


def _chart2(g: Poly2, mu: int) -> Poly2:
    # g(p q, q) / q^mu
    return {(a, a + b - mu): c for (a, b), c in g.items()}


def _restrict_u0(g: Poly2) -> dict[int, Fraction]:
    return {b: c for (a, b), c in g.items() if a == 0}


def _translate_v(g: Poly2, tau: Fraction) -> Poly2:
    # g(u, v + tau)
    if not tau:
        return dict(g)
    out: Poly2 = {}
    for (a, b), c in g.items():
        # (v + tau)^b expanded binomially
        for k in range(b, -1, -1):
            coeff = c * math.comb(b, k) * tau ** (b - k)
            if coeff:
                key = (a, k)
                out[key] = out.get(key, Fraction(0)) + coeff
    return {k: c for k, c in out.items() if c}


def _linear_part(g: Poly2) -> tuple[Fraction, Fraction]:
    return g.get((1, 0), Fraction(0)), g.get((0, 1), Fraction(0))


def _vanishes_at_origin(g: Poly2) -> bool:
    return not g.get((0, 0))


_T = sympy.Symbol("t")


def _uni_factorization(u: dict[int, Fraction]) -> list[tuple[tuple[Fraction, ...], int]]:
    """Q-irreducible factors of a univariate polynomial given as {deg: coeff}.

    Returns (monic coefficient tuple, exponent) pairs, constant factors
    dropped, sorted deterministically by (degree, coefficients).
    """
    expr = sum(sympy.Rational(c) * _T ** d for d, c in u.items())
    if expr == 0:
        raise DomainError("strict transform restricts to zero on the new divisor")
    _, factors = sympy.factor_list(sympy.Poly(expr, _T, domain="QQ"))
    out = []
    for poly, exp in factors:
        coeffs = poly.all_coeffs()  # highest degree first
        lead = Fraction(str(coeffs[0]))
        monic = tuple(Fraction(str(c)) / lead for c in reversed(coeffs))  # low to high
        if len(monic) > 1:
            out.append((monic, int(exp)))
    return sorted(out, key=lambda fe: (len(fe[0]), fe[0]))


# ---------------------------------------------------------------------------
# resolution state

@dataclass
class _ExcDivisor:
    index: int  # creation order
    mult: int
    disc: int
    self_int: int


@dataclass(frozen=True)
class LocalProblem:
    """Germ of the total transform at one point over the origin."""

    axes: tuple[tuple[str, int], ...]  # ("u"|"v", exceptional index), sorted
    stricts: tuple[tuple[int, tuple], ...]  # (factor index, poly as sorted term tuple)
    site: str  # human readable position, for the log

    @classmethod
    def make(cls, axes: Mapping[str, int], stricts: Mapping[int, Poly2], site: str) -> "LocalProblem":
        packed = tuple(
            (j, tuple(sorted(g.items())))
            for j, g in sorted(stricts.items())
            if _vanishes_at_origin(g)
        )
        return cls(tuple(sorted(axes.items())), packed, site)

    def strict_polys(self) -> dict[int, Poly2]:
        return {j: dict(terms) for j, terms in self.stricts}


@dataclass(frozen=True)
class BlowupRecord:
    new_index: int
    site: str
    axis_indices: tuple[int, ...]
    strict_mults: tuple[tuple[int, int], ...]  # (factor index, local multiplicity)
    mult: int
    disc: int


@dataclass(frozen=True)
class ResolutionLog:
    factors: tuple[tuple[int, str, int], ...]  # (factor index, text, exponent in f)
    dropped_factors: tuple[str, ...]  # factors of f not through the origin
    blowups: tuple[BlowupRecord, ...]
    notes: tuple[str, ...] = ()


class ResolutionState:
    """Mutable worklist state of a resolution in progress."""

    def __init__(self, factor_exponents: dict[int, int]):
        self.factor_exponents = dict(factor_exponents)
        self.exceptional: list[_ExcDivisor] = []
        self.cells: dict[tuple, int] = {}  # key: sorted pair of handles
        self.records: list[BlowupRecord] = []
        self.worklist: deque[LocalProblem] = deque()

    # handles: ("E", index) for exceptional, ("D", factor index) for stricts
    def _record_cell(self, ha, hb):
        key = tuple(sorted((ha, hb)))
        self.cells[key] = self.cells.get(key, 0) + 1

    def _record_cluster_cell(self, ha, hb, count):
        key = tuple(sorted((ha, hb)))
        self.cells[key] = self.cells.get(key, 0) + count


def is_snc_problem(problem: LocalProblem) -> bool:
    """Simple normal crossing test for the germ at the problem's point."""
    stricts = problem.strict_polys()
    mults = {j: _mult0(g) for j, g in stricts.items()}
    if any(mu >= 2 for mu in mults.values()):
        return False
    curves = len(problem.axes) + len(stricts)
    if curves > 2:
        return False
    if curves < 2:
        return True
    # exactly two smooth curves: check transversality
    axes = dict(problem.axes)
    if len(axes) == 2:
        return True
    polys = list(stricts.values())
    if len(axes) == 1:
        (axis, _), = axes.items()
        cu, cv = _linear_part(polys[0])
        # tangent to {u = 0} iff the v-coefficient vanishes, and dually
        return cv != 0 if axis == "u" else cu != 0
    (au, av), (bu, bv) = _linear_part(polys[0]), _linear_part(polys[1])
    return au * bv - av * bu != 0


def blowup_numeric_rules(axis_data: list[tuple[int, int]], weighted_strict_mult: int) -> tuple[int, int]:
    """Additivity rules for a point blowup.

    For a center lying on exceptional divisors with data (m_i, nu_i) and on
    the strict transform with total multiplicity mu (weighted by component
    multiplicities in f):

        m_new  = mu + sum m_i
        nu_new = 2 + sum (nu_i - 1)
    """
    m_new = weighted_strict_mult + sum(m for m, _ in axis_data)
    nu_new = 2 + sum(nu - 1 for _, nu in axis_data)
    return m_new, nu_new


def blowup_step(state: ResolutionState, problem: LocalProblem) -> int:
    """Blow up the point of ``problem``; returns the new divisor's index.

    Updates multiplicities, discrepancies and self-intersections, records
    the blowup, and enqueues one child problem per special point of the
    new divisor (or a terminal cluster cell where nothing further is
    needed).
    """
    axes = dict(problem.axes)
    stricts = problem.strict_polys()
    if not axes and not stricts:
        raise DomainError("blowup center does not lie on the total transform")
    mults = {j: _mult0(g) for j, g in stricts.items()}

    axis_divs = [state.exceptional[idx] for _, idx in sorted(axes.items())]
    weighted = sum(state.factor_exponents[j] * mu for j, mu in mults.items())
    m_new, nu_new = blowup_numeric_rules([(d.mult, d.disc) for d in axis_divs], weighted)

    new_index = len(state.exceptional)
    state.exceptional.append(_ExcDivisor(new_index, m_new, nu_new, -1))
    for d in axis_divs:
        d.self_int -= 1
    state.records.append(
        BlowupRecord(
            new_index,
            problem.site,
            tuple(idx for _, idx in sorted(axes.items())),
            tuple(sorted(mults.items())),
            m_new,
            nu_new,
        )
    )

    # chart I: new divisor {s = 0}, old v-axis at t = 0
    chart1 = {j: _chart1(g, mults[j]) for j, g in stricts.items()}
    restricted = {j: _restrict_u0(g) for j, g in chart1.items()}
    root_keys: dict[tuple[Fraction, ...], dict[int, int]] = {}
    for j, rest in restricted.items():
        for monic, exp in _uni_factorization(rest):
            root_keys.setdefault(monic, {})[j] = exp
    t_key = (Fraction(0), Fraction(1))  # the polynomial t
    if "v" in axes:
        root_keys.setdefault(t_key, {})

    for monic in sorted(root_keys, key=lambda mk: (len(mk), mk)):
        participants = root_keys[monic]
        degree = len(monic) - 1
        if degree == 1:
            tau = -monic[0]
            child_axes = {"u": new_index}
            if tau == 0 and "v" in axes:
                child_axes["v"] = axes["v"]
            child_stricts = {j: _translate_v(chart1[j], tau) for j in participants}
            state.worklist.append(
                LocalProblem.make(child_axes, child_stricts, f"E{new_index + 1} chart at t={tau}")
            )
            continue
        # irreducible cluster of conjugate points
        simple = len(participants) == 1 and next(iter(participants.values())) == 1
        if simple:
            (j,) = participants
            state._record_cluster_cell(("E", new_index), ("D", j), degree)
        else:
            raise DomainError(
                "resolution needs a blowup at a non-rational point cluster "
                f"(degree {degree}); only rational centers are supported"
            )

    # chart II: new divisor {q = 0}, old u-axis at p = 0
    chart2 = {j: _chart2(g, mults[j]) for j, g in stricts.items()}
    through = {j: g for j, g in chart2.items() if _vanishes_at_origin(g)}
    if "u" in axes or through:
        child_axes = {"v": new_index}
        if "u" in axes:
            child_axes["u"] = axes["u"]
        state.worklist.append(
            LocalProblem.make(child_axes, through, f"E{new_index + 1} chart at infinity")
        )
    return new_index


def _terminal_cells(state: ResolutionState, problem: LocalProblem) -> None:
    handles = [("E", idx) for _, idx in problem.axes]
    handles += [("D", j) for j, _ in problem.stricts]
    if len(handles) == 2:
        state._record_cell(handles[0], handles[1])


def resolve_plane_curve(
    f: SparsePolynomial | str,
    *,
    ensure_sigma_divisor: bool = True,
    max_blowups: int = 64,
) -> tuple[SncConfiguration, ResolutionLog]:
    """Resolve the germ of f at the origin to a simple normal crossing
    configuration over Sigma = {0}.

    With ``ensure_sigma_divisor`` (the default) at least one blowup is
    performed even if the germ is already simple normal crossing, so that
    the fiber over the origin is a divisor and the configuration is usable
    for contact locus computations.  Passing ``False`` returns the minimal
    configuration, which for a smooth reduced germ is the strict transform
    alone (and then carries no divisor over Sigma).
    """
    f = as_plane_curve(f)

    x, y = sympy.symbols("x y")
    expr = sum(sympy.Rational(c) * x ** a * y ** b for (a, b), c in f.terms)
    _, sym_factors = sympy.factor_list(sympy.Poly(expr, x, y, domain="QQ"))

    factor_polys: dict[int, Poly2] = {}
    factor_exponents: dict[int, int] = {}
    factor_texts: list[tuple[int, str, int]] = []
    dropped: list[str] = []
    for poly, exp in sorted(sym_factors, key=lambda fe: sympy.default_sort_key(fe[0])):
        terms = {}
        for monom, coeff in poly.as_expr().as_poly(x, y, domain="QQ").terms():
            terms[tuple(monom)] = Fraction(str(coeff))
        text = SparsePolynomial.from_terms(2, terms).render(("x", "y"))
        if terms.get((0, 0)):
            dropped.append(text)
            continue
        j = len(factor_polys)
        factor_polys[j] = terms
        factor_exponents[j] = int(exp)
        factor_texts.append((j, text, int(exp)))

    state = ResolutionState(factor_exponents)
    origin = LocalProblem.make({}, factor_polys, "origin")
    notes: list[str] = []

    if is_snc_problem(origin) and not ensure_sigma_divisor:
        _terminal_cells(state, origin)
        notes.append("germ already simple normal crossing; no blowup performed")
    else:
        state.worklist.append(origin)
        blowups = 0
        while state.worklist:
            problem = state.worklist.popleft()
            force = blowups == 0 and ensure_sigma_divisor
            if is_snc_problem(problem) and not force:
                _terminal_cells(state, problem)
                continue
            if blowups >= max_blowups:
                raise ResourceLimitError(f"resolution did not terminate within {max_blowups} blowups")
            blowup_step(state, problem)
            blowups += 1

    # assemble the configuration: exceptional divisors first, strict factors after
    n_exc = len(state.exceptional)
    divisors = [
        Divisor(
            id=d.index,
            label=f"E{d.index + 1}",
            mult=d.mult,
            disc=d.disc,
            exceptional=True,
            over_sigma=True,
            genus=0,
            self_int=d.self_int,
        )
        for d in state.exceptional
    ]
    strict_ids = {}
    for j, text, exp in factor_texts:
        strict_ids[j] = n_exc + j
        divisors.append(
            Divisor(
                id=n_exc + j,
                label=f"D{j + 1}",
                mult=exp,
                disc=1,
                exceptional=False,
                over_sigma=False,
                genus=0,
                self_int=None,
            )
        )

    def _resolve_handle(handle):
        kind, idx = handle
        return idx if kind == "E" else strict_ids[idx]

    cells = tuple(
        IntersectionCell(
            ids=(_resolve_handle(ha), _resolve_handle(hb)),
            count=count,
            over_sigma=True,
        )
        for (ha, hb), count in sorted(state.cells.items())
    )

    cfg = SncConfiguration(ambient_dim=2, divisors=tuple(divisors), cells=cells)
    log = ResolutionLog(
        factors=tuple(factor_texts),
        dropped_factors=tuple(dropped),
        blowups=tuple(state.records),
        notes=tuple(notes),
    )
    return cfg, log


def point_configuration(r: int, label: str = "origin") -> SncConfiguration:
    """The d = 1 configuration of f = x^r under the identity resolution.

    The zero locus is the origin with multiplicity r; it is a divisor of
    the ambient line lying inside Sigma, non-exceptional with nu = 1.
    """
    if r < 1:
        raise DomainError("need a positive vanishing order")
    div = Divisor(id=0, label=label, mult=r, disc=1, exceptional=False, over_sigma=True)
    return SncConfiguration(ambient_dim=1, divisors=(div,), cells=())


def resolve_univariate(f: SparsePolynomial | str) -> SncConfiguration:
    """Configuration of a one-variable germ: the origin with its multiplicity."""
    if isinstance(f, str):
        f, _ = parse_polynomial(f)
    if f.nvars != 1:
        raise DomainError("expected a univariate polynomial")
    if f.is_zero() or f.constant_term():
        raise DomainError("the germ must vanish at the origin (and not identically)")
    r = min(exps[0] for exps, _ in f.terms)
    return point_configuration(r)
