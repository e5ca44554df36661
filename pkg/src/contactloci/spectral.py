"""Assembly and analysis of the first page converging to H_c of contact loci.

For an m-separating configuration, the divisors contributing to the m-th
contact locus are S_m = {i : h(E_i) inside Sigma and m_i | m}, with
contact orders k_i = m / m_i.  Each contributor places the homology of
the cyclic cover of its open stratum on the page at column p = -w_i k_i:

    H_n(cover of E_i°)  sits at  p + q = 2 (d (m + 1) - k_i nu_i - 1) - n,

the even shift being twice the dimension of the corresponding smooth
stratum of the contact locus.  Differentials d_r move (p, q) to
(p + r, q - r + 1); after tensoring with Q only the pages r <= d can
carry nonzero differentials, and a differential on a later page has
finite image, so rational rank bounds only ever involve arrows with
1 <= r <= d.  A total degree touched by no arrow at all is therefore
known integrally; one touched only by arrows of length > d is known
rationally; anything else gets rank bounds with per-arrow caps
min(source rank, target rank).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .covers import CoverHomology, covers_for
from .errors import DomainError, MissingCoverDataError, NotMSeparatingError
from .model import SncConfiguration, require_valid
from .separation import first_offending_pair, is_m_separating
from .weights import WeightVector


@dataclass(frozen=True)
class ContributingSet:
    """S_m with contact orders and filtration columns."""

    m: int
    members: tuple[tuple[int, int, int], ...]  # (divisor id, k_i, column p)

    def ids(self) -> tuple[int, ...]:
        return tuple(i for i, _, _ in self.members)

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "members": [{"id": i, "k": k, "p": p} for i, k, p in self.members],
        }


@dataclass(frozen=True)
class PageEntry:
    rank: int
    torsion: tuple[int, ...] = ()
    contributors: tuple[tuple[int, int], ...] = ()  # (divisor id, homology degree)


@dataclass(frozen=True)
class E1Page:
    m: int
    ambient_dim: int
    entries: tuple[tuple[tuple[int, int], PageEntry], ...]  # ((p, q), entry), sorted
    total_shift: int = 0  # bookkeeping for relabelled pages

    def entry(self, p: int, q: int) -> PageEntry | None:
        for (pp, qq), e in self.entries:
            if (pp, qq) == (p, q):
                return e
        return None

    def nonzero(self) -> list[tuple[int, int, PageEntry]]:
        return [(p, q, e) for (p, q), e in self.entries if e.rank or e.torsion]

    def ranks_by_total_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (p, q), e in self.entries:
            out[p + q] = out.get(p + q, 0) + e.rank
        return {n: r for n, r in sorted(out.items()) if r}

    def euler_characteristic(self) -> int:
        return sum((-1) ** (p + q) * e.rank for (p, q), e in self.entries)

    def content_multiset(self) -> tuple[tuple[int, int, int], ...]:
        """Sorted multiset of (total degree, divisor id, homology degree).

        Together with the cover data this pins the page content; it is
        independent of the chosen valid weight vector, only the column
        labels move when the weights change.
        """
        items = []
        for (p, q), e in self.entries:
            for i, n in e.contributors:
                items.append((p + q, i, n))
        return tuple(sorted(items))

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "ambient_dim": self.ambient_dim,
            "total_shift": self.total_shift,
            "entries": [
                {
                    "p": p,
                    "q": q,
                    "rank": e.rank,
                    "torsion": list(e.torsion),
                    "contributors": [[i, n] for i, n in e.contributors],
                }
                for (p, q), e in self.entries
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "E1Page":
        entries = tuple(
            (
                (int(item["p"]), int(item["q"])),
                PageEntry(
                    rank=int(item["rank"]),
                    torsion=tuple(int(t) for t in item.get("torsion", ())),
                    contributors=tuple((int(i), int(n)) for i, n in item.get("contributors", ())),
                ),
            )
            for item in data["entries"]
        )
        return cls(
            m=int(data["m"]),
            ambient_dim=int(data["ambient_dim"]),
            entries=tuple(sorted(entries)),
            total_shift=int(data.get("total_shift", 0)),
        )


@dataclass(frozen=True)
class DegreeStatus:
    """What is known about H_c in one total degree."""

    degree: int
    kind: str  # "zero" | "exact" | "rational_exact" | "bounds"
    rank: int  # sum of page ranks in this degree (the upper bound)
    lo: int
    hi: int
    torsion: tuple[int, ...] = ()
    graded_only: bool = False  # exactness holds only for the associated graded

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "kind": self.kind,
            "rank": self.rank,
            "lo": self.lo,
            "hi": self.hi,
            "torsion": list(self.torsion),
            "graded_only": self.graded_only,
        }


@dataclass(frozen=True)
class HcReport:
    m: int
    ambient_dim: int
    statuses: tuple[DegreeStatus, ...]
    euler: int
    integral_forced: bool  # no arrows at all: the page is the abutment
    rational_window_forced: bool  # no arrows within the first d pages

    def status(self, degree: int) -> DegreeStatus:
        for s in self.statuses:
            if s.degree == degree:
                return s
        return DegreeStatus(degree, "zero", 0, 0, 0)

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "ambient_dim": self.ambient_dim,
            "euler": self.euler,
            "integral_forced": self.integral_forced,
            "rational_window_forced": self.rational_window_forced,
            "statuses": [s.to_json_dict() for s in self.statuses],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "HcReport":
        return cls(
            m=int(data["m"]),
            ambient_dim=int(data["ambient_dim"]),
            statuses=tuple(
                DegreeStatus(
                    degree=int(s["degree"]),
                    kind=str(s["kind"]),
                    rank=int(s["rank"]),
                    lo=int(s["lo"]),
                    hi=int(s["hi"]),
                    torsion=tuple(int(t) for t in s.get("torsion", ())),
                    graded_only=bool(s.get("graded_only", False)),
                )
                for s in data["statuses"]
            ),
            euler=int(data["euler"]),
            integral_forced=bool(data["integral_forced"]),
            rational_window_forced=bool(data["rational_window_forced"]),
        )


def contributing_set(cfg: SncConfiguration, w: WeightVector, m: int) -> ContributingSet:
    """S_m with columns; requires the configuration to be m-separating."""
    require_valid(cfg)
    if m < 1:
        raise DomainError("m must be a positive integer")
    if not is_m_separating(cfg, m):
        i, j, pm = first_offending_pair(cfg, m)
        raise NotMSeparatingError(m, (i, j), pm)
    members = []
    for d in cfg.divisors:
        if d.over_sigma and m % d.mult == 0:
            k = m // d.mult
            members.append((d.id, k, -w.get(d.id) * k))
    return ContributingSet(m=m, members=tuple(members))


def stratum_dimension(cfg: SncConfiguration, i: int, m: int, *, jet_level: int | None = None) -> int:
    """Dimension of the smooth stratum of the contact locus over E_i°.

    At jet level l the stratum has dimension d(l+1) - k_i nu_i - 1; the
    contact-level variant substitutes l = m.
    """
    d = cfg.ambient_dim
    div = cfg.divisor(i)
    if not div.over_sigma or m % div.mult:
        raise DomainError(f"divisor {i} does not contribute at m = {m}")
    k = m // div.mult
    level = m if jet_level is None else jet_level
    if level < m:
        raise DomainError("jet level must be at least m")
    return d * (level + 1) - k * div.disc - 1


def fiber_dimension(cfg: SncConfiguration, contact_orders: Mapping[int, int]) -> int:
    """Dimension of the affine fiber of the jet-space resolution map.

    For jets with prescribed contact orders k_i along the divisors, the
    fiber is an affine space of dimension sum k_i (nu_i - 1).
    """
    return sum(k * (cfg.divisor(i).disc - 1) for i, k in contact_orders.items())


def stabilization_level(cfg: SncConfiguration, m: int) -> int:
    """Least jet level at which the contact strata are pulled back.

    l_0 = max over the contributing divisors of
    max(2 k_i (nu_i - 1), k_i (nu_i - 1) + m).
    """
    levels = []
    for d in cfg.divisors:
        if d.over_sigma and m % d.mult == 0:
            k = m // d.mult
            levels.append(max(2 * k * (d.disc - 1), k * (d.disc - 1) + m))
    if not levels:
        raise DomainError(f"no divisor contributes at m = {m}")
    return max(levels)


def e1_page(
    cfg: SncConfiguration,
    w: WeightVector,
    m: int,
    covers: Mapping[int, CoverHomology] | None = None,
) -> E1Page:
    """Place the cover homology of every contributor on the page."""
    cset = contributing_set(cfg, w, m)
    if covers is None:
        covers = covers_for(cfg, cset.ids())
    missing = [i for i in cset.ids() if i not in covers]
    if missing:
        raise MissingCoverDataError(f"no cover data for divisors {missing}")
    d = cfg.ambient_dim
    cells: dict[tuple[int, int], dict] = {}
    for i, k, p in cset.members:
        cover = covers[i]
        dim = d * (m + 1) - k * cfg.divisor(i).disc - 1
        for n, b in enumerate(cover.betti):
            tors = cover.torsion_in_degree(n)
            if not b and not tors:
                continue
            total = 2 * dim - n
            q = total - p
            slot = cells.setdefault((p, q), {"rank": 0, "torsion": [], "contrib": []})
            slot["rank"] += b
            slot["torsion"].extend(tors)
            slot["contrib"].append((i, n))
    entries = tuple(
        (
            key,
            PageEntry(
                rank=slot["rank"],
                torsion=tuple(sorted(slot["torsion"])),
                contributors=tuple(sorted(slot["contrib"])),
            ),
        )
        for key, slot in sorted(cells.items())
    )
    return E1Page(m=m, ambient_dim=d, entries=entries)


def _arrows(page: E1Page, max_r: int | None) -> list[tuple[int, int, int, int, int]]:
    """Pairs of nonzero entries connected by a possible differential.

    Returns (source total degree, cap, r, p_source, p_target); a d_r arrow
    maps (p, q) to (p + r, q - r + 1), raising the total degree by one.
    """
    nonzero = {(p, q): e.rank for p, q, e in page.nonzero()}
    arrows = []
    for (p, q), rank in nonzero.items():
        for (pp, qq), rank2 in nonzero.items():
            r = pp - p
            if r >= 1 and (pp + qq) == (p + q) + 1 and qq == q - r + 1:
                if max_r is None or r <= max_r:
                    arrows.append((p + q, min(rank, rank2), r, p, pp))
    return arrows


def degeneration_analysis(page: E1Page) -> HcReport:
    """Exact values or rank bounds for the abutment, degree by degree.

    Integral exactness needs no possible differential of any page; the
    rational rank in a degree is exact once no differential of the first
    d pages touches it, because later arrows are rationally zero.  Rank
    bounds subtract per-arrow caps min(source rank, target rank) from the
    page total.
    """
    d = page.ambient_dim
    totals = page.ranks_by_total_degree()
    torsion_by_degree: dict[int, list[int]] = {}
    for (p, q), e in page.entries:
        if e.torsion:
            torsion_by_degree.setdefault(p + q, []).extend(e.torsion)

    all_arrows = _arrows(page, None)
    window_arrows = _arrows(page, d)

    statuses = []
    degrees = sorted(set(totals) | set(torsion_by_degree))
    for n in degrees:
        rank = totals.get(n, 0)
        caps_in = sum(cap for src, cap, *_ in window_arrows if src == n - 1)
        caps_out = sum(cap for src, cap, *_ in window_arrows if src == n)
        touched_any = any(src in (n - 1, n) for src, *_ in all_arrows)
        touched_window = caps_in or caps_out
        torsion = tuple(sorted(torsion_by_degree.get(n, ())))
        if touched_window:
            kind = "bounds"
            lo = max(0, rank - caps_in - caps_out)
            hi = rank
        elif touched_any:
            kind = "rational_exact"
            lo = hi = rank
        else:
            kind = "exact"
            lo = hi = rank
        statuses.append(
            DegreeStatus(
                degree=n,
                kind=kind,
                rank=rank,
                lo=lo,
                hi=hi,
                torsion=torsion,
                graded_only=bool(torsion) and kind == "exact",
            )
        )
    return HcReport(
        m=page.m,
        ambient_dim=page.ambient_dim,
        statuses=tuple(statuses),
        euler=page.euler_characteristic(),
        integral_forced=not all_arrows,
        rational_window_forced=not window_arrows,
    )


def mclean_relabel(page: E1Page, *, inverse: bool = False) -> E1Page:
    """Shift the total degree by -(2 d m + d - 1), keeping columns fixed.

    This aligns the page with the fixed-point Floer grading of the m-th
    monodromy iterate; ``inverse`` undoes the shift.
    """
    shift = 2 * page.ambient_dim * page.m + page.ambient_dim - 1
    if inverse:
        shift = -shift
    entries = tuple(((p, q - shift), e) for (p, q), e in page.entries)
    return replace(page, entries=tuple(sorted(entries)), total_shift=page.total_shift - shift)


def milnor_betti_power(p: int) -> tuple[int, ...]:
    """Betti numbers of the fiber {x^p = 1}: p parallel hyperplanes."""
    if p < 1:
        raise DomainError("need a positive exponent")
    return (p,)


def milnor_betti_homogeneous_isolated(m: int, d: int) -> tuple[int, ...]:
    """Betti numbers of the Milnor fiber of a homogeneous polynomial of
    degree m in d variables with an isolated singularity: b_0 = 1 and
    b_{d-1} = (m - 1)^d (they add up in dimension one)."""
    if m < 1 or d < 1:
        raise DomainError("need positive degree and dimension")
    betti = [0] * d
    betti[0] = 1
    betti[d - 1] += (m - 1) ** d
    return tuple(betti)


def multiplicity_case_prediction(d: int, m: int, milnor_betti: Iterable[int]) -> dict[int, int]:
    """H_c of the m-th contact locus when m is the multiplicity at the origin.

    The locus fibers over the Milnor fiber F of the initial form, giving
    H_c^* = H_{2(dm - 1) - *}(F); the prediction maps each homology degree
    n with b_n != 0 to the cohomological degree 2(dm - 1) - n.
    """
    out = {}
    for n, b in enumerate(milnor_betti):
        if b:
            out[2 * (d * m - 1) - n] = b
    return out


def rational_gap_analysis(page: E1Page) -> dict:
    """Rational ranks forced exact by scaling the weights.

    Scaling a valid weight vector multiplies all distinct column gaps, so
    a large enough scale pushes every arrow beyond the first d pages and
    the rational ranks equal the page totals.  The conclusion is
    conditional on the page bound applying to the scaled weight choice.
    """
    d = page.ambient_dim
    columns = sorted({p for p, q, e in page.nonzero()})
    gaps = [b - a for a, b in zip(columns, columns[1:])]
    min_gap = min(gaps) if gaps else None
    scale = 1 if min_gap is None else d // min_gap + 1
    return {
        "scale": scale,
        "rational_ranks": page.ranks_by_total_degree(),
        "note": (
            "conditional on the first-d-pages bound applying to the scaled "
            "weight choice"
        ),
    }


def render_page_table(page: E1Page, cfg: SncConfiguration | None = None) -> str:
    """Aligned text table, columns by ascending p and rows by ascending q."""
    nonzero = page.nonzero()
    if not nonzero:
        return "(empty page)"
    ps = sorted({p for p, _, _ in nonzero})
    qs = sorted({q for _, q, _ in nonzero})
    labels = {}
    if cfg is not None:
        labels = {d.id: d.label for d in cfg.divisors}

    def describe(e: PageEntry) -> str:
        group = f"Z^{e.rank}" if e.rank != 1 else "Z"
        if not e.rank:
            group = ""
        for t in e.torsion:
            group += ("+" if group else "") + f"Z/{t}"
        who = ",".join(
            f"{labels.get(i, 'E?' + str(i))}:H{n}" for i, n in e.contributors
        )
        return f"{group or '0'} ({who})" if who else (group or "0")

    grid = {}
    for p, q, e in nonzero:
        grid[(p, q)] = describe(e)
    col_width = {
        p: max(len(f"p={p}"), max((len(grid.get((p, q), "")) for q in qs), default=1))
        for p in ps
    }
    row_head = max(len(str(q)) for q in qs)
    lines = []
    header = " " * (row_head + 2) + "  ".join(f"p={p}".ljust(col_width[p]) for p in ps)
    lines.append(header)
    for q in qs:
        cells = "  ".join(grid.get((p, q), ".").ljust(col_width[p]) for p in ps)
        lines.append(f"q={q}".rjust(row_head + 2) + cells)
    return "\n".join(lines)
