"""Combinatorial model of a simple normal crossing resolution configuration.

A configuration records, for each irreducible component E_i of the total
transform of the zero locus under a log resolution h: Y -> X:

* ``mult``  m_i,  the order of vanishing of f along E_i,
* ``disc``  nu_i, one plus the order of the relative canonical divisor,
* whether the component is h-exceptional,
* whether h(E_i) lies inside the chosen center Sigma,
* in the curve case (ambient dimension 2): the genus and, for exceptional
  components, the self-intersection number,

together with the intersection cells of the configuration (pairs of
components in the curve case, with the number of intersection points).
This is all the data the downstream page assembly needs; no actual
geometry is stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import DomainError, UnsupportedDimensionError, ValidationFailedError


@dataclass(frozen=True)
class Divisor:
    """One irreducible component of the resolved zero locus.

    ``cover_betti``/``cover_torsion`` and ``euler_open`` carry user supplied
    topological data for components whose open stratum is not determined by
    the dual graph (genus > 0 or ambient dimension >= 3).
    """

    id: int
    label: str
    mult: int
    disc: int
    exceptional: bool = True
    over_sigma: bool = True
    genus: int | None = None
    self_int: int | None = None
    euler_open: int | None = None
    cover_betti: tuple[int, ...] | None = None
    cover_torsion: tuple[tuple[int, ...], ...] | None = None

    def to_json_dict(self) -> dict:
        data = {
            "id": self.id,
            "label": self.label,
            "mult": self.mult,
            "disc": self.disc,
            "exceptional": self.exceptional,
            "over_sigma": self.over_sigma,
        }
        for key in ("genus", "self_int", "euler_open"):
            value = getattr(self, key)
            if value is not None:
                data[key] = value
        if self.cover_betti is not None:
            data["cover_betti"] = list(self.cover_betti)
        if self.cover_torsion is not None:
            data["cover_torsion"] = [list(t) for t in self.cover_torsion]
        return data

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Divisor":
        return cls(
            id=int(data["id"]),
            label=str(data["label"]),
            mult=int(data["mult"]),
            disc=int(data["disc"]),
            exceptional=bool(data.get("exceptional", True)),
            over_sigma=bool(data.get("over_sigma", True)),
            genus=None if data.get("genus") is None else int(data["genus"]),
            self_int=None if data.get("self_int") is None else int(data["self_int"]),
            euler_open=None if data.get("euler_open") is None else int(data["euler_open"]),
            cover_betti=None if data.get("cover_betti") is None else tuple(int(b) for b in data["cover_betti"]),
            cover_torsion=None
            if data.get("cover_torsion") is None
            else tuple(tuple(int(t) for t in row) for row in data["cover_torsion"]),
        )


@dataclass(frozen=True)
class IntersectionCell:
    """A connected component of an intersection of distinct divisors.

    In the curve case ``ids`` is a pair and ``count`` is the number of
    (transverse) intersection points it stands for.
    """

    ids: tuple[int, ...]
    count: int = 1
    over_sigma: bool = True

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(sorted(self.ids)))

    def to_json_dict(self) -> dict:
        return {"ids": list(self.ids), "count": self.count, "over_sigma": self.over_sigma}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "IntersectionCell":
        return cls(
            ids=tuple(int(i) for i in data["ids"]),
            count=int(data.get("count", 1)),
            over_sigma=bool(data.get("over_sigma", True)),
        )


@dataclass(frozen=True)
class SncConfiguration:
    """A resolution configuration over a center Sigma."""

    ambient_dim: int
    divisors: tuple[Divisor, ...]
    cells: tuple[IntersectionCell, ...] = ()
    sigma_label: str = "origin"

    def __post_init__(self):
        object.__setattr__(self, "divisors", tuple(sorted(self.divisors, key=lambda d: d.id)))
        object.__setattr__(self, "cells", tuple(self.cells))

    def divisor(self, i: int) -> Divisor:
        for div in self.divisors:
            if div.id == i:
                return div
        raise DomainError(f"no divisor with id {i}")

    def has_divisor(self, i: int) -> bool:
        return any(d.id == i for d in self.divisors)

    def cells_containing(self, i: int) -> tuple[IntersectionCell, ...]:
        return tuple(c for c in self.cells if i in c.ids)

    def puncture_count(self, i: int) -> int:
        """Number of points removed from E_i by the other components."""
        return sum(c.count for c in self.cells_containing(i))

    def adjacent_multiplicities(self, i: int) -> tuple[int, ...]:
        """Multiplicities m_j of components met by E_i, one per cell partner."""
        mults = []
        for cell in self.cells_containing(i):
            for j in cell.ids:
                if j != i:
                    mults.append(self.divisor(j).mult)
        return tuple(sorted(mults))

    def exceptional_ids(self) -> tuple[int, ...]:
        return tuple(d.id for d in self.divisors if d.exceptional)

    def over_sigma_ids(self) -> tuple[int, ...]:
        return tuple(d.id for d in self.divisors if d.over_sigma)

    def to_json_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "sigma": self.sigma_label,
            "divisors": [d.to_json_dict() for d in self.divisors],
            "cells": [c.to_json_dict() for c in self.cells],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "SncConfiguration":
        return cls(
            ambient_dim=int(data["ambient_dim"]),
            divisors=tuple(Divisor.from_json_dict(d) for d in data["divisors"]),
            cells=tuple(IntersectionCell.from_json_dict(c) for c in data.get("cells", ())),
            sigma_label=str(data.get("sigma", "origin")),
        )


@dataclass(frozen=True)
class OneCell:
    """An edge of the dual complex with its total multiplicity m_sigma."""

    ids: tuple[int, int]
    pair_mult: int
    count: int
    over_sigma: bool


@dataclass(frozen=True)
class DualComplex:
    vertices: tuple[tuple[int, int], ...]  # (divisor id, multiplicity)
    one_cells: tuple[OneCell, ...]


@dataclass(frozen=True)
class ValidationIssue:
    subject: str  # "divisor" | "cell" | "configuration"
    subject_id: int | None
    message: str

    def __str__(self):
        where = f"{self.subject} {self.subject_id}" if self.subject_id is not None else self.subject
        return f"{where}: {self.message}"


def validate_configuration(cfg: SncConfiguration) -> list[ValidationIssue]:
    """Check every structural invariant; an empty report means valid.

    Violations are returned as data rather than raised, so that partially
    built configurations can be inspected.
    """
    issues: list[ValidationIssue] = []
    d = cfg.ambient_dim
    if d < 1:
        issues.append(ValidationIssue("configuration", None, "ambient_dim must be >= 1"))

    seen_ids = set()
    for div in cfg.divisors:
        if div.id in seen_ids:
            issues.append(ValidationIssue("divisor", div.id, "duplicate id"))
        seen_ids.add(div.id)
        if div.mult < 1:
            issues.append(ValidationIssue("divisor", div.id, "mult >= 1 required"))
        if div.disc < 1:
            issues.append(ValidationIssue("divisor", div.id, "disc >= 1 required"))
        if not div.exceptional and div.disc != 1:
            issues.append(ValidationIssue("divisor", div.id, "non-exceptional divisors must have disc = 1"))
        if d == 2:
            if div.genus is None:
                issues.append(ValidationIssue("divisor", div.id, "genus required in the curve case"))
            elif div.genus < 0:
                issues.append(ValidationIssue("divisor", div.id, "genus must be nonnegative"))
            if div.exceptional:
                if div.self_int is None:
                    issues.append(ValidationIssue("divisor", div.id, "exceptional curves need a self-intersection"))
                elif div.self_int >= 0:
                    issues.append(
                        ValidationIssue("divisor", div.id, "exceptional curves over a point have self_int < 0")
                    )
        if div.cover_betti is not None:
            if not div.cover_betti or any(b < 0 for b in div.cover_betti):
                issues.append(ValidationIssue("divisor", div.id, "cover_betti must be nonempty and nonnegative"))

    if not any(div.over_sigma for div in cfg.divisors):
        issues.append(ValidationIssue("configuration", None, "no divisor lies over the center (Sigma empty)"))

    if d == 1 and cfg.cells:
        issues.append(ValidationIssue("configuration", None, "point configurations (d = 1) have no cells"))

    for idx, cell in enumerate(cfg.cells):
        if len(cell.ids) < 2 or len(set(cell.ids)) != len(cell.ids):
            issues.append(ValidationIssue("cell", idx, "cell needs >= 2 distinct divisor ids"))
        if d == 2 and len(cell.ids) != 2:
            issues.append(ValidationIssue("cell", idx, "curve-case cells are pairs"))
        if cell.count < 1:
            issues.append(ValidationIssue("cell", idx, "count must be positive"))
        for i in cell.ids:
            if i not in seen_ids:
                issues.append(ValidationIssue("cell", idx, f"unknown divisor id {i}"))
    return issues


def require_valid(cfg: SncConfiguration) -> None:
    issues = validate_configuration(cfg)
    if issues:
        raise ValidationFailedError(issues)


def build_dual_complex(cfg: SncConfiguration) -> DualComplex:
    """Vertices with multiplicities, plus one 1-cell per intersection cell.

    For cells of more than two divisors (d >= 3) every pair inside the cell
    contributes a 1-cell; the pair multiplicity is always m_i + m_j.
    """
    require_valid(cfg)
    vertices = tuple((d.id, d.mult) for d in cfg.divisors)
    one_cells = []
    for cell in cfg.cells:
        ids = sorted(cell.ids)
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                i, j = ids[a], ids[b]
                pair_mult = cfg.divisor(i).mult + cfg.divisor(j).mult
                one_cells.append(OneCell((i, j), pair_mult, cell.count, cell.over_sigma))
    return DualComplex(vertices, tuple(one_cells))


def euler_open_stratum(cfg: SncConfiguration, i: int) -> int:
    """Euler characteristic of E_i minus all the other components.

    d = 1: a point, chi = 1.  d = 2: a genus-g curve with one puncture per
    intersection point, chi = (2 - 2g) - punctures.  d >= 3: the value must
    be supplied on the divisor (``euler_open``).
    """
    div = cfg.divisor(i)
    d = cfg.ambient_dim
    if d == 1:
        return 1
    if d == 2:
        if div.genus is None:
            raise DomainError(f"divisor {i} has no genus")
        return (2 - 2 * div.genus) - cfg.puncture_count(i)
    if div.euler_open is None:
        raise UnsupportedDimensionError(
            f"chi of the open stratum of divisor {i} must be supplied for ambient_dim >= 3"
        )
    return div.euler_open
