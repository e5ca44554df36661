"""Weight vectors making -sum(w_i E_i) relatively ample (curve case).

The filtration columns of the page assembly are p = -w_i k_i, so any
weight tuple with W = -sum w_i E_i relatively ample works.  Ampleness
against every exceptional curve, i.e. strict positivity of -W . E_j for
all exceptional j, is the implementable criterion used here; it is
decided by the dual graph alone, and a suitable positive multiple of any
ample choice is very ample.  Reports produced by the CLI record this
substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import (
    DomainError,
    NotNegativeDefiniteError,
    ResourceLimitError,
    UnsupportedDimensionError,
)
from .model import SncConfiguration, require_valid

AMPLE_NOTE = (
    "weights certify relative ampleness (strict positivity against every "
    "exceptional curve); very ampleness is obtained by scaling"
)


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative integer weights, zero on non-exceptional divisors."""

    entries: tuple[tuple[int, int], ...]

    @classmethod
    def from_dict(cls, data: Mapping[int, int]) -> "WeightVector":
        return cls(tuple(sorted((int(i), int(w)) for i, w in data.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def get(self, i: int) -> int:
        for j, w in self.entries:
            if j == i:
                return w
        raise DomainError(f"no weight for divisor {i}")

    def scaled(self, c: int) -> "WeightVector":
        if c < 1:
            raise DomainError("scale factor must be a positive integer")
        return WeightVector(tuple((i, c * w) for i, w in self.entries))

    def to_json_dict(self) -> dict:
        return {str(i): w for i, w in self.entries}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "WeightVector":
        return cls.from_dict({int(i): int(w) for i, w in data.items()})


def intersection_matrix(cfg: SncConfiguration) -> list[list[int | None]]:
    """Symmetric intersection matrix over all divisors, indexed by id order.

    Diagonal entries are the self-intersections of exceptional divisors;
    non-exceptional diagonal entries are unknown and left as None (those
    rows enter the ampleness constraints only off-diagonally).  Off
    diagonal entries are the numbers of intersection points.
    """
    require_valid(cfg)
    if cfg.ambient_dim != 2:
        raise UnsupportedDimensionError("intersection matrices are a curve-case notion here")
    ids = [d.id for d in cfg.divisors]
    pos = {i: n for n, i in enumerate(ids)}
    size = len(ids)
    matrix: list[list[int | None]] = [[0] * size for _ in range(size)]
    for d in cfg.divisors:
        matrix[pos[d.id]][pos[d.id]] = d.self_int if d.exceptional else None
    for cell in cfg.cells:
        i, j = cell.ids
        matrix[pos[i]][pos[j]] += cell.count  # type: ignore[operator]
        matrix[pos[j]][pos[i]] += cell.count  # type: ignore[operator]
    return matrix


def _exceptional_submatrix(cfg: SncConfiguration) -> tuple[list[int], list[list[int]]]:
    matrix = intersection_matrix(cfg)
    ids = [d.id for d in cfg.divisors]
    keep = [n for n, d in enumerate(cfg.divisors) if d.exceptional]
    sub = [[int(matrix[a][b]) for b in keep] for a in keep]
    return [ids[n] for n in keep], sub


def _leading_minors(matrix: list[list[int]]) -> list[Fraction]:
    """Determinants of the leading principal minors, by exact elimination."""
    minors = []
    n = len(matrix)
    for k in range(n):
        # restart elimination per minor for clarity; the matrices are tiny
        block = [[Fraction(matrix[a][b]) for b in range(k + 1)] for a in range(k + 1)]
        det = Fraction(1)
        for col in range(k + 1):
            pivot_row = next((r for r in range(col, k + 1) if block[r][col]), None)
            if pivot_row is None:
                det = Fraction(0)
                break
            if pivot_row != col:
                block[col], block[pivot_row] = block[pivot_row], block[col]
                det = -det
            det *= block[col][col]
            for r in range(col + 1, k + 1):
                factor = block[r][col] / block[col][col]
                if factor:
                    block[r] = [x - factor * y for x, y in zip(block[r], block[col])]
        minors.append(det)
    return minors


def is_negative_definite(matrix: list[list[int]]) -> bool:
    """Sylvester's criterion: (-1)^k det_k > 0 for every leading minor."""
    for k, det in enumerate(_leading_minors(matrix), start=1):
        if (-1) ** k * det <= 0:
            return False
    return True


def ample_deficits(cfg: SncConfiguration, w: WeightVector) -> dict[int, int]:
    """For each exceptional j, the pairing -sum_i w_i (E_i . E_j).

    All values must be strictly positive for w to be ample.
    """
    matrix = intersection_matrix(cfg)
    ids = [d.id for d in cfg.divisors]
    pos = {i: n for n, i in enumerate(ids)}
    out = {}
    for d in cfg.divisors:
        if not d.exceptional:
            continue
        total = 0
        for e in cfg.divisors:
            entry = matrix[pos[e.id]][pos[d.id]]
            if entry is None:
                continue
            total += w.get(e.id) * entry
        out[d.id] = -total
    return out


def validate_weights(cfg: SncConfiguration, w: WeightVector) -> bool:
    """Nonnegative, zero on non-exceptional divisors, and (curve case)
    strictly positive against every exceptional curve."""
    try:
        values = {d.id: w.get(d.id) for d in cfg.divisors}
    except DomainError:
        return False
    if any(v < 0 for v in values.values()):
        return False
    if any(values[d.id] != 0 for d in cfg.divisors if not d.exceptional):
        return False
    if cfg.ambient_dim != 2:
        return True
    if not cfg.exceptional_ids():
        return True
    return all(v > 0 for v in ample_deficits(cfg, w).values())


def solve_weights(cfg: SncConfiguration, *, max_steps: int = 100_000) -> WeightVector:
    """Deterministic fixed-point solution of the ampleness constraints.

    Start with w_i = 1 on exceptional divisors, then repeatedly raise the
    weight of the lowest-id violated constraint to the least value making
    it strictly positive.  Requires the exceptional intersection matrix to
    be negative definite, which characterizes resolutions over a point
    cluster.
    """
    require_valid(cfg)
    if cfg.ambient_dim == 1 or not cfg.exceptional_ids():
        return WeightVector(tuple((d.id, 0) for d in cfg.divisors))
    if cfg.ambient_dim != 2:
        raise UnsupportedDimensionError("weight solving is curve-case; supply weights for ambient_dim >= 3")

    exc_ids, sub = _exceptional_submatrix(cfg)
    if not is_negative_definite(sub):
        raise NotNegativeDefiniteError(
            "exceptional intersection matrix is not negative definite; "
            "not a resolution over a point cluster"
        )

    w = {d.id: (1 if d.exceptional else 0) for d in cfg.divisors}
    pos = {i: n for n, i in enumerate(exc_ids)}
    for _ in range(max_steps):
        violated = None
        for j in exc_ids:
            pairing = -sum(sub[pos[i]][pos[j]] * w[i] for i in exc_ids)
            if pairing <= 0:
                violated = j
                break
        if violated is None:
            return WeightVector(tuple(sorted(w.items())))
        j = violated
        self_int = sub[pos[j]][pos[j]]
        off = sum(sub[pos[i]][pos[j]] * w[i] for i in exc_ids if i != j)
        # need w_j * (-self_int) > off, with self_int < 0 and off >= 0
        w[j] = off // (-self_int) + 1
    raise ResourceLimitError("weight solver did not converge within the step cap")
