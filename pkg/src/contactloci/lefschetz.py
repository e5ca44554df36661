"""Euler characteristic oracle: Lefschetz numbers and the monodromy zeta
function computed directly from the resolution data.

A'Campo's formula gives the Lefschetz number of the m-th monodromy
iterate as

    Lambda(phi^m) = sum over {i : h(E_i) in Sigma, m_i | m} of
                    m_i * chi(E_i°),

and the Denef-Loeser identity equates this with the Euler characteristic
of the m-th contact locus.  The page assembly computes the same number
through cover Betti data, so comparing the two is a genuine two-path
cross check: this module never touches the covers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .model import SncConfiguration, euler_open_stratum, require_valid
from .spectral import e1_page
from .weights import WeightVector


@dataclass(frozen=True)
class ZetaFactorization:
    """Product of (1 - t^m_i)^(-chi(E_i°)) over the divisors over Sigma.

    Stored in reduced form: equal cycle lengths combined, zero exponents
    dropped, sorted by cycle length.
    """

    factors: tuple[tuple[int, int], ...]  # (cycle length, exponent)

    def render(self) -> str:
        num = [f for f in self.factors if f[1] > 0]
        den = [f for f in self.factors if f[1] < 0]

        def block(fs, flip):
            parts = []
            for length, exp in fs:
                e = -exp if flip else exp
                base = f"(1 - t^{length})"
                parts.append(base if e == 1 else f"{base}^{e}")
            return "".join(parts)

        if not num and not den:
            return "1"
        top = block(num, False) or "1"
        if not den:
            return top
        return f"{top} / {block(den, True)}"

    def to_json_dict(self) -> dict:
        return {"factors": [[length, exp] for length, exp in self.factors]}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ZetaFactorization":
        return cls(tuple((int(a), int(b)) for a, b in data["factors"]))


def lefschetz_number(cfg: SncConfiguration, m: int) -> int:
    require_valid(cfg)
    total = 0
    for d in cfg.divisors:
        if d.over_sigma and m % d.mult == 0:
            total += d.mult * euler_open_stratum(cfg, d.id)
    return total


def zeta_factorization(cfg: SncConfiguration) -> ZetaFactorization:
    require_valid(cfg)
    exponents: dict[int, int] = {}
    for d in cfg.divisors:
        if d.over_sigma:
            chi = euler_open_stratum(cfg, d.id)
            if chi:
                exponents[d.mult] = exponents.get(d.mult, 0) - chi
    factors = tuple(sorted((length, exp) for length, exp in exponents.items() if exp))
    return ZetaFactorization(factors)


@dataclass(frozen=True)
class EulerCrossCheck:
    m: int
    page_euler: int
    lefschetz: int

    @property
    def passed(self) -> bool:
        return self.page_euler == self.lefschetz

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "page_euler": self.page_euler,
            "lefschetz": self.lefschetz,
            "passed": self.passed,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "EulerCrossCheck":
        return cls(
            m=int(data["m"]),
            page_euler=int(data["page_euler"]),
            lefschetz=int(data["lefschetz"]),
        )


def cross_check_euler(
    cfg: SncConfiguration,
    w: WeightVector,
    m: int,
    covers=None,
    *,
    lefschetz_cfg: SncConfiguration | None = None,
) -> EulerCrossCheck:
    """Compare the page Euler characteristic with the Lefschetz number.

    ``lefschetz_cfg`` lets the caller evaluate the A'Campo side on an
    unseparated configuration (the number is a blowup invariant), keeping
    the two code paths on independent inputs as well.
    """
    page = e1_page(cfg, w, m, covers)
    other = lefschetz_cfg if lefschetz_cfg is not None else cfg
    return EulerCrossCheck(
        m=m,
        page_euler=page.euler_characteristic(),
        lefschetz=lefschetz_number(other, m),
    )
