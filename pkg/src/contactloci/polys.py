"""Sparse multivariate polynomials over Q and a small expression parser.

Polynomials are stored as immutable sorted term lists mapping exponent
tuples to nonzero rational coefficients.  This is the exchange format for
curve germs ("x^2 + y^3") and for the polynomials handed to the finite
field jet enumerator; all heavy algebra (factorization) is delegated to
sympy at module boundaries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DomainError


@dataclass(frozen=True)
class SparsePolynomial:
    """A polynomial in ``nvars`` variables with exact rational coefficients.

    ``terms`` is sorted by exponent tuple and stores no zero coefficients.
    """

    nvars: int
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]

    @classmethod
    def from_terms(cls, nvars: int, terms: Mapping[tuple[int, ...], Fraction | int]) -> "SparsePolynomial":
        clean = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise DomainError(f"exponent tuple {exps} does not have {nvars} entries")
            if any(e < 0 for e in exps):
                raise DomainError(f"negative exponent in {exps}")
            coeff = Fraction(coeff)
            if coeff:
                clean[exps] = clean.get(exps, Fraction(0)) + coeff
        items = tuple(sorted((e, c) for e, c in clean.items() if c))
        return cls(nvars, items)

    def as_dict(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        zero = (0,) * self.nvars
        for exps, coeff in self.terms:
            if exps == zero:
                return coeff
        return Fraction(0)

    def multiplicity_at_origin(self) -> int:
        """Order of vanishing at 0, i.e. the least total degree of a term."""
        if not self.terms:
            raise DomainError("the zero polynomial has no multiplicity")
        return min(sum(exps) for exps, _ in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(exps) for exps, _ in self.terms)

    def linear_part(self) -> tuple[Fraction, ...]:
        """Coefficients of the degree-one monomials, one per variable."""
        grad = [Fraction(0)] * self.nvars
        for exps, coeff in self.terms:
            if sum(exps) == 1:
                grad[exps.index(1)] = coeff
        return tuple(grad)

    def to_json_dict(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [[list(exps), str(coeff)] for exps, coeff in self.terms],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "SparsePolynomial":
        nvars = int(data["nvars"])
        terms = {tuple(exps): Fraction(str(coeff)) for exps, coeff in data["terms"]}
        return cls.from_terms(nvars, terms)

    def render(self, names: Iterable[str] = ("x", "y", "z", "w")) -> str:
        names = list(names)[: self.nvars]

        def order(term):
            exps, _ = term
            degree = sum(exps)
            return (degree == 0, degree, tuple(-e for e in exps))

        parts = []
        for exps, coeff in sorted(self.terms, key=order):
            powers = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(names, exps)
                if e
            ]
            if not powers:
                body = str(abs(coeff))
            elif abs(coeff) == 1:
                body = "*".join(powers)
            else:
                body = "*".join([str(abs(coeff))] + powers)
            parts.append((coeff < 0, body))
        if not parts:
            return "0"
        neg, body = parts[0]
        out = ("-" if neg else "") + body
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([a-zA-Z])|(\*\*|[()^+*-]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise DomainError(f"cannot parse polynomial near {text[pos:pos + 10]!r}")
        if match.group(1):
            tokens.append(("int", match.group(1)))
        elif match.group(2):
            tokens.append(("var", match.group(2)))
        else:
            op = match.group(3)
            tokens.append(("op", "^" if op == "**" else op))
        pos = match.end()
    return tokens


class _Parser:
    """Recursive descent for the grammar:

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor (['*'] factor)*      (juxtaposition multiplies)
    factor := atom ['^' INT]
    atom   := INT | VAR | '(' expr ')'
    """

    def __init__(self, tokens: list[tuple[str, str]]):
        self.tokens = tokens
        self.pos = 0
        self.vars: dict[str, None] = {}

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        result = _scale(self.term(), sign)
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            _, op = self.take()
            rhs = self.term()
            result = _add(result, _scale(rhs, -1 if op == "-" else 1))
        return result

    def term(self):
        result = self.factor()
        while True:
            kind, value = self.peek()
            if kind == "op" and value == "*":
                self.take()
                result = _mul(result, self.factor())
            elif kind in ("int", "var") or (kind == "op" and value == "("):
                result = _mul(result, self.factor())
            else:
                return result

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, value = self.take()
            if kind != "int":
                raise DomainError("exponent must be a literal integer")
            return _pow(base, int(value))
        return base

    def atom(self):
        kind, value = self.take()
        if kind == "int":
            return {(): Fraction(value)}
        if kind == "var":
            self.vars.setdefault(value, None)
            return {(value,): Fraction(1)}
        if (kind, value) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise DomainError("missing closing parenthesis")
            return inner
        raise DomainError(f"unexpected token {value!r}")


# Intermediate representation during parsing: exponent keys are sorted
# tuples of variable names with repetition, resolved to numeric exponent
# tuples once the variable set is known.

def _mul(a, b):
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            key = tuple(sorted(ka + kb))
            out[key] = out.get(key, Fraction(0)) + ca * cb
    return {k: c for k, c in out.items() if c}


def _add(a, b):
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, Fraction(0)) + c
    return {k: c for k, c in out.items() if c}


def _scale(a, s):
    return {k: c * s for k, c in a.items()}


def _pow(a, e):
    if e < 0:
        raise DomainError("negative exponents are not polynomials")
    out = {(): Fraction(1)}
    for _ in range(e):
        out = _mul(out, a)
    return out


def parse_polynomial(text: str, variables: tuple[str, ...] | None = None) -> tuple[SparsePolynomial, tuple[str, ...]]:
    """Parse an integer-coefficient expression such as ``x^2 + y^3``.

    Returns the polynomial and the variable name tuple.  When ``variables``
    is not given, the variables are the letters appearing in the text, in
    alphabetical order.
    """
    parser = _Parser(_tokenize(text))
    raw = parser.expr()
    if parser.pos != len(parser.tokens):
        raise DomainError(f"trailing input after position {parser.pos}")
    if variables is None:
        variables = tuple(sorted(parser.vars))
    unknown = set(parser.vars) - set(variables)
    if unknown:
        raise DomainError(f"unknown variables {sorted(unknown)}")
    index = {name: i for i, name in enumerate(variables)}
    nvars = len(variables)
    terms: dict[tuple[int, ...], Fraction] = {}
    for key, coeff in raw.items():
        exps = [0] * nvars
        for name in key:
            exps[index[name]] += 1
        exps = tuple(exps)
        terms[exps] = terms.get(exps, Fraction(0)) + coeff
    return SparsePolynomial.from_terms(nvars, terms), variables
