"""Polynomials over the naturals used as time and multiplicity bounds."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

_TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?(n)(?:\s*\^\s*(\d+))?$|^(\d+)$")


@dataclass(frozen=True)
class NatPoly:
    """Polynomial with nonnegative integer coefficients, lowest degree first."""

    coefficients: tuple[int, ...] = (0,)

    def __post_init__(self) -> None:
        if any(c < 0 for c in self.coefficients):
            raise ValueError("NatPoly coefficients must be nonnegative")
        trimmed = list(self.coefficients) or [0]
        while len(trimmed) > 1 and trimmed[-1] == 0:
            trimmed.pop()
        object.__setattr__(self, "coefficients", tuple(trimmed))

    @classmethod
    def constant(cls, value: int) -> NatPoly:
        return cls((value,))

    @classmethod
    def standard(cls, c: int) -> NatPoly:
        """The multiplicity bound n^c + c."""
        if c < 1:
            raise ValueError("standard bound needs c >= 1")
        coefficients = [0] * (c + 1)
        coefficients[0] += c
        coefficients[c] += 1
        return cls(tuple(coefficients))

    @classmethod
    def parse(cls, text: str) -> NatPoly:
        """Parse expressions such as ``n^2+2``, ``3*n + 1`` or ``4``."""
        if not text.strip():
            raise ParseError("empty polynomial")
        coefficients: dict[int, int] = {}
        for raw in text.split("+"):
            term = raw.strip()
            match = _TERM.match(term)
            if match is None:
                raise ParseError(f"cannot parse polynomial term {term!r}")
            scale, var, power, constant = match.groups()
            if var is None:
                coefficients[0] = coefficients.get(0, 0) + int(constant)
                continue
            degree = int(power) if power is not None else 1
            coefficients[degree] = coefficients.get(degree, 0) + (int(scale) if scale else 1)
        top = max(coefficients)
        return cls(tuple(coefficients.get(d, 0) for d in range(top + 1)))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def standard_degree(self) -> int | None:
        """Return c when this polynomial is exactly n^c + c, else None."""
        c = self.degree
        if c >= 1 and self == NatPoly.standard(c):
            return c
        return None

    def __call__(self, n: int) -> int:
        value = 0
        for coefficient in reversed(self.coefficients):
            value = value * n + coefficient
        return value

    def __str__(self) -> str:
        terms = []
        for degree, coefficient in enumerate(self.coefficients):
            if coefficient == 0:
                continue
            if degree == 0:
                terms.append(str(coefficient))
            else:
                var = "n" if degree == 1 else f"n^{degree}"
                terms.append(var if coefficient == 1 else f"{coefficient}*{var}")
        return " + ".join(reversed(terms)) or "0"


@dataclass(frozen=True)
class ExpBound:
    """The exponential multiplicity 2^(p(n)+1) of Exp-LWPP witnesses."""

    exponent: NatPoly

    def __call__(self, n: int) -> int:
        return 2 ** (self.exponent(n) + 1)

    def __str__(self) -> str:
        return f"2^({self.exponent} + 1)"


Multiplicity = NatPoly | ExpBound
