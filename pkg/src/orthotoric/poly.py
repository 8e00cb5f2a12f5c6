"""Univariate polynomials over exact rationals or floats.

Coefficients are stored degree-descending (``[1, 0, -2]`` is ``t**2 - 2``),
the zero polynomial is the empty list with degree -1.  Two coefficient modes
exist: ``exact`` keeps everything in :class:`fractions.Fraction` and is used by
the classification algebra (where coefficient identities must be exact),
``float`` is used on the geometry side where values are fed into numerical
charts anyway.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "InexactDivision",
    "Polynomial",
    "arith",
]

EXACT = "exact"
FLOAT = "float"


class InexactDivision(ArithmeticError):
    """Polynomial division left a nonzero remainder where none was allowed."""


def _as_exact(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, float):
        # floats are accepted but converted exactly (binary expansion)
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class Polynomial:
    """Immutable dense univariate polynomial.

    Parameters
    ----------
    coeffs : sequence
        Degree-descending coefficients.  Leading zeros are stripped.
    mode : str
        ``"exact"`` (Fraction arithmetic) or ``"float"``.
    """

    __slots__ = ("coeffs", "mode")

    def __init__(self, coeffs: Iterable, mode: str = EXACT):
        if mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == EXACT:
            cs = [_as_exact(c) for c in coeffs]
        else:
            cs = [float(c) for c in coeffs]
        # strip leading zeros; zero polynomial becomes the empty list
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        object.__setattr__(self, "coeffs", tuple(cs[i:]))
        object.__setattr__(self, "mode", mode)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Polynomial is immutable")

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs and self.mode == other.mode

    def __hash__(self):
        return hash((self.coeffs, self.mode))

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r}, mode={self.mode!r})"

    def _zero_coeff(self):
        return Fraction(0) if self.mode == EXACT else 0.0

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, mode: str = EXACT) -> "Polynomial":
        return cls([], mode)

    @classmethod
    def from_roots(cls, roots: Sequence, multiplicities: Sequence[int] | None = None,
                   mode: str = EXACT) -> "Polynomial":
        """Monic polynomial with the given roots (and multiplicities)."""
        if multiplicities is None:
            multiplicities = [1] * len(roots)
        if len(multiplicities) != len(roots):
            raise ValueError("roots and multiplicities must have equal length")
        one = Fraction(1) if mode == EXACT else 1.0
        p = cls([one], mode)
        for r, k in zip(roots, multiplicities):
            if k < 0:
                raise ValueError("negative multiplicity")
            lin = cls([one, -(_as_exact(r) if mode == EXACT else float(r))], mode)
            for _ in range(k):
                p = p * lin
        return p

    # -- evaluation --------------------------------------------------------

    def __call__(self, t):
        return self.eval_and_derivatives(t, 0)[0]

    def eval_and_derivatives(self, t, order: int = 0) -> list:
        """Evaluate p and its derivatives up to ``order`` at ``t``.

        Horner-style accumulation: no powers of t are formed explicitly, so the
        scheme works unchanged for Fractions, floats and derivative-carrying
        scalars.  Returns ``[p(t), p'(t), ..., p^(order)(t)]``.
        """
        if order < 0:
            raise ValueError("order must be >= 0")
        zero = self._zero_coeff()
        # r[k] accumulates p^(k)(t)/k!
        r = [zero * 1 for _ in range(order + 1)]
        if self.coeffs:
            r[0] = self.coeffs[0] + (t * 0)  # promote to the scalar type of t
            for c in self.coeffs[1:]:
                for k in range(order, 0, -1):
                    r[k] = r[k] * t + r[k - 1]
                r[0] = r[0] * t + c
        fact = 1
        out = []
        for k in range(order + 1):
            if k > 1:
                fact *= k
            out.append(r[k] * fact if k > 1 else r[k])
        return out

    # -- arithmetic --------------------------------------------------------

    def _check_mode(self, other: "Polynomial"):
        if self.mode != other.mode:
            raise ValueError("mixed-mode polynomial arithmetic")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_mode(other)
        a, b = list(self.coeffs), list(other.coeffs)
        n = max(len(a), len(b))
        a = [self._zero_coeff()] * (n - len(a)) + a
        b = [self._zero_coeff()] * (n - len(b)) + b
        return Polynomial([x + y for x, y in zip(a, b)], self.mode)

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs], self.mode)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            # scalar multiple
            return Polynomial([c * other for c in self.coeffs], self.mode)
        self._check_mode(other)
        if self.is_zero() or other.is_zero():
            return Polynomial.zero(self.mode)
        out = [self._zero_coeff()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out, self.mode)

    __rmul__ = __mul__

    def divide_exact(self, other: "Polynomial") -> "Polynomial":
        """Quotient self/other, raising :class:`InexactDivision` on a remainder.

        In float mode the remainder is compared against a tiny multiple of the
        working coefficient scale instead of exact zero.
        """
        self._check_mode(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return Polynomial.zero(self.mode)
        if self.degree < other.degree:
            raise InexactDivision("degree of dividend below divisor")
        rem = list(self.coeffs)
        lead = other.coeffs[0]
        q = []
        for i in range(len(self.coeffs) - len(other.coeffs) + 1):
            c = rem[i] / lead
            q.append(c)
            for j, b in enumerate(other.coeffs):
                rem[i + j] -= c * b
        tail = rem[len(q):] if len(other.coeffs) > 1 else []
        if self.mode == EXACT:
            bad = any(c != 0 for c in tail)
        else:
            scale = max((abs(c) for c in self.coeffs), default=0.0) or 1.0
            bad = any(abs(c) > 1e-9 * scale for c in tail)
        if bad:
            raise InexactDivision(f"nonzero remainder {tail!r}")
        return Polynomial(q, self.mode)

    def derivative(self, order: int = 1) -> "Polynomial":
        p = self
        for _ in range(order):
            d = len(p.coeffs) - 1
            p = Polynomial([c * (d - i) for i, c in enumerate(p.coeffs[:-1])], p.mode)
        return p

    def antiderivative(self, constant=0) -> "Polynomial":
        """One antiderivative; ``constant`` becomes the new trailing coefficient."""
        d = self.degree
        if self.mode == EXACT:
            cs = [c / Fraction(d - i + 1) for i, c in enumerate(self.coeffs)]
            cs.append(_as_exact(constant))
        else:
            cs = [c / float(d - i + 1) for i, c in enumerate(self.coeffs)]
            cs.append(float(constant))
        return Polynomial(cs, self.mode)

    # -- conversions -------------------------------------------------------

    def to_float(self) -> "Polynomial":
        return self if self.mode == FLOAT else Polynomial([float(c) for c in self.coeffs], FLOAT)

    def to_json(self) -> list:
        """Degree-descending coefficient array; exact coefficients as strings."""
        if self.mode == EXACT:
            return [str(c) for c in self.coeffs]
        return list(self.coeffs)

    @classmethod
    def from_json(cls, data: Sequence, mode: str = EXACT) -> "Polynomial":
        return cls(list(data), mode)


def arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Named arithmetic entry point: add | sub | mul | divide_exact."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "divide_exact":
        return a.divide_exact(b)
    raise ValueError(f"unknown op {op!r}")
