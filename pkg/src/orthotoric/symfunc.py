"""Elementary/complete symmetric functions and the inverse-Vandermonde identity suite.

Everything here runs over exact rationals.  The alternating Vandermonde matrix
V[r][j] = (-1)^(r-1) xi_j^(m-r) and its closed-form inverse
W[j][r] = sigma_{r-1}(xi-hat_j) / Delta_j  (Delta_j = prod_{k!=j} (xi_j - xi_k))
are the coefficient machinery for momentum-coordinate metrics; the identity
suite proves, for a concrete variable set, the contraction identities the
geometry modules rely on.  W is always built from the closed form - building it
by Gaussian elimination would make the identity checks circular.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

__all__ = [
    "IdentityViolation",
    "VariableSet",
    "elem_sym",
    "elem_sym_hat",
    "complete_sym",
    "vandermonde",
    "identity_suite",
    "random_variable_set",
]


class IdentityViolation(AssertionError):
    """An exact symmetric-function identity failed; message carries the witness."""


@dataclass(frozen=True)
class VariableSet:
    """m pairwise-distinct exact rationals."""

    values: Tuple[Fraction, ...]

    def __init__(self, values: Sequence):
        vals = tuple(Fraction(v) for v in values)
        if len(set(vals)) != len(vals):
            raise ValueError(f"variables must be pairwise distinct, got {vals}")
        if not vals:
            raise ValueError("empty variable set")
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> int:
        return len(self.values)

    def delta(self, j: int) -> Fraction:
        """prod_{k != j} (xi_j - xi_k), 0-based j."""
        return self._tables()["delta"][j]

    def _tables(self) -> dict:
        """Per-object memo for delta, sigma, and hatted-sigma values."""
        tb = self.__dict__.get("_tb")
        if tb is None:
            xs = self.values
            m = len(xs)
            deltas = []
            for j in range(m):
                out = Fraction(1)
                for k, x in enumerate(xs):
                    if k != j:
                        out *= xs[j] - x
                deltas.append(out)
            sig = [_elem_sym_cached(xs, r) for r in range(m + 1)]
            hat = [[_elem_sym_cached(tuple(x for k, x in enumerate(xs)
                                           if k != j), r)
                    for r in range(m)] for j in range(m)]
            tb = {"delta": deltas, "sig": sig, "hat": hat, "h": {}}
            object.__setattr__(self, "_tb", tb)
        return tb


def elem_sym(vals, r: int) -> Fraction:
    """Elementary symmetric function sigma_r; sigma_0 = 1, r > len -> 0."""
    if r < 0:
        raise ValueError("negative degree")
    if isinstance(vals, VariableSet):
        sig = vals._tables()["sig"]
        return sig[r] if r < len(sig) else Fraction(0)
    return _elem_sym_cached(tuple(vals), r)


@lru_cache(maxsize=65536)
def _elem_sym_cached(vals: Tuple[Fraction, ...], r: int) -> Fraction:
    if r == 0:
        return Fraction(1)
    if r > len(vals):
        return Fraction(0)
    total = Fraction(0)
    for comb in itertools.combinations(vals, r):
        prod = Fraction(1)
        for c in comb:
            prod *= c
        total += prod
    return total


def elem_sym_hat(v: VariableSet, r: int, j: int) -> Fraction:
    """sigma_r of the set with the j-th variable deleted (0-based j)."""
    hat = v._tables()["hat"]
    return hat[j][r] if r < len(hat[j]) else Fraction(0)


def complete_sym(v: VariableSet, p: int) -> Fraction:
    """Complete symmetric function h_p by direct multiset enumeration.

    Deliberately naive (sum over multisets); the Newton-identity recurrence is
    kept in the tests as an independent oracle against this implementation.
    The memo layer only avoids recomputing the same (values, p) pair.
    """
    if p < 0:
        return Fraction(0)
    if p == 0:
        return Fraction(1)
    memo = v._tables()["h"]
    got = memo.get(p)
    if got is None:
        total = Fraction(0)
        for comb in itertools.combinations_with_replacement(v.values, p):
            prod = Fraction(1)
            for c in comb:
                prod *= c
            total += prod
        memo[p] = got = total
    return got


def vandermonde(v: VariableSet) -> Tuple[List[List[Fraction]], List[List[Fraction]]]:
    """Return (V, W); V[r][j] = (-1)^(r-1) xi_j^(m-r), W the closed-form inverse."""
    m = v.m
    xs = v.values
    V = [[(-1) ** r * xs[j] ** (m - 1 - r) for j in range(m)] for r in range(m)]
    # rows of W indexed by variable j, columns by degree r
    W = [[elem_sym_hat(v, r, j) / v.delta(j) for r in range(m)] for j in range(m)]
    return V, W


def _det_exact(rows: List[List[Fraction]]) -> Fraction:
    """Fraction-pivot determinant (only used as a *test target*, never to build W)."""
    a = [row[:] for row in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


@dataclass
class ExactReport:
    """Result of the exact identity suite: counts, not residuals."""

    m: int
    max_k: int
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _check(report: ExactReport, ok: bool, label: str, witness):
    report.checks += 1
    if not ok:
        report.failures.append((label, witness))
        raise IdentityViolation(f"{label} failed at {witness}")


def identity_suite(v: VariableSet, max_k: int = 3) -> ExactReport:
    """Exact verification of the inverse-Vandermonde contraction identities.

    Covers: W.V = V.W = Id; the delta identity sum_j (-1)^(s-1) xi_j^(m-s)
    sigma_{r-1}(hat j)/Delta_j = delta_rs; the power-sum variants
    sum_j xi_j^(m-s)/Delta_j = delta_{s1} and sum_j xi_j^(m-1+p)/Delta_j = h_p;
    the shifted contraction sum_j xi_j^(m+k) sigma_{r-1}(hat j)/Delta_j =
    sum_{s<=k} (-1)^s h_{k-s} sigma_{r+s}; the derivative of the latter in each
    variable (by exact term-by-term rational-function differentiation, not via
    generating functions); and the two determinant product formulas.

    Raises IdentityViolation with the failing (r, s, k, i) witness.
    """
    m = v.m
    xs = v.values
    rep = ExactReport(m=m, max_k=max_k)
    V, W = vandermonde(v)

    # matrix inverses both ways
    for a in range(m):
        for b in range(m):
            wv = sum(W[a][r] * V[r][b] for r in range(m))
            vw = sum(V[a][j] * W[j][b] for j in range(m))
            eye = Fraction(1 if a == b else 0)
            _check(rep, wv == eye, "WV=Id", (a, b))
            _check(rep, vw == eye, "VW=Id", (a, b))

    # delta identity, explicit form (r, s are 1-based degrees here)
    for r in range(1, m + 1):
        for s in range(1, m + 1):
            lhs = sum((-1) ** (s - 1) * xs[j] ** (m - s) * elem_sym_hat(v, r - 1, j) / v.delta(j)
                      for j in range(m))
            _check(rep, lhs == (1 if r == s else 0), "delta-identity", (r, s))

    # power sums over Delta: delta_{s1} and complete symmetric functions
    for s in range(1, m + 1):
        lhs = sum(xs[j] ** (m - s) / v.delta(j) for j in range(m))
        _check(rep, lhs == (1 if s == 1 else 0), "powersum-delta", (s,))
    for p in range(0, max_k + 1):
        lhs = sum(xs[j] ** (m - 1 + p) / v.delta(j) for j in range(m))
        _check(rep, lhs == complete_sym(v, p), "powersum-h", (p,))

    # shifted contraction and its exact derivative
    for k in range(0, max_k + 1):
        for r in range(1, m + 1):
            lhs = sum(xs[j] ** (m + k) * elem_sym_hat(v, r - 1, j) / v.delta(j)
                      for j in range(m))
            rhs = sum((-1) ** s * complete_sym(v, k - s) * elem_sym(v, r + s)
                      for s in range(0, k + 1))
            _check(rep, lhs == rhs, "shifted-contraction", (r, k))
            for i in range(m):
                lhs_d = _partial_of_contraction(v, r - 1, k, i)
                rhs_d = elem_sym_hat(v, r - 1, i) * sum(
                    complete_sym(v, k - s) * xs[i] ** s for s in range(0, k + 1))
                _check(rep, lhs_d == rhs_d, "contraction-derivative", (r, k, i))

    # determinant product formulas
    detV = _det_exact(V)
    sign = Fraction((-1) ** (m * (m - 1) // 2))
    prod_ij = Fraction(1)
    for i in range(m):
        for j in range(i + 1, m):
            prod_ij *= xs[i] - xs[j]
    _check(rep, detV == sign * prod_ij, "detV", ())
    prod_delta = Fraction(1)
    for j in range(m):
        prod_delta *= v.delta(j)
    _check(rep, detV ** 2 == sign * prod_delta, "detV-squared", ())
    return rep


def _partial_of_contraction(v: VariableSet, r0: int, k: int, i: int) -> Fraction:
    """d/dxi_i of sum_j xi_j^(m+k) sigma_r0(hat j)/Delta_j, term by term.

    Each term is a rational function of xi_i; quotient rule with the closed
    forms for the partials of sigma_r0(hat j) and Delta_j.
    """
    m = v.m
    xs = v.values
    total = Fraction(0)
    for j in range(m):
        N = xs[j] ** (m + k) * elem_sym_hat(v, r0, j)
        D = v.delta(j)
        if j == i:
            dN = (m + k) * xs[j] ** (m + k - 1) * elem_sym_hat(v, r0, j)
            dD = D * sum(Fraction(1) / (xs[i] - xs[l]) for l in range(m) if l != i)
        else:
            if r0 == 0:
                dN = Fraction(0)
            else:
                rest = [x for l, x in enumerate(xs) if l not in (i, j)]
                dN = xs[j] ** (m + k) * elem_sym(rest, r0 - 1)
            dD = Fraction(-1)
            for l in range(m):
                if l not in (i, j):
                    dD *= xs[j] - xs[l]
        total += (dN * D - N * dD) / D ** 2
    return total


def random_variable_set(m: int, rng: random.Random, span: int = 24) -> VariableSet:
    """Pairwise-distinct random rationals with small numerators/denominators."""
    vals: set = set()
    while len(vals) < m:
        num = rng.randint(-span, span)
        den = rng.randint(1, 6)
        vals.add(Fraction(num, den))
    return VariableSet(sorted(vals))
