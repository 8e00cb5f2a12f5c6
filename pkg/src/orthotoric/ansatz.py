"""Builders for Kahler metrics in momentum-angle coordinates.

A model of complex dimension m is assembled from

* ``ell`` *momentum coordinates* xi_1..xi_ell ranging over disjoint intervals,
  with one polynomial *profile function* per coordinate,
* ``ell`` *angle coordinates* t_1..t_ell (the torus directions), and
* optional *base factors*: space-form Kahler pieces of complex dimension
  m_const attached to prescribed constant values of the momentum spectrum.

The metric, complex structure, symplectic form and the distinguished
J-invariant 2-form ("momentum 2-form") are all emitted as chart fields whose
components accept jets, so curvature can be taken directly.  The same
assembly covers the purely toric case (no factors), fibrations over a single
base (one constant value), and the one-momentum Calabi-type metrics.

Sign bookkeeping: writing pr(t) for the monic polynomial with the constant
values as roots (with multiplicity) and D_j for prod_{k != j}(xi_j - xi_k),
positivity of the metric requires sign F_j = sign D_j on the j-th interval and
the definiteness sign of each base factor to match the sign of
prod_j (c - xi_j) at its constant value c.  Violations raise
PositivityViolation / SignMismatch at build time with a witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad

from .geom import (Box, ChartField, EndoField, MetricField, ScalarField,
                   TwoFormField, pfaffian_matrix)
from .jets import Jet, fd_hessian, jet_value, jlog, variables
from .jets import _chain  # univariate composition is exactly what quadrature needs
from .poly import FLOAT, Polynomial

__all__ = [
    "AnsatzError",
    "PositivityViolation",
    "SignMismatch",
    "DomainTooLarge",
    "SpectrumSpec",
    "BaseFactor",
    "space_form_factor",
    "Antideriv",
    "MetricModel",
    "build_general",
    "build_orthotoric",
    "build_calabi",
    "conformal_reflection",
    "ToricModel",
    "build_toric_from_potential",
    "orthotoric_dual_potential",
    "invert_matrix_generic",
]


class AnsatzError(ValueError):
    pass


class PositivityViolation(AnsatzError):
    """A profile function has the wrong sign somewhere on its interval."""


class SignMismatch(AnsatzError):
    """Base-factor definiteness incompatible with its momentum coefficient."""


class DomainTooLarge(AnsatzError):
    """Requested chart box leaves the region where the data stay regular."""


def _esym_all(vals: Sequence):
    """Elementary symmetric functions e_0..e_len of arbitrary scalars (jets ok)."""
    e = [1.0]
    for v in vals:
        e = [e[0]] + [e[i] + v * e[i - 1] for i in range(1, len(e))] + [v * e[-1]]
    return e


def _matmul_obj(A, B):
    n, k = len(A), len(B[0])
    mid = len(B)
    out = [[None] * k for _ in range(n)]
    for i in range(n):
        for j in range(k):
            s = A[i][0] * B[0][j]
            for l in range(1, mid):
                s = s + A[i][l] * B[l][j]
            out[i][j] = s
    return out


def invert_matrix_generic(M):
    """Gauss-Jordan inverse of a square matrix of generic scalars (jets ok).

    Pivots are chosen by the magnitude of the value part only.
    """
    n = len(M)
    a = [[M[i][j] for j in range(n)] for i in range(n)]
    inv = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(jet_value(a[r][col])))
        if abs(jet_value(a[piv][col])) < 1e-14:
            raise AnsatzError("singular matrix in generic inversion")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col]
        a[col] = [x / d for x in a[col]]
        inv[col] = [x / d for x in inv[col]]
        for r in range(n):
            if r != col:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return inv


# ---------------------------------------------------------------------------
# spectrum and base factors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumSpec:
    """Momentum intervals plus constant values with multiplicities."""

    intervals: Tuple[Tuple[float, float], ...]
    constants: Tuple[Tuple[float, int], ...] = ()

    def __init__(self, intervals, constants=()):
        ivs = tuple((float(a), float(b)) for a, b in intervals)
        cs = tuple((float(v), int(k)) for v, k in constants)
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "constants", cs)
        if not ivs:
            raise AnsatzError("need at least one momentum interval")
        for a, b in ivs:
            if not a < b:
                raise AnsatzError(f"empty momentum interval ({a}, {b})")
        for i, (a, b) in enumerate(ivs):
            for a2, b2 in ivs[i + 1:]:
                if max(a, a2) < min(b, b2):
                    raise AnsatzError("momentum intervals must be disjoint")
        for v, k in cs:
            if k < 1:
                raise AnsatzError("constant multiplicity must be >= 1")
            for a, b in ivs:
                if a <= v <= b:
                    raise AnsatzError(
                        f"constant value {v} may not meet the interval ({a}, {b})")

    @property
    def ell(self) -> int:
        return len(self.intervals)

    @property
    def m(self) -> int:
        return self.ell + sum(k for _, k in self.constants)

    def root_poly(self) -> Polynomial:
        """Monic polynomial with the constant values as roots (float mode)."""
        if not self.constants:
            return Polynomial([1.0], FLOAT)
        return Polynomial.from_roots([v for v, _ in self.constants],
                                     [k for _, k in self.constants], FLOAT)

    def interval_signs(self) -> List[int]:
        """Required profile sign per interval: the sign there of p'(xi_j).

        p'(xi_j) factors as prod_{k != j}(xi_j - xi_k) times the constant-root
        polynomial at xi_j, and both factors have fixed sign on the interval.
        """
        mids = [0.5 * (a + b) for a, b in self.intervals]
        out = []
        for j, mj in enumerate(mids):
            s = 1
            for k, mk in enumerate(mids):
                if k != j:
                    s *= 1 if mj > mk else -1
            for v, mult in self.constants:
                if (mj - v < 0) and mult % 2 == 1:
                    s *= -1
            out.append(s)
        return out

    def constant_coefficient_sign(self, value: float) -> int:
        s = 1
        for a, b in self.intervals:
            mid = 0.5 * (a + b)
            s *= 1 if value > mid else -1
        return s


class BaseFactor:
    """Space-form Kahler factor used as a fibre-base building block.

    Carries closures (all jet-capable) for the symplectic form, metric,
    its potential f with dd^c f = omega, the Ricci potential, and exact
    curvature metadata.  ``sign`` is the definiteness sign of the metric.
    """

    def __init__(self, m_f: int, k: float, scale: float, halfwidth: float):
        if scale == 0:
            raise AnsatzError("factor scale must be nonzero")
        self.m_f = m_f
        self.dim = 2 * m_f
        self.k = float(k)
        self.scale = float(scale)
        self.halfwidth = float(halfwidth)
        self.sign = 1 if scale > 0 else -1
        smax = self.dim * halfwidth ** 2
        if k < 0 and 1.0 + k * smax < 0.05:
            raise DomainTooLarge(
                f"fibre box of halfwidth {halfwidth} leaves the disc of the "
                f"space form with k={k}")
        J0 = np.zeros((self.dim, self.dim))
        for a in range(m_f):
            J0[2 * a + 1, 2 * a] = 1.0
            J0[2 * a, 2 * a + 1] = -1.0
        self.J0 = J0
        # exact curvature: holomorphic sectional curvature k/scale
        self.scal = m_f * (m_f + 1) * self.k / self.scale
        self.einstein_constant = (m_f + 1) * self.k / (2.0 * self.scale)

    def _radial(self, q):
        s = q[0] * q[0]
        for x in q[1:]:
            s = s + x * x
        den = 1.0 + self.k * s
        up = self.scale / den
        upp = -self.scale * self.k / den ** 2
        return s, up, upp

    def f(self, q):
        """Potential with dd^c f = omega (jet-capable)."""
        s, _, _ = self._radial(q)
        if self.k == 0:
            return self.scale * s
        return (self.scale / self.k) * jlog(1.0 + self.k * s)

    def omega(self, q):
        _, up, upp = self._radial(q)
        d = self.dim
        wj = [sum(q[a] * self.J0[a, nu] for a in range(d)) for nu in range(d)]
        out = np.empty((d, d), dtype=object)
        for mu in range(d):
            for nu in range(d):
                out[mu, nu] = (-4.0 * up * self.J0[mu, nu]
                               - 4.0 * upp * (q[mu] * wj[nu] - q[nu] * wj[mu]))
        return out

    def g(self, q):
        om = self.omega(q)
        d = self.dim
        out = np.empty((d, d), dtype=object)
        for mu in range(d):
            for nu in range(d):
                out[mu, nu] = sum(om[mu, a] * self.J0[a, nu] for a in range(d))
        return out

    def dc_f(self, q):
        """The 1-form -df o J, components over the factor block."""
        _, up, _ = self._radial(q)
        d = self.dim
        return [-2.0 * up * sum(q[a] * self.J0[a, nu] for a in range(d))
                for nu in range(d)]

    def kappa(self, q):
        """Ricci potential: dd^c kappa = ricci form of the factor."""
        pf = pfaffian_matrix(self.omega(q))
        return -0.5 * jlog(abs(pf))


def space_form_factor(k: float, scale: float, m_f: int,
                      halfwidth: float = 0.45) -> BaseFactor:
    """Kahler space form of complex dimension m_f.

    Holomorphic sectional curvature is exactly k/scale and the scalar
    curvature m_f (m_f + 1) k / scale; scale < 0 gives a negative-definite
    factor (used when the momentum coefficient in front is negative).
    """
    return BaseFactor(m_f, k, scale, halfwidth)


# ---------------------------------------------------------------------------
# quadrature antiderivatives
# ---------------------------------------------------------------------------


class Antideriv:
    """x -> integral_anchor^x num(t)/den(t) dt, differentiable through jets.

    The value is scipy quadrature; first and second derivatives come from the
    integrand and its analytic derivative, so jets of jets also work.
    """

    def __init__(self, num: Polynomial, den: Polynomial, anchor: float):
        self.num = num.to_float()
        self.den = den.to_float()
        self.anchor = float(anchor)
        self._dnum = self.num.derivative()
        self._dden = self.den.derivative()

    def _ratio(self, t):
        return self.num(t) / self.den(t)

    def _dratio(self, t):
        d = self.den(t)
        return (self._dnum(t) * d - self.num(t) * self._dden(t)) / (d * d)

    def __call__(self, x):
        if isinstance(x, Jet):
            return _chain(x, self(x.v), self._ratio(x.v), self._dratio(x.v))
        val, err = quad(self._ratio, self.anchor, float(x),
                        epsabs=1e-12, epsrel=1e-12, limit=200)
        return val


# ---------------------------------------------------------------------------
# the assembled model
# ---------------------------------------------------------------------------


class MetricModel:
    """A built metric with all its companion fields on one chart.

    Coordinates are ordered [xi_1..xi_ell, t_1..t_ell, fibre block].
    """

    def __init__(self, spectrum: SpectrumSpec, profiles: List[Polynomial],
                 factors: List[BaseFactor], name: str = "model",
                 fibre_halfwidth: float = 0.45, angle_halfwidth: float = 0.5):
        self.spectrum = spectrum
        self.profiles = [f.to_float() for f in profiles]
        self.factors = list(factors)
        self.name = name
        self.ell = spectrum.ell
        self.m = spectrum.m
        self.n = 2 * self.m
        self.p_c = spectrum.root_poly()
        self.constant_trace = sum(v * k for v, k in spectrum.constants)

        ell = self.ell
        offs = []
        off = 2 * ell
        for fac in self.factors:
            offs.append(off)
            off += fac.dim
        if off != self.n:
            raise AnsatzError("factor dimensions do not fill the chart")
        self._fibre_offsets = offs

        intervals = list(spectrum.intervals)
        intervals += [(-angle_halfwidth, angle_halfwidth)] * ell
        for fac in self.factors:
            intervals += [(-fac.halfwidth, fac.halfwidth)] * fac.dim
        self.domain = Box(intervals)

        self._build_fields()

    # -- pointwise scaffolding --------------------------------------------

    def _point_data(self, q):
        ell = self.ell
        xs = q[:ell]
        data = {}
        data["xs"] = xs
        hats = []
        deltas = []
        for j in range(ell):
            rest = [xs[k] for k in range(ell) if k != j]
            hats.append(_esym_all(rest))            # sigma_0..sigma_{ell-1} of the rest
            d = 1.0
            for k in range(ell):
                if k != j:
                    d = d * (xs[j] - xs[k])
            deltas.append(d)
        data["hats"] = hats
        data["deltas"] = deltas
        data["pc"] = [self.p_c.eval_and_derivatives(xs[j], 0)[0] for j in range(ell)]
        data["pprime"] = [data["pc"][j] * deltas[j] for j in range(ell)]
        data["F"] = [self.profiles[j].eval_and_derivatives(xs[j], 0)[0]
                     for j in range(ell)]
        # momentum coefficient of each factor: prod_j (c - xi_j)
        pnc = []
        for (c, _k) in self.spectrum.constants:
            v = 1.0
            for j in range(ell):
                v = v * (c - xs[j])
            pnc.append(v)
        data["pnc"] = pnc
        return data

    def _connection_row(self, q, r):
        """Coefficients of the fibre 1-form added to dt_r (length = fibre dim)."""
        out = []
        for fac, off, (c, _k) in zip(self.factors, self._fibre_offsets,
                                     self.spectrum.constants):
            qw = q[off:off + fac.dim]
            dc = fac.dc_f(qw)
            coef = (-1.0) ** r * c ** (self.ell - r)
            out.extend([coef * x for x in dc])
        return out

    # -- field assembly ----------------------------------------------------

    def _build_fields(self):
        n, ell = self.n, self.ell
        nf = n - 2 * ell  # fibre dimension

        def omega_fn(q):
            d = self._point_data(q)
            out = np.full((n, n), 0.0, dtype=object)
            rows = [self._connection_row(q, r) for r in range(1, ell + 1)]
            for j in range(ell):
                for r in range(1, ell + 1):
                    sr = d["hats"][j][r - 1]
                    out[j, ell + r - 1] = out[j, ell + r - 1] + sr
                    out[ell + r - 1, j] = out[ell + r - 1, j] - sr
                    for c in range(nf):
                        out[j, 2 * ell + c] = out[j, 2 * ell + c] + sr * rows[r - 1][c]
                        out[2 * ell + c, j] = out[2 * ell + c, j] - sr * rows[r - 1][c]
            for fac, off, pv in zip(self.factors, self._fibre_offsets, d["pnc"]):
                om = fac.omega(q[off:off + fac.dim])
                for a in range(fac.dim):
                    for b in range(fac.dim):
                        out[off + a, off + b] = out[off + a, off + b] + pv * om[a, b]
            return out

        def phi_fn(q):
            d = self._point_data(q)
            out = np.full((n, n), 0.0, dtype=object)
            rows = [self._connection_row(q, r) for r in range(1, ell + 1)]
            for j in range(ell):
                for r in range(1, ell + 1):
                    sr = d["xs"][j] * d["hats"][j][r - 1]
                    out[j, ell + r - 1] = out[j, ell + r - 1] + sr
                    out[ell + r - 1, j] = out[ell + r - 1, j] - sr
                    for c in range(nf):
                        out[j, 2 * ell + c] = out[j, 2 * ell + c] + sr * rows[r - 1][c]
                        out[2 * ell + c, j] = out[2 * ell + c, j] - sr * rows[r - 1][c]
            for fac, off, pv, (cval, _k) in zip(self.factors, self._fibre_offsets,
                                                d["pnc"], self.spectrum.constants):
                om = fac.omega(q[off:off + fac.dim])
                for a in range(fac.dim):
                    for b in range(fac.dim):
                        out[off + a, off + b] = out[off + a, off + b] + cval * pv * om[a, b]
            return out

        def g_fn(q):
            d = self._point_data(q)
            out = np.full((n, n), 0.0, dtype=object)
            rows = [self._connection_row(q, r) for r in range(1, ell + 1)]
            for j in range(ell):
                out[j, j] = d["pprime"][j] / d["F"][j]
            # u_j = sum_r sigma_{r-1}(hat j) theta_r; theta_r = dt_r + rows[r-1]
            for j in range(ell):
                w = d["F"][j] / d["pprime"][j]
                cov = [d["hats"][j][r - 1] for r in range(1, ell + 1)]
                ext = cov + [sum(cov[r] * rows[r][c] for r in range(ell))
                             for c in range(nf)]
                for a in range(ell + nf):
                    for b in range(ell + nf):
                        out[ell + a, ell + b] = out[ell + a, ell + b] + w * ext[a] * ext[b]
            for fac, off, pv in zip(self.factors, self._fibre_offsets, d["pnc"]):
                gm = fac.g(q[off:off + fac.dim])
                for a in range(fac.dim):
                    for b in range(fac.dim):
                        out[off + a, off + b] = out[off + a, off + b] + pv * gm[a, b]
            return out

        def J_fn(q):
            d = self._point_data(q)
            rows = [self._connection_row(q, r) for r in range(1, ell + 1)]
            # B: action on the adapted coframe (dxi_j ; theta_r ; dw^c)
            B = [[0.0] * n for _ in range(n)]
            for j in range(ell):
                w = d["F"][j] / d["pprime"][j]
                for r in range(1, ell + 1):
                    B[j][ell + r - 1] = w * d["hats"][j][r - 1]
            for r in range(1, ell + 1):
                for j in range(ell):
                    B[ell + r - 1][j] = ((-1.0) ** r * d["pc"][j] / d["F"][j]
                                         * d["xs"][j] ** (ell - r))
            for fac, off in zip(self.factors, self._fibre_offsets):
                for a in range(fac.dim):
                    for b in range(fac.dim):
                        B[off + a][off + b] = -fac.J0[a, b]
            # coframe change C: theta_r row carries the connection coefficients
            C = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
            Cinv = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
            for r in range(ell):
                for c in range(nf):
                    C[ell + r][2 * ell + c] = rows[r][c]
                    Cinv[ell + r][2 * ell + c] = -rows[r][c]
            M = _matmul_obj(Cinv, _matmul_obj(B, C))
            out = np.empty((n, n), dtype=object)
            for i in range(n):
                for j in range(n):
                    out[i, j] = -M[i][j]
            return out

        dom = self.domain
        self.g = MetricField(g_fn, n, dom, name=self.name + ".g")
        self.J = EndoField(J_fn, n, dom, name=self.name + ".J")
        self.omega = TwoFormField(omega_fn, n, dom, name=self.name + ".omega")
        self.phi = TwoFormField(phi_fn, n, dom, name=self.name + ".phi")

        def sigma_trace_fn(q):
            return _esym_all(q[:ell])[1] + self.constant_trace if ell else self.constant_trace

        self.sigma_trace = ScalarField(sigma_trace_fn, n, dom,
                                       name=self.name + ".sigma")

        def scal_fn(q):
            d = self._point_data(q)
            s = 0.0
            for fac, pv in zip(self.factors, d["pnc"]):
                s = s + fac.scal / pv
            for j in range(ell):
                F2 = self.profiles[j].eval_and_derivatives(d["xs"][j], 2)[2]
                s = s - F2 / (d["deltas"][j] * d["pc"][j])
            return s

        self.scal_formula = ScalarField(scal_fn, n, dom, name=self.name + ".scal")

        mids = [0.5 * (a + b) for a, b in self.spectrum.intervals]
        self._antideriv_cache = {}
        self._mids = mids

    # -- momenta and killing data -----------------------------------------

    def momentum(self, r: int) -> ScalarField:
        """sigma_r of the momentum coordinates as a scalar field (1 <= r <= ell)."""
        if not 1 <= r <= self.ell:
            raise ValueError("momentum index out of range")

        def fn(q, r=r):
            return _esym_all(q[:self.ell])[r]

        return ScalarField(fn, self.n, self.domain, name=f"{self.name}.sigma_{r}")

    def torus_vector(self, r: int) -> ChartField:
        """The r-th angle coordinate vector field (1 <= r <= ell)."""
        if not 1 <= r <= self.ell:
            raise ValueError("angle index out of range")

        def fn(q, r=r):
            out = np.full(self.n, 0.0, dtype=object)
            out[self.ell + r - 1] = 1.0
            return out

        return ChartField(fn, self.n, (self.n,), self.domain,
                          name=f"{self.name}.K_{r}")

    def momentum_poly_at(self, q) -> Polynomial:
        """The degree-m polynomial prod_const (t-c)^mult * prod_j (t-xi_j) at q."""
        xs = [float(x) for x in q[:self.ell]]
        return self.p_c * Polynomial.from_roots(xs, mode=FLOAT)

    # -- closed-form Laplacian on momentum functions -----------------------

    def laplacian_xi(self, fn: Callable, q) -> float:
        """Laplacian (positive convention) of a function of the momenta only."""
        xs = variables([float(x) for x in q[:self.ell]], 2)
        val = fn(xs)
        out = 0.0
        d = self._point_data([jet_value(x) for x in xs] + list(q[self.ell:]))
        for j in range(self.ell):
            F0, F1 = self.profiles[j].eval_and_derivatives(d["xs"][j], 1)[:2]
            fj = val.g[j] if isinstance(val, Jet) else 0.0
            fjj = val.h[j][j] if isinstance(val, Jet) and val.h is not None else 0.0
            out -= (F1 * fj + F0 * fjj) / (d["deltas"][j] * d["pc"][j])
        return out

    def delta_sigma(self, q):
        """Closed-form Laplacian of the momentum trace (jet-capable in q)."""
        d = self._point_data(q)
        out = 0.0
        for j in range(self.ell):
            F1 = self.profiles[j].eval_and_derivatives(d["xs"][j], 1)[1]
            out = out - F1 / (d["deltas"][j] * d["pc"][j])
        return out

    def tau_field(self, s: float) -> ScalarField:
        """sigma/m - (Laplacian sigma)/(2s) for a constant normalized scalar s."""

        def fn(q):
            tr = (_esym_all(q[:self.ell])[1] if self.ell else 0.0) + self.constant_trace
            return tr / self.m - self.delta_sigma(q) / (2.0 * s)

        return ScalarField(fn, self.n, self.domain, name=self.name + ".tau")

    # -- potentials --------------------------------------------------------

    def _antideriv(self, j: int, extra_num: Polynomial) -> Antideriv:
        key = (j, extra_num.coeffs)
        if key not in self._antideriv_cache:
            self._antideriv_cache[key] = Antideriv(self.p_c * extra_num,
                                                   self.profiles[j], self._mids[j])
        return self._antideriv_cache[key]

    def _base_sum(self, q, power: int):
        """sum over factors of c^power * f_c evaluated on the fibre block."""
        out = 0.0
        for fac, off, (c, _k) in zip(self.factors, self._fibre_offsets,
                                     self.spectrum.constants):
            out = out + c ** power * fac.f(q[off:off + fac.dim])
        return out

    def potential_kahler(self) -> ScalarField:
        """Potential whose dd^c is the symplectic form."""
        tpow = Polynomial([1.0] + [0.0] * self.ell, FLOAT)  # t^ell

        def fn(q):
            out = self._base_sum(q, self.ell)
            for j in range(self.ell):
                out = out + self._antideriv(j, tpow)(q[j])
            return out

        return ScalarField(fn, self.n, self.domain, name=self.name + ".H")

    def potential_phi(self) -> ScalarField:
        """Potential whose dd^c is (momentum 2-form) + sigma_1 * omega."""
        tpow = Polynomial([1.0] + [0.0] * (self.ell + 1), FLOAT)

        def fn(q):
            out = self._base_sum(q, self.ell + 1)
            for j in range(self.ell):
                out = out + self._antideriv(j, tpow)(q[j])
            return out

        return ScalarField(fn, self.n, self.domain, name=self.name + ".Phi")

    def pluriharmonic(self, r: int) -> ScalarField:
        """The r-th pluriharmonic potential (1 <= r <= ell): dd^c of it vanishes."""
        if not 1 <= r <= self.ell:
            raise ValueError("index out of range")
        sgn = (-1.0) ** r
        tpow = Polynomial([sgn] + [0.0] * (self.ell - r), FLOAT)

        def fn(q):
            out = -sgn * self._base_sum(q, self.ell - r)
            for j in range(self.ell):
                out = out - self._antideriv(j, tpow)(q[j])
            return out

        return ScalarField(fn, self.n, self.domain, name=f"{self.name}.u_{r}")

    def potential_ricci(self) -> ScalarField:
        """Potential whose dd^c is the Ricci form."""

        def fn(q):
            out = 0.0
            for fac, off in zip(self.factors, self._fibre_offsets):
                out = out + fac.kappa(q[off:off + fac.dim])
            for j in range(self.ell):
                Fv = self.profiles[j].eval_and_derivatives(q[j], 0)[0]
                out = out - 0.5 * jlog(abs(Fv))
            return out

        return ScalarField(fn, self.n, self.domain, name=self.name + ".kappa")

    # -- sampling and mutation --------------------------------------------

    def sample(self, count: int, rng, margin: float = 0.06,
               min_sep: float = 1e-3) -> List[np.ndarray]:
        """Rejection-sample chart points away from edges and momentum collisions."""
        pts = []
        lo = np.array([a for a, _ in self.domain.intervals])
        hi = np.array([b for _, b in self.domain.intervals])
        span = hi - lo
        tries = 0
        while len(pts) < count:
            tries += 1
            if tries > 200 * count + 50:
                raise AnsatzError("rejection sampling failed; domain too tight")
            u = rng.random(self.n)
            p = lo + span * (margin + (1 - 2 * margin) * u)
            xs = p[:self.ell]
            if any(abs(xs[i] - xs[j]) < min_sep
                   for i in range(self.ell) for j in range(i + 1, self.ell)):
                continue
            pts.append(p)
        return pts

    def perturbed(self) -> "MetricModel":
        """Copy with the first metric component scaled by 1.01 (breaks the jets)."""
        import copy
        twin = copy.copy(self)
        base = self.g.fn

        def broken(q):
            out = base(q)
            out = out.copy()
            out[0, 0] = out[0, 0] * 1.01
            return out

        twin.g = MetricField(broken, self.n, self.domain,
                             name=self.name + ".g/perturbed")
        twin.name = self.name + "/perturbed"
        return twin


# ---------------------------------------------------------------------------
# validation + public builders
# ---------------------------------------------------------------------------


def _validate(spectrum: SpectrumSpec, profiles: List[Polynomial],
              factors: List[BaseFactor], samples: int = 33):
    signs = spectrum.interval_signs()
    for j, ((a, b), F) in enumerate(zip(spectrum.intervals, profiles)):
        want = signs[j]
        for t in np.linspace(a, b, samples):
            v = F.eval_and_derivatives(float(t), 0)[0]
            if v == 0 or (1 if v > 0 else -1) != want:
                raise PositivityViolation(
                    f"profile {j + 1} must have sign {want:+d} on "
                    f"({a}, {b}); found {v:.6g} at t={t:.6g}")
    if len(factors) != len(spectrum.constants):
        raise AnsatzError("need exactly one base factor per constant value")
    for fac, (c, k) in zip(factors, spectrum.constants):
        if fac.dim != 2 * k:
            raise AnsatzError(
                f"factor at {c} must have complex dimension {k}, got {fac.m_f}")
        want = spectrum.constant_coefficient_sign(c)
        if fac.sign != want:
            raise SignMismatch(
                f"factor at momentum value {c} must be "
                f"{'positive' if want > 0 else 'negative'} definite "
                f"(coefficient sign {want:+d}); its scale is {fac.scale}")


def build_general(spectrum: SpectrumSpec, profiles, factors=(),
                  name: str = "model", validate: bool = True,
                  angle_halfwidth: float = 0.5) -> MetricModel:
    """Assemble the full model from a spectrum, profiles and base factors."""
    if isinstance(profiles, Polynomial):
        profiles = [profiles] * spectrum.ell
    profiles = [f.to_float() for f in profiles]
    if len(profiles) != spectrum.ell:
        raise AnsatzError("need one profile per momentum interval")
    factors = list(factors)
    if validate:
        _validate(spectrum, profiles, factors)
    return MetricModel(spectrum, profiles, factors, name=name,
                       angle_halfwidth=angle_halfwidth)


def build_orthotoric(intervals, profiles, name: str = "orthotoric",
                     validate: bool = True) -> MetricModel:
    """Purely toric case: no constant spectrum, ell = m."""
    return build_general(SpectrumSpec(intervals), profiles, (),
                         name=name, validate=validate)


def build_calabi(profile: Polynomial, interval, m: int, base_k: float,
                 base_scale: float, name: str = "calabi",
                 halfwidth: float = 0.45) -> MetricModel:
    """One momentum coordinate over a space-form base of dimension m - 1.

    Metric: z * g_base + z^(m-1)/F dz^2 + F/z^(m-1) theta^2 on z in the
    interval (z of one sign, away from 0).  Realized by attaching the constant
    value 0 with multiplicity m - 1; the factor definiteness flips against the
    sign of -z.
    """
    a, b = float(interval[0]), float(interval[1])
    if a <= 0 <= b:
        raise AnsatzError("interval must avoid z = 0")
    if m < 2:
        raise AnsatzError("need m >= 2 for a nontrivial base")
    zsign = 1 if a > 0 else -1
    spec = SpectrumSpec([(a, b)], [(0.0, m - 1)])
    # negating only the scale negates (g, omega, f) of the factor wholesale,
    # which is what the momentum coefficient -z < 0 calls for when z > 0
    fac = space_form_factor(base_k, base_scale * (-zsign), m - 1, halfwidth)
    model = build_general(spec, [profile], [fac], name=name)
    model.calabi_base = (base_k, base_scale)
    return model


def conformal_reflection(profile: Polynomial, m: int) -> Polynomial:
    """z -> z^(2m) * profile(1/z), as a polynomial (degree <= 2m required)."""
    p = profile.to_float()
    if p.degree > 2 * m:
        raise AnsatzError("profile degree exceeds 2m")
    asc = list(p.coeffs[::-1]) + [0.0] * (2 * m + 1 - len(p.coeffs))
    return Polynomial(asc, FLOAT)


# ---------------------------------------------------------------------------
# toric charts from a dual potential
# ---------------------------------------------------------------------------


class ToricModel:
    """Torus-invariant chart (momenta sigma_r, angles t_r) from a dual potential.

    g = Hess(G) on the momenta plus its inverse on the angles; omega is the
    standard pairing.  If ``potential`` only supports float input, use the
    ``fd`` backend on the fields.
    """

    def __init__(self, potential: Callable, sigma_box: Box, name: str = "toric",
                 angle_halfwidth: float = 0.5, jet_capable: bool = True):
        self.m = sigma_box.n
        self.n = 2 * self.m
        self.name = name
        self.jet_capable = jet_capable
        self.potential_fn = potential
        iv = list(sigma_box.intervals) + [(-angle_halfwidth, angle_halfwidth)] * self.m
        self.domain = Box(iv)
        m = self.m

        if jet_capable:
            def hess(q):
                # a fresh jet layer over the momenta; nests if q already carries jets
                seeds = variables(list(q[:m]), 2)
                out = potential(seeds)
                return [[out.h[i][j] for j in range(m)] for i in range(m)]
        else:
            def hess(q):
                # float-only potential: central stencils; rejects jet input
                s = [float(x) for x in q[:m]]
                h = fd_hessian(lambda w: potential(list(w)), s)
                return [[float(h[i][j]) for j in range(m)] for i in range(m)]

        def g_fn(q):
            H = hess(q)
            Hi = invert_matrix_generic(H)
            out = np.full((self.n, self.n), 0.0, dtype=object)
            for i in range(m):
                for j in range(m):
                    out[i, j] = H[i][j]
                    out[m + i, m + j] = Hi[i][j]
            return out

        def J_fn(q):
            H = hess(q)
            Hi = invert_matrix_generic(H)
            out = np.full((self.n, self.n), 0.0, dtype=object)
            for r in range(m):
                for s in range(m):
                    out[r, m + s] = -Hi[r][s]
                    out[m + r, s] = H[r][s]
            return out

        def omega_fn(q):
            out = np.full((self.n, self.n), 0.0, dtype=object)
            one = 1.0 + 0.0 * q[0]
            for r in range(m):
                out[r, m + r] = one
                out[m + r, r] = -one
            return out

        self.g = MetricField(g_fn, self.n, self.domain, name=name + ".g")
        self.J = EndoField(J_fn, self.n, self.domain, name=name + ".J")
        self.omega = TwoFormField(omega_fn, self.n, self.domain, name=name + ".omega")
        self.potential = ScalarField(lambda q: potential(q[:m]), self.n, self.domain,
                                     name=name + ".G")

    def moment_derivative(self, r: int) -> ScalarField:
        """dG/dsigma_r as a scalar field on the chart (1-based r)."""

        def fn(q, r=r - 1):
            seeds = variables(list(q[:self.m]), 1)
            return self.potential_fn(seeds).g[r]

        return ScalarField(fn, self.n, self.domain, name=f"{self.name}.u_{r}")


def build_toric_from_potential(potential: Callable, sigma_box,
                               name: str = "toric",
                               jet_capable: bool = True) -> ToricModel:
    box = sigma_box if isinstance(sigma_box, Box) else Box(sigma_box)
    return ToricModel(potential, box, name=name, jet_capable=jet_capable)


def orthotoric_dual_potential(model: MetricModel) -> Callable:
    """Dual potential G(sigma) of a purely toric model, float-only.

    Momenta are converted back to roots numerically, so this function cannot
    take jets; pair it with the ``fd`` backend.
    """
    if model.factors:
        raise AnsatzError("dual potential shortcut needs a factor-free model")
    ell = model.ell
    order = np.argsort(model._mids)

    def roots_from_sigma(sig):
        coeffs = [1.0]
        for r in range(1, ell + 1):
            coeffs.append((-1.0) ** r * float(sig[r - 1]))
        rts = np.roots(coeffs)
        if np.max(np.abs(rts.imag)) > 1e-8:
            raise AnsatzError(f"momenta {sig} do not come from real roots")
        rts = np.sort(rts.real)
        # undo the sort-by-value into the interval order of the model
        out = np.empty(ell)
        for pos, j in enumerate(order):
            out[j] = rts[pos]
        return out

    def G(sig):
        xs = roots_from_sigma(sig)
        num = Polynomial.from_roots(list(xs), mode=FLOAT)
        total = 0.0
        for j in range(ell):
            F = model.profiles[j]
            val, _ = quad(lambda t: num(t) / F(t), model._mids[j], xs[j],
                          epsabs=1e-12, epsrel=1e-12, limit=200)
            total -= val
        return total

    G.roots_from_sigma = roots_from_sigma
    return G
