"""Model builders: spectra, base factors, the metric ansatz and its symmetries."""

import numpy as np
import pytest

from orthotoric import (
    FLOAT,
    AnsatzError,
    DomainTooLarge,
    Polynomial,
    PositivityViolation,
    SignMismatch,
    SpectrumSpec,
    build_calabi,
    build_general,
    build_orthotoric,
    conformal_reflection,
    space_form_factor,
)


class TestSpectrumSpec:
    def test_counts(self):
        s = SpectrumSpec([(0.0, 1.0)], [(2.0, 1), (-1.0, 2)])
        assert s.ell == 1
        assert s.m == 4

    def test_root_poly(self):
        s = SpectrumSpec([(0.0, 1.0)], [(2.0, 2)])
        assert np.allclose(s.root_poly().coeffs, (1.0, -4.0, 4.0))
        assert SpectrumSpec([(0.0, 1.0)]).root_poly().coeffs == (1.0,)

    def test_interval_ordering_signs(self):
        # three intervals: the sign pattern of prod_{k != j}(xi_j - xi_k)
        s = SpectrumSpec([(0.0, 1.0), (2.0, 3.0), (4.0, 5.0)])
        assert s.interval_signs() == [1, -1, 1]

    def test_constant_roots_flip_signs(self):
        # an odd-multiplicity constant above the interval flips the sign there
        s = SpectrumSpec([(0.0, 1.0)], [(2.0, 1)])
        assert s.interval_signs() == [-1]
        assert SpectrumSpec([(0.0, 1.0)], [(2.0, 2)]).interval_signs() == [1]
        assert SpectrumSpec([(0.0, 1.0)], [(-2.0, 1)]).interval_signs() == [1]

    def test_constant_coefficient_sign(self):
        s = SpectrumSpec([(0.0, 1.0), (2.0, 3.0)])
        assert s.constant_coefficient_sign(4.0) == 1
        assert s.constant_coefficient_sign(1.5) == -1
        assert s.constant_coefficient_sign(-1.0) == 1

    @pytest.mark.parametrize(
        "intervals,constants,msg",
        [
            ([], (), "at least one"),
            ([(1.0, 1.0)], (), "empty"),
            ([(0.0, 2.0), (1.0, 3.0)], (), "disjoint"),
            ([(0.0, 1.0)], [(0.5, 1)], "may not meet"),
            ([(0.0, 1.0)], [(2.0, 0)], "multiplicity"),
        ],
    )
    def test_rejects_bad_data(self, intervals, constants, msg):
        with pytest.raises(AnsatzError, match=msg):
            SpectrumSpec(intervals, constants)


class TestSpaceFormFactor:
    def test_curvature_metadata(self):
        fac = space_form_factor(k=1.0, scale=0.5, m_f=2)
        assert fac.dim == 4
        assert fac.scal == pytest.approx(2 * 3 * 1.0 / 0.5)
        assert fac.einstein_constant == pytest.approx(3 * 1.0 / (2 * 0.5))
        assert fac.sign == 1
        assert space_form_factor(k=1.0, scale=-0.5, m_f=2).sign == -1

    def test_negating_scale_negates_tensors(self):
        plus = space_form_factor(k=0.7, scale=1.0, m_f=1)
        minus = space_form_factor(k=0.7, scale=-1.0, m_f=1)
        q = [0.1, -0.2]
        assert np.allclose(minus.g(q), -np.asarray(plus.g(q), dtype=float))
        assert np.allclose(minus.omega(q), -np.asarray(plus.omega(q), dtype=float))
        assert minus.f(q) == pytest.approx(-plus.f(q))

    def test_zero_scale_rejected(self):
        with pytest.raises(AnsatzError):
            space_form_factor(k=1.0, scale=0.0, m_f=1)

    def test_hyperbolic_disc_bound(self):
        with pytest.raises(DomainTooLarge):
            space_form_factor(k=-9.0, scale=1.0, m_f=1, halfwidth=0.45)

    def test_factor_is_einstein(self):
        """dd^c of the potential reproduces omega, and the curvature matches."""
        from orthotoric.geom import MetricField, curvature_bundle

        fac = space_form_factor(k=0.8, scale=1.0, m_f=1)
        gf = MetricField(lambda q: fac.g(q), 2)
        b = curvature_bundle(gf, [0.13, -0.2])
        assert b.scal == pytest.approx(fac.scal, rel=1e-9)
        assert np.allclose(b.ricci, fac.einstein_constant * b.g, atol=1e-9)


class TestOrthotoricAssembly:
    def test_metric_matches_closed_form(self, chsc_m2):
        """Order-two case written out by hand, block by block."""
        F = chsc_m2.profiles[0]
        q = [0.45, 1.6, 0.12, -0.07]
        x1, x2 = q[0], q[1]
        pp = [x1 - x2, x2 - x1]
        Fv = [F(x1), F(x2)]
        expect = np.zeros((4, 4))
        expect[0, 0] = pp[0] / Fv[0]
        expect[1, 1] = pp[1] / Fv[1]
        vecs = [np.array([1.0, x2]), np.array([1.0, x1])]
        for j in range(2):
            expect[2:, 2:] += (Fv[j] / pp[j]) * np.outer(vecs[j], vecs[j])
        assert np.allclose(chsc_m2.g.value(q), expect, atol=1e-13)

    def test_symplectic_form_matches_closed_form(self, chsc_m2):
        q = [0.45, 1.6, 0.12, -0.07]
        x1, x2 = q[0], q[1]
        expect = np.zeros((4, 4))
        expect[0, 2], expect[0, 3] = 1.0, x2
        expect[1, 2], expect[1, 3] = 1.0, x1
        expect -= expect.T
        assert np.allclose(chsc_m2.omega.value(q), expect)

    def test_compatibility_at_a_point(self, m32):
        """J^2 = -1, g J-invariant, omega = g(J., .), phi J-invariant."""
        q = m32.sample(1, np.random.default_rng(0))[0]
        g = m32.g.value(q)
        J = m32.J.value(q)
        om = m32.omega.value(q)
        phi = m32.phi.value(q)
        assert np.allclose(J @ J, -np.eye(m32.n), atol=1e-12)
        assert np.allclose(J.T @ g @ J, g, atol=1e-12)
        assert np.allclose((g @ J).T, om, atol=1e-12)
        assert np.allclose(J.T @ phi @ J, phi, atol=1e-12)

    def test_metric_positive_definite_on_samples(self, m31):
        rng = np.random.default_rng(12)
        for q in m31.sample(5, rng):
            evs = np.linalg.eigvalsh(m31.g.value(q))
            assert evs.min() > 0

    def test_momentum_trace(self, chsc_m2):
        """<phi, omega> equals the momentum sum, including constant values."""
        q = chsc_m2.sample(1, np.random.default_rng(1))[0]
        assert chsc_m2.sigma_trace([*q]) == pytest.approx(q[0] + q[1])

    def test_momentum_poly_interpolates(self, m31):
        q = m31.sample(1, np.random.default_rng(2))[0]
        p = m31.momentum_poly_at(q)
        # monic of degree m with the momenta as roots
        assert p.degree == m31.m
        assert p(q[0]) == pytest.approx(0.0, abs=1e-12)
        assert p(1.0) == pytest.approx(0.0, abs=1e-12)  # constant value root
        assert p(-0.5) == pytest.approx(0.0, abs=1e-12)

    def test_sample_stays_in_domain(self, m32):
        rng = np.random.default_rng(3)
        for q in m32.sample(40, rng):
            assert m32.domain.contains(q)
        a, b = m32.spectrum.intervals[0]
        assert all(a < q[0] < b for q in m32.sample(40, rng))

    def test_sample_is_reproducible(self, chsc_m2):
        a = chsc_m2.sample(4, np.random.default_rng(9))
        b = chsc_m2.sample(4, np.random.default_rng(9))
        assert np.allclose(a, b)

    def test_perturbed_twin_differs_only_in_g(self, chsc_m2):
        twin = chsc_m2.perturbed()
        q = chsc_m2.sample(1, np.random.default_rng(4))[0]
        g0 = chsc_m2.g.value(q)
        g1 = twin.g.value(q)
        assert g1[0, 0] == pytest.approx(1.01 * g0[0, 0])
        g1[0, 0] = g0[0, 0]
        assert np.allclose(g0, g1)
        assert np.allclose(twin.omega.value(q), chsc_m2.omega.value(q))


class TestBuilderValidation:
    def test_wrong_profile_sign_rejected(self):
        with pytest.raises(PositivityViolation, match="sign"):
            build_orthotoric([(0.0, 1.0)], [Polynomial([-1.0, 0.0, -0.5], FLOAT)])

    def test_second_interval_needs_negative_profile(self):
        good = Polynomial([1.0, -2.0, 0.9], FLOAT)   # positive on both intervals
        with pytest.raises(PositivityViolation):
            build_orthotoric([(0.0, 0.4), (0.6, 1.0)], [good, good])

    def test_factor_count_must_match(self):
        spec = SpectrumSpec([(0.0, 1.0)], [(2.0, 1)])
        with pytest.raises(AnsatzError, match="factor per constant"):
            build_general(spec, [Polynomial([-1.0, -1.0], FLOAT)], factors=())

    def test_factor_dimension_must_match(self):
        spec = SpectrumSpec([(0.0, 1.0)], [(2.0, 2)])
        with pytest.raises(AnsatzError, match="dimension"):
            build_general(
                spec,
                [Polynomial([1.0, 1.0], FLOAT)],
                factors=[space_form_factor(k=1.0, scale=1.0, m_f=1)],
            )

    def test_factor_sign_must_match(self):
        # constant below the interval: its momentum coefficient is negative,
        # so the factor must be negative definite (scale < 0)
        spec = SpectrumSpec([(0.0, 1.0)], [(-1.0, 1)])
        with pytest.raises(SignMismatch, match="negative definite"):
            build_general(
                spec,
                [Polynomial([1.0, 1.0], FLOAT)],
                factors=[space_form_factor(k=1.0, scale=1.0, m_f=1)],
            )

    def test_profile_count_must_match(self):
        with pytest.raises(AnsatzError, match="one profile"):
            build_general(SpectrumSpec([(0.0, 1.0), (2.0, 3.0)]),
                          [Polynomial([1.0, 0.0], FLOAT)])

    def test_shared_profile_broadcasts(self):
        model = build_general(
            SpectrumSpec([(0.2, 0.8), (1.2, 1.9)]),
            Polynomial([-1.0, 3.1, -2.3, 0.2], FLOAT),
        )
        assert len(model.profiles) == 2


class TestCalabi:
    def test_interval_must_avoid_zero(self):
        with pytest.raises(AnsatzError, match="avoid z = 0"):
            build_calabi(Polynomial([1.0, 0.0], FLOAT), (-0.5, 0.5), 2, 1.0, 1.0)

    def test_equals_manual_general_build(self, calabi_m2):
        spec = SpectrumSpec([(0.5, 1.5)], [(0.0, 1)])
        manual = build_general(
            spec,
            [Polynomial([1.0, -1.0, 1.0, 0.0], FLOAT)],
            factors=[space_form_factor(k=1.0, scale=-1.0, m_f=1)],
        )
        q = [0.8, 0.1, 0.05, -0.1]
        assert np.allclose(calabi_m2.g.value(q), manual.g.value(q))
        assert np.allclose(calabi_m2.omega.value(q), manual.omega.value(q))

    def test_fibre_term_is_z_times_base(self, calabi_m2):
        """At the fibre origin (connection form zero) the w-block is z * g_base."""
        base = space_form_factor(k=1.0, scale=1.0, m_f=1)
        q = [0.8, 0.1, 0.0, 0.0]
        g = calabi_m2.g.value(q)
        gb = np.asarray(base.g(q[2:]), dtype=float)
        assert np.allclose(g[2:, 2:], q[0] * gb, atol=1e-13)


class TestConformalReflection:
    def test_coefficient_reversal(self):
        F = Polynomial([2.0, 0.0, -1.0, 3.0], FLOAT)  # degree 3, m = 2
        Ft = conformal_reflection(F, 2)
        # z^4 F(1/z) reverses coefficients into degree 4 - 3 + ... layout
        assert np.allclose(Ft.coeffs, (3.0, -1.0, 0.0, 2.0, 0.0))

    def test_involution(self):
        F = Polynomial([0.5, 1.0, 0.3, 0.1, 0.0], FLOAT)
        assert conformal_reflection(conformal_reflection(F, 2), 2) == F

    def test_degree_bound(self):
        with pytest.raises(AnsatzError):
            conformal_reflection(Polynomial([1.0] * 6, FLOAT), 2)  # degree 5 > 2m

    def test_pullback_is_conformal(self):
        """Inverting the momentum coordinate relates the two metrics by z^-2."""
        F = Polynomial([0.5, 1.0, 0.3, 0.1, 0.0], FLOAT)
        cal = build_calabi(F, (0.4, 1.2), m=2, base_k=-0.3, base_scale=1.0)
        dual = build_calabi(conformal_reflection(F, 2), (1 / 1.2, 1 / 0.4),
                            m=2, base_k=-0.3, base_scale=1.0)
        rng = np.random.default_rng(2)
        for x in cal.sample(5, rng):
            z = x[0]
            y = [1.0 / z, x[1], x[2], x[3]]
            D = np.diag([-1.0 / z ** 2, 1.0, 1.0, 1.0])
            lhs = D.T @ dual.g.value(y) @ D
            assert np.allclose(lhs, cal.g.value(x) / z ** 2, atol=1e-12)
