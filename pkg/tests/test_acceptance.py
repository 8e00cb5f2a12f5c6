"""End-to-end acceptance: eleven named criteria, one test (and one -v line) each.

Each test prints a `[criterion NN]` summary with the measured worst residuals;
run with -s (or read failure output) to see the numbers.  Tolerances are stated
inline and asserted as hard bounds, never loosened at runtime.
"""

import random
import time

import numpy as np
import pytest

from orthotoric import (
    ClassSpec,
    SpectrumSpec,
    build_class_model,
    build_toric_from_potential,
    check_bf,
    check_wbf,
    conf_einstein,
    conformal_killing_suite,
    curvature_bundle,
    hamiltonian_suite,
    identity_suite,
    mutation_suite,
    orthotoric_compatibility,
    orthotoric_dual_potential,
    pfaffian,
    random_variable_set,
    space_form_factor,
    symmetry_suite,
)

FIVE_SPECTRA = ["sphere_m1", "general21", "chsc_m2", "m31", "m32"]


def sub(report, name):
    for r in report.details:
        if r.name == name:
            return r
    raise KeyError(f"{report.name} has no sub-report {name!r}")


def announce(num, label, detail):
    print(f"[criterion {num:02d}] {label}: PASS ({detail})")


@pytest.fixture(scope="module")
def five_models(request):
    return {name: request.getfixturevalue(name) for name in FIVE_SPECTRA}


def test_criterion_01_exact_identities_m1_to_m6(capsys):
    """50 random rational variable sets per size, m = 1..6, all exact, < 10 s."""
    t0 = time.time()
    checks = 0
    for m in range(1, 7):
        for trial in range(50):
            rng = random.Random(910_000 + 1_000 * m + trial)
            rep = identity_suite(random_variable_set(m, rng), max_k=3)
            assert rep.passed, f"m={m} trial={trial}"
            checks += rep.checks
    elapsed = time.time() - t0
    assert elapsed < 10.0, f"identity sweep took {elapsed:.1f}s"
    with capsys.disabled():
        announce(1, "exact identities m=1..6 x 50 rational sets",
                 f"{checks} checks in {elapsed:.1f}s")


def test_criterion_02_first_order_system_on_five_spectra(five_models, capsys):
    """(m, ell) in {(1,1),(2,1),(2,2),(3,1),(3,2)}: the defining first-order
    equation < 1e-5, Killing residuals < 1e-6, momentum Poisson brackets < 1e-7,
    root-gradient orthogonality < 1e-8, 20 samples each, < 60 s total."""
    t0 = time.time()
    shapes = set()
    worst = {"ham": 0.0, "kill": 0.0, "poisson": 0.0, "orth": 0.0}
    for name, model in five_models.items():
        shapes.add((model.m, model.ell))
        ham = hamiltonian_suite(model, n_samples=20)
        sym = symmetry_suite(model, n_samples=20)
        r_ham = sub(ham, "covariant_derivative_equation").residual_max
        r_kill = sub(sym, "generators_killing").residual_max
        r_poi = sub(sym, "momenta_poisson_commute").residual_max
        r_orth = sub(ham, "root_gradients_orthogonal").residual_max
        assert r_ham < 1e-5, f"{name}: first-order equation {r_ham:.3e}"
        assert r_kill < 1e-6, f"{name}: Killing {r_kill:.3e}"
        assert r_poi < 1e-7, f"{name}: Poisson {r_poi:.3e}"
        assert r_orth < 1e-8, f"{name}: orthogonality {r_orth:.3e}"
        worst["ham"] = max(worst["ham"], r_ham)
        worst["kill"] = max(worst["kill"], r_kill)
        worst["poisson"] = max(worst["poisson"], r_poi)
        worst["orth"] = max(worst["orth"], r_orth)
    assert shapes == {(1, 1), (2, 1), (2, 2), (3, 1), (3, 2)}
    elapsed = time.time() - t0
    assert elapsed < 60.0, f"five-spectra sweep took {elapsed:.1f}s"
    with capsys.disabled():
        announce(2, "first-order system on five spectra",
                 "worst first-order {ham:.1e}, Killing {kill:.1e}, Poisson "
                 "{poisson:.1e}, orthogonality {orth:.1e}".format(**worst)
                 + f", {elapsed:.1f}s")


def test_criterion_03_momentum_polynomial_from_pfaffians(
        five_models, calabi_m2, orthotoric_m3, bf_m2, capsys):
    """Interpolating (-1)^m pf(phi - t omega) at m+1 nodes recovers the
    momentum polynomial coefficient-wise to 1e-6 on every built model."""
    models = dict(five_models)
    models.update(calabi_m2=calabi_m2, orthotoric_m3=orthotoric_m3, bf_m2=bf_m2)
    worst = 0.0
    for name, model in models.items():
        lo = min(a for a, _ in model.spectrum.intervals) - 1.0
        hi = max(b for _, b in model.spectrum.intervals) + 1.0
        nodes = np.linspace(lo, hi, model.m + 1)
        V = np.vander(nodes, model.m + 1)
        for p in model.sample(5, np.random.default_rng(23)):
            om0 = model.omega.value(p)
            ph0 = model.phi.value(p)
            vals = [(-1.0) ** model.m * pfaffian(ph0 - t * om0, om0)
                    for t in nodes]
            coef = np.linalg.solve(V, np.array(vals))
            target = np.array([float(c) for c in model.momentum_poly_at(p).coeffs])
            diff = np.max(np.abs(coef - target))
            assert diff < 1e-6, f"{name}: coefficient error {diff:.3e}"
            worst = max(worst, diff)
    with capsys.disabled():
        announce(3, "momentum polynomial from pfaffian interpolation",
                 f"{len(models)} models, worst coefficient error {worst:.1e}")


def test_criterion_04_scalar_curvature_formula(five_models, flat_m1, capsys):
    """Closed-form scalar curvature within 1e-4 relative on the five spectra;
    the round-sphere anchor within 1e-6 of 2; the flat anchor below 1e-8."""
    worst = 0.0
    for name, model in five_models.items():
        for p in model.sample(20, np.random.default_rng(31)):
            b = curvature_bundle(model.g, p, model.J)
            rel = abs(b.scal - model.scal_formula.value(p)) / max(1.0, abs(b.scal))
            assert rel < 1e-4, f"{name}: {rel:.3e}"
            worst = max(worst, rel)
    sphere = five_models["sphere_m1"]
    for p in sphere.sample(5, np.random.default_rng(32)):
        assert abs(curvature_bundle(sphere.g, p, sphere.J).scal - 2.0) < 1e-6
    for p in flat_m1.sample(5, np.random.default_rng(33)):
        assert abs(curvature_bundle(flat_m1.g, p, flat_m1.J).scal) < 1e-8
    with capsys.disabled():
        announce(4, "scalar curvature formula + anchors",
                 f"worst relative {worst:.1e}; sphere at 2, flat at 0")


def test_criterion_05_extremal_affine_scalar(capsys):
    """Scalar curvature is affine in the shifted momentum sum (rel 1e-4);
    with vanishing leading quotient coefficient it is constant to 1e-5."""
    spec2 = SpectrumSpec([(0.2, 0.8), (1.2, 1.9)])
    cs = ClassSpec("extremal", spec2, (0.5, -3.0, 4.0))
    model, _ = build_class_model(cs, name="ext_acc")
    a0, a1 = 0.5, -3.0
    worst = 0.0
    for p in model.sample(20, np.random.default_rng(41)):
        scal = curvature_bundle(model.g, p, model.J).scal
        sigma1 = p[0] + p[1]
        rel = abs(scal + a0 * sigma1 + a1) / max(1.0, abs(scal))
        assert rel < 1e-4, f"affine relation: {rel:.3e}"
        worst = max(worst, rel)

    cs0 = ClassSpec("csc", spec2, (0.0, -12.0, 4.0))
    flat_lead, _ = build_class_model(cs0, name="csc_acc")
    scals = [curvature_bundle(flat_lead.g, p, flat_lead.J).scal
             for p in flat_lead.sample(20, np.random.default_rng(42))]
    spread = max(scals) - min(scals)
    assert spread < 1e-5, f"constant-scalar spread {spread:.3e}"
    with capsys.disabled():
        announce(5, "extremal family: affine scalar curvature",
                 f"affine residual {worst:.1e}, constant spread {spread:.1e}")


def test_criterion_06_ricci_parallel_family(capsys):
    """The Ricci form matches its quotient expression (1e-4), the second-order
    transport equation holds (1e-4), and the vanishing-lead sub-case is
    Einstein: trace-free Ricci proportional residual inside tolerance."""
    spec2 = SpectrumSpec([(0.2, 0.8), (1.2, 1.9)])
    cs = ClassSpec("wbf", spec2, (-1.0, 0.4, 0.0, 0.5))
    model, _ = build_class_model(cs, name="wbf_acc")
    rep = check_wbf(model, cs, n_samples=20)
    r_rho = sub(rep, "ricci_form_identity").residual_max
    r_weak = sub(rep, "weak_einstein_equation").residual_max
    assert r_rho < 1e-4, f"Ricci identity {r_rho:.3e}"
    assert r_weak < 1e-4, f"transport equation {r_weak:.3e}"

    spec_ke = SpectrumSpec([(0.2, 0.8)], [(1.0, 1)])
    cs_ke = ClassSpec("ke", spec_ke, (0.0, -2.0, 1.0))
    ke_model, _ = build_class_model(cs_ke, name="ke_acc")
    ke_rep = check_wbf(ke_model, cs_ke, n_samples=20)
    r_prop = sub(ke_rep, "einstein_proportionality").residual_max
    assert ke_rep.passed
    assert r_prop < 1e-4, f"Einstein proportionality {r_prop:.3e}"
    with capsys.disabled():
        announce(6, "Ricci-parallel family + Einstein sub-case",
                 f"Ricci identity {r_rho:.1e}, transport {r_weak:.1e}, "
                 f"Einstein {r_prop:.1e}")


def test_criterion_07_rigid_family_order_two(bf_m2_pair, capsys):
    """m = 2, two intervals: the fourth curvature piece vanishes (1e-4), the
    characteristic coefficients are constant across 10 samples (1e-4) and match
    the building profile coefficient-wise (1e-3)."""
    model, cs = bf_m2_pair
    rep = check_bf(model, cs, n_samples=10)
    r_boch = sub(rep, "bochner_norm").residual_max
    r_const = sub(rep, "characteristic_coefficients_constant").residual_max
    r_match = sub(rep, "characteristic_matches_profile").residual_max
    assert r_boch < 1e-4, f"fourth-piece norm {r_boch:.3e}"
    assert r_const < 1e-4, f"coefficient spread {r_const:.3e}"
    assert r_match < 1e-3, f"profile mismatch {r_match:.3e}"
    with capsys.disabled():
        announce(7, "rigid order-two family",
                 f"fourth piece {r_boch:.1e}, spread {r_const:.1e}, "
                 f"profile match {r_match:.1e}")


def test_criterion_08_conformally_einstein(capsys):
    """Generic (p, q, a+) parameters: the rescaled metric has trace-free Ricci
    below 1e-4 at 20 samples; q = 0 degenerates to directly Einstein."""
    base = space_form_factor(k=1.0, scale=1.0, m_f=1)
    _, rep = conf_einstein(2, 1.0, 0.7, 0.3, 0.0, 1.0, base, (0.5, 1.5),
                           n_samples=20)
    assert rep.name == "conformal_einstein"
    assert rep.residual_max < 1e-4, f"rescaled Ricci {rep.residual_max:.3e}"

    _, rep0 = conf_einstein(2, 1.0, 0.0, 0.3, 0.0, 1.0, base, (0.5, 1.5),
                            n_samples=20)
    assert rep0.name == "einstein_direct"
    assert rep0.passed
    with capsys.disabled():
        announce(8, "conformally Einstein family",
                 f"rescaled residual {rep.residual_max:.1e}, "
                 f"degenerate case {rep0.residual_max:.1e}")


def test_criterion_09_conformal_killing_suite(orthotoric_m3, capsys):
    """The traced-off momentum form on the m = 3 product-free model: every
    structural residual below 1e-5 at 20 samples."""
    rep = conformal_killing_suite(orthotoric_m3, n_samples=20)
    worst = 0.0
    for r in rep.details:
        assert r.residual_max < 1e-5, f"{r.name}: {r.residual_max:.3e}"
        worst = max(worst, r.residual_max)
    with capsys.disabled():
        announce(9, "conformal Killing structure at m=3",
                 f"{len(rep.details)} residuals, worst {worst:.1e}")


def test_criterion_10_toric_normal_form(chsc_m2, capsys):
    """The momentum-coordinate chart built from the dual potential matches the
    root chart through the block Jacobian to 1e-6; the closedness detector
    passes on the true potential and rejects a cubic perturbation."""
    G = orthotoric_dual_potential(chsc_m2)
    box = [(2.0, 2.1), (0.75, 0.8)]
    toric = build_toric_from_potential(G, box, jet_capable=False)

    rng = np.random.default_rng(61)
    worst = 0.0
    for _ in range(6):
        sig = [2.0 + 0.1 * rng.random(), 0.75 + 0.05 * rng.random()]
        ang = list(0.3 * rng.random(2) - 0.15)
        xs = G.roots_from_sigma(sig)
        gt = toric.g.value(sig + ang)
        go = chsc_m2.g.value(list(xs) + ang)
        M = np.array([[1.0, 1.0], [xs[1], xs[0]]])
        D = np.zeros((4, 4))
        D[:2, :2] = np.linalg.inv(M)
        D[2:, 2:] = np.eye(2)
        diff = np.max(np.abs(D.T @ go @ D - gt)) / max(1.0, np.max(np.abs(gt)))
        assert diff < 1e-6, f"chart comparison {diff:.3e}"
        worst = max(worst, diff)

    good = orthotoric_compatibility(toric)
    assert good.passed, f"detector on true potential {good.residual_max:.3e}"

    def G2(sig):
        return G(sig) + 0.05 * (sig[0] - 2.05) ** 3 * sig[1]

    bad = orthotoric_compatibility(build_toric_from_potential(
        G2, box, jet_capable=False))
    assert not bad.passed, "detector must reject the perturbed potential"
    with capsys.disabled():
        announce(10, "toric chart normal form",
                 f"chart match {worst:.1e}, detector {good.residual_max:.1e} "
                 f"vs {bad.residual_max:.1e}")


def test_criterion_11_mutation_guard(chsc_m2, capsys):
    """A 1% bump in one metric component must fail every residual suite."""
    rep = mutation_suite(chsc_m2)
    assert rep.passed
    fired = [r.name for r in rep.details if r.passed]
    assert len(fired) == len(rep.details) == 6
    with capsys.disabled():
        announce(11, "mutation guard", f"all {len(fired)} suites detect the bump")
