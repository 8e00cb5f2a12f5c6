"""Shared model fixtures.

Building a metric model triggers domain validation and factor sign checks,
so the heavier fixtures are session-scoped and reused across test modules.
"""

import pytest

from orthotoric import (
    FLOAT,
    ClassSpec,
    Polynomial,
    SpectrumSpec,
    build_calabi,
    build_class_model,
    build_general,
    build_orthotoric,
    space_form_factor,
)


@pytest.fixture(scope="session")
def sphere_m1():
    # F(t) = 1 - t^2 on (-0.9, 0.9): the round two-sphere of scalar curvature 2.
    return build_orthotoric(
        [(-0.9, 0.9)],
        [Polynomial([-1.0, 0.0, 1.0], FLOAT)],
        name="sphere_m1",
    )


@pytest.fixture(scope="session")
def flat_m1():
    return build_orthotoric([(0.2, 0.8)], [Polynomial([1.0, 0.0], FLOAT)], name="flat_m1")


@pytest.fixture(scope="session")
def chsc_m2():
    profile = Polynomial([-1.0, 3.1, -2.3, 0.2], FLOAT)
    return build_orthotoric(
        [(0.2, 0.8), (1.2, 1.9)],
        [profile, profile],
        name="chsc_m2",
    )


@pytest.fixture(scope="session")
def general21():
    spectrum = SpectrumSpec([(0.2, 0.8)], [(1.0, 1)])
    return build_general(
        spectrum,
        [Polynomial([1.0, -0.9, 0.0], FLOAT)],
        factors=[space_form_factor(k=1.0, scale=0.5, m_f=1)],
        name="general21",
    )


@pytest.fixture(scope="session")
def calabi_m2():
    return build_calabi(
        Polynomial([1.0, -1.0, 1.0, 0.0], FLOAT),
        (0.5, 1.5),
        m=2,
        base_k=1.0,
        base_scale=1.0,
        name="calabi_m2",
    )


@pytest.fixture(scope="session")
def orthotoric_m3():
    profile = Polynomial([1.0, -4.0, 3.36], FLOAT)  # (t - 1.2)(t - 2.8)
    return build_orthotoric(
        [(0.05, 0.95), (1.55, 2.45), (3.05, 3.95)],
        [profile, profile, profile],
        name="orthotoric_m3",
    )


@pytest.fixture(scope="session")
def m31():
    spectrum = SpectrumSpec([(0.2, 0.8)], [(1.0, 1), (-0.5, 1)])
    return build_general(
        spectrum,
        [Polynomial([1.0, -0.9, 0.0], FLOAT)],
        factors=[
            space_form_factor(k=1.0, scale=1.0, m_f=1),
            space_form_factor(k=-0.3, scale=-0.7, m_f=1),
        ],
        name="m31",
    )


@pytest.fixture(scope="session")
def m32():
    spectrum = SpectrumSpec([(0.2, 0.8), (1.2, 1.9)], [(2.5, 1)])
    profile = Polynomial([1.0, -3.1, 2.3, -0.2], FLOAT)
    return build_general(
        spectrum,
        [profile, profile],
        factors=[space_form_factor(k=0.8, scale=1.0, m_f=1)],
        name="m32",
    )


@pytest.fixture(scope="session")
def bf_m2_pair():
    """Order-two model whose curvature is fully pinned by a quartic profile."""
    cs = ClassSpec(
        "bf",
        SpectrumSpec([(0.2, 0.8), (1.2, 1.9)]),
        (1.0, -1.0, 0.0, 1.0, -1.0),
    )
    model, _family = build_class_model(cs, name="bf_m2")
    return model, cs


@pytest.fixture(scope="session")
def bf_m2(bf_m2_pair):
    return bf_m2_pair[0]
