import math

import numpy as np
import pytest

from becdyn import scaling


def test_monopolar_identity_at_n1():
    s = scaling.to_scaled_monopolar(
        scaling.MonopolarPhysical(n_particles=1, a_over_au=-1.0, gamma=0.5))
    assert s.gamma_scaled == 0.5
    assert s.a_scaled == -1.0


def test_monopolar_scaling_arithmetic():
    s = scaling.to_scaled_monopolar(
        scaling.MonopolarPhysical(n_particles=10, a_over_au=-0.01, gamma=100.0))
    assert s.gamma_scaled == 1.0
    assert s.a_scaled == -1.0

    s = scaling.to_scaled_monopolar(
        scaling.MonopolarPhysical(n_particles=100, a_over_au=-1.18e-4, gamma=1e4))
    assert s.gamma_scaled == 1.0
    assert s.a_scaled == pytest.approx(-1.18, rel=1e-12)


def test_dipolar_geometric_mean():
    s = scaling.to_scaled_dipolar(
        scaling.DipolarPhysical(n_particles=1, a_over_ad=0.1,
                                gamma_rho=1.0, gamma_z=6.0))
    assert s.gamma_bar_scaled == pytest.approx(6.0 ** (1.0 / 3.0), rel=1e-14)
    assert s.aspect_ratio == pytest.approx(6.0, rel=1e-14)
    assert s.a_scaled == 0.1


def test_dipolar_isotropic_identity():
    s = scaling.to_scaled_dipolar(
        scaling.DipolarPhysical(n_particles=1, a_over_ad=0.0,
                                gamma_rho=1.0, gamma_z=1.0))
    assert s.gamma_bar_scaled == 1.0
    assert s.aspect_ratio == 1.0
    assert s.a_scaled == 0.0


def test_dipolar_equivalence_class():
    # any (N, gamma_rho, gamma_z) with the same N^2 gamma_bar and aspect
    # ratio lands on the same scaled triple
    target = 3.4e4
    lam = 6.0
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(1, 10000))
        gamma_rho = (target / n ** 2) / lam ** (1.0 / 3.0)
        gamma_z = lam * gamma_rho
        s = scaling.to_scaled_dipolar(
            scaling.DipolarPhysical(n_particles=n, a_over_ad=0.1,
                                    gamma_rho=gamma_rho, gamma_z=gamma_z))
        assert s.gamma_bar_scaled == pytest.approx(target, rel=1e-12)
        assert s.aspect_ratio == pytest.approx(lam, rel=1e-12)


def test_unscale_energy_monopolar():
    assert scaling.unscale_energy(1.0, 1, "monopolar") == 1.0
    assert scaling.unscale_energy(2.0, 10, "monopolar") == 2000.0


def test_unscale_energy_dipolar():
    # the dipolar law is E(N)/N at N=1: identity
    assert scaling.unscale_energy(4.24e5, 1, "dipolar") == 4.24e5
    assert scaling.unscale_energy(4.24e5, 2, "dipolar") == 2.12e5


def test_roundtrip_exact_on_random_tuples():
    # closed-form maps: round trips are exact, no tolerance
    rng = np.random.default_rng(123)
    for _ in range(1000):
        e = float(rng.uniform(-1e6, 1e6))
        n = int(rng.integers(1, 100000))
        kind = "monopolar" if rng.random() < 0.5 else "dipolar"
        assert scaling.scale_energy(scaling.unscale_energy(e, n, kind), n, kind) == e


def test_monopolar_equivalence_class_bit_identical():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        gamma_s = float(rng.uniform(0.0, 10.0))
        a_s = float(rng.uniform(-5.0, 5.0))
        n1 = int(rng.integers(1, 1000))
        n2 = int(rng.integers(1, 1000))
        p1 = scaling.MonopolarPhysical(n1, a_s / n1 ** 2, gamma_s * n1 ** 2)
        p2 = scaling.MonopolarPhysical(n2, a_s / n2 ** 2, gamma_s * n2 ** 2)
        s1 = scaling.to_scaled_monopolar(p1)
        s2 = scaling.to_scaled_monopolar(p2)
        # the maps are plain multiply/divide; equal inputs give equal floats
        assert math.isclose(s1.gamma_scaled, s2.gamma_scaled, rel_tol=1e-15)
        assert math.isclose(s1.a_scaled, s2.a_scaled, rel_tol=1e-15)


def test_invariant_violations_raise():
    with pytest.raises(ValueError):
        scaling.MonopolarPhysical(n_particles=0, a_over_au=0.0, gamma=1.0)
    with pytest.raises(ValueError):
        scaling.MonopolarPhysical(n_particles=1, a_over_au=0.0, gamma=-1.0)
    with pytest.raises(ValueError):
        scaling.DipolarPhysical(n_particles=1, a_over_ad=0.0,
                                gamma_rho=0.0, gamma_z=1.0)
    with pytest.raises(ValueError):
        scaling.DipolarScaled(gamma_bar_scaled=-1.0, aspect_ratio=1.0, a_scaled=0.0)
    with pytest.raises(ValueError):
        scaling.unscale_energy(1.0, 0, "monopolar")
    with pytest.raises(ValueError):
        scaling.unscale_energy(1.0, 1, "quadrupolar")
