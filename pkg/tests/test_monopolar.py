import math

import numpy as np
import pytest

from becdyn import monopolar as mono

SQRT3 = math.sqrt(3.0)
SQRTPI = math.sqrt(math.pi)


def quadratic_roots(a):
    """Independent oracle: the fixed-point condition at gamma = 0 is
    (sqrt(3)/sqrt(pi)) q^2 - (9/2) q - (9 sqrt(3)/(2 sqrt(pi))) a = 0."""
    ca = SQRT3 / SQRTPI
    cb = -4.5
    cc = -9.0 * SQRT3 * a / (2.0 * SQRTPI)
    disc = cb * cb - 4.0 * ca * cc
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    return sorted(q for q in ((-cb - sq) / (2 * ca), (-cb + sq) / (2 * ca)) if q > 0)


def test_energy_reference_point():
    s = mono.MonoState(q=1.0, p=0.0)
    assert mono.energy(s, a=0.0) == pytest.approx(9.0 / 4.0 - SQRT3 / SQRTPI,
                                                  abs=1e-14)
    # numeric value quoted to 5 decimals
    assert mono.energy(s, a=0.0) == pytest.approx(1.27280, abs=1e-5)


def test_energy_kinetic_dominates_at_large_q():
    s = mono.MonoState(q=1e6, p=1.0)
    assert mono.energy(s, a=-1.0) == pytest.approx(1.0, abs=1e-5)


def test_energy_at_degenerate_saddle():
    q_c = 9.0 * SQRTPI / (4.0 * SQRT3)
    a_c = mono.CRITICAL_A_SELF_TRAPPED
    # V' and V'' both vanish at the fold
    assert mono.force(q_c, a_c) == pytest.approx(0.0, abs=1e-14)
    assert mono.curvature(q_c, a_c) == pytest.approx(0.0, abs=1e-14)
    s = mono.MonoState(q=q_c, p=0.0)
    assert mono.energy(s, a_c) == pytest.approx(mono.potential(q_c, a_c), abs=1e-15)


def test_force_closed_form_values():
    q_star = 9.0 * SQRTPI / (2.0 * SQRT3)
    assert mono.force(q_star, a=0.0) == pytest.approx(0.0, abs=1e-14)
    assert mono.force(1.0, a=0.0) == pytest.approx(4.5 - SQRT3 / SQRTPI, abs=1e-12)
    assert mono.force(1.0, a=0.0) == pytest.approx(3.52279, abs=1e-5)


def test_force_matches_finite_differences():
    rng = np.random.default_rng(11)
    h = 1e-5
    for _ in range(20):
        q = float(rng.uniform(0.5, 10.0))
        a = float(rng.uniform(-1.5, 0.5))
        gamma = float(rng.choice([0.0, 0.3]))
        fd = -(mono.potential(q + h, a, gamma) - mono.potential(q - h, a, gamma)) / (2 * h)
        an = mono.force(q, a, gamma)
        assert abs(an - fd) < 1e-6 * max(1.0, abs(fd))


def test_curvature_matches_finite_differences():
    rng = np.random.default_rng(12)
    h = 1e-5
    for _ in range(20):
        q = float(rng.uniform(0.5, 10.0))
        a = float(rng.uniform(-1.5, 0.5))
        fd = (mono.potential(q + h, a) - 2 * mono.potential(q, a)
              + mono.potential(q - h, a)) / h ** 2
        assert abs(mono.curvature(q, a) - fd) < 1e-4 * max(1.0, abs(fd))


def test_fixed_point_count_pattern():
    assert len(mono.fixed_points(-1.3)) == 0
    assert len(mono.fixed_points(-1.2)) == 0
    fps = mono.fixed_points(mono.CRITICAL_A_SELF_TRAPPED)
    assert len(fps) == 1 and fps[0].kind == "degenerate"
    assert len(mono.fixed_points(-1.0)) == 2
    assert len(mono.fixed_points(-0.2)) == 2
    assert len(mono.fixed_points(0.0)) == 1
    assert len(mono.fixed_points(0.5)) == 1


def test_fixed_points_match_quadratic_oracle():
    for a in (-1.0, -0.85, -0.5):
        expected = quadratic_roots(a)
        fps = mono.fixed_points(a)
        assert len(fps) == len(expected)
        for fp, q_ref in zip(fps, expected):
            assert fp.q_star == pytest.approx(q_ref, abs=1e-10)
    # hyperbolic point is the narrow one, elliptic the wide one
    fps = mono.fixed_points(-1.0)
    assert fps[0].kind == "hyperbolic"
    assert fps[1].kind == "elliptic"


def test_degenerate_fixed_point_location():
    fps = mono.fixed_points(mono.CRITICAL_A_SELF_TRAPPED)
    assert fps[0].q_star == pytest.approx(9.0 * SQRTPI / (4.0 * SQRT3), rel=1e-12)
    assert fps[0].eigen == 0.0


def test_critical_a_closed_form():
    assert mono.critical_a(0.0) == -3.0 * math.pi / 8.0


def test_critical_a_bisection_oracle():
    # independent scan: bisect on the fixed-point count
    lo, hi = -1.3, -1.0
    assert len(mono.fixed_points(lo)) == 0
    assert len(mono.fixed_points(hi)) == 2
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if len(mono.fixed_points(mid)) == 0:
            lo = mid
        else:
            hi = mid
    assert 0.5 * (lo + hi) == pytest.approx(-3.0 * math.pi / 8.0, abs=1e-6)


def test_critical_a_continuous_at_zero_trap():
    for gamma in (1e-4, 1e-3):
        assert mono.critical_a(gamma) == pytest.approx(-3.0 * math.pi / 8.0,
                                                       abs=5e-3)
    # the trap stabilizes: the fold moves to more negative a
    assert mono.critical_a(0.1) < mono.critical_a(0.0)


def test_trapped_fixed_points_found_numerically():
    fps = mono.fixed_points(-1.0, gamma=0.2)
    assert len(fps) == 2
    for fp in fps:
        assert abs(mono.force(fp.q_star, -1.0, 0.2)) < 1e-10
    # at a >= 0 with a trap there is a single minimum
    fps = mono.fixed_points(0.3, gamma=0.2)
    assert len(fps) == 1
    assert fps[0].kind == "elliptic"


def test_stability_classification():
    fps = mono.fixed_points(-1.0)
    hyp, ell = fps[0], fps[1]
    assert hyp.kind == "hyperbolic" and hyp.eigen > 0
    assert ell.kind == "elliptic" and ell.eigen > 0
    # eigen values follow lambda^2 = -2 V''
    assert ell.eigen == pytest.approx(
        math.sqrt(2.0 * mono.curvature(ell.q_star, -1.0)), rel=1e-12)
    assert hyp.eigen == pytest.approx(
        math.sqrt(-2.0 * mono.curvature(hyp.q_star, -1.0)), rel=1e-12)


def test_hamiltons_equations_vanish_at_fixed_points():
    for a in (-1.0, -0.6, 0.1):
        for fp in mono.fixed_points(a):
            sys_ = mono.hamiltonian_system(a)
            qdot = 2.0 * sys_.kinetic_coeff * 0.0
            pdot = sys_.force((fp.q_star,))[0]
            assert abs(qdot) + abs(pdot) < 1e-10


def test_chemical_potential_at_zero_scattering():
    fps = mono.fixed_points(0.0)
    fp = fps[0]
    assert fp.energy == pytest.approx(-0.10610, abs=1e-5)
    assert fp.mu == pytest.approx(-1.0 / math.pi, rel=1e-12)
    assert fp.mu == pytest.approx(-0.31831, abs=1e-5)


def test_branches_merge_only_at_fold():
    # E and mu of the two branches are distinct away from the fold and
    # coalesce at it
    fps = mono.fixed_points(-1.0)
    assert abs(fps[0].mu - fps[1].mu) > 1e-3
    assert abs(fps[0].energy - fps[1].energy) > 1e-3
    eps = 1e-8
    fps = mono.fixed_points(mono.CRITICAL_A_SELF_TRAPPED + eps)
    assert len(fps) == 2
    assert fps[0].mu == pytest.approx(fps[1].mu, abs=1e-3)
    assert fps[0].energy == pytest.approx(fps[1].energy, abs=1e-3)


def test_mu_curve_has_two_branch_fold_shape():
    a_vals = np.linspace(-1.17, -0.2, 40)
    upper, lower = [], []
    for a in a_vals:
        fps = mono.fixed_points(float(a))
        assert len(fps) == 2
        mus = sorted(fp.mu for fp in fps)
        lower.append(mus[0])
        upper.append(mus[1])
    # two distinct branches over the whole window
    assert all(u - l > 0 for u, l in zip(upper, lower))
    # branch separation shrinks toward the fold on the left
    assert (upper[0] - lower[0]) < (upper[-1] - lower[-1])


def test_width_map_roundtrip():
    assert mono.from_width(mono.MonoWidthParam(0.0, 0.75)) == mono.MonoState(1.0, 0.0)
    st = mono.from_width(mono.MonoWidthParam(0.5, 0.75))
    assert st.q == pytest.approx(1.0, rel=1e-14)
    assert st.p == pytest.approx(1.0, rel=1e-14)
    rng = np.random.default_rng(3)
    for _ in range(100):
        w = mono.MonoWidthParam(a_r=float(rng.uniform(-2, 2)),
                                a_i=float(rng.uniform(0.01, 5.0)))
        w2 = mono.to_width(mono.from_width(w))
        assert w2.a_r == pytest.approx(w.a_r, rel=1e-12, abs=1e-12)
        assert w2.a_i == pytest.approx(w.a_i, rel=1e-12)


def test_trap_term_matches_gaussian_expectation():
    # <gamma^2 r^2> over the Gaussian density exp(-2 Im A r^2) equals
    # gamma^2 q^2 with q = sqrt(3/(4 Im A)); quadrature oracle
    from scipy.integrate import quad
    gamma = 0.7
    for a_i in (0.2, 0.75, 3.0):
        norm = quad(lambda r: 4 * math.pi * r * r * math.exp(-2 * a_i * r * r),
                    0, np.inf)[0]
        r2 = quad(lambda r: 4 * math.pi * r ** 4 * math.exp(-2 * a_i * r * r),
                  0, np.inf)[0] / norm
        q = mono.from_width(mono.MonoWidthParam(0.0, a_i)).q
        assert gamma ** 2 * r2 == pytest.approx(gamma ** 2 * q * q, rel=1e-10)


def test_interaction_terms_match_gaussian_quadrature():
    # contact and long-range terms of the width potential against direct
    # integrals over the normalized Gaussian orbital
    from scipy.integrate import quad
    a = -0.85
    q = 2.3
    a_i = 3.0 / (4.0 * q * q)
    k2 = 2.0 * a_i
    c0 = (k2 / math.pi) ** 1.5
    # 4 pi a * integral |psi|^4 d3r
    contact = 4 * math.pi * a * quad(
        lambda r: 4 * math.pi * r * r * (c0 * math.exp(-k2 * r * r)) ** 2,
        0, np.inf)[0]
    assert contact == pytest.approx(mono.contact_term(q, a), rel=1e-10)
    # Coulomb self-energy of the Gaussian: -k sqrt(2/pi) with the -2/|r-r'|
    # kernel folded in at half weight
    longrange = -math.sqrt(k2) * math.sqrt(2.0 / math.pi)
    assert longrange == pytest.approx(mono.longrange_term(q), rel=1e-12)
