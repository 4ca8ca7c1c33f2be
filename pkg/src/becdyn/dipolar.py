"""Two-degree-of-freedom width dynamics of the dipolar condensate.

An axisymmetric Gaussian trial orbital with complex widths A_rho(t), A_z(t)
reduces the dipolar mean-field problem to the classical Hamiltonian

    H = (p_rho^2 + p_z^2)/2 + 1/(2 q_rho^2) + 2 gamma_rho^2 q_rho^2
        + (a/a_d) / (2 sqrt(2 pi) q_rho^2 q_z)
        + 1/(8 q_z^2) + 2 gamma_z^2 q_z^2 + D(q_rho, q_z),

with D the mean-field dipole-dipole energy of the Gaussian density.  In
terms of the shape parameter x = q_rho^2 / (2 q_z^2) (x = 1 is a spherical
density, where D vanishes identically),

    D = g(x) / (12 sqrt(2 pi) q_rho^2 q_z),
    g(x) = [1 + 2x - 3x arctan(sqrt(x-1))/sqrt(x-1)] / (x - 1).

The printed arctan form is real only for oblate densities (x > 1); for
prolate ones (x < 1) the same function continues to
artanh(sqrt(1-x))/sqrt(1-x), and near x = 1 a series expansion avoids the
removable 0/0.  g and its derivative are validated in the test suite both
against arbitrary-precision evaluation and against direct numerical
integration of the dipolar interaction kernel.

Trap frequencies derive from the scaled parameters as
gamma_rho = gbar * lambda^(-1/3), gamma_z = gbar * lambda^(2/3), with
gbar = N^2 gamma_bar; energies computed here are then the
particle-number-weighted N*E values (in units of E_d).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import HamSystem
from .scaling import DipolarScaled

SQRT_2PI = math.sqrt(2.0 * math.pi)

# |x - 1| below which the series expansion of g replaces the closed form
SERIES_SWITCH = 1e-4

# series of g in u = x - 1 up to 4th order (coefficients 6(-1)^k/(4k^2-1))
_G_SERIES = (2.0 / 5.0, -6.0 / 35.0, 2.0 / 21.0, -2.0 / 33.0)


class SeedMergeWarning(UserWarning):
    """Two distinct Newton seeds converged suspiciously close together."""


class MarginalSpectrumWarning(UserWarning):
    """Linearization eigenvalues too close to zero to classify reliably."""


@dataclass(frozen=True)
class DipState:
    q_rho: float
    q_z: float
    p_rho: float
    p_z: float

    def __post_init__(self):
        if self.q_rho <= 0 or self.q_z <= 0:
            raise ValueError("widths must be > 0")


@dataclass(frozen=True)
class DipWidthParams:
    """Real/imaginary parts of the complex widths A_rho, A_z."""

    a_rho_r: float
    a_rho_i: float
    a_z_r: float
    a_z_i: float

    def __post_init__(self):
        if self.a_rho_i <= 0 or self.a_z_i <= 0:
            raise ValueError("imaginary width parts must be > 0")


@dataclass(frozen=True)
class DipFixedPoint:
    q_rho_star: float
    q_z_star: float
    energy: float
    mu: float
    kind: str                   # "minimum" | "saddle"
    eigenvalues: tuple          # four eigenvalues of the linearized flow
    grad_norm: float


def trap_frequencies(params: DipolarScaled):
    gbar = params.gamma_bar_scaled
    lam = params.aspect_ratio
    return gbar * lam ** (-1.0 / 3.0), gbar * lam ** (2.0 / 3.0)


def _h_branch(u):
    # arctan(sqrt(u))/sqrt(u) continued to real arguments on both sides
    if u > 0.0:
        s = math.sqrt(u)
        return math.atan(s) / s
    s = math.sqrt(-u)
    return math.atanh(s) / s


def anisotropy(x: float) -> float:
    """Shape function g(x); zero on the spherical locus x = 1."""
    u = x - 1.0
    if abs(u) < SERIES_SWITCH:
        acc = 0.0
        for c in reversed(_G_SERIES):
            acc = u * (c + acc)
        return acc
    return (3.0 + 2.0 * u - 3.0 * (1.0 + u) * _h_branch(u)) / u


def anisotropy_deriv(x: float) -> float:
    """dg/dx, branch-aware with the matching series near x = 1."""
    u = x - 1.0
    if abs(u) < SERIES_SWITCH:
        acc = 0.0
        for k in reversed(range(len(_G_SERIES))):
            acc = _G_SERIES[k] * (k + 1) + u * acc
        return acc
    h = _h_branch(u)
    hp = (1.0 / (1.0 + u) - h) / (2.0 * u)
    n = 3.0 + 2.0 * u - 3.0 * (1.0 + u) * h
    np_ = 2.0 - 3.0 * h - 3.0 * (1.0 + u) * hp
    return (np_ * u - n) / (u * u)


def potential(q_rho: float, q_z: float, params: DipolarScaled) -> float:
    """Width potential V(q_rho, q_z) of the dipolar Hamiltonian."""
    g_rho, g_z = trap_frequencies(params)
    a = params.a_scaled
    x = q_rho * q_rho / (2.0 * q_z * q_z)
    d = anisotropy(x) / (12.0 * SQRT_2PI * q_rho * q_rho * q_z)
    return (0.5 / (q_rho * q_rho) + 2.0 * g_rho * g_rho * q_rho * q_rho
            + a / (2.0 * SQRT_2PI * q_rho * q_rho * q_z)
            + 0.125 / (q_z * q_z) + 2.0 * g_z * g_z * q_z * q_z + d)


def potential_grid(q_rho, q_z, params: DipolarScaled):
    """Vectorized V over numpy arrays (for landscape rasters)."""
    q_rho = np.asarray(q_rho, dtype=float)
    q_z = np.asarray(q_z, dtype=float)
    g_rho, g_z = trap_frequencies(params)
    a = params.a_scaled
    x = q_rho ** 2 / (2.0 * q_z ** 2)
    u = x - 1.0
    h = np.empty_like(u)
    ob = u > SERIES_SWITCH
    pr = u < -SERIES_SWITCH
    mid = ~(ob | pr)
    s_ob = np.sqrt(np.where(ob, u, 1.0))
    h[ob] = (np.arctan(s_ob) / s_ob)[ob]
    s_pr = np.sqrt(np.where(pr, -u, 0.5))
    h[pr] = (np.arctanh(s_pr) / s_pr)[pr]
    g = np.empty_like(u)
    nz = ~mid
    g[nz] = ((3.0 + 2.0 * u - 3.0 * (1.0 + u) * h)[nz]) / u[nz]
    acc = np.zeros_like(u)
    for c in reversed(_G_SERIES):
        acc = u * (c + acc)
    g[mid] = acc[mid]
    d = g / (12.0 * SQRT_2PI * q_rho ** 2 * q_z)
    return (0.5 / q_rho ** 2 + 2.0 * g_rho ** 2 * q_rho ** 2
            + a / (2.0 * SQRT_2PI * q_rho ** 2 * q_z)
            + 0.125 / q_z ** 2 + 2.0 * g_z ** 2 * q_z ** 2 + d)


def energy(state: DipState, params: DipolarScaled) -> float:
    return (0.5 * (state.p_rho ** 2 + state.p_z ** 2)
            + potential(state.q_rho, state.q_z, params))


def gradient(q_rho: float, q_z: float, params: DipolarScaled):
    """(dV/dq_rho, dV/dq_z), closed form on all branches."""
    g_rho, g_z = trap_frequencies(params)
    a = params.a_scaled
    x = q_rho * q_rho / (2.0 * q_z * q_z)
    g = anisotropy(x)
    gp = anisotropy_deriv(x)
    pref = 12.0 * SQRT_2PI
    d_rho = (2.0 * x * gp - 2.0 * g) / (pref * q_rho ** 3 * q_z)
    d_z = -(2.0 * x * gp + g) / (pref * q_rho ** 2 * q_z ** 2)
    dv_rho = (-1.0 / q_rho ** 3 + 4.0 * g_rho * g_rho * q_rho
              - a / (SQRT_2PI * q_rho ** 3 * q_z) + d_rho)
    dv_z = (-0.25 / q_z ** 3 + 4.0 * g_z * g_z * q_z
            - a / (2.0 * SQRT_2PI * q_rho ** 2 * q_z ** 2) + d_z)
    return dv_rho, dv_z


def hessian(q_rho: float, q_z: float, params: DipolarScaled, rel_step=1e-6):
    """2x2 potential Hessian by central differences of the exact gradient."""
    hr = rel_step * q_rho
    hz = rel_step * q_z
    gr_p = gradient(q_rho + hr, q_z, params)
    gr_m = gradient(q_rho - hr, q_z, params)
    gz_p = gradient(q_rho, q_z + hz, params)
    gz_m = gradient(q_rho, q_z - hz, params)
    h11 = (gr_p[0] - gr_m[0]) / (2.0 * hr)
    h21 = (gr_p[1] - gr_m[1]) / (2.0 * hr)
    h12 = (gz_p[0] - gz_m[0]) / (2.0 * hz)
    h22 = (gz_p[1] - gz_m[1]) / (2.0 * hz)
    h_off = 0.5 * (h12 + h21)       # symmetrize
    return np.array([[h11, h_off], [h_off, h22]])


def stability(q_rho: float, q_z: float, params: DipolarScaled,
              marginal_tol=1e-8):
    """Four eigenvalues of J * Hess(H) at a stationary point.

    With kinetic term (p^2)/2 the flow eigenvalues satisfy
    lambda^2 = -w, w an eigenvalue of the potential Hessian: a minimum has
    two imaginary conjugate pairs, a saddle at least one real pair.
    """
    hess_v = hessian(q_rho, q_z, params)
    w = np.linalg.eigvalsh(hess_v)
    eigs = []
    for wi in w:
        lam = complex(0.0, math.sqrt(wi)) if wi >= 0 else complex(math.sqrt(-wi), 0.0)
        eigs.extend([lam, -lam])
    scale = math.sqrt(float(np.max(np.abs(w))))
    for lam in eigs:
        if abs(lam.real) < marginal_tol * scale and abs(lam.imag) < marginal_tol * scale:
            warnings.warn("marginal linearization spectrum at fixed point",
                          MarginalSpectrumWarning, stacklevel=2)
            break
    return tuple(eigs)


def chemical_potential(q_rho: float, q_z: float, params: DipolarScaled) -> float:
    """GPE eigenvalue at a stationary point: mu = E + C + D, where C and D
    are the contact and dipolar terms of the width potential (the
    interactions carry twice their energy-functional weight in the
    eigenvalue; the doubling rule is validated against the grid solver)."""
    a = params.a_scaled
    c = a / (2.0 * SQRT_2PI * q_rho * q_rho * q_z)
    x = q_rho * q_rho / (2.0 * q_z * q_z)
    d = anisotropy(x) / (12.0 * SQRT_2PI * q_rho * q_rho * q_z)
    return potential(q_rho, q_z, params) + c + d


def _newton_polish(q0, z0, params, max_iter=200, damping=0.5):
    """Damped Newton on the gradient from one seed.

    Returns (q_rho, q_z, grad_norm) or None when the iteration leaves the
    positive quadrant or fails to reach stationarity.
    """
    q, z = q0, z0
    v = potential(q, z, params)
    for _ in range(max_iter):
        gr, gz = gradient(q, z, params)
        hess_v = hessian(q, z, params)
        try:
            dq, dz = np.linalg.solve(hess_v, [-gr, -gz])
        except np.linalg.LinAlgError:
            return None
        qn, zn = q + dq, z + dz
        if qn <= 0.0 or zn <= 0.0:
            return None
        vn = potential(qn, zn, params)
        if vn > v:                      # uphill step: damp once
            qn, zn = q + damping * dq, z + damping * dz
            if qn <= 0.0 or zn <= 0.0:
                return None
            vn = potential(qn, zn, params)
        step = math.hypot(qn - q, zn - z)
        q, z, v = qn, zn, vn
        if step < 1e-14 * math.hypot(q, z):
            break
    gr, gz = gradient(q, z, params)
    gnorm = math.hypot(gr, gz)
    # stationarity relative to the local gradient scale (|V|/q); the
    # absolute 1e-10 contract applies at order-unity parameters
    scale = max(abs(v) / min(q, z), 1.0)
    if gnorm > 1e-9 * scale:
        return None
    return q, z, gnorm


def fixed_points(params: DipolarScaled, *, seed_grid=16,
                 bounds=(1e-2, 1e2), dedup_rtol=1e-6) -> list[DipFixedPoint]:
    """Stationary points of the width potential (ground minimum and, when it
    exists, the collapse saddle), by multi-start Newton.

    Seeds come from a log-spaced grid over (q_rho, q_z); non-converging
    seeds are dropped silently, converged points deduplicated at relative
    distance ``dedup_rtol``.  Below the critical scattering length the
    list is empty.
    """
    vals = np.geomspace(bounds[0], bounds[1], seed_grid)
    found = []
    for q0 in vals:
        for z0 in vals:
            res = _newton_polish(q0, z0, params)
            if res is None:
                continue
            q, z, gnorm = res
            matched = False
            for entry in found:
                dist = math.hypot(q - entry[0], z - entry[1])
                ref = math.hypot(entry[0], entry[1])
                if dist < dedup_rtol * ref:
                    matched = True
                    break
                if dist < 10.0 * dedup_rtol * ref:
                    warnings.warn(
                        "two seeds converged to nearby but distinct points",
                        SeedMergeWarning, stacklevel=2)
            if not matched:
                found.append((q, z, gnorm))

    points = []
    for q, z, gnorm in sorted(found, key=lambda t: potential(t[0], t[1], params)):
        hess_v = hessian(q, z, params)
        w = np.linalg.eigvalsh(hess_v)
        kind = "minimum" if np.all(w > 0) else "saddle"
        points.append(DipFixedPoint(
            q_rho_star=q, q_z_star=z,
            energy=potential(q, z, params),
            mu=chemical_potential(q, z, params),
            kind=kind,
            eigenvalues=stability(q, z, params),
            grad_norm=gnorm,
        ))
    return points


def from_widths(w: DipWidthParams) -> DipState:
    """Invert the width map: Im A_rho = 1/(4 q_rho^2), Im A_z = 1/(8 q_z^2),
    Re A_rho = p_rho/(4 q_rho), Re A_z = p_z/(4 q_z)."""
    q_rho = math.sqrt(1.0 / (4.0 * w.a_rho_i))
    q_z = math.sqrt(1.0 / (8.0 * w.a_z_i))
    return DipState(q_rho=q_rho, q_z=q_z,
                    p_rho=4.0 * q_rho * w.a_rho_r,
                    p_z=4.0 * q_z * w.a_z_r)


def to_widths(s: DipState) -> DipWidthParams:
    return DipWidthParams(
        a_rho_r=s.p_rho / (4.0 * s.q_rho),
        a_rho_i=1.0 / (4.0 * s.q_rho ** 2),
        a_z_r=s.p_z / (4.0 * s.q_z),
        a_z_i=1.0 / (8.0 * s.q_z ** 2),
    )


def section_coords(q_rho: float, p_rho: float):
    """(Re A_rho, Im A_rho) recorded on the surface of section."""
    return p_rho / (4.0 * q_rho), 1.0 / (4.0 * q_rho ** 2)


def hamiltonian_system(params: DipolarScaled) -> HamSystem:
    """Bind the dipolar Hamiltonian to fixed parameters; kinetic term is
    (p_rho^2 + p_z^2)/2, i.e. kinetic coefficient 1/2."""
    def pot(q):
        return potential(q[0], q[1], params)

    def frc(q):
        gr, gz = gradient(q[0], q[1], params)
        return (-gr, -gz)

    return HamSystem(ndof=2, potential=pot, force=frc, kinetic_coeff=0.5,
                     name=(f"dipolar(gbar={params.gamma_bar_scaled:g}, "
                           f"lambda={params.aspect_ratio:g}, "
                           f"a={params.a_scaled:g})"))
