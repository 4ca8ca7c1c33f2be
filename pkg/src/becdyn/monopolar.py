"""One-degree-of-freedom width dynamics of the 1/r-interacting condensate.

An isotropic Gaussian trial orbital with complex width A(t) reduces the
time-dependent mean-field problem to a classical Hamiltonian

    H(q, p) = p^2 + 9/(4 q^2) + 3 sqrt(3) a / (2 sqrt(pi) q^3)
              - sqrt(3)/(sqrt(pi) q)  [+ gamma^2 q^2 with a trap],

where q = sqrt(<r^2>) and p is its conjugate momentum.  The self-trapped
potential (gamma = 0) has no extremum below the critical scattering length
a_cr = -3 pi / 8, a single degenerate saddle at a_cr, and a
maximum/minimum pair (hyperbolic/elliptic fixed point) above it.

All scattering lengths here are the scaled N^2 a/a_u; trap frequencies are
gamma/N^2 (see :mod:`becdyn.scaling`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import HamSystem

SQRT3 = math.sqrt(3.0)
SQRTPI = math.sqrt(math.pi)

#: Critical scattering length of the untrapped system (exact closed form).
CRITICAL_A_SELF_TRAPPED = -3.0 * math.pi / 8.0

# classification tolerance on |a - a_cr| and on |V''| at a root
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class MonoState:
    """Canonical width coordinate q = sqrt(<r^2>) and conjugate momentum."""

    q: float
    p: float

    def __post_init__(self):
        if self.q <= 0:
            raise ValueError("q must be > 0")


@dataclass(frozen=True)
class MonoWidthParam:
    """Complex Gaussian width A = a_r + i a_i of the trial orbital."""

    a_r: float
    a_i: float

    def __post_init__(self):
        if self.a_i <= 0:
            raise ValueError("a_i must be > 0 for a normalizable state")


@dataclass(frozen=True)
class MonoFixedPoint:
    q_star: float
    energy: float
    mu: float
    kind: str              # "elliptic" | "hyperbolic" | "degenerate"
    eigen: float           # oscillation frequency or growth rate


def contact_term(q: float, a: float) -> float:
    return 3.0 * SQRT3 * a / (2.0 * SQRTPI * q ** 3)


def longrange_term(q: float) -> float:
    return -SQRT3 / (SQRTPI * q)


def potential(q, a, gamma=0.0):
    """Width potential V(q); accepts scalars or numpy arrays."""
    q = np.asarray(q, dtype=float) if not np.isscalar(q) else q
    return (9.0 / (4.0 * q * q)
            + 3.0 * SQRT3 * a / (2.0 * SQRTPI * q ** 3)
            - SQRT3 / (SQRTPI * q)
            + gamma * gamma * q * q)


def energy(state: MonoState, a: float, gamma: float = 0.0) -> float:
    """Mean-field energy p^2 + V(q) of a width state."""
    return state.p ** 2 + potential(state.q, a, gamma)


def force(q, a, gamma=0.0):
    """-dV/dq, the closed-form derivative of the width potential."""
    return -(-4.5 / q ** 3
             - 4.5 * SQRT3 * a / (SQRTPI * q ** 4)
             + SQRT3 / (SQRTPI * q * q)
             + 2.0 * gamma * gamma * q)


def curvature(q, a, gamma=0.0):
    """V''(q), used for stability classification."""
    return (13.5 / q ** 4
            + 18.0 * SQRT3 * a / (SQRTPI * q ** 5)
            - 2.0 * SQRT3 / (SQRTPI * q ** 3)
            + 2.0 * gamma * gamma)


def stability(q_star: float, a: float, gamma: float = 0.0):
    """Classify a fixed point from the linearized flow.

    The linearization of (q', p') = (2p, -V'(q)) at (q*, 0) has eigenvalues
    lambda^2 = -2 V''(q*): elliptic fixed points oscillate at
    sqrt(2 V''), hyperbolic ones grow at sqrt(-2 V'').
    """
    vpp = curvature(q_star, a, gamma)
    scale = max(abs(curvature(q_star, 0.0, 0.0)), 1.0)
    if abs(vpp) < DEGENERATE_TOL * scale:
        return "degenerate", 0.0
    if vpp > 0:
        return "elliptic", math.sqrt(2.0 * vpp)
    return "hyperbolic", math.sqrt(-2.0 * vpp)


def chemical_potential(q_star: float, a: float, gamma: float = 0.0) -> float:
    """GPE eigenvalue at a stationary width.

    The interaction terms enter the eigenvalue with twice their weight in
    the energy functional, so mu = E + (contact term) + (long-range term)
    evaluated at the fixed point.  Validated against the grid solver's
    eigenvalue in the test suite.
    """
    return (potential(q_star, a, gamma)
            + contact_term(q_star, a)
            + longrange_term(q_star))


def _make_fixed_point(q_star, a, gamma, kind=None):
    k, eig = stability(q_star, a, gamma)
    if kind is not None:
        k = kind
        eig = 0.0 if kind == "degenerate" else eig
    return MonoFixedPoint(
        q_star=q_star,
        energy=potential(q_star, a, gamma),
        mu=chemical_potential(q_star, a, gamma),
        kind=k,
        eigen=eig,
    )


def fixed_points(a: float, gamma: float = 0.0) -> list[MonoFixedPoint]:
    """All stationary widths, sorted by q.

    For gamma = 0 the condition V'(q) = 0 reduces to the quadratic
    (sqrt(3)/sqrt(pi)) q^2 - (9/2) q - (9 sqrt(3)/(2 sqrt(pi))) a = 0 and is
    solved in closed form; the count follows the 0/1/2 pattern with boundary
    a_cr = -3 pi/8.  For gamma > 0 roots are bracketed by bisection on a
    log-spaced grid and polished with Newton.
    """
    if gamma == 0.0:
        if abs(a - CRITICAL_A_SELF_TRAPPED) < DEGENERATE_TOL:
            q_c = 9.0 * SQRTPI / (4.0 * SQRT3)
            return [_make_fixed_point(q_c, a, gamma, kind="degenerate")]
        ca = SQRT3 / SQRTPI
        cb = -4.5
        cc = -9.0 * SQRT3 * a / (2.0 * SQRTPI)
        disc = cb * cb - 4.0 * ca * cc
        if disc < 0.0:
            return []
        sq = math.sqrt(disc)
        roots = sorted(q for q in ((-cb - sq) / (2 * ca), (-cb + sq) / (2 * ca))
                       if q > 0)
        return [_make_fixed_point(q, a, gamma) for q in roots]
    return [_make_fixed_point(q, a, gamma) for q in _bracketed_roots(a, gamma)]


def _bracketed_roots(a, gamma, q_lo=1e-3, q_hi=1e3, n_grid=2000):
    """Sign-change bracketing of V' on a log grid, then Newton polish."""
    grid = np.geomspace(q_lo, q_hi, n_grid)
    fp = -force(grid, a, gamma)          # V'
    roots = []
    for i in np.flatnonzero(np.sign(fp[:-1]) * np.sign(fp[1:]) < 0):
        lo, hi = grid[i], grid[i + 1]
        flo = fp[i]
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = -force(mid, a, gamma)
            if fm == 0.0:
                lo = hi = mid
                break
            if flo * fm < 0:
                hi = mid
            else:
                lo, flo = mid, fm
            if hi - lo < 1e-14 * mid:
                break
        q = 0.5 * (lo + hi)
        for _ in range(50):              # Newton polish to 1e-12 residual
            f = -force(q, a, gamma)
            df = curvature(q, a, gamma)
            if df == 0.0:
                break
            step = f / df
            q -= step
            if abs(step) < 1e-15 * q:
                break
        if abs(force(q, a, gamma)) < 1e-12 * max(1.0, abs(potential(q, a, gamma)) / q):
            roots.append(q)
    # deduplicate brackets that polished to the same root
    out = []
    for q in sorted(roots):
        if not out or abs(q - out[-1]) > 1e-9 * q:
            out.append(q)
    return out


def critical_a(gamma: float = 0.0) -> float:
    """Scattering length of the tangent bifurcation (fold).

    gamma = 0 is the exact closed form -3 pi/8.  For gamma > 0 the fold is
    the simultaneous root of V' = 0 and V'' = 0; V' is linear in a, so a is
    eliminated and the remaining scalar condition is solved by bisection.
    """
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    if gamma == 0.0:
        return CRITICAL_A_SELF_TRAPPED

    def a_of_q(q):
        # solve V'(q; a) = 0 for a
        rest = -4.5 / q ** 3 + SQRT3 / (SQRTPI * q * q) + 2.0 * gamma * gamma * q
        return rest * q ** 4 * 2.0 * SQRTPI / (9.0 * SQRT3)

    def fold_cond(q):
        return curvature(q, a_of_q(q), gamma)

    grid = np.geomspace(1e-3, 1e3, 4000)
    vals = np.array([fold_cond(q) for q in grid])
    idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    if len(idx) == 0:
        raise RuntimeError("no fold bracket found; gamma out of supported range")
    i = idx[0]
    lo, hi = grid[i], grid[i + 1]
    flo = vals[i]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = fold_cond(mid)
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo < 1e-15 * mid:
            break
    return a_of_q(0.5 * (lo + hi))


def from_width(w: MonoWidthParam) -> MonoState:
    """Map the complex width A to canonical (q, p): q = sqrt(3/(4 Im A)),
    p = Re A sqrt(3/Im A)."""
    q = math.sqrt(3.0 / (4.0 * w.a_i))
    p = w.a_r * math.sqrt(3.0 / w.a_i)
    return MonoState(q=q, p=p)


def to_width(s: MonoState) -> MonoWidthParam:
    """Exact inverse of :func:`from_width`."""
    return MonoWidthParam(a_r=s.p / (2.0 * s.q), a_i=3.0 / (4.0 * s.q * s.q))


def hamiltonian_system(a: float, gamma: float = 0.0) -> HamSystem:
    """Bind the width Hamiltonian to fixed parameters for the integrators.

    The kinetic term is p^2, i.e. kinetic coefficient 1 (dq/dt = 2p).
    """
    def pot(q):
        return potential(q[0], a, gamma)

    def frc(q):
        return (force(q[0], a, gamma),)

    return HamSystem(ndof=1, potential=pot, force=frc, kinetic_coeff=1.0,
                     name=f"monopolar(a={a:g}, gamma={gamma:g})")
