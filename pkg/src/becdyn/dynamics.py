"""Symplectic integration and chaos diagnostics for the width Hamiltonians.

Works with any separable Hamiltonian H = kc * sum(p_i^2) + V(q) whose
coordinates are positive widths.  Provides Stormer-Verlet and 4th-order
Yoshida stepping, event-monitored trajectories (collapse of a width to
zero, escape to infinity), Poincare surfaces of section with refined plane
crossings, energy-shell seeding, and a Benettin two-trajectory estimate of
the maximal Lyapunov exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

# default event thresholds, in scaled width units
COLLAPSE_WIDTH = 1e-2
ESCAPE_WIDTH = 1e3

# Yoshida 4th-order composition coefficients
_Y_W1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_Y_W0 = -(2.0 ** (1.0 / 3.0)) / (2.0 - 2.0 ** (1.0 / 3.0))


@dataclass(frozen=True)
class HamSystem:
    """A separable Hamiltonian bound to fixed physical parameters.

    ``potential`` maps a q-tuple to V(q); ``force`` maps a q-tuple to the
    tuple -grad V.  The kinetic part is kc * sum(p_i^2) so that
    dq_i/dt = 2 kc p_i (kc = 1 for the monopolar system, 1/2 for the
    dipolar one).
    """

    ndof: int
    potential: Callable
    force: Callable
    kinetic_coeff: float = 0.5
    name: str = ""

    def energy(self, q: Sequence[float], p: Sequence[float]) -> float:
        return self.kinetic_coeff * sum(pi * pi for pi in p) + self.potential(q)


@dataclass
class Trajectory:
    times: np.ndarray
    qs: np.ndarray          # (n_samples, ndof)
    ps: np.ndarray
    energies: np.ndarray
    termination: str        # completed | collapse | escape | step-limit


@dataclass(frozen=True)
class SectionPoint:
    re_a_rho: float
    im_a_rho: float
    time: float
    orbit_id: int
    q: tuple
    p: tuple


@dataclass
class SectionOrbit:
    orbit_id: int
    points: list
    termination: str


@dataclass
class MLEResult:
    estimate: float         # mean of the last quarter of the running average
    running: np.ndarray     # running average lambda(t_k)
    times: np.ndarray
    termination: str


def verlet_step(sys: HamSystem, q, p, dt, f=None):
    """One kick-drift-kick step; returns (q, p, force_at_new_q).

    Passing the cached force at q avoids recomputing it (the usual
    force-reuse of velocity Verlet).
    """
    if f is None:
        f = sys.force(q)
    half = 0.5 * dt
    vel = 2.0 * sys.kinetic_coeff
    p_half = tuple(pi + half * fi for pi, fi in zip(p, f))
    q_new = tuple(qi + dt * vel * pi for qi, pi in zip(q, p_half))
    if min(q_new) <= 0.0:
        return q_new, p_half, None        # domain violation: caller treats as collapse
    f_new = sys.force(q_new)
    p_new = tuple(pi + half * fi for pi, fi in zip(p_half, f_new))
    return q_new, p_new, f_new


def yoshida4_step(sys: HamSystem, q, p, dt, f=None):
    """4th-order symmetric composition of three Verlet substeps."""
    for w in (_Y_W1, _Y_W0, _Y_W1):
        q, p, f = verlet_step(sys, q, p, w * dt, f)
        if f is None:
            return q, p, None
    return q, p, f


def _width_event(q, collapse_width, escape_width, p=None):
    if min(q) < collapse_width:
        return "collapse"
    if max(q) > escape_width:
        if p is None:
            return "escape"
        i = max(range(len(q)), key=lambda k: q[k])
        if p[i] > 0.0:
            return "escape"
    return None


def integrate(sys: HamSystem, q0, p0, t_end, dt, *, record_every=1,
              collapse_width=COLLAPSE_WIDTH, escape_width=ESCAPE_WIDTH,
              method="verlet", max_steps=None) -> Trajectory:
    """Fixed-step symplectic integration with collapse/escape monitoring.

    Physical terminations are recorded, never raised.  Samples (including
    the initial state) are taken every ``record_every`` steps.
    """
    stepper = verlet_step if method == "verlet" else yoshida4_step
    n_steps = int(round(t_end / dt))
    if max_steps is not None and n_steps > max_steps:
        n_steps = max_steps
        termination_default = "step-limit"
    else:
        termination_default = "completed"

    q, p = tuple(q0), tuple(p0)
    f = sys.force(q)
    times, qs, ps, es = [0.0], [q], [p], [sys.energy(q, p)]
    termination = termination_default
    for i in range(1, n_steps + 1):
        q, p, f = stepper(sys, q, p, dt, f)
        if f is None:
            termination = "collapse"
            break
        ev = _width_event(q, collapse_width, escape_width, p)
        if ev is not None:
            termination = ev
            times.append(i * dt); qs.append(q); ps.append(p)
            es.append(sys.energy(q, p))
            break
        if i % record_every == 0:
            times.append(i * dt); qs.append(q); ps.append(p)
            es.append(sys.energy(q, p))
    return Trajectory(times=np.array(times), qs=np.array(qs), ps=np.array(ps),
                      energies=np.array(es), termination=termination)


def width_section_coords(q, p):
    """(Re A_rho, Im A_rho) of the first coordinate:
    Re A = p/(4q), Im A = 1/(4q^2)."""
    return p[0] / (4.0 * q[0]), 1.0 / (4.0 * q[0] ** 2)


def _refine_crossing(sys, q0, p0, f0, dt, coord, tol=1e-10, max_iter=200):
    """Locate tau in (0, dt] where p[coord] = 0 along a single Verlet substep.

    Bisection on the substep length, finished by Newton steps using
    dp/dt = F at the interpolated point.
    """
    def p_at(tau):
        q, p, f = verlet_step(sys, q0, p0, tau, f0)
        return p[coord], q, p

    lo, hi = 0.0, dt
    plo = p0[coord]
    tau = dt
    pc, q, p = p_at(tau)
    for _ in range(max_iter):
        if abs(pc) < tol:
            return tau, q, p
        if plo * pc < 0:
            hi = tau
        else:
            lo, plo = tau, pc
        tau = 0.5 * (lo + hi)
        pc, q, p = p_at(tau)
    # Newton polish (Hermite-style, slope from the force)
    for _ in range(8):
        if abs(pc) < tol:
            break
        fz = sys.force(q)[coord]
        if fz == 0.0:
            break
        tau = min(max(tau - pc / fz, 0.0), dt)
        pc, q, p = p_at(tau)
    return tau, q, p


def poincare(sys: HamSystem, seeds, n_crossings, *, dt, direction=+1,
             coord=None, t_max=None, energy_rtol=1e-8,
             collapse_width=COLLAPSE_WIDTH, escape_width=ESCAPE_WIDTH,
             crossing_tol=1e-10) -> list[SectionOrbit]:
    """Poincare surface of section on the plane p[coord] = 0.

    By default the section plane is the last momentum coordinate (p_z = 0
    for the dipolar system) with dp/dt > 0 crossings, and the recorded
    coordinates are the complex-width components (Re A_rho, Im A_rho) of
    the first degree of freedom.  Seeds must lie on a common energy shell.
    Orbits that collapse or escape return their partial crossing list
    tagged with the termination reason.
    """
    if sys.ndof < 2:
        raise ValueError("a surface of section needs at least 2 degrees of freedom")
    if coord is None:
        coord = sys.ndof - 1
    seeds = [ (tuple(q), tuple(p)) for q, p in seeds ]
    energies = [sys.energy(q, p) for q, p in seeds]
    e0 = energies[0]
    scale = max(abs(e0), 1.0)
    for e in energies:
        if abs(e - e0) > energy_rtol * scale:
            raise ValueError("seeds are not on a common energy shell")
    if t_max is None:
        t_max = math.inf

    orbits = []
    for oid, (q, p) in enumerate(seeds):
        f = sys.force(q)
        points = []
        t = 0.0
        termination = "completed"
        while len(points) < n_crossings and t < t_max:
            q1, p1, f1 = verlet_step(sys, q, p, dt, f)
            if f1 is None:
                termination = "collapse"
                break
            ev = _width_event(q1, collapse_width, escape_width, p1)
            if ev is not None:
                termination = ev
                break
            pc0 = p[coord] * direction
            pc1 = p1[coord] * direction
            if pc0 < 0.0 <= pc1:
                tau, qc, pc = _refine_crossing(sys, q, p, f, dt, coord,
                                               tol=crossing_tol)
                x, y = width_section_coords(qc, pc)
                points.append(SectionPoint(re_a_rho=x, im_a_rho=y,
                                           time=t + tau, orbit_id=oid,
                                           q=qc, p=pc))
            q, p, f = q1, p1, f1
            t += dt
        else:
            if len(points) < n_crossings:
                termination = "step-limit"
        orbits.append(SectionOrbit(orbit_id=oid, points=points,
                                   termination=termination))
    return orbits


def seed_on_section(sys: HamSystem, energy, window, n_seeds, *, coord=None,
                    q_solve_range=(1e-8, 1e8), h_tol=1e-10):
    """Seeds on the section plane p[coord] = 0 at a fixed energy.

    Lays a near-square grid over (q_rho, p_rho) in ``window``
    = (q_lo, q_hi, p_lo, p_hi), then solves H = energy for the sectioned
    coordinate by bracketed bisection on a log grid; all real solutions are
    kept.  Returns a list of (q, p) tuples, possibly smaller than requested
    if parts of the window are outside the energy shell.
    """
    if sys.ndof != 2:
        raise ValueError("energy-shell seeding is implemented for 2 dof")
    if coord is None:
        coord = sys.ndof - 1
    q_lo, q_hi, p_lo, p_hi = window
    if isinstance(n_seeds, tuple):
        nq, npr = n_seeds
    elif p_lo == p_hi:
        nq, npr = n_seeds, 1          # degenerate momentum window: a q line
    elif q_lo == q_hi:
        nq, npr = 1, n_seeds
    else:
        nq = max(1, int(round(math.sqrt(n_seeds))))
        npr = max(1, int(math.ceil(n_seeds / nq)))
    qr_vals = np.linspace(q_lo, q_hi, nq)
    pr_vals = np.linspace(p_lo, p_hi, npr)

    kc = sys.kinetic_coeff
    seeds = []
    zgrid = np.geomspace(q_solve_range[0], q_solve_range[1], 600)
    for qr in qr_vals:
        for pr in pr_vals:
            target = energy - kc * pr * pr

            def res(qz):
                return sys.potential((qr, qz)) - target

            vals = np.array([res(z) for z in zgrid])
            good = np.isfinite(vals)
            for i in np.flatnonzero(good[:-1] & good[1:] &
                                    (np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)):
                lo, hi = zgrid[i], zgrid[i + 1]
                flo = vals[i]
                for _ in range(200):
                    mid = 0.5 * (lo + hi)
                    fm = res(mid)
                    if flo * fm < 0:
                        hi = mid
                    else:
                        lo, flo = mid, fm
                    if hi - lo <= 1e-15 * mid:
                        break
                qz = 0.5 * (lo + hi)
                state = ((qr, qz), (pr, 0.0))
                if abs(sys.energy(*state) - energy) <= h_tol * max(abs(energy), 1.0):
                    seeds.append(state)
    return seeds


def mle(sys: HamSystem, q0, p0, t_end, dt, *, renorm_interval=1.0, d0=1e-8,
        collapse_width=COLLAPSE_WIDTH, escape_width=ESCAPE_WIDTH) -> MLEResult:
    """Benettin two-trajectory estimate of the maximal Lyapunov exponent.

    A shadow orbit displaced by d0 is renormalized back to distance d0
    every ``renorm_interval`` time units; the estimate is the mean of the
    last quarter of the running average.  If either orbit collapses or
    escapes the partial estimate is returned tagged with the reason.
    """
    n_ren = max(1, int(round(renorm_interval / dt)))
    n_total = int(round(t_end / dt))
    n_blocks = max(1, n_total // n_ren)

    dim = 2 * sys.ndof
    delta = np.full(dim, d0 / math.sqrt(dim))
    q1, p1 = tuple(q0), tuple(p0)
    q2 = tuple(qi + d for qi, d in zip(q1, delta[:sys.ndof]))
    p2 = tuple(pi + d for pi, d in zip(p1, delta[sys.ndof:]))
    f1, f2 = sys.force(q1), sys.force(q2)

    s_log = 0.0
    running, times = [], []
    termination = "completed"
    t = 0.0
    for _ in range(n_blocks):
        for _ in range(n_ren):
            q1, p1, f1 = verlet_step(sys, q1, p1, dt, f1)
            if f1 is None:
                termination = "collapse"
                break
            q2, p2, f2 = verlet_step(sys, q2, p2, dt, f2)
            if f2 is None:
                termination = "collapse"
                break
            ev = _width_event(q1, collapse_width, escape_width, p1)
            if ev is not None:
                termination = ev
                break
        if termination != "completed":
            break
        t += n_ren * dt
        dvec = np.array(q2 + p2) - np.array(q1 + p1)
        d = float(np.linalg.norm(dvec))
        if d == 0.0:
            d = d0 * 1e-6
        s_log += math.log(d / d0)
        running.append(s_log / t)
        times.append(t)
        shift = dvec * (d0 / d)
        q2 = tuple(qi + s for qi, s in zip(q1, shift[:sys.ndof]))
        p2 = tuple(pi + s for pi, s in zip(p1, shift[sys.ndof:]))
        f2 = sys.force(q2) if min(q2) > 0 else None
        if f2 is None:
            termination = "collapse"
            break

    running = np.array(running)
    times = np.array(times)
    if len(running) == 0:
        return MLEResult(estimate=math.nan, running=running, times=times,
                         termination=termination)
    tail = running[3 * len(running) // 4:]
    return MLEResult(estimate=float(np.mean(tail)), running=running,
                     times=times, termination=termination)


def classify(termination: str, mle_estimate: float, threshold: float) -> str:
    """Label an orbit from its termination and Lyapunov estimate.

    The threshold is conventionally 1e-2 times the fastest oscillation
    frequency at the ground state of the system under study.
    """
    if termination in ("collapse", "escape"):
        return termination
    if not math.isfinite(mle_estimate):
        raise ValueError("no Lyapunov estimate for a bound orbit")
    return "bound-chaotic" if mle_estimate > threshold else "bound-regular"
