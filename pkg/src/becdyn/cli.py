"""Command-line front end.

Each subcommand resolves its parameters to the scaled (N = 1 equivalent)
form, runs the computation, writes one delimiter-separated data file with
a single header line, and drops a JSON run manifest next to it.  Data
files are byte-identical for identical (config, version) pairs; wall-clock
timestamps live only in the manifest.

Exit codes: 0 success (including tagged physical terminations such as
collapse), 1 configuration/schema errors, 2 physics-domain errors
(e.g. parameters below the fold where a branch is required).
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

import click
import numpy as np

from . import dipolar, dynamics, monopolar, radial, scaling
from .manifest import (
    ConfigError,
    PhysicsDomainError,
    RunManifest,
    apply_config,
    format_table,
    load_config,
    pool_map,
)
from .radial import ShootingError


def _merge_config(opts: dict) -> dict:
    cfg_path = opts.pop("config", None)
    if cfg_path:
        cfg = load_config(cfg_path)
        opts = apply_config(cfg, opts, set(opts))
    return opts


def _write_outputs(command, opts, params, settings, header, rows, output,
                   termination="completed", extra_tables=()):
    out = Path(output)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(format_table(header, rows), encoding="utf-8")
    manifest = RunManifest(command=command, argv=sys.argv[1:],
                           params=params, settings=settings)
    manifest.outputs.append(str(out))
    for name, hdr, extra_rows in extra_tables:
        p = out.with_suffix(out.suffix + f".{name}.tsv")
        p.write_text(format_table(hdr, extra_rows), encoding="utf-8")
        manifest.outputs.append(str(p))
    manifest.finish(termination)
    mpath = out.with_suffix(out.suffix + ".manifest.json")
    if mpath.exists():
        mpath.unlink()          # manifests are write-once per path; replace stale ones
    manifest.write(mpath)
    click.echo(f"wrote {out} ({len(rows)} rows), manifest {mpath}")


def _mono_scaled(n, a, gamma, scaled):
    if scaled:
        return scaling.MonopolarScaled(gamma_scaled=gamma, a_scaled=a)
    return scaling.to_scaled_monopolar(
        scaling.MonopolarPhysical(n_particles=n, a_over_au=a, gamma=gamma))


def _dip_scaled(n, a, gamma_rho, gamma_z, gamma_bar, aspect, scaled):
    if scaled:
        if gamma_bar is None or aspect is None:
            raise ConfigError("--scaled dipolar input needs --gamma-bar and --aspect")
        return scaling.DipolarScaled(gamma_bar_scaled=gamma_bar,
                                     aspect_ratio=aspect, a_scaled=a)
    if gamma_rho is None or gamma_z is None:
        raise ConfigError("physical dipolar input needs --gamma-rho and --gamma-z")
    return scaling.to_scaled_dipolar(
        scaling.DipolarPhysical(n_particles=n, a_over_ad=a,
                                gamma_rho=gamma_rho, gamma_z=gamma_z))


@click.group()
def cli():
    """Condensates with long-range interactions as classical Hamiltonian
    systems, plus an exact radial solver."""


# ----------------------------------------------------------------------
@cli.command("bifurcate-mono")
@click.option("--a-min", type=float, required=True, help="sweep start (scattering length)")
@click.option("--a-max", type=float, required=True, help="sweep end")
@click.option("--points", type=int, default=200, show_default=True)
@click.option("--gamma", type=float, default=0.0, show_default=True,
              help="trap frequency (0 = self-trapped)")
@click.option("--n", type=int, default=1, show_default=True, help="particle number")
@click.option("--scaled/--physical", default=True, show_default=True,
              help="whether inputs are already the reduced parameters")
@click.option("--output", "-o", default="bifurcate-mono.tsv", show_default=True)
@click.option("--config", type=click.Path(exists=True), default=None)
def bifurcate_mono(**opts):
    """Sweep the scattering length and emit both fixed-point branches."""
    opts = _merge_config(opts)
    n2 = float(opts["n"]) ** 2
    if opts["scaled"]:
        gamma = opts["gamma"]
        a_lo, a_hi = opts["a_min"], opts["a_max"]
    else:
        gamma = opts["gamma"] / n2
        a_lo, a_hi = n2 * opts["a_min"], n2 * opts["a_max"]
    rows = []
    for a in np.linspace(a_lo, a_hi, opts["points"]):
        for branch_id, fp in enumerate(monopolar.fixed_points(float(a), gamma)):
            rows.append((float(a), branch_id, fp.q_star, fp.energy, fp.mu, fp.kind))
    _write_outputs("bifurcate-mono", opts,
                   params={"gamma_scaled": gamma, "a_min": a_lo, "a_max": a_hi},
                   settings={"points": opts["points"]},
                   header=("a", "branch_id", "q_star", "energy", "mu", "kind"),
                   rows=rows, output=opts["output"])


# ----------------------------------------------------------------------
@cli.command("bifurcate-dip")
@click.option("--a-min", type=float, required=True)
@click.option("--a-max", type=float, required=True)
@click.option("--points", type=int, default=60, show_default=True)
@click.option("--gamma-bar", type=float, default=None,
              help="scaled N^2 gamma_bar (with --scaled)")
@click.option("--aspect", type=float, default=None, help="aspect ratio gamma_z/gamma_rho")
@click.option("--gamma-rho", type=float, default=None)
@click.option("--gamma-z", type=float, default=None)
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--scaled/--physical", default=True, show_default=True)
@click.option("--seed-grid", type=int, default=8, show_default=True,
              help="Newton seed grid resolution per axis")
@click.option("--output", "-o", default="bifurcate-dip.tsv", show_default=True)
@click.option("--config", type=click.Path(exists=True), default=None)
def bifurcate_dip(**opts):
    """Sweep a/a_d at fixed trap and emit the minimum/saddle branches."""
    opts = _merge_config(opts)
    base = _dip_scaled(opts["n"], 0.0, opts["gamma_rho"], opts["gamma_z"],
                       opts["gamma_bar"], opts["aspect"], opts["scaled"])
    jobs = [(float(a), base.gamma_bar_scaled, base.aspect_ratio, opts["seed_grid"])
            for a in np.linspace(opts["a_min"], opts["a_max"], opts["points"])]
    rows = [r for chunk in pool_map(_dip_sweep_worker, jobs) for r in chunk]
    _write_outputs("bifurcate-dip", opts,
                   params={"gamma_bar_scaled": base.gamma_bar_scaled,
                           "aspect_ratio": base.aspect_ratio,
                           "a_min": opts["a_min"], "a_max": opts["a_max"]},
                   settings={"points": opts["points"], "seed_grid": opts["seed_grid"]},
                   header=("a", "branch", "q_rho", "q_z", "energy", "mu", "kind"),
                   rows=rows, output=opts["output"])


def _dip_sweep_worker(job):
    a, gbar, lam, seed_grid = job
    params = scaling.DipolarScaled(gamma_bar_scaled=gbar, aspect_ratio=lam,
                                   a_scaled=a)
    rows = []
    for branch, fp in enumerate(dipolar.fixed_points(params, seed_grid=seed_grid)):
        rows.append((a, branch, fp.q_rho_star, fp.q_z_star, fp.energy, fp.mu,
                     fp.kind))
    return rows


# ----------------------------------------------------------------------
@cli.command("landscape")
@click.option("--a", type=float, required=True)
@click.option("--gamma-bar", type=float, default=None)
@click.option("--aspect", type=float, default=None)
@click.option("--gamma-rho", type=float, default=None)
@click.option("--gamma-z", type=float, default=None)
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--scaled/--physical", default=True, show_default=True)
@click.option("--qr-min", type=float, required=True)
@click.option("--qr-max", type=float, required=True)
@click.option("--qz-min", type=float, required=True)
@click.option("--qz-max", type=float, required=True)
@click.option("--nq", type=int, default=80, show_default=True)
@click.option("--nz", type=int, default=80, show_default=True)
@click.option("--log-axes/--linear-axes", default=True, show_default=True)
@click.option("--output", "-o", default="landscape.tsv", show_default=True)
@click.option("--config", type=click.Path(exists=True), default=None)
def landscape(**opts):
    """Raster of the dipolar width potential for contour plotting."""
    opts = _merge_config(opts)
    params = _dip_scaled(opts["n"], opts["a"], opts["gamma_rho"], opts["gamma_z"],
                         opts["gamma_bar"], opts["aspect"], opts["scaled"])
    space = np.geomspace if opts["log_axes"] else np.linspace
    qr = space(opts["qr_min"], opts["qr_max"], opts["nq"])
    qz = space(opts["qz_min"], opts["qz_max"], opts["nz"])
    qq_r, qq_z = np.meshgrid(qr, qz, indexing="ij")
    v = dipolar.potential_grid(qq_r, qq_z, params)
    rows = [(float(qq_r[i, j]), float(qq_z[i, j]), float(v[i, j]))
            for i in range(opts["nq"]) for j in range(opts["nz"])]
    _write_outputs("landscape", opts,
                   params={"gamma_bar_scaled": params.gamma_bar_scaled,
                           "aspect_ratio": params.aspect_ratio,
                           "a_scaled": params.a_scaled},
                   settings={k: opts[k] for k in
                             ("qr_min", "qr_max", "qz_min", "qz_max", "nq", "nz")},
                   header=("q_rho", "q_z", "potential"),
                   rows=rows, output=opts["output"])


# ----------------------------------------------------------------------
@cli.command("portrait")
@click.option("--a", type=float, required=True)
@click.option("--gamma", type=float, default=0.0, show_default=True)
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--scaled/--physical", default=True, show_default=True)
@click.option("--q-min", type=float, default=0.5, show_default=True)
@click.option("--q-max", type=float, default=8.0, show_default=True)
@click.option("--orbits", type=int, default=12, show_default=True)
@click.option("--t-end", type=float, default=120.0, show_default=True)
@click.option("--dt", type=float, default=1e-3, show_default=True)
@click.option("--record-every", type=int, default=100, show_default=True)
@click.option("--output", "-o", default="portrait.tsv", show_default=True)
@click.option("--config", type=click.Path(exists=True), default=None)
def portrait(**opts):
    """Phase portrait of the one-dimensional width dynamics."""
    opts = _merge_config(opts)
    n2 = float(opts["n"]) ** 2
    a = opts["a"] if opts["scaled"] else n2 * opts["a"]
    gamma = opts["gamma"] if opts["scaled"] else opts["gamma"] / n2
    sys_ = monopolar.hamiltonian_system(a, gamma)
    rows = []
    terminations = {}
    for oid, q0 in enumerate(np.linspace(opts["q_min"], opts["q_max"], opts["orbits"])):
        traj = dynamics.integrate(sys_, (float(q0),), (0.0,), opts["t_end"],
                                  opts["dt"], record_every=opts["record_every"])
        terminations[oid] = traj.termination
        for t, q, p in zip(traj.times, traj.qs[:, 0], traj.ps[:, 0]):
            rows.append((oid, float(t), float(q), float(p)))
    _write_outputs("portrait", opts,
                   params={"a_scaled": a, "gamma_scaled": gamma},
                   settings={"t_end": opts["t_end"], "dt": opts["dt"],
                             "orbits": opts["orbits"],
                             "terminations": terminations},
                   header=("orbit_id", "t", "q", "p"),
                   rows=rows, output=opts["output"])


# ----------------------------------------------------------------------
def _dip_system_and_fixed_points(params, seed_grid=8):
    pts = dipolar.fixed_points(params, seed_grid=seed_grid)
    if not pts:
        raise PhysicsDomainError(
            "no stationary points at these parameters (below the fold)")
    return dipolar.hamiltonian_system(params), pts


def _ground_frequencies(pts):
    ground = pts[0]
    if ground.kind != "minimum":
        raise PhysicsDomainError("no stable ground state at these parameters")
    freqs = sorted({abs(ev.imag) for ev in ground.eigenvalues if ev.imag > 0})
    return freqs[0], freqs[-1]


@cli.command("poincare")
@click.option("--a", type=float, required=True)
@click.option("--gamma-bar", type=float, default=None)
@click.option("--aspect", type=float, default=None)
@click.option("--gamma-rho", type=float, default=None)
@click.option("--gamma-z", type=float, default=None)
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--scaled/--physical", default=True, show_default=True)
@click.option("--energy", type=float, required=True,
              help="energy shell (particle-number weighted, units of E_d)")
@click.option("--window", type=float, nargs=4, default=None,
              help="seed window: qr_lo qr_hi pr_lo pr_hi (default: around the minimum)")
@click.option("--seeds", type=int, default=16, show_default=True)
@click.option("--crossings", type=int, default=200, show_default=True)
@click.option("--dt", type=float, default=None, help="default 0.02 / (fastest ground frequency)")
@click.option("--t-max-factor", type=float, default=4000.0, show_default=True,
              help="orbit time budget in units of the slow ground period")
@click.option("--direction", type=click.Choice(["up", "down", "both"]),
              default="up", show_default=True)
@click.option("--output", "-o", default="poincare.tsv", show_default=True)
@click.option("--config", type=click.Path(exists=True), default=None)
def poincare_cmd(**opts):
    """Poincare surface of section of the dipolar width dynamics on the
    p_z = 0 plane, recorded as (Re A_rho, Im A_rho)."""
    opts = _merge_config(opts)
    params = _dip_scaled(opts["n"], opts["a"], opts["gamma_rho"], opts["gamma_z"],
                         opts["gamma_bar"], opts["aspect"], opts["scaled"])
    sys_, pts = _dip_system_and_fixed_points(params)
    w_slow, w_fast = _ground_frequencies(pts)
    e0 = pts[0].energy
    if opts["energy"] <= e0:
        raise PhysicsDomainError(
            f"energy {opts['energy']:g} is below the ground-state energy {e0:g}")
    dt = opts["dt"] if opts["dt"] else 0.02 / w_fast
    window = opts["window"]
    if not window:
        qr0 = pts[0].q_rho_star
        p_scale = math.sqrt(2.0 * (opts["energy"] - e0))
        window = (0.75 * qr0, 1.5 * qr0, -0.35 * p_scale, 0.35 * p_scale)
    seeds = dynamics.seed_on_section(sys_, opts["energy"], window, opts["seeds"])
    if not seeds:
        raise PhysicsDomainError("energy shell does not intersect the seed window")
    t_max = opts["t_max_factor"] * 2.0 * math.pi / w_slow
    directions = {"up": (+1,), "down": (-1,), "both": (+1, -1)}[opts["direction"]]
    rows = []
    terminations = {}
    for direction in directions:
        orbits = dynamics.poincare(sys_, seeds, opts["crossings"], dt=dt,
                                   direction=direction, t_max=t_max)
        for orb in orbits:
            terminations[f"{orb.orbit_id}:{direction:+d}"] = orb.termination
            for pt in orb.points:
                rows.append((orb.orbit_id, direction, pt.time, pt.re_a_rho,
                             pt.im_a_rho, orb.termination))
    _write_outputs("poincare", opts,
                   params={"gamma_bar_scaled": params.gamma_bar_scaled,
                           "aspect_ratio": params.aspect_ratio,
                           "a_scaled": params.a_scaled,
                           "energy": opts["energy"]},
                   settings={"dt": dt, "window": list(window),
                             "seeds": len(seeds), "crossings": opts["crossings"],
                             "terminations": terminations},
                   header=("orbit_id", "direction", "t", "re_a_rho", "im_a_rho",
                           "termination"),
                   rows=rows, output=opts["output"])


# ----------------------------------------------------------------------
@cli.command("classify-sweep")
@click.option("--a", type=float, required=True)
@click.option("--gamma-bar", type=float, default=None)
@click.option("--aspect", type=float, default=None)
@click.option("--gamma-rho", type=float, default=None)
@click.option("--gamma-z", type=float, default=None)
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--scaled/--physical", default=True, show_default=True)
@click.option("--energies", type=str, required=True,
              help="comma-separated energy shells")
@click.option("--window", type=float, nargs=4, default=None)
@click.option("--seeds", type=int, default=20, show_default=True)
@click.option("--dt", type=float, default=None)
@click.option("--mle-steps", type=int, default=400_000, show_default=True)
@click.option("--renorm-every", type=int, default=1000, show_default=True)
@click.option("--mle-threshold", type=float, default=None,
              help="default 1e-2 * fastest ground frequency")
@click.option("--output", "-o", default="classify-sweep.tsv", show_default=True)
@click.option("--config", type=click.Path(exists=True), default=None)
def classify_sweep(**opts):
    """Classify seed ensembles over several energy shells and report the
    island fraction (share of bound-regular orbits) per shell."""
    opts = _merge_config(opts)
    params = _dip_scaled(opts["n"], opts["a"], opts["gamma_rho"], opts["gamma_z"],
                         opts["gamma_bar"], opts["aspect"], opts["scaled"])
    try:
        energies = [float(tok) for tok in opts["energies"].split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --energies list: {exc}") from exc
    if not energies:
        raise ConfigError("--energies is empty")
    sys_, pts = _dip_system_and_fixed_points(params)
    w_slow, w_fast = _ground_frequencies(pts)
    dt = opts["dt"] if opts["dt"] else 0.02 / w_fast
    threshold = (opts["mle_threshold"] if opts["mle_threshold"]
                 else 1e-2 * w_fast)
    e0 = pts[0].energy
    window = opts["window"]
    if not window:
        qr0 = pts[0].q_rho_star
        window = (0.35 * qr0, 1.8 * qr0, 0.0, 0.0)

    rows = []
    fractions = []
    pk = (params.gamma_bar_scaled, params.aspect_ratio, params.a_scaled)
    for e in energies:
        if e <= e0:
            fractions.append((e, 0, 0, math.nan))
            continue
        seeds = dynamics.seed_on_section(sys_, e, window, opts["seeds"])
        jobs = [(pk, seed, dt, opts["mle_steps"], opts["renorm_every"], threshold)
                for seed in seeds]
        outcomes = pool_map(_classify_worker, jobs)
        regular = 0
        for sid, (seed, (label, est)) in enumerate(zip(seeds, outcomes)):
            (qr, qz), (pr, _) = seed
            rows.append((e, sid, qr, qz, pr, label, est))
            regular += label == "bound-regular"
        frac = regular / len(seeds) if seeds else math.nan
        fractions.append((e, len(seeds), regular, frac))
    _write_outputs("classify-sweep", opts,
                   params={"gamma_bar_scaled": params.gamma_bar_scaled,
                           "aspect_ratio": params.aspect_ratio,
                           "a_scaled": params.a_scaled,
                           "energies": energies},
                   settings={"dt": dt, "window": list(window),
                             "seeds": opts["seeds"],
                             "mle_steps": opts["mle_steps"],
                             "renorm_every": opts["renorm_every"],
                             "mle_threshold": threshold},
                   header=("energy", "seed_id", "q_rho0", "q_z0", "p_rho0",
                           "classification", "mle"),
                   rows=rows, output=opts["output"],
                   extra_tables=[("fractions",
                                  ("energy", "seeds", "bound_regular",
                                   "island_fraction"),
                                  fractions)])


def _classify_worker(job):
    (gbar, lam, a), seed, dt, steps, renorm_every, threshold = job
    params = scaling.DipolarScaled(gamma_bar_scaled=gbar, aspect_ratio=lam,
                                   a_scaled=a)
    sys_ = dipolar.hamiltonian_system(params)
    (q, p) = seed
    res = dynamics.mle(sys_, q, p, t_end=steps * dt, dt=dt,
                       renorm_interval=renorm_every * dt)
    label = dynamics.classify(res.termination, res.estimate, threshold)
    return label, res.estimate


# ----------------------------------------------------------------------
@cli.command("stationary")
@click.option("--a", type=float, required=True)
@click.option("--gamma", type=float, default=0.0, show_default=True)
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--scaled/--physical", default=True, show_default=True)
@click.option("--branch", type=click.Choice(["stable", "unstable"]),
              default="stable", show_default=True)
@click.option("--method", type=click.Choice(["shoot", "itp"]),
              default="shoot", show_default=True)
@click.option("--r-max", type=float, default=16.0, show_default=True)
@click.option("--grid-n", type=int, default=2048, show_default=True)
@click.option("--checkpoint", type=click.Path(), default=None,
              help="also save the state in the binary checkpoint format")
@click.option("--output", "-o", default="stationary.tsv", show_default=True)
@click.option("--config", type=click.Path(exists=True), default=None)
def stationary(**opts):
    """Stationary GPE state on the radial grid (shooting or imaginary time)."""
    opts = _merge_config(opts)
    n2 = float(opts["n"]) ** 2
    a = opts["a"] if opts["scaled"] else n2 * opts["a"]
    gamma = opts["gamma"] if opts["scaled"] else opts["gamma"] / n2
    grid = radial.RadialGrid(r_max=opts["r_max"], n=opts["grid_n"])
    if opts["method"] == "itp":
        if opts["branch"] == "unstable":
            raise PhysicsDomainError(
                "imaginary time cannot converge to the unstable branch; "
                "use --method shoot")
        result = radial.ground_itp(a, gamma, grid)
    else:
        result = radial.stationary_shoot(a, gamma, opts["branch"], grid)
    u_hartree = radial.hartree_potential(grid, result.state.u_squared())
    rows = [(float(r), float(ur.real), float(ur.imag), float(uu))
            for r, ur, uu in zip(grid.r, result.state.u.astype(complex) / grid.r,
                                 u_hartree)]
    if opts["checkpoint"]:
        radial.save_state(opts["checkpoint"], result.state)
    _write_outputs("stationary", opts,
                   params={"a_scaled": a, "gamma_scaled": gamma},
                   settings={"r_max": opts["r_max"], "n": opts["grid_n"],
                             "method": opts["method"],
                             "summary": {"mu": result.mu, "energy": result.energy,
                                         "branch": result.branch,
                                         "residual": result.residual}},
                   header=("r", "re_psi", "im_psi", "hartree_potential"),
                   rows=rows, output=opts["output"])


# ----------------------------------------------------------------------
@cli.command("evolve")
@click.option("--a", type=float, required=True)
@click.option("--gamma", type=float, default=0.0, show_default=True)
@click.option("--n", type=int, default=1, show_default=True)
@click.option("--scaled/--physical", default=True, show_default=True)
@click.option("--branch", type=click.Choice(["stable", "unstable"]),
              default="unstable", show_default=True)
@click.option("--stretch", "stretch_f", type=float, default=1.0, show_default=True,
              help="norm-preserving deformation psi -> f psi(r f^(2/3))")
@click.option("--from-checkpoint", type=click.Path(exists=True), default=None,
              help="evolve a saved state instead of a freshly computed branch")
@click.option("--t-end", type=float, default=10.0, show_default=True)
@click.option("--dt", type=float, default=1e-4, show_default=True)
@click.option("--r-max", type=float, default=16.0, show_default=True)
@click.option("--grid-n", type=int, default=2048, show_default=True)
@click.option("--sample-every", type=int, default=200, show_default=True)
@click.option("--output", "-o", default="evolve.tsv", show_default=True)
@click.option("--config", type=click.Path(exists=True), default=None)
def evolve_cmd(**opts):
    """Real-time evolution of a (possibly stretched) stationary state,
    tracking width, energy and peak density."""
    opts = _merge_config(opts)
    n2 = float(opts["n"]) ** 2
    a = opts["a"] if opts["scaled"] else n2 * opts["a"]
    gamma = opts["gamma"] if opts["scaled"] else opts["gamma"] / n2
    if opts["from_checkpoint"]:
        state = radial.load_state(opts["from_checkpoint"])
    else:
        grid = radial.RadialGrid(r_max=opts["r_max"], n=opts["grid_n"])
        state = radial.stationary_shoot(a, gamma, opts["branch"], grid).state
    state = radial.stretch(state, opts["stretch_f"])
    result = radial.evolve(state, opts["t_end"], opts["dt"], a, gamma,
                           sample_every=opts["sample_every"])
    rows = list(zip(result.times.tolist(), result.widths.tolist(),
                    result.energies.tolist(), result.peak_densities.tolist()))
    _write_outputs("evolve", opts,
                   params={"a_scaled": a, "gamma_scaled": gamma,
                           "stretch": opts["stretch_f"], "branch": opts["branch"]},
                   settings={"t_end": opts["t_end"], "dt": opts["dt"],
                             "r_max": opts["r_max"], "n": opts["grid_n"],
                             "sample_every": opts["sample_every"]},
                   header=("t", "width", "energy", "peak_density"),
                   rows=rows, output=opts["output"],
                   termination=result.termination)


def main(argv=None):
    """Entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except (ConfigError, click.UsageError, click.ClickException) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except (PhysicsDomainError, ShootingError) as exc:
        click.echo(f"physics-domain error: {exc}", err=True)
        sys.exit(2)
    except click.Abort:
        sys.exit(1)
    return 0


if __name__ == "__main__":
    main()
