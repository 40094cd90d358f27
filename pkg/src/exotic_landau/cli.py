"""Command-line driver.

Exit codes: 0 success, 2 input or precondition violation, 3 numerical
threshold breach.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import List, Sequence

import numpy as np

from . import kms, magnetics, phase_dist
from .config import RunConfig, load_config
from .errors import InvalidParameter, LandauError, ThresholdBreach
from .model import derive, enumerate_levels
from .quadrature import PhaseQuadrature, PlanarGrid

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


class Table:
    def __init__(self, columns: Sequence[str], rows: List[Sequence] = None):
        self.columns = list(columns)
        self.rows = [list(r) for r in (rows or [])]

    def render(self, fmt: str) -> str:
        if fmt == "json":
            objs = [dict(zip(self.columns, (_plain(v) for v in r))) for r in self.rows]
            return json.dumps(objs, indent=2) + "\n"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows([[_plain(v) for v in r] for r in self.rows])
        return buf.getvalue()


def _plain(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return int(v)
    return v


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# --- commands ---------------------------------------------------------------

def cmd_spectrum(cfg: RunConfig) -> int:
    params = cfg.model_params()
    d = derive(params, cfg.eps_crit)
    levels = enumerate_levels(d, params, cfg.e_max)
    _emit(Table(["n_plus", "n_minus", "energy"], levels).render(cfg.format), cfg.out)
    return EXIT_OK


def _grid_table(quad, ens, fn, scales):
    rows = []
    for mode, nbar, scale in (("plus", ens.nbar, scales[0]), ("minus", ens.nbar_star, scales[1])):
        u, _ = quad.radial_nodes(scale)
        phi = quad.angles()
        z = np.sqrt(u)[:, None] * np.exp(1j * phi)[None, :]
        vals = fn(np.abs(z) ** 2, nbar)
        for zz, v in zip(z.ravel(), vals.ravel()):
            rows.append((mode, zz.real, zz.imag, v))
    return Table(["mode", "re_z", "im_z", "value"], rows)


def cmd_distributions(cfg: RunConfig) -> int:
    params = cfg.model_params()
    d = derive(params, cfg.eps_crit)
    ens = phase_dist.ensemble(d, params)
    quad = PhaseQuadrature(cfg.n_radial, cfg.n_angular)
    for nbar in (ens.nbar, ens.nbar_star):
        phase_dist.p_mode(0.0, nbar, cfg.eps_p)  # DeltaLimit before anything is written

    q_norm = phase_dist.husimi_norm(ens, quad).value
    p_norm = phase_dist.p_norm(ens, quad, cfg.eps_p).value
    q_tab = _grid_table(quad, ens, phase_dist.husimi_mode, (ens.nbar + 1, ens.nbar_star + 1))
    p_tab = _grid_table(quad, ens, lambda u, n: phase_dist.p_mode(u, n, cfg.eps_p),
                        (ens.nbar, ens.nbar_star))

    out = Path(cfg.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    ext = "json" if cfg.format == "json" else "csv"
    (out / f"q_grid.{ext}").write_text(q_tab.render(cfg.format))
    (out / f"p_grid.{ext}").write_text(p_tab.render(cfg.format))
    report = f"q_norm={q_norm!r} p_norm={p_norm!r}\n"
    (out / "report.txt").write_text(report)
    sys.stdout.write(report)
    bad = max(abs(q_norm - 1), abs(p_norm - 1))
    if bad > cfg.tol_norm:
        raise ThresholdBreach(f"normalization deviates by {bad:.3g} > {cfg.tol_norm:g}")
    return EXIT_OK


def cmd_wehrl(cfg: RunConfig) -> int:
    params = cfg.model_params()
    d = derive(params, cfg.eps_crit)
    ens = phase_dist.ensemble(d, params)
    quad = PhaseQuadrature(cfg.n_radial, cfg.n_angular)
    wp, wm = phase_dist.wehrl_factors(ens)
    np_, nm = (phase_dist.wehrl_mode_numeric(n, quad).value for n in (ens.nbar, ens.nbar_star))
    closed = wp * wm
    numeric = phase_dist.wehrl_numeric(ens, quad, cfg.tol_wehrl)
    diff = abs(closed - numeric)
    tab = Table(
        ["closed", "numeric", "abs_diff", "w_plus", "w_minus", "w_plus_numeric", "w_minus_numeric"],
        [[closed, numeric, diff, wp, wm, np_, nm]],
    )
    _emit(tab.render(cfg.format), cfg.out)
    if diff > cfg.tol_wehrl:
        raise ThresholdBreach(f"|closed - numeric| = {diff:.3g} > {cfg.tol_wehrl:g}")
    return EXIT_OK


def _sweep_contexts(cfg: RunConfig):
    params = cfg.model_params()
    betas = cfg.betas or (cfg.beta,)
    ctxs = []
    for beta in betas:
        if cfg.kappas:
            # kappa = -eB theta at fixed B: vary theta
            if params.field <= 0:
                raise InvalidParameter("a kappa sweep needs field > 0")
            grid = [params.replace(beta=beta, theta=-k / (params.charge * params.field))
                    for k in cfg.kappas]
        else:
            grid = [params.replace(beta=beta, field=b) for b in (cfg.fields or (params.field,))]
        for p in grid:
            ctxs.append(magnetics.MagnetContext(
                p, cfg.volume, cfg.particles, cfg.thermal_wavelength_beta, eps_crit=cfg.eps_crit))
    return ctxs


def cmd_magnet_sweep(cfg: RunConfig) -> int:
    for k in cfg.kappas:
        if not -1 < k <= 0:
            raise InvalidParameter(f"kappa={k} outside (-1, 0]")
    ctxs = _sweep_contexts(cfg)
    rows = [magnetics.sweep_row(c) for c in ctxs]
    _emit(Table(magnetics.SWEEP_COLUMNS, rows).render(cfg.format), cfg.out)
    worst = max(max(r.res_M, r.res_chi) for r in rows)
    if worst > cfg.tol_residual:
        raise ThresholdBreach(f"finite-difference residual {worst:.3g} > {cfg.tol_residual:g}")
    return EXIT_OK


def _random_block_matrix(rng, N, K):
    X = np.zeros((N, N), dtype=complex)
    X[:K, :K] = rng.normal(size=(K, K)) + 1j * rng.normal(size=(K, K))
    return kms.HSMatrix(X)


def cmd_kms_check(cfg: RunConfig) -> int:
    N = cfg.kms_cutoff
    ts = kms.thermal_state(cfg.kms_omega_beta, 1.0, N)
    grid = PlanarGrid(cfg.kms_radius, cfg.kms_nodes, cfg.kms_nodes)
    if grid.tail_bound > cfg.tol_resolution:
        raise kms.CutoffTooSmall(f"grid radius {cfg.kms_radius} too small (rim weight {grid.tail_bound:.3g})")
    rng = np.random.default_rng(cfg.seed)
    K = N // 4

    unit = max(kms.unitarity_defect(z, N) for z in (0.5, 0.7 + 0.3j, 1.2j) if abs(z) ** 2 <= N / 4)
    quad = PhaseQuadrature(64, 64)
    iso = 0.0
    for _ in range(cfg.kms_pairs):
        X, Y = _random_block_matrix(rng, N, K), _random_block_matrix(rng, N, K)
        ref = kms.hs_inner(X, Y)
        iso = max(iso, abs(kms.wigner_inner_quadrature(X, Y, quad) - ref) / abs(ref))
    res = kms.kms_resolution_check(ts, grid, cfg.tol_resolution)
    rho = ts.density()
    qnorm = kms.kms_husimi_norm(ts, rho, grid)
    pts = rng.uniform(-cfg.kms_radius, cfg.kms_radius, size=(cfg.kms_points, 2)) @ [1, 1j]
    qmin = float(np.min(kms.kms_husimi(pts, ts, rho)))

    metrics = [
        ("thermal_tail", ts.tail, kms.THERMAL_TAIL),
        ("displacement_unitarity", unit, cfg.tol_unitarity),
        ("wigner_isometry_rel_error", iso, cfg.tol_isometry),
        ("resolution_deviation", res.deviation, cfg.tol_resolution),
        ("resolution_identity_defect", res.identity_deviation, None),
        ("resolution_left_trace_deviation", res.left_trace_deviation, None),
        ("husimi_norm_deviation", abs(qnorm - 1.0), cfg.tol_kms_norm),
        ("husimi_min_random_points", qmin, None),
        ("grid_tail_bound", res.grid_tail_bound, None),
        ("inner_block", res.block, None),
    ]
    rows, breaches = [], []
    for name, value, thr in metrics:
        if thr is None:
            status = "info"
        else:
            status = "ok" if value <= thr else "breach"
        if name == "husimi_min_random_points":
            status = "ok" if value > 0 else "breach"
        if status == "breach":
            breaches.append(name)
        rows.append((name, value, "" if thr is None else thr, status))
    _emit(Table(["metric", "value", "threshold", "status"], rows).render(cfg.format), cfg.out)
    if breaches:
        raise ThresholdBreach("threshold breach: " + ", ".join(breaches))
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "distributions": cmd_distributions,
    "wehrl": cmd_wehrl,
    "magnet-sweep": cmd_magnet_sweep,
    "kms-check": cmd_kms_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--out", help="output file (directory for 'distributions')")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int, help="seed for random-point checks")
    parser = argparse.ArgumentParser(
        prog="exotic-landau",
        description="Density-operator numerics for the exotic Landau problem and KMS coherent states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        overrides = {k: getattr(args, k) for k in ("out", "format", "seed") if getattr(args, k) is not None}
        cfg = cfg.replace(**overrides)
        if cfg.format not in ("csv", "json"):
            raise InvalidParameter(f"format must be csv or json, got {cfg.format!r}")
        return COMMANDS[args.command](cfg)
    except LandauError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
