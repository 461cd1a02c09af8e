"""Command-line front end: ``hirota-painleve <subcommand> [options]``.

Configuration precedence is built-in defaults, then the ``--config`` JSON,
then explicit flags. Exit codes: 0 success, 1 numerical failure, 2 usage or
I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .exceptions import InvalidInputError, NumericalError
from .harness import ExperimentConfig, signature_grid, validate, write_validation
from .io import read_json, write_json, write_painleve, write_scattering, write_signature, write_snapshot
from .painleve2 import NEAR_ONE, eval_table, solve
from .pde_oracle import evolve_snapshots, mass
from .scattering import reflection_at_kstar, scattering_data

log = logging.getLogger("hirota_painleve")

UNITARITY_LIMIT = 1e-8
ROBUSTNESS_SHIFT = 4.0
# keys a config file may carry besides the experiment fields
COMMAND_KEYS = {"rho", "xi", "window", "resolution"}


class CheckFailed(Exception):
    """A computed invariant or acceptance check did not hold."""


def _merged(args) -> dict:
    merged = {}
    if args.config:
        payload = read_json(args.config)
        if not isinstance(payload, dict):
            raise InvalidInputError(f"{args.config}: config must be a JSON object")
        merged.update(payload.get("config", payload) if isinstance(payload.get("config"), dict) else payload)
    for key, value in vars(args).items():
        if key.startswith("opt_") and value is not None:
            merged[key[4:]] = value
    if args.tol is not None:
        merged["scatter_rtol"] = args.tol
        merged["painleve_tol"] = args.tol
    if args.out is not None:
        merged["out"] = args.out
    fields = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(merged) - fields - COMMAND_KEYS
    if unknown:
        raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
    return merged


def _experiment(merged) -> ExperimentConfig:
    fields = {f.name for f in dataclasses.fields(ExperimentConfig)}
    return ExperimentConfig(**{k: v for k, v in merged.items() if k in fields})


def cmd_scatter(args) -> int:
    cfg = _experiment(_merged(args))
    data = scattering_data(cfg.profile(), cfg.k_grid(), cfg.params, rtol=cfg.scatter_rtol)
    rho, gamma = reflection_at_kstar(data)
    out = Path(cfg.out)
    write_scattering(out / "scattering.csv", data)
    defect = float(data.unitarity_defect.max())
    print(f"rho = {rho:.15g}\ngamma = {gamma:.15g}\nkstar = {data.kstar:.15g}")
    print(f"max ||a|^2 - |b|^2 - 1| = {defect:.3e}")
    if defect >= UNITARITY_LIMIT:
        raise CheckFailed(f"unitarity defect {defect:.3e} exceeds {UNITARITY_LIMIT:g}")
    return 0


def cmd_painleve(args) -> int:
    merged = _merged(args)
    cfg = _experiment(merged)
    if "rho" not in merged:
        raise InvalidInputError("painleve needs --rho (or a 'rho' config key)")
    rho = float(merged["rho"])
    if NEAR_ONE <= rho < 1:
        print(f"warning: rho={rho} approaches the excluded value 1; accuracy degrades", file=sys.stderr)
    table = solve(rho, cfg.s_min, cfg.s0, cfg.painleve_tol)
    shifted = solve(rho, cfg.s_min, cfg.s0 + ROBUSTNESS_SHIFT, cfg.painleve_tol)
    y0 = eval_table(table, 0.0)[0]
    delta = abs(y0 - eval_table(shifted, 0.0)[0])
    write_painleve(Path(cfg.out) / "painleve.csv", table)
    print(f"y(0) = {y0:.15g}\nmax residual = {table.max_residual:.3e}")
    print(f"s0-robustness |y(0; s0={cfg.s0:g}) - y(0; s0={cfg.s0 + ROBUSTNESS_SHIFT:g})| = {delta:.3e}")
    return 0


def cmd_signature(args) -> int:
    merged = _merged(args)
    cfg = _experiment(merged)
    params = cfg.params
    xi = float(merged.get("xi", params.xi_critical))
    window = merged.get("window")
    resolution = int(merged.get("resolution", 201))
    re_k, im_k, sign, roots = signature_grid(params, xi, window, resolution)
    out = Path(cfg.out)
    write_signature(out / "signature.csv", re_k, im_k, sign)
    write_json(out / "stationary_points.json",
               {"xi": xi, "k1": [roots.k1.real, roots.k1.imag], "k2": [roots.k2.real, roots.k2.imag],
                "degenerate": roots.degenerate})
    print(f"k1 = {complex(roots.k1)}\nk2 = {complex(roots.k2)}")
    return 0


def cmd_evolve(args) -> int:
    cfg = _experiment(_merged(args))
    states = evolve_snapshots(cfg.profile(), cfg.times, cfg.solver, cfg.params, cfg.domain,
                              progress=lambda t: log.info("t = %.6g", t))
    out = Path(cfg.out)
    for state in states:
        m = mass(state)
        write_snapshot(out / f"snapshot_t{state.time:g}.csv", state, m, cfg.to_dict())
        print(f"t = {state.time:g}  mass = {m:.15g}")
    return 0


def cmd_validate(args) -> int:
    cfg = _experiment(_merged(args))
    report = validate(cfg, progress=lambda t: log.info("t = %.6g", t))
    path = write_validation(report, cfg.out)
    print(f"rho = {report['rho']:.15g}  gamma = {report['gamma']:.15g}  y(0) = {report['y0']:.15g}")
    for rec in report["per_time"]:
        extra = f"  ratio(s=0) = {rec['modulus_ratio_s0']:.4f}" if "modulus_ratio_s0" in rec else ""
        print(f"t = {rec['t']:g}  max err = {rec['max_err']:.4e}  modulus err = {rec['max_modulus_err']:.4e}"
              f"  phase mismatch = {rec['max_phase_mismatch']:.4f}{extra}")
    if report["degenerate"]:
        print("decay fit: degenerate (vanishing error), not fitted")
    else:
        fit = report["fit"]
        note = f"  excluded t = {fit['excluded']}" if fit["excluded"] else ""
        print(f"decay exponent = {fit['exponent']:.4f}  r^2 = {fit['r_squared']:.4f}{note}")
        for name, ok in report["checks"].items():
            print(f"{name}: {'PASS' if ok else 'FAIL'}")
    print(f"report written to {path}")
    if not all(report["checks"].values()):
        raise CheckFailed("validation checks failed")
    return 0


def _add_global(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=default, help="JSON config (or a validation report)")
    parser.add_argument("--out", default=default, help="output directory")
    parser.add_argument("--tol", type=float, default=default, help="ODE tolerance for scattering and Painleve II")
    parser.add_argument("-v", "--verbose", action="store_true", default=default)


def _add_params(p):
    p.add_argument("--alpha", dest="opt_alpha", type=float)
    p.add_argument("--beta", dest="opt_beta", type=float)


def _add_profile(p):
    p.add_argument("--profile-csv", dest="opt_profile_csv", help="CSV with header x,re_u,im_u")
    p.add_argument("--family", dest="opt_profile_family", choices=("sech", "gaussian"))
    p.add_argument("--amplitude", dest="opt_profile_amplitude", type=float)
    p.add_argument("--width", dest="opt_profile_width", type=float)
    p.add_argument("--k-min", dest="opt_k_min", type=float)
    p.add_argument("--k-max", dest="opt_k_max", type=float)
    p.add_argument("--n-k", dest="opt_n_k", type=int)


def _add_painleve(p):
    p.add_argument("--s-min", dest="opt_s_min", type=float)
    p.add_argument("--s0", dest="opt_s0", type=float)


def _add_solver(p):
    p.add_argument("--times", dest="opt_times", type=float, nargs="+")
    p.add_argument("--dt", dest="opt_dt", type=float)
    p.add_argument("--x-min", dest="opt_x_min", type=float)
    p.add_argument("--x-max", dest="opt_x_max", type=float)
    p.add_argument("--n", dest="opt_n", type=int)
    p.add_argument("--no-dealias", dest="opt_dealias", action="store_const", const=False)
    p.add_argument("--edge-threshold", dest="opt_edge_threshold", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hirota-painleve", description=__doc__.splitlines()[0])
    _add_global(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scatter", help="direct scattering data of an initial profile")
    _add_params(p)
    _add_profile(p)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("painleve", help="tabulate the decaying Painleve II solution")
    p.add_argument("--rho", dest="opt_rho", type=float)
    _add_painleve(p)
    p.set_defaults(func=cmd_painleve)

    p = sub.add_parser("signature", help="sign of Re(i theta) over a complex k window")
    _add_params(p)
    p.add_argument("--xi", dest="opt_xi", type=float)
    p.add_argument("--window", dest="opt_window", type=float, nargs=4,
                   metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"))
    p.add_argument("--resolution", dest="opt_resolution", type=int)
    p.set_defaults(func=cmd_signature)

    p = sub.add_parser("evolve", help="run the direct solver and write snapshots")
    _add_params(p)
    _add_profile(p)
    _add_solver(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("validate", help="compare the solver with the transition asymptotics")
    _add_params(p)
    _add_profile(p)
    _add_painleve(p)
    _add_solver(p)
    p.add_argument("--s-values", dest="opt_s_values", type=float, nargs="+")
    p.add_argument("--M", dest="opt_M", type=float)
    p.set_defaults(func=cmd_validate)

    for name in sub.choices.values():
        _add_global(name, suppress=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InvalidInputError, FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, CheckFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
