"""Command-line front end.

    bjjcat ground  --n 100 --lambda 1.2 --out runs/ground
    bjjcat sweep   --n 100 --lambda-range 0:2:0.05 --out runs/sweep
    bjjcat wigner  --n 100 --lambda 1.2 --nx 201 --np 201 --out runs/wigner
    bjjcat thermal --lambda-range 1.1:3:0.1 --gamma 0 --temp-range 2e-9:2e-8:2e-9
    bjjcat units   --mass 1.165e-26 --asc -0.21e-9 --omega-perp 6075.84 --omega-r 1306.9

All inputs are SI (kg, m, rad/s, K). Exit codes: 0 ok, 2 invalid
configuration, 3 numerical failure.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import json
import math
import os
import sys

import numpy as np

from bjjcat import __version__
from bjjcat import continuum, thermal, units
from bjjcat.errors import ConvergenceError, ValidityError
from bjjcat.model import (
    ModelParams,
    build_hamiltonian,
    fidelity_noon,
    imbalance_distribution,
    is_bimodal,
    lobe_center,
)
from bjjcat.output import DEFAULT_PRECISION, Report, Table, emit
from bjjcat.solver import doublet_splitting, ground_state, spectrum
from bjjcat.wigner import quadrature_checks, wigner_grid

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

NAN = float("nan")

# option -> default, per command; None means "required" is not enforced and the
# command decides
DEFAULTS = {
    "common": {"format": "csv", "precision": DEFAULT_PRECISION, "out": None},
    "ground": {"n": 100, "lambda": 0.0, "tol": 1e-10},
    "sweep": {"n": 100, "lambda_range": "0:2:0.05", "tol": 1e-10, "jobs": 1},
    "wigner": {"n": 100, "lambda": 1.2, "nx": 201, "np": 201, "pmax": None, "xmax": 1.2,
               "method": "closed", "checks": True},
    "thermal": {"n": 100, "lambda_range": "1.1:3:0.1", "gamma": 0.0,
                "omega_r": units.LI7_OMEGA_R, "temp_range": "2e-9:2e-8:2e-9",
                "threshold": thermal.DEFAULT_THRESHOLD},
    "units": {"n": units.LI7_N, "mass": units.LI7_MASS, "asc": units.LI7_SCATTERING_LENGTH,
              "omega_perp": units.LI7_OMEGA_PERP, "omega_r": units.LI7_OMEGA_R},
}


class ConfigError(ValueError):
    pass


def parse_range(text):
    """Inclusive ``a:b:step`` range; values are a + i*step rounded to 12 decimals."""
    try:
        a, b, step = (float(v) for v in str(text).split(":"))
    except ValueError:
        raise ConfigError(f"range must look like a:b:step, got {text!r}") from None
    if step <= 0 or b < a:
        raise ConfigError(f"range needs step > 0 and b >= a, got {text!r}")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + i * step, 12) for i in range(count)]


def _metadata(command, config):
    return {
        "tool": "bjjcat",
        "version": __version__,
        "command": command,
        "config": config,
        "constants": units.CONSTANTS,
    }


def _envelope_or_none(p):
    try:
        return continuum.envelope(p), ""
    except ValidityError as exc:
        return None, str(exc)


def cmd_ground(cfg):
    params = ModelParams(int(cfg["n"]), float(cfg["lambda"]))
    H = build_hamiltonian(params)
    result = ground_state(H, tol=float(cfg["tol"]))
    A = result.ground
    P = imbalance_distribution(A)
    x = A.imbalance()
    cp = continuum.ContinuumParams.from_model(params)
    env, env_error = _envelope_or_none(cp)
    env_P = env.discrete(params.N) if env is not None else np.full_like(P, NAN)
    V = continuum.effective_potential(x, cp)

    table = Table(
        [("n", ""), ("x", "1"), ("A_n", "1"), ("P_n", "1"), ("envelope_P_n", "1"),
         ("V", "hbar*omega_R")]
    )
    for i in range(params.N + 1):
        table.rows.append([i, x[i], A.coefficients[i], P[i], env_P[i], V[i]])

    scalars = {
        "E_0": result.ground_energy,
        "residual": float(result.residuals[0]),
        "fidelity_noon": fidelity_noon(A),
        "parity_asymmetry": A.parity_asymmetry(),
        "x0_empirical": lobe_center(P),
        "bimodal": is_bimodal(P),
    }
    if env is not None:
        scalars.update(
            {
                "envelope_kind": env.kind,
                "x0": env.x0,
                "sigma": env.sigma,
                "C": env.C,
                "C_asymptotic": env.C_asymptotic,
                "fit_error": continuum.fit_error(P, env),
                "envelope_valid": env.valid,
                "envelope_note": env.note,
            }
        )
        if env.kind == "double":
            scalars["C_squared_closed_form"] = continuum.cat_amplitude(cp)
    else:
        scalars["envelope_note"] = env_error
    return Report("ground", _metadata("ground", cfg), table, scalars)


def _sweep_point(args):
    N, lam, tol = args
    row = {"lambda": lam}
    try:
        H = build_hamiltonian(ModelParams(N, lam))
        res = spectrum(H, 2, tol=tol)
        P = imbalance_distribution(res.ground)
        row.update(
            E_0=res.ground_energy,
            gap=doublet_splitting(H, tol=tol),
            fidelity=fidelity_noon(res.ground),
            x0_empirical=lobe_center(P),
            bimodal=is_bimodal(P),
        )
        env, note = _envelope_or_none(continuum.ContinuumParams(N / 2, lam))
        if env is not None:
            row.update(x0_continuum=env.x0, sigma=env.sigma, fit_error=continuum.fit_error(P, env),
                       envelope_valid=env.valid)
        row["status"] = "ok" if env is not None else f"ok; {note}"
    except (ConvergenceError, ValidityError, ValueError) as exc:
        row["status"] = f"error: {exc}"
    return row


SWEEP_COLUMNS = [
    ("lambda", "1"), ("E_0", "hbar*omega_R"), ("gap", "hbar*omega_R"), ("fidelity", "1"),
    ("x0_empirical", "1"), ("bimodal", ""), ("x0_continuum", "1"), ("sigma", "1"),
    ("fit_error", "1"), ("envelope_valid", ""), ("status", ""),
]


def cmd_sweep(cfg):
    N = int(cfg["n"])
    ModelParams(N, 0.0)
    lams = parse_range(cfg["lambda_range"])
    tasks = [(N, lam, float(cfg["tol"])) for lam in lams]
    jobs = int(cfg["jobs"])
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    rows.sort(key=lambda r: r["lambda"])

    table = Table(SWEEP_COLUMNS)
    defaults = {"bimodal": None, "envelope_valid": None, "status": ""}
    for r in rows:
        table.rows.append([r.get(name, defaults.get(name, NAN)) for name, _ in SWEEP_COLUMNS])
    onset = next((r["lambda"] for r in rows if r.get("bimodal")), None)
    scalars = {
        "bimodality_onset": onset,
        "failed_points": sum(1 for r in rows if r["status"].startswith("error")),
    }
    return Report("sweep", _metadata("sweep", cfg), table, scalars)


def cmd_wigner(cfg):
    N = int(cfg["n"])
    params = ModelParams(N, float(cfg["lambda"]))
    env = continuum.envelope(continuum.ContinuumParams.from_model(params))
    pmax = cfg["pmax"]
    grid = wigner_grid(
        env, N, nx=int(cfg["nx"]), np_=int(cfg["np"]),
        p_max=None if pmax is None else float(pmax), x_max=float(cfg["xmax"]),
        method=cfg["method"],
    )
    table = Table([("x", "1"), ("p", "1"), ("W", "1")])
    for i, xv in enumerate(grid.x_axis):
        for j, pv in enumerate(grid.p_axis):
            table.rows.append([xv, pv, grid.values[i, j]])
    scalars = dict(grid.metadata)
    if cfg["checks"]:
        scalars["quadrature_checks"] = quadrature_checks(env)
    arrays = {"x_axis": grid.x_axis, "p_axis": grid.p_axis, "W": grid.values}
    return Report("wigner", _metadata("wigner", cfg), table, scalars, arrays=arrays)


def cmd_thermal(cfg):
    N = int(cfg["n"])
    omega_R = float(cfg["omega_r"])
    gamma = float(cfg["gamma"])
    threshold = float(cfg["threshold"])
    if omega_R <= 0:
        raise ConfigError("omega_r must be positive")
    lams = parse_range(cfg["lambda_range"])
    temps = parse_range(cfg["temp_range"]) if cfg["temp_range"] else []

    main = Table(
        [("lambda", "1"), ("omega", "rad/s"), ("omega_0", "rad/s"), ("alpha", "1"),
         ("T_c", "K"), ("T_c_over_T_0", "1"), ("V_0", "J"), ("B_c", "1"),
         ("V_0_over_kB_T_c", "1"), ("V_0_over_hbar_omega_0", "1"), ("quantum_metastable", ""),
         ("status", "")]
    )
    rates = Table(
        [("lambda", "1"), ("T", "K"), ("regime", ""), ("V_0_over_kB_T", "1"),
         ("thermal_metastable", ""), ("Gamma_cl", "1/s"), ("f_q", "1"), ("Gamma", "1/s"),
         ("status", "")]
    )
    T0 = units.reference_temperature(omega_R)
    for lam in lams:
        p = continuum.ContinuumParams(N / 2, lam)
        try:
            cr = thermal.crossover(p, omega_R, gamma)
        except ValidityError as exc:
            main.rows.append([lam] + [NAN] * 9 + [None, f"error: {exc}"])
            continue
        omega0 = continuum.oscillation_frequency(lam, omega_R)
        V0 = thermal.barrier_energy(p, omega_R)
        meta = thermal.metastability_check(p, 0, omega_R, threshold)
        main.rows.append(
            [lam, cr.omega, omega0, cr.alpha, cr.T_c, cr.T_c / T0, V0, cr.B_c,
             V0 / (units.K_B * cr.T_c), meta.quantum_ratio, meta.quantum_ok, "ok"]
        )
        for T in temps:
            m = thermal.metastability_check(p, T, omega_R, threshold)
            regime = thermal.regime_classify(T, cr.T_c)
            g_cl = thermal.classical_rate(V0, omega0, T) if T > 0 else NAN
            fq = thermal.quantum_correction(omega0, cr.omega, T) if T > 0 else NAN
            try:
                g = thermal.dissipative_rate(p, thermal.ThermalParams(T, gamma), omega_R)
                status = "ok"
            except ValidityError as exc:
                g, status = NAN, f"out of validity: {exc}"
            rates.rows.append([lam, T, regime, m.thermal_ratio, m.thermal_ok, g_cl, fq, g, status])
    scalars = {"T_0": T0, "omega_R": omega_R, "gamma": gamma}
    return Report("thermal", _metadata("thermal", cfg), main, scalars, extra={"rates": rates})


def cmd_units(cfg):
    if float(cfg["asc"]) >= 0:
        raise ConfigError("scattering length --asc must be negative (attractive interaction)")
    phys = units.PhysicalParams(
        float(cfg["mass"]), float(cfg["asc"]), float(cfg["omega_perp"]),
        float(cfg["omega_r"]), int(cfg["n"]),
    )
    d = units.derive(phys)
    table = Table([("quantity", ""), ("value", ""), ("unit", "")])
    for key, unit in [("a_perp", "m"), ("u", "J"), ("uN_over_kB", "K"), ("lambda", "1"),
                      ("T_0", "K")]:
        table.rows.append([key, d[key], unit])
    return Report("units", _metadata("units", cfg), table, d)


COMMANDS = {
    "ground": cmd_ground,
    "sweep": cmd_sweep,
    "wigner": cmd_wigner,
    "thermal": cmd_thermal,
    "units": cmd_units,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of option values; flags override it")
    common.add_argument("--out", help="output path stem (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--precision", type=int, help="significant digits (default 17)")

    parser = argparse.ArgumentParser(prog="bjjcat", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    g = add("ground", "ground state, envelope and fit error")
    g.add_argument("--n", type=int)
    g.add_argument("--lambda", dest="lambda", type=float)
    g.add_argument("--tol", type=float)

    s = add("sweep", "lambda sweep of ground-state observables")
    s.add_argument("--n", type=int)
    s.add_argument("--lambda-range", dest="lambda_range", help="a:b:step, inclusive")
    s.add_argument("--tol", type=float)
    s.add_argument("--jobs", type=int, help="worker processes")

    w = add("wigner", "Wigner function grid of the continuum envelope")
    w.add_argument("--n", type=int)
    w.add_argument("--lambda", dest="lambda", type=float)
    w.add_argument("--nx", type=int)
    w.add_argument("--np", type=int)
    w.add_argument("--pmax", type=float, help="momentum extent (default 3/sigma)")
    w.add_argument("--xmax", type=float)
    w.add_argument("--method", choices=["closed", "quadrature"])
    w.add_argument("--no-checks", dest="checks", action="store_const", const=False,
                   help="skip quadrature normalization/marginal checks")

    t = add("thermal", "crossover temperature and escape rates")
    t.add_argument("--n", type=int)
    t.add_argument("--lambda-range", dest="lambda_range", help="a:b:step, inclusive")
    t.add_argument("--gamma", type=float, help="Ohmic damping rate, rad/s")
    t.add_argument("--omega-r", dest="omega_r", type=float, help="Rabi frequency, rad/s")
    t.add_argument("--temp-range", dest="temp_range", help="a:b:step in kelvin")
    t.add_argument("--threshold", type=float, help="value standing in for '>>' (default 10)")

    u = add("units", "laboratory parameters to lambda and T_0")
    u.add_argument("--n", type=int)
    u.add_argument("--mass", type=float, help="atom mass, kg")
    u.add_argument("--asc", type=float, help="scattering length, m (negative)")
    u.add_argument("--omega-perp", dest="omega_perp", type=float, help="transverse trap, rad/s")
    u.add_argument("--omega-r", dest="omega_r", type=float, help="Rabi frequency, rad/s")
    return parser


def resolve_config(args):
    """Merge defaults, config file and flags (flags win)."""
    command = args.command
    defaults = {**DEFAULTS["common"], **DEFAULTS[command]}
    from_file = {}
    if args.config:
        try:
            with open(args.config) as fh:
                from_file = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(from_file, dict):
            raise ConfigError("config file must hold a JSON object")
        from_file = {k.replace("-", "_"): v for k, v in from_file.items()}
        unknown = sorted(set(from_file) - set(defaults))
        if unknown:
            raise ConfigError(f"unknown config keys for {command}: {', '.join(unknown)}")
    flags = {k: v for k, v in vars(args).items() if k in defaults and v is not None}
    return {k: flags.get(k, from_file.get(k, defaults[k])) for k in defaults}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if cfg["format"] not in ("csv", "json"):
            raise ConfigError(f"unknown format {cfg['format']!r}")
        run_cfg = {k: v for k, v in cfg.items() if k not in ("out",)}
        report = COMMANDS[args.command](run_cfg)
        emit(report, cfg["out"], cfg["format"], int(cfg["precision"]), stream=sys.stdout)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except ConvergenceError as exc:
        print(f"bjjcat: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ValidityError, ValueError, TypeError, KeyError) as exc:
        print(f"bjjcat: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
