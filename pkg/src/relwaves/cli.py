"""Command line front end: ``relwaves <command> [--config PATH] [--out-dir PATH] ...``.

Every command reads an optional JSON configuration, merges it over the
defaults below, validates the result as a whole, computes all outputs in
memory and only then writes them together with ``manifest.json`` (resolved
configuration plus a SHA-256 of every file).  A failed validation writes
nothing and exits with status 2; a numerical failure exits with status 3.
"""

from __future__ import annotations

import argparse
import copy
import csv
import hashlib
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import actionwave as aw
from . import dynamics, relgas, resonance, symmetry, wigner
from .core import (
    ConfigurationError,
    DomainError,
    EvaluationError,
    ExtendedState,
    NumericalError,
    mass_shell_residual,
)

log = logging.getLogger("relwaves")

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3
COMMANDS = ("trajectory", "boost", "wave", "wigner", "gas", "fit", "hydrogen", "verify")

DEFAULTS = {
    "units": {"c": 1.0, "sigma": 1.0, "m0": 1.0},
    "grid": {"n0": 256, "n1": 256, "d0": 0.05, "d1": 0.05},
    "output": {"directory": "out", "format": "csv", "plot": False, "strict": False},
    "trajectory": {"kind": "free", "q0": 0.0, "q": [0.0, 0.0, 0.0], "p": [1.0, 0.0, 0.0],
                   "p0": None, "k": 1.0, "du": 0.01, "n": 100},
    "boost": {"q0": 0.0, "q": [0.0, 0.0, 0.0], "p": [0.0, 0.0, 0.0], "p0": None,
              "V": [0.6, 0.0, 0.0], "branch": "lorentz"},
    "wave": {"center": [-2.5, -1.5], "width": [0.4, 0.4], "p_parallel": 0.0, "u_end": 2.0,
             "du": None, "every": 10, "boundary": "periodic"},
    "wigner": {"Q0": 0.0, "P0": -1.0, "Omega": 1.0, "x0": 0.0, "width": 1.0, "p": 0.5,
               "order": 0},
    "gas": {"T": [0.25, 0.5, 1.0, 2.0, 4.0], "mu": [0.0], "eps_max": None, "V": 1.0, "h": 1.0},
    "fit": {"table": None, "class": None},
    "hydrogen": {"mean_p2": 1.0, "mean_p4": 5.0, "alpha": 1 / 137.035999084},
}


class ValidationError(ConfigurationError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


# ---------------------------------------------------------------- config

def _merge(base, override, path, errors):
    out = copy.deepcopy(base)
    for key, val in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            errors.append(f"{where}: unknown key (expected one of {', '.join(sorted(base))})")
        elif isinstance(base[key], dict):
            if not isinstance(val, dict):
                errors.append(f"{where}: expected an object")
            else:
                out[key] = _merge(base[key], val, where, errors)
        else:
            out[key] = val
    return out


def load_config(path):
    """Read a config file; a manifest written by this tool is accepted too."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError([f"cannot read config {path}: {exc}"]) from exc
    except json.JSONDecodeError as exc:
        raise ValidationError([f"{path}: invalid JSON: {exc}"]) from exc
    if not isinstance(data, dict):
        raise ValidationError([f"{path}: top level must be an object"])
    if "config" in data and "files" in data:
        data = data["config"]
    return data


def resolve_config(user=None, out_dir=None, fmt=None, plot=None, strict=None, errors=None):
    """Merge ``user`` over the defaults and apply command line overrides.

    Structural problems (unknown keys, non-object sections) are appended to
    ``errors`` when a list is given, otherwise raised at once.
    """
    collect = errors is not None
    errors = errors if collect else []
    cfg = _merge(DEFAULTS, user or {}, "", errors)
    out = cfg["output"]
    if out_dir is not None:
        out["directory"] = str(out_dir)
    if fmt is not None:
        out["format"] = fmt
    if plot:
        out["plot"] = True
    if strict:
        out["strict"] = True
    if errors and not collect:
        raise ValidationError(errors)
    return cfg


def _num(errors, where, v, positive=False, nonneg=False, integer=False, minimum=None):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        errors.append(f"{where}: expected a finite number, got {v!r}")
        return False
    if integer and int(v) != v:
        errors.append(f"{where}: expected an integer, got {v!r}")
        return False
    if positive and not v > 0:
        errors.append(f"{where}: must be positive, got {v!r}")
        return False
    if nonneg and v < 0:
        errors.append(f"{where}: must be nonnegative, got {v!r}")
        return False
    if minimum is not None and v < minimum:
        errors.append(f"{where}: must be at least {minimum!r}, got {v!r}")
        return False
    return True


def _vec(errors, where, v, size):
    if not isinstance(v, list) or len(v) != size:
        errors.append(f"{where}: expected a list of {size} numbers, got {v!r}")
        return False
    return all([_num(errors, f"{where}[{i}]", x) for i, x in enumerate(v)])


def _choice(errors, where, v, options):
    if v not in options:
        errors.append(f"{where}: expected one of {', '.join(map(repr, options))}, got {v!r}")
        return False
    return True


def _state_checks(errors, sec, name):
    ok = _num(errors, f"{name}.q0", sec["q0"]) & _vec(errors, f"{name}.q", sec["q"], 3)
    p_ok = _vec(errors, f"{name}.p", sec["p"], 3)
    if sec["p0"] is not None and _num(errors, f"{name}.p0", sec["p0"]):
        if not sec["p0"] < 0:
            errors.append(f"{name}.p0: must be negative (positive energy), got {sec['p0']!r}")
        elif p_ok and sec["p0"] ** 2 <= sum(x * x for x in sec["p"]):
            errors.append(f"{name}: p0^2 - |p|^2 must be positive (timelike momentum)")
    return ok and p_ok


def validate(cfg, command, errors=None):
    """Aggregate every problem with the sections used by ``command``."""
    errors = list(errors or [])
    u, g, o = cfg["units"], cfg["grid"], cfg["output"]
    units_ok = all([_num(errors, f"units.{k}", u[k], positive=True) for k in ("c", "sigma", "m0")])
    _choice(errors, "output.format", o["format"], ("csv", "json"))
    if not isinstance(o["directory"], str) or not o["directory"]:
        errors.append("output.directory: expected a non-empty path string")
    for key in ("plot", "strict"):
        if not isinstance(o[key], bool):
            errors.append(f"output.{key}: expected true or false")

    if command in ("wave", "wigner"):
        for k in ("n0", "n1"):
            _num(errors, f"grid.{k}", g[k], integer=True, minimum=8)
        for k in ("d0", "d1"):
            _num(errors, f"grid.{k}", g[k], positive=True)

    sec = cfg.get(command, {})
    if command == "trajectory":
        _choice(errors, "trajectory.kind", sec["kind"], ("free", "nonrel", "harmonic"))
        _state_checks(errors, sec, "trajectory")
        _num(errors, "trajectory.du", sec["du"], positive=True)
        _num(errors, "trajectory.n", sec["n"], integer=True, minimum=1)
        _num(errors, "trajectory.k", sec["k"], nonneg=True)
    elif command == "boost":
        _state_checks(errors, sec, "boost")
        if _choice(errors, "boost.branch", sec["branch"], ("lorentz", "so4")) \
                and _vec(errors, "boost.V", sec["V"], 3) and units_ok:
            speed = math.sqrt(sum(x * x for x in sec["V"]))
            if sec["branch"] == "lorentz" and speed >= u["c"]:
                errors.append(f"boost.V: |V| = {speed!r} must be below c = {u['c']!r} on the lorentz branch")
    elif command == "wave":
        ok = _vec(errors, "wave.center", sec["center"], 2) & _vec(errors, "wave.width", sec["width"], 2)
        if ok and not all(w > 0 for w in sec["width"]):
            errors.append("wave.width: widths must be positive")
        _num(errors, "wave.p_parallel", sec["p_parallel"])
        _num(errors, "wave.u_end", sec["u_end"], positive=True)
        _num(errors, "wave.every", sec["every"], integer=True, minimum=1)
        _choice(errors, "wave.boundary", sec["boundary"], (aw.PERIODIC, aw.REFLECTING))
        if sec["du"] is not None and _num(errors, "wave.du", sec["du"], positive=True) and units_ok \
                and not [e for e in errors if e.startswith(("grid.", "wave.p_parallel"))]:
            limit = wave_step_limit(cfg)
            if sec["du"] > limit:
                errors.append(f"wave.du: CFL violated, du = {sec['du']!r} exceeds the stable limit {limit!r}")
    elif command == "wigner":
        _num(errors, "wigner.Q0", sec["Q0"])
        if _num(errors, "wigner.P0", sec["P0"]) and not sec["P0"] < 0:
            errors.append("wigner.P0: must be negative (positive mean energy)")
        _num(errors, "wigner.Omega", sec["Omega"], positive=True)
        _num(errors, "wigner.x0", sec["x0"])
        _num(errors, "wigner.width", sec["width"], positive=True)
        _num(errors, "wigner.p", sec["p"])
        _choice(errors, "wigner.order", sec["order"], (0, 1))
    elif command == "gas":
        for key in ("T", "mu"):
            vals = sec[key]
            if not isinstance(vals, list) or not vals:
                errors.append(f"gas.{key}: expected a non-empty list of numbers")
                continue
            for i, v in enumerate(vals):
                _num(errors, f"gas.{key}[{i}]", v, positive=(key == "T"))
        _num(errors, "gas.V", sec["V"], positive=True)
        _num(errors, "gas.h", sec["h"], positive=True)
        if sec["eps_max"] is not None and _num(errors, "gas.eps_max", sec["eps_max"]) and units_ok:
            mc2 = u["m0"] * u["c"] ** 2
            if sec["eps_max"] < mc2:
                errors.append(f"gas.eps_max: must be at least m0 c^2 = {mc2!r}")
    elif command == "fit":
        if sec["table"] is not None and not isinstance(sec["table"], str):
            errors.append("fit.table: expected a path string or null")
        if sec["class"] is not None:
            _choice(errors, "fit.class", sec["class"], resonance.CLASSES)
    elif command == "hydrogen":
        _num(errors, "hydrogen.mean_p2", sec["mean_p2"], nonneg=True)
        _num(errors, "hydrogen.mean_p4", sec["mean_p4"], nonneg=True)
        _num(errors, "hydrogen.alpha", sec["alpha"], positive=True)
    if errors:
        raise ValidationError(errors)


def wave_step_limit(cfg) -> float:
    """Stable du for the plane-wave action, from the config alone."""
    u, g, w = cfg["units"], cfg["grid"], cfg["wave"]
    p1 = w["p_parallel"]
    p0 = math.sqrt((u["m0"] * u["c"]) ** 2 + p1 ** 2)
    return aw.CFL_LIMIT * min(g["d0"], g["d1"]) * u["m0"] / max(p0, abs(p1))


# ---------------------------------------------------------------- runners
# Each runner returns a list of artifacts:
#   ("table", stem, columns, rows, plot_spec or None) or ("json", name, dict)

def _state_from(sec, units):
    m0, c = units["m0"], units["c"]
    if sec["p0"] is None:
        return ExtendedState.on_shell(sec["p"], m0, c, q0=sec["q0"], q=sec["q"])
    return ExtendedState(q0=sec["q0"], q=sec["q"], p0=sec["p0"], p=sec["p"])


def run_trajectory(cfg):
    u, sec = cfg["units"], cfg["trajectory"]
    m0, c = u["m0"], u["c"]
    if sec["kind"] == "free":
        spec = dynamics.HamiltonianSpec.free(m0, c)
    elif sec["kind"] == "nonrel":
        spec = dynamics.HamiltonianSpec.nonrelativistic(m0, c)
    else:
        k = sec["k"]
        spec = dynamics.HamiltonianSpec.with_potential(lambda q: 0.5 * k * float(q @ q),
                                                       lambda q: k * np.asarray(q), m0, c)
    states = dynamics.integrate_trajectory(spec, _state_from(sec, u), sec["du"], int(sec["n"]))
    rows = [(s.u, *s.as_array()) for s in states]
    plot = {"kind": "line", "x": "u", "y": ["q0", "q1", "q2", "q3"], "ylabel": "coordinate"}
    return [("table", "trajectory", dynamics.TRAJECTORY_COLUMNS, rows, plot)]


def run_boost(cfg):
    u, sec = cfg["units"], cfg["boost"]
    m0, c = u["m0"], u["c"]
    x = _state_from(sec, u)
    y = symmetry.boost_finite(x, sec["V"], c, sec["branch"])
    spec = dynamics.HamiltonianSpec.free(m0, c)
    cols = ("frame",) + dynamics.TRAJECTORY_COLUMNS[1:]
    rows = [("original", *x.as_array()), ("boosted", *y.as_array())]
    summary = {"branch": sec["branch"], "V": sec["V"]}
    for tag, s in (("original", x), ("boosted", y)):
        summary[f"mass_shell_residual_{tag}"] = mass_shell_residual(s, m0, c)
        try:
            summary[f"hamiltonian_{tag}"] = dynamics.hamiltonian_eval(spec, s)
        except DomainError:
            # SO(4) images can leave the timelike region
            summary[f"hamiltonian_{tag}"] = None
    return [("table", "boost", cols, rows, None), ("json", "boost_summary.json", summary)]


def run_wave(cfg):
    u, g, sec = cfg["units"], cfg["grid"], cfg["wave"]
    m0, c = u["m0"], u["c"]
    grid = aw.Grid.uniform(int(g["n0"]), int(g["n1"]), g["d0"], g["d1"])
    state = aw.ActionWaveState(grid, aw.gaussian_blob(grid, sec["center"], sec["width"]),
                               aw.on_shell_plane_wave(grid, sec["p_parallel"], m0, c),
                               m0=m0, c=c, boundary=sec["boundary"])
    du = sec["du"] if sec["du"] is not None else aw.max_stable_step(state)
    steps = max(1, int(math.ceil(sec["u_end"] / du - 1e-9)))
    du = sec["u_end"] / steps
    mass0 = state.total_mass
    final, series = aw.evolve_with_moments(state, du, steps, int(sec["every"]))
    rows = [(uu, m.mean_t, m.mean_E, m.mean_p_parallel) for uu, m in series]
    summary = {"steps": steps, "du": du, "mean_E": series[0][1].mean_E,
               "mass_drift": abs(final.total_mass - mass0) / mass0}
    if len(series) >= 3:
        slope, intercept, resid = aw.linear_time_slope([(r[0], r[1]) for r in rows])
        summary.update(slope=slope, intercept=intercept, residual=resid)
    else:
        summary.update(slope=None, intercept=None, residual=None)
    Q0, Q1 = grid.mesh()
    field_rows = zip(Q0.ravel(), Q1.ravel(), final.n.ravel(), final.action.ravel())
    return [
        ("table", "moments", aw.MOMENT_COLUMNS, rows,
         {"kind": "line", "x": "u", "y": ["mean_t"], "ylabel": "<t>"}),
        ("table", "field", aw.FIELD_COLUMNS, list(field_rows),
         {"kind": "heatmap", "x": "q0", "y": "q1", "z": "n"}),
        ("json", "summary.json", summary),
    ]


def run_wigner(cfg):
    u, g, sec = cfg["units"], cfg["grid"], cfg["wigner"]
    n, dx = int(g["n1"]), g["d1"]
    x = sec["x0"] + dx * (np.arange(n) - n // 2)
    if sec["order"] == 0:
        psi = wigner.gaussian_psi(x, sec["x0"], sec["width"], sec["p"], u["sigma"])
    else:
        psi = wigner.hermite_psi(x, 1, sec["x0"], sec["width"]) * np.exp(1j * sec["p"] * x / u["sigma"])
    chi = wigner.GlauberPacket(sec["Q0"], sec["P0"], sec["Omega"], u["sigma"], u["c"])
    wp = wigner.WavePacket(chi, x, psi, u["m0"])
    field = wigner.wigner_transform(wp)
    dE, dt, prod = wigner.uncertainty_products(wp)
    summary = {"delta_E": dE, "delta_t": dt, "product": prod, "norm": wp.norm(),
               "total": field.total(), "purity": field.purity(),
               "min_space_factor": float(field.space_factor.min()),
               "imag_residue": field.imag_residue}
    rows = [(xj, pl, field.space_factor[j, l]) for j, xj in enumerate(x) for l, pl in enumerate(field.p1)]
    return [("table", "wigner", wigner.WIGNER_COLUMNS, rows,
             {"kind": "heatmap", "x": "q", "y": "p", "z": "f"}),
            ("json", "summary.json", summary)]


def run_gas(cfg):
    u, sec = cfg["units"], cfg["gas"]
    eps_max = math.inf if sec["eps_max"] is None else sec["eps_max"]
    rows = []
    for T in sec["T"]:
        star = relgas.gT_argmax(T, u["m0"], u["c"])
        for mu in sec["mu"]:
            params = relgas.GasParams(mu, T, u["m0"], u["c"], sec["V"], sec["h"])
            N, E = relgas.thermo_integrals(params, eps_max)
            rows.append((T, mu, N, E, star))
    arts = [("table", "sweep", relgas.SWEEP_COLUMNS, rows,
             {"kind": "line", "x": "T", "y": ["eps_star"], "ylabel": "argmax of g_T"})]
    if sec["eps_max"] is not None:
        arts.append(("json", "cutoff.json",
                     {"eps_max": eps_max,
                      "v_max_over_c": relgas.velocity_cutoff_fraction(eps_max, u["m0"], u["c"])}))
    return arts


def run_fit(cfg):
    sec, strict = cfg["fit"], cfg["output"]["strict"]
    try:
        records = (resonance.load_sample_table() if sec["table"] is None
                   else resonance.load_table(sec["table"], strict))
    except OSError as exc:
        raise ValidationError([f"fit.table: cannot read {sec['table']}: {exc}"]) from exc
    except resonance.TableError as exc:
        raise ValidationError([f"fit.table: {e}" for e in exc.errors]) from exc
    used = [r for r in records if sec["class"] is None or r.cls == sec["class"]]
    fit = resonance.fit_inverse_width(used)
    bound_rows, fraction = resonance.lifetime_bound_check(used)
    summary = fit.summary()
    summary.update(stderr_a=fit.stderr_a, stderr_C=fit.stderr_C, bound_fraction=fraction,
                   reference_note="published a, C are reference values only")
    ratio_rows = [(r.width_mev, r.ratio) for r in used]
    overlay = {"a": fit.a, "C": fit.C}
    return [
        ("table", "report", ("name", "ratio", "bound_ok"),
         [(b.name, b.ratio, b.bound_ok) for b in bound_rows], None),
        ("table", "ratio", ("width_mev", "ratio"), ratio_rows,
         {"kind": "line", "x": "width_mev", "y": ["ratio"], "overlay": overlay,
          "xlabel": "width (MeV)", "ylabel": "mass / width"}),
        ("json", "fit.json", summary),
    ]


def run_hydrogen(cfg):
    sec = cfg["hydrogen"]
    Hc, H1, dirac = wigner.hydrogen_corrections(sec["mean_p2"], sec["mean_p4"], sec["alpha"])
    rows = [("H_c", Hc), ("H1", H1), ("dirac_reference", dirac)]
    return [("table", "hydrogen", ("quantity", "value"), rows, None)]


def run_verify(cfg):
    from . import acceptance

    results = acceptance.run_all()
    print(acceptance.format_table(results))
    rows = [(r.number, r.name, "PASS" if r.passed else "FAIL", r.metric) for r in results]
    return [("table", "verify", ("criterion", "name", "status", "metric"), rows, None)], \
        all(r.passed for r in results)


RUNNERS = {"trajectory": run_trajectory, "boost": run_boost, "wave": run_wave,
           "wigner": run_wigner, "gas": run_gas, "fit": run_fit, "hydrogen": run_hydrogen}


# ---------------------------------------------------------------- output

def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, str) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(v)


def render_table(columns, rows, fmt) -> bytes:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(v) for v in r])
        return buf.getvalue().encode("utf-8")
    doc = {"columns": list(columns), "rows": [[_json_value(v) for v in r] for r in rows]}
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


def render_json(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n").encode("utf-8")


def _render_plot(stem, columns, rows, spec, out_dir):
    from . import plotting

    cols = {}
    for j, name in enumerate(columns):
        vals = [r[j] for r in rows]
        cols[name] = np.array(vals, dtype=float) if not isinstance(vals[0], str) else np.array(vals)
    overlay = None
    if spec.get("overlay"):
        a, C = spec["overlay"]["a"], spec["overlay"]["C"]
        overlay = lambda w: a + C / w  # noqa: E731
    path = out_dir / f"{stem}.svg"
    plotting.render(list(columns), cols, path, spec["kind"], spec.get("x"), spec.get("y"),
                    spec.get("z"), overlay, spec.get("xlabel"), spec.get("ylabel"))
    return path


def write_artifacts(artifacts, cfg, command):
    out = cfg["output"]
    out_dir = Path(out["directory"])
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ValidationError([f"output.directory: cannot create {out_dir}: {exc}"]) from exc
    written = []
    for art in artifacts:
        if art[0] == "table":
            _, stem, columns, rows, plot = art
            name = f"{stem}.{out['format']}"
            (out_dir / name).write_bytes(render_table(columns, rows, out["format"]))
            written.append(name)
            if out["plot"] and plot is not None and rows:
                written.append(_render_plot(stem, columns, rows, plot, out_dir).name)
        else:
            _, name, obj = art
            (out_dir / name).write_bytes(render_json(obj))
            written.append(name)
    files = []
    for name in written:
        data = (out_dir / name).read_bytes()
        files.append({"path": name, "sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)})
    manifest = {"command": command, "config": cfg, "files": files}
    (out_dir / "manifest.json").write_bytes(render_json(manifest))
    return manifest


def run_scenario(command, cfg, errors=None):
    """Validate, compute and write; returns the manifest dictionary."""
    validate(cfg, command, errors)
    level = "raise" if cfg["output"]["strict"] else "warn"
    # underflow to zero in Boltzmann tails is expected and harmless
    with np.errstate(over=level, divide=level, invalid=level, under="ignore"):
        artifacts = RUNNERS[command](cfg)
    return write_artifacts(artifacts, cfg, command)


# ---------------------------------------------------------------- entry point

def build_parser():
    parser = argparse.ArgumentParser(prog="relwaves", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON scenario file (or a manifest.json)")
    common.add_argument("--out-dir", type=Path, help="output directory (overrides output.directory)")
    common.add_argument("--format", choices=("csv", "json"), help="table format")
    common.add_argument("--plot", action="store_true", help="also render SVG figures")
    common.add_argument("--strict", action="store_true",
                        help="reject malformed table rows and treat floating-point warnings as errors")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {"trajectory": "integrate an extended-phase-space trajectory",
             "boost": "apply a finite boost to one state",
             "wave": "evolve an action distribution and fit the time law",
             "wigner": "Wigner function of a packet",
             "gas": "relativistic gas integrals over a (T, mu) sweep",
             "fit": "fit mass/width ratios to a + C/width",
             "hydrogen": "relativistic corrections to the hydrogen ground state",
             "verify": "run all acceptance checks and print a pass/fail table"}
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        user = load_config(args.config) if args.config else None
        merge_errors = []
        cfg = resolve_config(user, args.out_dir, args.format, args.plot, args.strict, merge_errors)
        if args.command == "verify":
            validate(cfg, "verify", merge_errors)
            artifacts, ok = run_verify(cfg)
            if args.out_dir is not None:
                write_artifacts(artifacts, cfg, "verify")
            return EXIT_OK if ok else EXIT_NUMERICAL
        manifest = run_scenario(args.command, cfg, merge_errors)
    except ValidationError as exc:
        print("configuration rejected:", file=sys.stderr)
        for e in exc.errors:
            print(f"  - {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConfigurationError as exc:
        print(f"configuration rejected: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalError, EvaluationError, DomainError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for f in manifest["files"]:
        print(f"{cfg['output']['directory']}/{f['path']}  {f['sha256'][:12]}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
