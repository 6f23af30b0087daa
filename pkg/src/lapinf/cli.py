"""Command-line driver: one INI config in, one CSV (plus JSON sidecar) out.

Usage::

    lapinf list-experiments
    lapinf validate config.ini
    lapinf run config.ini

A config has an ``[experiment]`` section (``name``, ``seed``,
``output_path``) and one parameter section for the chosen experiment.
Every key has a default, so a config naming only the experiment is valid.
List values are comma separated.
"""

import argparse
import configparser
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from . import benchmarks as bm
from .bpgd import VARIANTS, BPGDConfig, bpgd_run, gen_poisson_problem
from .core import ConfigError, DomainBox, RngStream
from .hj import HJConfig, SWEEP_COLUMNS, dual_exponent, hj_sweep
from .laplace import DegenerateWeightsError
from .optimizers import OptConfig, run_repeated, tune_repeated
from .oracle_fns import FUNCTIONS, GridMemo, grid_argmin
from .prox import SetIndicator, project_laplace
from .quadrature import QuadConfig, QuadratureError, quad_self_normalized

__all__ = [
    "ExperimentConfig",
    "EXPERIMENTS",
    "parse_config",
    "validate_config",
    "run_experiment",
    "write_csv",
    "main",
]

HALF_DECADES = ", ".join(repr(10.0 ** (k / 2)) for k in range(-6, 1))


# --- value parsers ---------------------------------------------------------

def _split(s):
    return [t.strip() for t in s.split(",") if t.strip()]


def _floats(s):
    vals = [float(t) for t in _split(s)]
    if not vals:
        raise ValueError("empty list")
    return vals


def _ints(s):
    vals = [int(float(t)) for t in _split(s)]
    if not vals:
        raise ValueError("empty list")
    return vals


def _int(s):
    return int(float(s))


def _words(s):
    vals = _split(s)
    if not vals:
        raise ValueError("empty list")
    return vals


def _optional_float(s):
    return None if s.strip().lower() in ("", "none", "auto") else float(s)


# section -> key -> (parser, default text)
EXPERIMENTS = {
    "hj_sweep": ("hj", {
        "p": (_floats, "2"),
        "dim": (_ints, "2"),
        "deltas": (_floats, HALF_DECADES),
        "n_samples": (_ints, "10, 1000, 100000"),
        "reps": (_int, "10"),
        "n_eval_points": (_int, "100"),
        "t_lo": (float, "0.1"),
        "t_hi": (float, "1.0"),
        "fd_step": (float, "1e-3"),
        "box_halfwidth": (float, "10"),
        "initial": (str, "l1"),
    }),
    "prox_point_grid": ("opt", {
        "benchmarks": (_words, ", ".join(bm.NAMES)),
        "dim": (_int, "10"),
        "deltas": (_floats, "1e-4, 1e-3, 1e-2, 1e-1, 1"),
        "n_samples": (_ints, "10, 100, 1000, 10000"),
        "max_iters": (_int, "100"),
        "lam": (float, "1"),
        "x0": (float, "4"),
        "reps": (_int, "3"),
    }),
    "rgf_compare": ("opt", {
        "benchmarks": (_words, ", ".join(bm.NAMES)),
        "dim": (_int, "10"),
        "max_iters": (_int, "500"),
        "x0": (float, "4"),
        "reps": (_int, "3"),
        "lam": (float, "1"),
        "lpp_deltas": (_floats, "1e-4, 1e-3, 1e-2, 1e-1, 1"),
        "lpp_n_samples": (_int, "10000"),
        "rgf_deltas": (_floats, "1e-4, 1e-3, 1e-2, 1e-1, 1"),
        "rgf_etas": (_floats, "1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1"),
        "rgf_n_samples": (_int, "1000"),
        "gd_etas": (_floats, "1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1"),
        "gd_noise": (_floats, "0, 0.1, 1"),
    }),
    "bpgd_compare": ("bpgd", {
        "n": (_int, "5"),
        "d": (_int, "5"),
        "conditioning": (_words, "well, ill"),
        "variants": (_words, ", ".join(VARIANTS)),
        "mu": (float, "1e-3"),
        "eta": (float, "1e-5"),
        "delta": (float, "2e-3"),
        "n_samples": (_int, "50000"),
        "iters": (_int, "1000"),
        "L": (_optional_float, "auto"),
        "proposal_lo": (float, "1e-6"),
        "proposal_hi": (float, "50"),
    }),
    "oracle_convergence": ("quad", {
        "functions": (_words, ", ".join(FUNCTIONS)),
        "deltas": (_floats, "1e-2, 1e-4, 1e-6"),
        "points_per_dim": (_int, "64"),
        "rule": (str, "simpson"),
        "argmin_intervals": (_int, "1000000"),
    }),
    "projection_demo": ("projection", {
        "sets": (_words, "ball, orthant"),
        "deltas": (_floats, "1, 0.1, 0.01"),
        "n_samples": (_ints, "1000, 10000, 100000"),
        "reps": (_int, "10"),
        "ball_point": (_floats, "1.1, 0.3"),
        "orthant_point": (_floats, "-0.1, 0.5"),
    }),
}

STREAM_IDS = {name: k for k, name in enumerate(EXPERIMENTS)}
HJ_INITIAL = {
    "l1": lambda y: np.sum(np.abs(y), axis=-1),
    "quadratic": lambda y: 0.5 * np.sum(y * y, axis=-1),
}
SETS = ("ball", "orthant")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int
    output_path: str
    params: dict = field(default_factory=dict)

    def resolved(self):
        """Everything that determines the CSV contents (output path excluded)."""
        return {"experiment": self.experiment, "seed": self.seed, "params": self.params}

    @property
    def config_hash(self):
        blob = json.dumps(self.resolved(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    @property
    def stream(self):
        return RngStream(self.seed, STREAM_IDS[self.experiment])


# --- parsing and validation ------------------------------------------------

def _read(path_or_text):
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    if os.path.exists(path_or_text):
        with open(path_or_text, encoding="utf-8") as fh:
            cp.read_file(fh)
    else:
        cp.read_string(path_or_text)
    return cp


def parse_config(path_or_text):
    """Parse without semantic checks.  Returns ``(config or None, errors)``.

    A value that fails to parse is reported and replaced by its default, so
    later checks still cover the remaining keys.
    """
    errors = []
    try:
        cp = _read(path_or_text)
    except (configparser.Error, OSError) as err:
        return None, [f"config: cannot parse ({err})"]
    if not cp.has_section("experiment"):
        return None, ["experiment: missing [experiment] section"]
    head = cp["experiment"]
    name = head.get("name", "").strip()
    if name not in EXPERIMENTS:
        return None, [f"experiment.name: unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}"]
    try:
        seed = int(head.get("seed", "0"))
        if seed < 0:
            raise ValueError
    except ValueError:
        errors.append(f"experiment.seed: expected a nonnegative integer, got {head.get('seed')!r}")
        seed = 0
    output_path = head.get("output_path", f"results/{name}.csv").strip()
    for key in head:
        if key not in ("name", "seed", "output_path"):
            errors.append(f"experiment.{key}: unknown key")

    section, schema = EXPERIMENTS[name]
    for other in cp.sections():
        if other not in ("experiment", section):
            errors.append(f"{other}: section not used by {name}")
    given = cp[section] if cp.has_section(section) else {}
    for key in given:
        if key not in schema:
            errors.append(f"{section}.{key}: unknown key")
    params = {}
    for key, (parse, default) in schema.items():
        text = given.get(key, default) if given else default
        try:
            params[key] = parse(text)
        except ValueError as err:
            errors.append(f"{section}.{key}: cannot parse {text!r} ({err})")
            # keep checking the other keys against the (valid) default
            params[key] = parse(default)
    return ExperimentConfig(name, seed, output_path, params), errors


def _check_hj(p, errors):
    for pv in p["p"]:
        try:
            dual_exponent(pv)
        except ConfigError as err:
            errors.append(f"hj.p: {err}")
    if any(d < 1 for d in p["dim"]):
        errors.append("hj.dim: dimensions must be >= 1")
    if any(not dv > 0 for dv in p["deltas"]):
        errors.append("hj.deltas: every delta must be positive")
    if any(n < 1 for n in p["n_samples"]):
        errors.append("hj.n_samples: sample counts must be >= 1")
    if p["reps"] < 1:
        errors.append("hj.reps: must be >= 1")
    if p["n_eval_points"] < 1:
        errors.append("hj.n_eval_points: must be >= 1")
    if not 0 < p["t_lo"] < p["t_hi"]:
        errors.append("hj.t_lo: need 0 < t_lo < t_hi")
    if not 0 < p["fd_step"] < p["t_lo"]:
        errors.append("hj.fd_step: need 0 < fd_step < t_lo")
    if not p["box_halfwidth"] > p["fd_step"]:
        errors.append("hj.box_halfwidth: must exceed fd_step")
    if p["initial"] not in HJ_INITIAL:
        errors.append(f"hj.initial: choose from {', '.join(HJ_INITIAL)}")


def _check_benchmarks(section, p, errors):
    for name in p["benchmarks"]:
        if name not in bm.NAMES:
            errors.append(f"{section}.benchmarks: unknown benchmark {name!r}")
    if p["dim"] < 1 or ("rosenbrock" in p["benchmarks"] and p["dim"] < 2):
        errors.append(f"{section}.dim: must be >= 1 (>= 2 with rosenbrock)")
    if p["max_iters"] < 0:
        errors.append(f"{section}.max_iters: must be >= 0")
    if p["reps"] < 1:
        errors.append(f"{section}.reps: must be >= 1")
    if not p["lam"] > 0:
        errors.append(f"{section}.lam: must be positive")


def _check_prox_point(p, errors):
    _check_benchmarks("opt", p, errors)
    if any(not dv > 0 for dv in p["deltas"]):
        errors.append("opt.deltas: every delta must be positive")
    if any(n < 1 for n in p["n_samples"]):
        errors.append("opt.n_samples: sample counts must be >= 1")


def _check_rgf(p, errors):
    _check_benchmarks("opt", p, errors)
    for key in ("lpp_deltas", "rgf_deltas", "rgf_etas", "gd_etas"):
        if any(not v > 0 for v in p[key]):
            errors.append(f"opt.{key}: values must be positive")
    if any(v < 0 for v in p["gd_noise"]):
        errors.append("opt.gd_noise: values must be nonnegative")
    for key in ("lpp_n_samples", "rgf_n_samples"):
        if p[key] < 1:
            errors.append(f"opt.{key}: must be >= 1")


def _bpgd_problems(cfg):
    p = cfg.params
    for ci, cond in enumerate(p["conditioning"]):
        prob, x_bar = gen_poisson_problem(
            p["n"], p["d"], cfg.stream.child(ci).child(0), cond, mu=p["mu"]
        )
        if p["L"] is not None:
            prob = type(prob)(prob.A, prob.b, prob.mu, p["L"])
        yield cond, prob, x_bar


def _check_bpgd(cfg, errors):
    p = cfg.params
    if p["n"] < 1 or p["d"] < 1:
        errors.append("bpgd.n: n and d must be >= 1")
        return
    for cond in p["conditioning"]:
        if cond not in ("well", "ill"):
            errors.append(f"bpgd.conditioning: unknown conditioning {cond!r}")
        elif cond == "ill" and p["n"] != p["d"]:
            errors.append("bpgd.conditioning: the ill-conditioned instance needs n == d")
    for v in p["variants"]:
        if v not in VARIANTS:
            errors.append(f"bpgd.variants: unknown variant {v!r}")
    if p["mu"] < 0:
        errors.append("bpgd.mu: must be nonnegative")
    if not p["delta"] > 0:
        errors.append("bpgd.delta: must be positive")
    if p["n_samples"] < 1:
        errors.append("bpgd.n_samples: must be >= 1")
    if p["iters"] < 0:
        errors.append("bpgd.iters: must be >= 0")
    if not 0 < p["proposal_lo"] < p["proposal_hi"]:
        errors.append("bpgd.proposal_lo: need 0 < proposal_lo < proposal_hi")
    if not p["eta"] > 0:
        errors.append("bpgd.eta: must be positive")
        return
    structural = ("bpgd.conditioning", "bpgd.mu", "bpgd.L")
    if any(e.startswith(structural) for e in errors):
        return
    try:
        for cond, prob, _ in _bpgd_problems(cfg):
            if p["eta"] * prob.L >= 1:
                errors.append(
                    f"bpgd.eta: step-size constraint of the Bregman proximal step violated "
                    f"({cond}): need eta * L < 1, got eta * L = {p['eta'] * prob.L:g}"
                )
    except ConfigError as err:
        errors.append(f"bpgd.L: {err}")


def _check_quad(p, errors):
    for name in p["functions"]:
        if name not in FUNCTIONS:
            errors.append(f"quad.functions: unknown function {name!r}; choose from {', '.join(FUNCTIONS)}")
    if any(not dv > 0 for dv in p["deltas"]):
        errors.append("quad.deltas: every delta must be positive")
    if p["rule"] not in ("simpson", "trapezoid"):
        errors.append("quad.rule: choose simpson or trapezoid")
    if p["points_per_dim"] < 64 or (p["rule"] == "simpson" and p["points_per_dim"] % 2):
        errors.append("quad.points_per_dim: need >= 64 (and even for simpson)")
    if p["argmin_intervals"] < 64 or p["argmin_intervals"] % 2:
        errors.append("quad.argmin_intervals: need an even count >= 64")


def _check_projection(p, errors):
    for s in p["sets"]:
        if s not in SETS:
            errors.append(f"projection.sets: unknown set {s!r}; choose from {', '.join(SETS)}")
    if any(not dv > 0 for dv in p["deltas"]):
        errors.append("projection.deltas: every delta must be positive")
    if any(n < 1 for n in p["n_samples"]):
        errors.append("projection.n_samples: sample counts must be >= 1")
    if p["reps"] < 1:
        errors.append("projection.reps: must be >= 1")
    for key in ("ball_point", "orthant_point"):
        if len(p[key]) != 2:
            errors.append(f"projection.{key}: need a 2-d point")


def validate_config(path_or_text):
    """Parse and fully validate a config without running it.

    Returns ``(config, errors)``; ``errors`` lists every problem found, each
    prefixed with ``section.key``.  ``config`` is None if parsing failed
    before the parameter section could be read.
    """
    cfg, errors = parse_config(path_or_text)
    if cfg is None:
        return cfg, errors
    p = cfg.params
    if cfg.experiment == "hj_sweep":
        _check_hj(p, errors)
    elif cfg.experiment == "prox_point_grid":
        _check_prox_point(p, errors)
    elif cfg.experiment == "rgf_compare":
        _check_rgf(p, errors)
    elif cfg.experiment == "bpgd_compare":
        _check_bpgd(cfg, errors)
    elif cfg.experiment == "oracle_convergence":
        _check_quad(p, errors)
    elif cfg.experiment == "projection_demo":
        _check_projection(p, errors)
    return cfg, errors


# --- experiments -----------------------------------------------------------

def _hj_sweep(cfg):
    p = cfg.params
    f = HJ_INITIAL[p["initial"]]
    rows = []
    for pi, pv in enumerate(p["p"]):
        for di, dim in enumerate(p["dim"]):
            hcfg = HJConfig(
                p=pv, dim=dim, proposal_box=DomainBox.cube(-p["box_halfwidth"], p["box_halfwidth"], dim),
                n_eval_points=p["n_eval_points"], t_range=(p["t_lo"], p["t_hi"]), fd_step=p["fd_step"],
            )
            rows += hj_sweep(f, hcfg, p["deltas"], p["n_samples"], p["reps"], cfg.stream.child(pi).child(di))
    return list(SWEEP_COLUMNS), rows


def _status(traces):
    bad = sorted({t.status for t in traces if t.status != "ok"})
    return "ok" if not bad else "+".join(bad)


def _prox_point_grid(cfg):
    p = cfg.params
    rows = []
    for bi, name in enumerate(p["benchmarks"]):
        f = bm.benchmark(name, p["dim"])
        for di, delta in enumerate(p["deltas"]):
            for ni, n in enumerate(p["n_samples"]):
                oc = OptConfig(np.full(p["dim"], p["x0"]), max_iters=p["max_iters"], lam=p["lam"],
                               delta=delta, n_samples=n)
                traces, mean = run_repeated("lpp", f, oc, cfg.stream.child(bi).child(di).child(ni), reps=p["reps"])
                status = _status(traces)
                for k in range(1, p["max_iters"] + 1):
                    rows.append(dict(benchmark=name, delta=delta, N=n, iteration=k, value=mean[k],
                                     evals=k * n, status=status))
    return ["benchmark", "delta", "N", "iteration", "value", "evals", "status"], rows


def _rgf_compare(cfg):
    p = cfg.params
    rows = []
    for bi, name in enumerate(p["benchmarks"]):
        f = bm.benchmark(name, p["dim"])
        base = OptConfig(np.full(p["dim"], p["x0"]), max_iters=p["max_iters"], lam=p["lam"])
        rng = cfg.stream.child(bi)
        runs = [
            ("lpp", tune_repeated("lpp", f, replace(base, n_samples=p["lpp_n_samples"]),
                                  {"delta": p["lpp_deltas"]}, rng.child(0), p["reps"])),
            ("rgf", tune_repeated("rgf", f, replace(base, n_samples=p["rgf_n_samples"]),
                                  {"delta": p["rgf_deltas"], "eta": p["rgf_etas"]}, rng.child(1), p["reps"])),
            ("gd", tune_repeated("gd", f, base, {"eta": p["gd_etas"], "noise_sd": p["gd_noise"]},
                                 rng.child(2), p["reps"], grad_f=f.grad)),
        ]
        for algo, (params, traces, mean) in runs:
            label = ";".join(f"{k}={v!r}" for k, v in params.items())
            status = _status(traces)
            evals = traces[0].evals
            for k in range(p["max_iters"] + 1):
                rows.append(dict(benchmark=name, algorithm=algo, params=label, iteration=k,
                                 value=mean[k], evals=evals[k] if k < len(evals) else "",
                                 status=status))
    return ["benchmark", "algorithm", "params", "iteration", "value", "evals", "status"], rows


def _bpgd_compare(cfg):
    p = cfg.params
    bcfg = BPGDConfig(eta=p["eta"], delta=p["delta"], n_samples=p["n_samples"],
                      coordinate_proposal=("uniform", p["proposal_lo"], p["proposal_hi"]))
    rows = []
    for ci, (cond, prob, _) in enumerate(_bpgd_problems(cfg)):
        for variant in p["variants"]:
            vi = VARIANTS.index(variant)
            trace = bpgd_run(prob, bcfg, variant, p["iters"], cfg.stream.child(ci).child(1 + vi))
            for k, value in enumerate(trace.values):
                rows.append(dict(conditioning=cond, variant=variant, iteration=k, criterion=value,
                                 status=trace.status))
    return ["conditioning", "variant", "iteration", "criterion", "status"], rows


def _oracle_convergence(cfg):
    p = cfg.params
    rows = []
    for name in p["functions"]:
        phi, (lo, hi) = FUNCTIONS[name]
        phi = GridMemo(phi)
        target, spacing = grid_argmin(phi, lo, hi, p["argmin_intervals"])
        box = DomainBox([lo], [hi])
        if name == "weierstrass_series":
            # no grid resolves every oscillation: evaluate on the brute-force grid itself
            qcfg = QuadConfig(box, p["argmin_intervals"], p["rule"], refine=False)
        elif name == "abs_sqrt":
            # the cusp's peak is narrower than any grid at small delta
            qcfg = QuadConfig(box, p["points_per_dim"], p["rule"], min_effective_nodes=0.0)
        else:
            qcfg = QuadConfig(box, p["points_per_dim"], p["rule"])
        for delta in p["deltas"]:
            try:
                est, status = float(quad_self_normalized(phi, None, delta, qcfg)[0]), "ok"
            except QuadratureError as err:
                est, status = float(err.last[0]), "no_convergence"
            rows.append(dict(function=name, delta=delta, estimate=est, grid_argmin=target,
                             grid_spacing=spacing, distance=abs(est - target), status=status))
    return ["function", "delta", "estimate", "grid_argmin", "grid_spacing", "distance", "status"], rows


def _projection_demo(cfg):
    p = cfg.params
    sets = {
        "ball": (SetIndicator.ball(np.zeros(2), 1.0), np.array(p["ball_point"])),
        "orthant": (SetIndicator.orthant(2), np.array(p["orthant_point"])),
    }
    rows = []
    for si, sname in enumerate(p["sets"]):
        K, x = sets[sname]
        for di, delta in enumerate(p["deltas"]):
            for ni, n in enumerate(p["n_samples"]):
                for r in range(p["reps"]):
                    rng = cfg.stream.child(si).child(di).child(ni).child(r)
                    try:
                        est = project_laplace(K, x, delta, n, rng)
                        y, kept, status = est.point, est.n_nonzero, "ok"
                        inside = int(bool(K.contains(y[None, :])[0]))
                    except DegenerateWeightsError as err:
                        y, kept, status, inside = np.full(2, np.nan), err.n_kept, "degenerate", ""
                    rows.append(dict(set=sname, x=_vec(x), delta=delta, N=n, rep=r,
                                     estimate=_vec(y), inside=inside, n_kept=kept, status=status))
    return ["set", "x", "delta", "N", "rep", "estimate", "inside", "n_kept", "status"], rows


_RUNNERS = {
    "hj_sweep": _hj_sweep,
    "prox_point_grid": _prox_point_grid,
    "rgf_compare": _rgf_compare,
    "bpgd_compare": _bpgd_compare,
    "oracle_convergence": _oracle_convergence,
    "projection_demo": _projection_demo,
}


# --- output ----------------------------------------------------------------

def _vec(v):
    return ";".join(_fmt(float(c)) for c in np.atleast_1d(v))


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(columns, rows, cfg):
    """Render rows as CSV text (seed and config hash appended to every row)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*columns, "seed", "config_hash"])
    h = cfg.config_hash
    for row in rows:
        w.writerow([*(_fmt(row[c]) for c in columns), cfg.seed, h])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def run_experiment(cfg):
    """Run a validated config; write the CSV and its JSON sidecar.

    Returns the CSV path.  Numerical degeneracies show up as flagged rows
    (``status`` / ``missing_count`` columns), not as exceptions.
    """
    columns, rows = _RUNNERS[cfg.experiment](cfg)
    text = write_csv(columns, rows, cfg)
    out = cfg.output_path
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    sidecar = dict(_jsonable(cfg.resolved()), config_hash=cfg.config_hash, output_path=out,
                   columns=[*columns, "seed", "config_hash"], rows=len(rows))
    with open(os.path.splitext(out)[0] + ".json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(prog="lapinf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("run", "run an experiment config"), ("validate", "check a config without running")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("config")
    sub.add_parser("list-experiments", help="print the experiment names and their parameter keys")
    args = parser.parse_args(argv)

    if args.command == "list-experiments":
        for name, (section, schema) in EXPERIMENTS.items():
            print(f"{name} [{section}]: {', '.join(schema)}")
        return 0
    if not os.path.exists(args.config):
        print(f"error: config file not found: {args.config}", file=sys.stderr)
        return 2
    cfg, errors = validate_config(args.config)
    if errors:
        for e in errors:
            print(f"error: {e}", file=sys.stderr)
        return 2
    if args.command == "validate":
        print(f"ok: {cfg.experiment} (config hash {cfg.config_hash})")
        return 0
    out = run_experiment(cfg)
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
