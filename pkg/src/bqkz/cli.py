"""Command line front end: verify, solve, sweep, dump-operator, dump-contour.

Configs are JSON trees with complex numbers written as ``[re, im]``. Exit
status is 0 when every check passes, 1 when one fails, 2 on any error.
"""
import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import harness, qkz, quad, rkmat, weightfn
from .contour import find_gamma, gamma_violations, in_domain, in_sector, separation_margin
from .errors import BqkzError, ConfigError
from .qseries import QBase
from .weightspace import Params, WeightSpace, enumerate_I, is_half_integer

SUITES = ("algebra", "weightfn", "bethe", "integral_identity", "qkz", "asymptotics",
          "completeness", "finite_dim")

DEFAULT_CONFIG = {
    "params": {
        "tau": [-0.4, 0.3],
        "eta": [0.8, 0.1],
        "xi_plus": [0.3, 0.1],
        "xi_minus": [-0.2, 0.3],
        "ell": [[1.5, 0.2], [1.4, -0.1]],
        "M": 2,
    },
    "quadrature": {"n_per_dim": 128, "refine": False, "rel_tol": 1e-9, "max_n": 1024},
    "grid": {"points": [[[6.0, 0.2], [2.3, -0.1]], [[6.3, -0.4], [2.5, 0.3]], [[7.0, 1.0], [2.9, -0.5]]]},
    "seed": 0,
    "draws": 20,
    "output": None,
}

# spin-1/2 data used by the finite-dimensional suite when the config weights are generic
SPIN_HALF = {"tau": [-0.5, 0.2], "eta": [1.2, 0.1], "xi_plus": [0.3, 0.1], "xi_minus": [-0.2, 0.3],
             "ell": [[0.5, 0.0], [0.5, 0.0]], "M": 1}
SPIN_HALF_POINT = [[5.2, 0.2], [2.1, -0.1]]


def _complex(v, where):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if (isinstance(v, list) and len(v) == 2
            and all(isinstance(a, (int, float)) and not isinstance(a, bool) for a in v)):
        return complex(float(v[0]), float(v[1]))
    raise ConfigError(f"{where}: expected a number or [re, im], got {v!r}")


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _points(raw, where):
    if not isinstance(raw, list):
        raise ConfigError(f"{where}: expected a list")
    return [np.array([_complex(z, where) for z in pt]) for pt in raw]


@dataclass
class RunConfig:
    params: Params
    quadrature: quad.QuadratureSettings
    points: list = field(default_factory=list)
    ray: dict = None
    seed: int = 0
    draws: int = 20
    output: str = None

    @classmethod
    def from_dict(cls, raw):
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(raw) - set(DEFAULT_CONFIG)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            pr = raw["params"]
            params = Params(QBase(_complex(pr["tau"], "params.tau")),
                            _complex(pr["eta"], "params.eta"),
                            _complex(pr["xi_plus"], "params.xi_plus"),
                            _complex(pr["xi_minus"], "params.xi_minus"),
                            tuple(_complex(l, "params.ell") for l in pr["ell"]),
                            int(pr["M"]))
            qd = {**DEFAULT_CONFIG["quadrature"], **raw.get("quadrature", {})}
            settings = quad.QuadratureSettings(int(qd["n_per_dim"]), bool(qd["refine"]),
                                               float(qd["rel_tol"]), int(qd["max_n"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad params or quadrature: {exc}") from exc
        except BqkzError as exc:
            raise ConfigError(str(exc)) from exc
        grid = raw.get("grid", {})
        if not isinstance(grid, dict):
            raise ConfigError("grid must be an object")
        points = _points(grid.get("points", []), "grid.points")
        ray = None
        if "ray" in grid:
            r = grid["ray"]
            try:
                ray = {"start": np.array([_complex(z, "grid.ray.start") for z in r["start"]]),
                       "direction": np.array([float(d) for d in r["direction"]]),
                       "depths": [float(d) for d in r["depths"]]}
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad ray: {exc}") from exc
        for pt in points + ([ray["start"]] if ray else []):
            if len(pt) != params.N:
                raise ConfigError(f"grid point {pt} has {len(pt)} entries, need {params.N}")
        output = raw.get("output")
        if output is not None and not isinstance(output, str):
            raise ConfigError("output must be a path or null")
        try:
            return cls(params, settings, points, ray, int(raw.get("seed", 0)),
                       int(raw.get("draws", 20)), output)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self):
        p, s = self.params, self.quadrature
        grid = {"points": [[_pair(z) for z in pt] for pt in self.points]}
        if self.ray:
            grid["ray"] = {"start": [_pair(z) for z in self.ray["start"]],
                           "direction": [float(d) for d in self.ray["direction"]],
                           "depths": list(self.ray["depths"])}
        return {
            "params": {"tau": _pair(p.tau), "eta": _pair(p.eta), "xi_plus": _pair(p.xi_plus),
                       "xi_minus": _pair(p.xi_minus), "ell": [_pair(l) for l in p.ell], "M": p.M},
            "quadrature": {"n_per_dim": s.n_per_dim, "refine": s.refine, "rel_tol": s.rel_tol,
                           "max_n": s.max_n},
            "grid": grid,
            "seed": self.seed,
            "draws": self.draws,
            "output": self.output,
        }

    def canonical(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def parse_config(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return RunConfig.from_dict(raw)


def load_config(path):
    if path is None:
        return RunConfig.from_dict(json.loads(json.dumps(DEFAULT_CONFIG)))
    try:
        with open(path) as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc


def _parse_k(text):
    try:
        return tuple(int(a) for a in text.split(",") if a.strip())
    except ValueError as exc:
        raise ConfigError(f"bad multi-index {text!r}") from exc


def _parse_t(text, N):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad t {text!r}: {exc}") from exc
    pts = _points([raw], "t")[0]
    if len(pts) != N:
        raise ConfigError(f"t needs {N} entries")
    return pts


def _check_key(cfg, k):
    if k not in enumerate_I(cfg.params.M, cfg.params.N):
        raise ConfigError(f"k={k} is not a weakly increasing M-tuple in 1..N")


# ---- suites ------------------------------------------------------------------

def _spin_half_config(cfg):
    p = cfg.params
    if all(is_half_integer(l) for l in p.ell) and p.eta.real > 0:
        return p, (cfg.points[0] if cfg.points else None)
    spin = RunConfig.from_dict({"params": SPIN_HALF})
    return spin.params, np.array([complex(*z) for z in SPIN_HALF_POINT])


def run_suite(cfg, suite, record=None):
    rng = np.random.default_rng(cfg.seed)
    p, s = cfg.params, cfg.quadrature
    if suite == "algebra":
        return harness.algebra_suite(rng, cfg.draws)
    if suite == "weightfn":
        return harness.weightfn_suite(rng, max(cfg.draws, 50))
    if suite == "bethe":
        return harness.bethe_suite(rng, min(cfg.draws, 10))
    if suite == "integral_identity":
        return harness.integral_suite(rng, min(cfg.draws, 10))
    if suite == "qkz":
        if record is not None:
            return record_rows(cfg, record)
        return harness.qkz_suite(p, cfg.points or None, s)
    if suite == "asymptotics":
        if cfg.ray:
            return harness.asymptotics_suite(p, cfg.ray["start"], cfg.ray["direction"],
                                             cfg.ray["depths"], s)
        return harness.asymptotics_suite(p, settings=s)
    if suite == "completeness":
        return harness.completeness_suite(p, cfg.points[0] if cfg.points else None, s)
    if suite == "finite_dim":
        fp, t = _spin_half_config(cfg)
        return harness.finite_dim_suite(fp, t, s)
    if suite == "all":
        return [r for name in SUITES for r in run_suite(cfg, name)]
    raise ConfigError(f"unknown suite {suite!r}")


def record_rows(cfg, record):
    """Re-verify a record written by ``solve``: recompute it and test the qKZ equation there."""
    k = tuple(record["k"])
    t = np.array([complex(*z) for z in record["t"]])
    p = cfg.params
    stored = np.array([complex(*c["value"]) for c in record["psi"]])
    fresh = quad.psi_solution(p, k, t, cfg.quadrature).value
    info = {"k": list(k), "t": record["t"]}
    rows = [harness.row("record reproduces", "stored solution matches recomputation", info,
                        harness.rel(stored, fresh), 1e-12)]
    for r in range(1, p.N + 1):
        rows.append(harness.row(f"qkz k={k} r={r}", "boundary qKZ equation", info,
                                qkz.qkz_residual(p, k, t, r, cfg.quadrature), 1e-6))
    return rows


# ---- commands ----------------------------------------------------------------

def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(cfg, suite, out=None, record=None):
    rows = run_suite(cfg, suite, record)
    passed = all(r["pass"] for r in rows if not r.get("informational"))
    report = {"suite": suite, "config": cfg.to_dict(), "passed": passed, "rows": rows}
    _emit(json.dumps(report, indent=2) + "\n", out or cfg.output)
    return 0 if passed else 1


def solve_record(cfg, k, t):
    p = cfg.params
    t = np.asarray(t, dtype=complex)
    space = WeightSpace(p.N, len(k))
    sub = p.with_M(len(k))
    th = quad.theta_solution(sub, k, t, cfg.quadrature)
    ph = weightfn.phi_k(k, t, sub) if k else 1 + 0j
    keys = [list(m) for m in space.comps] if k else [[]]
    return {
        "k": list(k),
        "t": [_pair(z) for z in t],
        "n_per_dim": th.n_per_dim,
        "phi": _pair(ph),
        "theta_error": th.error,
        "psi_error": abs(ph) * th.error,
        "psi": [{"key": key, "value": _pair(ph * v)} for key, v in zip(keys, th.value)],
        "theta": [{"key": key, "value": _pair(v)} for key, v in zip(keys, th.value)],
    }


def cmd_solve(cfg, k, t, out=None):
    if k:
        _check_key(cfg, k)
    rec = solve_record(cfg, k, t)
    _emit(json.dumps(rec, indent=2) + "\n", out or cfg.output)
    return 0


def sweep_rows(cfg):
    """One row per grid point: depth, t, the Omega_k coefficient of every Theta_k,
    the largest relative distance to nu_k Omega_k, and the running decay slope."""
    p = cfg.params
    keys = enumerate_I(p.M, p.N)
    if cfg.ray:
        d = cfg.ray["direction"]
        pts = [(s, cfg.ray["start"] + s * d) for s in cfg.ray["depths"]]
    else:
        pts = [(0.0, pt) for pt in cfg.points]
    nus = [weightfn.nu_k(k, p, consistent=True) for k in keys]
    out, dists = [], []
    for depth, t in pts:
        coefs, dist = [], 0.0
        for j, (k, nu) in enumerate(zip(keys, nus)):
            v = quad.theta_solution(p, k, t, cfg.quadrature).value
            coefs.append(v[j])
            target = np.zeros_like(v)
            target[j] = nu
            dist = max(dist, float(np.linalg.norm(v - target) / abs(nu)))
        dists.append(dist)
        slope = ""
        if len(dists) >= 2 and pts[-1][0] != pts[0][0]:
            depths = [q[0] for q in pts[:len(dists)]]
            if depths[-1] != depths[0]:
                slope = float(np.polyfit(depths, np.log(dists), 1)[0])
        out.append({"depth": depth, "t": ";".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in t),
                    "coefs": coefs, "distance": dist, "slope": slope})
    return keys, out


def cmd_sweep(cfg, out=None):
    keys, rows = sweep_rows(cfg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = ["depth", "t"]
    for k in keys:
        tag = "".join(map(str, k))
        head += [f"theta_{tag}_re", f"theta_{tag}_im"]
    w.writerow(head + ["distance", "slope"])
    for r in rows:
        vals = []
        for c in r["coefs"]:
            vals += [f"{c.real:.17g}", f"{c.imag:.17g}"]
        slope = r["slope"] if r["slope"] == "" else f"{r['slope']:.17g}"
        w.writerow([f"{r['depth']:.17g}", r["t"]] + vals + [f"{r['distance']:.17g}", slope])
    _emit(buf.getvalue(), out or cfg.output)
    return 0


def format_matrix(A):
    """Shape line, then one line per row of ``re im`` pairs at 17 significant digits."""
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    lines = [f"{A.shape[0]} {A.shape[1]}"]
    for rowv in A:
        lines.append(" ".join(f"{z.real:.17g} {z.imag:.17g}" for z in rowv))
    return "\n".join(lines) + "\n"


def operator_matrix(cfg, kind, x=None, legs=(1, 2), t=None):
    p = cfg.params
    space = WeightSpace(p.N, p.M)
    if kind == "R":
        i, j = legs
        return rkmat.embed_two_leg(rkmat.solve_R(p.ell[i - 1], p.ell[j - 1], x, p.M, p.eta),
                                   i - 1, j - 1, space)
    if kind in ("K+", "K-"):
        xi = p.xi_plus if kind == "K+" else p.xi_minus
        return rkmat.embed_diag(rkmat.k_coefficients(p.ell[legs[0] - 1], x, xi, p.M, p.eta),
                                legs[0] - 1, space)
    if kind == "transport":
        return qkz.transport(p, legs[0], t)
    raise ConfigError(f"unknown operator kind {kind!r}")


def cmd_dump_operator(cfg, kind, x, legs, t, out=None):
    _emit(format_matrix(operator_matrix(cfg, kind, x, legs, t)), out)
    return 0


def contour_record(cfg, k, t=None):
    p = cfg.params.with_M(len(k))
    dom = in_domain(p, k)
    spec = find_gamma(p, k)
    rec = {"k": list(k), "gamma": [_pair(g) for g in spec.gamma],
           "domain_margins": dom.margins, "base_point_violations": gamma_violations(p, k, spec.gamma)}
    if t is not None:
        rec["t"] = [_pair(z) for z in t]
        rec["segments"] = [[_pair(a), _pair(b)] for a, b in spec.anchored(t)]
        rec["sector_margins"] = in_sector(t, "A_tilde", p).margins
        rec["pole_separation"] = separation_margin(spec, t, p)
    return rec


def cmd_dump_contour(cfg, k, t, out=None):
    if len(k) == cfg.params.M:
        _check_key(cfg, k)
    _emit(json.dumps(contour_record(cfg, k, t), indent=2) + "\n", out)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="bqkz", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config; built-in defaults when omitted")
        sp.add_argument("--out", help="output path (default: config output, else stdout)")

    v = sub.add_parser("verify", help="run a verification suite and write a JSON report")
    common(v)
    v.add_argument("--suite", default="all", choices=SUITES + ("all",))
    v.add_argument("--record", help="qkz suite: re-verify a record written by solve")

    s = sub.add_parser("solve", help="compute Psi_k(t)")
    common(s)
    s.add_argument("--k", required=True, help="comma-separated multi-index, empty for M=0")
    s.add_argument("--t", help="JSON list of [re, im]; defaults to the first grid point")

    w = sub.add_parser("sweep", help="CSV table of Theta_k along the configured grid or ray")
    common(w)

    d = sub.add_parser("dump-operator", help="print an R, K or transport matrix")
    common(d)
    d.add_argument("--kind", required=True, choices=("R", "K+", "K-", "transport"))
    d.add_argument("--x", help="spectral argument as JSON number or [re, im]")
    d.add_argument("--legs", default="1,2", help="legs (1-based); transport uses the first as r")
    d.add_argument("--t", help="transport: JSON list of [re, im]")

    c = sub.add_parser("dump-contour", help="base points and anchored segments as JSON")
    common(c)
    c.add_argument("--k", required=True)
    c.add_argument("--t", help="JSON list of [re, im]; defaults to the first grid point")
    return ap


def _t_or_default(cfg, text):
    if text:
        return _parse_t(text, cfg.params.N)
    if not cfg.points:
        raise ConfigError("no --t given and the config grid has no points")
    return cfg.points[0]


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.verb == "verify":
            record = None
            if args.record:
                with open(args.record) as fh:
                    record = json.load(fh)
            return cmd_verify(cfg, args.suite, args.out, record)
        if args.verb == "solve":
            return cmd_solve(cfg, _parse_k(args.k), _t_or_default(cfg, args.t), args.out)
        if args.verb == "sweep":
            return cmd_sweep(cfg, args.out)
        if args.verb == "dump-operator":
            x = _complex(json.loads(args.x), "x") if args.x else None
            t = _parse_t(args.t, cfg.params.N) if args.t else None
            if args.kind == "transport" and t is None:
                t = _t_or_default(cfg, None)
            if args.kind != "transport" and x is None:
                raise ConfigError("--x is required for R and K")
            return cmd_dump_operator(cfg, args.kind, x, _parse_k(args.legs), t, args.out)
        if args.verb == "dump-contour":
            t = _parse_t(args.t, cfg.params.N) if args.t else (cfg.points[0] if cfg.points else None)
            return cmd_dump_contour(cfg, _parse_k(args.k), t, args.out)
    except (BqkzError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
