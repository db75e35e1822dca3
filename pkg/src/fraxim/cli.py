"""Command-line front end.

Subcommands ``sweep``, ``band``, ``validate`` and ``converge``.  Each reads an
optional JSON ``--config`` file; explicit flags override file values.

Exit codes: 0 success, 2 validation failure, 3 config error, 4 numeric
failure (resonance).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import closedform as cf
from .circuit import CircuitError, EvalContext, ResonanceError
from .families import FamilySpec, termination_impedance, trace_value
from .limits import double_limit, family_map, iterate

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CONFIG = 3
EXIT_NUMERIC = 4

RESIDUAL_TOL = 1e-10
DEFAULT_THRESHOLD = 2e-2


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    family: str = "sg"
    L: float = 1.0
    C: float = 1.0
    r: Optional[float] = None
    depth: int = 0
    termination: str = "short"
    termination_value: object = None
    epsilon: float = 0.0
    omega_start: float = 0.1
    omega_stop: float = 10.0
    omega_count: int = 50
    spacing: str = "log"
    output: Optional[str] = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        try:
            self.family_spec()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.omega_count < 1:
            raise ConfigError("omega count must be >= 1")
        if not self.omega_start > 0:
            raise ConfigError("omega start must be > 0")
        if self.omega_count > 1 and not self.omega_start < self.omega_stop:
            raise ConfigError("omega start must be < stop")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"unknown spacing {self.spacing!r}")
        if not self.epsilon >= 0:
            raise ConfigError("epsilon must be >= 0")

    def family_spec(self, **overrides) -> FamilySpec:
        kw = dict(family=self.family, L=self.L, C=self.C, r=self.r, depth=self.depth,
                  termination=self.termination, termination_value=self.termination_value)
        kw.update(overrides)
        return FamilySpec(**kw)

    def omegas(self) -> np.ndarray:
        if self.omega_count == 1:
            return np.array([self.omega_start])
        if self.spacing == "log":
            return np.geomspace(self.omega_start, self.omega_stop, self.omega_count)
        return np.linspace(self.omega_start, self.omega_stop, self.omega_count)


def _parse_termination(value):
    """``"short"`` or ``{"fixed": [re, im]}`` / ``{"fixed": [[re, im], [re, im]]}``."""
    if isinstance(value, str):
        return value, None
    if isinstance(value, dict) and "fixed" in value:
        v = value["fixed"]

        def cx(p):
            return complex(p[0], p[1]) if isinstance(p, (list, tuple)) else complex(p)

        if isinstance(v, (list, tuple)) and v and isinstance(v[0], (list, tuple)):
            return "fixed", (cx(v[0]), cx(v[1]))
        return "fixed", cx(v)
    raise ConfigError(f"bad termination {value!r}")


def _parse_list(text, cast=float):
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return [cast(x) for x in text]
    return [cast(x) for x in str(text).split(",") if x.strip()]


def load_config(args: argparse.Namespace) -> RunConfig:
    doc: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")

    kw: dict = {}
    for key in ("family", "L", "C", "r", "depth", "epsilon", "output"):
        if key in doc:
            kw[key] = doc[key]
    if "termination" in doc:
        kw["termination"], kw["termination_value"] = _parse_termination(doc["termination"])
    omega = doc.get("omega")
    if isinstance(omega, (int, float)):
        kw.update(omega_start=float(omega), omega_stop=float(omega), omega_count=1)
    elif isinstance(omega, dict):
        for src, dst in (("start", "omega_start"), ("stop", "omega_stop"),
                         ("count", "omega_count"), ("spacing", "spacing")):
            if src in omega:
                kw[dst] = omega[src]
    elif omega is not None:
        raise ConfigError("omega must be a number or an object")
    options = {k: doc[k] for k in ("oracle", "threshold", "expect_divergence",
                                   "depths", "epsilons") if k in doc}

    flag_map = {"family": "family", "L": "L", "C": "C", "r": "r", "depth": "depth",
                "epsilon": "epsilon", "output": "output", "omega_start": "omega_start",
                "omega_stop": "omega_stop", "omega_count": "omega_count",
                "spacing": "spacing"}
    for attr, key in flag_map.items():
        v = getattr(args, attr, None)
        if v is not None:
            kw[key] = v
    if getattr(args, "omega", None) is not None:
        kw.update(omega_start=args.omega, omega_stop=args.omega, omega_count=1)
    if getattr(args, "termination", None) is not None:
        t = args.termination
        if t.startswith("{"):
            t = json.loads(t)
        kw["termination"], kw["termination_value"] = _parse_termination(t)
    for opt in ("oracle", "expect_divergence"):
        if getattr(args, opt, False):
            options[opt] = True
    for opt in ("threshold", "depths", "epsilons"):
        v = getattr(args, opt, None)
        if v is not None:
            options[opt] = v

    try:
        if "depth" in kw:
            kw["depth"] = int(kw["depth"])
        if "omega_count" in kw:
            kw["omega_count"] = int(kw["omega_count"])
        for key in ("L", "C", "epsilon", "omega_start", "omega_stop"):
            if key in kw:
                kw[key] = float(kw[key])
        if kw.get("r") is not None:
            kw["r"] = float(kw["r"])
        if "depths" in options:
            options["depths"] = _parse_list(options["depths"], int)
        if "epsilons" in options:
            options["epsilons"] = _parse_list(options["epsilons"], float)
        if "threshold" in options:
            options["threshold"] = float(options["threshold"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(options=options, **kw)


def _fmt(x: float) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _threads() -> int:
    env = os.environ.get("FRAXIM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _pmap(fn, items):
    """Order-preserving map over a thread pool capped by FRAXIM_THREADS."""
    items = list(items)
    n = min(_threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _closed_form(cfg: RunConfig, omega: float):
    """Characteristic value in map form: complex, or (z_v, z_l) for hanoi."""
    if cfg.family == "ladder":
        return cf.ladder_Z(omega, cfg.L, cfg.C)
    if cfg.family == "sg":
        return cf.sg_Z(omega, cfg.L, cfg.C)
    sol = cf.hanoi_solve(omega, cfg.L, cfg.C, cfg.r)
    return sol.z_v, sol.z_l


def _band(cfg: RunConfig) -> cf.FilterBand:
    if cfg.family == "ladder":
        # Re Z > 0 below the crossover w^2 L C = 4
        return cf.FilterBand(0.0, 2 / math.sqrt(cfg.L * cfg.C), True)
    if cfg.family == "sg":
        return cf.sg_band(cfg.L, cfg.C)
    return cf.hanoi_band(cfg.r, cfg.L, cfg.C)


def _headline(value) -> complex:
    """The scalar column reported as ``z``: z_l for hanoi."""
    return value[1] if isinstance(value, tuple) else value


def _start_value(cfg: RunConfig, ctx: EvalContext):
    z0 = termination_impedance(cfg.family_spec(), ctx)
    if z0 is None:
        z0 = (0j, 0j) if cfg.family == "hanoi" else 0j
    return z0


def _numeric_oracle(cfg: RunConfig, omega: float):
    if cfg.epsilon > 0:
        ctx = EvalContext(omega, cfg.epsilon)
        rep = iterate(family_map(cfg.family, ctx, cfg.L, cfg.C, cfg.r), _start_value(cfg, ctx))
        return rep.value if rep.converged else None
    return double_limit(cfg.family, omega, cfg.L, cfg.C, cfg.r).value


def _sweep_row(cfg: RunConfig, band: cf.FilterBand, omega: float) -> list:
    value = _closed_form(cfg, omega)
    z = _headline(value)
    row = [omega, z.real, z.imag, band.contains(omega)]
    if cfg.family == "ladder":
        a = cf.ladder_alpha(omega, cfg.L, cfg.C)
        row += [a.real, a.imag, abs(a)]
    elif cfg.family == "hanoi":
        zv, zl = value
        row += [zv.real, zv.imag, zl.real, zl.imag]
    if cfg.options.get("oracle"):
        num = _numeric_oracle(cfg, omega)
        zn = complex("nan") if num is None else _headline(num)
        row += [zn.real, zn.imag]
    return row


def sweep_header(cfg: RunConfig) -> list:
    header = ["omega", "re_z", "im_z", "in_band"]
    if cfg.family == "ladder":
        header += ["re_alpha", "im_alpha", "abs_alpha"]
    elif cfg.family == "hanoi":
        header += ["re_zv", "im_zv", "re_zl", "im_zl"]
    if cfg.options.get("oracle"):
        header += ["re_z_num", "im_z_num"]
    return header


def _write_csv(cfg: RunConfig, header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    text = buf.getvalue()
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def cmd_sweep(cfg: RunConfig) -> int:
    band = _band(cfg)
    rows = _pmap(lambda w: _sweep_row(cfg, band, float(w)), cfg.omegas())
    _write_csv(cfg, sweep_header(cfg), rows)
    return EXIT_OK


def band_report(cfg: RunConfig) -> dict:
    band = _band(cfg)
    if not band.nonempty:
        return {"family": cfg.family, "omega_lo": None, "omega_hi": None, "nonempty": False}
    hi = None if math.isinf(band.omega_hi) else band.omega_hi
    return {"family": cfg.family, "omega_lo": band.omega_lo, "omega_hi": hi, "nonempty": True}


def _emit_json(cfg: RunConfig, doc: dict) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_band(cfg: RunConfig) -> int:
    _emit_json(cfg, band_report(cfg))
    return EXIT_OK


def _rel_dev(a, b) -> float:
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    return float(np.max(np.abs(a - b)) / max(1e-300, float(np.max(np.abs(b)))))


def _cx(z):
    if z is None:
        return None
    if isinstance(z, tuple):
        return [_cx(x) for x in z]
    return [z.real, z.imag]


def _residual(cfg: RunConfig, omega: float, value) -> float:
    if cfg.family == "hanoi":
        return max(cf.hanoi_residuals(value, omega, cfg.L, cfg.C, cfg.r))
    f = family_map(cfg.family, EvalContext(omega, 0.0), cfg.L, cfg.C)
    return abs(f(value) - value) / abs(value)


def _validate_row(cfg: RunConfig, omega: float) -> dict:
    row: dict = {"omega": omega}
    try:
        cf_value = _closed_form(cfg, omega)
        row["closed_form"] = _cx(cf_value)
        row["residual"] = _residual(cfg, omega, cf_value)
        ctx = EvalContext(omega, cfg.epsilon)
        rep = iterate(family_map(cfg.family, ctx, cfg.L, cfg.C, cfg.r), _start_value(cfg, ctx))
        row["iterate"] = {"status": rep.status, "iterations": rep.iterations,
                          "value": _cx(rep.value),
                          "deviation": _rel_dev(rep.value, cf_value) if rep.converged else None}
        net_value = trace_value(cfg.family_spec(), ctx)
        row["network"] = {"depth": cfg.depth, "value": _cx(net_value),
                          "deviation": _rel_dev(net_value, cf_value)}
    except ResonanceError as exc:
        row["error"] = f"resonance: {exc}"
        row["numeric_failure"] = True
    except (CircuitError, ArithmeticError, ValueError) as exc:
        row["error"] = str(exc)
    return row


def validate_report(cfg: RunConfig) -> dict:
    threshold = cfg.options.get("threshold", DEFAULT_THRESHOLD)
    expect_div = bool(cfg.options.get("expect_divergence"))
    rows = _pmap(lambda w: _validate_row(cfg, float(w)), cfg.omegas())
    devs = []
    passed = True
    for row in rows:
        ok = "error" not in row and row["residual"] <= RESIDUAL_TOL
        if ok:
            converged = row["iterate"]["status"] == "converged"
            row["non_convergent_oracle"] = not converged
            if expect_div:
                ok = not converged
            else:
                ok = converged
                d = max(row["iterate"]["deviation"], row["network"]["deviation"]) if converged \
                    else math.inf
                devs.append(d)
                ok = ok and d <= threshold
        row["ok"] = ok
        passed = passed and ok
    finite = [d for d in devs if math.isfinite(d)]
    return {
        "family": cfg.family,
        "epsilon": cfg.epsilon,
        "depth": cfg.depth,
        "threshold": threshold,
        "expect_divergence": expect_div,
        "max_deviation": max(finite) if finite else None,
        "passed": passed,
        "rows": rows,
    }


def cmd_validate(cfg: RunConfig) -> int:
    report = validate_report(cfg)
    _emit_json(cfg, report)
    if any(row.get("numeric_failure") for row in report["rows"]):
        return EXIT_NUMERIC
    return EXIT_OK if report["passed"] else EXIT_VALIDATION


def converge_rows(cfg: RunConfig) -> list:
    omega = float(cfg.omegas()[0])
    depths = cfg.options.get("depths") or list(range(cfg.depth + 1))
    epsilons = cfg.options.get("epsilons") or [cfg.epsilon]
    target = _headline(_closed_form(cfg, omega))
    jobs = [(eps, n) for eps in epsilons for n in depths]

    def one(job):
        eps, n = job
        ctx = EvalContext(omega, eps)
        spec = cfg.family_spec(depth=n)
        try:
            if n == 0:
                z0 = termination_impedance(spec, ctx)
                z = complex("inf") if z0 is None else _headline(z0)
            else:
                z = _headline(trace_value(spec, ctx))
        except ResonanceError:
            z = complex(math.nan, math.nan)
        err = abs(z - target) if math.isfinite(abs(z)) else abs(z)
        return [eps, n, z.real, z.imag, err]

    return _pmap(one, jobs)


def cmd_converge(cfg: RunConfig) -> int:
    rows = converge_rows(cfg)
    _write_csv(cfg, ["epsilon", "n", "re_z", "im_z", "abs_err_vs_closedform"], rows)
    return EXIT_OK


COMMANDS = {"sweep": cmd_sweep, "band": cmd_band, "validate": cmd_validate,
            "converge": cmd_converge}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--family", choices=("ladder", "sg", "hanoi"))
    p.add_argument("--L", type=float)
    p.add_argument("--C", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--depth", type=int)
    p.add_argument("--termination",
                   help='short | open | inductor | JSON like \'{"fixed": [re, im]}\'')
    p.add_argument("--epsilon", type=float)
    p.add_argument("--omega", type=float, help="single frequency (rad/s)")
    p.add_argument("--omega-start", dest="omega_start", type=float)
    p.add_argument("--omega-stop", dest="omega_stop", type=float)
    p.add_argument("--omega-count", dest="omega_count", type=int)
    p.add_argument("--spacing", choices=("linear", "log"))
    p.add_argument("--output", "-o")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fraxim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("sweep", help="closed-form frequency sweep to CSV")
    _common(p)
    p.add_argument("--oracle", action="store_true",
                   help="add the numeric limit columns re_z_num, im_z_num")
    p = sub.add_parser("band", help="pass band as JSON")
    _common(p)
    p = sub.add_parser("validate", help="closed form vs map iteration vs network")
    _common(p)
    p.add_argument("--threshold", type=float)
    p.add_argument("--expect-divergence", dest="expect_divergence", action="store_true")
    p = sub.add_parser("converge", help="Z_{N,eps} table from finite networks")
    _common(p)
    p.add_argument("--depths", help="comma separated list of N")
    p.add_argument("--epsilons", help="comma separated list of epsilon")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResonanceError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
