"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 I/O error, 4 invalid input state, 5 state too large for exact mode.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import config
from .axioms import battery_passed, check_oracle_equivalence, run_axiom_battery
from .config import EXACT_CAP, CapacityError, DomainError, PreconditionError
from .correlations import (
    EXACT,
    SYMMETRIC,
    WeightScheme,
    correlation_profile,
    make_weight_scheme,
    neural_complexity,
    neural_components,
    weaving,
)
from .ghz_analytic import GhzParams, default_schemes, ghz_neural_components, ghz_profile, ghz_sweep, linear_grid
from .qcore import permutation_asymmetry, state_from_json, validate_state

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO, EXIT_STATE, EXIT_CAP = 0, 1, 2, 3, 4, 5


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    n: int | None = None
    p_grid: tuple[float, float, int] = (0.0, 1.0, 101)
    weights: str = "uniform"
    log_base: str = "2"
    mode: str = "exact"
    out: str | None = None
    fmt: str = "csv"
    seed: int = 1
    trials: int = 50
    dense_cap: int | None = None
    state_file: str | None = None

    def __post_init__(self):
        start, stop, count = self.p_grid
        if count < 1:
            raise ConfigError("grid count must be >= 1")
        if not (0.0 <= start <= 1.0 and 0.0 <= stop <= 1.0):
            raise ConfigError("grid endpoints must lie in [0, 1]")
        if self.n is not None and self.n < 2:
            raise ConfigError("--n must be at least 2")
        if self.trials < 0:
            raise ConfigError("--trials must be non-negative")

    def grid(self) -> list[float]:
        return linear_grid(*self.p_grid)


def fmt_num(x: float) -> str:
    return f"{x:.12g}"


def parse_grid(spec: str) -> tuple[float, float, int]:
    try:
        start, stop, count = spec.split(":")
        return float(start), float(stop), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be start:stop:count, got {spec!r}")


def _custom_scheme(cfg: RunConfig, n: int) -> WeightScheme | None:
    if not cfg.weights.startswith("custom:"):
        if cfg.weights not in ("uniform", "linear"):
            raise ConfigError(f"unknown weights {cfg.weights!r}")
        return None
    path = cfg.weights.split(":", 1)[1]
    with open(path) as fh:
        values = json.load(fh)
    try:
        return make_weight_scheme("custom", n, values)
    except DomainError as exc:
        raise ConfigError(str(exc))


def _schemes(cfg: RunConfig, n: int) -> dict[str, WeightScheme]:
    schemes = default_schemes(n)
    custom = _custom_scheme(cfg, n)
    if custom is not None:
        schemes["custom"] = custom
    return schemes


def _emit(cfg: RunConfig, text: str):
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        Path(cfg.out).write_text(text)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_num(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands


def cmd_ghz_curve(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise ConfigError("--n is required")
    schemes = _schemes(cfg, cfg.n)
    rows = ghz_sweep(cfg.n, cfg.grid(), schemes)
    if cfg.fmt == "json":
        _emit(cfg, json.dumps([r.as_dict() for r in rows], indent=1) + "\n")
        return EXIT_OK
    names = list(schemes)
    header = ["p"] + [f"W_{s}" for s in names] + ["C"]
    table = [[r.p] + [r.weavings[s] for s in names] + [r.neural_complexity] for r in rows]
    _emit(cfg, _csv(header, table))
    return EXIT_OK


def cmd_ghz_orders(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise ConfigError("--n is required")
    out = []
    for p in cfg.grid():
        params = GhzParams(cfg.n, p)
        above = ghz_profile(params).above_k
        comps = ghz_neural_components(params)
        for k in range(1, cfg.n):
            out.append([p, k, above[k - 1], float(comps[k - 1])])
    if cfg.fmt == "json":
        keys = ("p", "k", "S_above_k", "C_k")
        _emit(cfg, json.dumps([dict(zip(keys, r)) for r in out], indent=1) + "\n")
    else:
        _emit(cfg, _csv(["p", "k", "S_above_k", "C_k"], out))
    return EXIT_OK


def analyze_state(rho, mode: str, custom: WeightScheme | None = None) -> dict:
    n = rho.n_sites
    asym = permutation_asymmetry(rho)
    prof = correlation_profile(rho, mode)
    report = {
        "N": n,
        "local_dims": list(rho.local_dims),
        "log_base": config.get_settings().log_base,
        "symmetry": {"max_asymmetry": asym, "permutation_invariant": asym <= 1e-8},
        "profile": prof.to_json(),
    }
    if n >= 2:
        comps = neural_components(rho)
        report["weaving"] = {
            name: weaving(prof, sch) for name, sch in default_schemes(n).items()
        }
        if custom is not None:
            report["weaving"]["custom"] = weaving(prof, custom)
        report["neural_components"] = comps
        report["neural_complexity"] = neural_complexity(rho, comps)
    return report


def cmd_dense_analyze(cfg: RunConfig) -> int:
    if cfg.state_file is None:
        raise ConfigError("a state file is required")
    mode = {"exact": EXACT, "symmetric": SYMMETRIC}.get(cfg.mode)
    if mode is None:
        raise ConfigError(f"unknown mode {cfg.mode!r}")
    try:
        with open(cfg.state_file) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        print(f"error: state file is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_STATE
    n_sites = len(obj.get("local_dims", [])) if isinstance(obj, dict) else 0
    if mode == EXACT and n_sites > EXACT_CAP:
        print(f"error: exact mode is capped at {EXACT_CAP} sites, state has {n_sites}", file=sys.stderr)
        return EXIT_CAP
    try:
        rho = state_from_json(obj, validate=False)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STATE
    report = validate_state(rho)
    if not report.passed:
        print(f"error: invalid state: {json.dumps(report.as_dict())}", file=sys.stderr)
        return EXIT_STATE
    try:
        custom = _custom_scheme(cfg, rho.n_sites) if rho.n_sites >= 2 else None
        result = analyze_state(rho, mode, custom)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STATE
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    _emit(cfg, json.dumps(result, indent=1) + "\n")
    return EXIT_OK


ORACLE_NS = tuple(range(2, 9))
ORACLE_PS = tuple(i / 10 for i in range(11))


def cmd_verify(cfg: RunConfig) -> int:
    reports = run_axiom_battery(cfg.seed, cfg.trials)
    if cfg.trials > 0:
        reports.append(check_oracle_equivalence(ORACLE_NS, ORACLE_PS))
    ok = battery_passed(reports)
    for r in reports:
        tag = "info" if r.informational else ("PASS" if r.passed else "FAIL")
        print(f"{tag:4s} {r.axiom:32s} trials={r.trials:4d} worst_violation={r.worst_violation:.3e}")
    if not ok:
        wdir = Path(cfg.out).parent if cfg.out else Path(tempfile.mkdtemp(prefix="weaveq-witness-"))
        for r in reports:
            if not r.passed and not r.informational:
                path = wdir / f"witness_{r.axiom}.json"
                path.write_text(json.dumps(r.witness))
                print(f"witness: {path}")
    if cfg.out:
        Path(cfg.out).write_text(json.dumps([r.to_json() for r in reports], indent=1, sort_keys=True) + "\n")
    print("verify:", "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "ghz-curve": cmd_ghz_curve,
    "ghz-orders": cmd_ghz_orders,
    "dense-analyze": cmd_dense_analyze,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weaveq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-base", choices=("2", "e"), default="2")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--dense-cap", type=int, default=None)
    common.add_argument("--weights", default="uniform", help="uniform|linear|custom:<json file>")

    for name in ("ghz-curve", "ghz-orders"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--p-grid", type=parse_grid, default=(0.0, 1.0, 101))

    p = sub.add_parser("dense-analyze", parents=[common])
    p.add_argument("state_file")
    p.add_argument("--mode", choices=("exact", "symmetric"), default="exact")

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=50)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
        overrides = {"log_base": cfg.log_base}
        if cfg.dense_cap is not None:
            overrides["dense_cap"] = cfg.dense_cap
        with config.settings(**overrides):
            return COMMANDS[cfg.subcommand](cfg)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
