"""Command-line front end: ``slidewin <command> [options]``.

Exit codes: 0 success, 1 usage or input error, 2 resource limit,
3 formula/oracle disagreement under ``--check-oracle``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, fields
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from typing import Any, Sequence

from . import best1, best2, oracle, optimize, twochoice
from .best1 import DEFAULT_N_EFF
from .core import (InputError, Policy, ProblemCase, ProblemSpec, ResourceError,
                   SlidewinError)

COMMANDS = ("solve", "oracle", "simulate", "optimize", "asymptotic", "table")
FORMATS = ("json", "csv", "text")
MAX_TABLE_N = 30
ORACLE_CHECK_N = 8
ORACLE_CHECK_TOL = 1e-9

EXIT_USAGE, EXIT_RESOURCE, EXIT_DISAGREE = 1, 2, 3

# fixed CSV column order per command
CSV_COLUMNS = {
    "solve": ["n", "k", "case", "thresholds", "p_win"],
    "oracle": ["n", "k", "case", "thresholds", "numerator", "denominator", "p_win"],
    "simulate": ["n", "k", "case", "thresholds", "trials", "seed", "wins", "p_hat", "std_err"],
    "optimize": ["n", "k", "case", "thresholds", "p_win"],
    "asymptotic": ["case", "w", "rho_star", "p_win"],
    "table": ["n", "k", "thresholds", "p_win"],
}


class Disagreement(SlidewinError):
    """Analytical result and oracle differ beyond tolerance."""


@dataclass
class RunConfig:
    command: str
    case: str = "best1"
    n: int | None = None
    k: int | None = None
    thresholds: list[int] | None = None
    trials: int | None = None
    seed: int | None = None
    w_grid: list[float] | None = None
    output_format: str = "text"
    output_path: str | None = None
    check_oracle: bool = False
    n_min: int | None = None
    n_max: int | None = None
    k_min: int | None = None
    k_max: int | None = None
    n_eff: int = DEFAULT_N_EFF
    coarse_step: float = optimize.COARSE_STEP

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @property
    def problem_case(self) -> ProblemCase:
        return ProblemCase.parse(self.case)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.output_format not in FORMATS:
            raise InputError(f"format must be one of {FORMATS}, got {self.output_format!r}")
        self.case = self.problem_case.value
        need = {
            "solve": ("n", "k", "thresholds"),
            "oracle": ("n", "k", "thresholds"),
            "simulate": ("n", "k", "thresholds", "trials", "seed"),
            "optimize": ("n", "k"),
            "asymptotic": ("w_grid",),
            "table": ("n_min", "n_max"),
        }[self.command]
        missing = [name for name in need if getattr(self, name) is None]
        if missing:
            raise InputError(f"{self.command} needs: {', '.join('--' + m.replace('_', '-') for m in missing)}")
        if self.command in ("solve", "oracle", "simulate"):
            Policy.from_thresholds(self.case, self.thresholds).validate(
                ProblemSpec(self.n, self.k, self.case))
        elif self.command == "optimize":
            ProblemSpec(self.n, self.k, self.case)
        elif self.command == "asymptotic":
            if not self.w_grid:
                raise InputError("asymptotic needs at least one --w value")
            if self.n_eff < 2:
                raise InputError(f"--n-eff must be >= 2, got {self.n_eff}")
        elif self.command == "table":
            if not 1 <= self.n_min <= self.n_max:
                raise InputError(f"need 1 <= n-min <= n-max, got {self.n_min}..{self.n_max}")
            if self.n_max > MAX_TABLE_N:
                raise ResourceError(f"table scans are capped at n={MAX_TABLE_N}, got {self.n_max}")
        if self.command == "simulate" and self.trials < 1:
            raise InputError(f"--trials must be >= 1, got {self.trials}")


# ---------------------------------------------------------------- formatting

def fmt4(p: float) -> str:
    """Four decimals, half-even."""
    return str(Decimal(repr(float(p))).quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN))


def join_policies(thresholds: Sequence[Sequence[int]]) -> str:
    """``[(1, 3), (1, 4)]`` -> ``"1:3;1:4"``; ``[(0,), (1,)]`` -> ``"0;1"``."""
    return ";".join(":".join(str(t) for t in th) for th in thresholds)


# ------------------------------------------------------------------ commands

def _policy(cfg: RunConfig) -> tuple[ProblemSpec, Policy]:
    return ProblemSpec(cfg.n, cfg.k, cfg.case), Policy.from_thresholds(cfg.case, cfg.thresholds)


def analytic_win(case: ProblemCase, n: int, k: int, thresholds: Sequence[int]) -> float:
    if case is ProblemCase.BEST1:
        return best1.win_probability(n, k, *thresholds)
    if case is ProblemCase.BEST2:
        return best2.win_probability(n, k, *thresholds)
    return twochoice.win_probability(n, k, *thresholds)


def cmd_solve(cfg: RunConfig) -> dict:
    spec, pol = _policy(cfg)
    p = analytic_win(spec.case, cfg.n, cfg.k, pol.thresholds)
    out = {"n": cfg.n, "k": cfg.k, "case": cfg.case, "thresholds": list(pol.thresholds), "p_win": p}
    if cfg.check_oracle:
        if cfg.n > ORACLE_CHECK_N:
            raise InputError(f"--check-oracle supports n <= {ORACLE_CHECK_N}, got {cfg.n}")
        exact = oracle.exact_win_probability(spec, pol)
        out["oracle"] = f"{exact.numerator}/{exact.denominator}"
        if abs(float(exact) - p) > ORACLE_CHECK_TOL:
            raise Disagreement(f"formula gives {p!r}, oracle gives {exact}")
    return out


def cmd_oracle(cfg: RunConfig) -> dict:
    spec, pol = _policy(cfg)
    exact = oracle.exact_win_probability(spec, pol)
    return {"n": cfg.n, "k": cfg.k, "case": cfg.case, "thresholds": list(pol.thresholds),
            "numerator": exact.numerator, "denominator": exact.denominator, "p_win": float(exact)}


def cmd_simulate(cfg: RunConfig) -> dict:
    spec, pol = _policy(cfg)
    est = oracle.monte_carlo(spec, pol, cfg.trials, cfg.seed)
    return {"n": cfg.n, "k": cfg.k, "case": cfg.case, "thresholds": list(pol.thresholds),
            "trials": est.trials, "seed": est.seed, "wins": est.wins,
            "p_hat": est.p_hat, "std_err": est.std_err}


def cmd_optimize(cfg: RunConfig) -> dict:
    res = optimize.optimal(cfg.case, cfg.n, cfg.k)
    return {"n": cfg.n, "k": cfg.k, "case": cfg.case,
            "thresholds": [list(t) for t in res.thresholds], "p_win": res.p_win}


def cmd_asymptotic(cfg: RunConfig) -> dict:
    pts = optimize.asymptotic_curve(cfg.case, cfg.w_grid, cfg.n_eff, cfg.coarse_step)
    return {"case": cfg.case, "n_eff": cfg.n_eff,
            "points": [{"w": p.w, "rho_star": list(p.rho_star), "p_win": p.p_win} for p in pts]}


def table_rows(case, n_min: int, n_max: int, k_min: int | None = None,
               k_max: int | None = None) -> list[dict]:
    if n_max > MAX_TABLE_N:
        raise ResourceError(f"table scans are capped at n={MAX_TABLE_N}, got {n_max}")
    rows = []
    for n in range(n_min, n_max + 1):
        for k in range(max(1, k_min or 1), min(n, k_max or n) + 1):
            res = optimize.optimal(case, n, k)
            rows.append({"n": n, "k": k, "thresholds": [list(t) for t in res.thresholds],
                         "p_win": res.p_win})
    return rows


def cmd_table(cfg: RunConfig) -> dict:
    return {"case": cfg.case,
            "rows": table_rows(cfg.case, cfg.n_min, cfg.n_max, cfg.k_min, cfg.k_max)}


HANDLERS = {
    "solve": cmd_solve, "oracle": cmd_oracle, "simulate": cmd_simulate,
    "optimize": cmd_optimize, "asymptotic": cmd_asymptotic, "table": cmd_table,
}


# --------------------------------------------------------------- rendering

def _csv_records(command: str, result: dict) -> list[dict]:
    if command == "asymptotic":
        return [{"case": result["case"], "w": p["w"],
                 "rho_star": ";".join(repr(r) for r in p["rho_star"]), "p_win": p["p_win"]}
                for p in result["points"]]
    if command == "table":
        return [{"n": r["n"], "k": r["k"], "thresholds": join_policies(r["thresholds"]),
                 "p_win": fmt4(r["p_win"])} for r in result["rows"]]
    rec = dict(result)
    th = rec["thresholds"]
    rec["thresholds"] = join_policies(th if command == "optimize" else [th])
    return [rec]


def _text(command: str, result: dict) -> str:
    if command == "oracle":
        return f"{result['numerator']}/{result['denominator']} = {result['p_win']:.6f}"
    if command == "simulate":
        return (f"p_hat = {result['p_hat']:.6f} +/- {result['std_err']:.6f} "
                f"({result['trials']} trials, seed {result['seed']})")
    if command == "asymptotic":
        lines = [f"w={p['w']:g} rho*={','.join(f'{r:.5f}' for r in p['rho_star'])} "
                 f"p_win={fmt4(p['p_win'])}" for p in result["points"]]
        return "\n".join(lines)
    if command == "table":
        return "\n".join(f"n={r['n']} k={r['k']} thresholds={join_policies(r['thresholds'])} "
                         f"p_win={fmt4(r['p_win'])}" for r in result["rows"])
    th = result["thresholds"]
    shown = join_policies(th if command == "optimize" else [th])
    return (f"{result['case']} n={result['n']} k={result['k']} thresholds={shown} "
            f"p_win={fmt4(result['p_win'])}")


def render(cfg: RunConfig, result: dict) -> str:
    if cfg.output_format == "json":
        return json.dumps({"config": cfg.to_dict(), "result": result}) + "\n"
    if cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS[cfg.command],
                                extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        writer.writerows(_csv_records(cfg.command, result))
        return buf.getvalue()
    return _text(cfg.command, result) + "\n"


# ------------------------------------------------------------------- parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in str(text).replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in str(text).replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # every default is None so config-file values can fill whatever flags omit
    common.add_argument("-c", "--case", choices=[c.value for c in ProblemCase])
    common.add_argument("-n", "--n", type=int)
    common.add_argument("-k", "--k", type=int)
    common.add_argument("-d", "--d", type=int, help="Best-1 threshold")
    common.add_argument("--d1", "--delta1", dest="d1", type=int, help="first threshold")
    common.add_argument("--d2", "--delta2", dest="d2", type=int, help="second threshold")
    common.add_argument("-t", "--thresholds", type=_int_list, help="comma-separated thresholds")
    common.add_argument("-T", "--trials", type=int)
    common.add_argument("-s", "--seed", type=int)
    common.add_argument("-w", "--w", dest="w_grid", type=_float_list, action="append",
                        help="window fraction(s); repeat or comma-separate")
    common.add_argument("--n-min", type=int)
    common.add_argument("--n-max", type=int)
    common.add_argument("--k-min", type=int)
    common.add_argument("--k-max", type=int)
    common.add_argument("--n-eff", type=int, help=f"size standing in for large N (default {DEFAULT_N_EFF})")
    common.add_argument("--coarse-step", type=float)
    common.add_argument("-f", "--format", dest="output_format", choices=FORMATS)
    common.add_argument("-o", "--output", dest="output_path")
    common.add_argument("--check-oracle", action="store_true", default=None)
    common.add_argument("--config", help="key=value file; flags override it")

    parser = _Parser(prog="slidewin", description="Sliding-window secretary problem solver.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "solve": "win probability of a policy from the recursions",
        "oracle": "exact win probability by enumerating all permutations",
        "simulate": "Monte Carlo estimate of a policy's win probability",
        "optimize": "all optimal thresholds for one (n, k)",
        "asymptotic": "optimal normalized thresholds against window fraction",
        "table": "optimal thresholds and win probability over a range of n",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def read_config_file(path: str) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


_FILE_KEYS = {
    "case": str, "n": int, "k": int, "d": int, "d1": int, "delta1": int, "d2": int,
    "delta2": int, "thresholds": _int_list, "trials": int, "seed": int, "w": _float_list,
    "w_grid": _float_list, "n_min": int, "n_max": int, "k_min": int, "k_max": int,
    "n_eff": int, "coarse_step": float, "format": str, "output_format": str,
    "output": str, "output_path": str, "check_oracle": lambda v: v.lower() in ("1", "true", "yes"),
}
_FILE_ALIASES = {"delta1": "d1", "delta2": "d2", "w": "w_grid", "format": "output_format",
                 "output": "output_path"}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    opts = vars(ns).copy()
    if opts.get("w_grid") is not None:
        opts["w_grid"] = [w for chunk in opts["w_grid"] for w in chunk]
    if opts.get("config"):
        try:
            file_values = read_config_file(opts["config"])
        except OSError as exc:
            raise InputError(f"cannot read config file: {exc}") from None
        for key, raw in file_values.items():
            if key not in _FILE_KEYS:
                raise InputError(f"unknown config key {key!r}")
            try:
                value = _FILE_KEYS[key](raw)
            except (ValueError, argparse.ArgumentTypeError):
                raise InputError(f"bad value for {key}: {raw!r}") from None
            dest = _FILE_ALIASES.get(key, key)
            if opts.get(dest) is None:
                opts[dest] = value

    case = ProblemCase.parse(opts.get("case") or "best1")
    thresholds = opts.get("thresholds")
    if thresholds is None:
        if case is ProblemCase.BEST1 and opts.get("d") is not None:
            thresholds = [opts["d"]]
        elif case is not ProblemCase.BEST1 and opts.get("d1") is not None and opts.get("d2") is not None:
            thresholds = [opts["d1"], opts["d2"]]
    command = opts["command"]
    n_min, n_max = opts.get("n_min"), opts.get("n_max")
    if command == "table" and opts.get("n") is not None:
        n_min = opts["n"] if n_min is None else n_min
        n_max = opts["n"] if n_max is None else n_max
    default_format = "csv" if command == "table" else "text"
    cfg = RunConfig(
        command=command, case=case.value, n=opts.get("n"), k=opts.get("k"),
        thresholds=thresholds, trials=opts.get("trials"), seed=opts.get("seed"),
        w_grid=opts.get("w_grid"), output_format=opts.get("output_format") or default_format,
        output_path=opts.get("output_path"), check_oracle=bool(opts.get("check_oracle")),
        n_min=n_min, n_max=n_max, k_min=opts.get("k_min"), k_max=opts.get("k_max"),
        n_eff=opts.get("n_eff") or DEFAULT_N_EFF,
        coarse_step=opts.get("coarse_step") or optimize.COARSE_STEP,
    )
    cfg.validate()
    return cfg


def run(cfg: RunConfig) -> str:
    return render(cfg, HANDLERS[cfg.command](cfg))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        text = run(cfg)
    except Disagreement as exc:
        print(f"slidewin: oracle disagreement: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except ResourceError as exc:
        print(f"slidewin: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except SlidewinError as exc:
        print(f"slidewin: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
