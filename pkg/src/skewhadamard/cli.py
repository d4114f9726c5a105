"""Command-line front end: construct, verify, invariant and table1.

Exit codes: 0 when every check passes, 1 on a failed check or mismatch,
2 when the configuration cannot be used.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import table1 as t1
from .diffsets import (DEFAULT_EXACT_VERIFY_THRESHOLD, FXParams, HypothesisError,
                       build_fx_diffset, paley_diffset, parse_index_set, verify_skew_hadamard)
from .finite_field import FieldError, FieldParams, build_field
from .invariants import InvariantError, invariant_report, lifted_triple_values, pairwise_flags

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int
    f: int
    fx: FXParams | None  # None selects the Paley set
    index_sets: list[Any] = field(default_factory=list)
    a: int = 3
    t_list: list[int] = field(default_factory=list)
    moduli: list[int] = field(default_factory=list)
    output_path: str | None = None
    output_format: str | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        try:
            fld = d["field"]
            p, f = int(fld["p"]), int(fld["f"])
            fx_raw = d.get("fx", "paley")
            if fx_raw == "paley":
                fx = None
            else:
                fx = FXParams(int(fx_raw["p1"]), int(fx_raw.get("m", 1)),
                              str(fx_raw.get("variant", "classic")), int(fx_raw.get("s", 1)))
            index_sets = list(d.get("index_sets", [] if fx else [[0]]))
            out = d.get("output", {}) or {}
            cfg = cls(p, f, fx, index_sets, int(d.get("a", 3)),
                      [int(t) for t in d.get("t_list", [])],
                      [int(m) for m in d.get("moduli", [])],
                      out.get("path"), out.get("format"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed config: {exc!r}") from exc
        if fx is not None and not index_sets:
            raise ConfigError("a Feng-Xiang config needs at least one index set")
        if any(t < 1 or t % 2 == 0 for t in cfg.t_list):
            raise ConfigError("t_list entries must be odd positive integers")
        if cfg.output_format not in (None, "json", "tsv", "text"):
            raise ConfigError(f"unknown output format {cfg.output_format!r}")
        return cfg

    @property
    def N(self) -> int:
        return 2 if self.fx is None else self.fx.N


def load_config(path: str) -> RunConfig:
    text = Path(path).read_text()
    try:
        if path.endswith((".yaml", ".yml")):
            import yaml
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except Exception as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    return RunConfig.from_dict(data)


def _diffsets(cfg: RunConfig, ctx, strict: bool):
    """Yield (label, DiffSetSpec or HypothesisError) per configured index set."""
    if cfg.fx is None:
        yield "paley", paley_diffset(ctx)
        return
    for raw in cfg.index_sets:
        I = parse_index_set(raw, cfg.p, cfg.N)
        label = raw if isinstance(raw, str) else ",".join(map(str, raw))
        try:
            yield label, build_fx_diffset(ctx, cfg.fx, I, strict=strict)
        except HypothesisError as exc:
            yield label, exc


# -- commands -------------------------------------------------------------------

def cmd_construct(cfg: RunConfig, args) -> tuple[int, dict]:
    ctx = build_field(FieldParams(cfg.p, cfg.f))
    items, code = [], EXIT_OK
    for label, D in _diffsets(cfg, ctx, strict=False):
        summary = D.summary()
        summary["label"] = label
        summary["valid"] = all(D.checks.values())
        if not summary["valid"]:
            code = EXIT_MISMATCH
        items.append(summary)
    return code, {"command": "construct", "results": items}


def cmd_verify(cfg: RunConfig, args) -> tuple[int, dict]:
    ctx = build_field(FieldParams(cfg.p, cfg.f))
    items, code = [], EXIT_OK
    for label, D in _diffsets(cfg, ctx, strict=True):
        if isinstance(D, HypothesisError):
            items.append({"label": label, "passed": False, "error": str(D)})
            code = EXIT_MISMATCH
            continue
        report = verify_skew_hadamard(D, seed=args.seed, threshold=args.exact_verify_threshold)
        entry = report.to_dict()
        entry["label"] = label
        items.append(entry)
        if not report.passed:
            code = EXIT_MISMATCH
    return code, {"command": "verify", "results": items}


def cmd_invariant(cfg: RunConfig, args) -> tuple[int, dict]:
    ctx = build_field(FieldParams(cfg.p, cfg.f))
    items, reports, code = [], [], EXIT_OK
    for label, D in _diffsets(cfg, ctx, strict=True):
        if isinstance(D, HypothesisError):
            items.append({"label": label, "error": str(D)})
            code = EXIT_MISMATCH
            continue
        report = invariant_report(D, cfg.a, cfg.t_list)
        if report.formula_checked is False:
            code = EXIT_MISMATCH
        entry = report.to_dict()
        entry["label"] = label
        if not D.is_paley:
            entry["lifted"] = [
                {"t": t, "m": m, "residues": sorted(set(lifted_triple_values(D, cfg.a, t, m)))}
                for t in cfg.t_list for m in cfg.moduli
            ]
        items.append(entry)
        reports.append(report)
    flags = {str(t): [list(pair) for pair in pairwise_flags(reports, t)] for t in cfg.t_list}
    return code, {"command": "invariant", "results": items, "pairwise_distinct": flags}


def cmd_table1(args) -> tuple[int, dict]:
    primes = tuple(args.primes) if args.primes else t1.PRIMES
    cells = t1.run_table1(primes)
    code = EXIT_MISMATCH if any(c.status == "mismatch" for c in cells) else EXIT_OK
    return code, {"command": "table1", "cells": [c.to_dict() for c in cells],
                  "summary": {s: sum(c.status == s for c in cells)
                              for s in ("ok", "erratum", "mismatch")}}


# -- rendering ------------------------------------------------------------------

def _fmt_set(values) -> str:
    return "{" + ", ".join(map(str, values)) + "}"


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    cmd = payload["command"]
    lines: list[str] = []
    sep = "\t" if fmt == "tsv" else " | "
    if cmd == "table1":
        lines.append(sep.join(["status", "row", "column", "expected", "computed"]))
        for c in payload["cells"]:
            lines.append(sep.join([c["status"].upper(), c["row"], c["column"],
                                   str(c["expected"]), str(c["computed"])]))
        s = payload["summary"]
        lines.append(f"ok={s['ok']} erratum={s['erratum']} mismatch={s['mismatch']}")
    elif cmd == "invariant":
        lines.append(sep.join(["(p,f,N)", "index set", "T-set", "n_t"]))
        for r in payload["results"]:
            if "error" in r:
                lines.append(sep.join(["-", r["label"], "error", r["error"]]))
                continue
            nts = ", ".join(f"n_{t}={n}" for t, n in r["n_t"].items())
            lines.append(sep.join([f"({r['p']},{r['f']},{r['N']})", _fmt_set(r["index_set"]),
                                   _fmt_set(r["T_set"]), nts]))
    else:
        keys = sorted({k for r in payload["results"] for k in r if not isinstance(r[k], dict)})
        lines.append(sep.join(keys))
        for r in payload["results"]:
            lines.append(sep.join(str(r.get(k, "")) for k in keys))
    return "\n".join(lines) + "\n"


# -- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv", "text"), default=None)
    common.add_argument("--output", default=None, help="write here instead of stdout")
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for batch scripts; results never depend on it")
    common.add_argument("--exact-verify-threshold", type=int,
                        default=DEFAULT_EXACT_VERIFY_THRESHOLD,
                        help="largest q verified over every shift")
    common.add_argument("--seed", type=int, default=0, help="RNG seed for sampled verification")

    parser = argparse.ArgumentParser(prog="skewhadamard", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("construct", "build difference sets and report hypotheses"),
                       ("verify", "check the skew Hadamard property"),
                       ("invariant", "triple intersection numbers and verdicts")):
        cmd = sub.add_parser(name, parents=[common], help=text)
        cmd.add_argument("--config", required=True)
    tab = sub.add_parser("table1", parents=[common], help="recompute the N=14, f=3 table")
    tab.add_argument("--primes", type=int, nargs="*", choices=t1.PRIMES)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = None
    try:
        if args.command == "table1":
            code, payload = cmd_table1(args)
        else:
            cfg = load_config(args.config)
            handler = {"construct": cmd_construct, "verify": cmd_verify,
                       "invariant": cmd_invariant}[args.command]
            code, payload = handler(cfg, args)
    except (ConfigError, FieldError, InvariantError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    fmt = args.format or (cfg.output_format if cfg else None) or "text"
    text = render(payload, fmt)
    path = args.output or (cfg.output_path if cfg else None)
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
