"""Command line runner: ``scqm <command> [--config FILE] [flags]``.

Every option may come from a TOML file, either at the top level or inside a
table named after the command; flags given on the command line win.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import re
import sys
from dataclasses import dataclass

from . import __version__

MODELS = ("rbh", "rbh-trivial", "gcc", "color2d")
WORKERS_ENV = "SCQM_WORKERS"


class ConfigError(Exception):
    pass


# -- options -------------------------------------------------------------------

def _ints(text) -> list[int]:
    if isinstance(text, int):
        return [text]
    if isinstance(text, list):
        return [int(v) for v in text]
    return [int(v) for v in str(text).split(",") if v.strip()]


def _floats(text) -> list[float]:
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, list):
        return [float(v) for v in text]
    return [float(v) for v in str(text).split(",") if v.strip()]


@dataclass(frozen=True)
class Opt:
    name: str
    kind: object
    default: object = None
    help: str = ""
    choices: tuple | None = None


COMMON = [
    Opt("model", str, "rbh", "model family", MODELS),
    Opt("L", _ints, [2], "lattice sizes, comma separated"),
    Opt("size", int, 1, "tetrahedral colex size for gcc"),
    Opt("colex_file", str, None, "read the gcc colex from an exchange file"),
    Opt("surface", str, "cube", "sphere 2-colex for color2d", ("cube", "octahedron")),
    Opt("symmetry", str, "enforced", "restrict moves to symmetric ones", ("enforced", "none")),
    Opt("radius", int, None, "move radius (default 1, or 2 for gcc)"),
    Opt("out", str, None, "output path or prefix (default stdout)"),
]

COMMANDS = {
    "build": [],
    "barrier": [Opt("cap", int, 40, "energy cap for the search"),
                Opt("max_states", int, 50_000_000, "state budget")],
    "sample": [Opt("beta", _floats, [1.5], "inverse temperatures"),
               Opt("trials", int, 1, "independent runs per beta"),
               Opt("sweeps", int, 1000, "run length in sweeps"),
               Opt("seed", int, None, "base seed (required)")],
    "memory": [Opt("beta", _floats, [1.5], "inverse temperatures"),
               Opt("trials", int, 200, "trials per size"),
               Opt("t_cap", int, 1 << 20, "censoring time in sweeps"),
               Opt("seed", int, None, "base seed (required)"),
               Opt("workers", int, None, f"worker processes (default ${WORKERS_ENV} or 1)")],
    "peierls": [Opt("k_max", int, 12, "longest loop to count"),
                Opt("sublattice", str, "DUAL", "lattice to count on", ("PRIMAL", "DUAL"))],
    "gauge-verify": [],
}

UNHASHED = {"out", "workers"}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scqm", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for cmd, extra in COMMANDS.items():
        sp = sub.add_parser(cmd)
        sp.add_argument("--config", help="TOML file with defaults for any option")
        for o in COMMON + extra:
            flag = "--" + o.name.replace("_", "-")
            kw = {"dest": o.name, "default": None, "help": o.help}
            if o.choices:
                kw["choices"] = o.choices
            sp.add_argument(flag, type=str if o.kind in (_ints, _floats) else o.kind, **kw)
    return p


def _line_of(text: str, key: str) -> int:
    k = re.escape(key)
    pat = re.compile(rf"^\s*(?:{k}\s*=|\[\s*{k}\s*\])", re.M)
    m = pat.search(text)
    return text.count("\n", 0, m.start()) + 1 if m else 0


def load_config(path: str, command: str) -> dict:
    try:
        import tomllib as tomli
    except ModuleNotFoundError:
        import tomli

    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as e:
        raise ConfigError(f"{path}: {e.strerror}") from None
    text = raw.decode("utf-8", errors="replace")
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from None
    known = {o.name for o in COMMON + COMMANDS[command]}
    flat = {}
    for k, v in data.items():
        if isinstance(v, dict):
            if k not in COMMANDS:
                raise ConfigError(f"{path}:{_line_of(text, k) or '?'}: unknown table [{k}]")
            if k != command:
                continue
            items = v.items()
        else:
            items = [(k, v)]
        for kk, vv in items:
            name = kk.replace("-", "_")
            if name not in known:
                raise ConfigError(f"{path}:{_line_of(text, kk)}: unknown option {kk!r} for {command}")
            flat[name] = (vv, _line_of(text, kk))
    return flat


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and flags, then validate."""
    opts = COMMON + COMMANDS[args.command]
    from_file = load_config(args.config, args.command) if args.config else {}
    cfg = {}
    for o in opts:
        flag = getattr(args, o.name)
        where = "command line"
        if flag is not None:
            value = flag
        elif o.name in from_file:
            value, line = from_file[o.name]
            where = f"{args.config}:{line}"
        else:
            cfg[o.name] = o.default
            continue
        try:
            value = o.kind(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{where}: bad value {value!r} for {o.name}") from None
        if o.choices and value not in o.choices:
            raise ConfigError(f"{where}: {o.name} must be one of {', '.join(o.choices)}")
        nums = value if isinstance(value, list) else [value]
        if any(isinstance(v, (int, float)) and not isinstance(v, bool) and v <= 0 for v in nums):
            raise ConfigError(f"{where}: {o.name} must be positive")
        cfg[o.name] = value
    if "seed" in cfg and cfg["seed"] is None:
        raise ConfigError("a seed is required (--seed or seed = ... in the config)")
    if cfg.get("workers") is None and "workers" in cfg:
        env = os.environ.get(WORKERS_ENV, "1")
        if not env.isdigit() or int(env) < 1:
            raise ConfigError(f"${WORKERS_ENV} must be a positive integer, got {env!r}")
        cfg["workers"] = int(env)
    cfg["command"] = args.command
    return cfg


def config_hash(cfg: dict) -> str:
    keep = {k: v for k, v in cfg.items() if k not in UNHASHED}
    blob = json.dumps(keep, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _stamp(cfg: dict) -> dict:
    return {"version": __version__, "config_hash": config_hash(cfg),
            "config": {k: v for k, v in cfg.items() if k not in UNHASHED}}


# -- models ----------------------------------------------------------------------

def build_models(cfg: dict):
    """Yield ``(label, model)`` pairs for the configured family and sizes."""
    fam = cfg["model"]
    if fam in ("rbh", "rbh-trivial"):
        from .rbh import build_cubic_rbh, build_trivial_model
        make = build_cubic_rbh if fam == "rbh" else build_trivial_model
        return [(L, make(L)) for L in cfg["L"]]
    if fam == "gcc":
        from .colex import build_tetrahedral_colex, read_colex
        from .gcc import build_gcc
        if cfg["colex_file"]:
            with open(cfg["colex_file"]) as fh:
                cx = read_colex(fh.read())
        else:
            cx = build_tetrahedral_colex(cfg["size"])
        return [(cx.size, build_gcc(cx).model)]
    from .colex import cube_colex, truncated_octahedron_colex
    from .gauging import color_code_model
    tc = cube_colex() if cfg["surface"] == "cube" else truncated_octahedron_colex()
    return [(cfg["surface"], color_code_model(tc))]


def moves_for(model, cfg: dict):
    from .symmetry import derive_moveset, single_qubit_moves
    if cfg["symmetry"] == "none":
        return single_qubit_moves(model)
    radius = cfg["radius"] or (2 if model.family == "gcc" else 1)
    return derive_moveset(model, radius)


def _jsonable(v):
    try:
        json.dumps(v)
        return True
    except (TypeError, ValueError):
        return False


# -- commands -------------------------------------------------------------------

def cmd_build(cfg, out):
    from .model import check_model
    dumps = []
    for label, model in build_models(cfg):
        d = model.to_dict() if model.family != "gcc" else _gcc_dict(model)
        d["meta"] = {k: v for k, v in d["meta"].items() if not k.startswith("_") and _jsonable(v)}
        d.update(label=label, k=model.k, m=model.m, checks=check_model(model))
        dumps.append(d)
    out.text(json.dumps({**_stamp(cfg), "models": dumps}, indent=1, sort_keys=True) + "\n")
    return 0


def _gcc_dict(model):
    from .model import _plain
    from .pauli import to_string
    return {"family": model.family, "n": model.n, "gap": model.gap,
            "terms": [to_string(t) for t in model.terms],
            "term_labels": [[k, _plain(c)] for k, c in model.labels],
            "symmetry": [to_string(g) for g in model.symmetry.generators],
            "logicals": [[to_string(a), to_string(b)] for a, b in model.logicals],
            "meta": {k: v for k, v in model.meta.items() if k != "code"}}


def cmd_barrier(cfg, out):
    from .barrier import energy_barrier, replay, trace_max_energy
    rows = []
    for label, model in build_models(cfg):
        if not model.logicals:
            raise ConfigError(f"{cfg['model']} has no logical operators to reach")
        moves = moves_for(model, cfg)
        res = energy_barrier(model, moves, cap=cfg["cap"], max_states=cfg["max_states"])
        d = res.to_dict()
        d.pop("wall_time")
        d.update(label=label, moves=len(moves), symmetry=cfg["symmetry"])
        if res.barrier is not None:
            trace = replay(res.witness, model, moves)
            d["replay_max_energy"] = trace_max_energy(trace)
            d["replay_class"] = trace[-1].logical_class
        rows.append(d)
    out.text(json.dumps({**_stamp(cfg), "results": rows}, indent=1, sort_keys=True) + "\n")
    return 0


def cmd_sample(cfg, out):
    from .dynamics import geometric_times, metropolis_run, trial_seeds
    stamp = _stamp(cfg)
    lines, summary = [], []
    for label, model in build_models(cfg):
        moves = moves_for(model, cfg)
        M = len(moves)
        for beta in cfg["beta"]:
            for s in trial_seeds(cfg["seed"], cfg["trials"]):
                times = [t * M for t in geometric_times(cfg["sweeps"])]
                tr = metropolis_run(model, moves, beta, cfg["sweeps"] * M, s, times)
                d = tr.to_dict()
                d.update(label=label, moves=M, config_hash=stamp["config_hash"], version=__version__)
                lines.append(json.dumps(d, sort_keys=True))
                last = tr.samples[-1]
                summary.append([label, beta, s, cfg["sweeps"], tr.accepted, last[2], tr.final_operator_class])
    header = ["label", "beta", "seed", "sweeps", "accepted", "final_energy", "final_class"]
    out.text("\n".join(lines) + "\n", ".jsonl")
    out.text(_csv(stamp, header, summary), ".csv")
    return 0


def cmd_memory(cfg, out):
    from .dynamics import memory_time
    if cfg["model"] not in ("rbh", "rbh-trivial"):
        raise ConfigError("memory runs need an rbh family model (the decoder is specific to it)")
    stamp = _stamp(cfg)
    models = {L: (m, moves_for(m, cfg)) for L, m in build_models(cfg)}
    rows = []
    for beta in cfg["beta"]:
        est = memory_time(models, beta, cfg["trials"], cfg["t_cap"], cfg["seed"],
                          workers=cfg["workers"])
        for p in est.points:
            rows.append([cfg["model"], cfg["symmetry"], beta, p.L, p.tau, p.ci[0], p.ci[1],
                         p.trials, p.censored, int(p.censored_median)])
    header = ["model", "symmetry", "beta", "L", "tau", "ci_low", "ci_high", "trials",
              "censored", "censored_median"]
    out.text(_csv(stamp, header, rows), ".csv")
    return 0


def cmd_peierls(cfg, out):
    from .complex import build_cubic
    from .peierls import check_bound, enumerate_loops
    stamp = _stamp(cfg)
    rows = []
    for L in cfg["L"]:
        census = enumerate_loops(build_cubic(L, periodic=(True, True, True)), cfg["sublattice"], cfg["k_max"])
        rep = check_bound(census)
        for k, n, bound, ratio in census.rows():
            rows.append([L, k, n, f"{bound:.6g}", f"{ratio:.6g}", int(rep.holds), f"{rep.base:.6f}"])
    out.text(_csv(stamp, ["L", "k", "N", "bound", "ratio", "bound_holds", "fitted_base"], rows), ".csv")
    return 0


def cmd_gauge_verify(cfg, out):
    from itertools import combinations
    from .gauging import (ancilla_product_identity, designated_terms, gauge_commutes, gauge_extend,
                          gauge_maps, round_trip, terms_fixed, verify_emergent_constraints)
    reports = []
    for label, model in build_models(cfg):
        if model.family == "gcc":
            from .gcc import x_sector
            model = x_sector(model.meta["code"])
        ext = gauge_extend(model)
        rep = {"label": label, "family": model.family, "qubits": ext.n,
               "round_trip": round_trip(ext), "terms_fixed": terms_fixed(ext),
               "gauge_maps": gauge_maps(ext), "gauge_commutes": gauge_commutes(ext)}
        regions = _closed_regions(model)
        checks = []
        for name, region, colors in regions:
            for u, v in combinations(colors, 2):
                for kind in sorted({t for t in ext.kinds}):
                    r = verify_emergent_constraints(model, region, (u, v), kind)
                    ids = designated_terms(model, region, (u, v), kind)
                    anc = r.closed and r.identity and ancilla_product_identity(ext, ids)
                    checks.append({"region": name, "colors": [u, v], "kind": kind,
                                   "closed": r.closed, "identity": r.identity, "ancilla_identity": anc})
        rep["constraints"] = checks
        rep["all_ok"] = all(rep[k] for k in ("round_trip", "terms_fixed", "gauge_maps", "gauge_commutes")) \
            and all(c["identity"] and c["ancilla_identity"] for c in checks)
        reports.append(rep)
    out.text(json.dumps({**_stamp(cfg), "reports": reports}, indent=1, sort_keys=True) + "\n")
    return 0 if all(r["all_ok"] for r in reports) else 1


def _closed_regions(model):
    """The whole sphere for a 2-colex; every 3-cell boundary for a 3-colex."""
    if model.family == "color2d":
        tc = model.meta["surface"]
        return [("sphere", list(range(len(tc.faces))), sorted(set(tc.colors)))]
    cx = model.meta["code"].colex
    return [(f"cell {c}", list(fs), sorted({cx.face_color[f] for f in fs}))
            for c, fs in enumerate(cx.cell_faces)]


def _csv(stamp: dict, header: list, rows: list) -> str:
    buf = io.StringIO()
    buf.write(f"# version={stamp['version']} config_hash={stamp['config_hash']}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


class Output:
    """Writes to ``prefix + suffix`` files, or stdout without a prefix."""

    def __init__(self, prefix: str | None):
        self.prefix = prefix

    def text(self, body: str, suffix: str = ""):
        if self.prefix is None:
            sys.stdout.write(body)
            return
        path = self.prefix if self.prefix.endswith(suffix) else self.prefix + suffix
        with open(path, "w") as fh:
            fh.write(body)


HANDLERS = {"build": cmd_build, "barrier": cmd_barrier, "sample": cmd_sample,
            "memory": cmd_memory, "peierls": cmd_peierls, "gauge-verify": cmd_gauge_verify}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = resolve(args)
        return HANDLERS[args.command](cfg, Output(cfg["out"]))
    except ConfigError as e:
        print(f"scqm: error: {e}", file=sys.stderr)
        return 2
