"""Command-line front end: ``dirichlet-cf <subcommand> [options]``.

Exit codes: 0 on success, 1 on a usage, value, I/O or numerical error
(diagnostic on stderr, prefixed ``error[usage]``, ``error[value]``,
``error[io]`` or ``error[numeric]``), 2 when ``verify`` finds a failing
criterion.  Output is JSON by default (floats with 17 significant digits),
CSV for the plotting commands, or an aligned text table with ``--output
pretty``.  Identical arguments give byte-identical output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

import numpy as np

from . import BACKEND, __version__

EXIT_OK, EXIT_ERROR, EXIT_VERIFY = 0, 1, 2
MAX_SAMPLES = 10**8
MAX_GRID = 100_000


class CLIError(Exception):
    prefix = "error"


class UsageError(CLIError):
    prefix = "error[usage]"


class BadValue(CLIError):
    prefix = "error[value]"


class IOFailure(CLIError):
    prefix = "error[io]"


class NumericFailure(CLIError):
    prefix = "error[numeric]"


# -- argument parsing ----------------------------------------------------------


def parse_float(text: str, name: str, lo=-math.inf, hi=math.inf, lo_open=False) -> float:
    try:
        x = float(text)
    except (TypeError, ValueError):
        raise BadValue(f"--{name}: {text!r} is not a number") from None
    if not math.isfinite(x):
        raise BadValue(f"--{name}: must be finite")
    if x < lo or x > hi or (lo_open and x == lo):
        lo_s = "(" if lo_open else "["
        raise BadValue(f"--{name}: {x} outside {lo_s}{lo}, {hi}]")
    return x


def parse_int(text: str, name: str, lo: int | None = None, hi: int | None = None) -> int:
    try:
        x = int(text)
    except (TypeError, ValueError):
        raise BadValue(f"--{name}: {text!r} is not an integer") from None
    if (lo is not None and x < lo) or (hi is not None and x > hi):
        raise BadValue(f"--{name}: {x} outside [{lo}, {hi}]")
    return x


def parse_floats(text: str, name: str, lo=-math.inf, hi=math.inf, lo_open=False,
                 allow_empty=False) -> list[float]:
    items = [t.strip() for t in text.split(",")] if text.strip() else []
    if not items and not allow_empty:
        raise BadValue(f"--{name}: empty list")
    if any(t == "" for t in items):
        raise BadValue(f"--{name}: malformed list {text!r}")
    return [parse_float(t, name, lo, hi, lo_open) for t in items]


def parse_grid(text: str, name: str) -> list[float]:
    """``a:b:step`` (inclusive of b up to rounding) or a comma list."""
    if ":" not in text:
        return parse_floats(text, name)
    parts = text.split(":")
    if len(parts) != 3:
        raise BadValue(f"--{name}: expected start:stop:step, got {text!r}")
    a, b, h = (parse_float(p, name) for p in parts)
    if h <= 0 or b < a:
        raise BadValue(f"--{name}: need step > 0 and stop >= start")
    count = int(math.floor((b - a) / h + 1e-9)) + 1
    if count > MAX_GRID:
        raise BadValue(f"--{name}: grid has {count} points, limit {MAX_GRID}")
    return [round(a + i * h, 12) for i in range(count)]


def parse_cuts(text: str, name: str) -> list[float]:
    cuts = parse_floats(text, name, 0.0, 1.0, allow_empty=True)
    if any(c <= 0 or c >= 1 for c in cuts) or any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise BadValue(f"--{name}: cuts must be strictly increasing inside (0, 1)")
    return cuts


def parse_piecewise(text: str, name: str):
    """``piecewise:<cuts>:<values>``, e.g. ``piecewise:0.5:1,-1``."""
    from .ferguson import BasePartition, PiecewiseConstant

    kind, _, rest = text.partition(":")
    if kind != "piecewise" or rest.count(":") != 1:
        raise BadValue(f"--{name}: expected piecewise:<cuts>:<values>, got {text!r}")
    cuts_s, vals_s = rest.split(":")
    cuts = parse_cuts(cuts_s, name)
    vals = parse_floats(vals_s, name)
    if len(vals) != len(cuts) + 1:
        raise BadValue(f"--{name}: {len(cuts)} cuts need {len(cuts) + 1} values, got {len(vals)}")
    return PiecewiseConstant(BasePartition(cuts), vals)


def parse_region(text: str, name: str):
    from .ferguson import Region

    try:
        region = Region.parse(text)
    except ValueError as e:
        raise BadValue(f"--{name}: {e}") from None
    for a, b in region.intervals:
        if a < 0 or b > 1:
            raise BadValue(f"--{name}: intervals must lie in [0, 1]")
    return region


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- output ------------------------------------------------------------------------


def fmt_float(x: float, digits: int = 17) -> str:
    if not math.isfinite(x):
        return "null"
    if x == 0:
        return "0.0"
    s = format(x, f".{digits}g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def _jsonable(obj):
    """Convert library values to plain JSON structures (floats kept as floats)."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def dump_json(obj, indent: int | None = 2, digits: int = 17) -> str:
    """JSON with every float written to ``digits`` significant digits."""
    pad = "" if indent is None else " " * indent

    def enc(o, level):
        if isinstance(o, dict):
            if not o:
                return "{}"
            inner = [f"{json.dumps(k)}: {enc(v, level + 1)}" for k, v in o.items()]
            return _wrap("{", "}", inner, level)
        if isinstance(o, list):
            if not o:
                return "[]"
            if all(not isinstance(v, (dict, list)) for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            return _wrap("[", "]", [enc(v, level + 1) for v in o], level)
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, float):
            return fmt_float(o, digits)
        return json.dumps(o)

    def _wrap(op, cl, items, level):
        if indent is None:
            return op + ", ".join(items) + cl
        sep = ",\n" + pad * (level + 1)
        return op + "\n" + pad * (level + 1) + sep.join(items) + "\n" + pad * level + cl

    return enc(_jsonable(obj), 0) + "\n"


def _cell(v, digits):
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v), digits).replace("null", "nan")
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x, digits) for x in v)
    return str(v)


def dump_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v, 17) for v in r])
    return buf.getvalue()


def dump_pretty(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [list(header)] + [[_cell(v, 10) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


@dataclass
class Output:
    data: dict
    header: list[str] | None = None
    rows: list[list] = field(default_factory=list)
    default_format: str = "json"
    exit_code: int = EXIT_OK

    def render(self, fmt: str | None) -> str:
        fmt = fmt or self.default_format
        if fmt == "json":
            return dump_json(self.data)
        if self.header is None:
            if fmt == "pretty":
                return dump_json(self.data, digits=10)
            raise UsageError("csv output is not available for this subcommand")
        if fmt == "csv":
            return dump_csv(self.header, self.rows)
        return dump_pretty(self.header, self.rows)


# -- subcommands -------------------------------------------------------------------


def cmd_cycle_index(a) -> Output:
    from .cycle_index import N_MAX, cycle_index, cycle_index_group
    from .polya import parse_group

    if a.group_file is None and a.group is None:
        if a.n is None:
            raise UsageError("cycle-index needs --n, --group or --group-file")
        n = parse_int(a.n, "n", 0, N_MAX)
        z = cycle_index(n)
        source = f"sym:{n}"
    else:
        source = a.group if a.group is not None else f"file:{a.group_file}"
        z = cycle_index_group(_load_group(source, parse_group))
        if a.n is not None and parse_int(a.n, "n", 0) != z.n:
            raise BadValue(f"--n {a.n} does not match the group degree {z.n}")
    terms = [{"lambda": list(lam.freq), "num": c.numerator, "den": c.denominator}
             for lam, c in z.items()]
    rows = [[" ".join(map(str, lam.freq)), c.numerator, c.denominator] for lam, c in z.items()]
    return Output({"n": z.n, "group": source, "terms": terms}, ["lambda", "num", "den"], rows)


def _load_group(spec: str, parse_group):
    try:
        return parse_group(spec)
    except OSError as e:
        raise IOFailure(f"cannot read group file: {e}") from None
    except json.JSONDecodeError as e:
        raise IOFailure(f"group file is not valid JSON: {e}") from None
    except ValueError as e:
        raise BadValue(str(e)) from None


def cmd_moments(a) -> Output:
    from .dirichlet import moment_cycle_index, moment_monte_carlo, moment_multiindex

    alpha = parse_floats(a.alpha, "alpha", 0.0, lo_open=True)
    s = parse_floats(a.s, "s")
    n = parse_int(a.n, "n", 0, 30)
    if len(alpha) != len(s):
        raise BadValue("--alpha and --s must have the same length")
    routes = ["multiindex", "cycleindex", "montecarlo"] if a.route == "all" else [a.route]
    samples = parse_int(a.mc_samples, "mc-samples", 2, MAX_SAMPLES)
    out = []
    for r in routes:
        if r == "multiindex":
            out.append({"route": r, "value": float(moment_multiindex(s, alpha, n))})
        elif r == "cycleindex":
            out.append({"route": r, "value": float(moment_cycle_index(s, alpha, n))})
        else:
            rep = moment_monte_carlo(s, alpha, n, samples, seed=a.seed)
            out.append({"route": r, "value": float(rep.value), "stderr": rep.stderr,
                        "samples": rep.samples})
    data = {"alpha": alpha, "s": s, "n": n, "value": out[0]["value"], "routes": out}
    rows = [[d["route"], d["value"], d.get("stderr", ""), d.get("samples", "")] for d in out]
    return Output(data, ["route", "value", "stderr", "samples"], rows)


def cmd_phi2(a) -> Output:
    from .dirichlet import humbert_phi2

    alpha = parse_floats(a.alpha, "alpha")
    s = parse_floats(a.s, "s")
    if len(alpha) != len(s):
        raise BadValue("--alpha and --s must have the same length")
    c = parse_float(a.c, "c") if a.c is not None else float(sum(alpha))
    ts = parse_grid(a.t, "t")
    rows = []
    for t in ts:
        v = complex(humbert_phi2(alpha, c, [t * x for x in s], tol=a.tol, method=a.method))
        rows.append([t, v.real, v.imag])
    data = {"alpha": alpha, "c": c, "s": s,
            "values": [{"t": t, "re": re, "im": im} for t, re, im in rows]}
    return Output(data, ["t", "re", "im"], rows, default_format="csv")


def cmd_map_check(a) -> Output:
    from .dirichlet import check_map

    k = parse_int(a.k, "k", 1, 6)
    if a.alpha is not None:
        alpha = [Fraction(x) for x in a.alpha.split(",")] if _is_fraction_list(a.alpha) else None
        if alpha is None or any(x <= 0 for x in alpha):
            raise BadValue("--alpha: expected positive rationals such as 1/2,3")
        if len(alpha) != k:
            raise BadValue(f"--alpha needs {k} entries")
    else:
        alpha = [Fraction(i + 1, k + 1) for i in range(k)]
    nmax = parse_int(a.max_degree, "max-degree", 0, 8)
    results, counterexamples, rows = [], [], []
    for g in product(range(1, k + 1), repeat=k):
        r = check_map(g, alpha, nmax)
        entry = {"g": list(g), "lambda": list(r.lam.freq), "pi": list(r.pi.images),
                 "tau": list(r.tau), "literal_factorization": r.literal,
                 "relabelled_factorization": r.relabelled, "contraction": r.contraction,
                 "moment_polynomials": r.moments, "pass": r.passed}
        results.append(entry)
        if not r.passed:
            counterexamples.append(entry)
        rows.append([" ".join(map(str, g)), r.literal, r.relabelled, r.contraction, r.moments,
                     r.passed])
    data = {"k": k, "alpha": [str(x) for x in alpha], "max_degree": nmax, "maps": len(results),
            "passed": sum(e["pass"] for e in results),
            "literal_factorizations": sum(e["literal_factorization"] for e in results),
            "counterexamples": counterexamples, "results": results}
    header = ["g", "literal", "relabelled", "contraction", "moments", "pass"]
    return Output(data, header, rows)


def _is_fraction_list(text: str) -> bool:
    try:
        [Fraction(x) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        return False
    return True


def cmd_dsa_check(a) -> Output:
    from .dsa import generic_alpha, verify_commutation_table, verify_serre

    trials = parse_int(a.trials, "trials", 1, 100_000)
    if a.alpha is not None:
        alpha = parse_floats(a.alpha, "alpha")
        if a.k is not None and parse_int(a.k, "k", 1, 8) != len(alpha):
            raise BadValue("--k does not match the length of --alpha")
    else:
        alpha = list(generic_alpha(parse_int(a.k or "3", "k", 1, 8), a.seed))
    checks = verify_commutation_table(alpha, trials=trials, seed=a.seed, tol=a.tol)
    checks += verify_serre(alpha, seed=a.seed, trials=trials, tol=a.tol)
    data = {"k": len(alpha), "alpha": alpha, "trials": trials, "seed": a.seed,
            "pass": all(c.passed for c in checks),
            "relations": [{"relation": c.relation, "max_error": c.max_error, "pass": c.passed}
                          for c in checks]}
    rows = [[c.relation, c.max_error, c.passed] for c in checks]
    return Output(data, ["relation", "max_error", "pass"], rows)


def cmd_polya(a) -> Output:
    from .cycle_index import cycle_index, cycle_index_group
    from .polya import brute_force_orbit_count, parse_group, shading_gf

    if (a.colors is None) == (a.palette is None):
        raise UsageError("give exactly one of --colors and --palette")
    if a.colors is not None:
        palette = [1] * parse_int(a.colors, "colors", 1, 12)
    else:
        palette = [parse_int(x, "palette", 1, 50) for x in a.palette.split(",")]
    if a.group.startswith("sym:"):
        n = parse_int(a.group[4:], "group", 1, 30)
        z = cycle_index(n)
        group = None
    else:
        group = _load_group(a.group, parse_group)
        z = cycle_index_group(group)
    gf = shading_gf(z, palette)
    terms = [{"content": list(m), "count": int(c)} for m, c in gf.items()]
    data = {"group": a.group, "n": z.n, "palette": palette, "total": int(gf.total()),
            "terms": terms}
    if a.brute:
        if group is None:
            group = _load_group(a.group, parse_group)
        try:
            bf = brute_force_orbit_count(group, palette)
        except ValueError as e:
            raise BadValue(f"--brute: {e}") from None
        data["brute_force_agrees"] = dict(bf.terms) == dict(gf.terms)
    rows = [[" ".join(map(str, m)), int(c)] for m, c in gf.items()]
    return Output(data, ["content", "count"], rows)


def cmd_ferguson_sim(a) -> Output:
    from .dirichlet import pochhammer
    from .ferguson import BasePartition, ferguson_marginals

    beta = parse_float(a.beta, "beta", 0.0, 1e6, lo_open=True)
    cuts = parse_cuts(a.cells, "cells")
    samples = parse_int(a.samples, "samples", 2, MAX_SAMPLES)
    eps = parse_float(a.eps, "eps", 0.0, 0.5, lo_open=True)
    part = BasePartition(cuts)
    ms = ferguson_marginals(beta, part, samples, seed=a.seed, eps=eps)
    alpha = beta * part.widths
    edges = part.edges
    rows, cells = [], []
    for i in range(part.m):
        y = ms.masses[:, i]
        for order in (1, 2):
            exact = pochhammer(float(alpha[i]), order) / pochhammer(beta, order)
            v = y**order
            se = float(v.std(ddof=1) / math.sqrt(samples))
            z = (float(v.mean()) - exact) / se if se > 0 else 0.0
            rows.append([i, float(edges[i]), float(edges[i + 1]), order, float(v.mean()), exact, se, z])
            cells.append({"cell": i, "lo": float(edges[i]), "hi": float(edges[i + 1]),
                          "order": order, "mc": float(v.mean()), "exact": exact,
                          "stderr": se, "z": z})
    w = ms.first_weight
    data = {"beta": beta, "cells": cuts, "samples": samples, "seed": a.seed, "eps": eps,
            "moments": cells,
            "first_weight": {"mc": float(w.mean()), "exact": 1 / (1 + beta),
                             "stderr": float(w.std(ddof=1) / math.sqrt(samples))},
            "mean_atoms": float(ms.atoms.mean())}
    header = ["cell", "lo", "hi", "order", "mc", "exact", "stderr", "z"]
    fmt_default = "csv" if a.emit == "csv" else "json"
    return Output(data, header, rows, default_format=fmt_default)


def cmd_cf(a) -> Output:
    from .ferguson import UniformMeasure, cf_monte_carlo_grid, cf_series

    beta = parse_float(a.beta, "beta", 0.0, 1e6, lo_open=True)
    f = parse_piecewise(a.f, "f")
    ts = parse_grid(a.t_grid, "t-grid")
    samples = parse_int(a.samples, "samples", 2, MAX_SAMPLES)
    nu = UniformMeasure(beta)
    series = [cf_series(nu, f, t, tol=a.tol) for t in ts]
    mc = cf_monte_carlo_grid(beta, f, ts, samples, seed=a.seed)
    rows = [[t, s.real, s.imag, m.value.real, m.value.imag, m.stderr]
            for t, s, m in zip(ts, series, mc)]
    header = ["t", "re_series", "im_series", "re_mc", "im_mc", "stderr"]
    data = {"beta": beta, "f": a.f, "samples": samples, "seed": a.seed,
            "values": [dict(zip(header, r)) for r in rows]}
    return Output(data, header, rows, default_format="csv")


def cmd_operators(a) -> Output:
    from .ferguson import (
        DiscreteMeasure,
        finite_dimensional_raise,
        finite_dimensional_raise_lower,
        raise_lower_region,
        raise_region,
    )

    region = parse_region(a.region, "region")
    f = parse_piecewise(a.f, "f")
    atoms = parse_floats(a.atoms, "atoms", 0.0, 1.0)
    weights = parse_floats(a.weights, "weights", 0.0, lo_open=True)
    if len(atoms) != len(weights):
        raise BadValue("--atoms and --weights must have the same length")
    lower = parse_region(a.lower_region, "lower-region") if a.lower_region else None
    nu = DiscreteMeasure(atoms, weights)
    if lower is not None and not nu.total_mass > 1:
        raise BadValue(f"--weights: E_(A,-B) needs total mass > 1, got {nu.total_mass}")
    e_a = raise_region(nu, f, region, tol=a.tol)
    fd_a = finite_dimensional_raise(nu, f, region, tol=a.tol)
    data = {"atoms": atoms, "weights": weights, "f": a.f, "region": a.region,
            "E_A": e_a, "E_A_finite": fd_a, "E_A_delta": abs(e_a - fd_a)}
    rows = [["E_A", e_a.real, e_a.imag, fd_a.real, fd_a.imag, abs(e_a - fd_a)]]
    if lower is not None:
        e_ab = raise_lower_region(nu, f, region, lower, tol=a.tol)
        fd_ab = finite_dimensional_raise_lower(nu, f, region, lower, tol=a.tol)
        data.update({"lower_region": a.lower_region, "E_A_minus_B": e_ab,
                     "E_A_minus_B_finite": fd_ab, "E_A_minus_B_delta": abs(e_ab - fd_ab)})
        rows.append(["E_A_minus_B", e_ab.real, e_ab.imag, fd_ab.real, fd_ab.imag, abs(e_ab - fd_ab)])
    header = ["operator", "re", "im", "re_finite", "im_finite", "delta"]
    return Output(data, header, rows)


def cmd_verify(a) -> Output:
    from .acceptance import CHECKS

    if a.criteria is not None:
        only = [parse_int(x, "criteria", 1, len(CHECKS)) for x in a.criteria.split(",")]
    elif a.all:
        only = sorted(CHECKS)
    else:
        raise UsageError("verify needs --all or --criteria")
    results = []
    for n in sorted(set(only)):
        r = CHECKS[n](a.seed)
        print(r.line(), file=sys.stderr)
        results.append(r)
    entries = []
    for r in results:
        d = r.as_dict()
        d.pop("seconds")  # wall-clock time would break byte-identical output
        entries.append(d)
    failed = [r.number for r in results if not r.passed]
    data = {"seed": a.seed, "backend": BACKEND, "pass": not failed, "failed": failed,
            "criteria": entries}
    rows = [[r.number, r.name, r.passed] for r in results]
    return Output(data, ["criterion", "name", "pass"], rows,
                  exit_code=EXIT_VERIFY if failed else EXIT_OK)


# -- parser -----------------------------------------------------------------------


COMMANDS: dict[str, tuple[Callable, str]] = {
    "cycle-index": (cmd_cycle_index, "cycle index of S_n or of a permutation group"),
    "moments": (cmd_moments, "moments E[(s.y)^n] for y ~ Dir(alpha) by several routes"),
    "phi2": (cmd_phi2, "Humbert series Phi2[alpha; c; t s] on a grid of t"),
    "map-check": (cmd_map_check, "factorization and pushforward check for every map [k] -> [k]"),
    "dsa-check": (cmd_dsa_check, "commutation and Serre relations of the ladder operators"),
    "polya": (cmd_polya, "shading generating function of a permutation group"),
    "ferguson-sim": (cmd_ferguson_sim, "stick-breaking marginals against Dirichlet moments"),
    "cf": (cmd_cf, "characteristic functional: series against Monte Carlo"),
    "operators": (cmd_operators, "region raising/lowering operators with cell-level cross-check"),
    "verify": (cmd_verify, "run the acceptance suite"),
}


def _common(defaults: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    sup = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--seed", default=sup("0"), help="64-bit RNG seed (default 0)")
    p.add_argument("--tol", default=sup(None), help="series tolerance (default 1e-10)")
    p.add_argument("--output", choices=["json", "csv", "pretty"], default=sup(None))
    p.add_argument("--out", default=sup(None), help="write output to this file")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dirichlet-cf", parents=[_common(True)],
                     description="Dirichlet and Dirichlet-Ferguson characteristic functionals.")
    parser.add_argument("--version", action="store_true", help="print version and build info")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    common = _common(False)
    p = {name: sub.add_parser(name, parents=[common], help=h) for name, (_, h) in COMMANDS.items()}

    p["cycle-index"].add_argument("--n")
    p["cycle-index"].add_argument("--group", help="sym:n, cyc:n, dih:n, id:n or file:<path>")
    p["cycle-index"].add_argument("--group-file")

    p["moments"].add_argument("--alpha", required=True)
    p["moments"].add_argument("--s", required=True)
    p["moments"].add_argument("--n", required=True)
    p["moments"].add_argument("--route", default="all",
                              choices=["all", "multiindex", "cycleindex", "montecarlo"])
    p["moments"].add_argument("--mc-samples", default="100000")

    p["phi2"].add_argument("--alpha", required=True)
    p["phi2"].add_argument("--s", required=True)
    p["phi2"].add_argument("--c", help="lower parameter (default |alpha|)")
    p["phi2"].add_argument("--t", default="1", help="start:stop:step or comma list")
    p["phi2"].add_argument("--method", default="auto", choices=["auto", "multiindex", "cycleindex"])

    p["map-check"].add_argument("--k", required=True)
    p["map-check"].add_argument("--alpha", help="rational parameters, e.g. 1/2,2,3/4")
    p["map-check"].add_argument("--max-degree", default="4")

    p["dsa-check"].add_argument("--k")
    p["dsa-check"].add_argument("--alpha")
    p["dsa-check"].add_argument("--trials", default="200")

    p["polya"].add_argument("--group", required=True)
    p["polya"].add_argument("--colors")
    p["polya"].add_argument("--palette")
    p["polya"].add_argument("--brute", action="store_true", help="also count orbits directly")

    p["ferguson-sim"].add_argument("--beta", required=True)
    p["ferguson-sim"].add_argument("--cells", required=True, help="cut points in (0, 1)")
    p["ferguson-sim"].add_argument("--samples", default="100000")
    p["ferguson-sim"].add_argument("--eps", default="1e-12")
    p["ferguson-sim"].add_argument("--emit", choices=["json", "csv"], default="json")

    p["cf"].add_argument("--beta", required=True)
    p["cf"].add_argument("--f", required=True, help="piecewise:<cuts>:<values>")
    p["cf"].add_argument("--t-grid", default="-5:5:0.5")
    p["cf"].add_argument("--samples", default="10000")

    p["operators"].add_argument("--region", required=True, help="a:b[,c:d...]")
    p["operators"].add_argument("--lower-region")
    p["operators"].add_argument("--f", default="piecewise:0.25,0.5,0.75:1.0,-0.5,0.3,0.0")
    p["operators"].add_argument("--atoms", default="0.1,0.3,0.6,0.85")
    p["operators"].add_argument("--weights", default="0.5,0.5,0.5,0.5")

    p["verify"].add_argument("--all", action="store_true")
    p["verify"].add_argument("--criteria", help="comma list of criterion numbers")
    return parser


def version_text() -> str:
    import scipy

    return (f"dirichlet-cf {__version__} (backend: {BACKEND}; python {platform.python_version()}; "
            f"numpy {np.__version__}; scipy {scipy.__version__})\n")


def _finish_config(a):
    a.seed = parse_int(a.seed, "seed", 0, 2**64 - 1)
    a.tol = 1e-10 if a.tol is None else parse_float(a.tol, "tol", 0.0, 1.0, lo_open=True)


_FLAGS = {"--version", "--all", "--brute", "-h", "--help"}


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--opt -5:5:1`` into ``--opt=-5:5:1`` so argparse keeps the value."""
    out: list[str] = []
    for tok in argv:
        prev = out[-1] if out else ""
        if (re.match(r"-[\d.]", tok) and prev.startswith("--") and "=" not in prev
                and prev not in _FLAGS):
            out[-1] = f"{prev}={tok}"
        else:
            out.append(tok)
    return out


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise IOFailure(f"cannot write {path}: {e}") from None


def main(argv: Sequence[str] | None = None) -> int:
    from .dirichlet import PoleError, SingularParameterError, TruncationError
    from .ferguson import MajorantViolation

    try:
        argv = sys.argv[1:] if argv is None else list(argv)
        a = build_parser().parse_args(_attach_negative_values(argv))
        if a.version:
            _write(version_text(), None)
            return EXIT_OK
        if a.command is None:
            raise UsageError("missing subcommand; see --help")
        _finish_config(a)
        out = COMMANDS[a.command][0](a)
        _write(out.render(a.output), a.out)
        return out.exit_code
    except CLIError as e:
        print(f"{e.prefix}: {e}", file=sys.stderr)
    except (SingularParameterError, PoleError) as e:
        print(f"error[value]: {e}", file=sys.stderr)
    except (TruncationError, MajorantViolation, ArithmeticError) as e:
        print(f"error[numeric]: {e}", file=sys.stderr)
    except ValueError as e:
        print(f"error[value]: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
