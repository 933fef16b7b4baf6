"""Command-line entry point ``mirror``.

Structured results go to stdout, diagnostics to stderr. Every number is
written as a decimal string. Exit status: 0 when all requested checks pass,
1 when a check fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

from .acceptance import PROFILES, acceptance_suite
from .certify import (
    THEOREMS,
    certify_theorem,
    empirical_max_root,
    gcd_sequence_A056612,
    omega_cap,
    tN_value,
    uN_value,
    xi,
)
from .coefficients import FAMILIES, PLAIN, HyperSpec, zudilin_data
from .dwork import LEMMAS, HypothesisError, check_lemma, run_suite
from .maps import build_bold_q, build_mirror, build_q_tilde
from .scanner import ScanState, scan, scan_parallel, wolstenholme_scan
from .series import TruncSeries, series_from_json
from .yukawa import instanton_numbers

log = logging.getLogger("mirrormaps")

SEQUENCES = ("A056612", "Xi", "Omega", "t", "u")
DWORK_PARAMS = ("N", "k", "L", "s", "a", "K", "J", "m", "n", "j", "r", "u", "w")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def _vector(text: str) -> tuple:
    try:
        vec = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or N1,N2,..., got {text!r}") from None
    if not vec or min(vec) < 1:
        raise argparse.ArgumentTypeError("entries must be positive integers")
    return vec


# -- output --------------------------------------------------------------------


def _emit(records: list, mode: str, out, columns: list | None = None) -> None:
    if mode == "json":
        doc = records[0] if len(records) == 1 else records
        out.write(json.dumps(doc, indent=2) + "\n")
    elif mode == "jsonl":
        for r in records:
            out.write(json.dumps(r) + "\n")
    else:
        if columns is None:
            columns = list(records[0]) if records else []
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in records:
            w.writerow([_cell(r.get(c)) for c in columns])
        out.write(buf.getvalue())


def _cell(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    return "" if v is None else v


def _series_rows(**named: TruncSeries) -> list:
    n = max(len(s) for s in named.values())
    rows = []
    for i in range(n):
        row = {"index": str(i)}
        for name, s in named.items():
            row[name] = str(s[i]) if i < len(s) else None
        rows.append(row)
    return rows


# -- subcommands -----------------------------------------------------------------


def _build_instance(a):
    if a.map != "standard" and a.L is not None:
        raise UsageError(f"--L does not apply to --map {a.map}; use --family zudilin --L")
    if a.map == "bold":
        return build_bold_q(a.N, a.order)
    if a.map == "tilde":
        if len(a.N) != 1:
            raise UsageError("--map tilde takes a single N")
        return build_q_tilde(a.N[0], a.k, a.order)
    try:
        spec = HyperSpec(a.N, a.L, a.family)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return build_mirror(spec, a.order, a.k)


def cmd_build(a, out) -> int:
    inst = _build_instance(a)
    if a.emit == "json":
        rec = {
            "map": a.map,
            "Nvec": [str(n) for n in a.N],
            "family": a.family,
            "k": str(a.k),
            "L": None if a.L is None else str(a.L),
            "kind": inst.kind,
            "order": str(inst.order),
            "F": [str(c) for c in inst.F],
            "G": [str(c) for c in inst.G],
            "q": [str(c) for c in inst.q],
        }
        _emit([rec], "json", out)
    else:
        _emit(_series_rows(F=inst.F, G=inst.G, q=inst.q), a.emit, out, ["index", "F", "G", "q"])
    return 0


def _theorem_params(a) -> dict:
    params = {"k": a.k}
    if a.theorem in ("T1", "T2", "T4", "Conj2"):
        params["Nvec"] = a.N
        if a.theorem != "Conj2":
            params["L"] = a.L if a.L is not None else max(a.N)
    else:
        if len(a.N) != 1:
            raise UsageError(f"{a.theorem} takes a single N")
        params["N"] = a.N[0]
    return params


def cmd_certify(a, out) -> int:
    try:
        rep = certify_theorem(a.theorem, _theorem_params(a), a.order)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    _emit([rep.to_dict()], a.emit, out)
    if not rep.passed:
        log.error("%s: %s (index %s)", a.theorem, rep.detail, rep.witness_index)
    return 0 if rep.passed else 1


def cmd_maxroot(a, out) -> int:
    if a.series_from:
        s = series_from_json(Path(a.series_from).read_text())
    else:
        if a.N is None:
            raise UsageError("give --series-from or --N")
        s = _build_instance(a).normalized
    if s[0] == 0 and s.order >= 1 and s[1] == 1:
        s = s.shift_down(1)
    try:
        rep = empirical_max_root(s, a.prime_bound, min(a.order, s.order) if a.series_from else None)
    except ValueError as exc:
        log.error("%s", exc)
        return 1
    _emit([rep.to_dict()], a.emit, out)
    return 0


def cmd_dwork(a, out) -> int:
    params = {"p": a.p}
    for key in DWORK_PARAMS:
        v = getattr(a, "param_" + key)
        if v is not None:
            params[key] = v
    if a.Nvec is not None:
        params["Nvec"] = a.Nvec
    try:
        inst = check_lemma(a.lemma, params)
    except HypothesisError as exc:
        raise UsageError(str(exc)) from None
    except KeyError as exc:
        raise UsageError(f"lemma {a.lemma} needs parameter {exc.args[0]}") from None
    _emit([inst.to_dict()], a.emit, out)
    return 0 if inst.passed else 1


def cmd_dwork_suite(a, out) -> int:
    records, ok = [], True
    for inst in run_suite(a.seed, a.draws, a.lemma or None):
        ok &= inst.passed
        records.append(inst.to_dict())
    _emit(records, a.emit, out, ["lemma_id", "params", "target", "achieved", "expected", "passed"])
    bad = sum(not r["passed"] for r in records)
    log.info("%d instances, %d failed", len(records), bad)
    return 0 if ok else 1


def cmd_scan(a, out) -> int:
    state = None
    if a.resume:
        state = ScanState.from_json(Path(a.resume).read_text())
    if a.workers > 1:
        if state is not None or a.checkpoint:
            raise UsageError("--workers cannot be combined with checkpoints")
        hits = scan_parallel(a.p, a.max, a.shift, a.threshold, a.precision, a.workers)
        final = []
    else:
        final = []
        hits = list(scan(a.p, a.max, a.shift, a.threshold, a.precision,
                         state=state, checkpoint=final))
    if a.checkpoint and final:
        Path(a.checkpoint).write_text(final[0].to_json() + "\n")
    rows = [{"p": str(h.p), "N": str(h.N), "shift": str(h.shift), "valuation": str(h.valuation)}
            for h in hits]
    if a.emit == "json":
        _emit([{"p": str(a.p), "max": str(a.max), "shift": str(a.shift),
                "threshold": str(a.threshold), "hits": rows}], "json", out)
    else:
        _emit(rows, a.emit, out, ["p", "N", "shift", "valuation"])
    return 0


def cmd_wolstenholme(a, out) -> int:
    vals: dict = {}
    found = wolstenholme_scan(a.max, vals)
    floor_ok = all(v >= 2 for v in vals.values())
    if a.emit == "json":
        _emit([{"max": str(a.max), "primes": [str(p) for p in found],
                "scanned": str(len(vals)), "valuation_floor_holds": floor_ok}], "json", out)
    else:
        _emit([{"p": str(p), "valuation": ">=3"} for p in found], a.emit, out, ["p", "valuation"])
    return 0 if floor_ok else 1


def cmd_yukawa(a, out) -> int:
    D = a.order - 1
    try:
        res = instanton_numbers(a.N, D)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except ArithmeticError as exc:
        log.error("%s", exc)
        return 1
    if a.emit == "json":
        _emit([res.to_dict()], "json", out)
    else:
        rows = [{"d": str(d), "k_d": str(k), "n_d": str(n)}
                for d, (k, n) in enumerate(zip(res.k, res.n), start=1)]
        _emit(rows, a.emit, out, ["d", "k_d", "n_d"])
    return 0 if all(res.integral) else 1


def cmd_zudilin_data(a, out) -> int:
    if a.value < 1:
        raise UsageError("N must be positive")
    _emit([zudilin_data(a.value).to_dict()], a.emit, out)
    return 0


# Omega_N and u_N start at N = 2
_SEQUENCE_START = {"Omega": 2, "u": 2}


def _sequence_value(sid: str, n: int):
    if sid == "A056612":
        return gcd_sequence_A056612(n)
    if sid == "Xi":
        return xi(n)
    if sid == "Omega":
        return omega_cap(n)
    if sid == "t":
        return tN_value(n)
    return uN_value(n)


def cmd_sequences(a, out) -> int:
    start = _SEQUENCE_START.get(a.id, 1)
    rows = [{"n": str(n), "value": str(_sequence_value(a.id, n))}
            for n in range(start, start + a.count)]
    if a.emit == "json":
        _emit([{"id": a.id, "start": str(start), "values": [r["value"] for r in rows]}], "json", out)
    else:
        _emit(rows, a.emit, out, ["n", "value"])
    return 0


def cmd_acceptance(a, out) -> int:
    only = [int(x) for x in a.only.split(",")] if a.only else None
    manifest = acceptance_suite(a.profile, a.seed, command=["mirror"] + a.argv,
                                only=only, echo=lambda line: print(line, file=sys.stderr))
    print(f"wall time {manifest.wall_time:.2f}s", file=sys.stderr)
    d = manifest.to_dict(timings=a.timings)
    if a.emit == "json":
        _emit([d], "json", out)
    else:
        _emit(d["results"], a.emit, out, ["criterion", "title", "passed", "detail"])
    return 0 if manifest.passed else 1


# -- parser ----------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    order = _env_int("MIRROR_ORDER", 100)
    seed = _env_int("MIRROR_SEED", 42)
    top = _Parser(prog="mirror", description="Exact mirror maps and their integrality.")
    top.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, emits=("json", "jsonl", "csv"), default="json", **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("--emit", choices=emits, default=default)
        p.set_defaults(func=fn)
        return p

    def map_args(p, need_N=True):
        p.add_argument("--N", type=_vector, required=need_N, help="N or N1,N2,...")
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--L", type=int)
        p.add_argument("--family", choices=FAMILIES, default=PLAIN)
        p.add_argument("--map", choices=("standard", "bold", "tilde"), default="standard")
        p.add_argument("--order", type=int, default=order)

    map_args(add("build", cmd_build, help="build F, G and the map"))

    p = add("certify", cmd_certify, help="check a theorem's root exponent")
    p.add_argument("--theorem", choices=THEOREMS, required=True)
    p.add_argument("--N", type=_vector, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--L", type=int)
    p.add_argument("--order", type=int, default=order)

    p = add("maxroot", cmd_maxroot, help="empirical largest integral root")
    p.add_argument("--series-from", help="JSON series file")
    map_args(p, need_N=False)
    p.add_argument("--prime-bound", type=int, default=13)

    p = add("dwork", cmd_dwork, help="evaluate one congruence instance")
    p.add_argument("--lemma", choices=list(LEMMAS), required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--Nvec", type=_vector)
    for key in DWORK_PARAMS:
        p.add_argument(f"--{key}", dest="param_" + key, type=int)

    p = add("dwork-suite", cmd_dwork_suite, default="jsonl", help="seeded congruence battery")
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--draws", type=int, default=1000)
    p.add_argument("--lemma", action="append", choices=list(LEMMAS))

    p = add("scan", cmd_scan, default="csv", help="harmonic-number valuation scan")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--shift", type=int, choices=(0, 1), default=0)
    p.add_argument("--threshold", type=int, default=1)
    p.add_argument("--precision", type=int, default=8)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--checkpoint", help="write the final scan state here")
    p.add_argument("--resume", help="resume from a checkpoint file")

    p = add("wolstenholme", cmd_wolstenholme, help="primes with v_p(H_{p-1}) >= 3")
    p.add_argument("--max", type=int, default=20000)

    p = add("yukawa", cmd_yukawa, help="Yukawa coupling and instanton numbers")
    p.add_argument("--N", type=_vector, default=(5,))
    p.add_argument("--order", type=int, default=12)

    p = add("zudilin-data", cmd_zudilin_data, help="residues, C_N, alpha and beta for N")
    p.add_argument("value", metavar="N", type=int)

    p = add("sequences", cmd_sequences, help="print A056612, Xi, Omega, t or u")
    p.add_argument("--id", choices=SEQUENCES, required=True)
    p.add_argument("--count", type=int, default=16)

    p = add("acceptance", cmd_acceptance, help="run the acceptance battery")
    p.add_argument("--profile", choices=list(PROFILES), default="quick")
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--timings", action="store_true", help="include wall time in the manifest")
    return top


def run(argv: list | None = None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    try:
        args = _parser().parse_args(argv)
    except UsageError as exc:
        print(f"mirror: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    args.argv = argv
    for name in ("order", "count", "draws", "max"):
        if getattr(args, name, 1) is not None and getattr(args, name, 1) < 1:
            print(f"mirror: error: --{name} must be positive", file=sys.stderr)
            return 2
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"mirror: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
