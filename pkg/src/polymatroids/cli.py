"""Command-line entry point: ``polymatroids <subcommand> ...``.

Exit status: 0 on success, 1 when the input is mathematically rejected
(not a polymatroid, degenerate reduction target, ...), 2 on usage errors
(bad flags, malformed files, cap violations).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import construct, cone, fileio, polytope, reduce as reduce_mod, setfn

SCHEMA = "polymatroids.cli/1"
GLOBAL_DEFAULTS = {"format": "text", "threads": 1, "seed": 0}


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


class Output:
    def __init__(self, fmt: str, command: str, stream):
        self.fmt = fmt
        self.command = command
        self.stream = stream
        self.result: dict = {}
        self.lines: list[str] = []

    def put(self, key, value, text: str | None = None):
        self.result[key] = value
        if text is not None:
            self.lines.append(text)

    def note(self, text: str):
        self.result.setdefault("notices", []).append(text)
        self.lines.append(f"note: {text}")

    def flush(self):
        if self.fmt == "structured":
            doc = {"schema": SCHEMA, "command": self.command, "result": _jsonable(self.result)}
            self.stream.write(json.dumps(doc, sort_keys=True) + "\n")
        else:
            for ln in self.lines:
                self.stream.write(ln + "\n")


def _load_fn(path) -> setfn.SetFunction:
    try:
        return fileio.read_setfn(path)
    except OSError as exc:
        raise UsageError(f"cannot read set-function file {path}: {exc.strerror}") from None


def _element(f: setfn.SetFunction, name: str) -> int:
    try:
        return f.ground.labels.index(name)
    except ValueError:
        raise UsageError(f"unknown element {name!r}; elements are {list(f.ground.labels)}") from None


def _fmt_point(p) -> str:
    return "(" + ", ".join(str(v) for v in p) + ")"


# -- subcommands -----------------------------------------------------------------


def cmd_check(args, out: Output) -> int:
    f = _load_fn(args.fn)
    report = setfn.check_axioms(f, samples=args.samples, seed=args.seed)
    out.put("polymatroid", report.ok, f"polymatroid: {'yes' if report.ok else 'no'}")
    out.put("pointed", report.pointed)
    out.put("b1_ok", report.b1_ok)
    out.put("b2_ok", report.b2_ok)
    out.put("sampled", report.sampled)
    out.put("b2_rows_checked", report.b2_rows_checked)
    viol = [{"kind": v.kind, "data": list(v.data), "value": v.value} for v in report.violations]
    out.put("violations", viol)
    for v in report.violations[:20]:
        out.lines.append(f"  violated {v.kind}{v.data}: {v.value}")
    if report.sampled:
        out.lines.append(f"  (B2 sampled: {report.b2_rows_checked} random rows)")
    return 0 if report.ok else 1


def _conditions_dict(rep: construct.ConditionReport) -> dict:
    return {
        "k": rep.k,
        "n": rep.n,
        "cond_i": rep.cond_i,
        "cond_ii": rep.cond_ii,
        "fX": rep.fX,
        "c_ratio": rep.c_ratio,
        "lower_bound": rep.lower_bound,
        "threshold_upper": rep.threshold_upper,
        "exceeds_threshold": rep.exceeds_threshold,
        "y_gains": rep.y_gains,
        "chain_rule": rep.chain_rule,
        "tight_chain": rep.tight_chain,
    }


def _print_conditions(rep, out: Output):
    out.lines += [
        f"k={rep.k} n={rep.n}",
        f"condition (i): {rep.cond_i}",
        f"condition (ii): {rep.cond_ii}",
        f"f(X) = {rep.fX}",
        f"C_f,a = {rep.c_ratio}",
        f"(2^k-1)/k = {rep.lower_bound}",
        f"n/(2 log2 n) <= {rep.threshold_upper} (~{float(rep.threshold_upper):.4f})",
        f"C_f,a >= (2^k-1)/k > n/(2 log2 n): {rep.exceeds_threshold}",
    ]


def _params(k: int) -> construct.ConstructionParams:
    try:
        return construct.ConstructionParams(k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_construct(args, out: Output) -> int:
    params = _params(args.k)
    if args.emit == "table":
        f = construct.build_polymatroid(params)
        out.stream.write(fileio.dumps_setfn(f))
        out.fmt = "none"
        return 0
    rep = construct.verify_conditions(params)
    out.put("conditions", _conditions_dict(rep))
    _print_conditions(rep, out)
    return 0


def cmd_verify(args, out: Output) -> int:
    params = _params(args.k)
    if params.k > 4:
        raise setfn.CapError(f"verify supports k <= 4, got k={params.k}")
    src = construct.build_source(params)
    if params.n <= setfn.FULL_B2_SCAN_MAX_N:
        f = construct.rank_function(src)
        report = setfn.check_axioms(f)
    else:
        f = construct.RankOracle(src)
        report = setfn.check_axioms(f, samples=args.samples, seed=args.seed)
        out.note(f"n={params.n}: full table skipped; conditions use the lazy rank oracle")
    out.put(
        "axioms",
        {"ok": report.ok, "sampled": report.sampled, "b2_rows_checked": report.b2_rows_checked},
        f"axioms: {'pass' if report.ok else 'FAIL'}"
        + (f" (B2 sampled, {report.b2_rows_checked} rows)" if report.sampled else " (full scan)"),
    )
    rep = construct.verify_conditions(params, f)
    out.put("conditions", _conditions_dict(rep))
    _print_conditions(rep, out)
    if params.n <= reduce_mod.MAX_REDUCE_N:
        dec = reduce_mod.reduce(f, params.a)
        verdict = dec.optimum == 0
        out.put("a_reduced", verdict, f"a-reduced: {'yes' if verdict else 'no'}")
        out.put("reduce_optimum", dec.optimum)
    else:
        out.note(f"reduce skipped: n={params.n} exceeds LP cap {reduce_mod.MAX_REDUCE_N}")
    ok = report.ok and rep.cond_i and rep.cond_ii and rep.exceeds_threshold
    return 0 if ok else 1


def cmd_reduce(args, out: Output) -> int:
    f = _load_fn(args.fn)
    a = _element(f, args.element)
    dec = reduce_mod.reduce(f, a)
    if args.emit in ("g", "both"):
        out.put("g", [str(v) for v in dec.g.values])
    if args.emit in ("h", "both"):
        out.put("h", [str(v) for v in dec.h.values])
    out.put("optimum", dec.optimum)
    out.put("a_reduced", dec.optimum == 0)
    if args.emit in ("g", "both"):
        out.lines.append("# g")
        out.lines.append(fileio.dumps_setfn(dec.g).rstrip())
    if args.emit in ("h", "both"):
        out.lines.append("# h")
        out.lines.append(fileio.dumps_setfn(dec.h).rstrip())
    out.lines.append(f"h(N) = {dec.optimum}")
    out.lines.append(f"a-reduced: {'yes' if dec.optimum == 0 else 'no'}")
    return 0


def _rays(n: int, threads: int):
    try:
        return cone.enumerate_rays(n, threads=threads)
    except setfn.CapError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_rays(args, out: Output) -> int:
    rays = _rays(args.n, args.threads)
    text = fileio.dumps_rays(args.n, rays)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        out.put("n", args.n)
        out.put("count", len(rays), f"wrote {len(rays)} rays to {args.out}")
    else:
        out.stream.write(text)
        out.fmt = "none"
    return 0


def cmd_lambda(args, out: Output) -> int:
    if args.rays:
        n, rays = fileio.read_rays(args.rays)
        if n != args.n:
            raise UsageError(f"ray file is for n={n}, requested n={args.n}")
    else:
        rays = _rays(args.n, args.threads)
    value = cone.lambda_n(args.n, rays, all_elements=args.all_elements)
    out.put("n", args.n)
    out.put("lambda", value, str(value))
    out.put("rays", len(rays))
    return 0


def cmd_bound(args, out: Output) -> int:
    if args.n < 2:
        raise UsageError("bound needs n >= 2")
    b = cone.hadamard_bound(args.n)
    out.put("proved", b["proved"], f"proved={b['proved']}")
    out.put("tightened", b["tightened"], f"tightened={b['tightened']} ({b['tightened_provenance']})")
    out.put("tightened_provenance", b["tightened_provenance"])
    return 0


def cmd_decompose(args, out: Output) -> int:
    f = _load_fn(args.fn)
    n, rays = fileio.read_rays(args.rays)
    if n != f.n:
        raise UsageError(f"ray file is for n={n}, function has n={f.n}")
    comb = cone.conic_decompose(f, rays)
    out.put("terms", [{"ray": i, "coefficient": mu, "values": list(rays[i])} for i, mu in comb.terms])
    for i, mu in comb.terms:
        out.lines.append(f"{mu} * ray[{i}] = {' '.join(map(str, rays[i]))}")
    return 0


def cmd_vertex(args, out: Output) -> int:
    f = _load_fn(args.fn)
    perm = [_element(f, name.strip()) for name in args.perm.split(",")]
    try:
        x = polytope.greedy_vertex(f, perm)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.put("vertex", list(x), _fmt_point(x))
    return 0


def cmd_box(args, out: Output) -> int:
    f = _load_fn(args.fn)
    box = polytope.bounding_box(f)
    out.put("box", {lab: [lo, hi] for lab, (lo, hi) in zip(f.ground.labels, box)})
    for lab, (lo, hi) in zip(f.ground.labels, box):
        out.lines.append(f"{lab}: [{lo}, {hi}]")
    return 0


def cmd_elongation(args, out: Output) -> int:
    f = _load_fn(args.fn)
    a = _element(f, args.element)
    value = polytope.elongation(f, a)
    out.put("elongation", value, str(value))
    return 0


COMMANDS = {
    "check": cmd_check,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "reduce": cmd_reduce,
    "rays": cmd_rays,
    "lambda": cmd_lambda,
    "bound": cmd_bound,
    "decompose": cmd_decompose,
    "vertex": cmd_vertex,
    "box": cmd_box,
    "elongation": cmd_elongation,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "structured"], default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    # set_defaults would write into the actions shared with every subparser,
    # letting a subparser default clobber a flag given before the subcommand
    p = argparse.ArgumentParser(prog="polymatroids", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    c = add("check", "check the Shannon axioms (B1)/(B2)")
    c.add_argument("--fn", required=True)
    c.add_argument("--samples", type=int, default=None, help="sample this many B2 rows instead of a full scan")

    c = add("construct", "the GF(2) linear-source construction")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--emit", choices=["table", "report"], default="report")

    c = add("verify", "construct, check, verify conditions and (k=2) reduce")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--samples", type=int, default=setfn.DEFAULT_B2_SAMPLES)

    c = add("reduce", "optimal a-reduction f = g + h")
    c.add_argument("--fn", required=True)
    c.add_argument("--element", required=True)
    c.add_argument("--emit", choices=["g", "h", "both"], default="both")

    c = add("rays", "enumerate extreme rays of the polymatroid cone")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--out")

    c = add("lambda", "compute lambda_n from the extreme rays")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--rays", help="use a previously written ray file")
    c.add_argument("--all-elements", action="store_true", help="check every anchor element agrees")

    c = add("bound", "Hadamard upper bound on lambda_n")
    c.add_argument("--n", type=int, required=True)

    c = add("decompose", "write a polymatroid as a conic combination of rays")
    c.add_argument("--fn", required=True)
    c.add_argument("--rays", required=True)

    c = add("vertex", "greedy vertex of the base polytope")
    c.add_argument("--fn", required=True)
    c.add_argument("--perm", required=True, help="comma-separated element names")

    c = add("box", "bounding box of the base polytope")
    c.add_argument("--fn", required=True)

    c = add("elongation", "box-edge ratio anchored at an element")
    c.add_argument("--fn", required=True)
    c.add_argument("--element", required=True)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    if args.threads < 1:
        stderr.write("error: --threads must be at least 1\n")
        return 2
    out = Output(args.format, args.command, stdout)
    try:
        status = COMMANDS[args.command](args, out)
    except (UsageError, fileio.FormatError, setfn.CapError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except (setfn.PolymatroidError, KeyError, IndexError) as exc:
        msg = exc.args[0] if exc.args else exc
        stderr.write(f"error: {msg}\n")
        return 1
    if out.fmt != "none":
        out.flush()
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
