"""Command line driver: ``qvertex verify | corr | dump``.

Exit codes: 0 everything passed, 1 a verification failed, 2 usage error,
3 validation or internal error.
"""

import argparse
import json
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import intertwiners as vo_mod
from . import uq_algebra
from .mutation import mutate
from .report import Check, Report
from .scalar_ring import Series
from .vertex_engine import ValidationError, fj_current

SUITES = ("def21", "hopf", "rmatrix", "normalization", "ope", "thm35", "correlators")
OPE_SUITES = ("typeI", "typeII", "dualI", "dualII", "locality")
HOPF_PARTS = ("relations", "counit", "antipode", "coassociativity")

FAMILY_NAMES = {
    "PhiI": "I", "PhiII": "II", "PsiII": "II", "PhiI*": "I*", "PhiStarI": "I*",
    "PhiII*": "II*", "PsiII*": "II*", "PsiStarII": "II*", "PhiStarII": "II*",
}
CURRENTS = ("x+", "x-", "phi", "psi")


class UsageError(Exception):
    pass


# operator designators --------------------------------------------------------

_DESIG = re.compile(r"^(?P<fam>[^:@]+)(?P<rest>(?::[^:@]+)*)(?:@(?P<var>[A-Za-z_][A-Za-z0-9_]*))?$")


def parse_designator(text, n):
    """``family:i[:j][:j=c][@var]`` -> (kind, payload, var).

    Currents: ``x+:1`` gives ("current", (kind, i)).  Vertex operators:
    ``PhiI:0:1:j=1`` has sector indices (target, source) and component j
    (default 0), and gives ("vo", VOComponent).
    """
    m = _DESIG.match(text.strip())
    if not m:
        raise UsageError(f"cannot parse operator designator {text!r}")
    fam = m.group("fam")
    fields = [f for f in m.group("rest").split(":") if f]
    var = m.group("var")
    comp = None
    idx = []
    for f in fields:
        if f.startswith("j="):
            comp = f[2:]
        else:
            idx.append(f)
    try:
        idx = [int(x) for x in idx]
        comp = None if comp is None else int(comp)
    except ValueError:
        raise UsageError(f"non-integer index in {text!r}") from None
    if fam in CURRENTS:
        if len(idx) != 1 or comp is not None or not 1 <= idx[0] < n:
            raise UsageError(f"current designator {text!r} needs one index in 1..{n - 1}")
        return "current", (fam, idx[0]), var
    if fam not in FAMILY_NAMES:
        raise UsageError(f"unknown operator family {fam!r}")
    family = FAMILY_NAMES[fam]
    if len(idx) == 3 and comp is None:
        comp = idx.pop()
    if len(idx) not in (1, 2):
        raise UsageError(f"vertex operator designator {text!r} needs sector indices")
    if len(idx) == 1:
        i = idx[0] % n
    else:
        tgt, src = idx[0] % n, idx[1] % n
        i = tgt if family in ("I", "II") else src
        if (vo_mod.target_sector(family, i, n), vo_mod.source_sector(family, i, n)) != (tgt, src):
            raise UsageError(f"sectors {idx[0]}, {idx[1]} are not (target, source) of a {fam} operator")
    j = 0 if comp is None else comp
    if not 0 <= j < n:
        raise UsageError(f"component j={j} out of range for n={n}")
    return "vo", vo_mod.vo(family, i, j, n), var


# verify ----------------------------------------------------------------------


def _tasks(suite, args):
    n = args.n
    if suite == "def21":
        return [("def21", f"sector {args.sector}", {"n": n, "sector": args.sector,
                                                    "D": args.degree, "M": args.window})]
    if suite == "hopf":
        return [("hopf", p, {"n": n, "D": args.degree, "M": args.window, "part": p}) for p in HOPF_PARTS]
    if suite == "rmatrix":
        return [("rmatrix", "rmatrix", {"N": args.order or 10})]
    if suite == "normalization":
        return [("normalization", "normalization", {"n": n})]
    if suite == "thm35":
        return [("thm35", "thm35", {"n": n, "K": args.modes})]
    if suite == "correlators":
        return [("correlators", "correlators", {"N": args.order or 8})]
    subs = OPE_SUITES
    if suite.startswith("ope:"):
        subs = (suite[4:],)
    return [("ope", f"{sub} s={s}", {"n": n, "suite": sub, "s": s, "D": args.degree, "M": args.window})
            for sub in subs for s in range(n)]


def run_task(task, mutation=None):
    """Run one unit of work; returns the report as a dict (picklable)."""
    kind, label, p = task
    if mutation is not None:
        with mutate(*mutation):
            return run_task(task)
    if kind == "def21":
        r = uq_algebra.verify_def21(p["n"], p["sector"], p["D"], p["M"])
    elif kind == "hopf":
        r = uq_algebra.verify_hopf(p["n"], p["D"], p["M"], parts=(p["part"],))
    elif kind == "rmatrix":
        r = uq_algebra.verify_rmatrix(p["N"])
    elif kind == "normalization":
        r = vo_mod.verify_normalization(p["n"])
    elif kind == "thm35":
        r = vo_mod.thm35_report(p["n"], p["K"])
    elif kind == "correlators":
        r = vo_mod.correlator_report(p["N"])
    else:
        r = vo_mod.verify_ope(p["n"], p["suite"], p["D"], p["M"], sectors=[p["s"]])
    return r.as_dict()


def _thread_count(args):
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("QVERTEX_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"QVERTEX_THREADS={env!r} is not an integer") from None
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def _parse_mutation(text):
    if text is None:
        return None
    name, _, d = text.partition("=")
    try:
        return name, Fraction(d or 1)
    except ValueError:
        raise UsageError(f"bad mutation {text!r}") from None


def run_verify(suites, args, threads=1, mutation=None):
    """Run suites and merge into one Report; order is fixed by the task list."""
    tasks = [t for s in suites for t in _tasks(s, args)]
    t0 = time.perf_counter()
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(tasks))) as ex:
            results = list(ex.map(run_task, tasks, [mutation] * len(tasks)))
    else:
        results = [run_task(t, mutation) for t in tasks]
    labels = [f"{kind}/{label}" if len(suites) > 1 else label for kind, label, _ in tasks]
    prefix = len(tasks) > 1
    checks, params = [], {}
    for label, res in zip(labels, results):
        for c in res["checks"]:
            name = f"{label}: {c['name']}" if prefix else c["name"]
            checks.append(Check(name, c["status"], c.get("witness")))
        params.update(res["parameters"])
    params = {k: params[k] for k in sorted(params)}
    if mutation is not None:
        params["mutation"] = f"{mutation[0]}={mutation[1]}"
    n = args.n if any(s not in ("rmatrix", "correlators") for s in suites) else 2
    return Report(",".join(suites), n, params, checks, time.perf_counter() - t0)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _report_text(r):
    lines = [f"suite {r.suite}  n={r.n}  {json.dumps(r.parameters)}"]
    for c in r.checks:
        lines.append(f"  [{c.status}] {c.name}")
    lines.append(r.summary())
    return "\n".join(lines)


def cmd_verify(args):
    suites = []
    for s in args.suite:
        for part in s.split(","):
            if part not in SUITES and not (part.startswith("ope:") and part[4:] in OPE_SUITES):
                raise UsageError(f"unknown suite {part!r}")
            suites.append(part)
    if not suites:
        raise UsageError("no suite selected")
    if args.n > 6:
        print(f"warning: n={args.n} is large; relation suites grow quickly with n", file=sys.stderr)
    mutation = _parse_mutation(args.mutate)
    r = run_verify(suites, args, _thread_count(args), mutation)
    if args.format == "json":
        _emit(r.to_json(elapsed=not args.no_elapsed), args.out)
    else:
        _emit(_report_text(r), args.out)
    if args.out:
        print(r.summary())
    return 0 if r.passed else 1


# corr ------------------------------------------------------------------------


def _registered_formula(ops, n, N):
    """(name, formula Series in right/left, z-powers, strict) for a known sl_2 case."""
    if n != 2 or len(ops) != 2:
        return None
    key = tuple((o.family, o.sector, o.j) for o, _ in ops)
    left, right = ops[0][1], ops[1][1]
    var = f"{right}/{left}"
    if key == (("I", 0, 1), ("I", 1, 0)):
        f = vo_mod.formula_sl2_second(N)
        return ("-q^-1 x^(1/2) (q x; q^4)/(q^3 x; q^4)", Series(f.terms, f.order, var), None, True)
    if key == (("I", 0, 0), ("I", 1, 1)):
        f = vo_mod.formula_sl2_third(N)
        zp = {right: Fraction(1, 2), left: Fraction(3, 2)}
        return ("z_right^(1/2) z_left^(3/2) (q^4 x; q^4)/(q^6 x; q^4)",
                Series(f.terms, f.order, var), zp, False)
    return None


def cmd_corr(args):
    if args.order is None:
        args.order = 8
    if args.order < 1:
        raise UsageError("--order must be positive")
    if not args.ops:
        raise UsageError("--ops is required")
    ops = []
    for k, text in enumerate(args.ops.split(",")):
        kind, op, var = parse_designator(text, args.n)
        if kind != "vo":
            raise UsageError("correlators take vertex operators only")
        ops.append((op, var or f"z{len(args.ops.split(',')) - k}"))
    if len({v for _, v in ops}) != len(ops):
        raise UsageError("operator variables must be distinct")
    N = args.order
    corr = vo_mod.correlator(ops, N)
    out = {"ops": args.ops, "n": args.n, "order": N, "zero": corr.zero}
    lines = [f"correlator <{args.ops}>  n={args.n}  order={N}"]
    ok = True
    if corr.zero:
        lines.append("value: 0 (lattice weights do not match the highest weight)")
    else:
        out["coefficient"] = repr(corr.coefficient)
        out["zpowers"] = {v: str(e) for v, e in sorted(corr.zpowers.items())}
        lines.append(f"coefficient: {corr.coefficient!r}")
        lines.append("z-powers: " + " ".join(f"{v}^{e}" for v, e in sorted(corr.zpowers.items())))
        out["series"] = {}
        for (a, b), s in corr.series.items():
            lines.append(f"pair ({a}, {b}):")
            lines.append(s.dump())
            out["series"][f"{a},{b}"] = s.dump()
    reg = _registered_formula(ops, args.n, N) if args.n == 2 and len(ops) == 2 else None
    if reg is not None:
        name, want, zp, strict = reg
        left, right = ops[0][1], ops[1][1]
        if corr.zero:
            got, match = Series({}, N, want.var), False
        elif zp is None:
            got = vo_mod.two_point_series(corr, left, right, N)
            match = got is not None and got.agrees(want, N)
        else:
            got = corr.series[(left, right)] * corr.coefficient
            match = ({v: corr.zpowers.get(v, 0) for v in zp} == zp) and got.agrees(want, N)
        verdict = "match" if match else ("mismatch" if strict else "discrepancy")
        lines.append(f"formula: {name}")
        lines.append(want.dump())
        if got is None:
            lines.append("computed value is not a function of the ratio alone")
        lines.append(f"verdict: {verdict}")
        out["formula"] = {"name": name, "series": want.dump(), "verdict": verdict}
        ok = match or not strict
    if args.format == "json":
        _emit(json.dumps(out, indent=2), args.out)
    else:
        _emit("\n".join(lines), args.out)
    return 0 if ok else 1


# dump ------------------------------------------------------------------------


def cmd_dump(args):
    if not args.op:
        raise UsageError("--op is required")
    kind, payload, _ = parse_designator(args.op, args.n)
    K = args.order or 4
    if kind == "current":
        text = fj_current(payload[0], payload[1], args.n).dump(K)
    else:
        c, e = vo_mod.constant(payload.family, payload.sector, payload.j, args.n)
        text = (f"vertex operator {payload.family} i={payload.sector} j={payload.j} n={args.n}\n"
                f"constant: {c.dump()} * z^{e}\n" + payload.template.dump(K))
    _emit(text, args.out)
    return 0


# entry point -----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(name):
    def conv(s):
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return v
    return conv


def build_parser():
    p = _Parser(prog="qvertex", description="Exact checks for level one vertex operators of U_q(sl_n^)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--n", type=int, default=2)
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("json", "text"), default="json" if sp.prog.endswith("verify") else "text")
        sp.add_argument("--threads", type=int)

    v = sub.add_parser("verify", help="run verification suites")
    common(v)
    v.add_argument("--suite", action="append", required=True,
                   help=f"one of {', '.join(SUITES)} or ope:<{'|'.join(OPE_SUITES)}>; repeatable")
    v.add_argument("--degree", type=_positive("--degree"), default=2)
    v.add_argument("--window", type=_positive("--window"), default=2)
    v.add_argument("--order", type=_positive("--order"))
    v.add_argument("--modes", type=_positive("--modes"), default=20)
    v.add_argument("--sector", type=int, default=0)
    v.add_argument("--mutate", help="negative control: perturb a named exponent, NAME[=DELTA]")
    v.add_argument("--no-elapsed", action="store_true", help="omit timing for byte-identical reports")

    c = sub.add_parser("corr", help="compute a correlation function")
    common(c)
    c.add_argument("--ops")
    c.add_argument("--order", type=int)

    d = sub.add_parser("dump", help="print a template")
    common(d)
    d.add_argument("--op")
    d.add_argument("--order", type=_positive("--order"))
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: verify, corr or dump")
        if args.n < 2:
            raise UsageError("--n must be at least 2")
        if args.command == "verify":
            if not 0 <= args.sector < args.n:
                raise UsageError("--sector out of range")
            return cmd_verify(args)
        if args.command == "corr":
            return cmd_corr(args)
        return cmd_dump(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (ValidationError, ValueError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
