"""Command line interface: ``shatiyah COMMAND FILE [flags]``.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on input errors.  Output is deterministic; ``--json`` emits the same
records as the text report.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import atiyah as at
from . import lie
from .complex import build, cohomology, default_weight, render_mono
from .definitions import DefinitionError, UnknownName, parse
from .deformations import (GaugeCheckFailed, check_compatible, check_gauge, deformed_atiyah,
                           delta_extraction_check, gauge_transform, verify_gauge_invariance)
from .report import Report, _plain
from .shlie import (adjoint_module, check_jacobi, check_module, check_pair, dual_module, end_module,
                    tensor_module)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
BUILTIN_MODULES = ("B", "B^", "L", "A", "B^xEnd(<module>)")


class Output:
    """Ordered records rendered either as text or as JSON."""

    def __init__(self, command: str, path: str):
        self.command = command
        self.path = path
        self.records: list[dict] = []

    def value(self, name: str, text: str, data=None):
        self.records.append({"type": "value", "name": name, "text": text, "data": _plain(data)})

    def lines(self, name: str, lines: list[str]):
        self.records.append({"type": "lines", "name": name, "lines": list(lines)})

    def check(self, rep: Report, name: str | None = None):
        d = rep.to_dict()
        d["type"] = "check"
        if name:
            d["name"] = name
        self.records.append(d)

    def skip(self, name: str, reason: str):
        self.records.append({"type": "skip", "name": name, "reason": reason})

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.records if r["type"] == "check")

    def render_text(self) -> str:
        out = ["%s %s" % (self.command, self.path)]
        for r in self.records:
            t = r["type"]
            if t == "value":
                out.append("%s: %s" % (r["name"], r["text"]))
            elif t == "lines":
                out.append("%s:" % r["name"])
                out.extend("  " + line for line in r["lines"])
            elif t == "skip":
                out.append("skipped %s: %s" % (r["name"], r["reason"]))
            else:
                out.append("check %s: %s (%d checked)" % (r["name"], "ok" if r["ok"] else "FAILED", r["checked"]))
                for where, val in r["failures"][:10]:
                    out.append("  at %s: %s" % (where, val))
                if r["n_failures"] > 10:
                    out.append("  ... %d more" % (r["n_failures"] - 10))
        out.append("result: %s" % ("PASS" if self.ok else "FAIL"))
        return "\n".join(out) + "\n"

    def render_json(self) -> str:
        doc = {"command": self.command, "file": self.path, "records": self.records,
               "result": "PASS" if self.ok else "FAIL"}
        return json.dumps(doc, indent=2) + "\n"


# --- helpers ---------------------------------------------------------------------------------

def resolve_module(df, name: str | None):
    """User modules first; then ``B``, ``B^``, ``L``, ``A`` and ``B^xEnd(NAME)``."""
    pair = df.pair
    if name is None:
        if len(df.modules) == 1:
            return next(iter(df.modules.values()))
        name = "B"
    if name in df.modules:
        return df.modules[name]
    if name == "B":
        return at.quotient_module(pair)
    if name == "B^":
        return dual_module(at.quotient_module(pair))
    if name == "L":
        return at.restricted_adjoint(pair)
    if name == "A":
        return adjoint_module(pair.A)
    if name.startswith("B^xEnd(") and name.endswith(")"):
        inner = resolve_module(df, name[len("B^xEnd("):-1])
        return tensor_module(dual_module(at.quotient_module(pair)), end_module(inner))
    raise UnknownName("unknown module %r (defined: %s; built in: %s)"
                      % (name, ", ".join(sorted(df.modules)) or "none", ", ".join(BUILTIN_MODULES)))


def _shifted_names(space, shift=-2):
    return tuple("%s[%d]" % (n, shift) for n in space.names())


def render_shifted(terms: dict, module) -> str:
    if not terms:
        return "0"
    names = module.base.space.names()
    en = _shifted_names(module.space)
    parts = []
    for (m, e), c in sorted(terms.items(), key=lambda kv: (len(kv[0][0]), kv[0])):
        coef = "" if c == 1 else "-" if c == -1 else "%s*" % c
        mono = render_mono(m, names)
        parts.append("%s%s" % (coef, en[e]) if not m else "%s%s (x) %s" % (coef, mono, en[e]))
    return " + ".join(parts).replace("+ -", "- ")


def _weight(args, degree):
    return args.max_weight if args.max_weight is not None else default_weight(degree)


# --- commands ---------------------------------------------------------------------------------

def cmd_validate(df, args, out: Output):
    out.check(check_jacobi(df.algebra), "jacobi")
    out.check(check_pair(df.pair), "pair")
    out.check(check_module(at.quotient_module(df.pair)), "module B")
    for name, mod in df.modules.items():
        out.check(check_module(mod), "module %s" % name)
    for name, d in df.deformations.items():
        out.check(check_compatible(df.pair, d), "deformation %s" % name)
    for name, g in df.gauges.items():
        out.check(g.validate(df.pair), "gauge %s" % name)
    if df.pair.A.is_curved:
        out.skip("cohomology", "A is curved")


def cmd_atiyah(df, args, out: Output):
    pair = df.pair
    mod = resolve_module(df, args.module)
    out.value("module", mod.name)
    br = at.atiyah_cocycle(pair, mod)
    op = at.atiyah_operator_oracle(pair, mod)
    cu = at.atiyah_from_curvature(at.trivial_connection(pair, mod))
    out.lines("components", br.render_components() or ["all components vanish"])
    out.value("alpha", br.render(), br.element)
    out.value("alpha in B^ (x) E^ (x) E", br.render_dual_tensor())
    rep = Report("routes agree")
    rep.checked = 2
    if br.element != op.element:
        rep.fail("brackets vs operator", {"brackets": br.element, "operator": op.element})
    if br.element != cu.element:
        rep.fail("brackets vs curvature", {"brackets": br.element, "curvature": cu.element})
    out.check(rep)
    rep = Report("cocycle")
    rep.checked = 1
    res = at.cocycle_residual(br)
    if res:
        rep.fail("d alpha", res)
    out.check(rep)


def cmd_class(df, args, out: Output):
    mod = resolve_module(df, args.module)
    N = _weight(args, 2)
    v = at.class_vanishes(df.pair, mod, N)
    out.value("module", mod.name)
    out.value("alpha", v.alpha.render(), v.alpha.element)
    out.value("max weight", str(N))
    out.value("verdict", v.label)
    if v.primitive is not None:
        out.value("primitive", v.primitive.render(), v.primitive.terms)
    if v.certificate is not None:
        out.value("certificate", "functional vanishing on the image, nonzero on alpha", v.certificate.certificate)


def _cohomology_block(path, module, n, N):
    df = parse(path)
    mod = resolve_module(df, module)
    cx = build(mod, N)
    r = cohomology(cx, n)
    return n, r.dimension, r.exact, r.kernel_dim, r.image_rank, r.cochain_dim, [c.render() for c in r.representatives]


def cmd_cohomology(df, args, out: Output):
    mod = resolve_module(df, args.module)
    out.value("module", mod.name)
    degrees = args.degree or [0, 1, 2]
    jobs = [(args.file, args.module, n, _weight(args, n)) for n in degrees]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_cohomology_block, *zip(*jobs)))
    else:
        results = [_cohomology_block(*j) for j in jobs]
    for (n, dim, exact, kd, ir, cd, reps), (_, _, _, N) in zip(results, jobs):
        tag = "exact" if exact else "up to weight %d" % N
        out.value("H^%d" % n, "dim %d (%s; kernel %d, image %d, cochains %d)" % (dim, tag, kd, ir, cd),
                  {"dimension": dim, "exact": exact, "max_weight": N})
        if reps:
            out.lines("representatives H^%d" % n, reps)


def _table_out(out, table, render_left, render_right, render_target, values):
    n1, n2 = table.degrees
    out.value("weight bound", "%d (%s)" % (table.max_weight, "exact" if table.exact else "truncated"))
    out.lines("left H^%d" % n1, [render_left(x) for x in table.left] or ["none"])
    if table.right is not table.left:
        out.lines("right H^%d" % n2, [render_right(x) for x in table.right] or ["none"])
    lines = []
    for (i, j), coords in sorted(table.entries.items()):
        lines.append("[x%d, y%d] = %s   class %s" % (i, j, render_target(values[(i, j)]),
                                                       {k: str(c) for k, c in sorted(coords.items())}))
    out.lines("table", lines or ["empty"])
    out.check(table.report, "table")


def _generator_lines(op, left, right, n1, n2, render_right, render_value):
    """``op(1 (x) u, 1 (x) v)`` for basis vectors of shifted degrees ``n1`` and ``n2``."""
    lines = []
    ln = _shifted_names(left.space)
    for i in range(left.space.dim):
        if left.space.degree(i) + 2 != n1:
            continue
        for j in range(right.space.dim):
            if right.space.degree(j) + 2 != n2:
                continue
            v = op({((), i): 1}, {((), j): 1})
            lines.append("[%s, %s] = %s" % (ln[i], render_right({((), j): 1}), render_value(v)))
    return lines


def _degrees(args):
    ds = args.degree or [1]
    if len(ds) > 2:
        raise DefinitionError("--degree may be given at most twice for this command")
    return ds[0], ds[-1]


def cmd_bracket(df, args, out: Output):
    pair = df.pair
    n1, n2 = _degrees(args)
    ops = lie.AtiyahOperators(pair)
    t = lie.bracket_table(pair, n1, n2, args.max_weight, ops)
    values = {(i, j): ops.bracket(x, y) for (i, j) in t.entries
              for x, y in [(t.left[i], t.right[j])]}
    B = ops.B
    r = lambda z: render_shifted(z, B)
    out.lines("generators (cochain level)", _generator_lines(ops.bracket, B, B, n1, n2, r, r) or ["none"])
    _table_out(out, t, r, r, r, {k: lie._truncated(v, t.max_weight) for k, v in values.items()})
    out.check(lie.skew_witness(pair).report, "skew witness")


def cmd_action(df, args, out: Output):
    pair = df.pair
    mod = resolve_module(df, args.module)
    n1, n2 = _degrees(args)
    ops = lie.AtiyahOperators(pair, mod)
    t = lie.action_table(pair, mod, n1, n2, args.max_weight, ops)
    values = {(i, j): lie._truncated(ops.act(t.left[i], t.right[j]), t.max_weight) for (i, j) in t.entries}
    out.value("module", mod.name)
    out.lines("generators (cochain level)",
              _generator_lines(ops.act, ops.B, mod, n1, n2, lambda z: render_shifted(z, mod),
                               lambda z: render_shifted(z, mod)) or ["none"])
    _table_out(out, t, lambda z: render_shifted(z, ops.B), lambda z: render_shifted(z, mod),
               lambda z: render_shifted(z, mod), values)
    out.check(lie.jacobi_witness(pair, mod).report, "jacobi witness")


def cmd_deform(df, args, out: Output):
    pair = df.pair
    mod = resolve_module(df, args.module)
    names = args.deformation or sorted(df.deformations)[:1]
    if not names:
        raise DefinitionError("no deformation given and none defined in the file")
    defs = []
    for n in names:
        if n not in df.deformations:
            raise UnknownName("unknown deformation %r" % n)
        defs.append(df.deformations[n])
    if len(defs) > 2:
        raise DefinitionError("--deformation may be given at most twice")
    g = None
    if args.gauge is not None:
        if args.gauge not in df.gauges:
            raise UnknownName("unknown gauge %r" % args.gauge)
        g = df.gauges[args.gauge]
        if len(defs) == 1:
            defs.append(gauge_transform(pair, defs[0], g))
            names = names + [names[0] + " - [Q_L, %s]" % args.gauge]
    out.value("module", mod.name)
    for n, d in zip(names, defs):
        out.check(check_compatible(pair, d), "compatible %s" % n)
        out.check(delta_extraction_check(pair, d), "delta+ %s" % n)
        a = deformed_atiyah(pair, mod, d)
        b = deformed_atiyah(pair, mod, d, "brackets")
        out.value("alpha[h] %s" % n, a.render())
        rep = Report("routes agree %s" % n)
        rep.checked = 2
        if a.element != b.element:
            rep.fail("operator vs brackets", {"operator": a.element, "brackets": b.element})
        if not a.is_cocycle():
            rep.fail("not a cocycle", None)
        out.check(rep)
    if g is None:
        if len(defs) == 2:
            out.skip("gauge", "no --gauge given")
        return
    out.check(check_gauge(pair, defs[0], defs[1], g), "gauge")
    try:
        w = verify_gauge_invariance(pair, mod, defs[0], defs[1], g)
    except GaugeCheckFailed as exc:
        rep = exc.report or Report("gauge invariance")
        if rep.ok:
            rep.fail(str(exc))
        out.check(rep, "gauge invariance")
        return
    out.value("W = [Psi_1, D^E]", at.render_alpha(pair, mod, w.W), w.W)
    out.value("alpha - alphabar", "h*(%s)" % at.render_alpha(pair, mod, w.difference))
    out.check(w.report, "gauge invariance")


def cmd_oracle(df, args, out: Output):
    pair = df.pair
    mod = resolve_module(df, args.module)
    routes = {
        "brackets": at.atiyah_cocycle(pair, mod).element,
        "operator": at.atiyah_operator_oracle(pair, mod).element,
        "curvature": at.atiyah_from_curvature(at.trivial_connection(pair, mod)).element,
    }
    An = pair.A_space.names()
    Bn = pair.B_space.names()
    En = mod.space.names()
    keys = sorted(set().union(*routes.values()), key=lambda k: (len(k[0]), k))
    rep = Report("dual oracle")
    lines = []
    for k in keys:
        vals = [routes[r].get(k, 0) for r in routes]
        m, (j, eo, ei) = k
        label = "%s (x) %s^ (x) [%s -> %s]" % (render_mono(m, An), Bn[j], En[ei], En[eo])
        same = len(set(vals)) == 1
        rep.checked += 1
        if not same:
            rep.fail(label, dict(zip(routes, vals)))
        lines.append("%s  %s  %s" % ("=" if same else "!", label, " ".join(str(v) for v in vals)))
    out.value("module", mod.name)
    out.lines("coefficients (brackets operator curvature)", lines or ["all routes give 0"])
    out.check(rep)


COMMANDS = {
    "validate": cmd_validate, "atiyah": cmd_atiyah, "class": cmd_class, "cohomology": cmd_cohomology,
    "bracket": cmd_bracket, "action": cmd_action, "deform": cmd_deform, "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shatiyah", description="Atiyah classes of SH Lie pairs over Q.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file")
    p.add_argument("--module", help="module name; built in: " + ", ".join(BUILTIN_MODULES))
    p.add_argument("--degree", type=int, action="append", help="cohomology degree (repeatable)")
    p.add_argument("--max-weight", type=int, help="weight bound N (default: degree + 2)")
    p.add_argument("--deformation", action="append", help="deformation name (repeatable)")
    p.add_argument("--gauge", help="gauge map name")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent degree blocks")
    p.add_argument("--timing", action="store_true", help="append wall time (breaks byte-stable output)")
    p.add_argument("-v", "--verbose", action="store_true", help="echo input normalizations")
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    if args.max_weight is not None and args.max_weight < 0:
        print("error: --max-weight must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_INPUT
    out = Output(args.command, args.file)
    t0 = time.perf_counter()
    try:
        df = parse(args.file)
        if args.verbose:
            out.lines("normalized inputs", ["%s: (%s) -> (%s), sign %+d" % (n.where, ", ".join(n.given),
                                                                          ", ".join(n.canonical), n.sign)
                                            for n in df.normalizations] or ["none"])
        COMMANDS[args.command](df, args, out)
    except DefinitionError as exc:
        print("error: %s: %s" % (args.file, exc), file=sys.stderr)
        return EXIT_INPUT
    except at.ExtensionMismatch as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    if args.timing:
        out.value("time", "%.3fs" % (time.perf_counter() - t0))
    stdout.write(out.render_json() if args.json else out.render_text())
    return EXIT_OK if out.ok else EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
