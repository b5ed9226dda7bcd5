"""Session files and the ``dk`` command line.

A session file is a list of ``;``-terminated statements with ``//`` comments::

    ring R = 0,(x,y,z,u,v),ds;          // or: ring R = (x1,x2,x3), weights(3,2,3);
    matrix M[2][4] = x,y,z,u,y,z,u,v;
    ideal I = minor(M,2);
    t1 I;
    versal I 4;

Ideal items are polynomials, names of earlier ideals, ``minor(M,k)`` or
``intersect(I,J)``. Curves are lists of branches in the variable ``s``:
``curve C = (s2,s3);``.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from .curveinv import (
    BranchParam,
    NumericalSemigroup,
    curve_invariants,
    deligne_bounds,
    lines_smoothability,
    lines_table,
    semigroup_invariants,
)
from .flatcheck import Unfolding, is_flat
from .invariants_icis import milnor_hypersurface, milnor_icis, mu_tau_report
from .poly_core import INFINITE, LocalRing, PolySyntaxError, parse_poly
from .stdbasis import Ideal, ideal_intersect, minors, std, vdim
from .syzmod import ModuleMatrix, syz_ideal
from .tspaces import is_rigid, t1, t1_grading, t1_hypersurface, t2, weight_split
from .versal import DEFAULT_MAX_ORDER, versal

EXIT_OK, EXIT_COMPUTE, EXIT_SYNTAX = 0, 1, 2

IDEAL_COMMANDS = {"t1", "t2", "rigid", "grading", "milnor", "tjurina", "mutau", "std", "vdim", "syz"}


class SessionSyntaxError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.message, self.line, self.column = message, line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass
class Command:
    name: str
    args: list
    line: int
    column: int

    def text(self):
        return " ".join([self.name] + [str(a) for a in self.args])


@dataclass
class SessionFile:
    ring_name: str = None
    ring: LocalRing = None
    objects: dict = field(default_factory=dict)    # name -> Ideal | ModuleMatrix | BranchParam
    order: list = field(default_factory=list)      # declaration order of names
    commands: list = field(default_factory=list)

    def to_text(self):
        """Canonical text; parsing it again gives an equal session."""
        r = self.ring
        out = [f"ring {self.ring_name} = ({','.join(r.vars)})"
               + ("" if all(w == 1 for w in r.weights) else f", weights({','.join(map(str, r.weights))})") + ";"]
        for name in self.order:
            obj = self.objects[name]
            if isinstance(obj, Ideal):
                out.append(f"ideal {name} = {', '.join(str(g) for g in obj.gens) or '0'};")
            elif isinstance(obj, ModuleMatrix):
                entries = [str(obj.entry(i, j)) for i in range(obj.rows) for j in range(obj.cols)]
                out.append(f"matrix {name}[{obj.rows}][{obj.cols}] = {','.join(entries)};")
            else:
                out.append(f"curve {name} = {', '.join(_branch_text(b) for b in obj.branches)};")
        out += [c.text() + ";" for c in self.commands]
        return "\n".join(out) + "\n"


def _branch_text(branch):
    s_ring = LocalRing(("s",))
    return "(" + ",".join(str(s_ring.poly("0") + _series_poly(x, s_ring)) for x in branch) + ")"


def _series_poly(x, ring):
    from .poly_core import Poly
    return Poly(ring, {(k,): c for k, c in x.items()})


# ------------------------------------------------------------------ parsing


def _strip_comments(text):
    return re.sub(r"//[^\n]*", lambda m: " " * len(m.group()), text)


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _split_top(s, sep, base):
    """Split s at top-level separators; yields (piece, absolute offset)."""
    depth, start = 0, 0
    for i, ch in enumerate(s):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            yield s[start:i], base + start
            start = i + 1
    yield s[start:], base + start


def _statements(text):
    clean = _strip_comments(text)
    pieces = list(_split_top(clean, ";", 0))
    *body, tail = pieces
    if tail[0].strip():
        off = tail[1] + len(tail[0]) - len(tail[0].lstrip())
        raise SessionSyntaxError("missing ';' at end of statement", *_position(text, off))
    for s, off in body:
        lead = len(s) - len(s.lstrip())
        if s.strip():
            yield s.strip(), off + lead


def parse_session(text):
    sess = SessionFile()
    for stmt, off in _statements(text):
        _statement(sess, text, stmt, off)
    if sess.ring is None:
        raise SessionSyntaxError("no ring declared", 1, 1)
    return sess


def _err(text, off, msg):
    return SessionSyntaxError(msg, *_position(text, off))


def _poly(sess, text, item, off, ring=None):
    ring = ring or sess.ring
    lead = len(item) - len(item.lstrip())
    try:
        return parse_poly(item.strip(), ring)
    except PolySyntaxError as e:
        col = (e.column or 1) - 1
        raise _err(text, off + lead + col, e.message) from None


def _statement(sess, text, stmt, off):
    word = re.match(r"[\w-]+", stmt)
    if not word:
        raise _err(text, off, f"cannot parse statement {stmt!r}")
    kw = word.group()
    if kw == "ring":
        return _ring(sess, text, stmt, off)
    if sess.ring is None:
        raise _err(text, off, "no ring declared")
    if kw in ("ideal", "matrix") or (kw == "curve" and "=" in stmt):
        m = re.match(r"(ideal|matrix|curve)\s+([A-Za-z_]\w*)\s*(\[\s*(\d+)\s*\]\s*\[\s*(\d+)\s*\])?\s*=", stmt)
        if not m:
            raise _err(text, off, f"malformed {kw} declaration")
        name = m.group(2)
        if name in sess.objects or name in sess.ring.vars or name == sess.ring_name:
            raise _err(text, off + m.start(2), f"duplicate name {name!r}")
        body, boff = stmt[m.end():], off + m.end()
        if kw == "ideal":
            obj = _ideal(sess, text, body, boff)
        elif kw == "matrix":
            if m.group(3) is None:
                raise _err(text, off, "matrix needs dimensions [rows][cols]")
            obj = _matrix(sess, text, int(m.group(4)), int(m.group(5)), body, boff)
        else:
            obj = _curve(text, body, boff)
        sess.objects[name] = obj
        sess.order.append(name)
        return
    _command(sess, text, stmt, off, kw)


def _ring(sess, text, stmt, off):
    if sess.ring is not None:
        raise _err(text, off, "only one ring per file")
    m = re.match(r"ring\s+([A-Za-z_]\w*)\s*=\s*(?:0\s*,\s*)?\(([^)]*)\)\s*(.*)$", stmt, re.S)
    if not m:
        raise _err(text, off, "malformed ring declaration, expected: ring R = (x,y,...)")
    names = [v.strip() for v in m.group(2).split(",")]
    weights = None
    for part, poff in _split_top(m.group(3), ",", off + m.start(3)):
        opt = part.strip()
        poff += len(part) - len(part.lstrip())
        if not opt or opt == "ds":
            continue
        wm = re.fullmatch(r"(?:weights|ws)\s*\(([^)]*)\)", opt)
        if not wm:
            raise _err(text, poff, f"unsupported ring option {opt!r} (only ds and weights)")
        try:
            weights = tuple(int(w) for w in wm.group(1).split(","))
        except ValueError:
            raise _err(text, poff, "weights must be integers") from None
    try:
        sess.ring = LocalRing(tuple(names), weights)
    except ValueError as e:
        raise _err(text, off + m.start(2), str(e)) from None
    sess.ring_name = m.group(1)


def _ideal(sess, text, body, off):
    gens = []
    for item, ioff in _split_top(body, ",", off):
        s = item.strip()
        lead = len(item) - len(item.lstrip())
        if not s:
            raise _err(text, ioff, "empty ideal entry")
        fm = re.fullmatch(r"(minor|intersect)\s*\((.*)\)", s, re.S)
        if fm:
            args = [a.strip() for a in fm.group(2).split(",")]
            if fm.group(1) == "minor":
                if len(args) != 2 or not isinstance(sess.objects.get(args[0]), ModuleMatrix) or not args[1].isdigit():
                    raise _err(text, ioff + lead, "minor expects (matrix name, size)")
                try:
                    gens += minors(sess.objects[args[0]], int(args[1])).gens
                except ValueError as e:
                    raise _err(text, ioff + lead, str(e)) from None
            else:
                if len(args) != 2 or not all(isinstance(sess.objects.get(a), Ideal) for a in args):
                    raise _err(text, ioff + lead, "intersect expects two ideal names")
                gens += ideal_intersect(sess.objects[args[0]], sess.objects[args[1]]).gens
        elif isinstance(sess.objects.get(s), Ideal):
            gens += sess.objects[s].gens
        else:
            gens.append(_poly(sess, text, item, ioff))
    return Ideal(sess.ring, gens)


def _matrix(sess, text, rows, cols, body, off):
    items = list(_split_top(body, ",", off))
    if len(items) != rows * cols:
        raise _err(text, off, f"expected {rows * cols} matrix entries, got {len(items)}")
    entries = [_poly(sess, text, it, ioff) for it, ioff in items]
    return ModuleMatrix.from_rows(sess.ring, [entries[i * cols:(i + 1) * cols] for i in range(rows)])


def _curve(text, body, off):
    s_ring = LocalRing(("s",))
    branches = []
    for item, ioff in _split_top(body, ",", off):
        s = item.strip()
        lead = len(item) - len(item.lstrip())
        if not (s.startswith("(") and s.endswith(")")):
            raise _err(text, ioff + lead, "a branch is written (x1(s), ..., xn(s))")
        inner = s[1:-1]
        branches.append(tuple(_poly(None, text, c, ioff + lead + 1 + (coff - 0), s_ring)
                              for c, coff in _split_top(inner, ",", 0)))
    try:
        return BranchParam(tuple(branches))
    except ValueError as e:
        raise _err(text, off, str(e)) from None


def _command(sess, text, stmt, off, kw):
    args = [a for a in re.split(r"[\s,]+", stmt[len(kw):].strip()) if a]
    line, col = _position(text, off)

    def need(kind, name):
        if not isinstance(sess.objects.get(name), kind):
            raise _err(text, off, f"{kw}: unknown {kind.__name__ if kind is not Ideal else 'ideal'} {name!r}")

    def ints(values, count):
        if len(values) != count or not all(re.fullmatch(r"-?\d+", v) for v in values):
            raise _err(text, off, f"{kw} expects {count} integer argument(s)")
        return [int(v) for v in values]

    if kw in IDEAL_COMMANDS:
        if len(args) != 1:
            raise _err(text, off, f"{kw} expects one ideal name")
        need(Ideal, args[0])
    elif kw == "versal":
        if not 1 <= len(args) <= 2:
            raise _err(text, off, "versal expects an ideal name and an optional order")
        need(Ideal, args[0])
        if len(args) == 2:
            args = [args[0]] + ints(args[1:], 1)
    elif kw == "flat":
        if len(args) < 2:
            raise _err(text, off, "flat expects two ideal names and optional base variables")
        need(Ideal, args[0])
        need(Ideal, args[1])
        for v in args[2:]:
            if v not in sess.ring.vars:
                raise _err(text, off, f"flat: unknown base variable {v!r}")
    elif kw == "curve":
        if len(args) != 1:
            raise _err(text, off, "curve expects one curve name")
        need(BranchParam, args[0])
    elif kw == "semigroup":
        args = ints(args, len(args)) if args else ints(args, 1)
    elif kw == "lines":
        args = ints(args, 2)
    elif kw == "lines-table":
        args = ints(args, 2)
    else:
        raise _err(text, off, f"unknown command {kw!r}")
    sess.commands.append(Command(kw, args, line, col))


# ------------------------------------------------------------------ running


def _sorted_gens(I):
    ring = I.ring
    return sorted(I.gens, key=lambda g: (-ring.key(next(iter(g.items()))[0])[0], str(g)))


def _vec_text(v):
    return "(" + ",".join(str(p) for p in v) + ")"


def _run_ideal(cmd, I, opts):
    name = cmd.name
    if name == "t1":
        res = t1_hypersurface(I.gens[0]) if len(I.gens) == 1 else t1(I)
        if res.tau is INFINITE:
            return ["tau = infinite"], {"tau": "infinite"}
        lines = [f"tau = {res.tau}"] + ["  " + _vec_text(b) for b in res.basis_lift]
        return lines, {"tau": res.tau, "basis": [[str(p) for p in b] for b in res.basis_lift]}
    if name == "t2":
        res = t2(I)
        d = "infinite" if res.dim is INFINITE else res.dim
        return [f"dim T2 = {d}"], {"dim_t2": d}
    if name == "rigid":
        r = is_rigid(I)
        return [f"rigid = {'yes' if r else 'no'}"], {"rigid": r}
    if name == "grading":
        nus = t1_grading(I)
        neg, zero, pos = weight_split(nus)
        return ([f"weights = {nus}", f"negative = {neg}, zero = {zero}, positive = {pos}"],
                {"weights": nus, "split": [neg, zero, pos]})
    if name == "milnor":
        if len(I.gens) == 1:
            mu = milnor_hypersurface(I.gens[0])
            return [f"mu = {mu}"], {"mu": mu}
        rec = milnor_icis(list(I.gens), seed=opts.get("seed"))
        return ([f"mu = {rec.mu}", f"colengths = {rec.colengths}"],
                {"mu": rec.mu, "colengths": rec.colengths, "generic": rec.generic})
    if name == "tjurina":
        res = t1_hypersurface(I.gens[0]) if len(I.gens) == 1 else t1(I)
        tau = "infinite" if res.tau is INFINITE else res.tau
        return [f"tau = {tau}"], {"tau": tau}
    if name == "mutau":
        rep = mu_tau_report(I, seed=opts.get("seed"))
        wh = f"yes {list(rep.weights)}" if rep.weighted_homog else "no"
        return ([f"mu = {rep.mu}", f"tau = {rep.tau}", f"tau' = {rep.tau_prime}",
                 f"weighted homogeneous = {wh}", f"mu == tau: {'yes' if rep.saito_flag else 'no'}"],
                {"mu": rep.mu, "tau": rep.tau, "tau_prime": rep.tau_prime,
                 "weighted_homog": rep.weighted_homog, "saito_flag": rep.saito_flag})
    if name == "std":
        B = std(I)
        gens = [str(g) for g in B.elements]
        return ["std = " + ", ".join(gens)], {"std": gens}
    if name == "vdim":
        v = vdim(std(I))
        v = "infinite" if v is INFINITE else v
        return [f"vdim = {v}"], {"vdim": v}
    if name == "syz":
        S = syz_ideal(I)
        cols = [_vec_text(c) for c in S.columns]
        return ["syz ="] + ["  " + c for c in cols], {"syz": cols}
    raise AssertionError(name)


def _run_command(sess, cmd, opts):
    obj = sess.objects
    if cmd.name in IDEAL_COMMANDS:
        return _run_ideal(cmd, obj[cmd.args[0]], opts)
    if cmd.name == "versal":
        order = cmd.args[1] if len(cmd.args) > 1 else opts.get("order") or DEFAULT_MAX_ORDER
        res = versal(obj[cmd.args[0]], order)
        Js = [str(g) for g in _sorted_gens(res.Js)] if res.Js.gens else ["0"]
        lines = ["Fs:"] + [f"  {f}" for f in res.Fs] + ["Js:"] + [f"  {g}" for g in Js]
        lines.append(f"Rs: {res.Rs.rows} x {res.Rs.cols} matrix")
        lines.append(f"order = {res.order_reached}, stabilized = {'yes' if res.stabilized else 'no'}")
        if res.t_weights is not None:
            lines.append(f"base weights = {dict(zip(res.base_vars, res.t_weights))}")
        return lines, {"Fs": [str(f) for f in res.Fs], "Js": Js, "order": res.order_reached,
                       "stabilized": res.stabilized, "base_vars": res.base_vars, "t_weights": res.t_weights}
    if cmd.name == "flat":
        f, F = obj[cmd.args[0]], obj[cmd.args[1]]
        ring = sess.ring
        base = list(cmd.args[2:])
        if not base:
            used = {v for g in f.gens for v in g.variables()}
            base = [v for v in ring.vars if v not in used and any(v in g.variables() for g in F.gens)]
        xvars = [v for v in ring.vars if v not in base]
        xring = LocalRing(tuple(xvars), tuple(ring.weights[ring.index(v)] for v in xvars))
        U = Unfolding.build(xring, base, [g.to_ring(xring) for g in f.gens], list(F.gens),
                            tuple(ring.weights[ring.index(v)] for v in base))
        res = is_flat(U)
        data = {"result": type(res).__name__}
        if hasattr(res, "witness"):
            data["witness"] = [str(p) for p in res.witness]
        return [str(res)], data
    if cmd.name == "curve":
        inv = curve_invariants(obj[cmd.args[0]])
        return _curve_lines(inv)
    if cmd.name == "semigroup":
        return _curve_lines(semigroup_invariants(NumericalSemigroup(tuple(cmd.args))))
    if cmd.name == "lines":
        s = lines_smoothability(*cmd.args)
        return [str(s)], {"status": s.status, "clause": s.clause, "d": s.d}
    if cmd.name == "lines-table":
        lo, hi = cmd.args
        table = lines_table(range(lo, hi + 1))
        lines = [f"n = {n}: " + (", ".join(f"[{a},{b}]" for a, b in runs) or "none") for n, runs in table.items()]
        return lines, {str(n): runs for n, runs in table.items()}
    raise AssertionError(cmd.name)


def _curve_lines(inv):
    b = deligne_bounds(inv)
    lines = [f"delta = {inv.delta}", f"r = {inv.r}", f"mu = {inv.mu}", f"c = {inv.c}", f"m = {inv.m}"]
    if inv.t is not None:
        lines.append(f"t = {inv.t}" + (" (Gorenstein)" if inv.gorenstein else ""))
    lines.append(f"e in [{b.lower},{b.upper}]" + (f", e = {b.exact}" if b.exact is not None else ""))
    data = {"delta": inv.delta, "r": inv.r, "mu": inv.mu, "c": inv.c, "m": inv.m, "t": inv.t,
            "e_bounds": [b.lower, b.upper], "e": b.exact}
    return lines, data


def run_session(sess, opts=None):
    """Run all commands; returns (text lines, json records, exit code)."""
    opts = opts or {}
    out, records, code = [], [], EXIT_OK
    for i, cmd in enumerate(sess.commands, 1):
        out.append(f"// [{i}] {cmd.text()}")
        try:
            lines, data = _run_command(sess, cmd, opts)
            out += lines
            records.append({"index": i, "command": cmd.text(), "ok": True, "result": data})
        except (ValueError, RuntimeError, ArithmeticError) as e:
            out.append(f"error in command {i} ({cmd.text()}): {e}")
            records.append({"index": i, "command": cmd.text(), "ok": False, "error": str(e)})
            code = EXIT_COMPUTE
    return out, records, code


# ------------------------------------------------------------------ entry point


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return parse_session(fh.read())


def _emit(args, lines, records):
    if args.json:
        print(json.dumps(records, indent=2, default=str))
    else:
        print("\n".join(lines))


def build_parser():
    p = argparse.ArgumentParser(prog="dk", description="Deformations and invariants of singularities.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--order", type=int, default=None, help="lifting order for versal")
    p.add_argument("--truncation", type=int, default=None, help="power series window for curves")
    p.add_argument("--seed", type=int, default=None, help="seed for generic combinations (default: DK_SEED or 0)")
    sub = p.add_subparsers(dest="cmd", required=True)
    sub.add_parser("run", help="run all commands of a session file").add_argument("file")
    for name in sorted(IDEAL_COMMANDS | {"versal"}):
        sp = sub.add_parser(name, help=f"{name} of an ideal declared in a session file")
        sp.add_argument("file")
        sp.add_argument("ideal")
    sp = sub.add_parser("flat", help="flatness of an unfolding F of f")
    sp.add_argument("file")
    sp.add_argument("f")
    sp.add_argument("F")
    sp.add_argument("base", nargs="*")
    sp = sub.add_parser("curve", help="invariants of a parametrized curve")
    sp.add_argument("file")
    sp.add_argument("name")
    sub.add_parser("semigroup", help="invariants of a monomial curve").add_argument("generators")
    sp = sub.add_parser("lines", help="smoothability of r general lines in C^n")
    sp.add_argument("n", type=int)
    sp.add_argument("r", type=int)
    sp = sub.add_parser("lines-table", help="non-smoothable ranges for n in [n1, n2]")
    sp.add_argument("n1", type=int)
    sp.add_argument("n2", type=int)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    opts = {"order": args.order, "seed": args.seed, "truncation": args.truncation}
    try:
        if args.cmd == "semigroup":
            gens = tuple(int(g) for g in re.split(r"[\s,]+", args.generators.strip()) if g)
            sess = SessionFile(commands=[Command("semigroup", list(gens), 0, 0)])
        elif args.cmd in ("lines", "lines-table"):
            pair = [args.n, args.r] if args.cmd == "lines" else [args.n1, args.n2]
            sess = SessionFile(commands=[Command(args.cmd, pair, 0, 0)])
        else:
            sess = _load(args.file)
            if args.cmd != "run":
                if args.cmd == "flat":
                    cargs = [args.f, args.F] + list(args.base)
                elif args.cmd == "curve":
                    cargs = [args.name]
                else:
                    cargs = [args.ideal]
                text = f"{args.cmd} {' '.join(cargs)}"
                sess.commands = []
                _command(sess, text, text, 0, args.cmd)
    except SessionSyntaxError as e:
        print(f"syntax error: {e}", file=sys.stderr)
        return EXIT_SYNTAX
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SYNTAX if isinstance(e, ValueError) else EXIT_COMPUTE
    if args.truncation is not None:
        _apply_truncation(sess, args.truncation)
    lines, records, code = run_session(sess, opts)
    _emit(args, lines, records)
    return code


def _apply_truncation(sess, window):
    for name, obj in sess.objects.items():
        if isinstance(obj, BranchParam):
            sess.objects[name] = BranchParam(obj.branches, precision=window)


if __name__ == "__main__":
    sys.exit(main())
