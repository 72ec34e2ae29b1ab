"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 domain or precondition error,
4 certificate or resource error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import TextIO

from . import jantzen, linkage, steinberg, tilting
from .charexpr import DEFAULT_CAP, Evaluator, FiniteCharacter, Verma, Window
from .database import CharDatabase, load_fixture
from .errors import CertificateError, DomainError, ResourceError
from .partition import save_partition_tables
from .rootdata import (RootSystem, build_root_system, enumerate_weyl, is_dominant, parse_type, weight_from_json,
                       weight_to_json)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CERT = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _json_arg(text: str):
    try:
        return json.loads(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not valid JSON: {text!r}") from None


def _common(parser: argparse.ArgumentParser, weight=True, depth=True, p=True) -> None:
    parser.add_argument("--type", required=True, help="root system type letter, e.g. A, or a label such as A2")
    parser.add_argument("--rank", type=int, help="rank (omit when --type already contains it)")
    if p:
        parser.add_argument("--p", type=int, required=True, help="the prime p")
    if weight:
        parser.add_argument("--weight", type=_json_arg, help="weight as a JSON integer array")
    if depth:
        parser.add_argument("--depth", type=int, help="window depth (height units below each ceiling)")
    parser.add_argument("--format", choices=("pretty", "json", "tsv"), default="pretty")
    parser.add_argument("--cap", type=int, default=DEFAULT_CAP, help="iteration cap for infinite families")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="charop", description="Exact characters in characteristic-p category O.")
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    rootsys = sub.add_parser("rootsys", help="root system data").add_subparsers(dest="action", required=True,
                                                                               parser_class=_Parser)
    _common(rootsys.add_parser("info"), weight=False, depth=False, p=False)

    char = sub.add_parser("char", help="evaluate a character on a window").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    for name in ("verma", "simple", "weyl", "tilting", "infty-tilting"):
        sp = char.add_parser(name)
        _common(sp)
        sp.add_argument("--db", help="simple-character database JSON")
        sp.add_argument("--tilting-db", help="tilting-character database JSON")
        sp.add_argument("--force", action="store_true", help="override the p >= 2h-2 precondition")
        if name == "simple":
            sp.add_argument("--method", choices=("general", "dominant", "antidominant"), default="general")
        if name == "infty-tilting":
            sp.add_argument("--r", type=int, default=1)

    dec = sub.add_parser("decompose", help="change of basis").add_subparsers(dest="action", required=True,
                                                                             parser_class=_Parser)
    sp = dec.add_parser("verma-basis")
    _common(sp)
    _source_args(sp)

    link = sub.add_parser("linkage", help="affine Weyl orbits").add_subparsers(dest="action", required=True,
                                                                              parser_class=_Parser)
    _common(link.add_parser("rep"), depth=False)
    sp = link.add_parser("linked")
    _common(sp, weight=False, depth=False)
    sp.add_argument("--from", dest="src", type=_json_arg, required=True, help="the lower weight mu")
    sp.add_argument("--to", dest="dst", type=_json_arg, required=True, help="the upper weight lambda")
    sp = link.add_parser("split")
    _common(sp)
    _source_args(sp)
    sp.add_argument("--expansion", type=_json_arg, help="Verma expansion as [[weight, coeff], ...]")

    sp = sub.add_parser("translate", help="translate a Verma expansion between orbits")
    _common(sp)
    _source_args(sp)
    sp.add_argument("--expansion", type=_json_arg, help="Verma expansion as [[weight, coeff], ...]")
    sp.add_argument("--from", dest="src", type=_json_arg, required=True, help="source weight mu in the closed alcove")
    sp.add_argument("--to", dest="dst", type=_json_arg, required=True, help="target weight lambda in the closed alcove")

    jz = sub.add_parser("jantzen", help="sum formulas").add_subparsers(dest="action", required=True,
                                                                      parser_class=_Parser)
    _common(jz.add_parser("sum"))
    _common(jz.add_parser("sl2-check"))

    db = sub.add_parser("db", help="database utilities").add_subparsers(dest="action", required=True,
                                                                        parser_class=_Parser)
    sp = db.add_parser("validate")
    sp.add_argument("--db", help="simple-character database JSON")
    sp.add_argument("--tilting-db", help="tilting-character database JSON")
    sp.add_argument("--depth", type=int, default=20)
    sp.add_argument("--format", choices=("pretty", "json", "tsv"), default="pretty")
    return parser


def _source_args(sp) -> None:
    sp.add_argument("--of", choices=("verma", "simple", "weyl", "tilting"), default="simple",
                    help="which character of --weight to expand")
    sp.add_argument("--db", help="simple-character database JSON")
    sp.add_argument("--tilting-db", help="tilting-character database JSON")


# -- helpers ---------------------------------------------------------------------------


def _root_system(args) -> RootSystem:
    label = args.type
    if args.rank is None:
        t, n = parse_type(label)
    else:
        t, n = label, args.rank
    if n < 1:
        raise DomainError(f"rank must be at least 1, got {n}")
    return build_root_system(t, n)


def _prime(args) -> int:
    p = args.p
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise DomainError(f"p must be a prime, got {p}")
    return p


def _weight(rs: RootSystem, obj, name="--weight"):
    if obj is None:
        raise UsageError(f"{name} is required")
    return weight_from_json(obj, rs.rank)


def _depth(args, required=True):
    if args.depth is None:
        if required:
            raise UsageError("--depth is required for this query (its support is infinite)")
        return None
    if args.depth < 0:
        raise DomainError(f"depth must be nonnegative, got {args.depth}")
    return args.depth


def _simple_db(args, rs: RootSystem, p: int) -> CharDatabase:
    if getattr(args, "db", None):
        db = CharDatabase.load(args.db)
        if db.rs is not rs or db.p != p:
            raise DomainError(f"database {args.db} is for {db.rs.name} p={db.p}, not {rs.name} p={p}")
        return db
    return load_fixture(rs.type_label, rs.rank, p)


def _tilting_db(args, rs: RootSystem, p: int) -> CharDatabase:
    if getattr(args, "tilting_db", None):
        db = CharDatabase.load(args.tilting_db)
        if db.rs is not rs or db.p != p:
            raise DomainError(f"database {args.tilting_db} is for {db.rs.name} p={db.p}, not {rs.name} p={p}")
        return db
    if rs.type_label == "A" and rs.rank == 1:
        return tilting.sl2_tilting_fixture(p)
    raise DomainError(f"no shipped tilting database for {rs.name}; pass --tilting-db")


def _character(args, rs, p, kind, lam):
    """(expression, finite) for a named character of ``lam``."""
    if kind == "verma":
        return Verma(lam), False
    if kind == "weyl":
        return tilting.weyl_char(rs, lam), True
    if kind == "tilting":
        return _tilting_db(args, rs, p).get(lam), True
    if kind == "simple":
        db = _simple_db(args, rs, p)
        method = getattr(args, "method", "general")
        if method == "dominant":
            return steinberg.dominant_simple_char(lam, db), True
        if method == "antidominant":
            return steinberg.antidominant_simple_char(lam, db), False
        return steinberg.general_simple_char(lam, db), is_dominant(lam)
    if kind == "infty-tilting":
        return tilting.infty_tilting_char(lam, args.r, _tilting_db(args, rs, p), force=args.force), False
    raise UsageError(f"unknown character kind {kind}")


def _window(args, rs, ev, expr, finite):
    depth = _depth(args, required=not finite)
    ceil = list(ev.ceilings(expr).values())
    if depth is None:
        depth = max((tilting.weyl_depth(rs, c) for c in ceil), default=0)
    return Window(rs, tuple(ceil), depth)


def _parse_expansion(rs, obj) -> dict:
    if not isinstance(obj, list):
        raise UsageError("--expansion must be a JSON list of [weight, coefficient] pairs")
    out = {}
    for item in obj:
        if not isinstance(item, list) or len(item) != 2:
            raise UsageError("--expansion entries must be [weight, coefficient] pairs")
        k = weight_from_json(item[0], rs.rank)
        out[k] = out.get(k, 0) + int(item[1])
    return out


def _expansion(args, rs, p, ev) -> linkage.VermaExpansion:
    if getattr(args, "expansion", None) is not None:
        return linkage.VermaExpansion(_parse_expansion(rs, args.expansion), None)
    lam = _weight(rs, args.weight)
    expr, finite = _character(args, rs, p, args.of, lam)
    window = _window(args, rs, ev, expr, finite)
    return linkage.verma_expansion(rs, expr, window, ev)


# -- output ---------------------------------------------------------------------------


def _fmt_w(w) -> str:
    return json.dumps(weight_to_json(w)).replace(" ", "")


def _emit_pairs(out: TextIO, fmt: str, pairs, key: str, window: Window | None, extra: dict | None = None,
                title: str = "") -> None:
    pairs = list(pairs)
    if fmt == "json":
        obj = {key: [[weight_to_json(k), str(v)] for k, v in pairs]}
        if window is not None:
            obj["window"] = window.to_json()
        obj.update(extra or {})
        out.write(json.dumps(obj) + "\n")
    elif fmt == "tsv":
        out.write("weight\tcoefficient\n")
        for k, v in pairs:
            out.write(f"{','.join(map(str, k))}\t{v}\n")
    else:
        if title:
            out.write(title + "\n")
        if window is not None:
            ce = ", ".join(_fmt_w(c) for c in window.ceilings)
            out.write(f"window: ceilings {ce}, depth {window.depth}\n")
        if not pairs:
            out.write("  (zero)\n")
        for k, v in pairs:
            out.write(f"  {_fmt_w(k):>16}  {v}\n")


def _emit_value(out: TextIO, fmt: str, obj: dict) -> None:
    if fmt == "json":
        out.write(json.dumps(obj) + "\n")
    elif fmt == "tsv":
        out.write("\t".join(obj) + "\n")
        out.write("\t".join(str(v) for v in obj.values()) + "\n")
    else:
        for k, v in obj.items():
            out.write(f"{k}: {v}\n")


# -- commands -------------------------------------------------------------------------


def _cmd_rootsys(args, out):
    rs = _root_system(args)
    info = {
        "type": rs.name,
        "cartan_matrix": [list(r) for r in rs.cartan],
        "positive_roots": [list(b) for b in rs.positive_roots],
        "rho": list(rs.rho),
        "coxeter_number": rs.coxeter_number,
        "weyl_group_order": len(enumerate_weyl(rs)),
    }
    if args.format == "json":
        out.write(json.dumps(info) + "\n")
    elif args.format == "tsv":
        for k, v in info.items():
            out.write(f"{k}\t{json.dumps(v)}\n")
    else:
        for k, v in info.items():
            out.write(f"{k}: {v}\n")


def _cmd_char(args, out):
    rs, p = _root_system(args), _prime(args)
    lam = _weight(rs, args.weight)
    ev = Evaluator(rs, cap=args.cap)
    expr, finite = _character(args, rs, p, args.action, lam)
    window = _window(args, rs, ev, expr, finite)
    res: FiniteCharacter = ev.evaluate(expr, window)
    _emit_pairs(out, args.format, res.items(), "character", window,
                title=f"{args.action} character of {_fmt_w(lam)} ({rs.name}, p={p})")


def _cmd_decompose(args, out):
    rs, p = _root_system(args), _prime(args)
    ev = Evaluator(rs, cap=args.cap)
    exp = _expansion(args, rs, p, ev)
    _emit_pairs(out, args.format, exp.items(), "expansion", exp.window,
                title=f"Verma-basis expansion ({rs.name}, p={p})")


def _cmd_linkage(args, out):
    rs, p = _root_system(args), _prime(args)
    if args.action == "rep":
        lam = _weight(rs, args.weight)
        rep, word = linkage.fundamental_domain_rep(rs, lam, p)
        _emit_value(out, args.format, {"weight": weight_to_json(lam), "representative": weight_to_json(rep),
                                       "witness": [list(s) for s in word.steps]})
    elif args.action == "linked":
        mu = _weight(rs, args.src, "--from")
        lam = _weight(rs, args.dst, "--to")
        _emit_value(out, args.format, {"from": weight_to_json(mu), "to": weight_to_json(lam),
                                       "strongly_linked": linkage.strongly_linked(rs, mu, lam, p)})
    else:
        ev = Evaluator(rs, cap=args.cap)
        exp = _expansion(args, rs, p, ev)
        parts = linkage.split_by_linkage(rs, exp, p)
        ordered = sorted(parts.items(), key=lambda kv: kv[0].representative)
        if args.format == "json":
            obj = {"classes": [{"representative": weight_to_json(c.representative),
                                "expansion": [[weight_to_json(k), str(v)] for k, v in e.items()]}
                               for c, e in ordered]}
            if exp.window is not None:
                obj["window"] = exp.window.to_json()
            out.write(json.dumps(obj) + "\n")
        else:
            for c, e in ordered:
                _emit_pairs(out, args.format, e.items(), "expansion", None,
                            title=f"class of {_fmt_w(c.representative)}")


def _cmd_translate(args, out):
    rs, p = _root_system(args), _prime(args)
    ev = Evaluator(rs, cap=args.cap)
    mu = _weight(rs, args.src, "--from")
    lam = _weight(rs, args.dst, "--to")
    exp = _expansion(args, rs, p, ev)
    res = linkage.translate_expansion(rs, exp, mu, lam, p)
    _emit_pairs(out, args.format, res.items(), "expansion", res.window,
                title=f"translation {_fmt_w(mu)} -> {_fmt_w(lam)} ({rs.name}, p={p})")


def _cmd_jantzen(args, out):
    rs, p = _root_system(args), _prime(args)
    mu = _weight(rs, args.weight)
    depth = _depth(args)
    ev = Evaluator(rs, cap=args.cap)
    if args.action == "sl2-check":
        if rs.rank != 1 or rs.type_label != "A":
            raise DomainError(f"sl2-check needs type A1, got {rs.name}")
        window = Window(rs, ((mu[0] - 2,),), depth)
        a = ev.evaluate(jantzen.sl2_torsion_char_binomial(mu, p), window)
        b = ev.evaluate(jantzen.sl2_torsion_char_verma(mu, p), window)
        _emit_pairs(out, args.format, a.items(), "character", window, extra={"equal": a.coeffs == b.coeffs},
                    title=f"torsion character of C({mu[0]}), p={p}; Verma form agrees: {a.coeffs == b.coeffs}")
        return
    report = jantzen.jantzen_sum(rs, mu, p)
    ceilings = tuple(tuple(a - b for a, b in zip(mu, bw)) for bw in rs.positive_roots_w)
    window = Window(rs, tuple(dict.fromkeys(ceilings)), depth)
    per = {b: ev.evaluate(e, window) for b, e in report.per_root.items()}
    total = ev.evaluate(report.total, window)
    if args.format == "json":
        obj = {
            "mu": weight_to_json(mu), "p": p, "window": window.to_json(),
            "per_root": [{"root": list(b), "character": [[weight_to_json(k), str(v)] for k, v in f.items()]}
                         for b, f in per.items()],
            "total": [[weight_to_json(k), str(v)] for k, v in total.items()],
        }
        out.write(json.dumps(obj) + "\n")
    elif args.format == "tsv":
        out.write("root\tweight\tcoefficient\n")
        for b, f in list(per.items()) + [("total", total)]:
            label = "total" if b == "total" else ",".join(map(str, b))
            for k, v in f.items():
                out.write(f"{label}\t{','.join(map(str, k))}\t{v}\n")
    else:
        out.write(f"Jantzen sum for mu={_fmt_w(mu)} ({rs.name}, p={p})\n")
        for b, f in per.items():
            _emit_pairs(out, "pretty", f.items(), "character", None, title=f"root {list(b)}:")
        _emit_pairs(out, "pretty", total.items(), "character", window, title="total:")


def _cmd_db(args, out):
    path = args.db or args.tilting_db
    if not path:
        raise UsageError("db validate needs --db or --tilting-db")
    db = CharDatabase.load(path)
    if args.tilting_db and not args.db:
        db.kind = "tilting"
    problems = db.validate(depth=args.depth)
    _emit_value(out, args.format, {"database": path, "entries": len(db), "valid": not problems,
                                   "problems": problems})
    if problems:
        raise DomainError(f"database {path} failed validation: {problems[0]}")


_COMMANDS = {
    "rootsys": _cmd_rootsys, "char": _cmd_char, "decompose": _cmd_decompose, "linkage": _cmd_linkage,
    "translate": _cmd_translate, "jantzen": _cmd_jantzen, "db": _cmd_db,
}


def run(argv=None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.cmd](args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except DomainError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except (CertificateError, ResourceError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_CERT
    finally:
        save_partition_tables()
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
