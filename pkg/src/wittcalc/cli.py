"""Command-line interface: every operation as a subcommand with JSON output.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 failed verification.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
import traceback
from fractions import Fraction
from pathlib import Path

from . import artinhasse as ahm
from . import bigwitt, fixtures, laws, ptypical, symgrp
from .bigwitt import BigWittVec
from .errors import DomainError, VerificationFailure, WittError
from .ptypical import PWittVec
from .rings import Integers, PrimeField, parse_ring
from .series import TruncSeries

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# input parsing


def _load_value(text: str):
    """Inline JSON, or the JSON contents of a file path."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    path = Path(text)
    if path.is_file():
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON ({exc})") from None
    raise UsageError(f"value {text!r} is neither JSON nor a readable file")


def _ring(args):
    return parse_ring(args.ring) if args.ring else Integers()


def _big(text: str, args) -> BigWittVec:
    doc = _load_value(text)
    if isinstance(doc, dict):
        return BigWittVec.from_json(doc)
    if isinstance(doc, list):
        w = BigWittVec.of(_ring(args), doc)
        if args.trunc is not None and args.trunc != w.truncation:
            raise DomainError(f"--trunc {args.trunc} but {w.truncation} coordinates given")
        return w
    raise UsageError("a big Witt vector is a JSON object or coordinate list")


def _pwitt(text: str, args) -> PWittVec:
    doc = _load_value(text)
    if isinstance(doc, dict):
        return PWittVec.from_json(doc)
    if isinstance(doc, list):
        if args.prime is None:
            raise UsageError("--prime is required for coordinate-list input")
        w = PWittVec.of(args.prime, _ring(args), doc)
        if args.length is not None and args.length != w.length:
            raise DomainError(f"--length {args.length} but {w.length} coordinates given")
        return w
    raise UsageError("a p-typical Witt vector is a JSON object or coordinate list")


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required flag(s): " + ", ".join("--" + m for m in missing))


def _fmt_list(ring, values):
    return [ring.format(v) for v in values]


# witt


def _witt(args):
    op = args.op
    R = _ring(args)
    vals = args.values
    if op in ("add", "mul"):
        _arity(vals, 2)
        a, b = _big(vals[0], args), _big(vals[1], args)
        out = bigwitt.add(a, b) if op == "add" else bigwitt.mul(a, b)
        if args.check:
            other = (bigwitt.add_via_ghosts if op == "add" else bigwitt.mul_via_ghosts)(a, b)
            if other != out:
                raise VerificationFailure(f"law and ghost routes disagree on {op}")
        return out.to_json()
    if op in ("neg", "invert"):
        _arity(vals, 1)
        a = _big(vals[0], args)
        out = bigwitt.neg(a) if op == "neg" else bigwitt.invert(a)
        if args.check and op == "neg" and bigwitt.neg_via_ghosts(a) != out:
            raise VerificationFailure("law and ghost routes disagree on neg")
        return out.to_json()
    if op == "ghost":
        _arity(vals, 1)
        a = _big(vals[0], args)
        return {"ghosts": _fmt_list(a.ring, a.ghosts())}
    if op == "teich":
        _arity(vals, 1)
        _need(args, "trunc")
        return bigwitt.teichmuller(R(_scalar(vals[0], R)), R, args.trunc).to_json()
    if op == "to-series":
        _arity(vals, 1)
        a = _big(vals[0], args)
        return {"ring": a.ring.to_json(), "series": a.to_series().to_json()}
    if op == "from-series":
        _arity(vals, 1)
        doc = _load_value(vals[0])
        coeffs = doc.get("series") if isinstance(doc, dict) else doc
        if not isinstance(coeffs, list):
            raise UsageError("series input is a JSON list of coefficients")
        s = TruncSeries.of(R, coeffs, args.trunc)
        return bigwitt.from_series(s).to_json()
    raise UsageError(f"unknown witt operation {op!r}")


def _scalar(text, R):
    doc = _load_value(text) if text.strip().startswith(("[", "{", '"')) else text
    return R.parse(str(doc))


def _arity(vals, n):
    if len(vals) != n:
        raise UsageError(f"expected {n} value argument(s), got {len(vals)}")


# pwitt


def _pw(args):
    op = args.op
    vals = args.values
    if op in ("add", "mul"):
        _arity(vals, 2)
        a, b = _pwitt(vals[0], args), _pwitt(vals[1], args)
        fn = ptypical.p_add if op == "add" else ptypical.p_mul
        out = fn(a, b)
        if args.check and fn(a, b, method="ghost") != out:
            raise VerificationFailure(f"law and ghost routes disagree on {op}")
        return out.to_json()
    if op == "invert":
        _arity(vals, 1)
        return ptypical.p_invert(_pwitt(vals[0], args)).to_json()
    if op == "ghost":
        _arity(vals, 1)
        a = _pwitt(vals[0], args)
        return {"ghosts": _fmt_list(a.ring, a.ghosts())}
    if op == "project":
        _arity(vals, 1)
        _need(args, "prime")
        return ptypical.project(_big(vals[0], args), args.prime, args.length).to_json()
    if op == "section":
        _arity(vals, 1)
        return ptypical.section_j(_pwitt(vals[0], args), args.trunc).to_json()
    if op == "frobenius":
        _arity(vals, 1)
        return ptypical.frobenius(_pwitt(vals[0], args)).to_json()
    if op == "verschiebung":
        _arity(vals, 1)
        return ptypical.verschiebung(_pwitt(vals[0], args)).to_json()
    if op == "to-padic":
        _arity(vals, 1)
        a = _pwitt(vals[0], args)
        if args.ring is None and not isinstance(_load_value(vals[0]), dict):
            a = a.map(PrimeField(a.prime))
        return {"residue": str(ptypical.to_padic(a)),
                "modulus": str(a.prime ** a.length)}
    if op == "from-padic":
        _arity(vals, 1)
        _need(args, "prime", "length")
        return ptypical.from_padic(int(vals[0]), args.prime, args.length).to_json()
    raise UsageError(f"unknown pwitt operation {op!r}")


# ah


def _ah(args):
    op = args.op
    _need(args, "height", "prime")
    h, p = args.height, args.prime
    if op == "series":
        _need(args, "trunc")
        el = ahm.artin_hasse(h, p, args.trunc)
        return {"h": h, "p": p, "truncation": args.trunc, "series": el.as_series.to_json()}
    if op == "witt":
        _need(args, "trunc")
        return ahm.artin_hasse(h, p, args.trunc).to_json()
    if op == "check":
        _need(args, "trunc")
        seed = 0 if args.seed is None else args.seed
        report = ahm.ah_identity_check(h, p, args.trunc, samples=args.samples, seed=seed)
        if report["status"] != "pass":
            raise _Failed(report)
        return report
    if op == "image":
        _need(args, "depth")
        residue = ahm.ah_image_in_padics(h, p, args.depth)
        return {"residue": str(residue), "modulus": str(p ** (args.depth + 1))}
    raise UsageError(f"unknown ah operation {op!r}")


class _Failed(Exception):
    """A verification report to print before exiting with code 3."""

    def __init__(self, doc):
        super().__init__(doc.get("status", "fail"))
        self.doc = doc


# count / mark


def _count(args):
    op = args.op
    t0 = time.perf_counter()
    if op == "hom":
        _need(args, "height", "degree")
        h, p, m = args.height, args.prime, args.degree
        method = args.method or "dfs"
        if method == "dfs":
            n = symgrp.hom_count(h, p, m, workers=args.threads)
        elif method == "isoclass":
            n = symgrp.hom_count_via_isoclasses(h, p, m)
        else:
            raise UsageError(f"unknown method {method!r} for count hom")
        params = {"h": h, "p": p, "m": m}
        other = None
        if args.check:
            other = (symgrp.hom_count_via_isoclasses(h, p, m) if method == "dfs"
                     else symgrp.hom_count(h, p, m))
    elif op == "subgroups":
        _need(args, "height", "prime", "degree")
        h, p, d = args.height, args.prime, args.degree
        method = "hnf"
        n = symgrp.subgroup_count(h, p, d)
        params = {"h": h, "p": p, "d": d}
        other = ahm.nh_coeffs(h, p, d).coeffs[d] if args.check else None
    elif op == "orders":
        _need(args, "degree", "exponent")
        method = args.method or "classes"
        n = symgrp.elements_of_order_dividing(args.degree, args.exponent, method)
        params = {"n": args.degree, "m": args.exponent}
        other = None
        if args.check:
            alt = "brute" if method == "classes" else "classes"
            other = symgrp.elements_of_order_dividing(args.degree, args.exponent, alt)
    else:
        raise UsageError(f"unknown count operation {op!r}")
    doc = {"count": str(n), "method": method,
           "params": {k: (None if v is None else str(v)) for k, v in params.items()}}
    if args.check:
        doc["check"] = "pass" if other == n else "fail"
        if other != n:
            doc["expected"] = str(other)
            raise _Failed(doc)
    if args.timing:
        doc["elapsed_ms"] = str(round((time.perf_counter() - t0) * 1000))
    return doc


def _mark(args):
    if args.op != "check":
        raise UsageError(f"unknown mark operation {args.op!r}")
    _need(args, "height", "degree")
    h, p, M = args.height, args.prime, args.degree
    kind = args.mark or "formal"
    if kind == "constant":
        spec = symgrp.constant_mark(h, p)
    elif kind == "formal":
        spec = symgrp.formal_mark(h, p, M)
    elif kind == "index-power":
        _need(args, "prime")
        spec = symgrp.index_power_mark(h, p, M)
    else:
        raise UsageError(f"unknown mark {kind!r}")
    method = args.method or "enumerate"
    lhs = symgrp.mark_lhs(spec, M, method)
    rhs = symgrp.mark_rhs(spec, M)
    doc = {"h": str(h), "p": None if p is None else str(p), "degree": str(M),
           "mark": kind, "method": method, "lhs": lhs.to_json(), "rhs": rhs.to_json(),
           "status": "pass" if lhs == rhs else "fail"}
    if kind == "constant" and p is not None:
        ah = ahm.artin_hasse(h, p, max(M, 1)).as_series.coeffs[:M + 1]
        doc["matches_artin_hasse"] = [Fraction(c) for c in ah] == list(rhs.coeffs)
        if not doc["matches_artin_hasse"]:
            doc["status"] = "fail"
    if doc["status"] != "pass":
        raise _Failed(doc)
    return doc


# fixtures / laws


def _fixtures(args):
    if args.op != "verify":
        raise UsageError(f"unknown fixtures operation {args.op!r}")
    given = [fixtures.QuotientPresentation.from_json(_load_value(v)) for v in args.values]
    report = fixtures.verify_height2_suite(given or None, directory=args.data_dir)
    doc = report.to_json()
    if not report.passed:
        raise _Failed(doc)
    return doc


def _laws(args):
    if args.op != "derive":
        raise UsageError(f"unknown laws operation {args.op!r}")
    if args.section:
        _need(args, "prime", "trunc")
        law = laws.section_law(args.prime, args.trunc)
        doc = {"kind": "section", "prime": str(law.prime), "truncation": str(law.truncation),
               "p_local": law.certified,
               "denominators": [str(d) for d in law.denominators]}
        if args.full:
            doc["section"] = [f"z[{n}] = {p.format()}" for n, p in enumerate(law.polys, 1)]
        return doc
    if args.prime is not None:
        _need(args, "length")
        law = laws.ptypical_law(args.prime, args.length)
    else:
        _need(args, "trunc")
        law = laws.big_law(args.trunc)
    if not law.certified:
        raise VerificationFailure("law is not certified")
    d = law.describe()
    doc = {"kind": d["kind"], "indices": [str(i) for i in d["indices"]],
           "prime": None if d["prime"] is None else str(d["prime"]),
           "integral": True, "ghost_compatible": True, "certified": True,
           "terms": {op: [str(t) for t in v] for op, v in d["terms"].items()}}
    if args.full:
        doc["laws"] = {op: [f"z[{n}] = {p.format()}"
                            for n, p in zip(law.indices, getattr(law, op))]
                       for op in ("sum", "prod", "neg")}
    return doc


# parser


COMMANDS = {
    "witt": (["add", "mul", "neg", "invert", "ghost", "teich", "to-series", "from-series"],
             _witt),
    "pwitt": (["add", "mul", "invert", "ghost", "project", "section", "frobenius",
               "verschiebung", "to-padic", "from-padic"], _pw),
    "ah": (["series", "witt", "check", "image"], _ah),
    "count": (["hom", "subgroups", "orders"], _count),
    "mark": (["check"], _mark),
    "fixtures": (["verify"], _fixtures),
    "laws": (["derive"], _laws),
}


def _common_flags() -> argparse.ArgumentParser:
    c = _Parser(add_help=False)
    c.add_argument("--ring", help="coefficient ring: Z, Q, Z_(p), Z/p^N, F_p")
    c.add_argument("--prime", type=int)
    c.add_argument("--trunc", type=int, help="big Witt / series truncation N")
    c.add_argument("--length", type=int, help="p-typical length d+1")
    c.add_argument("--height", type=int)
    c.add_argument("--degree", type=int, help="symmetric-group degree or subgroup exponent")
    c.add_argument("--exponent", type=int, help="m in g^m = 1 (count orders)")
    c.add_argument("--depth", type=int, help="d in W_p(F_p) = Z/p^(d+1)")
    c.add_argument("--seed", type=int)
    c.add_argument("--samples", type=int, default=50)
    c.add_argument("--method")
    c.add_argument("--mark", choices=["constant", "formal", "index-power"])
    c.add_argument("--section", action="store_true", help="laws derive: the section law")
    c.add_argument("--full", action="store_true", help="laws derive: print polynomials")
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--check", action="store_true", help="cross-check with an independent oracle")
    c.add_argument("--timing", action="store_true")
    c.add_argument("--pretty", action="store_true")
    c.add_argument("--data-dir", default=None)
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="wittcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    for group, (ops, _) in COMMANDS.items():
        g = sub.add_parser(group)
        gsub = g.add_subparsers(dest="op", required=True, parser_class=_Parser)
        for op in ops:
            leaf = gsub.add_parser(op, parents=[common])
            leaf.add_argument("values", nargs="*")
    return parser


def _dump(doc, pretty: bool) -> str:
    if pretty:
        return json.dumps(doc, indent=2, default=_json_default)
    return json.dumps(doc, separators=(",", ":"), default=_json_default)


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    pretty = False
    try:
        args = build_parser().parse_args(argv)
        pretty = args.pretty
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        data = args.data_dir or os.environ.get("WITTCALC_DATA_DIR")
        if data:
            laws.configure_cache(Path(data) / "laws")
        doc = COMMANDS[args.group][1](args)
        print(_dump(doc, pretty), file=out)
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except _Failed as exc:
        print(_dump(exc.doc, pretty), file=out)
        return EXIT_VERIFY
    except VerificationFailure as exc:
        print(_dump({"error": type(exc).__name__, "message": str(exc)}, pretty), file=out)
        return EXIT_VERIFY
    except (DomainError, WittError) as exc:
        print(_dump({"error": type(exc).__name__, "message": str(exc)}, pretty), file=out)
        return EXIT_DOMAIN
    except (ValueError, ArithmeticError, TypeError, RecursionError) as exc:
        print(_dump({"error": type(exc).__name__, "message": str(exc)}, pretty), file=out)
        return EXIT_DOMAIN
    except SystemExit as exc:     # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    except Exception as exc:      # never crash; keep the traceback for debugging
        traceback.print_exc(file=err)
        print(_dump({"error": type(exc).__name__, "message": str(exc)}, pretty), file=out)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
