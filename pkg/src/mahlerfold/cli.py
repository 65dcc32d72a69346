"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error (argparse's
default).  All outputs are deterministic for fixed arguments; JSON payloads
carry a top-level "schema": 1 field.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction

import mpmath as mp

from . import contfrac, curve, fiblucas, folding, hadamard
from .identities import REGISTRY
from .poly import Polynomial, RationalFunction, parse_poly, parse_rational
from .series import TruncatedSeries, expand_named

SCHEMA = 1


def _emit(payload: dict, as_json: bool) -> None:
    if as_json:
        payload = {"schema": SCHEMA, **payload}
        print(json.dumps(payload, sort_keys=True))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")


def _series_payload(name: str, series: TruncatedSeries) -> dict:
    return {
        "name": name,
        "order": series.order,
        "coeffs": [str(Fraction(c)) for c in series.coeffs],
    }


# ---------------------------------------------------------------------------
# expand / verify
# ---------------------------------------------------------------------------


def cmd_expand(args) -> int:
    series = expand_named(args.name, args.order)
    _emit(_series_payload(args.name, series), args.json)
    return 0


FOLD_CHECKS = ("rho-theorem", "fg-mahler", "ij-system", "e-words")


def _run_fold_check(check: str, order: int, max_level: int) -> tuple[bool, str]:
    from .series import truncated_partial

    if check == "rho-theorem":
        engine = folding.FoldEngine("rho", Polynomial.x())
        lengths = folding.word_lengths("rho", max_level)
        for n in range(max_level + 1):
            mat = engine.with_head(n, folding.rho_head(n))
            expect_k = ((1 << (n + 1)) + (-1) ** n) // 3 - 1
            if lengths[n] != expect_k:
                return False, f"length mismatch at n={n}"
            if mat.p != truncated_partial("H", n):
                return False, f"p != H_n at n={n}"
            if mat.q != truncated_partial("H", n - 1).substitute_power(2):
                return False, f"q != H_(n-1)(x^2) at n={n}"
        return True, f"n <= {max_level}"
    if check == "fg-mahler":
        res_f, res_g = folding.rho_word_equations(order)
        ok = res_f.is_zero() and res_g.is_zero()
        return ok, f"order {order}"
    if check == "ij-system":
        report = folding.ij_system_check(order)
        return report.ok, f"order {order}"
    if check == "e-words":
        for n in range(0, 9):
            w = folding.iterate_fold("rho", n)
            e_next = folding.signed_even_subword(folding.iterate_fold("rho", n + 1))
            if n % 2 == 0:
                if w != [-s for s in e_next]:
                    return False, f"w_n != -e_(n+1) at n={n}"
            else:
                if [1] + w != e_next:
                    return False, f"[1, w_n] != e_(n+1) at n={n}"
        return True, "n <= 8"
    raise ValueError(f"unknown fold check {check!r}")


def _random_spotchecks(seed: int) -> list[tuple[str, bool, str]]:
    """Randomized determinant/negation-law samples folded into verify --all."""
    rng = random.Random(seed)
    results = []
    for trial in range(3):
        word = contfrac.Word(
            tuple(rng.randint(-9, 9) or 1 for _ in range(rng.randint(1, 12))),
            rng.randint(-9, 9),
        )
        n = len(word.entries)  # index of the last symbol
        ok = contfrac.continuants(word).det() == (-1) ** (n + 1)
        results.append((f"determinant-law[{trial}]", ok, f"n={n}"))
    return results


def cmd_verify(args) -> int:
    order = args.order
    max_level = args.max_level
    entries = []
    failures = []
    if args.id and not args.all:
        ids = [args.id]
    else:
        ids = list(REGISTRY) + list(FOLD_CHECKS)
    for ident in ids:
        start = time.monotonic()
        if ident in REGISTRY:
            report = REGISTRY[ident].run(order)
            ok = report.holds
            detail = (
                f"order {report.checked}"
                if REGISTRY[ident].kind == "series"
                else f"levels <= {report.checked}"
            )
            if not ok:
                detail += f"; first failure at {report.first_failure}"
        else:
            ok, detail = _run_fold_check(ident, order, max_level)
        elapsed = (time.monotonic() - start) * 1000.0
        entries.append({"id": ident, "status": "pass" if ok else "FAIL",
                        "detail": detail, "ms": round(elapsed, 1)})
        if not ok:
            failures.append(ident)
    if args.all:
        for name, ok, detail in _random_spotchecks(args.seed):
            entries.append({"id": name, "status": "pass" if ok else "FAIL",
                            "detail": detail, "ms": 0.0})
            if not ok:
                failures.append(name)
    if args.json:
        print(json.dumps({"schema": SCHEMA, "entries": entries,
                          "failures": failures}, sort_keys=True))
    else:
        for e in entries:
            print(f"{e['status']:4}  {e['id']:<22} {e['detail']} ({e['ms']} ms)")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# cf subcommands
# ---------------------------------------------------------------------------


def _parse_point(text: str):
    if "/" in text and "j" not in text and "i" not in text:
        return Fraction(text)
    return mp.mpmathify(text)


def _parse_word_json(text: str) -> contfrac.Word:
    data = json.loads(text)
    entries = tuple(_parse_entry(e) for e in data.get("entries", []))
    head = data.get("head")
    return contfrac.Word(entries, _parse_entry(head) if head is not None else None)


def _parse_entry(e):
    if isinstance(e, str):
        try:
            return Fraction(e)
        except ValueError:
            return parse_poly(e)
    if isinstance(e, (int, float)):
        return Fraction(e)
    raise ValueError(f"bad word entry {e!r}")


def cmd_cf(args) -> int:
    if args.cf_cmd == "eval":
        word = _parse_word_json(args.word)
        point = _parse_point(args.at) if args.at else None
        with mp.workprec(args.bits):
            try:
                value = contfrac.eval_regular(word, point)
            except contfrac.DivisionByZero as exc:
                _emit({"undefined_at_depth": exc.depth}, args.json)
                return 1
        _emit({"value": str(value)}, args.json)
        return 0
    if args.cf_cmd == "euclid":
        num = parse_poly(args.num)
        den = parse_poly(args.den)
        word = contfrac.euclid_cf(RationalFunction(num, den))
        _emit({"head": str(word.head), "entries": [str(e) for e in word.entries]}, args.json)
        return 0
    if args.cf_cmd == "rho":
        if args.point and args.point.startswith("root:"):
            a = int(args.point[5:].split("/")[0])
            denom = int(args.point[5:].split("/")[1])
            n = denom.bit_length() - 1
            if 1 << n != denom:
                print("root denominator must be a power of two", file=sys.stderr)
                return 2
            value = contfrac.rho_at_root_of_unity(n, a, args.bits)
            _emit({"value": str(value)}, args.json)
            return 0
        point = _parse_point(args.point) if args.point else None
        if point is None:
            print("cf rho requires --point", file=sys.stderr)
            return 2
        with mp.workprec(args.bits):
            value = contfrac.rho_value(args.n, point)
        _emit({"value": str(value)}, args.json)
        return 0
    raise AssertionError


# ---------------------------------------------------------------------------
# fold subcommands
# ---------------------------------------------------------------------------


def cmd_fold(args) -> int:
    if args.fold_cmd == "iterate":
        spec = folding.resolve_spec(args.spec)
        word = folding.iterate_fold(spec, args.n)
        payload = {"n": args.n, "length": len(word)}
        if args.continuants:
            mat = folding.fold_continuants(spec, args.n, folding.rho_head(args.n))
            payload["p"] = str(mat.p)
            payload["q"] = str(mat.q)
        elif args.specialize:
            sp = folding.specialize(folding.rho_head(args.n), word)
            payload["head"] = str(sp.head)
            payload["entries"] = [str(e) for e in sp.entries]
        else:
            payload["signs"] = "".join("+" if s > 0 else "-" for s in word)
        _emit(payload, args.json)
        return 0
    if args.fold_cmd == "check":
        ok, detail = _run_fold_check(args.id, args.order, args.n)
        _emit({"id": args.id, "status": "pass" if ok else "FAIL", "detail": detail}, args.json)
        return 0 if ok else 1
    if args.fold_cmd == "cohn":
        f = parse_poly(args.poly)
        mode = "cohn_sum" if args.mode == "sum" else "irregular"
        congruences = folding.cohn_congruence_test(f)
        report = folding.specializable_iterated(f, mode, args.nmax)
        payload = {
            "mode": mode,
            "congruences": congruences,
            "specializable": report.specializable,
            "checked_up_to": report.checked_up_to,
        }
        if report.fails_at is not None:
            payload["fails_at"] = report.fails_at
            payload["witness"] = str(report.witness)
        _emit(payload, args.json)
        return 0
    raise AssertionError


# ---------------------------------------------------------------------------
# curve subcommands
# ---------------------------------------------------------------------------


def cmd_curve(args) -> int:
    spec = folding.resolve_spec(args.spec)
    word = folding.iterate_fold(spec, args.n)
    path = curve.path_from_signs(word)
    if args.curve_cmd == "render":
        paths = [path]
        if args.overlay is not None:
            parts = args.overlay.split(":")
            transform = parts[2] if len(parts) > 2 else ""
            oword = folding.iterate_fold(folding.resolve_spec(parts[0]), int(parts[1]))
            if transform == "negrev":
                oword = [-s for s in reversed(oword)]
            elif transform:
                print(f"unknown overlay transform {transform!r}", file=sys.stderr)
                return 2
            paths.append(curve.path_from_signs(oword))
        svg = curve.export_svg(paths, palette=args.palette)
        if args.out == "-":
            sys.stdout.write(svg)
        else:
            with open(args.out, "w") as fh:
                fh.write(svg)
            print(f"wrote {args.out} ({path.edge_count} edges)")
        return 0
    if args.curve_cmd == "check":
        hit = curve.self_crossing(path)
        _emit(
            {
                "n": args.n,
                "edges": path.edge_count,
                "self_crossing": hit is not None,
                "first_repeated_edge": hit,
            },
            args.json,
        )
        return 1 if hit is not None else 0
    raise AssertionError


# ---------------------------------------------------------------------------
# hadamard subcommands
# ---------------------------------------------------------------------------


def _series_from_spec(text: str, order: int) -> TruncatedSeries:
    """Named series (F/G/H/I), 'pow2' (sum of q^(2^n)), or a rational expr."""
    if text in ("F", "G", "H", "I"):
        return expand_named(text, order)
    if text == "pow2":
        coeffs = [0] * (order + 1)
        j = 1
        while j <= order:
            coeffs[j] = 1
            j <<= 1
        return TruncatedSeries(coeffs, order)
    return TruncatedSeries.from_rational(parse_rational(text), order)


def cmd_hadamard(args) -> int:
    if args.hadamard_cmd == "product":
        a = _series_from_spec(args.a, args.order)
        b = _series_from_spec(args.b, args.order)
        _emit(_series_payload(f"({args.a})*({args.b})", hadamard.hadamard_product(a, b)), args.json)
        return 0
    if args.hadamard_cmd == "complete":
        result = hadamard.is_complete_hadamard_rational(parse_rational(args.rational))
        payload = {"complete": result.complete}
        if result.complete:
            payload["m"] = result.m
        else:
            payload["witness"] = str(result.witness)
        _emit(payload, args.json)
        return 0
    if args.hadamard_cmd == "kernel":
        seq = _series_from_spec(args.seq, args.length - 1).coeffs
        report = hadamard.k_kernel(seq, args.k, args.depth)
        _emit(
            {
                "k": report.k,
                "depth": report.depth,
                "distinct": report.distinct,
                "generators_estimate": report.generators_estimate,
            },
            args.json,
        )
        return 0
    if args.hadamard_cmd == "probe":
        f = _series_from_spec(args.f, args.order)
        g = parse_rational(args.g)
        result = hadamard.hadamard_mahler_probe(f, g, args.k, args.order, args.dmax, args.degmax)
        if result.found is None:
            _emit({"result": f"none_up_to(d_max={args.dmax}, deg_max={args.degmax})"}, args.json)
        else:
            _emit(
                {
                    "result": "recursion_found",
                    "k": result.found.k,
                    "coeffs": [str(c) for c in result.found.coeffs],
                },
                args.json,
            )
        return 0
    raise AssertionError


# ---------------------------------------------------------------------------
# fib subcommand
# ---------------------------------------------------------------------------


def cmd_fib(args) -> int:
    result = fiblucas.run_identity(args.id, args.terms, args.bits)
    delta = result.delta_mp(args.bits)
    payload = {
        "id": args.id,
        "terms": args.terms,
        "expected": str(result.expected),
        "computed": str(result.computed),
        "delta": mp.nstr(delta, 8),
    }
    _emit(payload, args.json)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mahlerfold")
    parser.add_argument("--json", action="store_true", help="emit JSON")
    parser.add_argument("--bits", type=int, default=256, help="big-float precision")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized spot checks")
    # the same flags are accepted after the subcommand; SUPPRESS keeps a
    # trailing flag from clobbering one given up front
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--bits", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=argparse.ArgumentParser)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("expand", help="expand a named series")
    p.add_argument("--name", required=True, choices=["F", "G", "H", "I"])
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_expand)

    p = add_parser("verify", help="run identity checks")
    p.add_argument("--id", help="one identity id")
    p.add_argument("--all", action="store_true", help="run the whole catalogue")
    p.add_argument("--order", type=int, default=256)
    p.add_argument("--max-level", type=int, default=10)
    p.set_defaults(func=cmd_verify)

    p = add_parser("cf", help="continued fraction tools")
    cf_sub = p.add_subparsers(dest="cf_cmd", required=True)
    q = cf_sub.add_parser("eval", parents=[common])
    q.add_argument("--word", required=True, help='JSON {"head": ..., "entries": [...]}')
    q.add_argument("--at", help="evaluation point")
    q.set_defaults(func=cmd_cf)
    q = cf_sub.add_parser("euclid", parents=[common])
    q.add_argument("--num", required=True)
    q.add_argument("--den", required=True)
    q.set_defaults(func=cmd_cf)
    q = cf_sub.add_parser("rho", parents=[common])
    q.add_argument("--n", type=int, default=16,
                   help="truncation level (exact rational points pay 2^n-size exponents)")
    q.add_argument("--point", help="complex value or root:a/2^n")
    q.set_defaults(func=cmd_cf)

    p = add_parser("fold", help="fold-recursion tools")
    fold_sub = p.add_subparsers(dest="fold_cmd", required=True)
    q = fold_sub.add_parser("iterate", parents=[common])
    q.add_argument("--spec", required=True, help="named spec or DSL text")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--signs", action="store_true")
    q.add_argument("--continuants", action="store_true")
    q.add_argument("--specialize", action="store_true")
    q.set_defaults(func=cmd_fold)
    q = fold_sub.add_parser("check", parents=[common])
    q.add_argument("--id", required=True, choices=list(FOLD_CHECKS))
    q.add_argument("--n", type=int, default=10)
    q.add_argument("--order", type=int, default=128)
    q.set_defaults(func=cmd_fold)
    q = fold_sub.add_parser("cohn", parents=[common])
    q.add_argument("--poly", required=True)
    q.add_argument("--mode", choices=["sum", "irregular"], default="irregular")
    q.add_argument("--nmax", type=int, default=5)
    q.set_defaults(func=cmd_fold)

    p = add_parser("curve", help="folding curves")
    curve_sub = p.add_subparsers(dest="curve_cmd", required=True)
    q = curve_sub.add_parser("render", parents=[common])
    q.add_argument("--spec", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--out", required=True, help="output file, or - for stdout")
    q.add_argument("--overlay", help="second spec:iteration to draw on top")
    q.add_argument("--palette", choices=list(curve.PALETTES), default="rainbow")
    q.set_defaults(func=cmd_curve)
    q = curve_sub.add_parser("check", parents=[common])
    q.add_argument("--spec", required=True)
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(func=cmd_curve)

    p = add_parser("hadamard", help="Hadamard product tools")
    h_sub = p.add_subparsers(dest="hadamard_cmd", required=True)
    q = h_sub.add_parser("product", parents=[common])
    q.add_argument("--a", required=True)
    q.add_argument("--b", required=True)
    q.add_argument("--order", type=int, default=64)
    q.set_defaults(func=cmd_hadamard)
    q = h_sub.add_parser("complete", parents=[common])
    q.add_argument("--rational", required=True)
    q.set_defaults(func=cmd_hadamard)
    q = h_sub.add_parser("kernel", parents=[common])
    q.add_argument("--seq", required=True)
    q.add_argument("--k", type=int, default=2)
    q.add_argument("--depth", type=int, default=4)
    q.add_argument("--length", type=int, default=1024)
    q.set_defaults(func=cmd_hadamard)
    q = h_sub.add_parser("probe", parents=[common])
    q.add_argument("--f", required=True)
    q.add_argument("--g", required=True)
    q.add_argument("--k", type=int, default=2)
    q.add_argument("--dmax", type=int, default=4)
    q.add_argument("--degmax", type=int, default=8)
    q.add_argument("--order", type=int, default=256)
    q.set_defaults(func=cmd_hadamard)

    p = add_parser("fib", help="Fibonacci-Lucas identities")
    fib_sub = p.add_subparsers(dest="fib_cmd", required=True)
    q = fib_sub.add_parser("identity", parents=[common])
    q.add_argument("--id", required=True, choices=list(fiblucas.IDENTITY_IDS))
    q.add_argument("--terms", type=int, default=10)
    q.set_defaults(func=cmd_fib)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
