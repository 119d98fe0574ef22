"""Command-line entry point.

Exit status: 0 on success, 1 on usage or input errors, 2 when one of the
checked inequalities or identities fails (its name goes to stderr).
Tables are CSV with a header row; ``--json`` switches them to JSON lines.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from rcexp import __version__
from rcexp.codes import (
    LinearCode,
    format_code,
    is_compatible_pair,
    parse_code,
    spectrum,
)
from rcexp.decoder import (
    build_representatives,
    exact_error_probability,
    permuted_failure_average,
    simulate_error_probability,
)
from rcexp.ensemble import (
    MonicPolynomial,
    average_spectrum,
    build_ensemble,
    census_bad_codes,
    companion_matrix,
    find_primitive_poly,
    q_power,
    verify_balanced,
)
from rcexp.errors import BoundViolation, PremiseViolation
from rcexp.exponent import AdditiveChannel, good_code_error_bound, inner_bound, random_coding_exponent
from rcexp.field import check_modulus
from rcexp.typeclasses import num_types

OUTPUT_ENV = "RCEXP_OUTPUT_DIR"
MANIFEST = "manifest.json"
DEFAULT_EPSILONS = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{float(x):.12g}"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _jsonable(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


class Out:
    def __init__(self, stream, as_json: bool):
        self.stream = stream
        self.as_json = as_json

    def table(self, header, rows):
        if self.as_json:
            for row in rows:
                self.record(dict(zip(header, row)))
            return
        writer = csv.writer(self.stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])

    def record(self, data: dict):
        self.stream.write(json.dumps({k: _jsonable(v) for k, v in data.items()}) + "\n")


def _floats(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of numbers: {text!r}") from exc


def _read_code(path: str) -> LinearCode:
    return parse_code(Path(path).read_text())


def _channel(text: str, q: int | None = None) -> AdditiveChannel:
    w = AdditiveChannel.from_spec(text)
    if q is not None and w.q != q:
        raise UsageError(f"channel has {w.q} symbols but q={q}")
    return w


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def cmd_ensemble_build(args, out: Out) -> int:
    q = check_modulus(args.q)
    if args.poly:
        poly = MonicPolynomial.parse(args.poly, q)
        if poly.degree != args.n:
            raise UsageError(f"--poly has degree {poly.degree}, expected n={args.n}")
    else:
        poly = find_primitive_poly(q, args.n)
    t = companion_matrix(poly)
    if args.transpose:
        t = t.T
    pairs = build_ensemble(t, args.k1, args.k2)
    outdir = Path(args.out or os.environ.get(OUTPUT_ENV) or "ensemble")
    outdir.mkdir(parents=True, exist_ok=True)
    width = len(str(len(pairs)))
    digests = {}
    for p in pairs:
        for tag, code in (("c1", p.c1), ("c2", p.c2)):
            path = outdir / f"{tag}_{p.index:0{width}d}.code"
            path.write_text(format_code(code))
            digests[path.name] = _sha256(path)
    manifest = {
        "command": "ensemble build",
        "argv": args.argv,
        "parameters": {
            "q": q,
            "n": args.n,
            "k1": args.k1,
            "k2": args.k2,
            "poly": poly.to_text(),
            "transpose": bool(args.transpose),
        },
        "version": __version__,
        "seed": None,
        "members": len(pairs),
        "digests": dict(sorted(digests.items())),
    }
    (outdir / MANIFEST).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    out.record({"out": str(outdir), "members": len(pairs), "poly": str(poly)})
    return 0


def _load_ensemble(directory: Path):
    manifest = json.loads((directory / MANIFEST).read_text())
    c1, c2 = [], []
    for name, digest in sorted(manifest["digests"].items()):
        path = directory / name
        if _sha256(path) != digest:
            raise UsageError(f"{path} does not match its manifest digest")
        (c1 if name.startswith("c1_") else c2).append(_read_code(str(path)))
    return manifest, c1, c2


def cmd_ensemble_verify(args, out: Out) -> int:
    manifest, c1, c2 = _load_ensemble(Path(args.dir))
    params = manifest["parameters"]
    q = params["q"]
    failures = []
    rows = []
    spectra1 = [spectrum(c) for c in c1]
    for tag, codes, k, spectra in (("c1", c1, params["k1"], spectra1), ("c2", c2, params["k2"], None)):
        res = verify_balanced(codes)
        expected = q**k - 1
        try:
            average_spectrum(codes, spectra)
            avg_ok = True
        except BoundViolation as exc:
            avg_ok = False
            failures.append(exc.name)
        if not res.balanced or res.value != expected or not res.footnote_holds:
            failures.append(f"balancedness of {tag}")
        rows.append([tag, res.value if res.balanced else "", expected,
                     bool(res.footnote_holds), avg_ok,
                     "" if res.witness is None else str(res.witness)])
    pairs_ok = all(is_compatible_pair(a, b) for a, b in zip(c1, c2))
    if not pairs_ok:
        failures.append("compatible pair condition")
    out.table(["family", "V", "expected_V", "footnote_identity", "average_spectrum", "witness"], rows)
    if not out.as_json:
        out.stream.write("\n")
    census_rows = []
    for eps in _floats(args.epsilon):
        try:
            res = census_bad_codes(c1, eps, spectra1)
            census_rows.append([eps, res.bad_count, res.bound_z])
        except BoundViolation as exc:
            failures.append(exc.name)
            census_rows.append([eps, "", ""])
    out.table(["epsilon", "bad_count", "z"], census_rows)
    if not out.as_json:
        out.stream.write("\n")
    out.table(["compatible_pairs"], [[pairs_ok]])
    return _fail(failures)


def _fail(failures) -> int:
    if failures:
        for name in failures:
            print(f"violated: {name}", file=sys.stderr)
        return 2
    return 0


def cmd_spectrum(args, out: Out) -> int:
    spec = spectrum(_read_code(args.code))
    out.table(["type", "count"], [[str(t), v] for t, v in spec.rows()])
    return 0


def cmd_exponent(args, out: Out) -> int:
    q = check_modulus(args.q)
    w = _channel(args.channel, q)
    rows = []
    for r in _floats(args.r):
        res = random_coding_exponent(w, r, args.resolution)
        value = res.value if not args.bits else res.value * _log2(q)
        rows.append([r, value, " ".join(fmt(float(p)) for p in res.minimizer)])
    out.table(["r", "Er", "minimizer"], rows)
    return 0


def _log2(q: int) -> float:
    import math

    return math.log2(q)


def cmd_bound(args, out: Out) -> int:
    code = _read_code(args.code)
    w = _channel(args.channel, code.q)
    n, q = code.n, code.q
    eps = Fraction(repr(float(args.epsilon)))
    big_a = q_power(q, eps * n)
    a_n = big_a * (num_types(n, q) - 1)
    spec = spectrum(code)
    res = good_code_error_bound(code, w, a_n, spec, args.resolution)
    inner = inner_bound(n, q, res.exponent, float(eps))
    error = exact_error_probability(build_representatives(code), w) if q**n <= 1 << 22 else None
    holds = error is None or not res.premise_holds or (error <= res.value and error <= inner)
    out.table(
        ["n", "k", "epsilon", "a_n", "Er", "bound", "inner_bound", "premise", "witness", "exact_error", "holds"],
        [[n, code.k, float(eps), a_n, res.exponent, res.value, inner, res.premise_holds,
          "" if res.witness is None else str(res.witness), "" if error is None else error, holds]],
    )
    return _fail([] if holds else ["error bound for good codes"])


def cmd_decode_sim(args, out: Out) -> int:
    code = _read_code(args.code)
    w = _channel(args.channel, code.q)
    report = simulate_error_probability(build_representatives(code), w, args.trials, args.seed)
    out.record(report.to_dict())
    return 0


def cmd_lemma_gen_check(args, out: Out) -> int:
    code = _read_code(args.code)
    w = _channel(args.channel, code.q)
    a_n = Fraction(args.a_n) if args.a_n is not None else None
    t = Fraction(args.T) if args.T is not None else None
    try:
        rep = permuted_failure_average(code, w, a_n=a_n, t_param=t, strict=False)
    except PremiseViolation as exc:
        out.record({"premise": False, "binding_type": str(exc.witness), "detail": str(exc)})
        return 0
    data = {"premise": True}
    data.update(rep.to_dict())
    out.record(data)
    failures = []
    if not rep.permutation_counts_ok:
        failures.append("permutation count identity")
    if not rep.balanced_perm_ok:
        failures.append("permutation balance bound")
    if not rep.holds:
        failures.append("permutation-averaged failure bound")
    return _fail(failures)


def cmd_pair_check(args, out: Out) -> int:
    ok = is_compatible_pair(_read_code(args.c1), _read_code(args.c2))
    if out.as_json:
        out.record({"compatible": ok})
    else:
        out.stream.write(f"compatible: {fmt(ok)}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON lines instead of CSV")

    parser = _Parser(prog="rcexp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    ens = sub.add_parser("ensemble", help="companion-matrix ensembles")
    ens_sub = ens.add_subparsers(dest="action", parser_class=_Parser)
    b = ens_sub.add_parser("build", parents=[common], help="build B_T and write code files")
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k1", type=int, required=True)
    b.add_argument("--k2", type=int, required=True)
    b.add_argument("--poly", help="ascending coefficients with the leading 1, e.g. 1,1,0,0,1")
    b.add_argument("--transpose", action="store_true", help="use the transposed companion matrix")
    b.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or ./ensemble)")
    b.set_defaults(func=cmd_ensemble_build)
    v = ens_sub.add_parser("verify", parents=[common], help="check balancedness, averages and the census")
    v.add_argument("dir")
    v.add_argument("--epsilon", default=DEFAULT_EPSILONS, help="comma-separated epsilons for the census")
    v.set_defaults(func=cmd_ensemble_verify)

    s = sub.add_parser("spectrum", parents=[common], help="type spectrum of a code")
    s.add_argument("--code", required=True)
    s.set_defaults(func=cmd_spectrum)

    e = sub.add_parser("exponent", parents=[common], help="random coding exponent table")
    e.add_argument("--q", type=int, required=True)
    e.add_argument("--channel", required=True, help="error law p0,...,p_{q-1}")
    e.add_argument("--r", required=True, help="comma-separated rates")
    e.add_argument("--resolution", type=int, default=32)
    e.add_argument("--bits", action="store_true", help="report Er in bits instead of base-q units")
    e.set_defaults(func=cmd_exponent)

    bd = sub.add_parser("bound", parents=[common], help="error bound for an epsilon-good code")
    bd.add_argument("--code", required=True)
    bd.add_argument("--channel", required=True)
    bd.add_argument("--epsilon", type=float, required=True)
    bd.add_argument("--resolution", type=int, default=32)
    bd.set_defaults(func=cmd_bound)

    d = sub.add_parser("decode-sim", parents=[common], help="Monte Carlo decoding error")
    d.add_argument("--code", required=True)
    d.add_argument("--channel", required=True)
    d.add_argument("--trials", type=int, default=100000)
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_decode_sim)

    g = sub.add_parser("lemma-gen-check", parents=[common], help="permutation-average brute force")
    g.add_argument("--code", required=True)
    g.add_argument("--channel", required=True)
    g.add_argument("--a-n", dest="a_n", help="premise constant (default: tight, at least 1)")
    g.add_argument("--T", help="threshold T (default 1 - k/n)")
    g.set_defaults(func=cmd_lemma_gen_check)

    pc = sub.add_parser("pair-check", parents=[common], help="check C2-dual inside C1")
    pc.add_argument("--c1", required=True)
    pc.add_argument("--c2", required=True)
    pc.set_defaults(func=cmd_pair_check)
    return parser


def run(argv=None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return 1
    args.argv = argv
    out = Out(stdout, getattr(args, "json", False))
    try:
        return args.func(args, out)
    except BoundViolation as exc:
        print(f"violated: {exc.name}: {exc.detail}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, OSError, KeyError) as exc:
        print(f"rcexp: error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
