"""Command line entry point: ``freemonad <command> ...``.

Exit codes: 0 success / true / verified, 1 property false or not split,
2 invalid input, 3 inconclusive verdict.
"""
from __future__ import annotations

import argparse
import sys

from . import formats
from .cohomology import h1_module, mu, split_check, table
from .errors import FormatError, InternalConsistencyError, MonadError
from .extension import extend, restrict_hyperplane, verify_stable_extension
from .field import FieldSpec
from .monad import BUILTINS, builtin, random_monad, validate
from .theorems import (
    lemma2_check,
    lemma3_check,
    theorem0_check,
    theorem7_bound,
    vanishing_chain_check,
)

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like LO:HI") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("window LO:HI needs LO <= HI")
    return lo, hi


def _field(text: str) -> FieldSpec:
    if text in ("QQ", "rational"):
        return FieldSpec.rational()
    try:
        return FieldSpec.prime(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(path, cap=None):
    m = formats.parse(path)
    v = validate(m, cap)
    if v.status == "invalid":
        raise _Fail(EXIT_INPUT, f"invalid monad: {v.reason}")
    if v.status == "inconclusive":
        raise _Fail(EXIT_INCONCLUSIVE, f"validity inconclusive: {v.reason}")
    return m


def _write(path, data: bytes, out):
    if path in (None, "-"):
        out.write(data.decode())
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def cmd_validate(args, out):
    m = formats.parse(args.file)
    v = validate(m, args.cap)
    print(str(v), file=out)
    for name, res in v.checks.items():
        print(f"  {name}: {res}", file=out)
    return {"valid": EXIT_OK, "invalid": EXIT_FALSE}.get(v.status, EXIT_INCONCLUSIVE)


def cmd_table(args, out):
    m = _load(args.file)
    t = table(m, args.window, jobs=args.jobs, self_check=args.self_check)
    out.write(formats.table_to_tsv(t) if args.tsv else formats.render_table(t))
    if args.plot:
        from .plotting import plot_table

        plot_table(t, args.plot)
    return EXIT_OK


def cmd_extend(args, out):
    m = _load(args.file)
    F, A = extend(m, args.m)
    _write(args.output, formats.serialize(F), out)
    print(f"added summand after restriction: {A}", file=sys.stderr)
    return EXIT_OK


def cmd_restrict(args, out):
    m = _load(args.file)
    _write(args.output, formats.serialize(restrict_hyperplane(m)), out)
    return EXIT_OK


def cmd_certify(args, out):
    m = _load(args.file)
    cert = verify_stable_extension(m, args.m, jobs=args.jobs)
    _write(args.output, formats.dumps_json(formats.certificate_to_json(cert)), out)
    if args.plot:
        from .plotting import plot_certificate

        plot_certificate(cert, args.plot)
    if args.output not in (None, "-"):
        print(f"{cert.verdict}: {args.m}-step extension, added summand {cert.summand}", file=out)
    return EXIT_OK if cert.verified else EXIT_FALSE


def cmd_bound(args, out):
    rep = theorem7_bound(_load(args.file))
    out.write(rep.summary())
    return EXIT_OK


def cmd_split(args, out):
    s = split_check(_load(args.file))
    print(str(s), file=out)
    return EXIT_OK if s.split else EXIT_FALSE


def cmd_mu(args, out):
    m = _load(args.file)
    mod = h1_module(m)
    print("H^1_* dims: " + (", ".join(f"{d}:{mod.dim(d)}" for d in mod.support) or "0"), file=out)
    print("mu: " + (", ".join(f"{d}:{v}" for d, v in mu(m).items()) or "none"), file=out)
    return EXIT_OK


def cmd_gen(args, out):
    if args.random:
        m = random_monad(args.seed, args.n, args.profile, args.field)
    elif args.builtin:
        m = builtin(args.builtin, args.n, args.field, twists=args.twists, k=args.k)
    else:
        raise _Fail(EXIT_INPUT, "gen needs --builtin NAME or --random")
    _write(args.output, formats.serialize(m), out)
    return EXIT_OK


def cmd_check_lemmas(args, out):
    m = _load(args.file)
    results = {}
    for i in range(1, m.n):
        results[f"lemma2[i={i}]"] = lemma2_check(m, i)
    results["lemma3"] = lemma3_check(m)
    if m.n >= 4:
        results[f"vanishing_chain[steps={args.steps}]"] = vanishing_chain_check(m, args.steps)
    results["theorem0"] = theorem0_check(m)
    for k, v in results.items():
        print(f"{k}\t{'true' if v else 'false'}", file=out)
    return EXIT_OK if all(results.values()) else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="freemonad", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the three monad axioms")
    s.add_argument("file")
    s.add_argument("--cap", type=int, default=None, help="degree cap for the epi/mono sweeps")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("table", help="print the cohomology table")
    s.add_argument("file")
    s.add_argument("--window", type=_window, default=None, help="LO:HI (use --window=-4:2 for negatives)")
    s.add_argument("--tsv", action="store_true")
    s.add_argument("--plot", metavar="PNG", default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--self-check", action="store_true", help="compute h^{n-1}, h^n both ways")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("extend", help="stable extension to P^{n+m}")
    s.add_argument("file")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("restrict", help="restrict to the hyperplane of the last coordinate")
    s.add_argument("file")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_restrict)

    s = sub.add_parser("certify", help="verify the restriction identity for an m-step extension")
    s.add_argument("file")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("-o", "--output", default=None)
    s.add_argument("--plot", metavar="PNG", default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("bound", help="effective Babylonian tower bound")
    s.add_argument("file")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("split", help="decide splitting into line bundles")
    s.add_argument("file")
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("mu", help="minimal generator degrees of H^1_*")
    s.add_argument("file")
    s.set_defaults(func=cmd_mu)

    s = sub.add_parser("gen", help="write a built-in or random monad")
    s.add_argument("--builtin", choices=BUILTINS)
    s.add_argument("--random", action="store_true")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--profile", default="small")
    s.add_argument("--twists", type=int, nargs="+", default=None, help="for linesum")
    s.add_argument("--k", type=int, default=2, help="exponent for powers")
    s.add_argument("--field", type=_field, default=FieldSpec.prime(), help="prime p or QQ")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("check-lemmas", help="run the lemma and theorem property checks")
    s.add_argument("file")
    s.add_argument("--steps", type=int, default=2)
    s.set_defaults(func=cmd_check_lemmas)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FormatError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (MonadError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalConsistencyError as exc:
        print(f"internal consistency fault: {exc}", file=sys.stderr)
        return EXIT_FALSE


if __name__ == "__main__":
    sys.exit(main())
