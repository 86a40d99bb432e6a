"""Command-line entry point: ``trlab <subcommand> ...``.

Exit codes: 0 success, 1 invariant violation or failed check, 2 invalid
input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import BudgetExceeded, InputError, TrlError


def _dump(obj, out: str | None = None) -> None:
    text = json.dumps(obj, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def _tensor_arg(args):
    from .census import parse_shape
    from .tensor import Tensor, from_lex_index

    if args.input:
        return Tensor.from_json(_load_json(args.input))
    if args.shape and args.id is not None:
        return from_lex_index(args.id, parse_shape(args.shape), args.q)
    raise InputError("give a tensor with --in FILE, or with --shape, --q and --id")


def _parse_fraction(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a number: {text!r}") from None


# -- subcommands ------------------------------------------------------------------------------

def cmd_arank(args):
    from .analytic import bias_exact

    T = _tensor_arg(args)
    b = bias_exact(T)
    _dump({"shape": list(T.shape), "q": T.p, "bias_num": b.numerator, "bias_log_p_den": b.exponent,
           "bias_den_log_q": b.exponent, "arank": b.arank, "arank_ceil": b.arank_ceil()}, args.out)


def cmd_bias(args):
    from .analytic import bias_char_oracle, bias_exact

    T = _tensor_arg(args)
    b = bias_exact(T)
    out = {"bias": str(b.fraction), "bias_num": b.numerator, "bias_den_log_q": b.exponent, "value": b.value}
    if args.oracle:
        z = bias_char_oracle(T)
        out["char_sum"] = [z.real, z.imag]
    _dump(out, args.out)


def cmd_prank(args):
    from .prank import prank_exact, prank_upper, save_certificate

    T = _tensor_arg(args)
    if args.upper:
        cert = prank_upper(T)
        result = {"prank_upper": len(cert), "exact": False}
    else:
        found = prank_exact(T, args.max_r)
        if found is None:
            _dump({"prank": None, "lower_bound": args.max_r + 1}, args.out)
            return 0
        result = {"prank": found[0], "exact": True}
        cert = found[1]
    result["certificate"] = cert.to_json()
    if args.certificate:
        save_certificate(cert, args.certificate)
    _dump(result, args.out)


def cmd_gowers(args):
    from .poly import Polynomial, gowers_norm

    P = Polynomial.from_json(_load_json(args.input))
    res = gowers_norm(P, args.k, via_bias=args.via_bias)
    out = {"k": res.k, "value": res.value, "value_2k": res.value_2k}
    if res.exact is not None:
        out["exact"] = [res.exact.numerator, res.exact.denominator]
    _dump(out, args.out)


def cmd_inverse_witness(args):
    from .poly import Polynomial, inverse_witness

    P = Polynomial.from_json(_load_json(args.p))
    raw = _load_json(args.qs)
    Qs = [Polynomial.from_json(o) for o in (raw["polys"] if isinstance(raw, dict) else raw)]
    alpha, corr = inverse_witness(P, Qs)
    _dump({"alpha": list(alpha), "correlation": corr, "bound": P.p ** -len(Qs)}, args.out)


def cmd_census(args):
    from .census import RunConfig, census_run, parse_shape, write_csv, write_jsonl

    try:
        i, n = (int(x) for x in args.shard.split("/"))
    except ValueError:
        raise InputError(f"--shard must look like i/N, got {args.shard!r}") from None
    cfg = RunConfig(parse_shape(args.shape), args.q, i, n, args.threads, args.out, args.format,
                    args.degeneracy, getattr(args, "budget", None))
    writer = write_jsonl if cfg.format == "jsonl" else write_csv
    if cfg.out:
        tmp = cfg.out + ".partial"
        with open(tmp, "w") as fh:
            count = writer(census_run(cfg), fh)
        os.replace(tmp, cfg.out)
        print(f"wrote {count} records to {cfg.out}", file=sys.stderr)
    else:
        writer(census_run(cfg), sys.stdout)


def cmd_summarize(args):
    from .census import census_summarize, read_records

    records = []
    for path in args.input:
        records.extend(read_records(path))
    records.sort(key=lambda r: r.id)
    s = census_summarize(records)
    if args.json:
        _dump(s.to_json(), args.out)
    else:
        print(s.table())


def cmd_verify(args):
    from .verify import verify_suite

    results = verify_suite(args.level)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_forcing_check(args):
    from .forcing import ForcingFamily, QMultiset, forcing_check

    Q = QMultiset.from_json(_load_json(args.q))
    F = ForcingFamily.from_json(_load_json(args.family))
    rep = forcing_check(Q, _parse_fraction(args.alpha), F)
    _dump({"passed": rep.passed, "near_annihilators": rep.n_annihilators, "family_span_dim": rep.span_dim,
           "annihilator_span_dim": rep.annihilator_span_dim, "first_failure": rep.first_failure}, args.out)
    return 0 if rep.passed else 1


def cmd_forcing_build(args):
    from .additive import load_multiset
    from .forcing import mainlemma_construct

    shape, p, B = load_multiset(args.bprime)
    if args.d is not None and args.d != len(shape):
        raise InputError(f"--d {args.d} does not match the multiset order {len(shape)}")
    c = mainlemma_construct(B, _parse_fraction(args.delta), p, shape, _parse_fraction(args.alpha))
    out = {"Q": c.Q.to_json(), "family": c.family.to_json(), "family_dims": {"".join(map(str, k)): v for k, v in
                                                                           c.family.dims().items()},
           "report": vars(c.report) if c.report else None, "notes": c.notes}
    _dump(json.loads(json.dumps(out, default=str)), args.out)


def cmd_system_find(args):
    from .additive import find_system, load_multiset, witnesses_to_json

    shape, p, B = load_multiset(args.bprime)
    S, W = find_system(B, _parse_fraction(args.delta), shape, p)
    obj = S.to_json()
    obj["witnesses"] = witnesses_to_json(W)
    _dump(obj, args.out)


def _load_system(path):
    from .additive import LSystem

    try:
        return LSystem.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad system JSON ({exc})") from None


def cmd_system_intersect(args):
    from .additive import lsystem_intersect

    _dump(lsystem_intersect(_load_system(args.a), _load_system(args.b)).to_json(), args.out)


def cmd_system_constrain(args):
    from .additive import system_constrain
    from .forcing import ForcingFamily

    Q = _load_system(args.system)
    obj = _load_json(args.constraints)
    obj.setdefault("shape", list(Q.shape))
    obj.setdefault("q", Q.p)
    cons = ForcingFamily.from_json({"q": obj["q"], "shape": obj["shape"],
                                    "spaces": obj.get("constraints", obj.get("spaces", []))}).spaces
    _dump(system_constrain(Q, cons).to_json(), args.out)


def cmd_constants(args):
    import mpmath

    from .forcing import degeneracy_bound_for_rank, paper_constants

    pc = paper_constants(args.d, _parse_fraction(args.delta), args.q, args.C, args.variant)
    out = pc.to_json()
    if args.c is not None and args.r is not None:
        out["theorem_bound"] = mpmath.nstr(pc.theorem_bound(args.c, args.r), 12)
    if args.r is not None and args.d >= 2:
        out["degeneracy_route_bound"] = mpmath.nstr(
            degeneracy_bound_for_rank(args.d, args.r, args.q, args.C, args.variant), 12)
    _dump(out, args.out)


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS, metavar="BITS",
                        help="enumeration budget as a power of two (overrides TRL_BUDGET_BITS)")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="trlab", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def tensor_cmd(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--in", dest="input", help="tensor JSON file")
        p.add_argument("--shape", help="shape like 2x2x2 (with --id)")
        p.add_argument("--q", type=int, default=2)
        p.add_argument("--id", type=int, help="lex index of the tensor")
        p.set_defaults(func=fn)
        return p

    tensor_cmd("arank", cmd_arank, "exact bias and analytic rank")
    tensor_cmd("bias", cmd_bias, "exact bias").add_argument("--oracle", action="store_true",
                                                            help="also print the character sum")
    p = tensor_cmd("prank", cmd_prank, "exact partition rank with certificate")
    p.add_argument("--max-r", type=int, default=4)
    p.add_argument("--certificate", help="save the certificate JSON here")
    p.add_argument("--upper", "--prank-upper", dest="upper", action="store_true", help="greedy upper bound only")

    p = sub.add_parser("gowers", parents=[common], help="Gowers U^k norm of omega^P")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--via-bias", action="store_true", help="use the derivative tensor (k = deg P)")
    p.set_defaults(func=cmd_gowers)

    p = sub.add_parser("inverse-witness", parents=[common], help="best alpha for P against Q_1..Q_r")
    p.add_argument("--p", required=True, help="polynomial JSON")
    p.add_argument("--qs", required=True, help="JSON list of polynomials")
    p.set_defaults(func=cmd_inverse_witness)

    p = sub.add_parser("census", parents=[common], help="exhaustive census over one shape")
    p.add_argument("--shape", required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--shard", default="0/1")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p.add_argument("--degeneracy", choices=["auto", "on", "off"], default="auto")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("summarize", parents=[common], help="group census records by bias")
    p.add_argument("--in", dest="input", nargs="+", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.set_defaults(func=cmd_verify)

    forcing = sub.add_parser("forcing", help="forcing multisets").add_subparsers(dest="action", required=True)
    p = forcing.add_parser("check", parents=[common])
    p.add_argument("--q", required=True, help="multiset JSON")
    p.add_argument("--alpha", default="7/8")
    p.add_argument("--family", required=True)
    p.set_defaults(func=cmd_forcing_check)
    p = forcing.add_parser("build", parents=[common])
    p.add_argument("--bprime", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--alpha", default="7/8")
    p.set_defaults(func=cmd_forcing_build)

    system = sub.add_parser("system", help="l-systems").add_subparsers(dest="action", required=True)
    p = system.add_parser("find", parents=[common])
    p.add_argument("--bprime", required=True)
    p.add_argument("--delta", required=True)
    p.set_defaults(func=cmd_system_find)
    p = system.add_parser("intersect", parents=[common])
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_system_intersect)
    p = system.add_parser("constrain", parents=[common])
    p.add_argument("--system", required=True)
    p.add_argument("--constraints", required=True)
    p.set_defaults(func=cmd_system_constrain)

    p = sub.add_parser("constants", parents=[common], help="explicit constants of the forcing construction")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--variant", choices=["log1", "log2"], default="log1")
    p.add_argument("--c", type=float, help="absolute constant for the partition-rank bound")
    p.add_argument("--r", type=int, help="analytic rank bound r")
    p.set_defaults(func=cmd_constants)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    budget = getattr(args, "budget", None)
    saved = os.environ.get("TRL_BUDGET_BITS")
    if budget is not None:
        if budget <= 0:
            print("error: --budget must be positive", file=sys.stderr)
            return 2
        os.environ["TRL_BUDGET_BITS"] = str(budget)
    try:
        return args.func(args) or 0
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return exc.exit_code
    except TrlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        # keep in-process callers (tests, notebooks) free of the override
        if budget is not None:
            if saved is None:
                os.environ.pop("TRL_BUDGET_BITS", None)
            else:
                os.environ["TRL_BUDGET_BITS"] = saved

if __name__ == "__main__":
    sys.exit(main())
