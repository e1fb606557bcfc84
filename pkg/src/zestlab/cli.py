"""Command line interface.

Exit status: 0 success (or equivalence found), 2 verified inequivalence
(distinguishable), 1 any error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .braids import ColoredBraid, InvariantTensor, link_invariant, parse_braid_word
from .cache import Cache
from .cyclotomic import CycNum
from .experiment import (ExperimentOptions, _b_evaluator, cached_invariant, label_data,
                         run_isotope_experiment)
from .group import GroupSpec, make_group
from .relabel import Constraint, KeyTable, LabelData, find_relabelings
from .twisted_double import ModularData, enumerate_simples, modular_data
from .zesting import ZestError, retag_as_twist, zest_modular_data, zest_params

EXIT_OK, EXIT_ERROR, EXIT_DISTINGUISHABLE = 0, 1, 2

EPILOG = """exit status:
  0  success; for compare/experiment, an equivalence witness was found
  2  verified inequivalence (search exhausted without a witness)
  1  error (bad flags, unreadable files, schema mismatch, failed checks)

environment:
  ZESTLAB_CACHE  directory for cached invariant tensors (default .zestlab-cache/)
"""


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _emit(obj, out: str | None) -> None:
    text = _dump(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc


def _group(args) -> GroupSpec:
    return make_group(args.p, args.q, args.n)


def _float_modular_json(md: ModularData) -> dict:
    S = md.S_complex()
    T = md.T_complex()
    return {
        "group": md.group.to_json(), "u": int(md.u), "conductor": md.conductor, "backend": "float",
        "simples": md.simple_json(), "T_exponents": [int(e) for e in md.T_exp],
        "S_float": [[[float(z.real), float(z.imag)] for z in row] for row in S],
        "T_float": [[float(z.real), float(z.imag)] for z in T],
    }


# -- subcommands -----------------------------------------------------------

def cmd_modular_data(args) -> int:
    md = modular_data(_group(args), args.u)
    _emit(_float_modular_json(md) if args.float else md.to_json(), args.out)
    return EXIT_OK


def _parse_s(text: str, N: int):
    """``s`` as a CycNum JSON object, or ``K/D`` meaning exp(2 pi i K / D)."""
    text = text.strip()
    if text.startswith("{"):
        return CycNum.from_json(json.loads(text))
    num, _, den = text.partition("/")
    k, d = int(num), int(den or 1)
    if (k * N * N) % d:
        raise ZestError("s must be an N^2-th root of unity")
    return k * N * N // d


def cmd_zest(args) -> int:
    md = ModularData.from_json(_read_json(args.input))
    N = md.group.p
    if args.u is not None:
        params = zest_params(N, u=args.u)
    else:
        if args.b is None:
            raise ZestError("give --u, or --a and --b")
        s = _parse_s(args.s, N) if args.s else None
        params = zest_params(N, a=args.a, b=args.b, s=s)
    out = zest_modular_data(md, params)
    if params.is_canonical():
        try:
            _emit(retag_as_twist(out, md.u + params.b).to_json(), args.out)
            return EXIT_OK
        except ZestError:
            pass
    data = out.to_json()
    data["zesting"] = params.to_json()
    _emit(data, args.out)
    return EXIT_OK


def _parse_colors(text: str, simples) -> list:
    out = []
    for tok in text.replace(",", " ").split():
        i = int(tok)
        if not 0 <= i < len(simples):
            raise ValueError(f"color index {i} out of range 0..{len(simples) - 1}")
        out.append(simples[i])
    return out


def cmd_link(args) -> int:
    G = _group(args)
    simples = enumerate_simples(G, args.u)
    colors = _parse_colors(args.colors, simples)
    b = ColoredBraid(len(colors), tuple(parse_braid_word(args.braid)), tuple(colors),
                     "zero-framed" if args.zero_framed else "as-drawn")
    value = link_invariant(b, G, args.u)
    _emit({"group": G.to_json(), "u": args.u % G.p, "braid": args.braid, "colors": [c.index for c in colors],
           "framing": b.framing, "value": value.to_json()}, args.out)
    return EXIT_OK


def cmd_invariants(args) -> int:
    G = _group(args)
    cache = None if args.no_cache else Cache()
    tensor = cached_invariant(G, args.u, args.which, cache, args.sample, args.seed, args.workers)
    _emit(tensor.to_json(), args.out)
    return EXIT_OK


def _float_label_data(raw: dict) -> LabelData:
    S = np.array([[complex(*z) for z in row] for row in raw["S_float"]])
    data = LabelData(len(S))
    data.add(Constraint("S", 2, S, exact=False))
    data.add(Constraint("T", 1, np.array(raw["T_exponents"], dtype=np.int64)))
    data.add(Constraint("qdim", 1, np.array([x["qdim"] for x in raw["simples"]])))
    data.add(Constraint("grading", 1, np.array([x["grading"] for x in raw["simples"]])))
    return data


def cmd_compare(args) -> int:
    left_raw, right_raw = _read_json(args.left), _read_json(args.right)
    exact = "S" in left_raw and "S" in right_raw
    table = KeyTable()
    constraints = ["S", "T"]
    if exact:
        mdl, mdr = ModularData.from_json(left_raw), ModularData.from_json(right_raw)
        wl = wr = bl = None
        b_eval = None
        if args.with_w:
            wl = InvariantTensor.from_json(_read_json(args.with_w[0]))
            wr = InvariantTensor.from_json(_read_json(args.with_w[1])) if len(args.with_w) > 1 else \
                cached_invariant(mdr.group, mdr.u, "w", Cache())
            constraints.append("W")
        if args.with_b:
            bl = InvariantTensor.from_json(_read_json(args.with_b))
            b_eval = _b_evaluator(mdr.group, mdr.u, table)
            constraints.append("B")
        left = label_data(mdl, table, W=wl, B=bl)
        right = label_data(mdr, table, W=wr, b_evaluator=b_eval)
    else:
        if args.with_w or args.with_b:
            raise ValueError("invariant constraints need exact modular data files")
        left, right = _float_label_data(left_raw), _float_label_data(right_raw)
    if args.constraints:
        constraints = [c.strip() for c in args.constraints.split(",") if c.strip()]
    result = find_relabelings(left, right, constraints, args.limit)
    _emit(result.to_json(), args.out)
    if result.equivalent:
        return EXIT_OK
    return EXIT_DISTINGUISHABLE if result.exhausted else EXIT_ERROR


def cmd_experiment(args) -> int:
    opts = ExperimentOptions(sample=args.sample, seed=args.seed, workers=args.workers, limit=args.limit,
                             timing=args.timing, cache=None if args.no_cache else Cache())
    report = run_isotope_experiment(args.p, args.q, opts, args.n)
    _emit(report.to_json(), args.out)
    if not all(report.zesting.values()):
        return EXIT_ERROR
    return EXIT_DISTINGUISHABLE if report.distinguishable_pairs("W_T") else EXIT_OK


# -- parser ----------------------------------------------------------------

def _add_group(p: argparse.ArgumentParser, with_u: bool = True) -> None:
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, default=None, help="twisting exponent (default: smallest valid)")
    if with_u:
        p.add_argument("--u", type=int, required=True, help="cocycle twist u mod p")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zestlab", description=__doc__.splitlines()[0] if __doc__ else None,
                                     epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("modular-data", help="S and T of the twisted double", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_group(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact cyclotomic entries (default)")
    mode.add_argument("--float", action="store_true", help="complex floats only")
    p.add_argument("--out")
    p.set_defaults(func=cmd_modular_data)

    p = sub.add_parser("zest", help="apply a cyclic zesting to a modular data file", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--u", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--s", help="CycNum JSON or K/D for exp(2 pi i K/D); default exp(-2 pi i b/N^2)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_zest)

    p = sub.add_parser("link", help="colored braid-closure invariant", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--braid", required=True, help="e.g. 's1^-2 s2 s1^-1 s2'")
    p.add_argument("--colors", required=True, help="simple indices per strand, comma separated")
    _add_group(p)
    p.add_argument("--zero-framed", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("invariants", help="W matrix, B sample or 5_2 vector", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--which", choices=["w", "b", "five2"], required=True)
    _add_group(p)
    p.add_argument("--sample", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("compare", help="search for a relabeling between two modular data files", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--with-w", nargs="+", metavar="FILE",
                   help="W tensor for the left side (and optionally the right; else computed)")
    p.add_argument("--with-b", metavar="FILE", help="B sample for the left side; right side evaluated on demand")
    p.add_argument("--constraints", help="override, e.g. 'W,T'")
    p.add_argument("--limit", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("experiment", help="full isotope experiment for (p, q)", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_group(p, with_u=False)
    p.add_argument("--sample", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--limit", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte-determinism)")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (ValueError, KeyError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"zestlab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
