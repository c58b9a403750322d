"""Command line: fingerprint, sketch build|query|fp-rate, bench, tally,
irreducible.

Exit codes: 0 success (query: accept), 1 query reject, 2 I/O error,
3 precondition violation (bad arguments, out-of-range towers), 4 entry
budget refusal, 5 acceptance-bound violation in a rule-sized fp-rate
run.  Every report embeds the resolved seed, k, the modulus hex, the
tool version, and whether the field came from the sizing rule.  File
outputs are written atomically (temp file, then rename).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from ._version import __version__
from . import bench as bench_mod
from . import kernels
from . import sketch as sketch_mod
from . import tally as tally_mod
from .field import make_field
from .gf2poly import IRREDUCIBLE_DEGREE_CAP, find_irreducible
from .seeds import derive_seed
from .stream import bits_from_bytes, encode_fingerprint, fingerprint
from .tally import GrowthFn, OutOfRangeError

__all__ = ["main"]

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_IO = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4
EXIT_BOUND = 5


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    return int.from_bytes(os.urandom(8), "big")


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".streamfp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_input_bits(args) -> tuple[int, str]:
    """Resolve (n, bits) from --bits / --input / stdin per --format."""
    sources = [s for s in (args.bits, args.input) if s is not None]
    if len(sources) != 1:
        raise ValueError("provide exactly one of --bits or --input")
    raw = False
    if args.bits is not None:
        bits = args.bits
        if bits.strip("01"):
            raise ValueError("--bits must consist of '0' and '1' only")
    else:
        if args.input == "-":
            if args.n is None:
                raise ValueError("streaming from stdin requires --n")
            data = sys.stdin.buffer.read()
        else:
            with open(args.input, "rb") as fh:
                data = fh.read()
        raw = args.format == "raw"
        if raw:
            bits = bits_from_bytes(data)
        else:
            bits = "".join(data.decode("ascii").split())
            if bits.strip("01"):
                raise ValueError("bits input must consist of '0' and '1' only")
    if args.n is None:
        n = len(bits)
    elif raw:
        # Raw bytes pad to a multiple of 8; --n selects the leading prefix.
        if args.n > len(bits):
            raise ValueError(f"--n {args.n} exceeds the {len(bits)} bits available")
        bits = bits[: args.n]
        n = args.n
    else:
        if args.n != len(bits):
            raise ValueError(f"--n {args.n} does not match the {len(bits)} input bits")
        n = args.n
    if n < 1:
        raise ValueError("input must hold at least one bit")
    return n, bits


def _language_from_args(args, seed: int) -> sketch_mod.SparseLanguageSpec:
    if args.language_file:
        with open(args.language_file) as fh:
            desc = json.load(fh)
        kind = desc["kind"]
        params = desc.get("params", {})
        return sketch_mod.make_language(
            kind,
            seed=params.get("seed"),
            max_ones=params.get("max_ones"),
            member=params.get("member"),
        )
    kind = args.language
    if kind == "seeded-random":
        lang_seed = args.language_seed
        if lang_seed is None:
            lang_seed = derive_seed(seed, "language")
        return sketch_mod.make_language(kind, seed=lang_seed)
    if kind == "low-weight":
        if args.max_ones is None:
            raise ValueError("low-weight language needs --max-ones")
        return sketch_mod.make_language(kind, max_ones=args.max_ones)
    if kind == "singleton":
        if not args.member:
            raise ValueError("singleton language needs --member")
        return sketch_mod.make_language(kind, member=args.member)
    if kind == "empty":
        return sketch_mod.make_language(kind)
    raise ValueError(f"unknown language {kind!r}")


def _ctx_override(args):
    if getattr(args, "k", None) is None:
        return None
    return make_field(args.k)


def _growth_from_arg(text: str) -> GrowthFn:
    return GrowthFn.from_json(json.loads(text))


# ------------------------------------------------------------- commands

def _cmd_fingerprint(args) -> int:
    seed = _resolve_seed(args.seed)
    n, bits = _read_input_bits(args)
    ctx = _ctx_override(args)
    rule_sized = ctx is None
    f_of_n = sketch_mod.DensityFn.parse(args.f).eval(n) if ctx is None else None
    fp = fingerprint(n, bits, seed=seed, f_of_n=f_of_n, ctx=ctx)
    record = fp.to_json_dict()
    record["rule_sized"] = rule_sized
    record["tool"] = {"name": "streamfp", "version": __version__}
    if args.tuple_bits:
        record["tuple_bits"] = encode_fingerprint(fp)
    _write_output(_dump_json(record), args.output)
    return EXIT_OK


def _cmd_sketch_build(args) -> int:
    seed = _resolve_seed(args.seed)
    spec = _language_from_args(args, seed)
    sk = sketch_mod.build_sketch(
        spec,
        args.n,
        ctx=_ctx_override(args),
        entry_budget=args.entry_budget,
        source_seed=seed,
    )
    sketch_mod.save_sketch(sk, args.output)
    summary = {
        "kind": "sketch-build",
        "tool": {"name": "streamfp", "version": __version__},
        "seed": seed,
        "n": sk.n,
        "k": sk.ctx.k,
        "q": sk.ctx.q,
        "t_hex": sk.ctx.modulus.to_hex(),
        "rule_sized": sk.rule_sized,
        "language": spec.describe(),
        "member_count": sk.member_count,
        "entry_count": sk.size,
        "output": args.output,
    }
    sys.stdout.write(_dump_json(summary))
    return EXIT_OK


def _cmd_sketch_query(args) -> int:
    seed = _resolve_seed(args.seed)
    sk = sketch_mod.load_sketch(args.sketch)
    args.n = getattr(args, "n", None)
    n, bits = _read_input_bits(args)
    if n != sk.n:
        raise ValueError(f"input holds {n} bits but the sketch indexes n={sk.n}")
    accepted = sketch_mod.query_membership(sk, bits, seed)
    result = {
        "kind": "sketch-query",
        "tool": {"name": "streamfp", "version": __version__},
        "seed": seed,
        "n": sk.n,
        "k": sk.ctx.k,
        "t_hex": sk.ctx.modulus.to_hex(),
        "rule_sized": sk.rule_sized,
        "accepted": accepted,
    }
    sys.stdout.write(_dump_json(result))
    return EXIT_OK if accepted else EXIT_REJECT


def _fp_rate_exit(report: dict) -> int:
    if report["bound_checked"] and not report["bound_satisfied"]:
        return EXIT_BOUND
    return EXIT_OK


def _fp_rate_csv(report: dict) -> str:
    lines = ["index,accept_count,points,fraction"]
    pts = report["points_per_query"]
    for i, (c, f) in enumerate(
        zip(report["nonmember_accept_counts"], report["nonmember_fractions"])
    ):
        lines.append(f"{i},{c},{pts},{f}")
    return "\n".join(lines) + "\n"


def _cmd_sketch_fp_rate(args) -> int:
    seed = _resolve_seed(args.seed)
    spec = _language_from_args(args, seed)
    report = sketch_mod.fp_rate_experiment(
        spec,
        args.n,
        trials=args.trials,
        seed=seed,
        mode=args.mode,
        ctx=_ctx_override(args),
        a_samples=args.a_samples,
        entry_budget=args.entry_budget,
    )
    if args.report_format == "csv":
        _write_output(_fp_rate_csv(report), args.output)
    else:
        _write_output(_dump_json(report), args.output)
    return _fp_rate_exit(report)


def _cmd_bench(args) -> int:
    ks = tuple(int(x) for x in args.k.split(","))
    report = bench_mod.run_bench(
        ks=ks, mib=args.mib, seed=_resolve_seed(args.seed), backend=args.backend
    )
    _write_output(_dump_json(report), args.output)
    return EXIT_OK


def _cmd_tally(args) -> int:
    modes = [m for m in ("padding_stable", "validate", "construct") if getattr(args, m)]
    if len(modes) != 1:
        raise ValueError(
            "choose exactly one of --padding-stable, --validate, --construct"
        )
    mode = modes[0]
    cap = args.cap_bits
    if mode == "padding_stable":
        if args.n is None:
            raise ValueError("--padding-stable needs --n")
        g = GrowthFn(args.family, args.k, {"scale": args.scale})
        result = {
            "kind": "tally-padding-stable",
            "tool": {"name": "streamfp", "version": __version__},
            "gap": g.describe(),
            "n": args.n,
            "cap_bits": cap,
            "stable": tally_mod.is_padding_stable_at(g, args.n, cap),
        }
    elif mode == "validate":
        if not args.lengths:
            raise ValueError("--validate needs --lengths")
        lengths = tally_mod.as_tally(int(x) for x in args.lengths.split(","))
        d = _growth_from_arg(args.density)
        g = _growth_from_arg(args.gap)
        check = tally_mod.validate_tally(lengths, d, g, cap)
        result = {
            "kind": "tally-validate",
            "tool": {"name": "streamfp", "version": __version__},
            "lengths": tally_mod.tally_to_json(lengths),
            "density": d.describe(),
            "gap": g.describe(),
            "cap_bits": cap,
            "ok": check.ok,
            "violation": check.violation,
            "witness": list(check.witness) if check.witness else None,
        }
    else:
        d = _growth_from_arg(args.density)
        g = _growth_from_arg(args.gap)
        lengths = tally_mod.construct_lengths(d, g, args.count, cap)
        result = {
            "kind": "tally-construct",
            "tool": {"name": "streamfp", "version": __version__},
            "density": d.describe(),
            "gap": g.describe(),
            "count": args.count,
            "cap_bits": cap,
            "lengths": [str(x) for x in lengths],
        }
    _write_output(_dump_json(result), args.output)
    return EXIT_OK


def _cmd_irreducible(args) -> int:
    if not 1 <= args.k <= IRREDUCIBLE_DEGREE_CAP:
        raise ValueError(f"--k must be in 1..{IRREDUCIBLE_DEGREE_CAP}")
    sys.stdout.write(find_irreducible(args.k).to_hex() + "\n")
    return EXIT_OK


# --------------------------------------------------------------- parser

def _add_input_flags(p: argparse.ArgumentParser, with_n: bool = True) -> None:
    if with_n:
        p.add_argument("--n", type=int, default=None, help="input length in bits")
    p.add_argument("--bits", default=None, help="inline bit string input")
    p.add_argument("--input", default=None, help="input path, or - for stdin")
    p.add_argument(
        "--format",
        choices=("bits", "raw"),
        default="bits",
        help="file/stdin payload: '01' text or raw bytes (MSB of each byte first)",
    )


def _add_language_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--language",
        choices=("seeded-random", "low-weight", "singleton", "empty"),
        default="seeded-random",
    )
    p.add_argument("--language-seed", type=int, default=None,
                   help="seed of a seeded-random language (default: derived from --seed)")
    p.add_argument("--max-ones", type=int, default=None, help="low-weight bound")
    p.add_argument("--member", default=None, help="singleton member bit string")
    p.add_argument("--language-file", default=None,
                   help="JSON {kind, params} describing the language")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="streamfp",
        description="One-pass GF(2^k) fingerprints and sparse-set membership sketches",
    )
    ap.add_argument("--version", action="version", version=f"streamfp {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fingerprint", help="fingerprint a bit stream")
    _add_input_flags(p)
    p.add_argument("--f", default="linear",
                   help="density family for field sizing: linear, constant:c, power:p/q")
    p.add_argument("--k", type=int, default=None, help="field override (skips sizing rule)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tuple-bits", action="store_true",
                   help="include the self-delimiting tuple bit encoding")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_fingerprint)

    p = sub.add_parser("sketch", help="membership sketches")
    ssub = p.add_subparsers(dest="sketch_command", required=True)

    b = ssub.add_parser("build", help="build and save a sketch")
    _add_language_flags(b)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, default=None, help="field override (skips sizing rule)")
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--entry-budget", type=int, default=None)
    b.add_argument("--output", required=True, help="sketch file (.spsk)")
    b.set_defaults(func=_cmd_sketch_build)

    qp = ssub.add_parser("query", help="one random-point membership query")
    qp.add_argument("--sketch", required=True)
    _add_input_flags(qp)
    qp.add_argument("--seed", type=int, default=None)
    qp.set_defaults(func=_cmd_sketch_query)

    fr = ssub.add_parser("fp-rate", help="nonmember acceptance-rate experiment")
    _add_language_flags(fr)
    fr.add_argument("--n", type=int, required=True)
    fr.add_argument("--trials", type=int, required=True, help="number of nonmembers")
    fr.add_argument("--mode", choices=("exhaustive-a", "sampled-a"), default="exhaustive-a")
    fr.add_argument("--a-samples", type=int, default=512,
                    help="points per query in sampled-a mode")
    fr.add_argument("--k", type=int, default=None, help="field override (skips sizing rule)")
    fr.add_argument("--seed", type=int, default=None)
    fr.add_argument("--entry-budget", type=int, default=None)
    fr.add_argument("--report-format", choices=("json", "csv"), default="json")
    fr.add_argument("--output", default=None)
    fr.set_defaults(func=_cmd_sketch_fp_rate)

    p = sub.add_parser("bench", help="kernel throughput, comparing backends")
    p.add_argument("--k", default=",".join(str(k) for k in bench_mod.DEFAULT_KS),
                   help="comma-separated extension degrees")
    p.add_argument("--mib", type=int, default=16, help="stream size to fold, in MiB")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--backend", choices=("both", "numba", "numpy"), default="both")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("tally", help="tally-set density/gap checks")
    p.add_argument("--padding-stable", action="store_true", dest="padding_stable")
    p.add_argument("--validate", action="store_true")
    p.add_argument("--construct", action="store_true")
    p.add_argument("--family", choices=("iter-exp", "iter-log", "polynomial", "identity"),
                   default="iter-exp", help="gap family for --padding-stable")
    p.add_argument("--k", type=int, default=1, help="iteration depth for --padding-stable")
    p.add_argument("--scale", type=int, default=2,
                   help="inner scale: the checked gap is family(scale*n)")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--lengths", default=None, help="comma-separated member lengths")
    p.add_argument("--density", default=None, help='JSON {"family", "depth", "params"}')
    p.add_argument("--gap", default=None, help='JSON {"family", "depth", "params"}')
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--cap-bits", type=int, default=tally_mod.DEFAULT_CAP_BITS)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_tally)

    p = sub.add_parser("irreducible", help="deterministic irreducible modulus, as hex")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_irreducible)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except sketch_mod.EntryBudgetError as exc:
        print(f"streamfp: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"streamfp: {exc}", file=sys.stderr)
        return EXIT_IO
    except (OutOfRangeError, ValueError, ZeroDivisionError) as exc:
        print(f"streamfp: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
