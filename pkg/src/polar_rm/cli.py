"""``polar-rm`` command line: every analysis prints JSON on stdout.

Exit codes: 0 success, 2 bad arguments, 3 unsupported size, 4 invalid
pattern. Failures print a JSON diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import domination as dom
from .codec import zero_llr_propagate
from .exceptions import InvalidPatternError, UnsupportedSizeError
from .linksim import SimSpec, compare_patterns, simulate
from .puncture import canonical_patterns, psi_family, psi_family_size, widely_equivalent_patterns
from .ratematch import (
    PRESETS,
    RmConfig,
    allocate_channels,
    buffer_positions,
    load_reliability,
    untransmitted,
    zero_capacity_set,
)
from .shorten import fixed_set, generator_column_oracle

EXIT_OK, EXIT_ARGS, EXIT_SIZE, EXIT_PATTERN = 0, 2, 3, 4


class ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def _csv_ints(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _sorted(s) -> list[int]:
    return sorted(int(v) for v in s)


def _family(fam) -> list[list[int]]:
    return sorted(_sorted(a) for a in fam)


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


# --------------------------------------------------------------------------
# subcommands


def cmd_psi(args):
    fam = psi_family(args.j, args.n)
    member, size = psi_family_size(args.j, args.n)
    d, dbar = canonical_patterns(args.j, args.n)
    return {
        "n": args.n,
        "j": args.j,
        "member_size": member,
        "family_size": size,
        "canonical": [_sorted(d), _sorted(dbar)],
        "patterns": _family(fam),
    }


def cmd_incapable(args):
    prof = zero_llr_propagate(args.puncture, args.n)
    return {
        "n": args.n,
        "punctured": _sorted(prof.punctured),
        "incapable": _sorted(prof.incapable),
        "per_stage": [_sorted(s) for s in prof.per_stage],
    }


def cmd_equivalent(args):
    if args.family:
        obj = _load_json(args.family)
        n, target = int(obj["n"]), obj["target"]
    elif args.n is not None and args.incapable is not None:
        n, target = args.n, args.incapable
    else:
        raise ArgumentError("equivalent needs --n and --incapable, or --family")
    fam = widely_equivalent_patterns(target, n)
    return {"n": n, "target": _sorted(target), "patterns": _family(fam)}


def cmd_fixed(args):
    fx = fixed_set(args.shorten, args.n)
    return {
        "n": args.n,
        "shortened": _sorted(dom.check_index_set(args.shorten, args.n)),
        "fixed": _sorted(fx),
        "oracle_agrees": fx == generator_column_oracle(args.shorten, args.n),
    }


def cmd_posequences(args, out):
    if args.validate:
        obj = _load_json(args.validate)
        n, order = int(obj["n"]), obj["order"]
        bad = dom.first_violation(order, n)
        res = {"n": n, "order": order, "valid": bad is None}
        if bad is not None:
            res["violation"] = {
                "position_a": bad.position_a,
                "position_b": bad.position_b,
                "value_a": bad.value_a,
                "value_b": bad.value_b,
                "message": str(bad),
            }
        return res
    if args.n is None:
        raise ArgumentError("posequences needs --n")
    if args.count:
        return {"n": args.n, "count": dom.count_posequences(args.n)}
    # stream the list; n=4 has 1.68M entries
    it = dom.iter_posequences(args.n)
    out.write(f'{{"n": {args.n}, "posequences": [')
    total = 0
    for k, seq in enumerate(it):
        out.write(("," if k else "") + json.dumps(list(seq)))
        total += 1
    out.write(f'], "count": {total}}}\n')
    return None


def cmd_ratematch(args):
    if args.config:
        cfg = RmConfig.from_json(_load_json(args.config), Path(args.config).parent)
    else:
        if args.M is None or args.K is None:
            raise ArgumentError("ratematch needs --M and --K (or --config)")
        p = None
        if args.poseq:
            p = PRESETS[args.poseq] if args.poseq in PRESETS else dom.Posequence.load(args.poseq)
        rel = None
        if args.seq:
            _, rel = load_reliability(args.seq)
        cfg = RmConfig.build(
            args.M,
            args.K,
            args.mode,
            N=args.N,
            posequence=p,
            reliability=rel,
            rate_threshold=args.rate_threshold,
            design_erasure=args.design_erasure,
        )
    alloc = allocate_channels(cfg)
    return {
        "config": cfg.to_json(),
        "allocation": alloc.to_json(),
        "transmitted": [int(v) for v in buffer_positions(cfg)],
        "untransmitted": _sorted(untransmitted(cfg)),
        "zero_capacity": _sorted(zero_capacity_set(cfg)),
    }


def cmd_simulate(args):
    return simulate(SimSpec.load(args.spec))


def cmd_compare(args):
    return compare_patterns(SimSpec.load(args.spec_a), SimSpec.load(args.spec_b))


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="polar-rm", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("psi", help="minimal puncturing patterns making u_j incapable")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)

    p = sub.add_parser("incapable", help="incapable set and per-stage zero profile")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--puncture", type=_csv_ints, required=True)

    p = sub.add_parser("equivalent", help="all patterns inducing an incapable set")
    p.add_argument("--n", type=int)
    p.add_argument("--incapable", type=_csv_ints)
    p.add_argument("--family", help="re-run from a previously emitted pattern family file")

    p = sub.add_parser("fixed", help="outputs fixed by a shortening pattern")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--shorten", type=_csv_ints, required=True)

    p = sub.add_parser("posequences", help="count, list or validate posequences")
    p.add_argument("--n", type=int)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--count", action="store_true")
    g.add_argument("--list", action="store_true")
    g.add_argument("--validate", metavar="FILE")

    p = sub.add_parser("ratematch", help="configuration, allocation and buffer report")
    p.add_argument("--M", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--mode", choices=["auto", "puncture", "shorten", "repeat"], default="auto")
    p.add_argument("--poseq", help=f"posequence file or preset ({', '.join(PRESETS)})")
    p.add_argument("--seq", help="reliability sequence file")
    p.add_argument("--rate-threshold", default="7/16")
    p.add_argument("--design-erasure", type=float, default=0.5)
    p.add_argument("--config", help="RmConfig JSON file")

    for name, hlp in (("simulate", "BLER simulation"), ("compare", "paired BLER comparison")):
        p = sub.add_parser(name, help=hlp)
        if name == "simulate":
            p.add_argument("--spec", required=True)
        else:
            p.add_argument("--spec-a", required=True)
            p.add_argument("--spec-b", required=True)
        p.add_argument("--format", choices=["json", "csv"], default="json")
    return ap


HANDLERS = {
    "psi": cmd_psi,
    "incapable": cmd_incapable,
    "equivalent": cmd_equivalent,
    "fixed": cmd_fixed,
    "ratematch": cmd_ratematch,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
}


def _fail(err, code: int, kind: str) -> int:
    json.dump({"error": kind, "message": str(err)}, sys.stderr)
    sys.stderr.write("\n")
    return code


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.command == "posequences":
            res = cmd_posequences(args, out)
        else:
            res = HANDLERS[args.command](args)
        if res is None:
            return EXIT_OK
        if hasattr(res, "to_csv") and args.format == "csv":
            out.write(res.to_csv())
        else:
            json.dump(res.to_json() if hasattr(res, "to_json") else res, out)
            out.write("\n")
    except ArgumentError as e:
        return _fail(e, EXIT_ARGS, "argument")
    except UnsupportedSizeError as e:
        return _fail(e, EXIT_SIZE, "unsupported_size")
    except InvalidPatternError as e:
        return _fail(e, EXIT_PATTERN, "invalid_pattern")
    except (ValueError, KeyError, OSError) as e:
        return _fail(e, EXIT_ARGS, "argument")
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
