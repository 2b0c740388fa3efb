"""Command-line entry point: ``commontorsion <command> ...``.

Every command prints one JSON run report.  Exit codes: 0 success,
2 unreadable input, 3 failed precondition or unsupported input,
4 verification primes disagree.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from importlib import resources
from pathlib import Path

from . import __version__
from .algebra.fields import NumberField, PrimeField
from .covers import (
    common_klein,
    common_torsion_x,
    descend_pair,
    ascend_pair,
    invariant_pair,
    p1_str,
    stable_common_torsion_x,
)
from .curves import Mobius, is_inf
from .errors import FieldExtensionRequired, PreconditionError, PrimeInconsistency, UnsupportedDomain
from .io import (
    DescriptionError,
    _Reader,
    pair_to_json,
    parse_curve,
    parse_elem,
    parse_mobius,
    parse_pair,
)

RUN_SCHEMA = "commontorsion.run/1"
SEED_ENV = "COMMONTORSION_SEED"
FIXTURES = ("thm13.pair", "sec3.pair", "record.curve", "poonen_example.curve")

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_INCONSISTENT = 0, 2, 3, 4


class _Failure(Exception):
    def __init__(self, code, status, message):
        super().__init__(message)
        self.code, self.status = code, status


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise _Failure(EXIT_PARSE, "parse-error", f"{SEED_ENV}={raw!r} is not an integer") from None


def read_input(name: str) -> str:
    """Contents of a file, or of a bundled fixture when no such file exists."""
    path = Path(name)
    if path.exists():
        return path.read_text(encoding="utf-8")
    if name in FIXTURES:
        return resources.files("commontorsion.fixtures").joinpath(name).read_text(encoding="utf-8")
    raise _Failure(EXIT_PARSE, "parse-error", f"no such file or bundled fixture: {name}")


def _load_pair(name):
    return parse_pair(read_input(name))


def _primes_of(evidence) -> list[str]:
    out = []
    for e in evidence:
        p = e["p"] if isinstance(e, dict) else e.p
        if p is not None:
            out.append(str(p))
    return out


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------


def cmd_invariants(args):
    pair = _load_pair(args.pair)
    inv = invariant_pair(pair)
    common = sorted(p1_str(v) for v in _common_branch(pair))
    try:
        klein = [[str(e) for e in _normal(g).entries] for g in common_klein(pair)]
    except FieldExtensionRequired:
        klein = None
    return {
        "invariant_pair": list(inv.as_tuple()),
        "common_branch_values": common,
        "common_klein_elements": klein,
    }, [], "consistent"


def _common_branch(pair):
    both = pair.c1.branch_set & pair.c2.branch_set
    if pair.c1.branch is None:
        return []
    return [b for b in pair.c1.branch if b in both]


def _normal(M: Mobius) -> Mobius:
    """Scale so the first nonzero entry is 1 (a canonical matrix for printing)."""
    lead = next(e for e in M.entries if e)
    return Mobius(*(e / lead for e in M.entries), M.K)


def cmd_intersect(args):
    pair = _load_pair(args.pair)
    if args.stability:
        rep, history, stable = stable_common_torsion_x(
            pair, args.max_order, cap_factor=2, primes=args.primes, seed=args.seed)
        out = rep.to_dict()
        top = history[-1][0]
        out["stability"] = {
            "history": [[n, c] for n, c in history], "no_growth": stable,
            "caveat": f"agreement with the unbounded common set is certified only for orders up to {top}",
        }
    else:
        rep = common_torsion_x(pair, args.max_order, primes=args.primes, seed=args.seed)
        out = rep.to_dict()
    return out, _primes_of(rep.evidence), rep.status


def _pick_involution(pair, given):
    if given is not None:
        return given
    K = pair.K
    neg = Mobius(-1, 0, 0, 1, K)
    commons = [g for g in common_klein(pair) if not g.is_identity()]
    if not commons:
        raise PreconditionError("the covers share no nontrivial Klein involution")
    if any(g == neg for g in commons):
        return neg
    return sorted(commons, key=lambda g: str(_normal(g).entries))[0]


def cmd_descend(args):
    pair = _load_pair(args.pair)
    given = None
    if args.involution:
        given = parse_mobius(json.loads(args.involution), pair.K, _Reader(args.involution), "$")
    steps, primes = [], set()
    for i in range(args.steps):
        alpha = _pick_involution(pair, given if i == 0 else None)
        d = descend_pair(pair, alpha)
        step = {
            "involution": [str(e) for e in _normal(alpha).entries],
            "normalising_map": [str(e) for e in d.mu.entries],
            "invariant_before": list(invariant_pair(pair).as_tuple()),
            "invariant_after": list(invariant_pair(d.pair).as_tuple()),
        }
        if args.max_order:
            up = common_torsion_x(pair, args.max_order, primes=args.primes, seed=args.seed)
            down = common_torsion_x(d.pair, args.max_order, primes=args.primes, seed=args.seed)
            primes.update(_primes_of(up.evidence) + _primes_of(down.evidence))
            step["bounded_sizes"] = [up.count, down.count]
            step["doubling_relation"] = up.count == 2 * down.count - 2
        steps.append(step)
        pair = d.pair
    out = {"steps": steps, "final_pair": pair_to_json(pair)}
    if args.max_order and len(steps) >= 1:
        sizes = [steps[0]["bounded_sizes"][0]] + [s["bounded_sizes"][1] for s in steps]
        out["size_chain"] = sizes
    if args.emit:
        Path(args.emit).write_text(json.dumps(pair_to_json(pair), indent=2) + "\n", encoding="utf-8")
    return out, sorted(primes), "consistent"


def cmd_ascend(args):
    pair = _load_pair(args.pair)
    choice = None
    if args.choice:
        raw = json.loads(args.choice)
        rd = _Reader(args.choice)
        choice = [parse_elem(v, pair.K, rd, f"$[{i}]", allow_inf=True) for i, v in enumerate(raw)]
    signs = tuple(-1 if s.strip() == "-" else 1 for s in args.signs.split(","))
    a = ascend_pair(pair, choice, signs)
    out = {
        "normalising_map": [str(e) for e in a.nu.entries],
        "invariant_before": list(invariant_pair(pair).as_tuple()),
        "invariant_after": list(invariant_pair(a.pair).as_tuple()),
        "pair": pair_to_json(a.pair),
    }
    if args.emit:
        Path(args.emit).write_text(json.dumps(pair_to_json(a.pair), indent=2) + "\n", encoding="utf-8")
    return out, [], "consistent"


def _certify(claimed, K, evidence):
    """Which claimed x-values lie in the packet at every verification prime."""
    import flint

    rows = []
    for x in claimed:
        ok = True
        for ev in evidence:
            if ev["p"] is None:
                ok = False
                break
            p = int(ev["p"])
            if is_inf(x):
                ok &= bool(ev["packet_over_infinity"])
                continue
            Fp = PrimeField(p, check=False)
            if isinstance(K, NumberField):
                xv = K.reduction(Fp, int(ev["generator_image"]))(x.v)
            else:
                xv = Fp(x.v).v
            f = flint.nmod_poly([int(c) for c in ev["packet_affine_poly"]], p)
            ok &= int(f(xv)) == 0
        rows.append({"x": str(x) if not is_inf(x) else "oo", "in_packet_at_all_primes": ok})
    return rows


def cmd_packet(args):
    from .genus2 import packet_report

    C, claimed = parse_curve(read_input(args.curve))
    if C.involution is None:
        raise _Failure(EXIT_PRECONDITION, "unsupported",
                       "no extra involution marked: the packet method needs a bielliptic curve")
    rep = packet_report(C, args.max_order, primes=args.primes, seed=args.seed)
    out = rep.to_dict()
    if claimed:
        out["claimed_x"] = _certify(claimed, C.K, rep.evidence)
    return out, _primes_of(rep.evidence), rep.status


def cmd_search(args):
    from .search import SearchConfig, common_factor_scan

    cfg = SearchConfig(family=args.family, m_max=args.m_max, n_max=args.n_max, primes=args.primes,
                       prime_bits=args.prime_bits, seed=args.seed, exact=args.exact)
    progress = None
    if args.verbose:
        progress = lambda i, n, p: print(f"prime {i}/{n} ({p}) done", file=sys.stderr)  # noqa: E731
    rep = common_factor_scan(cfg, progress)
    return rep.to_dict(), [str(p) for p in rep.primes], rep.status


# ----------------------------------------------------------------------------
# argument parsing and dispatch
# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="commontorsion",
        description="Common torsion x-coordinates of elliptic double covers and genus-2 packets.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-o", "--output", help="write the report here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, primes=3):
        p.add_argument("--primes", type=int, default=primes, help="verification primes")
        p.add_argument("--seed", type=int, default=None, help=f"prime seed (default ${SEED_ENV} or 0)")

    p = sub.add_parser("invariants", help="invariant pair of a cover pair")
    p.add_argument("pair")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("intersect", help="bounded common torsion x-coordinates")
    p.add_argument("pair")
    p.add_argument("--max-order", type=int, default=48)
    p.add_argument("--stability", action="store_true", help="also run at twice the bound")
    common(p)
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("descend", help="quotient a pair by a common 2-torsion translation")
    p.add_argument("pair")
    p.add_argument("--involution", help="JSON [a, b, c, d]; default x -> -x when common")
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--max-order", type=int, default=0, help="also report bounded sizes")
    p.add_argument("--emit", help="write the descended pair here")
    common(p)
    p.set_defaults(func=cmd_descend)

    p = sub.add_parser("ascend", help="inverse of descend")
    p.add_argument("pair")
    p.add_argument("--choice", help="JSON [zero, infinity]: common branch values to normalise")
    p.add_argument("--signs", default="+,+", help="square-root signs for the two origins")
    p.add_argument("--emit", help="write the ascended pair here")
    p.set_defaults(func=cmd_ascend)

    p = sub.add_parser("packet", help="bounded hyperelliptic torsion packet of a bielliptic curve")
    p.add_argument("curve")
    p.add_argument("--max-order", type=int, default=48)
    common(p)
    p.set_defaults(func=cmd_packet)

    p = sub.add_parser("search", help="collision search over a parametric family")
    p.add_argument("--family", default="s3")
    p.add_argument("--m-max", type=int, default=24)
    p.add_argument("--n-max", type=int, default=24)
    p.add_argument("--prime-bits", type=int, default=30)
    p.add_argument("--exact", action="store_true", help="CRT-lift common factors to QQ[t]")
    p.add_argument("--verbose", action="store_true")
    common(p, primes=2)
    p.set_defaults(func=cmd_search)
    return ap


def _echo(args) -> dict:
    skip = {"func", "output", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv=None) -> tuple[int, dict]:
    """Parse ``argv``, run the command, and return (exit code, report)."""
    return execute(build_parser().parse_args(argv))


def execute(args) -> tuple[int, dict]:
    t0 = time.perf_counter()
    report = {"schema": RUN_SCHEMA, "version": __version__, "command": None, "seed": None,
              "primes": [], "status": None, "result": None, "timings": {}}
    try:
        if hasattr(args, "seed") and args.seed is None:
            args.seed = default_seed()
        report["command"] = _echo(args)
        report["seed"] = getattr(args, "seed", None)
        result, primes, status = args.func(args)
        report.update(result=result, primes=primes, status=status)
        code = EXIT_OK
    except _Failure as e:
        report.update(status=e.status, error=str(e))
        code = e.code
    except (DescriptionError, json.JSONDecodeError) as e:
        report.update(status="parse-error", error=str(e))
        code = EXIT_PARSE
    except PrimeInconsistency as e:
        report.update(status="inconsistent", error=str(e),
                      values={k: {str(p): str(v) for p, v in d.items()} if isinstance(d, dict) else str(d)
                              for k, d in e.values.items()})
        code = EXIT_INCONSISTENT
    except (PreconditionError, UnsupportedDomain, FieldExtensionRequired) as e:
        status = "unsupported" if isinstance(e, (UnsupportedDomain, FieldExtensionRequired)) else "precondition-failed"
        report.update(status=status, error=str(e))
        code = EXIT_PRECONDITION
    report["timings"] = {"total_seconds": round(time.perf_counter() - t0, 3)}
    return code, report


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code, report = execute(args)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if code:
        print(f"commontorsion: {report.get('error', report['status'])}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
