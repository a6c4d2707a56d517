"""Command-line front end.

Every command reads a system file (``--system``) and prints either an
aligned plain-text table or, with ``--json``, one JSON document. Exit codes:
0 on success, 2 for invalid input or arguments outside an operation's
domain, 3 when a computational budget is exhausted.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import config
from . import io as eio
from .algebra import BlockIdeal
from .canonical import build_canonical, build_katsura, canonical_checks, compare
from .endo import dual_partial_map, kernel_ideal, kernel_union, topologically_free
from .errors import DomainError, ResourceError, ValidationError
from .matcalc import diagonal, n_k, star
from .norms import NormContext, diagonal_norm, diagonal_norms, norm_estimate
from .reduction import correspondence_cross_check, reduce, stacey_reduce

DIGITS = 12


def _num(x):
    """Round to 12 significant digits; integers and bools pass through."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x) or math.isnan(x):
            return str(x)
        return float(f"{x:.{DIGITS}g}") + 0.0
    if isinstance(x, BlockIdeal):
        return x.sorted()
    if isinstance(x, dict):
        return {str(k): _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    if isinstance(x, np.ndarray):
        return _num(x.tolist())
    return x


def _ideal_arg(text, algebra):
    text = text.strip()
    members = [int(t) for t in text.split(",") if t.strip()] if text else []
    for b in members:
        if not 0 <= b < algebra.num_blocks:
            raise ValidationError(f"--ideal: block index {b} out of range (B = {algebra.num_blocks})")
    return BlockIdeal(algebra, members)


def _system(args):
    if not args.system:
        raise ValidationError("--system is required for this command")
    endo, J = eio.load_system(args.system)
    if args.ideal is not None:
        J = _ideal_arg(args.ideal, endo.algebra)
    if J is None:
        J = BlockIdeal(endo.algebra, ())
    return endo, J


def _elements(args, endo, count=None):
    files = args.element or []
    if count is not None and len(files) != count:
        raise ValidationError(f"this command needs exactly {count} --element file(s), got {len(files)}")
    return [eio.load_element(f, endo) for f in files]


# -- commands -----------------------------------------------------------------------------

def cmd_info(args):
    endo, J = _system(args)
    A = endo.algebra
    K = kernel_ideal(endo)
    one = endo.image_unit_packed(1)
    ranks = [int(round(np.trace(one[A.block_slice(b)].reshape(n, n)).real)) for b, n in enumerate(A.dims)]
    return {
        "blocks": list(A.dims),
        "labels": [f"b{b + 1}" for b in range(A.num_blocks)],
        "multiplicity": endo.multiplicity.tolist(),
        "pad": [int(p) for p in endo.pad],
        "unital": bool(endo.unital),
        "kernel": K,
        "annihilator_of_kernel": K.complement(),
        "alpha_one_rank": ranks,
        "kernel_union": kernel_union(endo),
        "ideal_J": J,
        "J_orthogonal_to_kernel": not (J.members & K.members),
    }


def cmd_reduce(args):
    endo, J = _system(args)
    red = reduce(endo, J)
    out = {
        "chain": [c.sorted() for c in red.chain],
        "j_infinity": red.j_infinity,
        "i_infinity": red.i_infinity,
        "degenerate": red.degenerate,
        "checks": dict(red.checks, correspondence_recursion_matches=correspondence_cross_check(endo, J)),
    }
    if not red.degenerate:
        out["reduced_system"] = eio.system_to_dict(red.reduced_endo, red.reduced_ideal, DIGITS)
        out["kept_blocks"] = list(red.quotient.kept)
    return out


def cmd_stacey(args):
    endo, _ = _system(args)
    st = stacey_reduce(endo)
    out = {
        "chain": [c.sorted() for c in st.reduction.chain],
        "j_infinity": st.reduction.j_infinity,
        "kernel_union": st.kernel_union,
        "degenerate": st.degenerate,
        "reduced_injective": st.reduced_injective,
        "j_infinity_is_kernel_union": st.j_infinity_is_kernel_union,
    }
    if not st.degenerate:
        out["reduced_system"] = eio.system_to_dict(st.reduction.reduced_endo, None, DIGITS)
    return out


def cmd_canonical(args):
    endo, J = _system(args)
    can = build_canonical(endo, J)
    if can.degenerate:
        return {"degenerate": True, "report": {"degenerate": True}}
    out = eio.system_to_dict(can.endo, can.covariance_ideal, DIGITS)
    out["report"] = {
        "first": can.first,
        "second": can.second,
        "kernel": can.kernel,
        "reduced_first": not can.reduction.j_infinity.is_zero,
        "embed_source_of": list(can.embed.source_of),
        "checks": canonical_checks(can),
    }
    return out


def cmd_katsura(args):
    endo, J = _system(args)
    kp = build_katsura(endo, J)
    if kp.degenerate:
        return {"degenerate": True, "report": {"degenerate": True}}
    out = eio.system_to_dict(kp.endo, None, DIGITS)
    out["report"] = {
        "extra_blocks": kp.extra,
        "iota1": kp.iota1.to_dict(),
        "iota2": kp.iota2.to_dict(),
        "comparison": compare(kp),
    }
    return out


def _context(args):
    endo, J = _system(args)
    return endo, NormContext.build(endo, J)


def cmd_norm(args):
    endo, ctx = _context(args)
    (a,) = _elements(args, endo, 1)
    per = diagonal_norms(ctx, a)
    lower = max(per.values(), default=0.0)
    upper = float(sum(per.values()))
    out = {"per_diagonal": {str(k): v for k, v in per.items()}, "bounds": {"lower": lower, "upper": upper}}
    if args.k is not None:
        out["value"] = diagonal_norm(ctx, diagonal(a, args.k))
        out["exact"] = True
        out["diagonal"] = args.k
    elif len(per) <= 1:
        out["value"] = lower
        out["exact"] = True
    else:
        est = norm_estimate(ctx, a, args.kmax)
        out["value"] = est.sequence[-1]
        out["exact"] = False
        out["estimate_order"] = args.kmax
    return out


def cmd_seminorm(args):
    endo, ctx = _context(args)
    (a,) = _elements(args, endo, 1)
    per = diagonal_norms(ctx, a)
    value = float(sum(per.values()))
    return {"value": value, "per_diagonal": {str(k): v for k, v in per.items()},
            "bounds": {"lower": max(per.values(), default=0.0), "upper": value}}


def cmd_star(args):
    endo, _ = _system(args)
    els = _elements(args, endo)
    if len(els) < 2:
        raise ValidationError("star needs at least two --element files")
    acc = els[0]
    for b in els[1:]:
        acc = star(acc, b)
    return eio.element_to_dict(acc, DIGITS)


def cmd_nk(args):
    endo, _ = _system(args)
    (a,) = _elements(args, endo, 1)
    return eio.element_to_dict(n_k(a, 0 if args.k is None else args.k), DIGITS)


def cmd_estimate(args):
    endo, ctx = _context(args)
    (a,) = _elements(args, endo, 1)
    est = norm_estimate(ctx, a, args.kmax)
    return {"sequence": est.sequence, "bounds": {"lower": est.lower, "upper": est.upper},
            "entries": est.entries}


def cmd_check_rep(args):
    from . import reps
    endo, _ = _system(args)
    if args.rep:
        rep = eio.load_rep(args.rep, endo)
    elif args.truncation is not None:
        rep = reps.toeplitz_truncation(endo, args.truncation)
    else:
        raise ValidationError("check-rep needs --rep FILE or --truncation M")
    tol = config.tol()
    kr = reps.kernel_report(rep, tol)
    bridge = reps.correspondence_bridge(rep, tol)
    depth = rep.depth if rep.depth is not None else 3
    return {
        "dimension": rep.H,
        "windowed": not rep.exact,
        "residuals": reps.check_representation(rep),
        "iterated_commutators": reps.iterated_commutators(rep, max(depth, 1)),
        "kernel_report": {k: v for k, v in kr.items() if v is not None},
        "correspondence": {k: v for k, v in bridge.items()},
        "covariance_equivalences": reps.covariance_equivalences(rep, tol),
    }


def cmd_dual(args):
    endo, _ = _system(args)
    d = dual_partial_map(endo)
    return {
        "num_points": d.num_points,
        "partial_map": {str(k): v for k, v in sorted(d.partial_map.items())},
        "domain": d.domain,
        "range": d.range,
        "periodic_points": d.periodic_points(),
        "topologically_free": topologically_free(d),
    }


COMMANDS = {
    "info": cmd_info,
    "reduce": cmd_reduce,
    "stacey": cmd_stacey,
    "canonical": cmd_canonical,
    "katsura": cmd_katsura,
    "norm": cmd_norm,
    "seminorm": cmd_seminorm,
    "star": cmd_star,
    "nk": cmd_nk,
    "estimate": cmd_estimate,
    "check-rep": cmd_check_rep,
    "dual": cmd_dual,
}


# -- output -----------------------------------------------------------------------------

def _flatten(doc, prefix=""):
    rows = []
    if isinstance(doc, dict):
        for k in sorted(doc):
            rows.extend(_flatten(doc[k], f"{prefix}.{k}" if prefix else str(k)))
    else:
        rows.append((prefix, json.dumps(doc, sort_keys=True)))
    return rows


def render_table(doc):
    rows = _flatten(doc)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def build_parser():
    p = argparse.ArgumentParser(prog="endocross",
                                description="Crossed products of finite-dimensional C*-algebras by endomorphisms.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--system", help="system file (JSON)")
    p.add_argument("--element", action="append", help="element file (JSON); repeat for star")
    p.add_argument("--rep", help="representation file (JSON) for check-rep")
    p.add_argument("--truncation", type=int, help="Toeplitz truncation level for check-rep")
    p.add_argument("--ideal", help="comma-separated block indices of J (overrides the system file)")
    p.add_argument("--k", type=int, help="diagonal index for norm and nk")
    p.add_argument("--kmax", type=int, default=16, help="estimator order (default 16)")
    p.add_argument("--tol", type=float, help="numerical tolerance (default 1e-9)")
    p.add_argument("--json", action="store_true", help="emit a single JSON document")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.tol is not None:
            config.set_tol(args.tol)
        if args.truncation is not None and args.truncation < 0:
            raise ValidationError("--truncation must be nonnegative")
        doc = _num(COMMANDS[args.command](args))
    except (ValidationError, DomainError) as exc:
        _report_error(args, exc)
        return 2
    except ResourceError as exc:
        _report_error(args, exc)
        return 3
    except ValueError as exc:
        _report_error(args, exc)
        return 2
    if args.json:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(render_table(doc))
    return 0


def _report_error(args, exc):
    payload = {"error": type(exc).__name__, "message": str(exc)}
    pointer = getattr(exc, "pointer", None)
    if pointer is not None:
        payload["pointer"] = pointer
    partial = getattr(exc, "partial", None)
    if partial is not None and hasattr(partial, "sequence"):
        payload["partial"] = _num({"sequence": partial.sequence, "lower": partial.lower,
                                   "upper": partial.upper})
    elif partial is not None:
        payload["partial"] = _num(partial)
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    print(f"error: {exc}", file=sys.stderr)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
