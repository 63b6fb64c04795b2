"""Command-line front end: load models and morphism files, run the
decision procedure, print convolution tables and motive accounting,
emit deterministic JSON reports.

Reports are byte-identical for identical inputs and version: keys are
sorted, enumeration orders are fixed, rationals appear as [num, den]
integer pairs, and wall-clock timing is only embedded on request.
"""

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction as Rat

from . import __version__
from .cmlat import (
    EndoQ,
    endo_to_jsonable,
    endo_zero,
    exponent,
    is_integral,
    model_from_dict,
    model_to_dict,
    proper_nonempty_subsets,
)
from .corr import build_grids, conv
from .decomp import (
    EXHAUSTIVE,
    INDECOMPOSABLE,
    PROOFTRACE,
    decide,
    probes_for,
    verdict_to_dict,
)
from .errors import HypothesisError, InvalidInput, MotivixError, UnsupportedQuery
from .exact import QuadInt
from .fermat import (
    build_c6_instance,
    c6_generator_morphisms,
    canonical_form,
    degree,
    pullback,
    rep_membership,
)
from .motcalc import (
    blowup_rows,
    ck_curve,
    ck_surface,
    cubic_rationality_ledger,
    hypersurface_ck,
    product_of_curves,
)


def worker_count():
    raw = os.environ.get("MOTIVIX_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InvalidInput("MOTIVIX_THREADS must be an integer, got %r" % raw)
    return max(1, n)


def parallel_map(fn, items):
    """Map fn across items, threading only when MOTIVIX_THREADS > 1.
    Result order always follows input order."""
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _pair(q):
    q = Rat(q)
    return [q.numerator, q.denominator]


def _digest(path):
    with open(path, "rb") as fh:
        data = fh.read()
    return {"file": str(path), "sha256": hashlib.sha256(data).hexdigest()}


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInput("%s is not valid JSON: %s" % (path, exc)) from None


def _load_model(path):
    return model_from_dict(_load_json(path))


def _report(args, inputs, results):
    return {
        "version": __version__,
        "command": args.command_echo,
        "inputs": inputs,
        "results": results,
    }


def _emit(report, args):
    text = json.dumps(report, indent=1, sort_keys=True)
    print(text)
    out = getattr(args, "json_out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _apply_trace(verdict_dict, level):
    if level == "full":
        return verdict_dict
    out = dict(verdict_dict)
    if level == "none":
        out.pop("steps", None)
        return out
    out["steps"] = [
        {k: v for k, v in step.items() if k != "query"}
        for step in out.get("steps", ())
    ]
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_decide(args):
    model = _load_model(args.model)
    mode = EXHAUSTIVE if args.mode == "exhaustive" else PROOFTRACE
    t0 = time.time()
    verdict = decide(model, mode)
    results = _apply_trace(verdict_to_dict(verdict), args.trace)
    if args.timing:
        results["timing_seconds"] = round(time.time() - t0, 3)
    code = 0 if verdict.status == INDECOMPOSABLE else 2
    return _report(args, [_digest(args.model)], results), code


def cmd_conv_table(args):
    model = _load_model(args.model)
    grids = build_grids(model)
    probes = probes_for(model)
    zero = endo_zero(model)
    kinds = (("theta", grids.theta), ("a1", grids.a1), ("a2", grids.a2))

    def row(probe):
        cells = {}
        for kind, grid in kinds:
            hits = []
            for i in range(model.g):
                for j in range(model.g):
                    val = conv(probe.endo, grid[i][j])
                    if val != zero:
                        hits.append([i + 1, j + 1, endo_to_jsonable(val)])
            cells[kind] = hits
        return {"probe": probe.name, "nonzero": cells}

    table = parallel_map(row, probes)
    results = {
        "g": model.g,
        "mode": model.mode.lower(),
        "probe_count": len(probes),
        "table": table,
    }
    return _report(args, [_digest(args.model)], results), 0


def cmd_motive(args):
    if args.shape == "curve":
        expr = ck_curve(args.g)
        results = {
            "shape": "curve",
            "g": args.g,
            "dims": list(expr.dims()),
            "total_dim": expr.total_dim(),
        }
    elif args.shape == "surface":
        expr = ck_surface(args.b2, args.rho, args.q)
        results = {
            "shape": "surface",
            "b2": args.b2,
            "rho": args.rho,
            "q": args.q,
            "dims": list(expr.dims()),
            "dim_m2_tr": args.b2 - args.rho,
            "dim_m2_alg": args.rho,
        }
    elif args.shape == "product":
        expr, rep = product_of_curves(args.g, elliptically_split=args.split)
        results = {"shape": "product", **rep}
    elif args.shape == "hypersurface":
        ring = hypersurface_ck(args.n, args.d)
        results = {
            "shape": "hypersurface",
            "n": args.n,
            "d": args.d,
            "off_middle_weights": [2 * j for j in ring.off_middle_indices()],
            "projector_coefficient": _pair(Rat(1, args.d)),
            "middle_dim": ring.middle_dim(),
            "prim_middle_dim": ring.prim_middle_dim(),
            "verified": True,
        }
    elif args.shape == "blowup":
        centers = ["point"] * args.points
        for g in _parse_int_list(args.curves):
            centers.append(("curve", g))
        for triple in _parse_triples(args.surfaces):
            centers.append(("surface",) + triple)
        rows = blowup_rows(centers, ambient_dim=4)
        results = {
            "shape": "blowup",
            "points": args.points,
            "curve_genera": _parse_int_list(args.curves),
            "surfaces": [list(t) for t in _parse_triples(args.surfaces)],
            "rows": rows,
        }
        if args.ledger:
            results["ledger"] = cubic_rationality_ledger(
                _parse_triples(args.surfaces),
                _parse_int_list(args.curves),
                args.points,
            )
    else:
        raise InvalidInput("unknown motive shape %r" % args.shape)
    return _report(args, [], results), 0


def _parse_int_list(text):
    if not text:
        return []
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise InvalidInput("expected a comma-separated integer list, got %r" % text)


def _parse_triples(text):
    if not text:
        return []
    out = []
    for chunk in text.split(";"):
        parts = _parse_int_list(chunk)
        if len(parts) != 3:
            raise InvalidInput("surface triple %r is not b2,rho,q" % chunk)
        out.append(tuple(parts))
    return out


def cmd_fermat(args):
    if args.what == "pullback":
        phis = c6_generator_morphisms()
        if args.phi not in (1, 2, 3):
            raise InvalidInput("--phi must be 1, 2 or 3")
        phi = phis[args.phi - 1]
        form = pullback(phi, canonical_form(phi.target))
        results = {
            "phi": args.phi,
            "coefficient": repr(form.poly),
            "display": repr(form),
            "class": rep_membership(form),
        }
    elif args.what == "degrees":
        phi1, phi2, phi3 = c6_generator_morphisms()
        d1, d2, d3 = degree(phi1), degree(phi2), degree(phi3)
        computed = [d1] * 6 + [d2] * 3 + [d3]
        declared = [6] * 6 + [24] * 3 + [4]
        results = {
            "computed": computed,
            "declared": declared,
            "match": computed == declared,
        }
    elif args.what == "instance":
        inst = build_c6_instance(check_degrees=not args.skip_degrees)
        results = dict(inst.report)
        if args.emit_model:
            payload = json.dumps(
                model_to_dict(inst.model), indent=1, sort_keys=True
            )
            with open(args.emit_model, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
            results["model_written"] = str(args.emit_model)
        if args.decide:
            verdict = decide(inst.model, PROOFTRACE)
            results["verdict"] = _apply_trace(
                verdict_to_dict(verdict), args.trace
            )
            code = 0 if verdict.status == INDECOMPOSABLE else 2
            return _report(args, [], results), code
    else:
        raise InvalidInput("unknown fermat subcommand %r" % args.what)
    return _report(args, [], results), 0


def _parse_subset(text, g):
    try:
        atoms = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise InvalidInput("subset must be comma-separated 1-based indices")
    if any(i < 1 or i > g for i in atoms):
        raise InvalidInput("subset indices must lie in 1..%d" % g)
    return frozenset(i - 1 for i in atoms)


def _parse_endo_entry(entry):
    if (
        isinstance(entry, (list, tuple))
        and len(entry) == 2
        and all(isinstance(c, int) for c in entry)
    ):
        return Rat(entry[0], entry[1]), Rat(0)
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        (an, ad), (bn, bd) = entry
        return Rat(an, ad), Rat(bn, bd)
    raise InvalidInput("bad endomorphism entry %r" % (entry,))


def _endo_from_jsonable(rows, model):
    if not isinstance(rows, list) or len(rows) != model.g:
        raise InvalidInput("endomorphism must be a %d-row matrix" % model.g)
    out = []
    for row in rows:
        if not isinstance(row, list) or len(row) != model.g:
            raise InvalidInput("endomorphism rows must have length %d" % model.g)
        out.append(
            [QuadInt(*(_parse_endo_entry(e) + (model.d,))) for e in row]
        )
    return EndoQ.from_rows(out, model.d)


def cmd_av(args):
    model = _load_model(args.model)
    if args.query == "exponents":
        if args.subset:
            subsets = [
                _parse_subset(chunk, model.g) for chunk in args.subset.split(";")
            ]
        else:
            if model.g > 12:
                raise InvalidInput(
                    "full exponent scan is capped at g = 12; pass --subset"
                )
            subsets = proper_nonempty_subsets(model.g)
        entries = []
        for K in subsets:
            item = {"subset": sorted(i + 1 for i in K)}
            try:
                item["exponent"] = exponent(model, K)
            except UnsupportedQuery as exc:
                item["exponent"] = None
                item["note"] = str(exc)
            entries.append(item)
        results = {"g": model.g, "mode": model.mode.lower(), "exponents": entries}
    elif args.query == "integrality":
        payload = _load_json(args.endo)
        x = _endo_from_jsonable(payload, model)
        results = {
            "g": model.g,
            "mode": model.mode.lower(),
            "endo": endo_to_jsonable(x),
            "integral": bool(is_integral(model, x)),
        }
        return _report(args, [_digest(args.model), _digest(args.endo)], results), 0
    else:
        raise InvalidInput("unknown av query %r" % args.query)
    return _report(args, [_digest(args.model)], results), 0


# ---------------------------------------------------------------------------
# parser wiring


def build_parser():
    parser = argparse.ArgumentParser(
        prog="motivix",
        description="Decide integral indecomposability of product-surface "
        "transcendental motives and audit the supporting computations.",
    )
    parser.add_argument("--json", dest="json_out", metavar="PATH",
                        help="also write the JSON report to PATH")
    parser.add_argument("--timing", action="store_true",
                        help="embed wall-clock timing (breaks byte-identity)")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("decide", help="run the decision procedure on a model file")
    p.add_argument("model")
    p.add_argument("--mode", choices=("exhaustive", "prooftrace"),
                   default="prooftrace")
    p.add_argument("--trace", choices=("none", "steps", "full"), default="steps")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("conv-table", help="print probe convolution tables")
    p.add_argument("model")
    p.set_defaults(func=cmd_conv_table)

    p = sub.add_parser("motive", help="dimension accounting for motives")
    shapes = p.add_subparsers(dest="shape", required=True)
    s = shapes.add_parser("curve")
    s.add_argument("--g", type=int, required=True)
    s = shapes.add_parser("surface")
    s.add_argument("--b2", type=int, required=True)
    s.add_argument("--rho", type=int, required=True)
    s.add_argument("--q", type=int, default=0)
    s = shapes.add_parser("product")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--split", action="store_true",
                   help="factors pairwise isogenous CM elliptic curves")
    s = shapes.add_parser("hypersurface")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s = shapes.add_parser("blowup")
    s.add_argument("--points", type=int, default=0)
    s.add_argument("--curves", default="", help="comma-separated genera")
    s.add_argument("--surfaces", default="",
                   help="semicolon-separated b2,rho,q triples")
    s.add_argument("--ledger", action="store_true",
                   help="append the rationality bookkeeping table")
    p.set_defaults(func=cmd_motive)

    p = sub.add_parser("fermat", help="the explicit genus-10 instance")
    what = p.add_subparsers(dest="what", required=True)
    s = what.add_parser("pullback")
    s.add_argument("--phi", type=int, required=True)
    s = what.add_parser("degrees")
    s = what.add_parser("instance")
    s.add_argument("--decide", action="store_true")
    s.add_argument("--skip-degrees", action="store_true")
    s.add_argument("--emit-model", metavar="PATH")
    s.add_argument("--trace", choices=("none", "steps", "full"), default="steps")
    p.set_defaults(func=cmd_fermat)

    p = sub.add_parser("av", help="exponent and integrality queries")
    queries = p.add_subparsers(dest="query", required=True)
    s = queries.add_parser("exponents")
    s.add_argument("model")
    s.add_argument("--subset", default="",
                   help="semicolon-separated, comma-joined 1-based subsets")
    s = queries.add_parser("integrality")
    s.add_argument("model")
    s.add_argument("--endo", required=True, metavar="PATH",
                   help="JSON matrix of [[an,ad],[bn,bd]] entries")
    p.set_defaults(func=cmd_av)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command_echo = list(argv) if argv is not None else sys.argv[1:]
    try:
        report, code = args.func(args)
    except HypothesisError as exc:
        _emit(
            {
                "version": __version__,
                "command": args.command_echo,
                "error": {"kind": type(exc).__name__, "message": str(exc)},
            },
            args,
        )
        return 3
    except (MotivixError, OSError) as exc:
        _emit(
            {
                "version": __version__,
                "command": args.command_echo,
                "error": {"kind": type(exc).__name__, "message": str(exc)},
            },
            args,
        )
        return 1
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
