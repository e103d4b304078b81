"""Batch command line: load a preset or .cqg file, run verification suites,
compute Haar tables, F-matrices, fusion tables and dual data; emit JSON plus
a short human table.

Exit codes: 0 all checks pass, 2 parse error, 3 degree/certificate error,
4 a check failed, 5 internal error.  Output is deterministic for a fixed
(input, config, seed).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DEGREE = 3
EXIT_CHECK = 4
EXIT_INTERNAL = 5


def _label_str(label):
    return f"{label[0]}#{label[1]}"


def build_parser():
    ap = argparse.ArgumentParser(
        prog="cqgkit",
        description="exact workbench for compact quantum groups")
    ap.add_argument("command", choices=[
        "verify-hopf", "haar", "f-matrix", "fuse", "decompose", "dual",
        "regrep-check", "normalize", "axioms-wor1", "galois", "cesaro"])
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="preset name (e.g. su_q_2, c_s3, a_u_2)")
    src.add_argument("--file", help="path to a .cqg document")
    ap.add_argument("--degree", type=int, default=4, help="degree bound")
    ap.add_argument("--depth", type=int, default=2, help="fusion depth")
    ap.add_argument("--q-samples", default="1/3,1/2,9/10",
                    help="comma separated rational sample points in (0,1]")
    ap.add_argument("--q0", default="1/2", help="evaluation point for numerics")
    ap.add_argument("--expr", help="expression for `normalize`")
    ap.add_argument("--corep", default=None,
                    help="named corep from a .cqg file (default: fundamental)")
    ap.add_argument("--json", dest="json_path", help="write the JSON report here")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for randomized property checks")
    ap.add_argument("--steps", type=int, default=10 ** 6,
                    help="iteration budget for `cesaro`")
    return ap


def _load(args):
    from . import presets
    if args.preset:
        p = presets.load_preset(args.preset)
        return p, p.fundamental
    from .dsl import parse
    with open(args.file) as fh:
        alg, coreps = parse(fh.read())
    p = presets.Preset(args.file, alg, next(iter(coreps.values())) if coreps else None)
    fund = coreps.get(args.corep) if args.corep else p.fundamental
    return p, fund


def _fractions(text):
    return [Fraction(part.strip()) for part in text.split(",") if part.strip()]


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except BrokenPipeError:
        raise
    except Exception as e:  # classified exits below
        from .dsl import DslError
        from .hopf import DegreeError
        from .haar import HaarError
        from .scalar import ScalarParseError
        print(f"error: {e}", file=sys.stderr)
        if isinstance(e, (DslError, ScalarParseError, FileNotFoundError,
                          KeyError, ValueError)):
            return EXIT_PARSE
        if isinstance(e, (DegreeError, HaarError)):
            return EXIT_DEGREE
        return EXIT_INTERNAL


def run(args):
    rng = random.Random(args.seed)
    if args.degree < 1 or args.depth < 1:
        raise ValueError("bounds must be >= 1")
    q_check = _fractions(args.q_samples) + [Fraction(args.q0)]
    if any(not (0 < x <= 1) for x in q_check):
        raise ValueError("sample points must lie in (0, 1]")
    print(f"# cqgkit {args.command} seed={args.seed}")
    p, fundamental = _load(args)
    out = {"schema_version": SCHEMA_VERSION, "command": args.command,
           "input": args.preset or args.file, "seed": args.seed}
    ok = True
    q_samples = _fractions(args.q_samples)
    q0 = Fraction(args.q0)

    if args.command == "verify-hopf":
        from .hopf import verify_hopf
        rep = verify_hopf(p.algebra, args.degree)
        out["report"] = rep.as_json()
        out["certified_ok"] = p.algebra.certified_ok
        ok = rep.ok
        print(f"hopf axioms at degree {args.degree}: {'PASS' if ok else 'FAIL'}")

    elif args.command == "galois":
        from .hopf import galois_maps
        rep = galois_maps(p.algebra, args.degree)
        out["report"] = rep.as_json()
        ok = rep.ok
        print(f"galois maps at degree {args.degree}: {'PASS' if ok else 'FAIL'}")

    elif args.command == "haar":
        from .haar import compute_haar
        table = compute_haar(p.algebra, args.degree)
        out["degree"] = args.degree
        out["solution_space_dim"] = table.nullity
        out["values"] = table.as_json()
        print(f"haar table at degree {args.degree}: {len(table.values)} nonzero "
              f"values, solution space dim {table.nullity}")
        for k, v in sorted(out["values"].items()):
            print(f"  h({k}) = {v}")

    elif args.command == "f-matrix":
        table, registry = _registry_with_haar(p, max(args.degree, 2))
        from .haar import f_matrix
        out["f_matrices"] = {}
        for entry in registry.entries:
            f = f_matrix(entry, table, q_samples=q_samples)
            out["f_matrices"][_label_str(entry.label)] = f.as_json()
            print(f"F[{_label_str(entry.label)}] = {f.as_json()['matrix']}")

    elif args.command == "fuse":
        from .corep import fusion_table
        table, registry = _registry_with_haar(p, 2)
        tab = fusion_table(registry, args.depth)
        rows = []
        for (la, lb), counts in sorted(tab.items()):
            rows.append({"left": _label_str(la), "right": _label_str(lb),
                         "summands": [{"label": _label_str(l), "multiplicity": m}
                                      for l, m in sorted(counts.items())]})
        out["fusion"] = rows
        for r in rows:
            terms = " + ".join(
                (f"{s['multiplicity']}x" if s["multiplicity"] > 1 else "")
                + s["label"] for s in r["summands"])
            print(f"{r['left']} (x) {r['right']} = {terms}")

    elif args.command == "decompose":
        from .corep import IrrepRegistry, decompose
        registry = IrrepRegistry(p.algebra)
        res = decompose(fundamental, registry, q0=q0)
        out["summands"] = [{"label": _label_str(l), "multiplicity": m}
                           for l, m in sorted(res.multiset().items())]
        out["registry"] = [{"label": _label_str(e.label), "dim": e.dim,
                            "unitary_gauge": e.unitary}
                           for e in registry.entries]
        print("decomposition:", " + ".join(
            (f"{m}x" if m > 1 else "") + _label_str(l)
            for l, m in sorted(res.multiset().items())))

    elif args.command == "dual":
        from .dual import DualContext, dual_basis, dual_export, dual_star
        table, registry = _registry_with_haar(p, 2)
        ctx = DualContext(registry, table, q_samples=tuple(q_samples))
        for e in ctx.entries:
            for i in range(e.dim):
                for j in range(e.dim):
                    dual_basis(ctx, e.label, i, j)
        # seeded random involution spot-check
        elt = ctx.zero()
        from .scalar import rational
        for e in ctx.entries:
            for i in range(e.dim):
                for j in range(e.dim):
                    elt = elt + ctx.basis(e.label, i, j).scale(
                        rational(rng.randint(-5, 5)))
        ok = dual_star(dual_star(elt)) == elt
        out["dual"] = dual_export(ctx)
        out["involution_spot_check"] = ok
        print(f"dual blocks: {[e.dim for e in ctx.entries]}, "
              f"involution spot check: {'PASS' if ok else 'FAIL'}")

    elif args.command == "regrep-check":
        if p.finite is None:
            raise ValueError("preset has no finite-dimensional model")
        from .regrep import regular_unitary, check_pentagon, check_implements
        rep = regular_unitary(p.finite)
        pent = check_pentagon(rep)
        impl = check_implements(rep)
        ok = pent.ok and impl.ok
        out["pentagon"] = pent.as_json()
        out["implements"] = impl.as_json()
        from .scalar import scalar_to_text
        n2 = rep.n ** 2
        out["u"] = [[scalar_to_text(rep.u.get(r, {}).get(c, __import__(
            "cqgkit.scalar", fromlist=["ZERO"]).ZERO)) for c in range(n2)]
            for r in range(n2)]
        print(f"regular representation: unitary PASS, pentagon "
              f"{'PASS' if pent.ok else 'FAIL'}, implements+slices "
              f"{'PASS' if impl.ok else 'FAIL'}")

    elif args.command == "normalize":
        if not args.expr:
            raise ValueError("normalize needs --expr")
        from .dsl import parse_poly
        poly = parse_poly(p.algebra.pres, args.expr)
        out["input"] = args.expr
        out["normal_form"] = str(poly)
        print(f"{args.expr}  ->  {poly}")

    elif args.command == "axioms-wor1":
        from .corep import verify_antipode_identities
        rep = verify_antipode_identities(fundamental, p.algebra)
        out["report"] = rep.as_json()
        ok = rep.ok
        print(f"antipode inverse identities: {'PASS' if ok else 'FAIL'}")

    elif args.command == "cesaro":
        if p.finite is None:
            raise ValueError("preset has no finite-dimensional model")
        from .regrep import cesaro_haar
        n = p.finite.dim
        w = [rng.random() for _ in range(n)]
        s = sum(w)
        w = [x / s for x in w]
        res = cesaro_haar(p.finite, w, steps=args.steps)
        out["cesaro"] = res.as_json()
        ok = all(d <= 2.0 / k + 1e-12 for k, d, _ in res.log)
        print(f"cesaro averaging: drift bound 2/n {'PASS' if ok else 'FAIL'}, "
              f"accelerated: {res.accelerated}")

    out["ok"] = bool(ok)
    payload = json.dumps(out, indent=2, sort_keys=True)
    if args.json_path:
        with open(args.json_path, "w") as fh:
            fh.write(payload + "\n")
        print(f"json written to {args.json_path}")
    else:
        print(payload)
    return EXIT_OK if ok else EXIT_CHECK


def _registry_with_haar(p, degree):
    from .corep import IrrepRegistry, decompose
    from .haar import compute_haar
    table = compute_haar(p.algebra, max(degree, 2))
    registry = IrrepRegistry(p.algebra)
    if p.fundamental is not None:
        decompose(p.fundamental, registry, haar=table, tensor_degree=1)
    return table, registry


if __name__ == "__main__":
    sys.exit(main())
