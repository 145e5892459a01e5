"""Command-line front end: model registry, figure-data emission,
verification suites, and Floer example runs with machine-readable output.

    lagcob <sample|slice|verify|critical|index|euler|floer|suite> [flags]

Output is JSON ({schema_version, command, params, results}) or CSV for
point clouds (columns re0, im0, ..., color).  Runs are deterministic for a
fixed --seed.  LAGCOB_THREADS caps the evaluation worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import acceptance, cochains, grading, models, novikov, verify

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Model registry
# ---------------------------------------------------------------------------

def build_model(name, args):
    if name == "whitney":
        return models.make_whitney_sphere(args.n, args.r)
    if name == "null-cobordism":
        return models.make_null_cobordism(args.n)
    if name == "local-trace":
        return models.make_local_surgery_trace(args.k, args.n)
    if name == "sheared-torus":
        return models.make_sheared_torus()
    if name == "figure-eight":
        return models.make_figure_eight(args.E)
    if name == "section":
        return models.make_section(args.Eprime)
    if name == "figure-eight-bottleneck":
        spec = models.DoubleBottleneckSpec(models.FigureEightBase(args.E),
                                           epsilon=args.eps)
        return models.make_double_bottleneck(spec)
    if name == "handle":
        return models.make_bottlenecked_handle(args.k, args.n, args.A, args.B)
    raise SystemExit(f"unknown model {name!r}")


MODEL_NAMES = ["whitney", "null-cobordism", "local-trace", "sheared-torus",
               "figure-eight", "section", "figure-eight-bottleneck", "handle"]


def _workers():
    try:
        return max(1, int(os.environ.get("LAGCOB_THREADS", "1")))
    except ValueError:
        return 1


def _eval_chunked(imm, ids, U):
    """Evaluate a sample batch, parallelized over chunks when allowed."""
    w = _workers()
    if w == 1 or len(U) < 2048:
        return imm.eval_batch(ids, U)
    chunks = np.array_split(np.arange(len(U)), w)
    out = np.empty((len(U), imm.ambient.n_complex), dtype=complex)
    with ThreadPoolExecutor(max_workers=w) as ex:
        futs = {ex.submit(imm.eval_batch, ids[c], U[c]): c for c in chunks if len(c)}
        for f, c in futs.items():
            out[c] = f.result()
    return out


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, novikov.NovikovElement):
        return repr(x)
    return x


def emit(doc, args):
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def emit_csv(points, colors, args):
    n = points.shape[1]
    hdr = ",".join(f"re{c},im{c}" for c in range(n)) + ",color"
    lines = [hdr]
    for row, col in zip(points, colors):
        vals = []
        for z in row:
            vals.append(repr(float(z.real)))
            vals.append(repr(float(z.imag)))
        vals.append(repr(float(col)))
        lines.append(",".join(vals))
    text = "\n".join(lines) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _doc(command, params, results):
    return {"schema_version": SCHEMA_VERSION, "command": command,
            "params": params, "results": results}


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_sample(args):
    imm = build_model(args.model, args)
    if args.count > 0:
        ids, U = imm.sample(args.count, seed=args.seed)
        ids, U = ids[:args.count], U[:args.count]
        Z = _eval_chunked(imm, ids, U)
    else:
        Z = np.zeros((0, imm.ambient.n_complex), dtype=complex)
    slot = imm.ambient.cobordism_slot
    color = Z[:, slot].imag if (slot is not None and len(Z)) else (
        Z[:, 0].imag if len(Z) else np.zeros(0))
    if args.format == "csv":
        emit_csv(Z, color, args)
        return 0
    results = {
        "model": imm.label,
        "points": [[v for z in row for v in (float(z.real), float(z.imag))]
                   for row in Z],
        "color_channel": [float(c) for c in color],
        "metadata": {"seed": args.seed, "count": int(len(Z)),
                     "requested": args.count},
    }
    emit(_doc("sample", _params(args), results), args)
    return 0


def cmd_slice(args):
    imm = build_model(args.model, args)
    pts, img = verify.slice_points(imm, args.t, n_samples=args.samples,
                                   seed=args.seed)
    results = {
        "model": imm.label, "t": args.t, "n_points": len(pts),
        "points": [[v for z in row for v in (float(z.real), float(z.imag))]
                   for row in img],
        "has_analytic_slice": bool(imm.slice_model is not None),
    }
    emit(_doc("slice", _params(args), results), args)
    return 0


def cmd_verify(args):
    imm = build_model(args.model, args)
    rep = verify.check_lagrangian(imm, n_samples=args.samples, seed=args.seed,
                                  mode=args.mode)
    tol = args.tol if args.tol is not None else (
        1e-6 if rep.mode == "analytic" else 1e-4)
    ok = rep.max_residual < tol
    results = {"model": imm.label, "max_residual": rep.max_residual,
               "samples": rep.samples, "mode": rep.mode, "tol": tol,
               "passed": ok}
    emit(_doc("verify", _params(args), results), args)
    return 0 if ok else 1


def cmd_critical(args):
    imm = build_model(args.model, args)
    cps = verify.critical_points(imm, n_seeds=args.samples, seed=args.seed)
    results = {"model": imm.label, "critical_points": [
        {"value": cp.value, "upward_index": cp.upward_index,
         "degenerate": cp.degenerate,
         "location": [float(v) for v in cp.location.u]} for cp in cps]}
    emit(_doc("critical", _params(args), results), args)
    return 0


def cmd_index(args):
    if args.model == "local-trace":
        k, n = args.k, args.n
        results = {
            "q-_to_q+": grading.local_trace_chord_index(k, n, "minus_to_plus"),
            "q+_to_q-": grading.local_trace_chord_index(k, n, "plus_to_minus"),
        }
        ok = (results["q-_to_q+"] + results["q+_to_q-"] == n)
    elif args.model == "figure-eight":
        results = {
            "pi_to_0": grading.figure_eight_chord_index(args.E, "pi_to_0"),
            "0_to_pi": grading.figure_eight_chord_index(args.E, "0_to_pi"),
        }
        ok = (results["pi_to_0"], results["0_to_pi"]) == (0, 1)
    else:
        raise SystemExit("index supports --model local-trace | figure-eight")
    emit(_doc("index", _params(args), results), args)
    return 0 if ok else 1


def cmd_euler(args):
    if args.scenario == "handle":
        k, n = args.k, args.n
        chi_p = cochains.chi_si(cochains.generators_immersed(("local_slice", k, n, "+")))
        chi_m = cochains.chi_si(cochains.generators_immersed(("local_slice", k, n, "-")))
        chi_b = cochains.chi_bot(cochains.generators_bottlenecked(("handle", k, n), -1.0, 0.2))
        results = {"chi_plus": chi_p, "chi_minus": chi_m, "chi_bot": chi_b,
                   "match": chi_p == chi_m == chi_b}
        ok = results["match"]
    elif args.scenario == "compose":
        rng = np.random.default_rng(args.seed)
        ends = [cochains.random_end(rng, f"E{i}") for i in range(args.pieces + 1)]
        pieces = [cochains.random_piece(rng, ends[i], ends[i + 1])
                  for i in range(args.pieces)]
        acc = pieces[0]
        ok = True
        for i in range(1, args.pieces):
            nxt = cochains.compose(pieces[i], acc, ends[i])
            ok &= (cochains.chi_bot(nxt) == cochains.chi_bot(acc)
                   + cochains.chi_bot(pieces[i]) - cochains.chi_si(ends[i]))
            acc = nxt
        results = {"pieces": args.pieces, "chi_bot": cochains.chi_bot(acc),
                   "composition_equation": ok}
    else:
        raise SystemExit("euler supports --scenario handle | compose")
    emit(_doc("euler", _params(args), results), args)
    return 0 if ok else 1


def cmd_floer(args):
    kw = {}
    for key in ("n", "k"):
        v = getattr(args, key)
        if v is not None:
            kw[key] = v
    for key in ("A", "B", "E", "Eprime", "A_plus", "A_minus", "E_a", "E_b", "C"):
        v = getattr(args, key.replace("_", ""), None) if not hasattr(args, key) else getattr(args, key)
        if v is not None:
            kw[key] = Fraction(v).limit_denominator(10 ** 9)
    cx = novikov.build_complex(args.example, e_max=args.cutoff, **kw)
    mc = novikov.mc_leading_order(cx)
    results = {
        "complex": cx.label,
        "generators": {g: d for g, d in sorted(cx.generators.items())},
        "homology_ranks": {str(k): v for k, v in cx.homology_ranks().items()},
        "status": mc.status,
        "certificate": {k: _jsonable(v) for k, v in mc.certificate.items()},
    }
    if mc.leading_cochain:
        gen, w = mc.leading_cochain
        results["leading"] = {"gen": gen, "exp": float(w.val()),
                              "element": repr(w)}
    emit(_doc("floer", _params(args), results), args)
    return 0


def cmd_suite(args):
    records = acceptance.run_all()
    width = max(len(r["description"]) for r in records)
    ok_all = True
    for r in records:
        status = "PASS" if r["passed"] else ("SKIP" if r["passed"] is None else "FAIL")
        ok_all &= r["passed"] is not False
        print(f"{r['id']}  {r['description']:<{width}}  {status:4}  "
              f"{r['seconds']:7.2f}s  {r['detail']}")
    doc = _doc("suite", {}, {"criteria": records,
                             "passed": bool(ok_all)})
    if args.out:
        with open(args.out, "w") as f:
            json.dump(_jsonable(doc), f, indent=2, sort_keys=True)
    return 0 if ok_all else 1


# ---------------------------------------------------------------------------

def _params(args):
    skip = {"func", "out", "format"}
    return {k: _jsonable(v) for k, v in vars(args).items()
            if k not in skip and v is not None and not callable(v)}


def _add_model_flags(p):
    p.add_argument("--model", required=True, choices=MODEL_NAMES)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--E", type=float, default=1.0)
    p.add_argument("--Eprime", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--B", type=float, default=0.3)


def _add_common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--tol", type=float, default=None)


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="lagcob",
        description="Workbench for Lagrangian surgery traces and their filtered Floer algebra")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="emit a point cloud of a model")
    _add_model_flags(p)
    _add_common(p)
    p.add_argument("--count", type=int, default=2000)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("slice", help="slice a cobordism at a regular value")
    _add_model_flags(p)
    _add_common(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--samples", type=int, default=2000)
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("verify", help="check the Lagrangian condition")
    _add_model_flags(p)
    _add_common(p)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--mode", choices=["analytic", "fd"], default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("critical", help="locate critical points of pi_R")
    _add_model_flags(p)
    _add_common(p)
    p.add_argument("--samples", type=int, default=64)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("index", help="self-intersection indices of a model")
    _add_model_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("euler", help="Euler characteristic bookkeeping")
    _add_common(p)
    p.add_argument("--scenario", choices=["handle", "compose"], required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--pieces", type=int, default=3)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("floer", help="build a worked Floer complex and classify m0")
    _add_common(p)
    p.add_argument("--example", required=True,
                   choices=["whitney", "figure_eight", "handle",
                            "antisurgery_surgery", "surgery_trace_KAB",
                            "intersection_LE_section"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--A", type=float, default=None)
    p.add_argument("--B", type=float, default=None)
    p.add_argument("--C", type=float, default=None)
    p.add_argument("--E", type=float, default=None)
    p.add_argument("--Eprime", type=float, default=None)
    p.add_argument("--A-plus", dest="A_plus", type=float, default=None)
    p.add_argument("--A-minus", dest="A_minus", type=float, default=None)
    p.add_argument("--E-a", dest="E_a", type=float, default=None)
    p.add_argument("--E-b", dest="E_b", type=float, default=None)
    p.add_argument("--cutoff", type=float, default=None)
    p.set_defaults(func=cmd_floer)

    p = sub.add_parser("suite", help="run the acceptance matrix")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_suite)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
