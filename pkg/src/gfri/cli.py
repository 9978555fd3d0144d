"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 infeasible filterbank (Bezout or
invertibility), 4 precondition violation or model mismatch. ``GFRI_TOL``
overrides the verification tolerance (default ``1e-8``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import io as gio
from .circulant import CirculantGraph, PathGraph, adjacency_matrix, is_bipartite, is_circulant, laplacian
from .coarsening import SCHEMES, coarsen, kron_reduce, spectral_reduce
from .errors import (
    BezoutError,
    GFRIError,
    InvalidGraphError,
    InvertibilityError,
    ModelMismatchError,
    PreconditionError,
)
from .filterbanks import (
    DownsamplePattern,
    build_filterbank,
    check_invertibility,
    condition_number_bipartite,
    transform_matrix,
)
from .multires import analyze, plan_mrt, synthesize
from .products import PRODUCT_KINDS, graph_product, nearest_circulant, nearest_kronecker_circulant
from .sampling import (
    SparseSignal,
    factorize_gft,
    max_levels,
    prony_dct_reconstruct,
    prony_reconstruct,
    sample_dct,
    sample_gft,
    sample_via_pipeline,
)
from .spectral import gft_permutation

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_PRECONDITION = 0, 2, 3, 4


def tolerance() -> float:
    raw = os.environ.get("GFRI_TOL")
    if raw is None:
        return 1e-8
    try:
        value = float(raw)
    except ValueError:
        raise InvalidGraphError(f"GFRI_TOL must be a number, got {raw!r}") from None
    if not value > 0:
        raise InvalidGraphError("GFRI_TOL must be positive")
    return value


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit(report: dict, out: Path, name: str = "report.json"):
    gio.dump_json(report, out / name)
    print(json.dumps(report, indent=2, sort_keys=True))


def _graph(args):
    if getattr(args, "graph", None):
        return gio.load_graph(args.graph)
    if getattr(args, "path", None):
        return PathGraph(args.path)
    if getattr(args, "n", None) and getattr(args, "offsets", None):
        weights = args.weights or [1.0] * len(args.offsets)
        if len(weights) != len(args.offsets):
            raise InvalidGraphError("--weights must match --offsets in length")
        return CirculantGraph(args.n, list(zip(args.offsets, weights)))
    raise InvalidGraphError("give --graph FILE, --path N, or --n with --offsets")


def _alphas(args, n: int):
    if args.alphas is not None:
        return [float(a) for a in args.alphas]
    if args.alpha_index is not None:
        return [2 * np.pi * m / n for m in args.alpha_index]
    return [0.0]


def _add_graph_args(p):
    p.add_argument("--graph", help="graph JSON file")
    p.add_argument("--n", type=int, help="vertex count of a circulant graph")
    p.add_argument("--offsets", type=int, nargs="+", help="generator offsets")
    p.add_argument("--weights", type=float, nargs="+", help="generator weights (default 1)")
    p.add_argument("--path", type=int, metavar="N", help="use the path graph on N vertices")


def _add_filter_args(p):
    p.add_argument("--kind", default="HGSWT", choices=["HGSWT", "HGESWT", "HCGESWT", "NORMALIZED-PATH"])
    p.add_argument("--k", type=int, default=1, help="half-order of the filters")
    p.add_argument("--alphas", type=float, nargs="+", help="e-spline parameters in radians")
    p.add_argument("--alpha-index", type=int, nargs="+", help="parameters 2*pi*m/n for these m")


def cmd_graph(args) -> int:
    g = _graph(args)
    out = _out(args)
    a = adjacency_matrix(g)
    gio.write_matrix_csv(a, out / "adjacency.csv")
    gio.write_matrix_csv(laplacian(g), out / "laplacian.csv")
    report = {"graph": g.to_dict(), "n": g.n}
    if isinstance(g, CirculantGraph):
        info = gft_permutation(g)
        lines = ["dft_index,eigenvalue,frequency_rank"]
        rank = np.empty(g.n, dtype=int)
        rank[info.sigma] = np.arange(g.n)
        lines += [f"{k},{gio._fmt(info.eigenvalues[k])},{rank[k]}" for k in range(g.n)]
        (out / "spectrum.csv").write_text("\n".join(lines) + "\n")
        report.update(bipartite=is_bipartite(g), degree=g.degree, bandwidth=g.bandwidth,
                      sigma=[int(s) for s in info.sigma])
    else:
        lam = np.linalg.eigvalsh(laplacian(g))
        (out / "spectrum.csv").write_text("index,eigenvalue\n" + "".join(
            f"{i},{gio._fmt(v)}\n" for i, v in enumerate(lam)))
        report.update(bipartite=True)
    _emit(report, out)
    return EXIT_OK


def _pattern(name: str, n: int) -> DownsamplePattern:
    if name == "standard":
        return DownsamplePattern.standard(n)
    if name == "minimum":
        return DownsamplePattern.minimum(n)
    if name == "all":
        return DownsamplePattern.all_lowpass(n)
    raise InvalidGraphError(f"unknown pattern {name!r}")


def cmd_filterbank(args) -> int:
    g = _graph(args)
    out = _out(args)
    kind = "NORMALIZED-PATH" if isinstance(g, PathGraph) else args.kind
    fb = build_filterbank(g, kind, args.k, _alphas(args, g.n), _pattern(args.pattern, g.n))
    gio.dump_json(gio.filterbank_to_dict(fb), out / "filterbank.json")
    s = np.linalg.svd(transform_matrix(fb), compute_uv=False)
    report = {"kind": fb.kind, "k": fb.spec.k, "betas": list(fb.spec.betas),
              "sigma_min": float(s[-1]), "cond_svd": float(s[0] / s[-1]) if s[-1] > 0 else None}
    if fb.is_circulant:
        verdict = check_invertibility(fb)
        report.update(invertible=verdict.invertible, condition=verdict.condition, reason=verdict.reason,
                      conflicts=[list(c) for c in verdict.conflicts])
        if is_bipartite(g) and fb.kind in ("HGSWT", "HGESWT") and fb.sampling.is_standard:
            report["cond_formula"] = condition_number_bipartite(fb)
    else:
        report.update(invertible=bool(s[-1] > 1e-10 * s[0]), condition="dense-rank")
    _emit(report, out)
    return EXIT_OK if report["invertible"] else EXIT_INFEASIBLE


def _rng(args):
    return np.random.default_rng(args.seed)


def cmd_mrt(args) -> int:
    g = _graph(args)
    out = _out(args)
    plan = plan_mrt(g, args.kind, args.k, args.levels, _alphas(args, g.n), args.scheme)
    if args.signal:
        x = gio.read_signal_csv(args.signal)
    else:
        x = _rng(args).standard_normal(g.n)
    coeffs = analyze(x, plan)
    gio.write_coefficients_csv(coeffs, out / "coefficients.csv")
    back = synthesize(coeffs)
    err = float(np.max(np.abs(back - x)))
    report = {"J": plan.J, "level_sizes": [h.n for h in plan.graphs], "sparsity": coeffs.sparsity(),
              "roundtrip_error": err, "roundtrip_ok": err < tolerance()}
    _emit(report, out)
    return EXIT_OK


def _sparse_input(args, n: int) -> SparseSignal:
    if args.signal:
        return gio.read_sparse_csv(args.signal, n)
    if args.K is None:
        raise InvalidGraphError("give --signal or --K for a random sparse signal")
    return SparseSignal.random(n, args.K, _rng(args))


def cmd_sample(args) -> int:
    g = _graph(args)
    out = _out(args)
    x = _sparse_input(args, g.n)
    basis = "DCT-III" if isinstance(g, PathGraph) else "DFT"
    M = args.M or (4 * x.K if basis == "DCT-III" else 2 * x.K)
    samples = sample_dct(x, M) if basis == "DCT-III" else sample_gft(x, M)
    gio.write_samples_csv(samples, out / "samples.csv")
    gio.write_sparse_csv(x, out / "signal.csv")
    _emit({"n": g.n, "M": M, "K": x.K, "basis": basis}, out)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    basis = "DCT-III" if args.basis == "dct" else "DFT"
    samples = gio.read_samples_csv(args.samples, args.n, basis)
    out = _out(args)
    if basis == "DCT-III":
        rec = prony_dct_reconstruct(samples, args.K)
        resid = np.max(np.abs(sample_dct(rec, samples.M).y - samples.y))
    else:
        rec = prony_reconstruct(samples, args.K)
        resid = np.max(np.abs(sample_gft(rec, samples.M).y - samples.y))
    gio.write_sparse_csv(rec, out / "recovered.csv")
    _emit({"K": rec.K, "support": [int(c) for c in rec.support], "residual": float(resid),
           "residual_ok": bool(resid < tolerance())}, out)
    return EXIT_OK


def cmd_pipeline(args) -> int:
    g = _graph(args)
    if not isinstance(g, CirculantGraph):
        raise PreconditionError("the pipeline needs a circulant graph")
    out = _out(args)
    tol = tolerance()
    K = args.K
    M = args.M or 2 * K
    J = args.levels if args.levels is not None else max_levels(g.n, M)[0]
    fact = factorize_gft(g, M, J, k=args.k, scheme=args.scheme, tol=tol)
    rng = _rng(args)
    trials = []
    for t in range(args.trials):
        x = gio.read_sparse_csv(args.signal, g.n) if args.signal and t == 0 else SparseSignal.random(g.n, K, rng)
        y_coarse, y = sample_via_pipeline(x, fact)
        direct = sample_gft(x, M).y
        rec = prony_reconstruct(y, K)
        amp_err = float(np.max(np.abs(rec.dense() - x.dense())))
        trials.append({"trial": t, "support": [int(c) for c in x.support],
                       "pipeline_vs_direct": float(np.max(np.abs(y.y - direct))),
                       "recovery_error": amp_err})
        if t == 0:
            gio.write_signal_csv(y_coarse, out / "y_coarse.csv")
            gio.write_samples_csv(y, out / "y.csv")
            gio.write_sparse_csv(rec, out / "recovered.csv")
    gio.save_graph(fact.coarse_graph, out / "coarse_graph.json")
    worst = max((max(t["pipeline_vs_direct"], t["recovery_error"]) for t in trials), default=0.0)
    report = {"n": g.n, "K": K, "M": M, "J": J, "M_tilde": g.n >> J, "level_filters": list(fact.kinds),
              "factorization_residual": fact.residual, "trials": trials, "all_ok": bool(worst < tol)}
    _emit(report, out)
    return EXIT_OK


def cmd_coarsen(args) -> int:
    g = _graph(args)
    out = _out(args)
    if isinstance(g, PathGraph) or args.scheme == "kron":
        current = laplacian(g)
        for _ in range(args.levels):
            current = kron_reduce(current, range(0, current.shape[0], 2))
        gio.write_matrix_csv(current, out / "laplacian.csv")
        report = {"scheme": "kron", "n": current.shape[0], "circulant": is_circulant(current, 1e-9)}
        if isinstance(g, CirculantGraph) and report["circulant"]:
            coarse = g
            for _ in range(args.levels):
                coarse = coarsen(coarse, "kron").graph
            report["graph"] = coarse.to_dict()
    else:
        coarse = g
        for _ in range(args.levels):
            coarse = coarsen(coarse, args.scheme).graph
        gio.save_graph(coarse, out / "coarse_graph.json")
        gio.write_matrix_csv(laplacian(coarse), out / "laplacian.csv")
        report = {"scheme": args.scheme, "n": coarse.n, "graph": coarse.to_dict()}
    _emit(report, out)
    return EXIT_OK


def cmd_product(args) -> int:
    g1 = gio.load_graph(args.graph1)
    g2 = gio.load_graph(args.graph2)
    out = _out(args)
    prod = graph_product(g1, g2, args.kind)
    gio.write_matrix_csv(prod.adjacency, out / "adjacency.csv")
    report = {"kind": prod.kind, "n": prod.n, "shape": list(prod.shape),
              "circulant": is_circulant(prod.adjacency)}
    if prod.kind == "lexicographic":
        p = prod.circulant_labels()
        report["circulant_after_relabel"] = is_circulant(prod.adjacency[np.ix_(p, p)])
    _emit(report, out)
    return EXIT_OK


def cmd_approx(args) -> int:
    a = gio.read_matrix_csv(args.matrix)
    if a.shape[0] != a.shape[1]:
        raise InvalidGraphError(f"matrix must be square, got {a.shape}")
    out = _out(args)
    if args.mode == "circulant":
        c = nearest_circulant(a)
        gio.write_matrix_csv(c, out / "circulant.csv")
        report = {"mode": "circulant", "residual": float(np.linalg.norm(a - c))}
    else:
        if args.n1 is None or args.n2 is None or args.n1 * args.n2 != a.shape[0]:
            raise InvalidGraphError("--n1 * --n2 must equal the matrix dimension")
        ap = nearest_kronecker_circulant(a, args.n1, args.n2, max_iter=args.max_iter)
        gio.write_matrix_csv(ap.A1, out / "A1.csv")
        gio.write_matrix_csv(ap.A2, out / "A2.csv")
        (out / "residuals.csv").write_text("iteration,residual\n" + "".join(
            f"{i},{gio._fmt(r)}\n" for i, r in enumerate(ap.history)))
        report = {"mode": "kronecker", "residual": ap.residual, "iterations": ap.iterations,
                  "monotone": bool(np.all(np.diff(ap.history) <= 1e-12 * max(ap.history[0], 1.0)))}
    _emit(report, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gfri", description="Sparse sampling and wavelets on circulant graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=0, help="seed for random demo signals")
        p.set_defaults(func=func)
        return p

    p = add("graph", cmd_graph, "build a graph; write adjacency, Laplacian and spectrum")
    _add_graph_args(p)

    p = add("filterbank", cmd_filterbank, "build a filterbank and check invertibility")
    _add_graph_args(p)
    _add_filter_args(p)
    p.add_argument("--pattern", default="standard", choices=["standard", "minimum", "all"])

    p = add("mrt", cmd_mrt, "multilevel wavelet transform of a signal")
    _add_graph_args(p)
    _add_filter_args(p)
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--scheme", default="same-generating-set", choices=list(SCHEMES))
    p.add_argument("--signal", help="signal CSV (re,im); random if omitted")

    p = add("sample", cmd_sample, "take spectral samples of a sparse signal")
    _add_graph_args(p)
    p.add_argument("--signal", help="sparse signal CSV (c,re,im)")
    p.add_argument("--K", type=int, help="sparsity of a random signal")
    p.add_argument("--M", type=int, help="number of samples (default 2K, or 4K on paths)")

    p = add("reconstruct", cmd_reconstruct, "recover a sparse signal from spectral samples")
    p.add_argument("--samples", required=True, help="samples CSV (m,re,im)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--basis", default="dft", choices=["dft", "dct"])

    p = add("pipeline", cmd_pipeline, "filter, coarsen, sample and reconstruct")
    _add_graph_args(p)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--M", type=int)
    p.add_argument("--levels", type=int, help="default: deepest admissible")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--scheme", default="spectral", choices=list(SCHEMES))
    p.add_argument("--signal", help="sparse signal CSV for the first trial")
    p.add_argument("--trials", type=int, default=1)

    p = add("coarsen", cmd_coarsen, "coarsen a graph")
    _add_graph_args(p)
    p.add_argument("--scheme", default="spectral", choices=list(SCHEMES))
    p.add_argument("--levels", type=int, default=1)

    p = add("product", cmd_product, "graph product of two graphs")
    p.add_argument("--graph1", required=True)
    p.add_argument("--graph2", required=True)
    p.add_argument("--kind", default="cartesian", choices=list(PRODUCT_KINDS))

    p = add("approx", cmd_approx, "nearest circulant / Kronecker-of-circulants approximation")
    p.add_argument("--matrix", required=True, help="square matrix CSV")
    p.add_argument("--mode", default="circulant", choices=["circulant", "kronecker"])
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--max-iter", type=int, default=500)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BezoutError, InvertibilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (PreconditionError, ModelMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InvalidGraphError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GFRIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
