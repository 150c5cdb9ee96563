"""Command-line front end.

Subcommands: ssc, cka, modularity, embed, instances, dynamics, pairwise,
synth.  Every run writes a report.json (plus CSV/SVG artifacts) into
--out-dir and exits 0; known failures print a one-line JSON error object to
stderr and exit 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--tau", type=float, default=10.0, help="data-fidelity weight (default 10)")
    shared.add_argument("--mu", type=float, default=10.0, help="initial ADMM penalty (default 10)")
    shared.add_argument("--max-iters", type=int, default=200, help="ADMM iteration cap (default 200)")
    shared.add_argument("--tol", type=float, default=2e-4, help="stop when max|Z - C| falls below (default 2e-4)")
    shared.add_argument("--no-normalize", action="store_true", help="skip unit-norm column scaling")
    shared.add_argument("--seed", type=int, default=0, help="RNG seed where randomness is involved")
    shared.add_argument("--out-dir", type=Path, default=Path("out"), help="output directory (default ./out)")

    parser = argparse.ArgumentParser(
        prog="sscgraph",
        description="Sparse-subspace affinity graphs over neural activations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ssc", parents=[shared], help="solve self-expression for one matrix")
    p.add_argument("--matrix", type=Path, required=True, help="activation matrix (.npy or .csv, d x N)")
    p.add_argument("--save-coefficients", action="store_true", help="also write the raw coefficient matrix")
    p.set_defaults(handler=_cmd_ssc)

    p = sub.add_parser("cka", parents=[shared], help="compare two activation matrices")
    p.add_argument("--matrix-a", type=Path, required=True)
    p.add_argument("--matrix-b", type=Path, required=True)
    p.set_defaults(handler=_cmd_cka)

    p = sub.add_parser("modularity", parents=[shared], help="class modularity of one layer's graph")
    p.add_argument("--matrix", type=Path, required=True)
    p.add_argument("--labels", type=Path, required=True)
    p.add_argument("--from-affinity", action="store_true", help="input is already an affinity matrix")
    p.set_defaults(handler=_cmd_modularity)

    p = sub.add_parser("embed", parents=[shared], help="spectral embedding of one layer's graph")
    p.add_argument("--matrix", type=Path, required=True)
    p.add_argument("--k", type=int, default=2, help="embedding dimension (default 2)")
    p.add_argument(
        "--mode",
        choices=("affinity", "normalized_laplacian"),
        default="affinity",
        help="top eigenvectors of W, or bottom of the normalized Laplacian",
    )
    p.add_argument("--from-affinity", action="store_true")
    p.set_defaults(handler=_cmd_embed)

    p = sub.add_parser("instances", parents=[shared], help="per-instance neighborhoods and SSC labels")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--layer", help="layer name when the manifest has several records")
    p.add_argument("--epoch", type=int, help="epoch tag when the manifest has several records")
    p.add_argument("--queries", default="", help="comma-separated sample indices to profile")
    p.add_argument("--k", type=int, default=8, help="neighbors per query (default 8)")
    p.set_defaults(handler=_cmd_instances)

    p = sub.add_parser("dynamics", parents=[shared], help="training-dynamics curves from a manifest")
    p.add_argument("--manifest", type=Path, required=True)
    p.set_defaults(handler=_cmd_dynamics)

    p = sub.add_parser("pairwise", parents=[shared], help="all-pairs layer CKA from a manifest")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--epoch", type=int, help="restrict a multi-epoch manifest to one epoch")
    p.add_argument("--heatmaps", action="store_true", help="also render SVG heatmaps")
    p.set_defaults(handler=_cmd_pairwise)

    p = sub.add_parser("synth", parents=[shared], help="generate union-of-subspaces test data")
    p.add_argument("--num-subspaces", type=int, default=3)
    p.add_argument("--ambient-dim", type=int, default=50)
    p.add_argument("--subspace-dim", type=int, default=4)
    p.add_argument("--points-per-subspace", type=int, default=40)
    p.add_argument("--noise-std", type=float, default=0.0)
    p.set_defaults(handler=_cmd_synth)

    return parser


def _solver_config(args):
    from .solver import SscConfig

    return SscConfig(
        tau=args.tau,
        mu_init=args.mu,
        max_iters=args.max_iters,
        tol_abs=args.tol,
        normalize_columns=not args.no_normalize,
    )


def _out_dir(args) -> Path:
    args.out_dir.mkdir(parents=True, exist_ok=True)
    return args.out_dir


def _cmd_ssc(args) -> None:
    from .matrix_io import load_matrix
    from .pipeline import write_matrix_csv, write_report
    from .solver import build_affinity, solve_ssc

    x = load_matrix(args.matrix)
    coeffs, report = solve_ssc(x, _solver_config(args))
    affinity = build_affinity(coeffs)
    out = _out_dir(args)
    write_matrix_csv(affinity, out / "affinity.csv")
    if args.save_coefficients:
        write_matrix_csv(coeffs, out / "coefficients.csv")
    write_report(
        {
            "suite": "ssc",
            "matrix": str(args.matrix),
            "shape": list(x.shape),
            "iterations": report.iterations,
            "converged": report.converged,
            "final_mu": report.final_mu,
            "zero_columns": list(report.zero_columns),
            "primal_residuals": list(report.primal_residuals),
            "objective_values": list(report.objective_values),
            "solver": asdict(_solver_config(args)),
        },
        out / "report.json",
    )


def _cmd_cka(args) -> None:
    from .matrix_io import load_matrix
    from .pipeline import write_report
    from .similarity import cka, linear_gram
    from .solver import build_affinity, solve_ssc

    cfg = _solver_config(args)
    a = load_matrix(args.matrix_a)
    b = load_matrix(args.matrix_b)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"sample counts differ: {a.shape[1]} vs {b.shape[1]}")
    affinity_a = build_affinity(solve_ssc(a, cfg)[0])
    affinity_b = build_affinity(solve_ssc(b, cfg)[0])
    write_report(
        {
            "suite": "cka",
            "matrix_a": str(args.matrix_a),
            "matrix_b": str(args.matrix_b),
            "num_samples": a.shape[1],
            "ssc_cka": cka(affinity_a, affinity_b),
            "linear_cka": cka(linear_gram(a), linear_gram(b)),
            "solver": asdict(cfg),
        },
        _out_dir(args) / "report.json",
    )


def _cmd_modularity(args) -> None:
    from .graph_metrics import modularity
    from .matrix_io import load_labels, load_matrix
    from .pipeline import write_report
    from .solver import build_affinity, solve_ssc

    labels = load_labels(args.labels)
    x = load_matrix(args.matrix)
    if args.from_affinity:
        affinity = x
    else:
        affinity = build_affinity(solve_ssc(x, _solver_config(args))[0])
    write_report(
        {
            "suite": "modularity",
            "matrix": str(args.matrix),
            "from_affinity": args.from_affinity,
            "num_samples": labels.shape[0],
            "modularity": modularity(affinity, labels),
            "solver": asdict(_solver_config(args)),
        },
        _out_dir(args) / "report.json",
    )


def _cmd_embed(args) -> None:
    from .graph_metrics import spectral_embedding
    from .matrix_io import load_matrix
    from .pipeline import write_matrix_csv, write_report
    from .solver import build_affinity, solve_ssc

    x = load_matrix(args.matrix)
    if args.from_affinity:
        affinity = x
    else:
        affinity = build_affinity(solve_ssc(x, _solver_config(args))[0])
    embedding = spectral_embedding(affinity, k=args.k, mode=args.mode)
    out = _out_dir(args)
    write_matrix_csv(embedding.coordinates, out / "embedding.csv")
    write_report(
        {
            "suite": "embed",
            "matrix": str(args.matrix),
            "mode": embedding.mode,
            "k": args.k,
            "eigenvalues": embedding.eigenvalues,
            "solver": asdict(_solver_config(args)),
        },
        out / "report.json",
    )


def _cmd_instances(args) -> None:
    from .matrix_io import load_manifest
    from .pipeline import run_instance_analysis, write_report

    queries = [int(token) for token in args.queries.split(",") if token.strip()]
    report = run_instance_analysis(
        load_manifest(args.manifest),
        _solver_config(args),
        queries=queries,
        k=args.k,
        layer=args.layer,
        epoch=args.epoch,
    )
    write_report(report, _out_dir(args) / "report.json")


def _cmd_dynamics(args) -> None:
    from .matrix_io import load_manifest
    from .pipeline import run_training_dynamics, write_matrix_csv, write_report
    import numpy as np

    report = run_training_dynamics(load_manifest(args.manifest), _solver_config(args))
    out = _out_dir(args)
    write_report(report, out / "report.json")
    for name in report["layers"]:
        curve = report["per_layer"][name]
        table = np.column_stack(
            [
                np.asarray(curve["epochs"], dtype=float),
                curve["modularity"],
                curve["ssc_cka_to_final"],
                curve["linear_cka_to_final"],
            ]
        )
        write_matrix_csv(table, out / f"dynamics_{_slug(name)}.csv")


def _cmd_pairwise(args) -> None:
    from .matrix_io import load_manifest
    from .pipeline import render_heatmap, run_pairwise_architecture, write_matrix_csv, write_report

    report = run_pairwise_architecture(
        load_manifest(args.manifest), _solver_config(args), epoch=args.epoch
    )
    out = _out_dir(args)
    write_report(report, out / "report.json")
    for key in ("ssc_cka", "linear_cka"):
        if key not in report:
            continue
        if args.heatmaps:
            render_heatmap(report[key], out / f"{key}.svg")  # writes the CSV sidecar too
        else:
            write_matrix_csv(report[key], out / f"{key}.csv")


def _cmd_synth(args) -> None:
    from .matrix_io import atomic_write_text, save_labels, save_matrix
    from .pipeline import write_report
    from .synthetic import SyntheticConfig, gen_synthetic

    cfg = SyntheticConfig(
        num_subspaces=args.num_subspaces,
        ambient_dim=args.ambient_dim,
        subspace_dim=args.subspace_dim,
        points_per_subspace=args.points_per_subspace,
        noise_std=args.noise_std,
        seed=args.seed,
    )
    x, labels = gen_synthetic(cfg)
    out = _out_dir(args)
    save_matrix(x, out / "activations.npy")
    save_labels(labels, out / "labels.txt")
    manifest = {
        "records": [{"layer_name": "synthetic", "epoch": None, "matrix_path": "activations.npy"}],
        "labels_path": "labels.txt",
    }
    atomic_write_text(out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    write_report(
        {
            "suite": "synth",
            "shape": list(x.shape),
            "config": asdict(cfg),
        },
        out / "report.json",
    )


def _slug(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in name)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.handler(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary turns failures into exit codes
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
