"""Pairwise layer-similarity demo on synthetic union-of-subspaces layers.

Builds three activation matrices with progressively scrambled block
structure, runs the pairwise CKA suite over them, and renders heatmaps.
A stand-in for the all-layer architecture heatmaps on a real network.
"""

import argparse
import json
from pathlib import Path

import numpy as np

from sscgraph import (
    SscConfig,
    SyntheticConfig,
    gen_synthetic,
    load_manifest,
    render_heatmap,
    run_pairwise_architecture,
    save_labels,
    save_matrix,
    write_report,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", type=Path, default=Path("out/pairwise_demo"))
    args = parser.parse_args()

    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    base, labels = gen_synthetic(
        SyntheticConfig(
            num_subspaces=3, ambient_dim=30, subspace_dim=3, points_per_subspace=20,
            noise_std=0.01, seed=args.seed,
        )
    )
    records = []
    layer = base
    for idx in range(3):
        name = f"layer{idx}"
        save_matrix(layer, out / f"{name}.npy")
        records.append({"layer_name": name, "matrix_path": f"{name}.npy"})
        # next "layer": mix a fraction of samples across subspaces
        swap = rng.permutation(layer.shape[1])[:10]
        layer = layer.copy()
        layer[:, swap] = layer[:, rng.permutation(swap)]
    save_labels(labels, out / "labels.txt")
    (out / "manifest.json").write_text(
        json.dumps({"records": records, "labels_path": "labels.txt"}, indent=2) + "\n"
    )

    report = run_pairwise_architecture(load_manifest(out / "manifest.json"), SscConfig())
    write_report(report, out / "report.json")
    for key in ("ssc_cka", "linear_cka"):
        render_heatmap(report[key], out / f"{key}.svg")
        print(f"{key}:")
        for row in report[key]:
            print("   " + "  ".join(f"{v:6.3f}" for v in row))
    print(f"artifacts in {out}")


if __name__ == "__main__":
    main()
