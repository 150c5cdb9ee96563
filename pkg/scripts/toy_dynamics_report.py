"""Training-dynamics and instance analysis on the bundled toy-MLP fixture.

Prints per-layer modularity and CKA-to-final curves over the snapshot
epochs, then the label-assignment summary for the deepest layer.
"""

import argparse
from pathlib import Path

from sscgraph import (
    SscConfig,
    load_manifest,
    run_instance_analysis,
    run_training_dynamics,
    write_report,
)

DEFAULT_MANIFEST = Path(__file__).resolve().parent.parent / "data" / "toy_mlp" / "manifest.json"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--manifest", type=Path, default=DEFAULT_MANIFEST)
    parser.add_argument("--out-dir", type=Path, default=Path("out/toy_dynamics"))
    parser.add_argument("--queries", default="0,100,200")
    args = parser.parse_args()

    manifest = load_manifest(args.manifest)
    dynamics = run_training_dynamics(manifest, SscConfig())
    epochs = dynamics["per_layer"][dynamics["layers"][0]]["epochs"]
    print(f"epochs: {epochs} (final = {dynamics['final_epoch']})")
    print(f"{'layer':>10} | {'modularity':^24} | {'ssc-cka to final':^24}")
    for name in dynamics["layers"]:
        curve = dynamics["per_layer"][name]
        mods = "  ".join(f"{v:6.4f}" for v in curve["modularity"])
        ckas = "  ".join(f"{v:6.4f}" for v in curve["ssc_cka_to_final"])
        print(f"{name:>10} | {mods} | {ckas}")

    deepest = dynamics["layers"][-1]
    queries = [int(q) for q in args.queries.split(",") if q.strip()]
    instances = run_instance_analysis(
        manifest, SscConfig(), queries=queries, k=8,
        layer=deepest, epoch=dynamics["final_epoch"],
    )
    summary = instances["summary"]
    print(f"\ndeepest layer ({deepest}) at epoch {dynamics['final_epoch']}:")
    print(f"  ssc-label accuracy   {summary['ssc_label_accuracy']:.3f}")
    print(f"  network accuracy     {summary['network_accuracy']:.3f}")
    print(f"  label agreement      {summary['ssc_network_agreement']:.3f}")
    for row in instances["queries"]:
        top = ", ".join(str(n["index"]) for n in row["neighbors"][:8])
        print(
            f"  sample {row['index']:>3}: true={row['true_label']} ssc={row['ssc_label']} "
            f"net={row.get('network_prediction', '-')} neighbors=[{top}]"
        )

    args.out_dir.mkdir(parents=True, exist_ok=True)
    write_report(dynamics, args.out_dir / "dynamics.json")
    write_report(instances, args.out_dir / "instances.json")
    print(f"\nreports in {args.out_dir}")


if __name__ == "__main__":
    main()
