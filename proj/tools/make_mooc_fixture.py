#!/usr/bin/env python3
"""Regenerates data/mooc_synthetic/: 31 courses x 8 feature-set/algorithm models.

Clickstream-based models (clickstream, full) score well above the sparse
forum/quiz models on every course, so the Nemenyi test separates the two
feature groups. Output is deterministic.
"""
import json
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "mooc_synthetic"

FEATURE_SETS = [("clickstream", "engagement"), ("full", "engagement"), ("forum", "sparse"), ("quiz", "sparse")]
ALGORITHMS = ["adaboost", "cart"]
BASE = {
    ("clickstream", "adaboost"): 0.880, ("full", "adaboost"): 0.885,
    ("clickstream", "cart"): 0.870, ("full", "cart"): 0.865,
    ("forum", "adaboost"): 0.740, ("quiz", "adaboost"): 0.745,
    ("forum", "cart"): 0.735, ("quiz", "cart"): 0.740,
}


def main():
    rng = random.Random(20171)
    models = [(fs, grp, alg) for fs, grp in FEATURE_SETS for alg in ALGORITHMS]
    labels = [f"{alg}_{fs}" for fs, _, alg in models]
    rows = []
    for c in range(1, 32):
        course_offset = rng.uniform(-0.05, 0.05)
        cells = [BASE[(fs, alg)] + course_offset + rng.uniform(-0.02, 0.02) for fs, _, alg in models]
        rows.append((f"course_{c:02d}", cells))

    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "accuracy_wide.csv", "w", newline="\n") as f:
        f.write("dataset," + ",".join(labels) + "\n")
        for name, cells in rows:
            f.write(name + "," + ",".join(f"{v:.4f}" for v in cells) + "\n")

    manifest = {
        "metric_name": "accuracy",
        "direction": "maximize",
        "alpha": 0.05,
        "models": [
            {"label": label, "tags": {"feature_set": fs, "algorithm": alg, "feature_group": grp}}
            for label, (fs, grp, alg) in zip(labels, models)
        ],
    }
    with open(OUT / "manifest.json", "w", newline="\n") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
