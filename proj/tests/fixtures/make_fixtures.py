#!/usr/bin/env python3
"""Regenerates the checked-in test fixtures.

frames/       30 green-screen frames (240x240) with a skin-toned arm
backgrounds/  10 scene images, 4 of them square
eval/         groundtruth and prediction masks, pairs.jsonl and the
              expected metrics computed here by brute force
pipeline.toml configuration used by the end-to-end runs

Usage: python3 make_fixtures.py [output_dir]
"""

import json
import sys
from pathlib import Path

import numpy as np
from PIL import Image

FRAME_SIDE = 240
GREEN = np.array([40, 170, 70])
SKIN = np.array([224, 172, 105])


def save_png(path, array, mode=None):
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(array, mode).save(path, optimize=False)


def arm_frame(rng, index):
    h = w = FRAME_SIDE
    noise = rng.integers(-10, 11, size=(h, w, 3))
    frame = np.clip(GREEN + noise, 0, 255)
    if index == 10:
        return frame.astype(np.uint8)

    yy, xx = np.mgrid[0:h, 0:w]
    cx = 70 + 4 * index
    top = 120 + (index % 5) * 6
    forearm = (np.abs(xx - cx) <= 22) & (yy >= top)
    hand = ((xx - cx) / 30.0) ** 2 + ((yy - top) / 24.0) ** 2 <= 1.0
    arm = forearm | hand
    shade = 0.85 + 0.15 * (yy / h)
    skin = np.clip(SKIN[None, None, :] * shade[..., None]
                   + rng.integers(-12, 13, size=(h, w, 3)), 0, 255)
    frame = np.where(arm[..., None], skin, frame)

    if index == 20:
        # A prop hanging from the top edge: a false positive that QC rejects.
        frame[0:14, 10:24] = [200, 40, 40]

    # Isolated sensor specks.
    for _ in range(3):
        y, x = rng.integers(0, 100), rng.integers(0, w)
        frame[y, x] = [220, 30, 30]
    return frame.astype(np.uint8)


def scene(rng, width, height):
    yy, xx = np.mgrid[0:height, 0:width]
    base = np.stack([
        60 + 120 * xx / max(width - 1, 1),
        80 + 100 * yy / max(height - 1, 1),
        np.full((height, width), 140.0),
    ], axis=-1)
    for _ in range(6):
        x0, y0 = rng.integers(0, width), rng.integers(0, height)
        bw, bh = rng.integers(8, max(9, width // 3)), rng.integers(8, max(9, height // 3))
        base[y0:y0 + bh, x0:x0 + bw] = rng.integers(0, 256, size=3)
    return np.clip(base + rng.integers(-6, 7, size=base.shape), 0, 255).astype(np.uint8)


def iou(tp, fp, fn):
    d = tp + fp + fn
    return None if d == 0 else 100.0 * tp / d


def miss(tp, fn):
    d = fn + tp
    return None if d == 0 else 100.0 * fn / d


def mean_std(values):
    # Sequential sums in sample_id order, population divisor.
    total = 0.0
    for v in values:
        total += v
    mean = total / len(values)
    sq = 0.0
    for v in values:
        sq += (v - mean) * (v - mean)
    return mean, (sq / len(values)) ** 0.5


def summarize(records, dataset, scene=""):
    records = sorted(records, key=lambda r: r["sample_id"])
    pooled = {k: sum(r[k] for r in records) for k in ("tp", "fp", "fn", "tn")}
    ious = [r["iou_arm"] for r in records if r["iou_arm"] is not None]
    misses = [r["miss_rate"] for r in records if r["miss_rate"] is not None]
    out = {"dataset": dataset, "scene": scene, "n_samples": len(records),
           "n_undefined": len(records) - len(ious),
           "n_miss_undefined": len(records) - len(misses)}
    out["iou_mean"], out["iou_std"] = mean_std(ious) if ious else (None, None)
    out["miss_mean"], out["miss_std"] = mean_std(misses) if misses else (None, None)
    out["iou_micro"] = iou(pooled["tp"], pooled["fp"], pooled["fn"])
    out["miss_micro"] = miss(pooled["tp"], pooled["fn"])
    out["pooled"] = pooled
    return out


def eval_set(root, rng):
    side = 48
    yy, xx = np.mgrid[0:side, 0:side]
    pairs, records = [], []

    def blob(cx, cy, r):
        return ((xx - cx) ** 2 + (yy - cy) ** 2) <= r * r

    cases = []
    for i in range(8):
        gt = blob(14 + 2 * i, 30, 9 + i % 3)
        pred = blob(16 + 2 * i + (i % 4), 28 + i % 2, 8 + i % 4)
        cases.append(("synthA", "office" if i % 2 == 0 else "kitchen", gt, pred))
    empty = np.zeros((side, side), dtype=bool)
    cases.append(("synthB", "", empty, empty))
    cases.append(("synthB", "", empty, blob(20, 20, 5)))
    g = blob(24, 40, 10)
    cases.append(("synthB", "", g, g))
    cases.append(("synthB", "", blob(10, 40, 6), rng.random((side, side)) < 0.3))

    for n, (dataset, scene_name, gt, pred) in enumerate(cases):
        sid = f"{n:04d}"
        gt_name = f"gt/{sid}.png"
        pred_name = f"pred/{sid}.png"
        save_png(root / gt_name, np.where(gt, 255, 0).astype(np.uint8), "L")
        if n == 3:
            # Mid-gray levels exercise the threshold at 128.
            pred_bytes = np.where(pred, 200, 100).astype(np.uint8)
            pred_bytes[0, 0] = 0
        else:
            pred_bytes = np.where(pred, 255, 0).astype(np.uint8)
        save_png(root / pred_name, pred_bytes, "L")
        pred_read = pred_bytes >= 128

        tp = int(np.sum(gt & pred_read))
        fp = int(np.sum(~gt & pred_read))
        fn = int(np.sum(gt & ~pred_read))
        tn = int(gt.size - tp - fp - fn)
        rec = {"sample_id": sid, "dataset": dataset, "scene": scene_name,
               "tp": tp, "fp": fp, "fn": fn, "tn": tn,
               "iou_arm": iou(tp, fp, fn), "miss_rate": miss(tp, fn)}
        records.append(rec)
        pair = {"sample_id": sid, "gt_path": gt_name, "pred_path": pred_name,
                "dataset": dataset}
        if scene_name:
            pair["scene"] = scene_name
        pairs.append(pair)

    with open(root / "pairs.jsonl", "w", newline="\n") as f:
        for p in pairs:
            f.write(json.dumps(p) + "\n")

    summaries = []
    for dataset in sorted({r["dataset"] for r in records}):
        recs = [r for r in records if r["dataset"] == dataset]
        summaries.append(summarize(recs, dataset))
        for scene_name in sorted({r["scene"] for r in recs if r["scene"]}):
            summaries.append(summarize([r for r in recs if r["scene"] == scene_name],
                                       dataset, scene_name))
    with open(root / "expected.json", "w", newline="\n") as f:
        json.dump({"records": records, "summaries": summaries}, f, indent=2)
        f.write("\n")


PIPELINE_TOML = """\
schema_version = 1
seed = 7
threads = 2

[extract]
stride = 5

[composite]
target_size = 240

[metadata]
subject_id = "fixture-01"
gender = "female"
arm_pose = "open-palm"
scenario = "indoors"
outfit = "outfit1"
sleeve = "short"
ethnicity = "mixed"

[segmenter]
kind = "skin"
"""


def main():
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent
    rng = np.random.default_rng(20240611)

    for i in range(30):
        save_png(root / "frames" / f"frame_{i:06d}.png", arm_frame(rng, i))

    sizes = [(300, 300), (512, 512), (240, 240), (96, 96),
             (640, 480), (480, 640), (320, 240), (200, 100), (256, 255), (800, 600)]
    for n, (w, h) in enumerate(sizes):
        img = scene(rng, w, h)
        name = f"scene_{n:02d}"
        if n == 5:
            Image.fromarray(img).save(root / "backgrounds" / f"{name}.jpg", quality=90)
        else:
            save_png(root / "backgrounds" / f"{name}.png", img)

    eval_set(root / "eval", rng)
    (root / "pipeline.toml").write_text(PIPELINE_TOML)


if __name__ == "__main__":
    main()
