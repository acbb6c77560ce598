#!/usr/bin/env python3
"""Plot training curves from one or more run*_metrics.csv files.

Usage:
    scripts/plot_metrics.py out/run0_metrics.csv [more.csv ...] [-o curves.png]

CSV schema (written by `sasq train`):
    epoch,train_loss,train_acc,val_loss,val_acc

With matplotlib installed this writes a PNG; otherwise it prints a compact
ASCII rendering of the validation accuracy curve.
"""

import argparse
import csv
import sys


def read_metrics(path):
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        expected = {"epoch", "train_loss", "train_acc", "val_loss", "val_acc"}
        if set(reader.fieldnames or []) != expected:
            sys.exit(f"{path}: unexpected columns {reader.fieldnames}")
        for row in reader:
            rows.append({k: float(v) for k, v in row.items()})
    if not rows:
        sys.exit(f"{path}: no records")
    return rows


def ascii_plot(name, rows, width=72, height=14):
    accs = [r["val_acc"] for r in rows]
    print(f"{name}: val_acc by epoch (1..{len(accs)}), final {accs[-1]:.3f}")
    step = max(1, len(accs) // width)
    cols = accs[::step]
    for level in range(height, -1, -1):
        y = level / height
        line = "".join("#" if a >= y else " " for a in cols)
        print(f"{y:4.2f} |{line}")
    print("     +" + "-" * len(cols))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv", nargs="+")
    ap.add_argument("-o", "--output", default="")
    args = ap.parse_args()

    series = [(path, read_metrics(path)) for path in args.csv]

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        for path, rows in series:
            ascii_plot(path, rows)
        if args.output:
            print("matplotlib not available; skipped PNG output", file=sys.stderr)
        return

    fig, (ax_loss, ax_acc) = plt.subplots(1, 2, figsize=(11, 4))
    for path, rows in series:
        epochs = [r["epoch"] for r in rows]
        ax_loss.plot(epochs, [r["train_loss"] for r in rows], label=f"{path} train")
        ax_loss.plot(epochs, [r["val_loss"] for r in rows], "--", label=f"{path} val")
        ax_acc.plot(epochs, [r["train_acc"] for r in rows], label=f"{path} train")
        ax_acc.plot(epochs, [r["val_acc"] for r in rows], "--", label=f"{path} val")
    ax_loss.set_xlabel("epoch")
    ax_loss.set_ylabel("loss")
    ax_acc.set_xlabel("epoch")
    ax_acc.set_ylabel("accuracy")
    ax_acc.set_ylim(0, 1.02)
    ax_loss.legend(fontsize=7)
    fig.tight_layout()
    out = args.output or "metrics.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
