#!/usr/bin/env python3
"""Build the binary splice benchmark (1000 train / 2175 test, 60 features) in
LIBSVM format from the UCI splice-junction sequences.

The LIBSVM/Delve splice files are derived from the UCI molecular-biology
splice-junction data: sequences containing ambiguous nucleotide codes are
dropped (3190 -> 3175), intron/exon boundaries (EI or IE) form the +1 class
and non-boundaries (N) the -1 class, and each of the 60 positions is coded
by base chemistry: purines (A, G) as +1 and pyrimidines (C, T) as -1.

The raw sequences are taken from the ``keel-ds`` wheel on PyPI, which
bundles the UCI file. Pass ``--raw path/to/splice.dat`` to use a local copy.
"""

import argparse
import pathlib
import random
import subprocess
import sys
import tempfile
import zipfile

CODE = {"A": 1, "G": 1, "C": -1, "T": -1}
RAW_MEMBER = "keel_ds/data/balanced/raw/splice.dat"


def load_raw(raw_path):
    if raw_path:
        return pathlib.Path(raw_path).read_text()
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "-q",
             "-d", tmp, "keel-ds==0.2.5"],
            check=True)
        wheel = next(pathlib.Path(tmp).glob("keel_ds-*.whl"))
        with zipfile.ZipFile(wheel) as zf:
            return zf.read(RAW_MEMBER).decode()


def to_libsvm(row):
    *seq, cls = row
    label = "+1" if cls in ("EI", "IE") else "-1"
    feats = " ".join(f"{i + 1}:{CODE[c]}" for i, c in enumerate(seq))
    return f"{label} {feats}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--raw", help="local UCI splice.dat (comma separated)")
    ap.add_argument("--out-dir", default="data")
    ap.add_argument("--seed", type=int, default=20240101)
    ap.add_argument("--train-size", type=int, default=1000)
    args = ap.parse_args()

    rows = [[tok.strip() for tok in line.split(",")]
            for line in load_raw(args.raw).splitlines() if line.strip()]
    rows = [r for r in rows if all(c in CODE for c in r[:-1])]
    if len(rows) != 3175:
        sys.exit(f"expected 3175 unambiguous sequences, got {len(rows)}")

    random.Random(args.seed).shuffle(rows)
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    train, test = rows[:args.train_size], rows[args.train_size:]
    (out / "splice").write_text("".join(to_libsvm(r) + "\n" for r in train))
    (out / "splice.t").write_text("".join(to_libsvm(r) + "\n" for r in test))
    print(f"wrote {len(train)} train / {len(test)} test rows to {out}")


if __name__ == "__main__":
    main()
