"""Rebuild the FIMI ``chess.dat`` file from the UCI kr-vs-kp table.

FIMI's chess dataset encodes every (attribute, value) pair of the UCI
King-Rook vs King-Pawn table as one item, so each of the 3196 board positions
becomes a transaction of 37 items.  A copy of the table ships with
scikit-learn's test data (OpenML id 3), which lets us rebuild the file offline::

    python tools/make_chess.py tests/data/chess.dat
"""
import gzip
import sys
from pathlib import Path

import sklearn

ARFF = (Path(sklearn.__file__).parent / "datasets" / "tests" / "data" /
        "openml" / "id_3" / "data-v1-dl-3.arff.gz")


def read_rows(path=ARFF):
    rows = []
    in_data = False
    with gzip.open(path, "rt", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            if line.lower() == "@data":
                in_data = True
                continue
            if in_data:
                rows.append([v.strip("'") for v in line.split(",")])
    return rows


def encode(rows):
    """Map each (column, value) pair to an integer item, numbered from 1."""
    codes = {}
    out = []
    for row in rows:
        items = []
        for col, value in enumerate(row):
            key = (col, value)
            if key not in codes:
                codes[key] = len(codes) + 1
            items.append(codes[key])
        out.append(sorted(items))
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    target = Path(argv[0]) if argv else Path("chess.dat")
    transactions = encode(read_rows())
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        for t in transactions:
            fh.write(" ".join(map(str, t)) + "\n")
    print(f"wrote {len(transactions)} transactions to {target}")


if __name__ == "__main__":
    main()
