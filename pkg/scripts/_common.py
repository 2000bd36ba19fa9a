import argparse
from pathlib import Path

import numpy as np


def parser(doc):
    ap = argparse.ArgumentParser(description=doc.strip().splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--plot", action="store_true", help="also save a PNG (needs matplotlib)")
    return ap


def save(out: Path, name: str, header: list[str], columns) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    np.savetxt(path, np.column_stack(columns), delimiter=",", header=",".join(header), comments="", fmt="%.12g")
    print(f"wrote {path}")
    return path


def pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt
