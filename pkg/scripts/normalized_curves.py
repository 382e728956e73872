"""Normalised MMD curves MMD(F_n) n^(3/2) for the three Matern kernels.

Writes a CSV table and its SVG rendering, e.g.

    python3 scripts/normalized_curves.py --n-max 250 --out results/
"""
import argparse
import pathlib
import time

from fareymmd.cli import cmd_plot, cmd_table
from fareymmd.kernels import KernelSpec

KERNELS = ("matern12:1", "matern32", "matern52")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=250)
    parser.add_argument("--out", type=pathlib.Path, default=pathlib.Path("results"))
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    table = cmd_table(args.n_max, [KernelSpec.parse(k) for k in KERNELS], args.threads)
    (args.out / "normalized_curves.csv").write_text(table)
    (args.out / "normalized_curves.svg").write_text(cmd_plot(table))
    print(f"wrote {args.out}/normalized_curves.{{csv,svg}} in {time.perf_counter() - start:.1f} s")


if __name__ == "__main__":
    main()
