"""Fitted log-log slopes of MMD(F_n) over sliding windows of n.

Besides the kernels it fits the exact x^2 quadrature error of F_n, the
quantity that bounds the MMD of any kernel whose RKHS contains x^2.  On
desk-scale n the smooth kernels follow that error more closely than the
n^(-3/2) envelope.

    python3 scripts/rate_study.py --n-max 250 --window 100
"""
import argparse

from fareymmd.analysis import CurvePoint, normalized_curve, rate_fit
from fareymmd.farey import farey_sequence
from fareymmd.mmd import mikolas_error_x2

KERNELS = ("brownian", "matern12:1", "matern32", "matern52", "ibm1", "ibm2")


def x2_curve(n_max):
    top = farey_sequence(n_max)
    curve = []
    for n in range(2, n_max + 1):
        seq = top.restrict(n)
        err = float(mikolas_error_x2(seq))
        curve.append(CurvePoint(n, seq.N, err, err * n**1.5))
    return curve


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=250)
    parser.add_argument("--window", type=int, default=100)
    parser.add_argument("--step", type=int, default=50)
    parser.add_argument("--kernel", action="append", help="override the kernel list")
    args = parser.parse_args()

    curves = {k: normalized_curve(k, args.n_max) for k in args.kernel or KERNELS}
    curves["x^2 error"] = x2_curve(args.n_max)
    # the last five windows, the final one ending at n_max
    starts = sorted(range(args.n_max - args.window, 1, -args.step))[-5:]
    print("series        " + "".join(f"[{s},{s + args.window}]".rjust(12) for s in starts)
          + "     [50,n_max]")
    for name, curve in curves.items():
        slopes = [rate_fit(curve, s, s + args.window).slope for s in starts]
        full = rate_fit(curve, 50, args.n_max).slope
        print(f"{name:<14}" + "".join(f"{s:12.4f}" for s in slopes) + f"{full:15.4f}")


if __name__ == "__main__":
    main()
