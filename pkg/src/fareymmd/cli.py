"""Command-line front end: Farey listings, MMD tables, rate reports, SVG plots.

Exit codes: 0 success, 2 usage or input error, 3 numeric overflow
(n above the supported bound).
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .analysis import CurvePoint, default_window, farey_mmds, planted_curve, rate_fit
from .farey import FareyRangeError, farey_sequence
from .kernels import KernelSpec, make_kernel
from .mmd import discrepancy_stats, mmd_squared

HEADER = "n,N,kernel,lambda,mmd,mmd_normalized,franel_sum,l2_discretized,mikolas_error"
EXIT_OK, EXIT_USAGE, EXIT_OVERFLOW = 0, 2, 3
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    n_max: int | None = None
    n_lo: int | None = None
    kernels: list[KernelSpec] = field(default_factory=list)
    output: str | None = None
    format: str = "text"
    threads: int = 1


def _real(x: float) -> str:
    return f"{x:.17g}"


def _rational(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


def _lambda(spec: KernelSpec) -> str:
    return _real(spec.lam) if spec.family == "matern" else ""


def _threads(text: str) -> int:
    if text == "auto":
        return os.cpu_count() or 1
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"threads must be a positive integer or 'auto': {text!r}")
    if k < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return k


def _kernel(text: str) -> KernelSpec:
    try:
        return KernelSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


# -- commands ---------------------------------------------------------------


def cmd_farey(n: int, fmt: str = "text") -> str:
    seq = farey_sequence(n)
    if fmt == "csv":
        lines = ["index,num,den"]
        lines += [f"{i},{p},{q}" for i, (p, q) in enumerate(zip(seq.num, seq.den), 1)]
        return "\n".join(lines) + "\n"
    return str(seq) + "\n"


def cmd_mmd(n: int, kernels: Sequence[KernelSpec], method: str = "auto") -> str:
    seq = farey_sequence(n)
    lines = []
    for spec in kernels:
        r = mmd_squared(make_kernel(spec), seq, method=method)
        lines.append(
            f"kernel={spec.kernel_id} lambda={_lambda(spec)} n={n} N={r.N} "
            f"method={r.method} mmd_squared={_real(r.mmd_squared)} mmd={_real(r.mmd)}"
        )
    return "\n".join(lines) + "\n"


def table_rows(n_max: int, kernels: Sequence[KernelSpec], threads: int = 1) -> list[list[str]]:
    if n_max < 2:
        raise InputError("n_max must be >= 2")
    if not kernels:
        raise InputError("at least one --kernel is required")
    top = farey_sequence(n_max)
    ns = list(range(2, n_max + 1))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        stats = dict(zip(ns, pool.map(lambda n: discrepancy_stats(top.restrict(n)), ns)))
    rows = []
    for spec in kernels:
        for r in farey_mmds(spec, n_max, threads=threads):
            st = stats[r.n]
            rows.append([
                str(r.n), str(r.N), spec.kernel_id, _lambda(spec),
                _real(r.mmd), _real(r.mmd * r.n**1.5),
                _rational(st.franel_sum), _real(st.l2_discretized),
                _rational(st.mikolas_error_x2),
            ])
    rows.sort(key=lambda row: (int(row[0]), row[2], row[3]))
    return rows


def cmd_table(n_max: int, kernels: Sequence[KernelSpec], threads: int = 1) -> str:
    rows = table_rows(n_max, kernels, threads)
    return "\n".join([HEADER] + [",".join(row) for row in rows]) + "\n"


def cmd_rates(
    n_max: int | None,
    kernels: Sequence[KernelSpec],
    n_lo: int | None = None,
    threads: int = 1,
    selftest: bool = False,
) -> str:
    lines = ["# rate diagnostic (not a verification): least-squares slope of log MMD(F_n) on log n"]
    if selftest:
        fit = rate_fit(planted_curve(-1.5, 250), 50, 250)
        lines.append(
            f"selftest planted=n^-3/2 slope={fit.slope:.6f} "
            f"intercept={fit.intercept:.6f} residual_l2={fit.residual_l2:.3e}"
        )
    if not kernels:
        if selftest:
            return "\n".join(lines) + "\n"
        raise InputError("at least one --kernel is required")
    if n_max is None:
        raise InputError("--n-max is required")
    lo, hi = default_window(n_max)
    lo = lo if n_lo is None else n_lo
    for spec in kernels:
        results = farey_mmds(spec, n_max, threads=threads)
        curve = [CurvePoint(r.n, r.N, r.mmd, r.mmd * r.n**1.5) for r in results]
        fit = rate_fit(curve, lo, hi)
        lines.append(
            f"kernel={spec.kernel_id} lambda={_lambda(spec)} n_lo={lo} n_hi={hi} "
            f"slope={fit.slope:.6f} intercept={fit.intercept:.6f} "
            f"residual_l2={fit.residual_l2:.3e} target=-1.5"
        )
    return "\n".join(lines) + "\n"


def read_table(text: str) -> dict[str, list[tuple[int, float]]]:
    """Normalised-MMD series per kernel label from table CSV text."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("empty CSV")
    if ",".join(header) != HEADER:
        raise InputError("CSV header does not match the table format")
    series: dict[str, list[tuple[int, float]]] = {}
    for lineno, row in enumerate(reader, 2):
        if not row:
            continue
        if len(row) != 9:
            raise InputError(f"line {lineno}: expected 9 fields, got {len(row)}")
        try:
            n, value = int(row[0]), float(row[5])
        except ValueError:
            raise InputError(f"line {lineno}: malformed number")
        label = row[2] + (f" (lambda={row[3]})" if row[3] else "")
        series.setdefault(label, []).append((n, value))
    if not series:
        raise InputError("CSV has no data rows")
    return series


def render_svg(series: dict[str, list[tuple[int, float]]]) -> str:
    width, height = 720, 440
    left, right, top, bottom = 70, 180, 30, 50
    ns = [n for pts in series.values() for n, _ in pts]
    ys = [y for pts in series.values() for _, y in pts]
    n_lo, n_hi = min(ns), max(ns)
    n_hi = n_hi if n_hi > n_lo else n_lo + 1
    y_hi = max(ys) * 1.05 if max(ys) > 0 else 1.0
    pw, ph = width - left - right, height - top - bottom

    def sx(n):
        return left + (n - n_lo) / (n_hi - n_lo) * pw

    def sy(y):
        return top + ph - y / y_hi * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for i in range(5):
        n = n_lo + (n_hi - n_lo) * i / 4
        y = y_hi * i / 4
        out.append(f'<text x="{sx(n):.2f}" y="{top + ph + 18}" text-anchor="middle">{n:.0f}</text>')
        out.append(f'<text x="{left - 6}" y="{sy(y) + 4:.2f}" text-anchor="end">{y:.3g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 8}" text-anchor="middle">n</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.2f})">MMD(F_n) n^(3/2)</text>'
    )
    for i, (label, pts) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{sx(n):.2f},{sy(y):.2f}" for n, y in sorted(pts))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{coords}"/>')
        ly = top + 16 * (i + 1)
        out.append(f'<line x1="{width - right + 10}" y1="{ly - 4}" x2="{width - right + 30}" '
                   f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{width - right + 36}" y="{ly}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_plot(csv_text: str) -> str:
    return render_svg(read_table(csv_text))


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fareymmd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, kernels=True):
        p.add_argument("--output", help="output path (default: standard output)")
        if kernels:
            p.add_argument("--kernel", dest="kernels", action="append", type=_kernel, default=[],
                           metavar="ID[:LAMBDA]",
                           help="brownian, matern12, matern32, matern52, ibm<m>, expxy")
            p.add_argument("--threads", type=_threads, default=1, metavar="K|auto")

    p = sub.add_parser("farey", help="list the Farey sequence F_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    common(p, kernels=False)

    p = sub.add_parser("mmd", help="squared MMD of F_n for each kernel")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("auto", "naive", "fast", "lemma1"), default="auto")
    common(p)

    p = sub.add_parser("table", help="CSV (or SVG) of MMDs and discrepancies for n = 2..n_max")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    common(p)

    p = sub.add_parser("rates", help="log-log slope diagnostics per kernel")
    p.add_argument("--n-max", type=int)
    p.add_argument("--n-lo", type=int)
    p.add_argument("--selftest", action="store_true", help="fit a planted n^-3/2 curve")
    common(p)

    p = sub.add_parser("plot", help="SVG of normalised MMD curves from a table CSV")
    p.add_argument("--input", default="-", help="table CSV path (default: standard input)")
    common(p, kernels=False)
    return parser


def _run(args) -> str:
    if args.command == "farey":
        return cmd_farey(args.n, args.format)
    if args.command == "mmd":
        if not args.kernels:
            raise InputError("at least one --kernel is required")
        return cmd_mmd(args.n, args.kernels, args.method)
    if args.command == "table":
        if args.format == "svg":
            rows = table_rows(args.n_max, args.kernels, args.threads)
            return cmd_plot("\n".join([HEADER] + [",".join(r) for r in rows]))
        return cmd_table(args.n_max, args.kernels, args.threads)
    if args.command == "rates":
        return cmd_rates(args.n_max, args.kernels, args.n_lo, args.threads, args.selftest)
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(str(exc))
    return cmd_plot(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = _run(args)
    except FareyRangeError as exc:
        print(f"fareymmd: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except (ValueError, TypeError) as exc:
        print(f"fareymmd: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
