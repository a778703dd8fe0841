"""Command-line front end: reproducible experiments with CSV/JSON output.

Every stochastic command takes an explicit --seed and records (seed, n) in
its output; CSV files start with a comment header
``# latdir v<version>, seed=<seed>, cmd=<command line>`` so runs are
self-describing.  Exit codes: 0 success, 2 invalid input, 3 capacity.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .diophantine import (
    CBRT2,
    CBRT4,
    GOLDEN,
    SQRT2,
    dioph_scan,
    rational_divergence_probe,
)
from .errors import CapacityError, LatdirError
from .escape import horocycle_escape_integral
from .lattice import (
    AffineLatticeSpec,
    Annulus,
    DomainShape,
    Mat2,
    Square,
    directions,
    enumerate_points,
    lattice_from_json,
)
from .limit import (
    sample_count_distribution,
    siegel_average,
    tail_exponent,
)
from .stats import (
    IntervalBox,
    MeasureSpec,
    MomentSpec,
    mixed_moment,
    pair_correlation,
    spacing_histogram,
)

CONSTANTS = {"cbrt2": CBRT2, "cbrt4": CBRT4, "sqrt2": SQRT2, "golden": GOLDEN}


def parse_real(tok: str) -> float:
    """Real number, fraction p/q, or one of the symbolic constants."""
    t = tok.strip()
    sign = 1.0
    if t.startswith("-"):
        sign, t = -1.0, t[1:]
    elif t.startswith("+"):
        t = t[1:]
    if t.lower() in CONSTANTS:
        return sign * CONSTANTS[t.lower()]
    if "/" in t:
        num, den = t.split("/", 1)
        return sign * float(Fraction(int(num), int(den)))
    return sign * float(t)


def parse_reals(s: str, n: int | None = None):
    vals = [parse_real(t) for t in s.split(",") if t.strip()]
    if n is not None and len(vals) != n:
        raise ValueError(f"expected {n} comma-separated values, got {len(vals)}")
    return vals


def parse_fractions(s: str):
    out = []
    for t in s.split(","):
        t = t.strip()
        if "/" in t:
            num, den = t.split("/", 1)
            out.append(Fraction(int(num), int(den)))
        else:
            out.append(Fraction(int(t)))
    return out


def parse_interval(s: str):
    a, b = s.split(":")
    return (parse_real(a), parse_real(b))


def parse_bins(s: str) -> np.ndarray:
    lo, hi, step = (parse_real(t) for t in s.split(":"))
    if step <= 0 or hi <= lo:
        raise ValueError(f"bad bin spec {s!r}")
    n = int(round((hi - lo) / step))
    if n < 1 or abs(lo + n * step - hi) > 1e-9 * max(1.0, abs(hi)):
        raise ValueError(f"bin range {s!r} is not a whole number of steps")
    return lo + step * np.arange(n + 1)

def parse_complex_list(s: str):
    out = []
    for t in s.split(","):
        t = t.strip().replace("i", "j")
        out.append(complex(t))
    return out


def parse_shape(s: str) -> DomainShape:
    t = s.strip().lower()
    if t == "square":
        return Square()
    if t == "annulus":
        return Annulus(0.0)
    if t.startswith("annulus:"):
        return Annulus(parse_real(t.split(":", 1)[1]))
    raise ValueError(f"unknown shape {s!r}")


def parse_krange(s: str):
    if ".." in s:
        lo, hi = s.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(s)]


def _merge_negative_values(argv):
    """Join '--flag -1:2' into '--flag=-1:2' so argparse keeps the value."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (
            tok.startswith("--")
            and "=" not in tok
            and i + 1 < len(argv)
            and argv[i + 1].startswith("-")
            and len(argv[i + 1]) > 1
            and (argv[i + 1][1].isdigit() or argv[i + 1][1] == ".")
        ):
            out.append(tok + "=" + argv[i + 1])
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _lattice_from_args(args):
    if getattr(args, "spec_json", None):
        with open(args.spec_json, encoding="utf-8") as fh:
            return lattice_from_json(fh.read())
    basis = Mat2.from_array(np.array(parse_reals(args.basis, 4)).reshape(2, 2))
    xi = parse_reals(args.xi, 2)
    shape = parse_shape(args.shape)
    return AffineLatticeSpec(basis, (xi[0], xi[1])), shape, args.T


class _Out:
    """Output sink: a real file when --out is given, else stdout."""

    def __init__(self, path):
        self.path = path

    def __enter__(self):
        self.fh = open(self.path, "w", encoding="utf-8") if self.path else sys.stdout
        return self.fh

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()
        return False


def _header(args, seed) -> str:
    cmd = shlex.join(args._argv)
    return f"# latdir v{__version__}, seed={seed}, cmd={cmd}"


def _write_histogram(path, args, seed, hist):
    with _Out(path) as fh:
        fh.write(_header(args, seed) + "\n")
        fh.write("bin_lo,bin_hi,density\n")
        for lo, hi, m in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.masses):
            fh.write(f"{lo:.17g},{hi:.17g},{m:.17g}\n")


def _write_json(path, obj):
    text = json.dumps(obj, indent=2, sort_keys=True)
    with _Out(path) as fh:
        fh.write(text + "\n")


def cmd_enumerate(args) -> int:
    lat, shape, T = _lattice_from_args(args)
    pts = enumerate_points(lat, shape, T, max_points=args.max_points)
    dirs = directions(pts, T, shape)
    with _Out(args.out) as fh:
        fh.write(_header(args, "none") + "\n")
        fh.write("alpha\n")
        for a in dirs.alphas:
            fh.write(f"{a:.17g}\n")
    print(f"enumerate: N={dirs.N} directions at T={T} -> {args.out or 'stdout'}")
    return 0


def cmd_spacings(args) -> int:
    lat, shape, T = _lattice_from_args(args)
    dirs = directions(enumerate_points(lat, shape, T, max_points=args.max_points), T, shape)
    ks = parse_krange(args.k)
    edges = parse_bins(args.bins)
    for k in ks:
        hist = spacing_histogram(dirs, k, edges)
        if args.out and len(ks) > 1:
            stem, dot, suffix = args.out.rpartition(".")
            path = f"{stem}_k{k:02d}.{suffix}" if dot else f"{args.out}_k{k:02d}"
        else:
            path = args.out
        _write_histogram(path, args, "none", hist)
    print(f"spacings: N={dirs.N}, k={ks[0]}..{ks[-1]}, {len(ks)} histogram(s)")
    return 0


def cmd_paircorr(args) -> int:
    lat, shape, T = _lattice_from_args(args)
    dirs = directions(enumerate_points(lat, shape, T, max_points=args.max_points), T, shape)
    edges = parse_bins(args.bins)
    hist = pair_correlation(dirs, edges, fold=args.fold)
    _write_histogram(args.out, args, "none", hist)
    dev = float(np.mean(np.abs(hist.masses - 1.0)))
    print(f"paircorr: N={dirs.N}, {hist.masses.size} bins, mean |density-1| = {dev:.4f}")
    return 0


def cmd_moments(args) -> int:
    lat, shape, T = _lattice_from_args(args)
    dirs = directions(enumerate_points(lat, shape, T, max_points=args.max_points), T, shape)
    box = IntervalBox(tuple(parse_interval(s) for s in args.I))
    exps = parse_complex_list(args.s)
    spec = MomentSpec(tuple(exps), cap=args.K)
    lam = MeasureSpec.uniform(args.grid)
    val = mixed_moment(dirs, box, spec, lam, shifted=args.shifted)
    obj = {
        "s": [[z.real, z.imag] for z in exps],
        "K": args.K,
        "value_re": val.real,
        "value_im": val.imag,
        "shifted": bool(args.shifted),
    }
    _write_json(args.out, obj)
    print(f"moments: value = {val.real:.6f}{val.imag:+.6f}i (shifted={args.shifted})")
    return 0


def _box_from_args(args) -> IntervalBox:
    return IntervalBox(tuple(parse_interval(s) for s in args.I))


def _class_args(args):
    kw = {}
    if args.xi_class == "rational":
        if not args.pq:
            raise LatdirError("rational class needs --pq p1,p2,q")
        p1, p2, q = (int(t) for t in args.pq.split(","))
        kw = {"p": (p1, p2), "q": q}
    return kw


def cmd_limit_sample(args) -> int:
    rng = np.random.default_rng(args.seed)
    box = _box_from_args(args)
    dist = sample_count_distribution(args.c, args.xi_class, box, args.n, rng, **_class_args(args))
    with _Out(args.out) as fh:
        fh.write(_header(args, args.seed) + "\n")
        fh.write(",".join(f"k{j + 1}" for j in range(box.m)) + ",count\n")
        for k in sorted(dist.counts):
            fh.write(",".join(str(x) for x in k) + f",{dist.counts[k]}\n")
    mean = dist.moment([1.0] * box.m if box.m == 1 else [1.0] + [0.0] * (box.m - 1))
    print(f"limit-sample: n={args.n}, classes={len(dist.counts)}, mean k1 = {mean.estimate:.4f}")
    return 0


def cmd_limit_moments(args) -> int:
    rng = np.random.default_rng(args.seed)
    box = _box_from_args(args)
    powers = parse_reals(args.powers)
    if len(powers) != box.m:
        raise LatdirError("need one power per interval")
    dist = sample_count_distribution(args.c, args.xi_class, box, args.n, rng, **_class_args(args))
    heavy_at = 1.5 if args.xi_class in ("integer", "rational") else 2.0
    if sum(powers) >= heavy_at:
        res = dist.moment_mom(powers)
        method = "median_of_means"
    else:
        res = dist.moment(powers)
        method = "mean"
    exact = _exact_limit_moment(powers, box)
    obj = {
        "estimate": res.estimate,
        "se": res.se,
        "exact": exact,
        "n": args.n,
        "seed": args.seed,
        "powers": powers,
        "method": method,
    }
    _write_json(args.out, obj)
    print(f"limit-moments: {res.estimate:.5f} +- {res.se:.5f} (exact {exact}, {method})")
    return 0


def _exact_limit_moment(powers, box: IntervalBox):
    lengths = box.lengths
    if powers == [1.0] and box.m == 1:
        return float(lengths[0])
    if powers == [2.0] and box.m == 1:
        return float(lengths[0] + lengths[0] ** 2)
    if box.m == 2 and powers == [1.0, 1.0]:
        (a1, b1), (a2, b2) = box.intervals
        inter = max(0.0, min(b1, b2) - max(a1, a2))
        return float(inter + lengths[0] * lengths[1])
    return None


def cmd_tails(args) -> int:
    rng = np.random.default_rng(args.seed)
    box = _box_from_args(args)
    dist = sample_count_distribution(args.c, args.xi_class, box, args.n, rng, **_class_args(args))
    slope = tail_exponent(dist, args.kmin)
    obj = {
        "slope": slope,
        "k_min": args.kmin,
        "n": args.n,
        "seed": args.seed,
        "xi_class": args.xi_class,
    }
    _write_json(args.out, obj)
    print(f"tails: slope = {slope:.3f} ({args.xi_class} class, n={args.n})")
    return 0


def cmd_siegel(args) -> int:
    rng = np.random.default_rng(args.seed)
    res = siegel_average(args.which, args.n, rng)
    obj = {
        "estimate": res.estimate,
        "se": res.se,
        "exact": res.exact,
        "n": res.n,
        "seed": args.seed,
        "which": args.which,
    }
    _write_json(args.out, obj)
    print(f"siegel {args.which}: {res.estimate:.6f} +- {res.se:.6f} (exact {res.exact:.6f})")
    return 0


def cmd_cusp_sum(args) -> int:
    xi = parse_reals(args.xi, 2)
    M = Mat2.from_array(np.array(parse_reals(args.basis, 4)).reshape(2, 2))
    support = parse_interval(args.support)
    Rs = parse_reals(args.R)
    vs = parse_reals(args.v)
    rows = []
    for R in Rs:
        for v in vs:
            val = horocycle_escape_integral(
                M, xi, args.beta, R, v, support, n_quad=args.n_quad
            )
            rows.append((R, v, val))
    with _Out(args.out) as fh:
        fh.write(_header(args, "none") + "\n")
        fh.write("R,v,integral\n")
        for R, v, val in rows:
            fh.write(f"{R:.17g},{v:.17g},{val:.17g}\n")
    print(f"cusp-sum: {len(rows)} (R, v) points, beta={args.beta}")
    return 0


def cmd_dioph(args) -> int:
    xi = parse_fractions(args.xi) if args.exact else parse_reals(args.xi, 2)
    report = dioph_scan(xi, args.kappa, args.radius)
    obj = {
        "kappa": report.kappa,
        "radius": report.search_radius,
        "min_value": report.min_value,
        "argmin": list(report.argmin),
    }
    _write_json(args.out, obj)
    print(f"dioph: min = {report.min_value:.6g} at r={report.argmin[:2]}, m={report.argmin[2]}")
    return 0


def cmd_singular_probe(args) -> int:
    xi = parse_fractions(args.xi)
    r = [int(t) for t in args.r.split(",")]
    Ts = parse_reals(args.T_list)
    counts = rational_divergence_probe(xi, r, args.eps, Ts, c=args.c)
    with _Out(args.out) as fh:
        fh.write(_header(args, "none") + "\n")
        fh.write("T,count\n")
        for T, cnt in zip(Ts, counts):
            fh.write(f"{T:.17g},{cnt}\n")
    print(f"singular-probe: counts {counts} at T={Ts}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latdir",
        description="Fine-scale statistics of directions in affine planar lattices.",
    )
    parser.add_argument("--version", action="version", version=f"latdir {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_lattice_flags(p, default_T=1000.0):
        p.add_argument("--xi", default="0,0", help="shift vector, e.g. cbrt4,cbrt2 or 1/2,1/2")
        p.add_argument("--basis", default="1,0,0,1", help="row-major basis a,b,c,d (det 1)")
        p.add_argument("--shape", default="annulus:0", help="annulus[:c] or square")
        p.add_argument("--T", type=parse_real, default=default_T)
        p.add_argument("--spec-json", help="JSON file with basis/shift/shape/T")
        p.add_argument("--max-points", type=float, default=2e8, dest="max_points_raw")

    def add_common(p):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None, help="accepted for compatibility")

    p = sub.add_parser("enumerate", help="emit the sorted direction angles as CSV")
    add_lattice_flags(p)
    add_common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("spacings", help="k-th neighbor spacing histograms")
    add_lattice_flags(p)
    add_common(p)
    p.add_argument("--k", default="1", help="single k or a range like 1..15")
    p.add_argument("--bins", default="0:6:0.1")
    p.set_defaults(func=cmd_spacings)

    p = sub.add_parser("paircorr", help="two-point correlation histogram")
    add_lattice_flags(p)
    add_common(p)
    p.add_argument("--bins", default="-10:10:0.5")
    p.add_argument("--fold", action="store_true", help="histogram |difference| instead")
    p.set_defaults(func=cmd_paircorr)

    p = sub.add_parser("moments", help="mixed window-count moments")
    add_lattice_flags(p)
    add_common(p)
    p.add_argument("--I", action="append", required=True, help="interval a:b (repeatable)")
    p.add_argument("--s", default="1", help="comma-separated exponents, complex as re+imi")
    p.add_argument("--K", type=int, default=None, help="restrict to max count <= K")
    p.add_argument("--shifted", action="store_true", help="use the (count+1) convention")
    p.add_argument("--grid", type=int, default=20_001)
    p.set_defaults(func=cmd_moments)

    def add_limit_flags(p):
        add_common(p)
        p.add_argument("--c", type=parse_real, default=0.0)
        p.add_argument("--xi-class", choices=("integer", "rational", "irrational"),
                       default="irrational", dest="xi_class")
        p.add_argument("--pq", help="p1,p2,q for the rational class")
        p.add_argument("--I", action="append", required=True)
        p.add_argument("--n", type=lambda s: int(float(s)), default=100_000)

    p = sub.add_parser("limit-sample", help="Monte Carlo law of cone counts")
    add_limit_flags(p)
    p.set_defaults(func=cmd_limit_sample)

    p = sub.add_parser("limit-moments", help="moments of the limiting counts")
    add_limit_flags(p)
    p.add_argument("--powers", default="1")
    p.set_defaults(func=cmd_limit_moments)

    p = sub.add_parser("tails", help="tail exponent of the limiting counts")
    add_limit_flags(p)
    p.add_argument("--kmin", type=int, default=5)
    p.set_defaults(func=cmd_tails)

    p = sub.add_parser("siegel", help="Gaussian lattice-sum mean values")
    add_common(p)
    p.add_argument("--which", choices=("classic", "affine_pair"), default="classic")
    p.add_argument("--n", type=lambda s: int(float(s)), default=100_000)
    p.set_defaults(func=cmd_siegel)

    p = sub.add_parser("cusp-sum", help="horocycle averages of the cusp sum")
    add_common(p)
    p.add_argument("--xi", default="0,0")
    p.add_argument("--basis", default="1,0,0,1")
    p.add_argument("--beta", type=parse_real, default=0.9)
    p.add_argument("--R", default="2,8,32", help="comma-separated cutoffs")
    p.add_argument("--v", default="1e-2,1e-3,1e-4", help="comma-separated heights")
    p.add_argument("--support", default="-1:1")
    p.add_argument("--n-quad", type=int, default=4096, dest="n_quad")
    p.set_defaults(func=cmd_cusp_sum)

    p = sub.add_parser("dioph", help="Diophantine-type scan")
    add_common(p)
    p.add_argument("--xi", required=True)
    p.add_argument("--kappa", type=parse_real, default=2.0)
    p.add_argument("--radius", type=int, default=100)
    p.add_argument("--exact", action="store_true", help="treat xi entries as exact fractions")
    p.set_defaults(func=cmd_dioph)

    p = sub.add_parser("singular-probe", help="linear count growth along a rational direction")
    add_common(p)
    p.add_argument("--xi", required=True, help="exact rational shift, e.g. 1/2,1/2")
    p.add_argument("--r", required=True, help="integer direction r1,r2")
    p.add_argument("--eps", type=parse_real, default=0.5)
    p.add_argument("--c", type=parse_real, default=0.0)
    p.add_argument("--T-list", default="250,500,1000", dest="T_list")
    p.set_defaults(func=cmd_singular_probe)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    argv = _merge_negative_values(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._argv = argv
    if getattr(args, "threads", None) is None:
        # accepted for interface compatibility; results never depend on it
        args.threads = int(os.environ.get("LATDIR_THREADS", "1") or 1)
    if hasattr(args, "max_points_raw"):
        args.max_points = int(args.max_points_raw)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (LatdirError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
