"""Finite-scale observables of a direction sequence.

Window counts, k-th neighbor spacing histograms, the two-point correlation
of scaled direction differences, mixed moments against a measure on the
circle, and an exact (breakpoint-integrated) two-window pair statistic.

All operations are read-only over a DirectionSet, whose ``alphas`` array is
sorted, so window counts reduce to binary searches.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidInputError
from .lattice import DirectionSet


@dataclass(frozen=True)
class IntervalBox:
    """Product of bounded intervals used as test windows."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        if not ivs:
            raise InvalidInputError("need at least one interval")
        for a, b in ivs:
            if not (np.isfinite(a) and np.isfinite(b) and a < b):
                raise InvalidInputError(f"bad interval ({a}, {b})")

    @property
    def m(self) -> int:
        return len(self.intervals)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([b - a for a, b in self.intervals])


def as_box(box) -> IntervalBox:
    if isinstance(box, IntervalBox):
        return box
    if np.ndim(box) == 1 and len(box) == 2:
        return IntervalBox((tuple(box),))
    return IntervalBox(tuple(tuple(iv) for iv in box))


@dataclass(frozen=True)
class MeasureSpec:
    """Probability measure on the circle given by a continuous density.

    The density is evaluated on a uniform grid of ``quadrature_points``;
    the grid must integrate it to 1 within 1e-6.
    """

    density: Callable
    quadrature_points: int = 20_001

    def __post_init__(self):
        if self.quadrature_points < 2:
            raise InvalidInputError("quadrature_points must be at least 2")
        total = float(np.sum(self.weights()))
        if abs(total - 1.0) > 1e-6:
            raise InvalidInputError(f"density integrates to {total}, not 1")

    @classmethod
    def uniform(cls, quadrature_points: int = 20_001) -> "MeasureSpec":
        return cls(lambda a: np.ones_like(np.asarray(a, dtype=float)), quadrature_points)

    def grid(self) -> np.ndarray:
        n = self.quadrature_points
        return np.arange(n, dtype=float) / n

    def weights(self) -> np.ndarray:
        g = self.grid()
        return np.asarray(self.density(g), dtype=float) / self.quadrature_points


@dataclass(frozen=True)
class MomentSpec:
    """Moment exponents s = (s_1, ..., s_m), optionally capped at count K."""

    exponents: tuple[complex, ...]
    cap: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(complex(s) for s in self.exponents))
        if self.cap is not None and self.cap < 0:
            raise InvalidInputError("cap must be nonnegative")

    @property
    def positive_real_sum(self) -> float:
        return float(sum(max(s.real, 0.0) for s in self.exponents))

    def requires_diophantine(self) -> bool:
        """True when convergence of the uncapped moment needs a shift of
        Diophantine type (positive real parts sum to 2 or more)."""
        return self.positive_real_sum >= 2.0


@dataclass(frozen=True, eq=False)
class Histogram:
    """Bin edges plus per-bin masses; ``normalization`` is density or count."""

    bin_edges: np.ndarray
    masses: np.ndarray
    normalization: str = "density"

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=float)
        masses = np.asarray(self.masses, dtype=float)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "masses", masses)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise InvalidInputError("bin edges must be strictly increasing")
        if masses.shape != (edges.size - 1,):
            raise InvalidInputError("need one mass per bin")

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    def total_mass(self) -> float:
        if self.normalization == "density":
            return float(np.sum(self.masses * self.widths))
        return float(np.sum(self.masses))


def window_counts(dirs: DirectionSet, interval, alphas) -> np.ndarray:
    """Number of directions in the shrunk window N^-1 * interval + alpha.

    The window is the half-open arc [alpha + a/N, alpha + b/N) on the
    circle; wrap-around is handled, and a window of length >= 1 returns N.
    Vectorized over ``alphas``.
    """
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise InvalidInputError(f"bad interval ({a}, {b})")
    N = dirs.N
    if N == 0:
        raise InvalidInputError("empty direction set")
    al = np.asarray(alphas, dtype=float)
    width = (b - a) / N
    if width >= 1.0:
        return np.full(al.shape, N, dtype=np.int64)
    A = dirs.alphas
    lo = np.mod(al + a / N, 1.0)
    hi = lo + width
    below = np.searchsorted(A, lo, side="left")
    wraps = hi > 1.0
    cnt = np.where(
        wraps,
        (N - below) + np.searchsorted(A, np.where(wraps, hi - 1.0, 0.0), side="left"),
        np.searchsorted(A, np.where(wraps, 1.0, hi), side="left") - below,
    )
    return cnt.astype(np.int64)


def counting_stat(dirs: DirectionSet, interval, alpha: float) -> int:
    """Scalar window count at a single circle position."""
    return int(window_counts(dirs, interval, np.array([alpha]))[0])


def spacing_histogram(dirs: DirectionSet, k: int, edges) -> Histogram:
    """Histogram of scaled k-th neighbor spacings N*(alpha_{j+k} - alpha_j).

    Spacings are cyclic (the last entries wrap past 1) and the histogram is
    density-normalized so the in-range mass is 1.
    """
    N = dirs.N
    if not 1 <= k < N:
        raise InvalidInputError(f"need 1 <= k < N, got k={k}, N={N}")
    A = dirs.alphas
    gaps = np.concatenate([A[k:], A[:k] + 1.0]) - A
    scaled = N * gaps
    edges = np.asarray(edges, dtype=float)
    counts, _ = np.histogram(scaled, bins=edges)
    total = counts.sum()
    widths = np.diff(edges)
    masses = counts / (total * widths) if total > 0 else np.zeros(counts.shape)
    return Histogram(edges, masses, "density")


def pair_correlation(
    dirs: DirectionSet,
    edges,
    density: Callable | None = None,
    fold: bool = False,
) -> Histogram:
    """Two-point correlation histogram of scaled direction differences.

    Counts ordered pairs j1 != j2 with N*(alpha_j1 - alpha_j2 + m) in each
    bin, divides by N and by the bin width.  Differences are signed; with
    ``fold=True`` each pair lands at its absolute difference instead (edges
    must then be nonnegative).  If ``density`` is given, every pair is
    weighted by 1/(rho(alpha_j1)*rho(alpha_j2)), which renormalizes a
    non-uniform direction density back to unit level.

    Implemented as a sliding window over the sorted angles: cost is
    O(N * W) for bins inside [-W, W].
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise InvalidInputError("bin edges must be strictly increasing")
    if fold and edges[0] < 0:
        raise InvalidInputError("folded histogram needs nonnegative edges")
    N = dirs.N
    if N < 2:
        raise InvalidInputError("need at least two directions")
    W = max(abs(edges[0]), abs(edges[-1]))
    if W >= N / 2:
        raise InvalidInputError(f"window reach {W} must be below N/2 = {N / 2}")
    A = dirs.alphas
    aug = np.concatenate([A, A + 1.0])
    thresh = W / N
    counts = np.zeros(edges.size - 1)
    active = np.arange(N)
    d = 1
    while active.size and d < N:
        diff = aug[active + d] - A[active]
        near = diff <= thresh
        active = active[near]
        vals = N * diff[near]
        if vals.size:
            if density is not None:
                w = 1.0 / (
                    np.asarray(density(A[active]))
                    * np.asarray(density(np.mod(aug[active + d], 1.0)))
                )
            else:
                w = None
            if fold:
                h, _ = np.histogram(vals, bins=edges, weights=w)
                counts += 2.0 * h
            else:
                h, _ = np.histogram(vals, bins=edges, weights=w)
                counts += h
                h, _ = np.histogram(-vals, bins=edges, weights=w)
                counts += h
        d += 1
    masses = counts / (N * np.diff(edges))
    return Histogram(edges, masses, "density")


def _power(base: np.ndarray, s: complex) -> np.ndarray:
    # (k)^s with the principal log; 0^0 = 1, 0^s = 0 for s != 0.
    if s == 0:
        return np.ones(base.shape, dtype=complex)
    out = np.zeros(base.shape, dtype=complex)
    pos = base > 0
    out[pos] = np.exp(s * np.log(base[pos]))
    return out


def mixed_moment(
    dirs: DirectionSet,
    box,
    spec: MomentSpec,
    lam: MeasureSpec | None = None,
    shifted: bool = True,
) -> complex:
    """Quadrature of prod_j (count_j + 1)^{s_j} over the measure ``lam``.

    ``shifted=False`` drops the +1 offset and integrates the raw product
    prod_j count_j^{s_j}.  With ``spec.cap = K`` set, grid points where any
    window holds more than K directions are zeroed (restricted moment).
    The integrand is piecewise constant in alpha, so the uniform-grid error
    scales like N * |I| / quadrature_points.
    """
    box = as_box(box)
    if len(spec.exponents) != box.m:
        raise InvalidInputError("one exponent per interval required")
    lam = lam if lam is not None else MeasureSpec.uniform()
    grid = lam.grid()
    weights = lam.weights()
    offset = 1.0 if shifted else 0.0
    vals = np.ones(grid.shape, dtype=complex)
    max_count = np.zeros(grid.shape, dtype=np.int64)
    for interval, s in zip(box.intervals, spec.exponents):
        cnt = window_counts(dirs, interval, grid)
        np.maximum(max_count, cnt, out=max_count)
        vals *= _power(cnt + offset, s)
    if spec.cap is not None:
        vals = np.where(max_count <= spec.cap, vals, 0.0)
    return complex(np.sum(weights * vals))


def pair_correlation_integral(dirs: DirectionSet, interval1, interval2) -> float:
    """Exact circle average of the two-window ordered-pair count.

    Integrates, over the window position alpha, the number of ordered pairs
    j1 != j2 whose scaled differences place alpha_j1 in window 1 and
    alpha_j2 in window 2.  The integrand is piecewise constant with
    breakpoints at the shifted window endpoints, so the integral is a
    finite sum of segment lengths (no quadrature).
    """
    a1, b1 = float(interval1[0]), float(interval1[1])
    a2, b2 = float(interval2[0]), float(interval2[1])
    if not (a1 < b1 and a2 < b2):
        raise InvalidInputError("intervals must be nondegenerate")
    N = dirs.N
    if N == 0:
        raise InvalidInputError("empty direction set")
    A = dirs.alphas
    pts = np.concatenate(
        [
            np.mod(A - b1 / N, 1.0),
            np.mod(A - a1 / N, 1.0),
            np.mod(A - b2 / N, 1.0),
            np.mod(A - a2 / N, 1.0),
        ]
    )
    pts.sort(kind="stable")
    lens = np.empty(pts.shape)
    lens[:-1] = np.diff(pts)
    lens[-1] = pts[0] + 1.0 - pts[-1]
    mids = np.empty(pts.shape)
    mids[:-1] = pts[:-1] + lens[:-1] / 2.0
    mids[-1] = np.mod(pts[-1] + lens[-1] / 2.0, 1.0)
    n1 = window_counts(dirs, (a1, b1), mids).astype(float)
    n2 = window_counts(dirs, (a2, b2), mids).astype(float)
    lo, hi = max(a1, a2), min(b1, b2)
    if lo < hi:
        diag = window_counts(dirs, (lo, hi), mids).astype(float)
    else:
        diag = np.zeros(mids.shape)
    return float(np.sum(lens * (n1 * n2 - diag)))
