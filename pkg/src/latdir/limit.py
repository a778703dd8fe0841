"""Monte Carlo on the space of (affine) planar lattices.

Samples the Iwasawa coordinates (u, v, phi) of a random unimodular lattice
from the standard fundamental domain, counts affine lattice points inside
cone-shaped test regions, and estimates the limiting distribution of
window counts together with its moments, tail exponents and the classical
Siegel mean-value identities.

Counting is exact integer arithmetic on closed-form per-strip bounds, so a
merged run is reproducible regardless of how sample blocks are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import flat_ranges, spawn_streams
from .errors import (
    InsufficientDataError,
    InvalidInputError,
    UnsupportedError,
)
from .lattice import AffineLatticeSpec, DirectionSet, rotation
from .stats import as_box, counting_stat

TWO_PI = 2.0 * math.pi
V_FLOOR = math.sqrt(3.0) / 2.0
# Gaussian weights below 1e-16 are dropped: exp(-r^2) < 1e-16 for r > RCUT.
RCUT = math.sqrt(16.0 * math.log(10.0))
MOM_BLOCKS = 32


@dataclass(frozen=True)
class IwasawaPoint:
    """Coordinates (u, v, phi) of n(u) a(v) k(phi); v > 0."""

    u: float
    v: float
    phi: float = 0.0

    def __post_init__(self):
        if not self.v > 0:
            raise InvalidInputError("v must be positive")

    @property
    def tau(self) -> complex:
        return complex(self.u, self.v)

    def in_fundamental_domain(self) -> bool:
        return abs(self.u) <= 0.5 and self.u**2 + self.v**2 >= 1.0


@dataclass(frozen=True)
class HomSample:
    """A point of the space of affine lattices: Iwasawa part plus shift.

    ``coset`` carries an integer unimodular representative when sampling a
    congruence cover (rational shift classes).
    """

    point: IwasawaPoint
    xi: tuple[float, float] = (0.0, 0.0)
    coset: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "xi", (float(self.xi[0]), float(self.xi[1])))
        if not (0.0 <= self.xi[0] < 1.0 and 0.0 <= self.xi[1] < 1.0):
            raise InvalidInputError("xi components must lie in [0, 1)")
        if self.coset is not None:
            co = np.asarray(self.coset)
            if co.shape != (2, 2) or not np.issubdtype(co.dtype, np.integer):
                raise InvalidInputError("coset must be an integer 2x2 matrix")
            if round(float(co[0, 0] * co[1, 1] - co[0, 1] * co[1, 0])) != 1:
                raise InvalidInputError("coset must have determinant 1")


@dataclass(frozen=True)
class ConeRegion:
    """Planar region {c < x < 1, (1-c^2) y in 2x * interval}; area = |interval|.

    The x-constraints are strict and the y-interval is closed, so a point
    with y exactly on the scaled interval edge counts as inside.
    """

    c: float
    interval: tuple[float, float]

    def __post_init__(self):
        if not 0.0 <= self.c < 1.0:
            raise InvalidInputError(f"c must be in [0, 1), got {self.c}")
        a, b = float(self.interval[0]), float(self.interval[1])
        object.__setattr__(self, "interval", (a, b))
        if not (np.isfinite(a) and np.isfinite(b) and a < b):
            raise InvalidInputError(f"bad interval ({a}, {b})")

    @property
    def area(self) -> float:
        a, b = self.interval
        return b - a

    def contains(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        x, y = pts[:, 0], pts[:, 1]
        a, b = self.interval
        om = 1.0 - self.c**2
        return (x > self.c) & (x < 1.0) & (om * y >= 2.0 * x * a) & (om * y <= 2.0 * x * b)

    def shifted(self, r: float) -> "ConeRegion":
        a, b = self.interval
        return ConeRegion(self.c, (a + r, b + r))


@dataclass
class MCResult:
    """A stochastic estimate with its standard error and sample size."""

    estimate: float
    se: float
    n: int
    exact: float | None = None

    def within(self, k_se: float = 3.0) -> bool:
        if self.exact is None:
            raise InvalidInputError("no exact reference attached")
        return abs(self.estimate - self.exact) <= k_se * self.se


# ---------------------------------------------------------------------------
# Haar sampling on the fundamental domain


def _haar_batch(rng, n: int):
    """Arrays (u, v, phi) of n fundamental-domain samples.

    u is uniform on [-1/2, 1/2]; v follows the 1/v^2 profile on
    [sqrt(3)/2, inf) by inverse CDF; proposals with u^2 + v^2 < 1 are
    rejected, which leaves exactly the normalized hyperbolic-area measure
    on the fundamental domain.  phi is uniform on [0, 2*pi).
    """
    us = np.empty(n)
    vs = np.empty(n)
    have = 0
    while have < n:
        m = int((n - have) * 1.25) + 16
        u = rng.uniform(-0.5, 0.5, m)
        v = V_FLOOR / (1.0 - rng.uniform(0.0, 1.0, m))
        acc = u * u + v * v >= 1.0
        take = min(int(acc.sum()), n - have)
        us[have : have + take] = u[acc][:take]
        vs[have : have + take] = v[acc][:take]
        have += take
    phi = rng.uniform(0.0, TWO_PI, n)
    return us, vs, phi


def haar_sample(rng) -> IwasawaPoint:
    """One Haar-distributed Iwasawa point in the fundamental domain."""
    u, v, phi = _haar_batch(rng, 1)
    return IwasawaPoint(float(u[0]), float(v[0]), float(phi[0]))


def haar_v_cdf(v):
    """Closed-form CDF of the v-marginal of the fundamental-domain measure."""
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape)

    def anti(w):
        # antiderivative of (1 - 2 sqrt(1-w^2)) / w^2
        return -1.0 / w + 2.0 * np.sqrt(np.maximum(1.0 - w * w, 0.0)) / w + 2.0 * np.arcsin(
            np.minimum(w, 1.0)
        )

    mid = (v > V_FLOOR) & (v <= 1.0)
    out[mid] = (3.0 / math.pi) * (anti(v[mid]) - 2.0 * math.pi / 3.0)
    top = v > 1.0
    out[top] = 1.0 - 3.0 / (math.pi * v[top])
    return out


def iwasawa_matrix(u, v, phi) -> np.ndarray:
    """Matrices n(u) a(v) k(phi), vectorized: returns shape (n, 2, 2)."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    sv = np.sqrt(v)
    c, s = np.cos(phi), np.sin(phi)
    A = np.empty((u.size, 2, 2))
    A[:, 0, 0] = sv * c + u / sv * s
    A[:, 0, 1] = -sv * s + u / sv * c
    A[:, 1, 0] = s / sv
    A[:, 1, 1] = c / sv
    return A


# ---------------------------------------------------------------------------
# Exact lattice-point counts in cone regions

_BIG = 4.0e18


def _apply_bound(mlo, mhi, ok, coef, rhs, xi2, kind):
    """Intersect integer bounds on m2 with the constraint coef*p2 (kind) rhs.

    p2 = m2 + xi2.  ``kind`` is one of ">", "<", ">=", "<=".  Zero
    coefficients turn the constraint into a feasibility test on rhs.
    """
    t = rhs / np.where(coef == 0.0, 1.0, coef) - xi2
    pos = coef > 0.0
    neg = coef < 0.0
    zero = coef == 0.0
    if kind == ">":
        lower, upper, closed, zero_ok = pos, neg, False, rhs < 0.0
    elif kind == "<":
        lower, upper, closed, zero_ok = neg, pos, False, rhs > 0.0
    elif kind == ">=":
        lower, upper, closed, zero_ok = pos, neg, True, rhs <= 0.0
    else:  # "<="
        lower, upper, closed, zero_ok = neg, pos, True, rhs >= 0.0
    if closed:
        lo_val = np.ceil(t)
        hi_val = np.floor(t)
    else:
        lo_val = np.floor(t) + 1.0
        hi_val = np.ceil(t) - 1.0
    mlo = np.where(lower, np.maximum(mlo, lo_val), mlo)
    mhi = np.where(upper, np.minimum(mhi, hi_val), mhi)
    ok = ok & (~zero | zero_ok)
    return mlo, mhi, ok


def cone_counts(A: np.ndarray, shift: np.ndarray, region: ConeRegion) -> np.ndarray:
    """Count m in Z^2 with (m + shift) A inside the region, per sample.

    ``A`` is (n, 2, 2) with |det A| = 1, ``shift`` is (n, 2).  Strips in m1
    come from the region's bounding box pulled back through A^{-1}; for
    each strip the admissible m2 range is solved exactly from the three
    linear constraint pairs, so no candidate points are materialized.
    """
    A = np.asarray(A, dtype=float).reshape(-1, 2, 2)
    n = A.shape[0]
    shift = np.broadcast_to(np.asarray(shift, dtype=float).reshape(-1, 2), (n, 2))
    c = region.c
    a, b = region.interval
    om = 1.0 - c * c
    ylo = 2.0 * min(a * c, a) / om
    yhi = 2.0 * max(b * c, b) / om
    A21, A22 = A[:, 1, 0], A[:, 1, 1]
    xs = [X * A22 - Y * A21 for X in (c, 1.0) for Y in (ylo, yhi)]
    xlo = np.minimum.reduce(xs)
    xhi = np.maximum.reduce(xs)
    m1lo = np.ceil(xlo - shift[:, 0]).astype(np.int64)
    m1hi = np.floor(xhi - shift[:, 0]).astype(np.int64)
    owner, m1 = flat_ranges(m1lo, m1hi)
    p1 = m1 + shift[owner, 0]
    e = p1 * A[owner, 0, 0]
    f = A21[owner]
    g = p1 * A[owner, 0, 1]
    h = A22[owner]
    xi2 = shift[owner, 1]
    mlo = np.full(p1.shape, -_BIG)
    mhi = np.full(p1.shape, _BIG)
    ok = np.ones(p1.shape, dtype=bool)
    mlo, mhi, ok = _apply_bound(mlo, mhi, ok, f, c - e, xi2, ">")
    mlo, mhi, ok = _apply_bound(mlo, mhi, ok, f, 1.0 - e, xi2, "<")
    mlo, mhi, ok = _apply_bound(mlo, mhi, ok, om * h - 2.0 * a * f, 2.0 * a * e - om * g, xi2, ">=")
    mlo, mhi, ok = _apply_bound(mlo, mhi, ok, om * h - 2.0 * b * f, 2.0 * b * e - om * g, xi2, "<=")
    per_strip = np.where(ok, np.maximum(mhi - mlo + 1.0, 0.0), 0.0)
    return np.bincount(owner, weights=per_strip, minlength=n).astype(np.int64)


def count_in_region(sample: HomSample, regions, xi_mode: str = "generic", pq=None) -> np.ndarray:
    """Window counts of one affine-lattice sample in each cone region.

    ``xi_mode="generic"`` counts (m + xi) n(u) a(v) k(phi); with
    ``xi_mode="fixed_rational"`` and ``pq=(p1, p2, q)`` the shift is p/q
    and the sample's integer coset multiplies the Iwasawa matrix from the
    left.
    """
    regions = [regions] if isinstance(regions, ConeRegion) else list(regions)
    if not regions:
        raise InvalidInputError("need at least one region")
    pt = sample.point
    A = iwasawa_matrix(pt.u, pt.v, pt.phi)
    if xi_mode == "generic":
        shift = np.array(sample.xi)
    elif xi_mode == "fixed_rational":
        if pq is None:
            raise InvalidInputError("fixed_rational mode needs pq=(p1, p2, q)")
        p1, p2, q = pq
        shift = np.array([p1 / q, p2 / q], dtype=float)
        if sample.coset is not None:
            A = sample.coset.astype(float)[None] @ A
    else:
        raise InvalidInputError(f"unknown xi_mode {xi_mode!r}")
    return np.array([int(cone_counts(A, shift, reg)[0]) for reg in regions])


# ---------------------------------------------------------------------------
# Congruence coset representatives


def coset_reps(q: int) -> list[np.ndarray]:
    """Integer representatives of the level-q congruence cosets.

    Breadth-first search over words in the standard generators
    S = [[0,-1],[1,0]] and T = [[1,1],[0,1]] inside SL(2, Z/q), keeping one
    integer product per residue class.  Supported for 2 <= q <= 5.
    """
    if not 2 <= q <= 5:
        raise UnsupportedError(f"coset enumeration supports 2 <= q <= 5, got {q}")
    order = q**3
    for p in {f for f in (2, 3, 5) if q % f == 0}:
        order = order * (p * p - 1) // (p * p)
    S = np.array([[0, -1], [1, 0]], dtype=np.int64)
    Sinv = np.array([[0, 1], [-1, 0]], dtype=np.int64)
    T = np.array([[1, 1], [0, 1]], dtype=np.int64)
    Tinv = np.array([[1, -1], [0, 1]], dtype=np.int64)
    gens = [S, Sinv, T, Tinv]
    ident = np.eye(2, dtype=np.int64)
    reps = {tuple(ident.flatten() % q): ident}
    queue = [ident]
    while queue and len(reps) < order:
        g = queue.pop(0)
        for h in gens:
            ng = g @ h
            key = tuple(ng.flatten() % q)
            if key not in reps:
                reps[key] = ng
                queue.append(ng)
    if len(reps) != order:
        raise RuntimeError(f"coset search found {len(reps)} of {order} classes")
    return list(reps.values())


# ---------------------------------------------------------------------------
# Count-distribution estimation


@dataclass(frozen=True, eq=False)
class CountDistribution:
    """Empirical distribution of count vectors over Monte Carlo samples.

    ``counts`` maps k-vectors (tuples) to sample counts; ``block_counts``
    keeps the per-block split so heavy-tailed moments can be estimated by
    median-of-means.
    """

    counts: dict
    total: int
    block_counts: tuple | None = None

    def __post_init__(self):
        if self.total <= 0:
            raise InvalidInputError("total must be positive")
        if sum(self.counts.values()) != self.total:
            raise InvalidInputError("counts must sum to total")

    @property
    def m(self) -> int:
        return len(next(iter(self.counts)))

    def probabilities(self) -> dict:
        return {k: c / self.total for k, c in self.counts.items()}

    def _values(self, powers):
        powers = np.atleast_1d(np.asarray(powers, dtype=float))
        if powers.size != self.m:
            raise InvalidInputError("one power per component required")
        ks = np.array(sorted(self.counts), dtype=float).reshape(-1, self.m)
        cnt = np.array([self.counts[tuple(int(x) for x in k)] for k in ks], dtype=float)
        vals = np.prod(np.where((ks == 0) & (powers == 0), 1.0, ks**powers), axis=1)
        return vals, cnt

    def moment(self, powers) -> MCResult:
        """Plain-mean estimate of E[prod_j k_j^{p_j}] with its standard error."""
        vals, cnt = self._values(powers)
        mean = float(np.sum(vals * cnt) / self.total)
        var = float(np.sum(vals**2 * cnt) / self.total - mean**2)
        return MCResult(mean, math.sqrt(max(var, 0.0) / self.total), self.total)

    def moment_mom(self, powers) -> MCResult:
        """Median-of-means estimate over the stored sample blocks.

        The standard error is the scaled median absolute deviation of the
        block means (1.4826 * MAD / sqrt(blocks)).
        """
        if not self.block_counts:
            raise InvalidInputError("no block structure stored")
        powers = np.atleast_1d(np.asarray(powers, dtype=float))
        means = []
        for block in self.block_counts:
            nb = sum(block.values())
            acc = 0.0
            for k, c in block.items():
                ka = np.asarray(k, dtype=float)
                acc += c * float(np.prod(np.where((ka == 0) & (powers == 0), 1.0, ka**powers)))
            means.append(acc / nb)
        means = np.asarray(means)
        med = float(np.median(means))
        mad = float(np.median(np.abs(means - med)))
        return MCResult(med, 1.4826 * mad / math.sqrt(means.size), self.total)

    def survival(self, k_values) -> np.ndarray:
        """P(N >= k) for scalar count distributions, vectorized over k."""
        if self.m != 1:
            raise InvalidInputError("survival needs a scalar count distribution")
        ks = np.array(sorted(k[0] for k in self.counts))
        cnt = np.array([self.counts[(int(k),)] for k in ks], dtype=float)
        tail = np.cumsum(cnt[::-1])[::-1]
        idx = np.searchsorted(ks, np.asarray(k_values))
        out = np.where(idx < ks.size, tail[np.minimum(idx, ks.size - 1)], 0.0)
        return out / self.total


def _merge_counts(rows: np.ndarray) -> dict:
    uniq, cnt = np.unique(rows, axis=0, return_counts=True)
    return {tuple(int(x) for x in k): int(c) for k, c in zip(uniq, cnt)}


def sample_count_distribution(
    c: float,
    xi_class: str,
    box,
    n: int,
    rng,
    q: int | None = None,
    p=None,
    blocks: int = MOM_BLOCKS,
) -> CountDistribution:
    """Monte Carlo law of the cone-region count vector of a random lattice.

    ``xi_class`` selects the ensemble: "integer" counts the plain lattice
    (shift zero) under the Haar measure; "rational" fixes shift p/q and
    additionally draws a uniform congruence coset; "irrational" draws the
    shift uniformly from the unit torus.  Sampling runs in ``blocks``
    independent substreams derived from ``rng``, so the merged result does
    not depend on scheduling and heavy-tailed moments can use
    median-of-means over the same blocks.
    """
    if n < 1:
        raise InvalidInputError("need at least one sample")
    box = as_box(box)
    regions = [ConeRegion(c, iv) for iv in box.intervals]
    if xi_class == "rational":
        if q is None or p is None:
            raise InvalidInputError("rational class needs p and q")
        reps = np.array(coset_reps(q))
        shift_pq = np.array([p[0] / q, p[1] / q], dtype=float)
    elif xi_class not in ("integer", "irrational"):
        raise InvalidInputError(f"unknown xi_class {xi_class!r}")
    blocks = min(blocks, n)
    streams = spawn_streams(rng, blocks)
    sizes = [n // blocks + (1 if i < n % blocks else 0) for i in range(blocks)]
    block_dicts = []
    merged: dict = {}
    for stream, nb in zip(streams, sizes):
        u, v, phi = _haar_batch(stream, nb)
        A = iwasawa_matrix(u, v, phi)
        if xi_class == "integer":
            shift = np.zeros((nb, 2))
        elif xi_class == "irrational":
            shift = stream.uniform(0.0, 1.0, (nb, 2))
        else:
            picks = stream.integers(0, len(reps), nb)
            A = reps[picks].astype(float) @ A
            shift = np.broadcast_to(shift_pq, (nb, 2))
        cols = [cone_counts(A, shift, reg) for reg in regions]
        rows = np.column_stack(cols)
        d = _merge_counts(rows)
        block_dicts.append(d)
        for k, cval in d.items():
            merged[k] = merged.get(k, 0) + cval
    return CountDistribution(merged, n, tuple(block_dicts))


def tail_exponent(dist: CountDistribution, k_min: int, min_tail_count: int = 10) -> float:
    """Least-squares slope of log P(N >= k) against log k for k >= k_min.

    Only integers whose tail still holds at least ``min_tail_count``
    samples enter the fit (beyond that the empirical tail is noise).
    Raises InsufficientDataError with fewer than three usable points.
    """
    if dist.m != 1:
        raise InvalidInputError("tail fit needs a scalar count distribution")
    if k_min < 1:
        raise InvalidInputError("k_min must be at least 1")
    k_max = max(k[0] for k in dist.counts)
    ks = np.arange(k_min, k_max + 1)
    if ks.size == 0:
        raise InsufficientDataError("no mass at or above k_min")
    surv = dist.survival(ks)
    usable = surv * dist.total >= min_tail_count
    ks, surv = ks[usable], surv[usable]
    if ks.size < 3:
        raise InsufficientDataError(f"only {ks.size} usable tail points")
    slope = np.polyfit(np.log(ks.astype(float)), np.log(surv), 1)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# Gaussian lattice sums (Siegel identities)


def _disc_candidates(A: np.ndarray, shift: np.ndarray, r: float):
    """Flattened lattice points with |(m + shift) A| <= r.

    Returns (sample_idx, p1, p2) where p = m + shift.  Assumes |det A| = 1,
    which makes the per-strip discriminant q22 r^2 - p1^2 exact.
    """
    A = np.asarray(A, dtype=float).reshape(-1, 2, 2)
    shift = np.broadcast_to(np.asarray(shift, dtype=float).reshape(-1, 2), (A.shape[0], 2))
    q12 = A[:, 0, 0] * A[:, 1, 0] + A[:, 0, 1] * A[:, 1, 1]
    q22 = A[:, 1, 0] ** 2 + A[:, 1, 1] ** 2
    p1max = r * np.sqrt(q22)
    m1lo = np.ceil(-p1max - shift[:, 0]).astype(np.int64)
    m1hi = np.floor(p1max - shift[:, 0]).astype(np.int64)
    owner, m1 = flat_ranges(m1lo, m1hi)
    p1 = m1 + shift[owner, 0]
    disc = q22[owner] * r * r - p1 * p1
    valid = disc >= 0.0
    half = np.sqrt(np.maximum(disc, 0.0)) / q22[owner]
    mid = -q12[owner] * p1 / q22[owner]
    m2lo = np.where(valid, np.ceil(mid - half - shift[owner, 1]), 1.0).astype(np.int64)
    m2hi = np.where(valid, np.floor(mid + half - shift[owner, 1]), 0.0).astype(np.int64)
    strip, m2 = flat_ranges(m2lo, m2hi)
    idx = owner[strip]
    return idx, p1[strip], m2 + shift[idx, 1]


def disc_count(A: np.ndarray, shift: np.ndarray, r: float) -> np.ndarray:
    """Number of points (m + shift) A inside the closed disc of radius r."""
    A = np.asarray(A, dtype=float).reshape(-1, 2, 2)
    idx, _, _ = _disc_candidates(A, shift, r)
    return np.bincount(idx, minlength=A.shape[0]).astype(np.int64)


def siegel_average(which: str, n: int, rng, batch: int = 50_000) -> MCResult:
    """Monte Carlo check of the Gaussian lattice-sum mean values.

    ``which="classic"``: the Haar average of sum_{m != 0} exp(-|m M|^2)
    equals pi.  ``which="affine_pair"``: averaging, additionally over a
    uniform torus shift, the sum over ordered pairs m1 != m2 of
    exp(-|x1|^2 - |x2|^2) at x_i = (m_i + shift) M equals pi^2.  The m-sums
    are truncated where the Gaussian drops below 1e-16.
    """
    if which not in ("classic", "affine_pair"):
        raise InvalidInputError(f"unknown variant {which!r}")
    if n < 2:
        raise InvalidInputError("need at least two samples")
    nblocks = (n + batch - 1) // batch
    streams = spawn_streams(rng, nblocks)
    vals = np.empty(n)
    done = 0
    for stream in streams:
        nb = min(batch, n - done)
        u, v, phi = _haar_batch(stream, nb)
        A = iwasawa_matrix(u, v, phi)
        if which == "classic":
            shift = np.zeros((nb, 2))
        else:
            shift = stream.uniform(0.0, 1.0, (nb, 2))
        idx, p1, p2 = _disc_candidates(A, shift, RCUT)
        y1 = p1 * A[idx, 0, 0] + p2 * A[idx, 1, 0]
        y2 = p1 * A[idx, 0, 1] + p2 * A[idx, 1, 1]
        w = np.exp(-(y1 * y1 + y2 * y2))
        if which == "classic":
            s = np.bincount(idx, weights=w, minlength=nb) - 1.0  # drop m = 0
            vals[done : done + nb] = s
        else:
            s = np.bincount(idx, weights=w, minlength=nb)
            s2 = np.bincount(idx, weights=w * w, minlength=nb)
            vals[done : done + nb] = s * s - s2
        done += nb
    exact = math.pi if which == "classic" else math.pi**2
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(n))
    return MCResult(est, se, n, exact)


# ---------------------------------------------------------------------------
# Bound checks


def crude_bound_min_T(interval, theta: float) -> float:
    """Desk-scale heuristic for the scale above which the cone bound is
    safe to assert; the bound itself is asymptotic in T."""
    reach = max(abs(interval[0]), abs(interval[1])) + theta
    return 10.0 * (1.0 + reach) / theta


def crude_bound_holds(
    lat: AffineLatticeSpec,
    alpha: float,
    T: float,
    interval,
    theta: float,
    c: float = 0.0,
    dirs: DirectionSet | None = None,
) -> bool:
    """Window count at scale T bounded by a padded cone count.

    The left side counts directions in the shrunk window; the right side
    counts lattice points of (m + shift) M0 k(2*pi*alpha) diag(1/T, T)
    inside the c = 0 cone over the theta-padded interval.  Requires
    T >= crude_bound_min_T(interval, theta); theta > 0.
    """
    if theta <= 0:
        raise InvalidInputError("theta must be positive")
    if T < crude_bound_min_T(interval, theta):
        raise InvalidInputError("T below the safe scale for this window padding")
    if dirs is None:
        from .lattice import Annulus, directions, enumerate_points

        shape = Annulus(c)
        dirs = directions(enumerate_points(lat, shape, T), T, shape)
    lhs = counting_stat(dirs, interval, alpha)
    flow = np.array([[1.0 / T, 0.0], [0.0, T]])
    A = lat.basis.array() @ rotation(TWO_PI * alpha).array() @ flow
    region = ConeRegion(0.0, (interval[0] - theta, interval[1] + theta))
    rhs = int(cone_counts(A[None], np.array(lat.shift), region)[0])
    return lhs <= rhs


def cusp_bound_holds(sample: HomSample, r: float, sigmas=(1.5, 2.0, 2.5)) -> bool:
    """High-cusp count bound for the disc of radius r.

    For v >= 1 the number of affine lattice points in the closed disc is
    at most (2 r sqrt(v) + 1) times the number of shifted integers in
    [-r/sqrt(v), r/sqrt(v)]; for v > 4 r^2 the same holds with both sides
    raised to each sigma (the integer factor is then 0 or 1).
    """
    pt = sample.point
    if pt.v < 1.0:
        raise InvalidInputError("cusp bound requires v >= 1")
    if r < 0:
        raise InvalidInputError("radius must be nonnegative")
    A = iwasawa_matrix(pt.u, pt.v, pt.phi)
    lhs = int(disc_count(A, np.array(sample.xi), r)[0])
    half = r / math.sqrt(pt.v)
    xi1 = sample.xi[0]
    n_int = max(0, math.floor(half - xi1) - math.ceil(-half - xi1) + 1)
    factor = 2.0 * r * math.sqrt(pt.v) + 1.0
    if lhs > factor * n_int:
        return False
    if pt.v > 4.0 * r * r and r > 0:
        for sigma in sigmas:
            if float(lhs) ** sigma > factor**sigma * n_int:
                return False
    return True
