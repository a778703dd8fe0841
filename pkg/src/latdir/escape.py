"""Cusp excursion sums and their averages along low horocycles.

The central object is a sum over cusp neighborhoods: for each coprime
bottom row (c, d), the level v_g = v' / |c tau' + d|^2 of the transformed
point enters through an indicator v_g >= R, a weight v_g^beta, and a
rapidly decaying factor f evaluated on the shifted first coordinate of the
transported torus variable.  At fixed (tau, R) only finitely many (c, d)
survive the indicator (an ellipse), and the inner integer sum is truncated
where the Gaussian f drops below 1e-16, so the evaluation is exact up to
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import flat_ranges
from .errors import InvalidInputError
from .lattice import Mat2

# exp(-x^2) < 1e-16 beyond this point
XMAX = math.sqrt(16.0 * math.log(10.0))

COSET_FILTERS = ("all", "identity", "inverted")


@dataclass(frozen=True)
class CuspSpec:
    """Weight exponent, cusp height cutoff and Gaussian width.

    The decay profile is fixed to f(x) = exp(-(x / f_width)^2), which is
    even, nonincreasing in |x| and satisfies f(r x) <= f(x) for r >= 1.
    """

    beta: float
    R: float
    f_width: float = 1.0

    def __post_init__(self):
        if self.beta < 0:
            raise InvalidInputError("beta must be nonnegative")
        if self.R < 1.0:
            raise InvalidInputError("R must be at least 1")
        if self.f_width <= 0:
            raise InvalidInputError("f_width must be positive")


def _surviving_cosets(taup: complex, R: float, cosets: str):
    """Coprime bottom rows (c, d) with v' / |c tau' + d|^2 >= R.

    The indicator region is the ellipse c^2 v'^2 + (c u' + d)^2 <= v'/R,
    enumerated exactly strip by strip in c.
    """
    up, vp = taup.real, taup.imag
    budget = vp / R
    cmax = math.floor(math.sqrt(budget) / vp)
    cs = np.arange(-cmax, cmax + 1, dtype=np.int64)
    disc = budget - (cs * vp) ** 2
    half = np.sqrt(np.maximum(disc, 0.0))
    center = -cs * up
    dlo = np.ceil(center - half).astype(np.int64)
    dhi = np.floor(center + half).astype(np.int64)
    owner, d = flat_ranges(dlo, dhi)
    c = cs[owner]
    keep = np.gcd(np.abs(c), np.abs(d)) == 1
    c, d = c[keep], d[keep]
    if cosets == "identity":
        sel = c == 0
        c, d = c[sel], d[sel]
    elif cosets == "inverted":
        sel = d == 0
        c, d = c[sel], d[sel]
    elif cosets != "all":
        raise InvalidInputError(f"cosets must be one of {COSET_FILTERS}")
    return c, d


def cusp_window_sum(
    tau: complex,
    xi,
    M: Mat2,
    spec: CuspSpec,
    cosets: str = "all",
) -> float:
    """Exact finite evaluation of the cusp excursion sum at M n(u) a(v).

    ``tau = u + i v`` fixes the horocycle coordinates; the Iwasawa level of
    the composed matrix is the Moebius image tau' = M . tau.  Each
    surviving coprime pair (c, d) contributes
    v_g^beta * sum_m f((d xi_1 - c xi_2 + m) sqrt(v_g)) with
    v_g = v' / |c tau' + d|^2 >= R.

    ``cosets`` restricts the sum: "identity" keeps only the rows (0, +-1),
    "inverted" only (+-1, 0) — the leading term of the horocycle average.
    """
    if tau.imag <= 0:
        raise InvalidInputError("tau must lie in the upper half plane")
    den = M.c * tau + M.d
    taup = (M.a * tau + M.b) / den
    up, vp = taup.real, taup.imag
    if vp <= 0:
        raise InvalidInputError("transformed point left the upper half plane")
    c, d = _surviving_cosets(taup, spec.R, cosets)
    if c.size == 0:
        return 0.0
    vg = vp / ((c * up + d) ** 2 + (c * vp) ** 2)
    ok = vg >= spec.R  # guard against roundoff on the ellipse boundary
    c, d, vg = c[ok], d[ok], vg[ok]
    if c.size == 0:
        return 0.0
    xi1, xi2 = float(xi[0]), float(xi[1])
    w = d * xi1 - c * xi2
    scale = np.sqrt(vg) / spec.f_width
    reach = XMAX / scale
    mlo = np.ceil(-w - reach).astype(np.int64)
    mhi = np.floor(-w + reach).astype(np.int64)
    owner, mm = flat_ranges(mlo, mhi)
    arg = (w[owner] + mm) * scale[owner]
    msum = np.bincount(owner, weights=np.exp(-(arg**2)), minlength=c.size)
    return float(np.sum(vg**spec.beta * msum))


def bump_window(u, support) -> np.ndarray:
    """Smooth bump exp(1 - 1/(1 - t^2)) on the support interval, 0 outside.

    ``t`` is the affine coordinate of u in the support (-1 at the left
    edge, +1 at the right edge).
    """
    lo, hi = float(support[0]), float(support[1])
    if not lo < hi:
        raise InvalidInputError("support must be a nondegenerate interval")
    u = np.asarray(u, dtype=float)
    t = 2.0 * (u - lo) / (hi - lo) - 1.0
    inside = np.abs(t) < 1.0
    out = np.zeros(u.shape)
    ti = t[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti * ti))
    return out


def horocycle_escape_integral(
    M: Mat2,
    xi,
    beta: float,
    R: float,
    v: float,
    h_support,
    n_quad: int = 4096,
    f_width: float = 1.0,
    cosets: str = "all",
) -> float:
    """Midpoint quadrature of the cusp sum along the horocycle at height v.

    Integrates cusp_window_sum(u + i v) against the smooth bump supported
    on ``h_support``.  Midpoint rule is used on purpose: the integrand has
    jump sets where coset membership flips, which defeat high-order rules.
    """
    if v <= 0:
        raise InvalidInputError("v must be positive")
    if n_quad < 1:
        raise InvalidInputError("n_quad must be positive")
    lo, hi = float(h_support[0]), float(h_support[1])
    if not lo < hi:
        raise InvalidInputError("h_support must be a nondegenerate interval")
    spec = CuspSpec(beta, R, f_width)
    du = (hi - lo) / n_quad
    us = lo + (np.arange(n_quad) + 0.5) * du
    hs = bump_window(us, (lo, hi))
    total = 0.0
    for u, h in zip(us, hs):
        if h == 0.0:
            continue
        total += h * cusp_window_sum(complex(u, v), xi, M, spec, cosets)
    return total * du
