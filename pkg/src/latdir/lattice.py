"""Affine planar lattices: point enumeration and direction sequences.

A unimodular basis ``M0`` and a shift ``xi`` define the point set
``(Z^2 + xi) M0`` (row vectors act on the right).  This module enumerates
the nonzero points inside an open annulus ``c*T < |y| < T`` or an open
square ``(-T, T)^2`` and turns them into the sorted sequence of direction
angles, measured in turns (angle / 2*pi, mod 1), with multiplicity.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InvalidInputError

TWO_PI = 2.0 * math.pi
DET_TOL = 1e-12
DEFAULT_MAX_POINTS = 200_000_000


@dataclass(frozen=True)
class Mat2:
    """Row-major 2x2 real matrix with entries a, b / c, d."""

    a: float
    b: float
    c: float
    d: float

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    @classmethod
    def from_array(cls, m) -> "Mat2":
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2):
            raise InvalidInputError(f"expected a 2x2 matrix, got shape {m.shape}")
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1.0, 0.0, 0.0, 1.0)

    def require_unimodular(self) -> "Mat2":
        if abs(self.det - 1.0) > DET_TOL:
            raise InvalidInputError(f"matrix must have determinant 1, got {self.det!r}")
        return self

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2.from_array(self.array() @ other.array())


def rotation(phi: float) -> Mat2:
    """Rotation matrix k(phi) = [[cos, -sin], [sin, cos]].

    Acting on row vectors from the right, k(phi) moves a point at angle phi
    onto the positive x-axis.
    """
    c, s = math.cos(phi), math.sin(phi)
    return Mat2(c, -s, s, c)


@dataclass(frozen=True)
class Annulus:
    """Open annulus c*T < |y| < T; c = 0 gives the punctured open disc."""

    c: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.c < 1.0:
            raise InvalidInputError(f"annulus ratio must be in [0, 1), got {self.c}")


@dataclass(frozen=True)
class Square:
    """Open square (-T, T)^2 with the origin removed."""


DomainShape = Annulus | Square


@dataclass(frozen=True)
class AffineLatticeSpec:
    """Unimodular basis plus real shift: the point set (Z^2 + shift) basis."""

    basis: Mat2
    shift: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        self.basis.require_unimodular()
        if len(self.shift) != 2:
            raise InvalidInputError("shift must be a 2-vector")
        object.__setattr__(self, "shift", (float(self.shift[0]), float(self.shift[1])))


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """Sorted multiset of direction angles in [0, 1) for points at scale T."""

    alphas: np.ndarray
    T: float
    shape: DomainShape

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        object.__setattr__(self, "alphas", a)
        if a.ndim != 1:
            raise InvalidInputError("alphas must be one-dimensional")
        if a.size and (a[0] < 0.0 or a[-1] >= 1.0 or np.any(np.diff(a) < 0)):
            raise InvalidInputError("alphas must be sorted and lie in [0, 1)")
        if self.T <= 0:
            raise InvalidInputError("T must be positive")

    @property
    def N(self) -> int:
        return int(self.alphas.size)


def expected_count(shape: DomainShape, T: float) -> float:
    """Leading-order point count: pi*(1-c^2)*T^2 (annulus) or 4*T^2 (square)."""
    if T <= 0:
        raise InvalidInputError("T must be positive")
    if isinstance(shape, Annulus):
        return math.pi * (1.0 - shape.c**2) * T * T
    return 4.0 * T * T


def _affine_combo(p1, p2, c1, c2):
    # y = c1*p1 + c2*p2, skipping zero terms (identity bases are common)
    if c2 == 0.0:
        return p1 if c1 == 1.0 else p1 * c1
    if c1 == 0.0:
        return p2 if c2 == 1.0 else p2 * c2
    return p1 * c1 + p2 * c2


def _iter_strip_chunks(p1, m2lo, m2hi, xi2, max_points, chunk=4_000_000):
    """Yield (p1, p2) candidate arrays in strip-aligned chunks.

    Chunking keeps the working set small; on one core the exact filter then
    runs mostly in cache instead of faulting a giant intermediate.
    """
    w = np.maximum(m2hi - m2lo + 1, 0)
    total = int(w.sum())
    if total > max_points:
        raise CapacityError(f"enumeration needs {total} candidates, cap is {max_points}")
    cum = np.concatenate([[0], np.cumsum(w)])
    n_strips = len(w)
    cuts = [0]
    while cuts[-1] < n_strips:
        nxt = int(np.searchsorted(cum, cum[cuts[-1]] + chunk, side="left"))
        cuts.append(min(max(nxt, cuts[-1] + 1), n_strips))
    for lo_i, hi_i in zip(cuts[:-1], cuts[1:]):
        ws = w[lo_i:hi_i]
        n = int(ws.sum())
        if n == 0:
            continue
        starts = np.cumsum(ws) - ws
        p1f = np.repeat(p1[lo_i:hi_i], ws)
        p2f = np.repeat(m2lo[lo_i:hi_i], ws) + (
            np.arange(n, dtype=np.int64) - np.repeat(starts, ws)
        )
        yield p1f, p2f + xi2


def _annulus_candidates(B: np.ndarray, xi1: float, xi2: float, T: float):
    # Quadratic form G = B B^t describes |p B|^2; per m1-strip the admissible
    # m2 interval is a closed-form root pair, so cost is O(area).
    q12 = B[0, 0] * B[1, 0] + B[0, 1] * B[1, 1]
    q22 = B[1, 0] ** 2 + B[1, 1] ** 2
    p1max = T * math.sqrt(q22)
    m1 = np.arange(math.ceil(-p1max - xi1), math.floor(p1max - xi1) + 1, dtype=np.int64)
    p1 = m1 + xi1
    disc = q22 * T * T - p1 * p1  # det G = (det B)^2 = 1
    disc = np.maximum(disc, 0.0)
    half = np.sqrt(disc) / q22
    mid = -q12 * p1 / q22
    m2lo = np.ceil(mid - half - xi2).astype(np.int64)
    m2hi = np.floor(mid + half - xi2).astype(np.int64)
    return p1, m2lo, m2hi


def _square_candidates(B: np.ndarray, xi1: float, xi2: float, T: float):
    # Strip bounds come from the columns of B^{-1} = [[d, -b], [-c, a]].
    p1max = T * (abs(B[1, 1]) + abs(B[1, 0]))
    m1 = np.arange(math.ceil(-p1max - xi1), math.floor(p1max - xi1) + 1, dtype=np.int64)
    p1 = m1 + xi1
    lo = np.full(p1.shape, -np.inf)
    hi = np.full(p1.shape, np.inf)
    ok = np.ones(p1.shape, dtype=bool)
    for coef, off in ((B[1, 0], p1 * B[0, 0]), (B[1, 1], p1 * B[0, 1])):
        if coef == 0.0:
            ok &= np.abs(off) < T
        else:
            b1 = (-T - off) / coef
            b2 = (T - off) / coef
            lo = np.maximum(lo, np.minimum(b1, b2))
            hi = np.minimum(hi, np.maximum(b1, b2))
    lo = np.where(ok, lo, 1.0)
    hi = np.where(ok, hi, 0.0)
    m2lo = np.ceil(lo - xi2).astype(np.int64)
    m2hi = np.floor(hi - xi2).astype(np.int64)
    return p1, m2lo, m2hi


def enumerate_points(
    lat: AffineLatticeSpec,
    shape: DomainShape,
    T: float,
    max_points: int = DEFAULT_MAX_POINTS,
) -> np.ndarray:
    """All nonzero points of the affine lattice inside the open domain.

    Returns an (n, 2) array of points y = (m + shift) basis with
    c*T < |y| < T (annulus, both inequalities strict) or y in (-T, T)^2
    (square).  Iteration runs over m1-strips of the domain preimage, so the
    cost is proportional to the domain area rather than to a bounding box
    in m-space.

    Raises CapacityError when the candidate count exceeds ``max_points``.
    """
    if T <= 0:
        raise InvalidInputError("T must be positive")
    lat.basis.require_unimodular()
    if expected_count(shape, T) > max_points:
        raise CapacityError(
            f"expected about {expected_count(shape, T):.3g} points, cap is {max_points}"
        )
    B = lat.basis.array()
    xi1, xi2 = lat.shift
    if isinstance(shape, Annulus):
        strips = _annulus_candidates(B, xi1, xi2, T)
    else:
        strips = _square_candidates(B, xi1, xi2, T)
    out1, out2 = [], []
    for p1, p2 in _iter_strip_chunks(*strips, xi2, max_points):
        y1 = _affine_combo(p1, p2, B[0, 0], B[1, 0])
        y2 = _affine_combo(p1, p2, B[0, 1], B[1, 1])
        if isinstance(shape, Annulus):
            r2 = y1 * y1 + y2 * y2
            keep = (r2 < T * T) & (r2 > (shape.c * T) ** 2)
        else:
            keep = (np.abs(y1) < T) & (np.abs(y2) < T) & ((y1 != 0.0) | (y2 != 0.0))
        out1.append(y1[keep])
        out2.append(y2[keep])
    if not out1:
        return np.empty((0, 2))
    return np.column_stack([np.concatenate(out1), np.concatenate(out2)])


def directions(points, T: float, shape: DomainShape) -> DirectionSet:
    """Sorted direction angles (turns in [0, 1)) of the given nonzero points.

    Multiplicities are preserved: k points sharing a direction produce k
    equal entries.  The branch point at angle zero maps to 0.0.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if np.any((pts[:, 0] == 0.0) & (pts[:, 1] == 0.0)):
        raise InvalidInputError("zero vector has no direction")
    alphas = np.arctan2(pts[:, 1], pts[:, 0]) / TWO_PI
    alphas = np.mod(alphas, 1.0)
    alphas[alphas >= 1.0] = 0.0  # tiny negative angles round up to 1.0
    alphas.sort(kind="stable")
    return DirectionSet(alphas, float(T), shape)


def rho_square(alpha):
    """Limiting direction density on the circle for the square domain.

    The density is pi / (4 cos^2(2 pi (alpha - nu))) on the sector around
    the nearest axis direction nu in {0, 1/4, 1/2, 3/4}; it integrates to 1
    and its square integrates to pi/3.
    """
    a = np.asarray(alpha, dtype=float)
    delta = a - np.round(a * 4.0) / 4.0
    out = math.pi / (4.0 * np.cos(TWO_PI * delta) ** 2)
    return float(out) if np.isscalar(alpha) else out


def lattice_from_json(text: str):
    """Parse a lattice experiment from its JSON form.

    Expected fields: ``basis`` (2x2 row-major), ``shift`` (2-vector),
    ``shape`` (either {"annulus": c} or "square"), ``T``.  Returns
    ``(AffineLatticeSpec, DomainShape, T)``.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"bad lattice JSON: {exc}") from exc
    try:
        basis = Mat2.from_array(obj["basis"])
        shift = tuple(float(x) for x in obj.get("shift", (0.0, 0.0)))
        shape_obj = obj.get("shape", {"annulus": 0.0})
        T = float(obj["T"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"bad lattice JSON: {exc}") from exc
    if shape_obj == "square":
        shape: DomainShape = Square()
    elif isinstance(shape_obj, dict) and "annulus" in shape_obj:
        shape = Annulus(float(shape_obj["annulus"]))
    else:
        raise InvalidInputError(f"bad shape field: {shape_obj!r}")
    return AffineLatticeSpec(basis, shift), shape, T
