"""Shared low-level helpers: flattened integer ranges, RNG streams."""

import numpy as np


def flat_ranges(lo, hi):
    """Expand per-row inclusive integer ranges [lo_i, hi_i] into flat arrays.

    Returns ``(owner, value)`` where ``owner[k]`` is the row the k-th entry
    belongs to and ``value`` runs over ``lo_i..hi_i`` row by row.  Rows with
    ``hi < lo`` contribute nothing.
    """
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    w = np.maximum(hi - lo + 1, 0)
    total = int(w.sum())
    owner = np.repeat(np.arange(lo.size, dtype=np.int64), w)
    starts = np.cumsum(w) - w
    value = np.repeat(lo, w) + (np.arange(total, dtype=np.int64) - np.repeat(starts, w))
    return owner, value


def spawn_streams(rng, n):
    """Derive ``n`` child generators from ``rng``, deterministically.

    Children are keyed by spawn index, so results merged over blocks do not
    depend on how blocks are scheduled.
    """
    try:
        return list(rng.spawn(n))
    except AttributeError:  # numpy < 1.25
        seq = rng.bit_generator.seed_seq
        return [np.random.default_rng(s) for s in seq.spawn(n)]
