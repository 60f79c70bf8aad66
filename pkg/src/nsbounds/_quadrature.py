"""Composite Simpson weights and tensor-product reduction."""
from __future__ import annotations

import numpy as np


def simpson_weights(n: int, lo: float, hi: float) -> np.ndarray:
    """Composite Simpson weights on ``n`` equispaced nodes (``n`` odd, >= 3)."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"Simpson needs an odd node count >= 3, got {n}")
    h = (hi - lo) / (n - 1)
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def tensor_reduce(values: np.ndarray, weights: list[np.ndarray]) -> float:
    """Contract ``values`` against one weight vector per axis, last axis first.

    Each contraction is a numpy ``sum`` along a contiguous axis, which uses
    pairwise summation; the reduction order is fixed by the array shape.
    """
    out = np.asarray(values, dtype=float)
    if out.ndim != len(weights):
        raise ValueError("one weight vector per axis is required")
    for w in reversed(weights):
        out = np.ascontiguousarray(out * w).sum(axis=-1)
    return float(out)
