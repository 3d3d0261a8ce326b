"""Geometry of the open probability simplex and row-wise products of it.

A simplex point is a strictly positive vector summing to one; an
assignment field is a row-stochastic matrix holding one simplex point
per grid vertex.  The replicator map sends an ambient payoff vector to
a tangent vector of the simplex, and the lifting map realizes a
geometry-preserving Euler step (exponentiate entrywise, renormalize).
"""

from __future__ import annotations

import numpy as np

SUM_TOL = 1e-12

# Entries are clamped up to this floor after each lift so iterates stay
# strictly inside the simplex under finite floating point.
POSITIVITY_FLOOR = 1e-300


def barycenter(count: int) -> np.ndarray:
    """Uniform distribution (1/c, ..., 1/c) over `count` categories."""
    if count < 1:
        raise ValueError(f"category count must be >= 1, got {count}")
    return np.full(count, 1.0 / count)


def check_simplex_point(w, tol: float = SUM_TOL) -> np.ndarray:
    """Validate and return `w` as a simplex point (1-D, positive, sums to 1)."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise ValueError(f"simplex point must be 1-D, got shape {w.shape}")
    if w.size == 0:
        raise ValueError("simplex point must have at least one entry")
    if not np.all(w > 0.0):
        raise ValueError("simplex point entries must be strictly positive")
    s = float(w.sum())
    if abs(s - 1.0) > tol:
        raise ValueError(f"simplex point entries sum to {s}, expected 1 within {tol}")
    return w


def check_assignment_field(W, tol: float = SUM_TOL) -> np.ndarray:
    """Validate and return `W` as an assignment field (rows are simplex points)."""
    W = np.asarray(W, dtype=float)
    if W.ndim != 2:
        raise ValueError(f"assignment field must be 2-D, got shape {W.shape}")
    if W.shape[1] == 0:
        raise ValueError("assignment field must have at least one column")
    if not np.all(W > 0.0):
        raise ValueError("assignment field entries must be strictly positive")
    sums = W.sum(axis=1)
    worst = float(np.abs(sums - 1.0).max()) if W.shape[0] else 0.0
    if worst > tol:
        raise ValueError(f"assignment field row sums deviate from 1 by {worst}")
    return W


def check_tangent(v, tol: float = SUM_TOL) -> np.ndarray:
    """Validate and return `v` as a tangent vector (entries sum to 0)."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"tangent vector must be 1-D, got shape {v.shape}")
    s = float(v.sum())
    if abs(s) > tol:
        raise ValueError(f"tangent vector entries sum to {s}, expected 0 within {tol}")
    return v


def replicator(w, x) -> np.ndarray:
    """Payoff-to-tangent map at w:  w ∘ x − ⟨x, w⟩ w."""
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    if w.ndim != 1 or x.shape != w.shape:
        raise ValueError(f"shape mismatch: w {w.shape} vs x {x.shape}")
    return w * x - np.dot(x, w) * w


def field_replicator(W, F) -> np.ndarray:
    """Row-wise replicator: row i of the result is replicator(W_i, F_i)."""
    W = np.asarray(W, dtype=float)
    F = np.asarray(F, dtype=float)
    if W.ndim != 2 or F.shape != W.shape:
        raise ValueError(f"shape mismatch: field {W.shape} vs payoff {F.shape}")
    WF = W * F
    return WF - WF.sum(axis=1, keepdims=True) * W


def _lift_rows(W: np.ndarray, V: np.ndarray, h: float) -> np.ndarray:
    z = h * V
    z = z - z.max(axis=-1, keepdims=True)  # guard the entrywise exp
    out = W * np.exp(z)
    out /= out.sum(axis=-1, keepdims=True)
    np.maximum(out, POSITIVITY_FLOOR, out=out)
    out /= out.sum(axis=-1, keepdims=True)
    return out


def lift(w, v, h: float) -> np.ndarray:
    """Move from w along ambient direction v:  (w ∘ e^{h·v}) / ⟨w, e^{h·v}⟩.

    Invariant under v ↦ v + κ·1 and simplex-preserving for any h ≥ 0;
    its first-order expansion in h is w + h·replicator(w, v).
    """
    w = np.asarray(w, dtype=float)
    v = np.asarray(v, dtype=float)
    if w.ndim != 1 or v.shape != w.shape:
        raise ValueError(f"shape mismatch: w {w.shape} vs v {v.shape}")
    if h < 0:
        raise ValueError(f"step size must be >= 0, got {h}")
    return _lift_rows(w, v, h)


def lift_field(W, V, h: float) -> np.ndarray:
    """Row-wise lift of an assignment field along an ambient payoff field."""
    W = np.asarray(W, dtype=float)
    V = np.asarray(V, dtype=float)
    if W.ndim != 2 or V.shape != W.shape:
        raise ValueError(f"shape mismatch: field {W.shape} vs payoff {V.shape}")
    if h < 0:
        raise ValueError(f"step size must be >= 0, got {h}")
    return _lift_rows(W, V, h)


def row_entropy_stats(W) -> tuple[float, float]:
    """Mean Shannon entropy (nats) and mean max entry over the rows of W."""
    W = np.asarray(W, dtype=float)
    if W.ndim != 2:
        raise ValueError(f"assignment field must be 2-D, got shape {W.shape}")
    entropy = -np.sum(W * np.log(W), axis=1)
    return float(entropy.mean()), float(W.max(axis=1).mean())
