"""Consistency objective over template assignments and its replicator ascent.

The objective couples the assignment field P with itself across grid
edges, weighted by the template adjacency matrices:

    J(P) = <P, A_h P Omega_h^T + A_v P Omega_v^T>

Ascent follows the Riemannian gradient (row-wise replicator of the
ambient gradient) and is integrated with the exponentiated Euler step
`lift_field`, whose first-order expansion reproduces the replicator
update while staying on the simplex product exactly.

Besides the fast production path, this module carries the oracle forms
used for cross-checking: the literal edge-by-edge objective and a dense
Kronecker-product evaluation of the gradient for small instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .dictionary import PatchAdjacency
from .grid import GridGraph, apply_adjacency
from .simplex import check_assignment_field, field_replicator, lift_field, row_entropy_stats

KRONECKER_DENSE_LIMIT = 4096


class FlowDivergenceError(RuntimeError):
    """Raised when the integrator produces a non-finite state."""


@dataclass(frozen=True)
class FlowProblem:
    """A grid graph, the template adjacency pair, and the initial field."""

    graph: GridGraph
    adjacency: PatchAdjacency
    initial: np.ndarray

    def __post_init__(self):
        initial = check_assignment_field(self.initial).copy()
        n = self.graph.num_vertices
        if initial.shape != (n, self.adjacency.size):
            raise ValueError(f"initial field must have shape ({n}, {self.adjacency.size}), "
                             f"got {initial.shape}")
        initial.setflags(write=False)
        object.__setattr__(self, "initial", initial)

    @property
    def num_templates(self) -> int:
        return self.adjacency.size

    def reverse(self) -> "FlowProblem":
        """Orientation-reversed twin: flipped edges, transposed adjacency."""
        return FlowProblem(self.graph.reverse(),
                           PatchAdjacency(self.adjacency.omega_h.T, self.adjacency.omega_v.T),
                           self.initial)


@dataclass(frozen=True)
class FlowConfig:
    """Integrator settings: step size, stopping thresholds, trace sampling."""

    step_size: float = 0.02
    max_steps: int = 200_000
    convergence_tol: float = 0.999
    stall_tol: float = 1e-10
    record_every: int = 100

    def __post_init__(self):
        if not self.step_size > 0:
            raise ValueError(f"step size must be > 0, got {self.step_size}")
        if self.max_steps < 0:
            raise ValueError(f"max steps must be >= 0, got {self.max_steps}")
        if not (0.0 < self.convergence_tol <= 1.0):
            raise ValueError(f"convergence tolerance must be in (0, 1], got {self.convergence_tol}")
        if not (0.0 < self.stall_tol <= 1.0):
            raise ValueError(f"stall tolerance must be in (0, 1], got {self.stall_tol}")
        if self.record_every < 1:
            raise ValueError(f"record interval must be >= 1, got {self.record_every}")


class TraceRecord(NamedTuple):
    step: int
    time: float
    objective: float
    mean_entropy: float
    mean_max_entry: float


@dataclass(frozen=True)
class FlowResult:
    """Final state, step count, sampled trace, and convergence diagnostics."""

    final: np.ndarray
    steps_taken: int
    trace: tuple
    converged: bool
    convergence_stats: tuple

    @property
    def objective_trace(self) -> list:
        return [(rec.time, rec.objective) for rec in self.trace]


def _check_state(problem: FlowProblem, P) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    expected = (problem.graph.num_vertices, problem.num_templates)
    if P.shape != expected:
        raise ValueError(f"assignment field must have shape {expected}, got {P.shape}")
    return P


def objective(problem: FlowProblem, P) -> float:
    """Frobenius form <P, A_h P Omega_h^T + A_v P Omega_v^T>."""
    P = _check_state(problem, P)
    g = problem.graph
    smoothed = apply_adjacency(g, "horizontal", False, P) @ problem.adjacency.omega_h.T
    smoothed += apply_adjacency(g, "vertical", False, P) @ problem.adjacency.omega_v.T
    return float(np.sum(P * smoothed))


def objective_edge_sum(problem: FlowProblem, P) -> float:
    """Literal edge-by-edge form: sum over edges ij of <P_i, Omega P_j>."""
    P = _check_state(problem, P)
    total = 0.0
    for direction, omega in (("horizontal", problem.adjacency.omega_h),
                             ("vertical", problem.adjacency.omega_v)):
        for i, j in problem.graph.edges(direction):
            total += float(P[i] @ omega @ P[j])
    return total


def euclidean_gradient(problem: FlowProblem, P) -> np.ndarray:
    """Ambient gradient: A_h P Omega_h^T + A_v P Omega_v^T + transposed terms."""
    P = _check_state(problem, P)
    g = problem.graph
    oh, ov = problem.adjacency.omega_h, problem.adjacency.omega_v
    out = apply_adjacency(g, "horizontal", False, P) @ oh.T
    out += apply_adjacency(g, "vertical", False, P) @ ov.T
    out += apply_adjacency(g, "horizontal", True, P) @ oh
    out += apply_adjacency(g, "vertical", True, P) @ ov
    return out


def _dense_adjacency(graph: GridGraph, direction: str) -> np.ndarray:
    n = graph.num_vertices
    A = np.zeros((n, n))
    edges = graph.edges(direction)
    if len(edges):
        A[edges[:, 0], edges[:, 1]] = 1.0
    return A


def kronecker_gradient(problem: FlowProblem, P) -> np.ndarray:
    """Dense vectorized gradient for small instances (cross-check only).

    Builds (A_h ⊗ Omega_h) + (A_v ⊗ Omega_v) plus transposes, applies it
    to the row-stacked vectorization of P, and reshapes back.
    """
    P = _check_state(problem, P)
    n, m = P.shape
    if n * m > KRONECKER_DENSE_LIMIT:
        raise ValueError(f"dense evaluation limited to n*|D| <= {KRONECKER_DENSE_LIMIT}, "
                         f"got {n * m}")
    M = np.kron(_dense_adjacency(problem.graph, "horizontal"), problem.adjacency.omega_h)
    M += np.kron(_dense_adjacency(problem.graph, "vertical"), problem.adjacency.omega_v)
    vec = P.reshape(-1)
    return ((M + M.T) @ vec).reshape(n, m)


def riemannian_gradient(problem: FlowProblem, P) -> np.ndarray:
    """Row-wise replicator of the ambient gradient; rows sum to zero."""
    P = _check_state(problem, P)
    return field_replicator(P, euclidean_gradient(problem, P))


def generic_assignment_flow(fitness: Callable, W0, config: FlowConfig,
                            objective_fn: Optional[Callable] = None,
                            observer: Optional[Callable] = None) -> FlowResult:
    """Integrate dW/dt = R_W[fitness(W)] with the exponentiated Euler step.

    Stops when the mean max entry reaches `convergence_tol`, when the
    largest per-entry change falls below `stall_tol`, or at `max_steps`;
    the first two set `converged`.  The trace is sampled every
    `record_every` steps (step 0 and the final step always included);
    its objective column is NaN when no `objective_fn` is given.
    """
    W = check_assignment_field(W0).copy()
    h = config.step_size

    def evaluate(state):
        return float(objective_fn(state)) if objective_fn is not None else math.nan

    def make_record(step, state):
        mean_ent, mean_max = row_entropy_stats(state)
        return TraceRecord(step, step * h, evaluate(state), mean_ent, mean_max)

    records = [make_record(0, W)]
    converged = records[0].mean_max_entry >= config.convergence_tol
    steps = 0
    recorded_last = True
    for step in range(1, config.max_steps + 1):
        if converged:
            break
        new = lift_field(W, fitness(W), h)
        if not np.all(np.isfinite(new)):
            raise FlowDivergenceError(f"non-finite assignment state at step {step}")
        delta = float(np.abs(new - W).max())
        W = new
        steps = step
        recorded_last = step % config.record_every == 0
        if recorded_last:
            records.append(make_record(step, W))
        if observer is not None:
            observer(step, W)
        mean_max = float(W.max(axis=1).mean())
        if mean_max >= config.convergence_tol or delta < config.stall_tol:
            converged = True
            break
    if not recorded_last:
        records.append(make_record(steps, W))
    last = records[-1]
    W.setflags(write=False)
    return FlowResult(final=W, steps_taken=steps, trace=tuple(records),
                      converged=converged,
                      convergence_stats=(last.mean_entropy, last.mean_max_entry))


def integrate(problem: FlowProblem, config: FlowConfig,
              observer: Optional[Callable] = None) -> FlowResult:
    """Run the patch assignment ascent from the problem's initial field."""
    return generic_assignment_flow(
        lambda W: euclidean_gradient(problem, W),
        problem.initial,
        config,
        objective_fn=lambda W: objective(problem, W),
        observer=observer,
    )


def write_trace_csv(path, trace) -> None:
    """Trace export: one row per sampled step."""
    lines = ["step,time,objective,mean_entropy,mean_max_entry"]
    for rec in trace:
        lines.append(f"{rec.step},{rec.time:.17g},{rec.objective:.17g},"
                     f"{rec.mean_entropy:.17g},{rec.mean_max_entry:.17g}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
