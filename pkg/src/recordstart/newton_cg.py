"""Deterministic Newton conjugate-gradient descent on a box.

One engine step = one outer Newton iteration: solve ``H p = -g``
approximately with conjugate gradients (at most ``dim`` iterations, which
solves strictly convex quadratics exactly), backtrack an Armijo line
search along ``p``, clip the accepted point to the box.  The engine is
exposed step-by-step so a surrounding loop can interleave its own
termination rules between iterations.

Native termination is either a gradient norm at most ``G_TOL`` or a line
search that cannot produce a strict decrease (the floating-point floor at
a stationary value); both set ``converged``.

Direction handling away from the convex regime: coordinates pinned to the
box with an outward gradient pull are frozen for the subproblem, and when
the very first CG iteration meets non-positive curvature the step falls
back to the gradient direction rescaled to a fixed fraction of the box
diagonal (plain ``-g`` is metrically meaningless on landscapes whose
curvature scale differs wildly from unity, and crawls).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .objectives import ObjectiveSpec, Oracle

__all__ = ["G_TOL", "NcgState", "init", "step", "run_to_convergence"]

G_TOL = 1e-8
ARMIJO_C = 1e-4
MAX_BACKTRACKS = 30
SADDLE_STEP_FRACTION = 0.25


@dataclass
class NcgState:
    oracle: Oracle
    x: np.ndarray
    fx: float
    gx: np.ndarray
    iteration: int
    converged: bool
    line_search_evals: int = 0


def init(spec: ObjectiveSpec, x0, oracle: Oracle | None = None) -> NcgState:
    """Start an engine at ``x0`` (clipped to the box): one f and one
    gradient evaluation."""
    oracle = oracle if oracle is not None else Oracle(spec)
    x = np.clip(np.asarray(x0, dtype=float), spec.lower, spec.upper)
    fx = oracle.f(x)
    if not math.isfinite(fx):
        raise ValueError(f"{spec.name}: non-finite value at the start point")
    gx = oracle.grad(x)
    return NcgState(
        oracle=oracle,
        x=x,
        fx=fx,
        gx=gx,
        iteration=0,
        converged=bool(np.linalg.norm(gx) <= G_TOL),
    )


def _direction(state: NcgState):
    """Search direction and the box-masked gradient, or None at a
    fully pinned point."""
    spec = state.oracle.spec
    x, g = state.x, state.gx
    d = spec.dim
    span = spec.upper - spec.lower
    pin_tol = 1e-12 * span
    free = ~(((x <= spec.lower + pin_tol) & (g > 0)) | ((x >= spec.upper - pin_tol) & (g < 0)))
    gm = np.where(free, g, 0.0)
    gm_norm = np.linalg.norm(gm)
    if gm_norm == 0.0:
        return None
    p = np.zeros(d)
    r = gm.copy()
    pd = -r
    rr = float(r @ r)
    for i in range(d):
        if math.sqrt(rr) <= 1e-12 * max(1.0, gm_norm):
            break
        ap = np.where(free, state.oracle.hvp(x, pd), 0.0)
        curv = float(pd @ ap)
        if curv <= 0.0:
            if i == 0:
                p = -gm * (SADDLE_STEP_FRACTION * span * math.sqrt(d) / gm_norm)
            break
        a = rr / curv
        p += a * pd
        r += a * ap
        rr_new = float(r @ r)
        pd = -r + (rr_new / rr) * pd
        rr = rr_new
    if float(p @ gm) >= 0.0:
        p = -gm
    return p, gm


def step(state: NcgState) -> float | None:
    """One outer iteration.  Returns the new value on an accepted move,
    or None when the engine terminates natively instead."""
    if state.converged:
        raise RuntimeError("step() on a converged engine")
    spec = state.oracle.spec
    found = _direction(state)
    if found is None:
        state.converged = True
        return None
    p, gm = found
    slope = float(gm @ p)
    t = 1.0
    for _ in range(MAX_BACKTRACKS):
        xn = np.clip(state.x + t * p, spec.lower, spec.upper)
        fn = state.oracle.f(xn)
        state.line_search_evals += 1
        if fn < state.fx and fn <= state.fx + ARMIJO_C * t * slope:
            state.line_search_evals -= 1  # accepted probe is the iterate's own eval
            state.x = xn
            state.fx = fn
            state.gx = state.oracle.grad(xn)
            state.iteration += 1
            state.converged = bool(np.linalg.norm(state.gx) <= G_TOL)
            return fn
        t *= 0.5
    state.converged = True  # no strict decrease available: native stop
    return None


def run_to_convergence(spec: ObjectiveSpec, x0, max_iters: int = 1000, oracle: Oracle | None = None):
    """Bare descent with the native stopping rule only; returns the
    trajectory of (x, f) pairs including the start point."""
    state = init(spec, x0, oracle=oracle)
    history = [(state.x.copy(), state.fx)]
    while not state.converged and state.iteration < max_iters:
        if step(state) is None:
            break
        history.append((state.x.copy(), state.fx))
    return history
