"""Non-robust reference estimators: squared-range LS and gradient descent.

Both report the percentile objective of the returned point so their
estimates are directly comparable with the grid solver's.
"""

from __future__ import annotations

import math

import numpy as np

from .core import Estimate, Point2, Scenario, objective

SECULAR_TOL = 1e-10
MAX_BISECT = 200


class SolverDegenerateError(RuntimeError):
    """Anchor geometry too degenerate for the squared-range solver."""


def _design(scenario: Scenario):
    a = scenario.anchor_array()
    y = scenario.measurement_array()
    mat = np.column_stack([-2.0 * a, np.ones(scenario.m)])
    rhs = y**2 - (a**2).sum(axis=1)
    return mat, rhs


def srls(scenario: Scenario) -> Estimate:
    """Squared-range least squares via the trust-region reformulation.

    Minimizes sum_m (||x - a_m||^2 - y_m^2)^2 exactly by lifting to
    z = (x, alpha) with the constraint alpha = ||x||^2 and running a
    bisection on the Lagrange multiplier of the resulting quadratic
    problem.  Rank-deficient geometry (collinear anchors) cannot pin the
    constraint curve and raises SolverDegenerateError; the two-anchor
    case falls back to minimum-norm inner solves.
    """
    mat, rhs = _design(scenario)
    rank = np.linalg.matrix_rank(mat)
    if rank < 3 and scenario.m >= 3:
        raise SolverDegenerateError(
            "anchors are collinear: squared-range system is rank-deficient"
        )
    full_rank = rank == 3

    gram = mat.T @ mat
    atb = mat.T @ rhs
    d_mat = np.diag([1.0, 1.0, 0.0])
    f_vec = np.array([0.0, 0.0, -0.5])

    def solve_z(lam: float) -> np.ndarray:
        lhs = gram + lam * d_mat
        rhs_vec = atb - lam * f_vec
        if full_rank:
            try:
                return np.linalg.solve(lhs, rhs_vec)
            except np.linalg.LinAlgError:
                pass
        return np.linalg.lstsq(lhs, rhs_vec, rcond=None)[0]

    def secular(lam: float) -> float:
        z = solve_z(lam)
        return float(z @ d_mat @ z + 2.0 * f_vec @ z)

    # Multiplier interval: gram + lam*D stays PD for lam > -1/mu_max with
    # mu_max the largest generalized eigenvalue of (D, gram).
    if full_rank:
        mu = np.linalg.eigvals(np.linalg.solve(gram, d_mat))
    else:
        mu = np.linalg.eigvals(np.linalg.pinv(gram) @ d_mat)
    mu_max = float(np.max(mu.real))
    if not (math.isfinite(mu_max) and mu_max > 0):
        raise SolverDegenerateError("cannot bracket the multiplier interval")
    lam_lo = -1.0 / mu_max

    lo = lam_lo + max(1e-12, abs(lam_lo) * 1e-10)
    phi_lo = secular(lo)
    shrink = 0
    while phi_lo < 0 and shrink < 6:
        lo = lam_lo + (lo - lam_lo) * 1e-3
        phi_lo = secular(lo)
        shrink += 1
    if not math.isfinite(phi_lo):
        raise SolverDegenerateError("secular equation is not finite")
    if phi_lo < 0:
        # Root sits at the interval edge; the edge solve is the answer.
        lam = lo
    else:
        hi = lo + max(1.0, abs(lo))
        grow = 0
        while secular(hi) > 0:
            hi = lo + 2.0 * (hi - lo)
            grow += 1
            if grow > 200:
                raise SolverDegenerateError("secular equation has no root")
        lam = 0.5 * (lo + hi)
        for _ in range(MAX_BISECT):
            phi = secular(lam)
            if abs(phi) <= SECULAR_TOL:
                break
            if phi > 0:
                lo = lam
            else:
                hi = lam
            lam = 0.5 * (lo + hi)

    z = solve_z(lam)
    if not np.all(np.isfinite(z)):
        raise SolverDegenerateError("non-finite solution")
    point = Point2(float(z[0]), float(z[1]))
    return Estimate(point=point, objective=objective(point, scenario), provenance="srls")


def rls_value(point, scenario: Scenario) -> float:
    """Range least-squares objective sum_m (y_m - ||x - a_m||)^2."""
    x = np.asarray(point, dtype=float)
    a = scenario.anchor_array()
    y = scenario.measurement_array()
    r = np.sqrt(((x[None, :] - a) ** 2).sum(axis=1))
    return float(((y - r) ** 2).sum())


def rls_gradient(point, scenario: Scenario) -> np.ndarray:
    """Gradient of rls_value; distance terms at an anchor contribute 0."""
    x = np.asarray(point, dtype=float)
    a = scenario.anchor_array()
    y = scenario.measurement_array()
    diff = x[None, :] - a
    r = np.sqrt((diff**2).sum(axis=1))
    grad = np.zeros(2)
    mask = r > 0
    coef = 2.0 * (r[mask] - y[mask]) / r[mask]
    grad += (coef[:, None] * diff[mask]).sum(axis=0)
    return grad


def gd_rls(
    scenario: Scenario,
    max_iters: int = 5000,
    grad_tol: float = 1e-8,
    callback=None,
) -> Estimate:
    """Gradient descent on the range least-squares objective.

    Armijo backtracking (shrink 0.5, slope factor 1e-4, unit initial
    step), initialized at the squared-range solution; falls back to the
    mean anchor when that solver is degenerate.  Always returns the best
    iterate seen.  ``callback(k, x, f)`` fires after each accepted step.
    """
    try:
        start = srls(scenario).point
    except SolverDegenerateError:
        start = scenario.mean_anchor()
    x = np.array([start.x, start.y])

    f = rls_value(x, scenario)
    best_x, best_f = x.copy(), f
    for it in range(max_iters):
        g = rls_gradient(x, scenario)
        gnorm = float(np.sqrt(g @ g))
        if gnorm <= grad_tol:
            break
        step = 1.0
        moved = False
        while step > 1e-20:
            x_new = x - step * g
            f_new = rls_value(x_new, scenario)
            if f_new <= f - 1e-4 * step * gnorm * gnorm:
                moved = True
                break
            step *= 0.5
        if not moved:
            break
        x, f = x_new, f_new
        if callback is not None:
            callback(it, x.copy(), f)
        if f < best_f:
            best_x, best_f = x.copy(), f

    point = Point2(float(best_x[0]), float(best_x[1]))
    return Estimate(point=point, objective=objective(point, scenario), provenance="gd")
