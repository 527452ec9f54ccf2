"""Quadratic program for shrinkage intensities.

Minimise ``0.5 * lam @ A @ lam - b @ lam`` subject to ``lam >= 0``,
``sum(lam) <= 1`` and optional extra rows ``row @ lam <= rhs``.

The problems are tiny (a handful of variables), so a primal active-set
method solves them exactly: each iteration solves one small KKT system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from .stat_core import symmetrize

__all__ = [
    "QpProblem",
    "QpSolution",
    "InfeasibleProblemError",
    "qp_objective",
    "solve",
    "brute_force_solve",
    "kkt_residual",
    "ridge_for",
]


class InfeasibleProblemError(ValueError):
    """The extra constraints cannot be met together with the simplex."""

    def __init__(self, violated):
        self.violated = list(violated)
        names = ", ".join(f"extra_{j}" for j in self.violated)
        super().__init__(f"no feasible intensity vector; violated constraints: {names}")


@dataclass(frozen=True)
class QpProblem:
    A: np.ndarray
    b: np.ndarray
    extra_constraints: Tuple[Tuple[np.ndarray, float], ...] = ()

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if A.size == 0 and b.size == 0:
            A = np.zeros((0, 0))
        K = b.size
        if A.shape != (K, K):
            raise ValueError(f"A has shape {A.shape}, expected ({K}, {K}) to match b")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("A and b must be finite")
        A = symmetrize(A) if K else A
        if K:
            tol = 1e-10 * max(abs(np.trace(A)) / K, np.finfo(float).tiny)
            if np.linalg.eigvalsh(A)[0] < -tol:
                raise ValueError("A is not positive semi-definite")
        extras = []
        for row, rhs in self.extra_constraints:
            row = np.asarray(row, dtype=float).ravel()
            if row.size != K:
                raise ValueError(f"extra constraint row has length {row.size}, expected {K}")
            if not (np.all(np.isfinite(row)) and np.isfinite(rhs)):
                raise ValueError("extra constraints must be finite")
            extras.append((row, float(rhs)))
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "extra_constraints", tuple(extras))

    @property
    def K(self) -> int:
        return self.b.size

    def constraints(self) -> Tuple[np.ndarray, np.ndarray]:
        """All constraints stacked as ``G @ lam <= h``.

        Row order: the ``K`` non-negativity rows, the sum row, then extras.
        """
        K = self.K
        G = [-np.eye(K), np.ones((1, K))]
        h = [np.zeros(K), [1.0]]
        if self.extra_constraints:
            G.append(np.array([r for r, _ in self.extra_constraints]))
            h.append([c for _, c in self.extra_constraints])
        return np.vstack(G), np.concatenate(h)

    def constraint_name(self, i: int) -> str:
        K = self.K
        if i < K:
            return f"lambda_{i}>=0"
        if i == K:
            return "sum<=1"
        return f"extra_{i - K - 1}"


@dataclass(frozen=True)
class QpSolution:
    lam: np.ndarray
    objective: float
    active_set: Tuple[str, ...] = ()
    multipliers: np.ndarray = field(default_factory=lambda: np.zeros(0))
    ridge: float = 0.0
    iterations: int = 0


def qp_objective(prob: QpProblem, lam) -> float:
    lam = np.asarray(lam, dtype=float).ravel()
    if lam.size != prob.K:
        raise ValueError(f"lambda has length {lam.size}, problem has K={prob.K}")
    return float(0.5 * lam @ prob.A @ lam - prob.b @ lam)


def ridge_for(A: np.ndarray) -> float:
    """Ridge added to a (numerically) singular ``A``; 0 when ``A`` is safely definite."""
    K = A.shape[0]
    if K == 0:
        return 0.0
    eps = 1e-10 * max(np.trace(A) / K, 1.0)
    return eps if np.linalg.eigvalsh(A)[0] < eps else 0.0


def _feasible_start(prob: QpProblem, G, h) -> np.ndarray:
    K = prob.K
    x = np.zeros(K)
    if np.all(G @ x <= h):
        return x
    # Phase one: minimise total slack on the extras over the simplex.
    E = G[K + 1:]
    r = h[K + 1:]
    m = E.shape[0]
    c = np.concatenate([np.zeros(K), np.ones(m)])
    A_ub = np.block([[E, -np.eye(m)], [np.ones((1, K)), np.zeros((1, m))]])
    b_ub = np.concatenate([r, [1.0]])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(0, None)] * (K + m), method="highs")
    if res.status != 0:
        raise RuntimeError(f"phase-one linear program failed: {res.message}")
    slack = res.x[K:]
    if res.fun > 1e-10:
        raise InfeasibleProblemError(np.flatnonzero(slack > 1e-10).tolist())
    x = np.clip(res.x[:K], 0.0, None)
    if x.sum() > 1.0:
        x /= x.sum()
    return x


def _solve_kkt(A, GW, g):
    K = A.shape[0]
    m = GW.shape[0]
    M = np.zeros((K + m, K + m))
    M[:K, :K] = A
    M[:K, K:] = GW.T
    M[K:, :K] = GW
    rhs = np.concatenate([-g, np.zeros(m)])
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(M, rhs, rcond=None)[0]
    return sol[:K], sol[K:]


def solve(prob: QpProblem, max_iter: int | None = None) -> QpSolution:
    """Exact minimiser of the intensity program.

    A ridge of ``1e-10 * max(trace(A)/K, 1)`` is added when ``A`` is
    singular; the returned solution is that of the ridged problem.

    Raises
    ------
    InfeasibleProblemError
        If no point of the simplex satisfies the extra constraints.
    """
    K = prob.K
    if K == 0:
        return QpSolution(np.zeros(0), 0.0)
    ridge = ridge_for(prob.A)
    A = prob.A + ridge * np.eye(K)
    b = prob.b
    G, h = prob.constraints()
    n_con = G.shape[0]
    scale = max(np.abs(A).max(), np.abs(b).max(), 1e-300)
    step_tol = 1e-13
    x = _feasible_start(prob, G, h)
    working: List[int] = []
    if max_iter is None:
        max_iter = 50 * (K + n_con) + 100

    for it in range(1, max_iter + 1):
        g = A @ x - b
        GW = G[working] if working else np.zeros((0, K))
        if len(working) >= K and np.linalg.matrix_rank(GW) == K:
            # At a vertex the working set pins x; only the multipliers are unknown.
            step = np.zeros(K)
            mu = np.linalg.lstsq(GW.T, -g, rcond=None)[0]
        else:
            step, mu = _solve_kkt(A, GW, g)
        # Steps that cannot change the objective are round-off from a
        # near-singular KKT system, not progress.
        tiny = np.max(np.abs(step)) <= step_tol * (1.0 + np.max(np.abs(x)))
        flat = abs(g @ step) + abs(step @ A @ step) <= 1e-15 * scale * (1.0 + np.max(np.abs(x)))
        if tiny or flat:
            if not working or np.min(mu) >= -1e-12 * scale:
                break
            # Most negative multiplier leaves; lowest index wins ties.
            j = int(np.argmin(mu))
            working.pop(j)
            continue
        Gp = G @ step
        slack = h - G @ x
        ratio = np.full(n_con, np.inf)
        cand = Gp > 1e-14 * (1.0 + np.max(np.abs(step)))
        cand[working] = False
        ratio[cand] = np.maximum(slack[cand], 0.0) / Gp[cand]
        i = int(np.argmin(ratio))
        if ratio[i] < 1.0:
            x = x + ratio[i] * step
            working.append(i)
            working.sort()
            if i < K:
                x[i] = 0.0
            else:
                # land exactly on the blocking constraint
                x = x - max(G[i] @ x - h[i], 0.0) / (G[i] @ G[i]) * G[i]
        else:
            x = x + step
    else:
        raise RuntimeError(f"active-set solver did not converge in {max_iter} iterations")

    mult = np.zeros(n_con)
    if working:
        mult[working] = np.maximum(mu, 0.0)
    x[x < 0] = 0.0
    obj = float(0.5 * x @ A @ x - b @ x)
    # Report every constraint tight at the optimum, not just the working set.
    tight = np.flatnonzero(np.abs(h - G @ x) <= 1e-12 * (1.0 + np.abs(h)))
    active = tuple(prob.constraint_name(int(i)) for i in sorted(set(tight) | set(working)))
    return QpSolution(x, obj, active, mult, ridge, it)


def kkt_residual(prob: QpProblem, sol: QpSolution) -> float:
    """Largest violation of the KKT conditions of the (ridged) problem."""
    K = prob.K
    if K == 0:
        return 0.0
    A = prob.A + sol.ridge * np.eye(K)
    G, h = prob.constraints()
    mu = sol.multipliers
    x = sol.lam
    stationarity = A @ x - prob.b + G.T @ mu
    primal = np.maximum(G @ x - h, 0.0)
    dual = np.maximum(-mu, 0.0)
    comp = np.abs(mu * (h - G @ x))
    return float(max(np.abs(stationarity).max(), primal.max(), dual.max(), comp.max()))


def _prefix_grid(K1: int, g: int) -> np.ndarray:
    """All integer vectors of length ``K1`` with non-negative entries summing to at most ``g``."""
    if K1 == 0:
        return np.zeros((1, 0), dtype=np.int64)
    axes = np.meshgrid(*[np.arange(g + 1)] * K1, indexing="ij")
    pts = np.stack([a.ravel() for a in axes], axis=1)
    return pts[pts.sum(axis=1) <= g]


def brute_force_solve(prob: QpProblem, grid_steps: int = 500, exhaustive: bool = False) -> QpSolution:
    """Best point of the grid ``{lam : lam_k in {0, 1/g, ..., 1}}`` inside the feasible set.

    Test oracle only. The first ``K - 1`` coordinates are enumerated; along
    the last one the objective is a convex parabola, so only the two grid
    neighbours of its vertex (clipped to the feasible range) can win. Pass
    ``exhaustive=True`` to evaluate every grid point instead.
    """
    K = prob.K
    g = int(grid_steps)
    if K > 4:
        raise ValueError(f"brute force supports K <= 4, got K={K}")
    if g < 100:
        raise ValueError(f"grid_steps must be >= 100, got {g}")
    if K == 0:
        return QpSolution(np.zeros(0), 0.0)
    A, b = prob.A, prob.b
    tol = 1e-12
    extras = prob.extra_constraints
    if exhaustive:
        pts = _prefix_grid(K, g) / g
        ok = np.ones(len(pts), dtype=bool)
        for row, rhs in extras:
            ok &= pts @ row <= rhs + tol
        pts = pts[ok]
        if not len(pts):
            raise InfeasibleProblemError(range(len(extras)))
        vals = 0.5 * np.einsum("ij,jk,ik->i", pts, A, pts) - pts @ b
        i = int(np.argmin(vals))
        return QpSolution(pts[i].copy(), float(vals[i]))

    pre = _prefix_grid(K - 1, g)
    lp = pre / g
    lo = np.zeros(len(pre), dtype=np.int64)
    hi = g - pre.sum(axis=1)
    ok = np.ones(len(pre), dtype=bool)
    for row, rhs in extras:
        room = rhs - lp @ row[:-1]
        last = row[-1]
        if last > 0:
            hi = np.minimum(hi, np.floor(g * (room + tol) / last).astype(np.int64))
        elif last < 0:
            lo = np.maximum(lo, np.ceil(g * (room + tol) / last - 1e-9).astype(np.int64))
        else:
            ok &= room >= -tol
    ok &= lo <= hi
    if not ok.any():
        raise InfeasibleProblemError(range(len(extras)))
    lp, lo, hi = lp[ok], lo[ok], hi[ok]
    akk = A[-1, -1]
    c1 = lp @ A[-1, :-1] - b[-1]
    if akk > 0:
        vertex = -c1 / akk * g
        cands = [np.clip(np.floor(vertex), lo, hi), np.clip(np.ceil(vertex), lo, hi)]
    else:
        cands = [lo.astype(float), hi.astype(float)]
    best_val = None
    best_pt = None
    for c in cands:
        pts = np.column_stack([lp, c / g])
        # Clipped candidates must still satisfy every extra row.
        feas = np.ones(len(pts), dtype=bool)
        for row, rhs in extras:
            feas &= pts @ row <= rhs + tol
        vals = 0.5 * np.einsum("ij,jk,ik->i", pts, A, pts) - pts @ b
        vals[~feas] = np.inf
        i = int(np.argmin(vals))
        if best_val is None or vals[i] < best_val:
            best_val, best_pt = vals[i], pts[i]
    if not np.isfinite(best_val):
        raise InfeasibleProblemError(range(len(extras)))
    return QpSolution(best_pt.copy(), float(best_val))
