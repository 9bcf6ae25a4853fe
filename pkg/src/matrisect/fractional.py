"""Fractional relaxation and sparsification for the two-matroid problem.

A conditional-gradient loop maximizes coordinate mass subject to staying in
both (size-capped) matroid polytopes, coupling the two factors with a
quadratic penalty on their disagreement.  The resulting fractional point is
then randomly rounded down to a small ground subset on which the exact or
approximate combinatorial solvers run cheaply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Matroid,
    SolveResult,
    greedy_linear_opt,
    greedy_maximal_common,
    mask_to_bool,
    restrict,
)
from .augsets import solve_approx_augset


def estimate_rbar(m1: Matroid, m2: Matroid) -> int:
    """Size cap r_bar with r <= r_bar <= 2r: twice the greedy common set,
    clamped to the ground set size."""
    g = greedy_maximal_common(m1, m2)
    return min(2 * g.bit_count(), m1.n)


def fw_objective(x: np.ndarray, y: np.ndarray, eta: float) -> float:
    """Penalized objective: negative coordinate mass plus disagreement cost."""
    d = x - y
    return float(-x.sum() + 0.5 * eta * float(d @ d))


def fw_gradient(x: np.ndarray, y: np.ndarray, eta: float) -> tuple[np.ndarray, np.ndarray]:
    """Gradient of the penalized objective with respect to (x, y)."""
    d = x - y
    return -np.ones_like(x) + eta * d, -eta * d


@dataclass
class FractionalPoint:
    """Iterate of the conditional-gradient loop plus its vertex certificates."""

    n: int
    rbar: int
    k: int
    eta: float
    x: np.ndarray
    y: np.ndarray
    cert_x: list = field(default_factory=list)  # (mask, weight) pairs
    cert_y: list = field(default_factory=list)
    trace: list = field(default_factory=list)

    def z(self) -> np.ndarray:
        return np.minimum(self.x, self.y)

    def reconstruct(self, which: str = "x") -> np.ndarray:
        certs = self.cert_x if which == "x" else self.cert_y
        out = np.zeros(self.n)
        for mask, weight in certs:
            out += weight * mask_to_bool(mask, self.n)
        return out


def frank_wolfe_fractional(
    m1: Matroid,
    m2: Matroid,
    eps: float,
    *,
    rbar: int | None = None,
    iters: int | None = None,
) -> FractionalPoint:
    """Fractional point (x, y) in both capped matroid polytopes.

    Runs k = ceil((32 / eps^2) * (n / r_bar)) conditional-gradient steps with
    step size 2/(t+2); each step's linear subproblem is solved exactly by the
    weight-greedy over the size-capped matroid, whose vertex enters the
    convex-combination certificate.  Guarantees
    sum(min(x, y)) >= r - sqrt(32 n r / (k + 2)) for the optimum size r.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    n = m1.n
    if rbar is None:
        rbar = estimate_rbar(m1, m2)
    if rbar == 0:
        return FractionalPoint(
            n=n, rbar=0, k=0, eta=1.0, x=np.zeros(n), y=np.zeros(n)
        )
    k = iters if iters is not None else math.ceil((32 / eps**2) * (n / rbar))
    eta = math.sqrt(n * (k + 2) / (32 * rbar))
    x = np.zeros(n)
    y = np.zeros(n)
    # certificates store weights divided by a running multiplier so each
    # step rescales all of them in O(1)
    raw_x: list[tuple[int, float]] = []
    raw_y: list[tuple[int, float]] = []
    mult = 1.0
    trace = []
    for t in range(k):
        gx, gy = fw_gradient(x, y, eta)
        vx_mask = greedy_linear_opt(m1, -gx, rbar)
        vy_mask = greedy_linear_opt(m2, -gy, rbar)
        vx = mask_to_bool(vx_mask, n).astype(np.float64)
        vy = mask_to_bool(vy_mask, n).astype(np.float64)
        gap = float(-gx @ (vx - x) + -gy @ (vy - y))
        assert gap >= -1e-9, f"descent direction lost at step {t}: gap={gap}"
        gamma = 2 / (t + 2)
        x = (1 - gamma) * x + gamma * vx
        y = (1 - gamma) * y + gamma * vy
        if gamma == 1.0:  # first step replaces the iterate outright
            raw_x = [(vx_mask, 1.0)]
            raw_y = [(vy_mask, 1.0)]
            mult = 1.0
        else:
            mult *= 1 - gamma
            raw_x.append((vx_mask, gamma / mult))
            raw_y.append((vy_mask, gamma / mult))
        trace.append(
            {
                "t": t,
                "objective": fw_objective(x, y, eta),
                "sum_min": float(np.minimum(x, y).sum()),
                "gap": gap,
            }
        )
    cert_x = [(m, w * mult) for m, w in raw_x]
    cert_y = [(m, w * mult) for m, w in raw_y]
    z_sum = float(np.minimum(x, y).sum())
    d = x - y
    slack = float(x.sum() - 0.5 * eta * float(d @ d) - n / (2 * eta))
    assert z_sum >= slack - 1e-9, "coordinate-mass chain inequality violated"
    if cert_x:
        assert abs(sum(w for _, w in cert_x) - 1.0) < 1e-9
        assert abs(sum(w for _, w in cert_y) - 1.0) < 1e-9
    return FractionalPoint(
        n=n, rbar=rbar, k=k, eta=eta, x=x, y=y,
        cert_x=cert_x, cert_y=cert_y, trace=trace,
    )


@dataclass
class SparsifyPlan:
    """Record of one rounding: rounding unit, keep probability, and outcome."""

    lam: float
    p: float
    seed: int
    copies: np.ndarray
    kept_mask: int
    kept_size: int


def sparsify(x: np.ndarray, eps: float, seed: int, r_hat: int) -> SparsifyPlan:
    """Randomly round a fractional point down to a small ground subset.

    Each coordinate is split into floor(x_i / lam) unit copies with
    lam = eps * r_hat / (4 n^3); every copy survives independently with
    probability p = min(1, 36 lam ln((n+2)/eps) / eps^2), and an element is
    kept when at least one of its copies survives.  Requires the fractional
    mass to be near-optimal (sum(x) >= (1 - eps) * r_hat) for the kept subset
    to preserve a near-optimal intersection with high probability.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    n = int(x.shape[0])
    if r_hat <= 0 or n == 0:
        return SparsifyPlan(
            lam=0.0, p=0.0, seed=seed, copies=np.zeros(n, dtype=np.int64),
            kept_mask=0, kept_size=0,
        )
    lam = eps * r_hat / (4 * n**3)
    p = min(1.0, 36 * lam * math.log((n + 2) / eps) / eps**2)
    copies = np.floor(np.asarray(x, dtype=np.float64) / lam).astype(np.int64)
    rng = np.random.default_rng(seed)
    survivors = rng.binomial(copies, p)
    keep = survivors >= 1
    kept_mask = 0
    for i in np.nonzero(keep)[0]:
        kept_mask |= 1 << int(i)
    return SparsifyPlan(
        lam=lam, p=p, seed=seed, copies=copies,
        kept_mask=kept_mask, kept_size=int(keep.sum()),
    )


def solve_approx_sparse(
    m1: Matroid,
    m2: Matroid,
    eps: float,
    seed: int = 0,
    *,
    p_override: int | None = None,
    cutoff_override: int | None = None,
) -> SolveResult:
    """Approximate intersection via fractional solve, rounding, then combinatorial solve.

    The conditional-gradient point is rounded to a kept subset, both matroids
    are restricted to it, and the hybrid augmenting-set solver finishes the
    job there; the answer is mapped back to original element ids.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    n = m1.n
    greedy = greedy_maximal_common(m1, m2)
    r_hat = greedy.bit_count()
    rbar = min(2 * r_hat, n)
    frac = frank_wolfe_fractional(m1, m2, eps, rbar=rbar)
    plan = sparsify(frac.z(), eps, seed, r_hat)
    extras = {
        "plan": plan,
        "fw_k": frac.k,
        "fw_eta": frac.eta,
        "rbar": rbar,
        "sum_z": float(frac.z().sum()),
    }
    if plan.kept_mask == 0:
        return SolveResult(mask=0, size=0, d_stop=math.inf, extras=extras)
    m1r = restrict(m1, plan.kept_mask)
    m2r = restrict(m2, plan.kept_mask)
    sub = solve_approx_augset(
        m1r, m2r, eps, p_override=p_override, cutoff_override=cutoff_override
    )
    mask = m1r.to_outer_mask(sub.mask)
    extras["sub_records"] = sub.records
    return SolveResult(
        mask=mask,
        size=sub.size,
        phases=sub.phases,
        augmentations=sub.augmentations,
        d_stop=sub.d_stop,
        records=sub.records,
        extras=extras,
    )
