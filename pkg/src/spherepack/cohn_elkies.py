"""The linear-programming certificate: sign conditions, bound, Poisson harness.

A radial Schwartz function f that is positive at 0, nonpositive for
|x| >= 1 and has nonnegative Fourier transform bounds every packing
density in dimension d by f(0)/f_hat(0) * Vol(B_d(0, 1/2)).  The magic
function g satisfies the conditions at separation sqrt(2); rescaling
f(x) = g(sqrt(2) x) turns its bound into (g(0)/g_hat(0)) * pi^4/384,
which meets the E8 density exactly when g(0) = g_hat(0).

Signs are verified on a finite grid (dense enough to resolve the double
zeros at sqrt(2n)); this is numerical verification, not a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InsufficientGrid, NonpositiveFhat0
from .lattice import enumerate_shells
from .magic import MagicEvaluator, default_evaluator
from .packing import ball_volume

PI = math.pi
SQRT2 = math.sqrt(2.0)

#: the closed-form density of the E8 packing, pi^4/384
E8_DENSITY = PI ** 4 / 384.0


def ce_bound(f0: float, fhat0: float, d: int) -> float:
    """f(0)/f_hat(0) * Vol(B_d(0, 1/2)) for a certificate at separation 1."""
    if fhat0 <= 0:
        raise NonpositiveFhat0(f"fhat(0) must be positive, got {fhat0}")
    return (f0 / fhat0) * ball_volume(d, 0.5)


def rescaled_bound(g0: float, ghat0: float, scale: float = SQRT2, d: int = 8) -> float:
    """Bound from a certificate normalized to separation ``scale``.

    With f(x) = g(scale*x), f(0) = g(0) and f_hat(0) = scale^-d g_hat(0),
    so the bound becomes (g0 * scale^d / ghat0) * Vol(B_d(0, 1/2)); at
    scale sqrt(2), d = 8 this is (g0/ghat0) * pi^4/384.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    if ghat0 <= 0:
        raise NonpositiveFhat0(f"ghat(0) must be positive, got {ghat0}")
    return (g0 * scale ** d / ghat0) * ball_volume(d, 0.5)


def default_ce_grid(r_max: float = 6.0, step: float = 0.05,
                    refine_lo: float = SQRT2, refine_hi: float = 1.6,
                    refine_step: float = 0.005) -> tuple[float, ...]:
    """Base grid plus a refinement window across the first sign change."""
    base = np.arange(0.0, r_max + step / 2, step)
    refine = np.arange(refine_lo, refine_hi + refine_step / 2, refine_step)
    grid = np.unique(np.concatenate([base, refine]))
    return tuple(float(r) for r in grid)


@dataclass(frozen=True)
class CEReport:
    """Grid verdict on the three sign conditions and the resulting bound."""

    grid: tuple[float, ...]
    g0: float
    ghat0: float
    ce1_pass: bool                 # g(0) > 0 (and the function is not identically 0)
    ce2_max_violation: float       # max g(r) over grid points with r > sqrt(2)
    ce2_argmax: float
    ce3_min_value: float           # min g_hat(r) over the whole grid
    ce3_argmin: float
    bound: float
    target: float
    tol: float
    tol_bound: float
    pass_: bool

    def as_dict(self) -> dict:
        return {
            "g0": self.g0,
            "ghat0": self.ghat0,
            "ce1_pass": self.ce1_pass,
            "ce2_max_violation": self.ce2_max_violation,
            "ce2_argmax": self.ce2_argmax,
            "ce3_min_value": self.ce3_min_value,
            "ce3_argmin": self.ce3_argmin,
            "bound": self.bound,
            "target": self.target,
            "tol": self.tol,
            "tol_bound": self.tol_bound,
            "grid_points": len(self.grid),
            "pass": self.pass_,
        }


def verify_ce(g_eval: Callable[[float], float],
              ghat_eval: Callable[[float], float],
              grid: Sequence[float] | None = None,
              tol: float | None = None,
              tol_bound: float = 1e-6) -> CEReport:
    """Check the certificate's sign conditions on a grid and compute the bound.

    The conditions are taken at separation sqrt(2): g may be positive only
    inside the first lattice radius, g_hat nowhere negative.  ``tol``
    defaults to 1e-7*|g(0)|, one order below the quadrature
    self-convergence error.
    """
    grid = tuple(default_ce_grid() if grid is None else (float(r) for r in grid))
    if not any(r > SQRT2 * (1 + 1e-6) for r in grid):
        raise InsufficientGrid("grid needs points above sqrt(2) to test the sign condition")
    g0 = g_eval(0.0)
    ghat0 = ghat_eval(0.0)
    if tol is None:
        tol = 1e-7 * abs(g0)
    outside = [r for r in grid if r > SQRT2 * (1 + 1e-6)]
    g_vals = [(g_eval(r), r) for r in outside]
    ce2_max_violation, ce2_argmax = max(g_vals)
    ghat_vals = [(ghat_eval(r), r) for r in grid]
    ce3_min_value, ce3_argmin = min(ghat_vals)
    ce1 = g0 > 0.0
    bound = rescaled_bound(g0, ghat0) if ghat0 > 0 else float("inf")
    ok = (ce1 and ce2_max_violation <= tol and ce3_min_value >= -tol
          and abs(bound - E8_DENSITY) <= tol_bound)
    return CEReport(grid=grid, g0=g0, ghat0=ghat0, ce1_pass=ce1,
                    ce2_max_violation=ce2_max_violation, ce2_argmax=ce2_argmax,
                    ce3_min_value=ce3_min_value, ce3_argmin=ce3_argmin,
                    bound=bound, target=E8_DENSITY, tol=tol, tol_bound=tol_bound,
                    pass_=ok)


def verify_magic_ce(evaluator: MagicEvaluator | None = None,
                    grid: Sequence[float] | None = None,
                    tol: float | None = None) -> CEReport:
    """The headline run: the magic function against its own certificate."""
    ev = evaluator if evaluator is not None else default_evaluator()
    grid = default_ce_grid() if grid is None else tuple(float(r) for r in grid)
    if not any(r > SQRT2 * (1 + 1e-6) for r in grid):
        raise InsufficientGrid("grid needs points above sqrt(2) to test the sign condition")
    rs = np.asarray(grid)
    g_vals = ev.g_values(rs)
    ghat_vals = ev.g_hat_values(rs)
    g0 = float(ev.eval_g(0.0))
    ghat0 = float(ev.eval_g_hat(0.0))
    if tol is None:
        tol = 1e-7 * abs(g0)
    outside = rs > SQRT2 * (1 + 1e-6)
    i2 = int(np.argmax(np.where(outside, g_vals, -np.inf)))
    i3 = int(np.argmin(ghat_vals))
    bound = rescaled_bound(g0, ghat0)
    ce1 = g0 > 0.0
    ok = (ce1 and g_vals[i2] <= tol and ghat_vals[i3] >= -tol
          and abs(bound - E8_DENSITY) <= 1e-6)
    return CEReport(grid=grid, g0=g0, ghat0=ghat0, ce1_pass=ce1,
                    ce2_max_violation=float(g_vals[i2]), ce2_argmax=float(rs[i2]),
                    ce3_min_value=float(ghat_vals[i3]), ce3_argmin=float(rs[i3]),
                    bound=bound, target=E8_DENSITY, tol=tol, tol_bound=1e-6,
                    pass_=ok)


# ---------------------------------------------------------------------------
# Poisson summation harness
# ---------------------------------------------------------------------------

def poisson_check(sigma: float, max_shell_norm2: int = 40) -> tuple[float, float]:
    """Gaussian Poisson summation over the lattice (self-dual, covolume 1).

    lhs = sum_v exp(-pi sigma |v|^2), rhs = sigma^-4 sum_v exp(-pi |v|^2 / sigma);
    summed over shells with a certified tail bound on the dropped terms.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    shells = enumerate_shells(max_shell_norm2)
    lhs = 1.0
    rhs_sum = 1.0
    for shell in shells:
        lhs += shell.count * math.exp(-PI * sigma * shell.norm2)
        rhs_sum += shell.count * math.exp(-PI * shell.norm2 / sigma)
    rhs = rhs_sum / sigma ** 4
    # counts grow like 240*sigma_3(n) <= 290 n^3; bound the dropped shells
    # by the integral of 290 x^3 exp(-pi s x) beyond the cutoff
    for s, total in ((sigma, lhs), (1.0 / sigma, rhs_sum)):
        m = max_shell_norm2 + 2
        rate = PI * s
        tail = 290.0 * math.exp(-rate * m) * (
            m ** 3 / rate + 3 * m ** 2 / rate ** 2 + 6 * m / rate ** 3 + 6 / rate ** 4)
        if tail > 1e-13 * total:
            raise ValueError(
                f"shell cutoff {max_shell_norm2} cannot certify the tail at sigma={s}")
    return lhs, rhs
