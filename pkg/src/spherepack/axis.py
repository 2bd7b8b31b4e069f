"""Imaginary-axis restrictions and the two-sided positivity inequalities.

``res_to_imag_axis`` restricts any named form to t -> F(i*t), returning
exactly 0 for t <= 0.

``eq2_samples``/``verify_inequalities`` probe the pair of combinations
phi0 +- (36/pi^2) psi_s in two conventions:

* ``DIRECT``: the kernels are the literal axis restrictions phi0(it) and
  psi_s(it).  In this reading the plus combination is provably negative
  for small and large t (psi_s's exp(-pi t) leading term beats phi0's
  exp(-2 pi t)), so the convention fails and the report says so.

* ``S_WEIGHTED``: the kernels are the inversion-weighted pair that sits
  inside the collapsed integral representations of the magic function,

      phi0 slot:  (36/pi^2) * psi_i(it)     psi_s slot:  (pi^2/36) * t^2 phi0(i/t)

  The slot assignment follows the kernels' roles, which the inversion
  z -> -1/z swaps: the combinations then read
  (36/pi^2) psi_i(it) +- t^2 phi0(i/t), which are exactly the pointwise
  integrand-sign controls for g <= 0 beyond sqrt(2) (plus sign) and
  g_hat >= 0 (minus sign).  Both are strictly positive on the axis, and
  their positivity is what the certificate's grid checks consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .forms import (
    FormId,
    axis_combo_direct,
    axis_combo_weighted,
    eval_form,
    eval_phi0_axis,
    eval_psi_i_axis,
    eval_psi_s_axis,
    form_qseries,
    phi0_weighted_kernel,
)

PI = math.pi
WEIGHT36 = 36.0 / PI ** 2


class Eq2Convention(Enum):
    DIRECT = "direct"
    S_WEIGHTED = "sweighted"


def log_grid(lo: float = 0.05, hi: float = 20.0, n: int = 400) -> tuple[float, ...]:
    """n logarithmically spaced points on [lo, hi]."""
    if not (0 < lo < hi) or n < 2:
        raise ValueError("need 0 < lo < hi and n >= 2")
    ratio = hi / lo
    return tuple(lo * ratio ** (j / (n - 1)) for j in range(n))


def res_to_imag_axis(form: FormId, t: float) -> complex:
    """F(i*t) for t > 0 and exactly 0 otherwise.

    Small t is reached through the inversion laws of each form, so the
    series argument always has Im >= 1.
    """
    if t <= 0.0:
        return 0j
    if t >= 1.0:
        return form_qseries(form).eval(1j * t)
    u = 1.0 / t
    iu = 1j * u
    if form is FormId.E2:
        return -(u * u) * eval_form(FormId.E2, iu) + 6.0 * u / PI
    if form is FormId.E4:
        return (u ** 4) * eval_form(FormId.E4, iu)
    if form is FormId.E6:
        return -(u ** 6) * eval_form(FormId.E6, iu)
    if form is FormId.DELTA:
        return (u ** 12) * eval_form(FormId.DELTA, iu)
    if form is FormId.THETA00:
        return math.sqrt(u) * eval_form(FormId.THETA00, iu)
    if form is FormId.THETA01:
        return math.sqrt(u) * eval_form(FormId.THETA10, iu)
    if form is FormId.THETA10:
        return math.sqrt(u) * eval_form(FormId.THETA01, iu)
    if form is FormId.PHI0:
        return complex(eval_phi0_axis(t))
    if form is FormId.PSI_S:
        return complex(eval_psi_s_axis(t))
    raise ValueError(f"unknown form {form}")


def check_realness(form: FormId, grid: Sequence[float]) -> float:
    """max |Im F(it)| / |F(it)| over the grid (should be rounding-level)."""
    worst = 0.0
    for t in grid:
        if t <= 0:
            raise ValueError("realness grid must be positive")
        v = res_to_imag_axis(form, t)
        if v != 0:
            worst = max(worst, abs(v.imag) / abs(v))
    return worst


@dataclass(frozen=True)
class AxisSample:
    """One grid point: the two kernels and their weighted sum and difference."""

    t: float
    phi0: float
    psi_s: float
    combo_plus: float    # phi0 + (36/pi^2) psi_s
    combo_minus: float   # phi0 - (36/pi^2) psi_s


def eq2_samples(grid: Sequence[float], convention: Eq2Convention) -> list[AxisSample]:
    """Kernel pairs and combinations at each grid point.

    The combinations are computed through cancellation-free series (the
    exp(2 pi t)-sized parts combined exactly), so the samples remain
    meaningful where naive subtraction would lose all precision.
    """
    samples = []
    for t in grid:
        if t <= 0:
            raise ValueError("grid must be positive")
        if convention is Eq2Convention.DIRECT:
            phi0 = eval_phi0_axis(t)
            psi = eval_psi_s_axis(t)
            plus = axis_combo_direct(t, +1)
            minus = axis_combo_direct(t, -1)
        else:
            phi0 = WEIGHT36 * eval_psi_i_axis(t)
            psi = (1.0 / WEIGHT36) * phi0_weighted_kernel(t)
            plus = axis_combo_weighted(t, +1)
            minus = axis_combo_weighted(t, -1)
        samples.append(AxisSample(t=t, phi0=phi0, psi_s=psi,
                                  combo_plus=plus, combo_minus=minus))
    return samples


@dataclass(frozen=True)
class InequalityReport:
    convention: Eq2Convention
    grid_size: int
    min_plus: float
    argmin_plus: float
    min_minus: float
    argmin_minus: float
    min_margin_plus: float    # combo / max(|kernels|), scale-free sign margin
    min_margin_minus: float
    refined: bool
    pass_: bool

    def as_dict(self) -> dict:
        return {
            "convention": self.convention.value,
            "grid_size": self.grid_size,
            "min_plus": self.min_plus,
            "argmin_plus": self.argmin_plus,
            "min_minus": self.min_minus,
            "argmin_minus": self.argmin_minus,
            "min_margin_plus": self.min_margin_plus,
            "min_margin_minus": self.min_margin_minus,
            "refined": self.refined,
            "pass": self.pass_,
        }


def _margins(sample: AxisSample) -> tuple[float, float]:
    scale = max(abs(sample.phi0), WEIGHT36 * abs(sample.psi_s), 1e-300)
    return sample.combo_plus / scale, sample.combo_minus / scale


def verify_inequalities(grid: Sequence[float] | None = None,
                        convention: Eq2Convention = Eq2Convention.S_WEIGHTED,
                        refine: bool = True) -> InequalityReport:
    """Positivity of both combinations over the grid, with local refinement.

    A refinement pass (4x density) is run around any normalized margin
    below 1e-3 to make sure a thin sign dip is not straddled by the grid.
    pass is true iff both combinations are strictly positive everywhere.
    """
    pts = list(log_grid() if grid is None else grid)
    samples = eq2_samples(pts, convention)
    refined = False
    if refine:
        suspicious = [s.t for s in samples if min(_margins(s)) < 1e-3]
        extra: list[float] = []
        for t in suspicious:
            extra.extend([t * 0.99, t * 0.995, t * 1.005, t * 1.01])
        extra = [t for t in extra if pts[0] <= t <= pts[-1]]
        if extra:
            refined = True
            samples.extend(eq2_samples(extra, convention))
    min_plus = min(samples, key=lambda s: s.combo_plus)
    min_minus = min(samples, key=lambda s: s.combo_minus)
    margin_plus = min(_margins(s)[0] for s in samples)
    margin_minus = min(_margins(s)[1] for s in samples)
    ok = min_plus.combo_plus > 0.0 and min_minus.combo_minus > 0.0
    return InequalityReport(convention=convention, grid_size=len(samples),
                            min_plus=min_plus.combo_plus, argmin_plus=min_plus.t,
                            min_minus=min_minus.combo_minus, argmin_minus=min_minus.t,
                            min_margin_plus=margin_plus, min_margin_minus=margin_minus,
                            refined=refined, pass_=ok)
