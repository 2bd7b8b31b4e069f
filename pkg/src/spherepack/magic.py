"""The magic function: contour integrals, eigenfunction combination, Hankel check.

The plus eigenfunction a and minus eigenfunction b are built from six
straight contour legs each (two rectangle sides from -1 and +1 up to i,
the leg from i down to 0, and the vertical ray from i), with integrands
assembled from phi0 respectively psi_s at inversion-transformed
arguments.  Every leg keeps its integrand argument at Im >= 1/2, where
the exact q-expansions converge fast, so the legs are plain
Gauss-Legendre panels; the ray is truncated with a certified exponential
tail bound.

Both functions are purely imaginary on real radii: each vertical leg
contributes i times a real integral and the two horizontal legs are
complex conjugates with a sign.  The real combination

    g(r)     = Re[ (pi*i/8640) a(r) - (i/(240*pi)) b(r) ]
    g_hat(r) = Re[ (pi*i/8640) a(r) + (i/(240*pi)) b(r) ]

is the Cohn-Elkies candidate and its Fourier transform (a and b are +1
and -1 eigenfunctions, so hatting g only flips the b term).  The b-term
sign is fixed by the sign conditions the certificate must satisfy
(g <= 0 beyond sqrt(2), g_hat >= 0 everywhere) and is cross-checked by
the independent Hankel-transform pipeline in this module; with the theta
and Eisenstein conventions used here, g(0) = g_hat(0) = 1 exactly.

For r >= sqrt(2) both functions collapse to single exponential-kernel
integrals along the imaginary axis (the rectangle legs cancel against
the rays by periodicity), picking up the factor -4 sin^2(pi r^2/2) that
pins the zeros at radii sqrt(2n) -- double zeros from sqrt(4) on, a
simple crossing at sqrt(2) where the kernel's cusp pole eats one order:

    a(r) = -4 sin^2(pi r^2/2) Int_0^{i inf} phi0(-1/z) z^2 e^{pi i r^2 z} dz
    b(r) = -4 sin^2(pi r^2/2) Int_0^{i inf} psi_i(z)        e^{pi i r^2 z} dz

with psi_i(z) = z^2 psi_s(-1/z).  These are evaluated independently of
the contour sums (Gauss on [0,1], exact exponential moments termwise on
[1, inf)) and serve as the representation-consistency oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import (
    InsufficientTable,
    NonRealValue,
    PropagatedDomainError,
    TailBoundViolated,
)
from .forms import (
    e4sq_over_delta_qseries,
    eval_phi0,
    eval_psi_s,
    phi0_anomaly_qseries,
    phi0_qseries,
    psi_i_qseries,
)
from .quadrature import QuadratureConfig, gauss_nodes, panel_nodes

PI = math.pi
SQRT2 = math.sqrt(2.0)

#: coefficient of the plus eigenfunction inside g
COEFF_A = 1j * PI / 8640.0
#: coefficient of the minus eigenfunction inside g; the sign makes the
#: combination satisfy the certificate's sign conditions (see module doc)
COEFF_B = -1j / (240.0 * PI)

#: |a(0)| = 8640/pi; reference scale for realness assertions
A_SCALE = 8640.0 / PI

#: growth/decay rates and leading-coefficient envelopes of the two ray
#: integrands, used in certified tail bounds (factor 2 of safety)
_RAY_DECAY_A = 2.0 * PI
_RAY_COEFF_A = 2.0 * 518400.0
_RAY_DECAY_B = PI
_RAY_COEFF_B = 2.0 * 10240.0


class IntegrandKind(Enum):
    PHI0_SHIFT_PLUS = "phi0_shift_plus"     # phi0(-1/(z+1)) (z+1)^2
    PHI0_SHIFT_MINUS = "phi0_shift_minus"   # phi0(-1/(z-1)) (z-1)^2
    PHI0_INVERTED = "phi0_inverted"         # phi0(-1/z) z^2
    PHI0_DIRECT = "phi0_direct"             # phi0(z)
    PSI_SHIFT_PLUS = "psi_shift_plus"
    PSI_SHIFT_MINUS = "psi_shift_minus"
    PSI_INVERTED = "psi_inverted"
    PSI_DIRECT = "psi_direct"


def _kernel(kind: IntegrandKind, z: complex) -> complex:
    """Integrand without the exponential factor exp(pi*i*r^2*z)."""
    if kind is IntegrandKind.PHI0_SHIFT_PLUS:
        return eval_phi0(-1.0 / (z + 1.0)) * (z + 1.0) ** 2
    if kind is IntegrandKind.PHI0_SHIFT_MINUS:
        return eval_phi0(-1.0 / (z - 1.0)) * (z - 1.0) ** 2
    if kind is IntegrandKind.PHI0_INVERTED:
        return eval_phi0(-1.0 / z) * z ** 2
    if kind is IntegrandKind.PHI0_DIRECT:
        return eval_phi0(z)
    if kind is IntegrandKind.PSI_SHIFT_PLUS:
        return eval_psi_s(-1.0 / (z + 1.0)) * (z + 1.0) ** 2
    if kind is IntegrandKind.PSI_SHIFT_MINUS:
        return eval_psi_s(-1.0 / (z - 1.0)) * (z - 1.0) ** 2
    if kind is IntegrandKind.PSI_INVERTED:
        return eval_psi_s(-1.0 / z) * z ** 2
    if kind is IntegrandKind.PSI_DIRECT:
        return eval_psi_s(z)
    raise ValueError(f"unknown integrand {kind}")


@dataclass(frozen=True)
class ContourSegment:
    start: complex
    end: complex
    integrand: IntegrandKind
    coefficient: complex
    is_ray: bool = False

    def __post_init__(self):
        if self.is_ray:
            if self.start.imag <= 0:
                raise ValueError("ray must start in the upper half-plane")
        else:
            mid = (self.start + self.end) / 2.0
            if self.start != self.end and mid.imag <= 0:
                raise ValueError("segment interior must stay in the upper half-plane")


def contour_segments_a(r2: float) -> list[ContourSegment]:
    """The six legs whose integral sum defines a(r), r^2 = r2.

    Legs follow the drawn orientation: -1 -> -1+i -> i, 1 -> 1+i -> i,
    i -> 0 with coefficient +2 (same as -2 times the 0 -> i integral),
    and the ray i -> i*inf with coefficient +2.
    """
    if r2 < 0:
        raise ValueError("r2 must be nonnegative")
    sp, sm = IntegrandKind.PHI0_SHIFT_PLUS, IntegrandKind.PHI0_SHIFT_MINUS
    return [
        ContourSegment(-1.0 + 0j, -1.0 + 1j, sp, 1.0),
        ContourSegment(-1.0 + 1j, 1j, sp, 1.0),
        ContourSegment(1.0 + 0j, 1.0 + 1j, sm, 1.0),
        ContourSegment(1.0 + 1j, 1j, sm, 1.0),
        ContourSegment(1j, 0j, IntegrandKind.PHI0_INVERTED, 2.0),
        ContourSegment(1j, 1j, IntegrandKind.PHI0_DIRECT, 2.0, is_ray=True),
    ]


def contour_segments_b(r2: float) -> list[ContourSegment]:
    """The six legs of b(r): psi_s integrands, ray coefficient -2."""
    if r2 < 0:
        raise ValueError("r2 must be nonnegative")
    sp, sm = IntegrandKind.PSI_SHIFT_PLUS, IntegrandKind.PSI_SHIFT_MINUS
    return [
        ContourSegment(-1.0 + 0j, -1.0 + 1j, sp, 1.0),
        ContourSegment(-1.0 + 1j, 1j, sp, 1.0),
        ContourSegment(1.0 + 0j, 1.0 + 1j, sm, 1.0),
        ContourSegment(1.0 + 1j, 1j, sm, 1.0),
        ContourSegment(1j, 0j, IntegrandKind.PSI_INVERTED, 2.0),
        ContourSegment(1j, 1j, IntegrandKind.PSI_DIRECT, -2.0, is_ray=True),
    ]


def _ray_tail_bound(kind: IntegrandKind, r2: float, T: float) -> float:
    if kind is IntegrandKind.PHI0_DIRECT:
        decay, coeff = _RAY_DECAY_A, _RAY_COEFF_A
    else:
        decay, coeff = _RAY_DECAY_B, _RAY_COEFF_B
    rate = decay + PI * r2
    return coeff * math.exp(-rate * T) / rate


def _segment_nodes(seg: ContourSegment, quad: QuadratureConfig) -> tuple[np.ndarray, np.ndarray]:
    """Gauss nodes and complex weights (including kernel values and coefficient)."""
    if seg.is_ray:
        t0 = seg.start.imag
        nodes_t, weights_t = panel_nodes(t0, quad.ray_truncation,
                                         quad.panels_per_segment, quad.gauss_order)
        nodes = 1j * nodes_t
        weights = 1j * weights_t
    elif seg.start == seg.end:
        return np.zeros(0, dtype=complex), np.zeros(0, dtype=complex)
    else:
        nodes, weights = panel_nodes(seg.start, seg.end,
                                     quad.panels_per_segment, quad.gauss_order)
    kernel = np.array([_kernel(seg.integrand, z) for z in nodes], dtype=complex)
    return nodes, seg.coefficient * weights * kernel


def segment_integral(seg: ContourSegment, r2: float, quad: QuadratureConfig) -> complex:
    """Integral of the segment's integrand times exp(pi*i*r2*z), with coefficient.

    Endpoints on the real axis are regular: the integrands vanish to all
    orders as the axis is approached vertically, and Gauss nodes never sit
    on an endpoint anyway.
    """
    if seg.is_ray:
        tail = _ray_tail_bound(seg.integrand, r2, quad.ray_truncation)
        if tail > quad.tail_tol:
            raise TailBoundViolated(
                f"ray tail {tail:.3g} above tol {quad.tail_tol} at T={quad.ray_truncation}")
    nodes, weights = _segment_nodes(seg, quad)
    if len(nodes) == 0:
        return 0j
    return complex((weights * np.exp(1j * PI * r2 * nodes)).sum())


class MagicEvaluator:
    """Precomputed contour data; everything r-dependent is one vector product.

    The kernel values on all twelve legs are independent of the radius, so
    they are computed once per quadrature configuration; evaluating a, b, g
    at a radius then costs a single exp over the node array.  Instances are
    immutable after construction and safe to share.
    """

    def __init__(self, quad: QuadratureConfig | None = None):
        self.quad = quad if quad is not None else QuadratureConfig()
        a_segs = contour_segments_a(0.0)
        b_segs = contour_segments_b(0.0)
        for seg in (a_segs[-1], b_segs[-1]):
            tail = _ray_tail_bound(seg.integrand, 0.0, self.quad.ray_truncation)
            if tail > self.quad.tail_tol:
                raise TailBoundViolated(
                    f"ray truncation {self.quad.ray_truncation} cannot certify "
                    f"{self.quad.tail_tol} (tail {tail:.3g})")
        self._nodes_a, self._weights_a = self._assemble(a_segs)
        self._nodes_b, self._weights_b = self._assemble(b_segs)

    def _assemble(self, segs: Sequence[ContourSegment]) -> tuple[np.ndarray, np.ndarray]:
        nodes, weights = [], []
        for seg in segs:
            n, w = _segment_nodes(seg, self.quad)
            nodes.append(n)
            weights.append(w)
        return np.concatenate(nodes), np.concatenate(weights)

    # -- contour evaluations ---------------------------------------------------

    def eval_a(self, r: float) -> complex:
        """Plus eigenfunction at radius r; purely imaginary up to quadrature noise."""
        return self._check_imaginary(self._sum(self._nodes_a, self._weights_a, r * r), "a")

    def eval_b(self, r: float) -> complex:
        return self._check_imaginary(self._sum(self._nodes_b, self._weights_b, r * r), "b")

    def _sum(self, nodes: np.ndarray, weights: np.ndarray, r2: float) -> complex:
        return complex((weights * np.exp(1j * PI * r2 * nodes)).sum())

    @staticmethod
    def _check_imaginary(value: complex, label: str) -> complex:
        if abs(value.real) > 1e-8 * (abs(value) + A_SCALE):
            raise NonRealValue(
                f"{label}: real part {value.real} too large (value {value})")
        return value

    def a_values(self, radii: np.ndarray) -> np.ndarray:
        """Vectorized eval_a over a radius grid (complex array)."""
        r2 = np.asarray(radii, dtype=float) ** 2
        return np.exp(1j * PI * np.outer(r2, self._nodes_a)) @ self._weights_a

    def b_values(self, radii: np.ndarray) -> np.ndarray:
        r2 = np.asarray(radii, dtype=float) ** 2
        return np.exp(1j * PI * np.outer(r2, self._nodes_b)) @ self._weights_b

    # -- the certificate combination -------------------------------------------

    def eval_g(self, r: float) -> float:
        combo = COEFF_A * self.eval_a(r) + COEFF_B * self.eval_b(r)
        return _real_or_raise(combo, "g")

    def eval_g_hat(self, r: float) -> float:
        combo = COEFF_A * self.eval_a(r) - COEFF_B * self.eval_b(r)
        return _real_or_raise(combo, "g_hat")

    def g_values(self, radii: np.ndarray) -> np.ndarray:
        return (COEFF_A * self.a_values(radii) + COEFF_B * self.b_values(radii)).real

    def g_hat_values(self, radii: np.ndarray) -> np.ndarray:
        return (COEFF_A * self.a_values(radii) - COEFF_B * self.b_values(radii)).real

    # -- single-integral representations (r >= sqrt(2)) -------------------------

    def eval_a_propagated(self, r: float) -> complex:
        """a(r) through the collapsed axis integral; valid for r >= sqrt(2)."""
        r2 = _check_propagated_radius(r)
        if r2 is None:
            return 0j
        s2 = math.sin(PI * r2 / 2.0) ** 2
        return 4j * s2 * _laplace_phi(r2, self.quad)

    def eval_b_propagated(self, r: float) -> complex:
        r2 = _check_propagated_radius(r)
        if r2 is None:
            return 0j
        s2 = math.sin(PI * r2 / 2.0) ** 2
        return -4j * s2 * _laplace_psi_i(r2, self.quad)


def _real_or_raise(value: complex, label: str) -> float:
    if abs(value.imag) > 1e-7 * (abs(value) + 1.0):
        raise NonRealValue(f"{label}: imaginary part {value.imag} too large")
    return value.real


def _check_propagated_radius(r: float) -> float | None:
    """r^2 for the collapsed representation; None at the boundary r = sqrt(2).

    At r = sqrt(2) exactly, the axis integral diverges but its
    sin^2(pi r^2/2) prefactor vanishes; the function value is 0.
    """
    r2 = r * r
    if r2 < 2.0 * (1.0 - 1e-12):
        raise PropagatedDomainError(
            f"single-integral form diverges below sqrt(2); got r = {r}")
    if abs(r2 - 2.0) < 1e-11:
        return None
    return r2


def _exp_moment0(c: float) -> float:
    return math.exp(-c) / c


def _exp_moment1(c: float) -> float:
    return math.exp(-c) * (c + 1.0) / (c * c)


def _exp_moment2(c: float) -> float:
    return math.exp(-c) * (c * c + 2.0 * c + 2.0) / (c * c * c)


def _float_pairs(series):
    return [(k, float(series.coefficient(k)))
            for k in range(series.lowest, series.order + 1) if series.coefficient(k) != 0]


@lru_cache(maxsize=1)
def _phi0_float_coeffs():
    return (_float_pairs(phi0_qseries()), _float_pairs(phi0_anomaly_qseries()),
            _float_pairs(e4sq_over_delta_qseries()))


@lru_cache(maxsize=1)
def _psi_i_float_coeffs():
    ser = psi_i_qseries()
    pairs = []
    for k in range(ser.lowest, ser.order + 1):
        c = ser.coefficient(k)
        if c != 0:
            if k % 4:
                raise RuntimeError("psi_i support must lie in 4Z")
            pairs.append((k // 4, float(c)))
    return pairs


def _laplace_phi(r2: float, quad: QuadratureConfig) -> float:
    """Int_0^inf t^2 phi0(i/t) e^{-pi r2 t} dt for r2 > 2.

    [0,1]: Gauss panels on the inversion-transformed series (argument i/t
    has Im >= 1).  [1,inf): exact exponential moments of the q-expansion
    of t^2 phi0(it) - (12t/pi) A(it) + (36/pi^2) B(it), which equals
    t^2 phi0(i/t) there.
    """
    x, w = gauss_nodes(2 * quad.gauss_order)
    low = 0.0
    for panel in range(4):
        lo, hi = panel / 4.0, (panel + 1) / 4.0
        mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
        for xi, wi in zip(x, w):
            t = mid + half * xi
            low += wi * half * (t * t * eval_phi0(1j / t).real * math.exp(-PI * r2 * t))
    phi0_pairs, anom_pairs, b_pairs = _phi0_float_coeffs()
    high = 0.0
    for n, c in phi0_pairs:
        high += c * _exp_moment2(2.0 * PI * n + PI * r2)
    for n, c in anom_pairs:
        high -= (12.0 / PI) * c * _exp_moment1(2.0 * PI * n + PI * r2)
    for n, c in b_pairs:
        high += (36.0 / PI ** 2) * c * _exp_moment0(2.0 * PI * n + PI * r2)
    return low + high


def _laplace_psi_i(r2: float, quad: QuadratureConfig) -> float:
    """Int_0^inf psi_i(it) e^{-pi r2 t} dt for r2 > 2."""
    x, w = gauss_nodes(2 * quad.gauss_order)
    low = 0.0
    for panel in range(4):
        lo, hi = panel / 4.0, (panel + 1) / 4.0
        mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
        for xi, wi in zip(x, w):
            t = mid + half * xi
            low += wi * half * ((-t * t) * eval_psi_s(1j / t).real * math.exp(-PI * r2 * t))
    high = 0.0
    for k, c in _psi_i_float_coeffs():
        high += c * _exp_moment0(PI * k + PI * r2)
    return low + high


@lru_cache(maxsize=4)
def default_evaluator(quad: QuadratureConfig | None = None) -> MagicEvaluator:
    """Shared evaluator; building the node tables costs about a second."""
    return MagicEvaluator(quad)


# ---------------------------------------------------------------------------
# radial tables and the Hankel-transform cross-check
# ---------------------------------------------------------------------------

class RadialKind(Enum):
    A = "A"          # Im a(r): the plus eigenfunction's real radial profile
    B = "B"          # Im b(r)
    G = "G"          # g(r)
    GHAT = "GHat"    # g_hat(r)


@dataclass(frozen=True)
class RadialTable:
    radii: tuple[float, ...]
    values: tuple[float, ...]
    which: RadialKind

    def __post_init__(self):
        if len(self.radii) != len(self.values):
            raise ValueError("radii and values must have equal length")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly increasing")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("table values must be finite")


def tabulate_radial(which: RadialKind, radii: Sequence[float],
                    evaluator: MagicEvaluator | None = None) -> RadialTable:
    """Evaluate one radial profile on a grid (vectorized, deterministic)."""
    ev = evaluator if evaluator is not None else default_evaluator()
    rs = np.asarray(list(radii), dtype=float)
    if which is RadialKind.A:
        vals = ev.a_values(rs).imag
    elif which is RadialKind.B:
        vals = ev.b_values(rs).imag
    elif which is RadialKind.G:
        vals = ev.g_values(rs)
    elif which is RadialKind.GHAT:
        vals = ev.g_hat_values(rs)
    else:
        raise ValueError(f"unknown radial kind {which}")
    return RadialTable(tuple(float(r) for r in rs), tuple(float(v) for v in vals), which)


# -- Bessel J0..J3 ------------------------------------------------------------

_SERIES_CUTOFF = 12.0


def _bessel_series(n: int, x: float) -> float:
    half = x / 2.0
    term = half ** n / math.factorial(n)
    total = term
    for m in range(1, 80):
        term *= -(half * half) / (m * (m + n))
        total += term
        if abs(term) < 1e-18 * max(abs(total), 1e-300):
            break
    return total


def _bessel_asymptotic(n: int, x: float) -> float:
    mu = 4.0 * n * n
    chi = x - (2 * n + 1) * PI / 4.0
    p, q = 1.0, 0.0
    term = 1.0
    for m in range(1, 11):
        term *= (mu - (2 * m - 1) ** 2) / (m * 8.0 * x)
        if m % 2:
            q += term if (m // 2) % 2 == 0 else -term
        else:
            p += term if (m // 2) % 2 == 0 else -term
    return math.sqrt(2.0 / (PI * x)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_j(n: int, x: float) -> float:
    """J_n(x) for n in 0..3: power series below 12, asymptotics + recurrence above."""
    if n < 0 or n > 3:
        raise ValueError("bessel_j supports orders 0..3")
    if x < 0:
        raise ValueError("bessel_j expects x >= 0")
    if x < _SERIES_CUTOFF:
        return _bessel_series(n, x)
    j0 = _bessel_asymptotic(0, x)
    if n == 0:
        return j0
    j1 = _bessel_asymptotic(1, x)
    if n == 1:
        return j1
    # upward recurrence is stable here since n <= 3 << x
    jm, jc = j0, j1
    for k in range(1, n):
        jm, jc = jc, (2.0 * k / x) * jc - jm
    return jc


def _bessel_j3_array(x: np.ndarray) -> np.ndarray:
    return np.array([bessel_j(3, float(v)) for v in x])


# -- the radial Fourier transform in dimension 8 ------------------------------

def _cubic_interp(radii: np.ndarray, values: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Local 4-point Lagrange cubic on a strictly increasing grid."""
    idx = np.searchsorted(radii, s, side="right") - 1
    idx = np.clip(idx, 0, len(radii) - 2)
    i0 = np.clip(idx - 1, 0, len(radii) - 4)
    out = np.zeros_like(s)
    for k in range(4):
        xk = radii[i0 + k]
        lk = np.ones_like(s)
        for m in range(4):
            if m == k:
                continue
            xm = radii[i0 + m]
            lk *= (s - xm) / (xk - xm)
        out += values[i0 + k] * lk
    return out


def _taper(u: np.ndarray) -> np.ndarray:
    """C^2 window: 1 at u<=0 falling to 0 at u>=1 (smootherstep complement)."""
    v = np.clip(u, 0.0, 1.0)
    return 1.0 - v ** 3 * (10.0 - 15.0 * v + 6.0 * v * v)


def hankel8(table: RadialTable, r: float, taper_start: float = 0.7) -> float:
    """8-dimensional radial Fourier transform of the tabulated profile at radius r.

    f_hat(r) = 2 pi r^{-3} Int_0^inf f(s) J_3(2 pi r s) s^4 ds, via panelwise
    Gauss resolving both the Bessel oscillation (period 1/r) and the
    profile's own oscillation, with a smooth taper over the last
    (1 - taper_start) of the table regularizing the slowly decaying
    eigenfunction tails.
    """
    if r <= 0:
        raise ValueError("hankel8 needs r > 0")
    radii = np.asarray(table.radii)
    values = np.asarray(table.values)
    if len(radii) < 16:
        raise InsufficientTable("need at least 16 table points")
    s_max = radii[-1]
    if s_max < 4.0:
        raise InsufficientTable("table must extend to s >= 4")
    gaps = np.diff(radii)
    if gaps.max() > 0.2:
        raise InsufficientTable(f"table spacing {gaps.max():.3g} too coarse")
    s0 = taper_start * s_max
    x, w = gauss_nodes(16)
    edges = [0.0]
    while edges[-1] < s_max:
        s = edges[-1]
        h = min(0.5 / r, 1.0 / max(1.0, s), s_max - s)
        edges.append(s + max(h, 1e-3))
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = (lo + hi) / 2.0, (hi - lo) / 2.0
        s = mid + half * x
        f = _cubic_interp(radii, values, s)
        window = _taper((s - s0) / (s_max - s0))
        total += float((w * f * window * _bessel_j3_array(2.0 * PI * r * s) * s ** 4).sum() * half)
    return 2.0 * PI * total / r ** 3
