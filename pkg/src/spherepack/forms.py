"""The quasimodular forms of the E8 certificate and their axis behaviour.

Exact q-expansions for E2, E4, E6, the discriminant, the three Jacobi theta
constants, and the two weight-0 combinations that drive the magic function:

    phi0  = (E2*E4 - E6)^2 / Delta             (nome q2)
    psi_s = 128*((th01^4 - th10^4)/th00^8
                 - (th10^4 + th00^4)/th01^8)   (nome q4)

plus psi_i(z) = z^2 * psi_s(-1/z), the inversion companion of psi_s, which
is again a theta quotient and is the kernel the magic function's minus
eigenfunction integrates along the imaginary axis.

The classical identities the whole construction leans on (Ramanujan's
derivative identities, the Jacobi quartic identity, Delta as an eta
product) are checked here in exact arithmetic.

Everything on the positive imaginary axis is evaluated through
``*_axis`` functions: direct series for t >= 1, inversion transforms for
t < 1 so the series argument always has Im >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .errors import NonRealValue
from .qseries import (
    DEFAULT_ORDER_Q2,
    DEFAULT_ORDER_Q4,
    Nome,
    QSeries,
    from_coefficients,
    one_series,
)

PI = math.pi


@dataclass(frozen=True)
class HalfPlanePoint:
    """A point tau = re + i*im with im > 0."""

    re: float
    im: float

    def __post_init__(self):
        if not self.im > 0:
            raise ValueError(f"Im(tau) must be positive, got {self.im}")

    @property
    def tau(self) -> complex:
        return complex(self.re, self.im)


class FormId(Enum):
    E2 = "E2"
    E4 = "E4"
    E6 = "E6"
    DELTA = "Delta"
    THETA00 = "Theta00"
    THETA01 = "Theta01"
    THETA10 = "Theta10"
    PHI0 = "Phi0"
    PSI_S = "PsiS"


# ---------------------------------------------------------------------------
# arithmetic helpers and generators
# ---------------------------------------------------------------------------

def divisor_sum(n: int, k: int) -> int:
    """sigma_k(n), the sum of k-th powers of the divisors of n."""
    if n < 1:
        raise ValueError(f"divisor_sum needs n >= 1, got {n}")
    if k not in (1, 3, 5):
        raise ValueError(f"divisor_sum supports k in {{1, 3, 5}}, got {k}")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** k
            e = n // d
            if e != d:
                total += e ** k
        d += 1
    return total


@lru_cache(maxsize=None)
def eisenstein_qseries(weight: int, order: int = DEFAULT_ORDER_Q2) -> QSeries:
    """E2, E4 or E6 as an exact q2-series with constant term 1."""
    if weight not in (2, 4, 6):
        raise ValueError(f"weight must be 2, 4 or 6, got {weight}")
    if order < 0:
        raise ValueError("order must be nonnegative")
    factor, k = {2: (-24, 1), 4: (240, 3), 6: (-504, 5)}[weight]
    coeffs = [Fraction(1)] + [Fraction(factor * divisor_sum(n, k)) for n in range(1, order + 1)]
    return QSeries(Nome.Q2, coeffs)


@lru_cache(maxsize=None)
def theta_qseries(kind: str, order: int = DEFAULT_ORDER_Q4) -> QSeries:
    """Jacobi theta constant in the common nome q4 = exp(pi*i*tau/4).

    theta00 = sum q4^(4n^2), theta01 = sum (-1)^n q4^(4n^2),
    theta10 = sum q4^((2n+1)^2); each n in Z contributes, so all
    coefficients away from the constant term are even.
    """
    if kind not in ("00", "01", "10"):
        raise ValueError(f"theta kind must be '00', '01' or '10', got {kind!r}")
    if order < 0:
        raise ValueError("order must be nonnegative")
    pairs: list[tuple[int, int]] = []
    n = 0
    while True:
        if kind in ("00", "01"):
            e = 4 * n * n
            if e > order:
                break
            c = -1 if (kind == "01" and n % 2) else 1
            pairs.append((e, c if n == 0 else 2 * c))
        else:
            e = (2 * n + 1) ** 2
            if e > order:
                break
            pairs.append((e, 2))
        n += 1
    if not pairs:
        pairs = [(0, 0)]
    return from_coefficients(Nome.Q4, pairs, order)


@lru_cache(maxsize=None)
def delta_qseries(order: int = DEFAULT_ORDER_Q2) -> QSeries:
    """The discriminant (E4^3 - E6^2)/1728; integer coefficients, q-coefficient 1."""
    if order < 1:
        raise ValueError("order must be at least 1")
    e4 = eisenstein_qseries(4, order)
    e6 = eisenstein_qseries(6, order)
    return (e4 ** 3 - e6 ** 2).scale(Fraction(1, 1728))


@lru_cache(maxsize=None)
def eta_product_qseries(order: int = DEFAULT_ORDER_Q2) -> QSeries:
    """q * prod_{n>=1} (1 - q^n)^24, expanded symbolically.

    Independent construction of the discriminant's expansion, used as the
    oracle against :func:`delta_qseries`.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    prod = one_series(Nome.Q2, order - 1)
    for n in range(1, order):
        factor = from_coefficients(Nome.Q2, [(0, 1), (n, -1)], order - 1)
        prod = prod * factor ** 24
    # shift by q
    return from_coefficients(
        Nome.Q2, [(k + 1, prod.coefficient(k)) for k in range(0, order)], order)


@lru_cache(maxsize=None)
def phi0_qseries(order: int = DEFAULT_ORDER_Q2) -> QSeries:
    """(E2*E4 - E6)^2 / Delta; leading term 518400*q."""
    if order < 2:
        raise ValueError("order must be at least 2")
    pad = order + 2  # division by Delta (simple zero) costs precision
    num = eisenstein_qseries(2, pad) * eisenstein_qseries(4, pad) - eisenstein_qseries(6, pad)
    series = (num * num) / delta_qseries(pad)
    return series.truncate(order)


@lru_cache(maxsize=None)
def e2e4_minus_e6_qseries(order: int = DEFAULT_ORDER_Q2) -> QSeries:
    """E2*E4 - E6, the depth-1 weight-8 combination; leading term 720*q."""
    return (eisenstein_qseries(2, order) * eisenstein_qseries(4, order)
            - eisenstein_qseries(6, order))


@lru_cache(maxsize=None)
def phi0_anomaly_qseries(order: int = DEFAULT_ORDER_Q2) -> QSeries:
    """(E2*E4 - E6)*E4 / Delta, the linear anomaly term of phi0 under inversion."""
    pad = order + 2
    num = e2e4_minus_e6_qseries(pad) * eisenstein_qseries(4, pad)
    return (num / delta_qseries(pad)).truncate(order)


@lru_cache(maxsize=None)
def e4sq_over_delta_qseries(order: int = DEFAULT_ORDER_Q2) -> QSeries:
    """E4^2 / Delta; has a simple pole at the cusp (lowest exponent -1)."""
    pad = order + 2
    e4 = eisenstein_qseries(4, pad)
    return ((e4 * e4) / delta_qseries(pad)).truncate(order)


@lru_cache(maxsize=None)
def psi_s_qseries(order: int = DEFAULT_ORDER_Q4) -> QSeries:
    """128*((th01^4 - th10^4)/th00^8 - (th10^4 + th00^4)/th01^8) in nome q4.

    Constant term 0; leading term -10240*q4^4 = -10240*exp(pi*i*tau); the
    exponent support lies in 4Z (the series is invariant under
    tau -> tau + 2).
    """
    if order < 8:
        raise ValueError("order must be at least 8")
    t004 = theta_qseries("00", order) ** 4
    t014 = theta_qseries("01", order) ** 4
    t104 = theta_qseries("10", order) ** 4
    series = ((t014 - t104) / (t004 * t004) - (t104 + t004) / (t014 * t014)).scale(128)
    return series.truncate(order)


@lru_cache(maxsize=None)
def psi_i_qseries(order: int = DEFAULT_ORDER_Q4) -> QSeries:
    """The inversion companion psi_i(z) = z^2 * psi_s(-1/z) as a theta quotient.

    psi_i = 128*((th01^4 - th10^4)/th00^8 + (th00^4 + th01^4)/th10^8);
    it has a double pole at the cusp in exp(pi*i*tau) (lowest q4 exponent
    -8) and satisfies psi_i(z) - psi_i(z+1) = psi_s(z), the relation that
    closes the contour algebra for the minus eigenfunction.
    """
    if order < 8:
        raise ValueError("order must be at least 8")
    pad = order + 16  # division by th10^8 (zero of order 8) costs precision
    t004 = theta_qseries("00", pad) ** 4
    t014 = theta_qseries("01", pad) ** 4
    t104 = theta_qseries("10", pad) ** 4
    series = ((t014 - t104) / (t004 * t004) + (t004 + t014) / (t104 * t104)).scale(128)
    return series.truncate(order)


@lru_cache(maxsize=None)
def _b_minus_psi_i_q4(order: int = DEFAULT_ORDER_Q4) -> QSeries:
    """E4^2/Delta - psi_i in nome q4; the double poles cancel exactly.

    Constant term 360.  Used to evaluate phi0 +- (36/pi^2) psi_s and the
    S-weighted kernels without catastrophic cancellation of the
    exp(2*pi*t) parts.
    """
    b4 = e4sq_over_delta_qseries(order // 8 + 1).to_q4().truncate(order)
    return b4 - psi_i_qseries(order)


@lru_cache(maxsize=None)
def _b_plus_psi_i_q4(order: int = DEFAULT_ORDER_Q4) -> QSeries:
    b4 = e4sq_over_delta_qseries(order // 8 + 1).to_q4().truncate(order)
    return b4 + psi_i_qseries(order)


def form_qseries(form: FormId, order: int | None = None) -> QSeries:
    """Series for any named form; order defaults per nome."""
    if form is FormId.E2:
        return eisenstein_qseries(2, order if order is not None else DEFAULT_ORDER_Q2)
    if form is FormId.E4:
        return eisenstein_qseries(4, order if order is not None else DEFAULT_ORDER_Q2)
    if form is FormId.E6:
        return eisenstein_qseries(6, order if order is not None else DEFAULT_ORDER_Q2)
    if form is FormId.DELTA:
        return delta_qseries(order if order is not None else DEFAULT_ORDER_Q2)
    if form is FormId.THETA00:
        return theta_qseries("00", order if order is not None else DEFAULT_ORDER_Q4)
    if form is FormId.THETA01:
        return theta_qseries("01", order if order is not None else DEFAULT_ORDER_Q4)
    if form is FormId.THETA10:
        return theta_qseries("10", order if order is not None else DEFAULT_ORDER_Q4)
    if form is FormId.PHI0:
        return phi0_qseries(order if order is not None else DEFAULT_ORDER_Q2)
    if form is FormId.PSI_S:
        return psi_s_qseries(order if order is not None else DEFAULT_ORDER_Q4)
    raise ValueError(f"unknown form {form}")


# ---------------------------------------------------------------------------
# point evaluation
# ---------------------------------------------------------------------------

def eval_form(form: FormId, tau: complex | HalfPlanePoint, tol: float = 1e-12) -> complex:
    """Evaluate a named form at a half-plane point via its q-expansion."""
    if isinstance(tau, HalfPlanePoint):
        tau = tau.tau
    return form_qseries(form).eval(tau, tol=tol)


def eval_phi0(tau: complex | HalfPlanePoint, tol: float = 1e-12) -> complex:
    return eval_form(FormId.PHI0, tau, tol)


def eval_psi_s(tau: complex | HalfPlanePoint, tol: float = 1e-12) -> complex:
    return eval_form(FormId.PSI_S, tau, tol)


def eval_psi_s_from_thetas(tau: complex | HalfPlanePoint, tol: float = 1e-12) -> complex:
    """psi_s assembled from three theta evaluations instead of its own series."""
    if isinstance(tau, HalfPlanePoint):
        tau = tau.tau
    t00 = eval_form(FormId.THETA00, tau, tol) ** 4
    t01 = eval_form(FormId.THETA01, tau, tol) ** 4
    t10 = eval_form(FormId.THETA10, tau, tol) ** 4
    return 128.0 * ((t01 - t10) / t00 ** 2 - (t10 + t00) / t01 ** 2)


# ---------------------------------------------------------------------------
# derivatives and identity checks
# ---------------------------------------------------------------------------

def normalized_derivative(series: QSeries) -> QSeries:
    """(1/(2*pi*i)) d/dtau acting coefficient-wise."""
    return series.derivative()


def serre_derivative(series: QSeries, weight: int) -> QSeries:
    """D - (weight/12)*E2, mapping weight-k forms to weight-(k+2)."""
    if series.nome is not Nome.Q2:
        raise ValueError("serre_derivative expects a q2-series; convert first")
    e2 = eisenstein_qseries(2, series.order)
    return series.derivative() - (e2 * series).scale(Fraction(weight, 12))


@dataclass(frozen=True)
class RamanujanReport:
    """Residual series of the three derivative identities (all should vanish)."""

    order: int
    residual_e2: QSeries   # D E2 - (E2^2 - E4)/12
    residual_e4: QSeries   # D E4 - (E2 E4 - E6)/3
    residual_e6: QSeries   # D E6 - (E2 E6 - E4^2)/2

    @property
    def all_zero(self) -> bool:
        return (self.residual_e2.is_zero() and self.residual_e4.is_zero()
                and self.residual_e6.is_zero())


def check_ramanujan(order: int = DEFAULT_ORDER_Q2) -> RamanujanReport:
    """Exact residuals of D E2 = (E2^2-E4)/12, D E4 = (E2 E4-E6)/3, D E6 = (E2 E6-E4^2)/2."""
    if order < 2:
        raise ValueError("order must be at least 2")
    e2 = eisenstein_qseries(2, order)
    e4 = eisenstein_qseries(4, order)
    e6 = eisenstein_qseries(6, order)
    r2 = e2.derivative() - (e2 * e2 - e4).scale(Fraction(1, 12))
    r4 = e4.derivative() - (e2 * e4 - e6).scale(Fraction(1, 3))
    r6 = e6.derivative() - (e2 * e6 - e4 * e4).scale(Fraction(1, 2))
    return RamanujanReport(order, r2, r4, r6)


@dataclass(frozen=True)
class JacobiReport:
    order: int
    residual: QSeries                      # th00^4 - th10^4 - th01^4, exact
    numeric_residuals: tuple[float, ...]   # |...| at the sample points

    @property
    def all_zero(self) -> bool:
        return self.residual.is_zero()


def check_jacobi(order: int = DEFAULT_ORDER_Q4,
                 samples: tuple[complex, ...] = ()) -> JacobiReport:
    """theta00^4 = theta10^4 + theta01^4, exactly in series and numerically at samples."""
    if order < 8:
        raise ValueError("order must be at least 8")
    res = (theta_qseries("00", order) ** 4 - theta_qseries("10", order) ** 4
           - theta_qseries("01", order) ** 4)
    numeric = []
    for tau in samples:
        v = (eval_form(FormId.THETA00, tau) ** 4 - eval_form(FormId.THETA10, tau) ** 4
             - eval_form(FormId.THETA01, tau) ** 4)
        numeric.append(abs(v))
    return JacobiReport(order, res, tuple(numeric))


# ---------------------------------------------------------------------------
# imaginary-axis evaluation
#
# For t >= 1 the series converge comfortably at tau = i*t.  For t < 1 we
# move to tau = i/t via the inversion laws
#
#   phi0(it)  = phi0(i/t) - (12t/pi) A(i/t) + (36t^2/pi^2) B(i/t)
#   psi_s(it) = -t^2 psi_i(i/t)          psi_i(it) = -t^2 psi_s(i/t)
#
# with A = (E2 E4 - E6) E4/Delta and B = E4^2/Delta.  These follow from
# E2's quasimodular anomaly and the weight-2 theta transformation; the
# direct and transformed branches are cross-checked on the overlap
# t in [0.8, 1.25] by the test suite before anything downstream trusts
# them.
# ---------------------------------------------------------------------------

#: Below this the transformed series argument exp(-2*pi/t) underflows.
AXIS_T_MIN = 0.01


def _check_axis_t(t: float) -> None:
    if not t > 0:
        raise ValueError(f"axis evaluation needs t > 0, got {t}")
    if t < AXIS_T_MIN or t > 1.0 / AXIS_T_MIN:
        raise ValueError(f"axis evaluation supports t in [{AXIS_T_MIN}, {1/AXIS_T_MIN}], got {t}")


def _real_of(value: complex, scale: float, rel: float, label: str) -> float:
    if abs(value.imag) > rel * max(abs(value), scale):
        raise NonRealValue(f"{label}: imaginary part {value.imag} too large for |{value}|")
    return value.real


def eval_phi0_axis(t: float) -> float:
    """phi0 on the positive imaginary axis; positive for all t."""
    _check_axis_t(t)
    if t >= 1.0:
        return _real_of(eval_phi0(1j * t), 1e-30, 1e-9, "phi0 axis")
    u = 1.0 / t
    val = (eval_phi0(1j * u)
           - (12.0 * t / PI) * phi0_anomaly_qseries().eval(1j * u)
           + (36.0 * t * t / PI ** 2) * e4sq_over_delta_qseries().eval(1j * u))
    return _real_of(val, 1e-30, 1e-9, "phi0 axis (transformed)")


def eval_psi_s_axis(t: float) -> float:
    """psi_s on the positive imaginary axis; negative for all t."""
    _check_axis_t(t)
    if t >= 1.0:
        return _real_of(eval_psi_s(1j * t), 1e-30, 1e-9, "psi_s axis")
    u = 1.0 / t
    val = -(t * t) * psi_i_qseries().eval(1j * u)
    return _real_of(val, 1e-30, 1e-9, "psi_s axis (transformed)")


def eval_psi_i_axis(t: float) -> float:
    """psi_i on the positive imaginary axis; positive, grows like exp(2*pi*t)."""
    _check_axis_t(t)
    if t >= 1.0:
        return _real_of(psi_i_qseries().eval(1j * t), 1e-30, 1e-9, "psi_i axis")
    u = 1.0 / t
    val = -(t * t) * eval_psi_s(1j * u)
    return _real_of(val, 1e-30, 1e-9, "psi_i axis (transformed)")


def phi0_weighted_kernel(t: float) -> float:
    """t^2 * phi0(i/t): the plus-eigenfunction's axis kernel.

    For t >= 1 the inversion law is substituted so no exp(2*pi*t)-sized
    cancellation occurs; for t < 1 the series at i/t converges directly.
    """
    _check_axis_t(t)
    if t < 1.0:
        return (t * t) * _real_of(eval_phi0(1j / t), 1e-30, 1e-9, "phi0 kernel")
    it = 1j * t
    val = ((t * t) * eval_phi0(it)
           - (12.0 * t / PI) * phi0_anomaly_qseries().eval(it)
           + (36.0 / PI ** 2) * e4sq_over_delta_qseries().eval(it))
    return _real_of(val, 1e-30, 1e-9, "phi0 kernel (transformed)")


def psi_i_axis_kernel(t: float) -> float:
    """psi_i(i*t) = -t^2 * psi_s(i/t): the minus-eigenfunction's axis kernel."""
    return eval_psi_i_axis(t)


def axis_combo_direct(t: float, sign: int) -> float:
    """phi0(it) + sign*(36/pi^2)*psi_s(it), evaluated without cancellation.

    For t < 1 both terms blow up like t^2 exp(2*pi/t); the blowing-up
    parts are B = E4^2/Delta and -psi_i, so the combination is evaluated
    through the exact series B - sign*psi_i whose poles cancel (sign=+1)
    or add benignly (sign=-1).
    """
    _check_axis_t(t)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    c = 36.0 / PI ** 2
    if t >= 1.0:
        return eval_phi0_axis(t) + sign * c * eval_psi_s_axis(t)
    u = 1.0 / t
    iu = 1j * u
    combo = _b_minus_psi_i_q4() if sign > 0 else _b_plus_psi_i_q4()
    val = (eval_phi0(iu)
           - (12.0 * t / PI) * phi0_anomaly_qseries().eval(iu)
           + (36.0 * t * t / PI ** 2) * combo.eval(iu))
    return _real_of(val, 1e-30, 1e-8, "axis combo (direct convention)")


def axis_combo_weighted(t: float, sign: int) -> float:
    """(36/pi^2)*psi_i(it) + sign*t^2*phi0(i/t), evaluated without cancellation.

    These are the two pointwise integrand-sign controls of the magic
    function beyond sqrt(2): the plus combination controls the sign of g,
    the minus combination the sign of g-hat.  For t >= 1 the exp(2*pi*t)
    parts of the two kernels coincide and are combined through the exact
    series psi_i - B before evaluation.
    """
    _check_axis_t(t)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    c = 36.0 / PI ** 2
    if t < 1.0:
        return c * eval_psi_i_axis(t) + sign * phi0_weighted_kernel(t)
    it = 1j * t
    if sign > 0:
        # c*psi_i + PHI: the exp(2*pi*t) parts add, so group them as c*(psi_i + B).
        val = (c * _b_plus_psi_i_q4().eval(it)
               + (t * t) * eval_phi0(it)
               - (12.0 * t / PI) * phi0_anomaly_qseries().eval(it))
    else:
        # c*psi_i - PHI = -c*(B - psi_i) + [c*B - PHI]; the bracket's poles cancel:
        # c*B - PHI = -t^2 phi0(it) + (12t/pi) A(it), both cusp-regular.
        val = (-c * _b_minus_psi_i_q4().eval(it)
               - (t * t) * eval_phi0(it)
               + (12.0 * t / PI) * phi0_anomaly_qseries().eval(it))
    return _real_of(val, 1e-30, 1e-8, "axis combo (weighted convention)")
