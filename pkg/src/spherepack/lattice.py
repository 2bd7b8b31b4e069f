"""Exact E8 lattice geometry.

Vectors live in Z^8 union (Z+1/2)^8 with even coordinate sum.  Coordinates
are stored doubled (``half_coords``), so membership, norms and Gram data
are integer arithmetic throughout; floating point appears only in the
nearest-point decoder's distances.

Shell counts come from an integer dynamic program over the coordinates
(one coset at a time); explicit shell vectors come from a pruned box
search.  The two enumeration routes are independent, and the test suite
holds them against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ResourceGuard

#: counts-only enumeration cap on the squared norm
MAX_NORM2_CAP = 100
#: explicit-vector enumeration cap on the squared norm
MAX_NORM2_VECTORS_CAP = 24


@dataclass(frozen=True)
class LatticeVector:
    """An E8 point, coordinates doubled so they stay integers."""

    half_coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.half_coords) != 8:
            raise ValueError("E8 vectors have 8 coordinates")
        parities = {h & 1 for h in self.half_coords}
        if len(parities) != 1:
            raise ValueError("coordinates must be all integers or all half-integers")
        if sum(self.half_coords) % 4 != 0:
            raise ValueError("coordinate sum must be even")

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(h, 2) for h in self.half_coords)

    def norm2(self) -> int:
        """Exact squared Euclidean norm (always an even integer)."""
        return sum(h * h for h in self.half_coords) // 4

    def as_floats(self) -> tuple[float, ...]:
        return tuple(h / 2.0 for h in self.half_coords)

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(tuple(a + b for a, b in zip(self.half_coords, other.half_coords)))


@dataclass(frozen=True)
class Shell:
    norm2: int
    count: int
    vectors: tuple[LatticeVector, ...] | None = None

    def __post_init__(self):
        if self.norm2 % 2 or self.norm2 < 0:
            raise ValueError("shell norms in E8 are even and nonnegative")
        if self.vectors is not None:
            if len(self.vectors) != self.count:
                raise ValueError("vector list inconsistent with count")
            if any(v.norm2() != self.norm2 for v in self.vectors):
                raise ValueError("vector with wrong norm in shell")


def e8_membership(v: Sequence) -> bool:
    """Is v (exact half-integer coordinates) a point of the lattice?"""
    if len(v) != 8:
        return False
    halves = []
    for x in v:
        h = Fraction(x) * 2
        if h.denominator != 1:
            raise ValueError(f"coordinate {x} is not a multiple of 1/2")
        halves.append(int(h))
    if len({h & 1 for h in halves}) != 1:
        return False
    return sum(halves) % 4 == 0


@dataclass(frozen=True)
class LatticeBasis:
    rows: tuple[LatticeVector, ...]

    def __post_init__(self):
        if len(self.rows) != 8:
            raise ValueError("a basis has 8 rows")

    def half_matrix(self) -> list[list[int]]:
        return [list(r.half_coords) for r in self.rows]

    def determinant(self) -> Fraction:
        """Exact determinant of the (half-integer) basis matrix."""
        return Fraction(_int_det([list(r.half_coords) for r in self.rows]), 2 ** 8)

    def gram(self) -> list[list[Fraction]]:
        rows = self.rows
        return [[Fraction(sum(a * b for a, b in zip(rows[i].half_coords, rows[j].half_coords)), 4)
                 for j in range(8)] for i in range(8)]


def _int_det(m: list[list[int]]) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    a = [row[:] for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@lru_cache(maxsize=1)
def e8_basis() -> LatticeBasis:
    """A fixed unimodular basis: 2e1, the D8 chain, and the half-integer glue row.

    Lower triangular with diagonal (2, 1, 1, 1, 1, 1, 1, 1/2), so the
    determinant is exactly 1.
    """
    rows_halves = [
        (4, 0, 0, 0, 0, 0, 0, 0),
        (-2, 2, 0, 0, 0, 0, 0, 0),
        (0, -2, 2, 0, 0, 0, 0, 0),
        (0, 0, -2, 2, 0, 0, 0, 0),
        (0, 0, 0, -2, 2, 0, 0, 0),
        (0, 0, 0, 0, -2, 2, 0, 0),
        (0, 0, 0, 0, 0, -2, 2, 0),
        (1, 1, 1, 1, 1, 1, 1, 1),
    ]
    return LatticeBasis(tuple(LatticeVector(h) for h in rows_halves))


def covolume() -> float:
    """|det| of the basis; 1 for this unimodular lattice."""
    return float(abs(e8_basis().determinant()))


# ---------------------------------------------------------------------------
# shells
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _shell_counts(max_norm2: int) -> tuple[int, ...]:
    """counts[m] = #{v : ||v||^2 = m} for m = 0..max_norm2, by coordinate DP.

    Integer coset: 8 coordinates x in Z contribute x^2 with parity x mod 2;
    half coset: x = m + 1/2 contributes (2m+1)^2/4, tracked at scale 4 so the
    table stays integral; the even-sum constraint is a parity bit.
    """
    m4 = 4 * max_norm2

    def coset_counts(contributions: list[tuple[int, int]]) -> list[int]:
        # dp[parity][k]: ways to reach scaled norm k with given sum-parity
        dp = [[0] * (m4 + 1) for _ in range(2)]
        dp[0][0] = 1
        for _ in range(8):
            ndp = [[0] * (m4 + 1) for _ in range(2)]
            for par in (0, 1):
                row = dp[par]
                for k in range(m4 + 1):
                    c = row[k]
                    if c:
                        for add, p in contributions:
                            if k + add <= m4:
                                ndp[par ^ p][k + add] += c
            dp = ndp
        return dp[0]

    xmax = int(math.isqrt(max_norm2))
    integer = coset_counts([(4 * x * x, abs(x) & 1) for x in range(-xmax, xmax + 1)])
    hmax = int(math.isqrt(m4))
    half = coset_counts([(h * h, ((h - 1) // 2) & 1) for h in range(-hmax, hmax + 1) if h & 1])
    return tuple(integer[4 * m] + half[4 * m] for m in range(0, max_norm2 + 1))


def _box_vectors(max_norm2: int) -> list[LatticeVector]:
    """All nonzero lattice vectors with ||v||^2 <= max_norm2, pruned box DFS."""
    out: list[LatticeVector] = []
    budget4 = 4 * max_norm2  # in half-coordinate scale

    def walk(prefix: list[int], used: int, start_parity: int):
        depth = len(prefix)
        if depth == 8:
            if sum(prefix) % 4 == 0 and used > 0:
                out.append(LatticeVector(tuple(prefix)))
            return
        rem = budget4 - used
        hmax = int(math.isqrt(rem))
        if start_parity == 0:
            values = range(-(hmax - hmax % 2), hmax + 1, 2)
        else:
            values = range(-(hmax - (1 - hmax % 2)), hmax + 1, 2)
        for h in values:
            walk(prefix + [h], used + h * h, start_parity)

    walk([], 0, 0)
    walk([], 0, 1)
    out.sort(key=lambda v: (v.norm2(), v.half_coords))
    return out


def enumerate_shells(max_norm2: int, with_vectors: bool = False,
                     cap: int = MAX_NORM2_CAP) -> list[Shell]:
    """Shells 0 < ||v||^2 <= max_norm2, complete and duplicate-free."""
    if max_norm2 < 0:
        raise ValueError("max_norm2 must be nonnegative")
    if max_norm2 > cap:
        raise ResourceGuard(f"max_norm2 = {max_norm2} above cap {cap}")
    if with_vectors:
        if max_norm2 > MAX_NORM2_VECTORS_CAP:
            raise ResourceGuard(
                f"explicit vectors capped at norm^2 {MAX_NORM2_VECTORS_CAP}")
        by_norm: dict[int, list[LatticeVector]] = {}
        for v in _box_vectors(max_norm2):
            by_norm.setdefault(v.norm2(), []).append(v)
        return [Shell(m, len(vs), tuple(vs)) for m, vs in sorted(by_norm.items())]
    counts = _shell_counts(max_norm2)
    return [Shell(m, counts[m]) for m in range(2, max_norm2 + 1, 2) if counts[m]]


def min_norm() -> float:
    """Minimal distance between distinct lattice points: sqrt(2)."""
    shells = enumerate_shells(2)
    if not shells:
        raise RuntimeError("no shell found at norm^2 = 2")
    return math.sqrt(shells[0].norm2)


def theta_coefficients(max_n: int, cap: int = MAX_NORM2_CAP // 2) -> list[int]:
    """r(n) = #{v : ||v||^2 = 2n} for n = 0..max_n (the lattice's theta numbers)."""
    if max_n > cap:
        raise ResourceGuard(f"max_n = {max_n} above cap {cap}")
    counts = _shell_counts(2 * max_n)
    return [1] + [counts[2 * n] for n in range(1, max_n + 1)]


# ---------------------------------------------------------------------------
# nearest point
# ---------------------------------------------------------------------------

def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.floor(x + 0.5)


def _decode_d8(y: np.ndarray) -> np.ndarray:
    """Nearest point of D8 (integer vectors with even sum) to each row of y."""
    f = _round_half_away(y)
    delta = y - f
    odd = (f.sum(axis=1).astype(np.int64) & 1).astype(bool)
    if odd.any():
        idx = np.abs(delta[odd]).argmax(axis=1)
        rows = np.nonzero(odd)[0]
        step = np.where(delta[rows, idx] >= 0.0, 1.0, -1.0)
        f[rows, idx] += step
    return f


def decode_batch(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized decoder: nearest lattice points and distances for an (n,8) array.

    Decodes in D8 and in D8 + (1/2,...,1/2) and keeps the closer point.
    """
    y = np.asarray(points, dtype=np.float64)
    if y.ndim == 1:
        y = y[None, :]
    a = _decode_d8(y)
    b = _decode_d8(y - 0.5) + 0.5
    da = ((y - a) ** 2).sum(axis=1)
    db = ((y - b) ** 2).sum(axis=1)
    use_b = db < da
    best = np.where(use_b[:, None], b, a)
    dist = np.sqrt(np.where(use_b, db, da))
    return best, dist


def nearest_point(y: Sequence[float]) -> tuple[LatticeVector, float]:
    """Nearest lattice point to y and the Euclidean distance."""
    arr = np.asarray(list(y), dtype=np.float64)
    if arr.shape != (8,):
        raise ValueError("nearest_point expects an 8-vector")
    if not np.isfinite(arr).all():
        raise ValueError("coordinates must be finite")
    best, dist = decode_batch(arr[None, :])
    halves = tuple(int(round(2.0 * c)) for c in best[0])
    return LatticeVector(halves), float(dist[0])
