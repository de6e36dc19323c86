"""The quadratic program that bounds the unoccupied part of the span below ``r_L``.

Maximise ``sum_k a_k b_k + a_k (1 - sum_{j>=k} b_j) / 2`` subject to
``0 <= a_k <= 1/2``, ``sum a_k = 1``, ``0 <= b_k <= 1/(2k+1)`` and
``sum b_k <= 1``. The optimum of the infinite program is 7/12, reached at
``a = (1/2, 1/2, 0, ...)``, ``b = (1/3, 0, ...)``. Here it is checked at a finite
truncation: exactly on a grid, by seeded random sampling in integer
arithmetic, and by block coordinate ascent (the objective is linear in ``a``
for fixed ``b`` and the other way round, and both linear steps are solvable in
closed form).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..core import StripPackError, format_scalar

STATED_OPTIMUM = Fraction(7, 12)
HALF = Fraction(1, 2)

_ALPHA_DEN = 1 << 20
_BETA_DEN = 1 << 24
_MAX_K = 256  # keeps the integer objective far below 2**63
_BATCH = 20000


class QpFeasibilityError(StripPackError, ValueError):
    """A point outside the feasible region of the program."""


def beta_cap(k: int) -> Fraction:
    return Fraction(1, 2 * k + 1)


@dataclass(frozen=True)
class QpPoint:
    alphas: tuple[Fraction, ...]
    betas: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(Fraction(a) for a in self.alphas))
        object.__setattr__(self, "betas", tuple(Fraction(b) for b in self.betas))
        if len(self.alphas) != len(self.betas):
            raise QpFeasibilityError("alphas and betas need the same length")

    @property
    def k_max(self) -> int:
        return len(self.alphas)

    def violations(self) -> list[str]:
        out = []
        for k, a in enumerate(self.alphas, 1):
            if not 0 <= a <= HALF:
                out.append(f"alpha_{k} = {a} is outside [0, 1/2]")
        if sum(self.alphas, Fraction(0)) != 1:
            out.append(f"sum of alphas is {sum(self.alphas, Fraction(0))}, not 1")
        for k, b in enumerate(self.betas, 1):
            if not 0 <= b <= beta_cap(k):
                out.append(f"beta_{k} = {b} is outside [0, 1/{2 * k + 1}]")
        if sum(self.betas, Fraction(0)) > 1:
            out.append(f"sum of betas is {sum(self.betas, Fraction(0))} > 1")
        return out

    def to_dict(self) -> dict:
        return {"alphas": [format_scalar(a) for a in self.alphas],
                "betas": [format_scalar(b) for b in self.betas]}


def stated_point(k_max: int = 2) -> QpPoint:
    """The optimum of the infinite program, padded with zeros to ``k_max``."""
    if k_max < 2:
        raise ValueError("the program needs k_max >= 2 (alpha_k <= 1/2 and sum alpha_k = 1)")
    zeros = [Fraction(0)] * (k_max - 2)
    return QpPoint([HALF, HALF] + zeros, [Fraction(1, 3), Fraction(0)] + zeros)


def _objective(alphas: Sequence[Fraction], betas: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    tail = sum(betas, Fraction(0))
    for a, b in zip(alphas, betas):
        total += a * b + a * (1 - tail) / 2
        tail -= b
    return total


def qp_objective(point: QpPoint) -> Fraction:
    bad = point.violations()
    if bad:
        raise QpFeasibilityError("; ".join(bad))
    return _objective(point.alphas, point.betas)


def _best_alphas(betas: Sequence[Fraction]) -> tuple[Fraction, ...]:
    # objective = 1/2 sum a_k g_k with g_k = b_k + 1 - sum_{j>k} b_j
    gammas = []
    tail = sum(betas, Fraction(0))
    for b in betas:
        tail -= b
        gammas.append(b + 1 - tail)
    top = sorted(range(len(betas)), key=lambda k: (-gammas[k], k))[:2]
    return tuple(HALF if k in top else Fraction(0) for k in range(len(betas)))


def _best_betas(alphas: Sequence[Fraction]) -> tuple[Fraction, ...]:
    # objective = sum a/2 + sum_j b_j (a_j - 1/2 sum_{k<=j} a_k): a fractional knapsack
    coeffs = []
    prefix = Fraction(0)
    for a in alphas:
        prefix += a
        coeffs.append(a - prefix / 2)
    betas = [Fraction(0)] * len(alphas)
    budget = Fraction(1)
    for j in sorted(range(len(alphas)), key=lambda j: (-coeffs[j], j)):
        if coeffs[j] <= 0 or budget <= 0:
            break
        betas[j] = min(beta_cap(j + 1), budget)
        budget -= betas[j]
    return tuple(betas)


def coordinate_ascent(point: QpPoint, max_rounds: int = 100) -> tuple[QpPoint, Fraction]:
    """Alternate the two exact linear maximisations until the value stops rising."""
    value = qp_objective(point)
    for _ in range(max_rounds):
        betas = _best_betas(point.alphas)
        alphas = _best_alphas(betas)
        cand = QpPoint(alphas, betas)
        cand_value = _objective(alphas, betas)
        if cand_value <= value:
            break
        point, value = cand, cand_value
    return point, value


def qp_grid(k_max: int, step: Fraction) -> tuple[QpPoint, Fraction, int]:
    """Exhaustive maximum over feasible points whose coordinates are multiples of ``step``.

    Returns the best point, its value and the number of points visited.
    """
    step = Fraction(step)
    if k_max < 2:
        raise ValueError("the program needs k_max >= 2")
    if step <= 0 or (1 / step).denominator != 1:
        raise ValueError("step must be 1/m for a positive integer m")
    m = int(1 / step)
    half = m // 2

    def compositions(parts, total, cap):
        if parts == 1:
            if total <= cap:
                yield (total,)
            return
        for first in range(min(cap, total) + 1):
            for rest in compositions(parts - 1, total - first, cap):
                yield (first,) + rest

    beta_ranges = [range(int(beta_cap(k) * m) + 1) for k in range(1, k_max + 1)]
    best, best_value, count = None, None, 0
    for a_int in compositions(k_max, m, half):
        alphas = [Fraction(a, m) for a in a_int]
        for b_int in itertools.product(*beta_ranges):
            if sum(b_int) > m:
                continue
            count += 1
            betas = [Fraction(b, m) for b in b_int]
            v = _objective(alphas, betas)
            if best_value is None or v > best_value:
                best, best_value = QpPoint(alphas, betas), v
    return best, best_value, count


def _sample_batch(rng: np.random.Generator, k: int, size: int):
    """Integer numerators of feasible points: alphas over 2**20, betas over 2**24."""
    if k == 2:
        a = np.full((size, 2), _ALPHA_DEN // 2, dtype=np.int64)
    else:
        rows = []
        need = size
        while need > 0:
            cuts = np.sort(rng.integers(0, _ALPHA_DEN + 1, size=(2 * need + 16, k - 1)), axis=1)
            edges = np.concatenate([np.zeros((cuts.shape[0], 1), dtype=np.int64), cuts,
                                    np.full((cuts.shape[0], 1), _ALPHA_DEN, dtype=np.int64)],
                                   axis=1)
            cand = np.diff(edges, axis=1)
            cand = cand[cand.max(axis=1) <= _ALPHA_DEN // 2]
            rows.append(cand[:need])
            need -= len(rows[-1])
        a = np.concatenate(rows)
    caps = np.array([_BETA_DEN // (2 * j + 1) for j in range(1, k + 1)], dtype=np.int64)
    b = (rng.random((size, k)) * (caps + 1)).astype(np.int64)
    b = np.minimum(b, caps)
    total = b.sum(axis=1, keepdims=True)
    over = total[:, 0] > _BETA_DEN
    b[over] = b[over] * _BETA_DEN // total[over]
    return a, b


def _batch_numerators(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``2 * 2**20 * 2**24`` times the objective, exactly."""
    suffix = np.cumsum(b[:, ::-1], axis=1)[:, ::-1]
    return (a * (2 * b + _BETA_DEN - suffix)).sum(axis=1)


@dataclass(frozen=True)
class QpSearchResult:
    point: QpPoint
    value: Fraction
    samples: int
    max_sampled: Optional[Fraction]
    """Largest objective among the random samples (None when there were none)."""
    exceeded: int
    """Samples whose value is above 7/12."""

    def to_dict(self) -> dict:
        return {"value": format_scalar(self.value), "point": self.point.to_dict(),
                "samples": self.samples,
                "max_sampled": None if self.max_sampled is None else format_scalar(self.max_sampled),
                "exceeded": self.exceeded, "stated_optimum": format_scalar(STATED_OPTIMUM)}


def qp_search(k_max: int, samples: int, seed: int = 0,
              warm_start: Optional[QpPoint] = None) -> QpSearchResult:
    """Seeded random search plus coordinate ascent over the truncated program.

    Random points are drawn with integer numerators so that every objective
    value is compared with 7/12 exactly. Ascent starts from the best sample and
    from ``warm_start`` (the stated optimum by default).
    """
    if k_max < 2:
        raise ValueError("the program needs k_max >= 2 (alpha_k <= 1/2 and sum alpha_k = 1)")
    if k_max > _MAX_K:
        raise ValueError(f"k_max is limited to {_MAX_K}")
    if samples < 0:
        raise ValueError("samples must be non-negative")
    rng = np.random.default_rng(seed)
    scale = 2 * _ALPHA_DEN * _BETA_DEN
    limit = STATED_OPTIMUM * scale  # integral: 12 divides 2 * 2**44
    exceeded = 0
    best_num, best_row = None, None
    done = 0
    while done < samples:
        size = min(_BATCH, samples - done)
        a, b = _sample_batch(rng, k_max, size)
        nums = _batch_numerators(a, b)
        exceeded += int((nums > int(limit)).sum())
        j = int(np.argmax(nums))
        if best_num is None or nums[j] > best_num:
            best_num, best_row = int(nums[j]), (a[j].tolist(), b[j].tolist())
        done += size

    starts = [warm_start if warm_start is not None else stated_point(k_max)]
    max_sampled = None
    if best_row is not None:
        max_sampled = Fraction(best_num, scale)
        starts.append(QpPoint([Fraction(x, _ALPHA_DEN) for x in best_row[0]],
                              [Fraction(x, _BETA_DEN) for x in best_row[1]]))
    best_point, best_value = None, None
    for start in starts:
        if start.k_max != k_max:
            raise ValueError("warm start has the wrong length")
        point, value = coordinate_ascent(start)
        if best_value is None or value > best_value:
            best_point, best_value = point, value
    return QpSearchResult(best_point, best_value, samples, max_sampled, exceeded)
