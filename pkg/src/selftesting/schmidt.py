"""Schmidt coefficients, block pairing, and the derived angle schedule.

A target state is described by its Schmidt coefficients ``c_0 .. c_{d-1}``,
all strictly inside (0, 1) with squares summing to one. Outcomes are grouped
into overlapping families of 2x2 blocks:

* unprimed blocks pair outcomes ``(2m, 2m+1)`` for ``m = 0 .. floor(d/2)-1``;
  when d is odd the last outcome ``d-1`` is left over as a corner.
* primed blocks pair outcomes ``(2m+1, (2m+2) mod d)`` for the same range of
  m; for even d the last primed block wraps around to pair ``(d-1, 0)``,
  while for odd d the corner outcome 0 is left over.

Every outcome is covered by the union of the two families, which is what
lets the flip chain walk the full ladder of outcomes.

Each block gets three derived angles. With ``theta = arctan(c_hi / c_lo)``
for the block's ordered pair (lo, hi):

* ``theta`` fixes the block's internal weight ratio,
* ``mu = arctan(sin 2 theta)`` sets the measurement tilt used on the
  second party,
* ``alpha = 2 cos(2 theta) / sqrt(1 + sin^2(2 theta))`` is the tilt of the
  block's tilted-CHSH functional. It carries the sign of ``cos 2 theta``:
  blocks whose second coefficient exceeds the first get a negative tilt,
  which is the relabeled mirror of the positive-tilt functional and keeps
  the maximal-score identity ``beta = sqrt(8 + 2 alpha^2) * mass`` exact
  for every block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AngleRangeError,
    CoefficientRangeError,
    DimensionError,
    NormalizationError,
)

__all__ = [
    "SchmidtCoefficients",
    "AngleSchedule",
    "angles",
    "target_state",
    "unprimed_pairs",
    "primed_pairs",
]

#: Allowed deviation of sum(c_i^2) from 1; no silent renormalization.
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class SchmidtCoefficients:
    """Validated Schmidt coefficient vector.

    Coefficients are kept exactly as given (no sorting, no renormalizing).
    Construction fails if d < 2, any coefficient leaves the open interval
    (0, 1), or the squares do not sum to 1 within ``NORMALIZATION_TOL``.
    """

    c: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.c, dtype=float).reshape(-1)
        object.__setattr__(self, "c", c)
        if c.size < 2:
            raise DimensionError(f"need at least 2 coefficients, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise CoefficientRangeError("coefficients must be finite")
        if np.any(c <= 0.0) or np.any(c >= 1.0):
            raise CoefficientRangeError(
                "every coefficient must lie strictly inside (0, 1); "
                "a zero coefficient means a lower Schmidt rank state"
            )
        total = float(np.sum(c * c))
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(
                f"sum of squared coefficients is {total!r}, "
                f"off from 1 beyond {NORMALIZATION_TOL:.0e}"
            )

    @property
    def d(self) -> int:
        return int(self.c.size)


def unprimed_pairs(d: int) -> list[tuple[int, int]]:
    """Outcome pairs (2m, 2m+1) of the unprimed blocks."""
    if d < 2:
        raise DimensionError(f"d must be at least 2, got {d}")
    return [(2 * m, 2 * m + 1) for m in range(d // 2)]


def primed_pairs(d: int) -> list[tuple[int, int]]:
    """Outcome pairs (2m+1, (2m+2) mod d) of the primed blocks.

    For even d the last pair wraps around to (d-1, 0); for odd d there is
    no wrap and outcome 0 is the leftover corner.
    """
    if d < 2:
        raise DimensionError(f"d must be at least 2, got {d}")
    return [(2 * m + 1, (2 * m + 2) % d) for m in range(d // 2)]


@dataclass(frozen=True)
class AngleSchedule:
    """Per-block angles for both block families.

    Arrays are indexed by block number m; unprimed and primed families both
    have ``floor(d/2)`` blocks. theta and mu sit in (0, pi/2), alpha in
    (-2, 2) with the sign of cos(2 theta).
    """

    d: int
    theta: np.ndarray
    mu: np.ndarray
    alpha: np.ndarray
    theta_primed: np.ndarray
    mu_primed: np.ndarray
    alpha_primed: np.ndarray

    @property
    def n_blocks(self) -> int:
        return self.d // 2


def _block_angles(lo: float, hi: float) -> tuple[float, float, float]:
    theta = float(np.arctan2(hi, lo))
    sin2t = float(np.sin(2 * theta))
    mu = float(np.arctan(sin2t))
    alpha = float(2 * np.cos(2 * theta) / np.sqrt(1 + sin2t * sin2t))
    if not (0.0 < theta < np.pi / 2 and 0.0 < mu < np.pi / 2):
        raise AngleRangeError(f"block angles left (0, pi/2): theta={theta}, mu={mu}")
    return theta, mu, alpha


def angles(sc: SchmidtCoefficients) -> AngleSchedule:
    """Angle schedule derived from the coefficient vector."""
    c = sc.c
    unp = [_block_angles(c[lo], c[hi]) for lo, hi in unprimed_pairs(sc.d)]
    pri = [_block_angles(c[lo], c[hi]) for lo, hi in primed_pairs(sc.d)]
    th, mu, al = (np.array(v, dtype=float) for v in zip(*unp))
    thp, mup, alp = (np.array(v, dtype=float) for v in zip(*pri))
    return AngleSchedule(
        d=sc.d, theta=th, mu=mu, alpha=al,
        theta_primed=thp, mu_primed=mup, alpha_primed=alp,
    )


def target_state(sc: SchmidtCoefficients) -> np.ndarray:
    """The diagonal two-party state sum_i c_i |ii> as a flat d*d vector.

    No renormalization is applied; the norm inherits whatever residue the
    coefficient normalization check admitted.
    """
    d = sc.d
    state = np.zeros(d * d, dtype=complex)
    state[np.arange(d) * d + np.arange(d)] = sc.c
    return state
