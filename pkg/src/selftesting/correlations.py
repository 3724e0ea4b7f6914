"""Correlation tables: computing, predicting, and verifying them.

A table set holds one d x d matrix per setting pair (x, y), entry [a][b]
being P(a, b | x, y). Twelve pairs exist; eight of them are constrained by
the self-test and are the ones :func:`reference_tables` emits:

* ``x in {0,1} with y in {0,1}`` carry the unprimed blocks,
* ``x in {0,2} with y in {2,3}`` carry the primed blocks.

The remaining four pairs are intentionally unconstrained: they may hold
anything a device produces, and the verifier ignores them.

:func:`compute_tables` and :func:`reference_tables` are two independent
routes to the same numbers for an ideal realization. The first applies the
Born rule to a concrete state and projectors; the second evaluates the
closed-form block entries from the coefficients alone. Keeping both routes
separate is what makes the equivalence test meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CoverageError, HermiticityError
from .ideal import Realization
from .schmidt import SchmidtCoefficients, angles, primed_pairs, unprimed_pairs

__all__ = [
    "CorrelationTables",
    "VerificationReport",
    "compute_tables",
    "reference_tables",
    "verify_tables",
    "no_signaling_check",
    "constrained_pairs",
    "ALICE_SETTINGS",
    "BOB_SETTINGS",
]

ALICE_SETTINGS = 3
BOB_SETTINGS = 4

IMAG_TOL = 1e-10


def constrained_pairs() -> list[tuple[int, int]]:
    """Setting pairs the self-test pins down, in row-major order."""
    unprimed = [(x, y) for x in (0, 1) for y in (0, 1)]
    primed = [(x, y) for x in (0, 2) for y in (2, 3)]
    return unprimed + primed


@dataclass
class CorrelationTables:
    """Collection of per-pair outcome distributions.

    Absent pairs mean "no statement", not "all zeros"; consumers that need
    a pair must go through :meth:`table` so absence raises
    :class:`CoverageError`.
    """

    d: int
    tables: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[tuple[int, int], np.ndarray] = {}
        for key, tab in self.tables.items():
            x, y = int(key[0]), int(key[1])
            if not (0 <= x < ALICE_SETTINGS and 0 <= y < BOB_SETTINGS):
                raise ValueError(f"setting pair {key} out of range")
            arr = np.asarray(tab, dtype=float)
            if arr.shape != (self.d, self.d):
                raise ValueError(
                    f"table {key} has shape {arr.shape}, expected {(self.d, self.d)}"
                )
            clean[(x, y)] = arr
        self.tables = clean

    def has(self, x: int, y: int) -> bool:
        return (x, y) in self.tables

    def table(self, x: int, y: int) -> np.ndarray:
        try:
            return self.tables[(x, y)]
        except KeyError:
            raise CoverageError(f"no table for setting pair ({x}, {y})") from None

    def pairs(self) -> list[tuple[int, int]]:
        return sorted(self.tables)


def compute_tables(r: Realization) -> CorrelationTables:
    """Born-rule tables of a realization, for all 12 setting pairs.

    Entry [a][b] is ``<psi| P^x_a (x) Q^y_b |psi>``. The imaginary residue
    of each entry must stay below 1e-10 (projector stacks are Hermitian,
    so anything larger signals corrupted inputs).
    """
    m = r.state_matrix()
    out: dict[tuple[int, int], np.ndarray] = {}
    for x in range(ALICE_SETTINGS):
        pa = r.alice[x].projectors
        for y in range(BOB_SETTINGS):
            pb = r.bob[y].projectors
            tab = np.einsum("ij,aik,bjl,kl->ab", m.conj(), pa, pb, m, optimize=True)
            worst = float(np.max(np.abs(tab.imag)))
            if worst > IMAG_TOL:
                raise HermiticityError(
                    f"pair ({x},{y}) has imaginary probability residue {worst:.3e}"
                )
            out[(x, y)] = tab.real.copy()
    return CorrelationTables(d=r.n_outcomes, tables=out)


def _block_2x2(x_eff: int, y_eff: int, c_lo: float, c_hi: float, mu: float) -> np.ndarray:
    """Closed-form 2x2 block of the constrained tables.

    ``x_eff`` 0 means the computational-basis setting, 1 the flip setting;
    ``y_eff`` 0 means tilt ``+mu``, 1 tilt ``-mu``.
    """
    ch, sh = np.cos(mu / 2), np.sin(mu / 2)
    if x_eff == 0:
        # Same for both tilts: the tilt sign cancels in squared overlaps.
        return np.array(
            [
                [c_lo**2 * ch**2, c_lo**2 * sh**2],
                [c_hi**2 * sh**2, c_hi**2 * ch**2],
            ]
        )
    s = 1.0 if y_eff == 0 else -1.0
    return 0.5 * np.array(
        [
            [(c_lo * ch + s * c_hi * sh) ** 2, (c_hi * ch - s * c_lo * sh) ** 2],
            [(c_lo * ch - s * c_hi * sh) ** 2, (c_hi * ch + s * c_lo * sh) ** 2],
        ]
    )


def reference_tables(sc: SchmidtCoefficients) -> CorrelationTables:
    """Closed-form tables for the 8 constrained pairs.

    Unprimed pairs are block diagonal over the unprimed outcome pairs with
    the leftover corner (d-1, d-1) carrying its full coefficient weight
    when d is odd; primed pairs mirror this over the primed outcome pairs
    with corner (0, 0).
    """
    d = sc.d
    c = sc.c
    sched = angles(sc)
    out: dict[tuple[int, int], np.ndarray] = {}

    for x in (0, 1):
        for y in (0, 1):
            tab = np.zeros((d, d))
            for m_blk, (lo, hi) in enumerate(unprimed_pairs(d)):
                blk = _block_2x2(x, y, c[lo], c[hi], sched.mu[m_blk])
                tab[np.ix_([lo, hi], [lo, hi])] = blk
            if d % 2:
                tab[d - 1, d - 1] = c[d - 1] ** 2
            out[(x, y)] = tab

    f = {0: 0, 2: 1}
    g = {2: 0, 3: 1}
    for x in (0, 2):
        for y in (2, 3):
            tab = np.zeros((d, d))
            for m_blk, (lo, hi) in enumerate(primed_pairs(d)):
                blk = _block_2x2(f[x], g[y], c[lo], c[hi], sched.mu_primed[m_blk])
                tab[np.ix_([lo, hi], [lo, hi])] = blk
            if d % 2:
                tab[0, 0] = c[0] ** 2
            out[(x, y)] = tab

    return CorrelationTables(d=d, tables=out)


def no_signaling_check(t: CorrelationTables) -> float:
    """Largest marginal mismatch across the present setting pairs.

    For each first-party setting x, row sums must agree across every y it
    appears with; mirrored for the second party over column sums. Pairs not
    present contribute nothing.
    """
    worst = 0.0
    for x in range(ALICE_SETTINGS):
        rows = [t.tables[(x, y)].sum(axis=1) for y in range(BOB_SETTINGS) if t.has(x, y)]
        for i in range(1, len(rows)):
            worst = max(worst, float(np.max(np.abs(rows[i] - rows[0]))))
    for y in range(BOB_SETTINGS):
        cols = [t.tables[(x, y)].sum(axis=0) for x in range(ALICE_SETTINGS) if t.has(x, y)]
        for i in range(1, len(cols)):
            worst = max(worst, float(np.max(np.abs(cols[i] - cols[0]))))
    return worst


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of matching a table set against its reference.

    ``block_residual`` is the worst entrywise deviation on positions the
    reference constrains to block values; ``offblock_mass`` is the worst
    per-pair total probability sitting on positions the reference pins to
    zero; the other residuals cover no-signaling and per-table sum-to-one.
    """

    tol: float
    block_residual: float
    offblock_mass: float
    nosignal_residual: float
    sum_residual: float
    passed: bool


def verify_tables(
    t: CorrelationTables, sc: SchmidtCoefficients, tol: float = 1e-8
) -> VerificationReport:
    """Check a table set against the closed-form reference.

    Every constrained pair must be present in `t` (else
    :class:`CoverageError`); pairs beyond the constrained eight are
    ignored for the entrywise match but still participate in the
    no-signaling and sum-to-one checks.
    """
    ref = reference_tables(sc)
    d = sc.d
    block_res = 0.0
    off_mass = 0.0
    for x, y in constrained_pairs():
        got = t.table(x, y)
        want = ref.tables[(x, y)]
        mask = _constrained_mask(d, primed=(y >= 2))
        block_res = max(block_res, float(np.max(np.abs((got - want)[mask]))))
        off_mass = max(off_mass, float(np.sum(np.abs(got[~mask]))))
    ns = no_signaling_check(t)
    sum_res = max(
        float(abs(t.tables[pair].sum() - 1.0)) for pair in t.pairs()
    )
    passed = block_res <= tol and off_mass <= tol and ns <= tol and sum_res <= tol
    return VerificationReport(
        tol=tol,
        block_residual=block_res,
        offblock_mass=off_mass,
        nosignal_residual=ns,
        sum_residual=sum_res,
        passed=passed,
    )


def _constrained_mask(d: int, primed: bool) -> np.ndarray:
    """Boolean mask of positions carrying block (or corner) weight."""
    mask = np.zeros((d, d), dtype=bool)
    pairs = primed_pairs(d) if primed else unprimed_pairs(d)
    for lo, hi in pairs:
        mask[np.ix_([lo, hi], [lo, hi])] = True
    if d % 2:
        corner = 0 if primed else d - 1
        mask[corner, corner] = True
    return mask
