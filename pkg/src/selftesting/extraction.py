"""Certification pipeline: from block operators to the extraction isometry.

Given any realization whose tables match the reference, this module builds
the local operators that pull the target state out of the unknown one. The
stages mirror the proof structure:

1. Block observables. For each block and relevant setting pair, the
   difference of the two outcome projectors is a two-outcome observable
   supported on the block; the sum is the block identity.
2. Unitarized block frame. The first party's observables extend to
   reflections by acting as +1 off the block. The second party's tilted
   observables combine into ``(B0 + B1) / (2 cos mu)`` and
   ``(B0 - B1) / (2 sin mu)``, whose sign-unitarizations play the roles of
   Z and X on that side. On the normalized block state these satisfy the
   two anchor identities: Z agreement across parties, and the flip
   identity with slope tan(theta).
3. Outcome projector ladder. The first party uses its computational
   projectors directly. The second party's projector for outcome k is cut
   from the block frame: with P the orthogonal projector onto the combined
   range of the block identities and Zt the compressed Z, the pair is
   ``(P + Zt)/2`` and ``(P - Zt)/2``. When d is odd the top outcome is not
   covered by any unprimed block and is built from the last primed block
   instead.
4. Flip chains. Walking the outcome ladder alternates unprimed and primed
   flips: ``X^(2m+1) = X^(2m) X_m`` and ``X^(2m+2) = X^(2m+1) Y_m``, with
   ``X^(0) = identity``. The chain criterion states that the chains steer
   every outcome's weight onto outcome 0 with ratio c_k / c_0.
5. The four-stage isometry (ancilla Fourier, controlled phase powers,
   inverse Fourier, controlled flip chains) applied on both sides then
   deposits the target state on the ancilla pair, with the leftover state
   factored out.

Orthogonalizing the second party's outcome projectors globally (rather
than on the state) is out of scope; the on-state orthogonality sum is
reported instead and vanishes for exact inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateBlockError, IsometryConsistencyError
from .ideal import Realization
from .qlinalg import dagger, projector_onto_range, pure_fidelity, sign_unitarize
from .schmidt import (
    AngleSchedule,
    SchmidtCoefficients,
    angles,
    primed_pairs,
    target_state,
    unprimed_pairs,
)

__all__ = [
    "BlockOperators",
    "BlockIdentityReport",
    "BlockFrame",
    "FrameReport",
    "CriterionOperators",
    "CriterionReport",
    "IsometryReport",
    "MeasurementResidual",
    "ExtractionReport",
    "build_block_operators",
    "block_identity_checks",
    "build_block_frame",
    "frame_identity_checks",
    "build_criterion_ops",
    "check_criterion",
    "apply_isometry",
    "measurement_equivalence",
    "extraction_report",
]

#: Claimed block mass below which block states cannot be normalized.
MASS_FLOOR = 1e-12

#: Allowed deviation of the isometry output norm from the input norm.
NORM_BUDGET = 1e-6


def _alice(op: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """Apply a first-party operator to a state in matrix form."""
    return op @ mat

def _bob(op: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """Apply a second-party operator to a state in matrix form."""
    return mat @ op.T


@dataclass(frozen=True)
class BlockOperators:
    """Per-block two-outcome observables and block identities.

    ``a0/a1`` are the first party's observables for the block's two
    relevant settings (0 and 1 unprimed, 0 and 2 primed); ``b0/b1`` the
    second party's (0 and 1 unprimed, 2 and 3 primed). ``ia0`` and friends
    are the matching block identities (sums instead of differences).
    """

    m: int
    primed: bool
    pair: tuple[int, int]
    a0: np.ndarray
    a1: np.ndarray
    b0: np.ndarray
    b1: np.ndarray
    ia0: np.ndarray
    ia1: np.ndarray
    ib0: np.ndarray
    ib1: np.ndarray


def build_block_operators(
    r: Realization, m: int, *, primed: bool = False
) -> BlockOperators:
    """Block observables of realization `r` for block m of either family."""
    d = r.n_outcomes
    if primed:
        lo, hi = primed_pairs(d)[m]
        a_settings, b_settings = (0, 2), (2, 3)
    else:
        lo, hi = unprimed_pairs(d)[m]
        a_settings, b_settings = (0, 1), (0, 1)
    pa = [r.alice[x].projectors for x in a_settings]
    pb = [r.bob[y].projectors for y in b_settings]
    return BlockOperators(
        m=m,
        primed=primed,
        pair=(lo, hi),
        a0=pa[0][lo] - pa[0][hi],
        a1=pa[1][lo] - pa[1][hi],
        b0=pb[0][lo] - pb[0][hi],
        b1=pb[1][lo] - pb[1][hi],
        ia0=pa[0][lo] + pa[0][hi],
        ia1=pa[1][lo] + pa[1][hi],
        ib0=pb[0][lo] + pb[0][hi],
        ib1=pb[1][lo] + pb[1][hi],
    )


@dataclass(frozen=True)
class BlockIdentityReport:
    """On-state residuals tying the four block identities together.

    ``cross[i][j]`` is the norm of ``(1_m^{A_i} - 1_m^{B_j}) |psi>``;
    ``mass_residual`` is how far the measured block weight sits from the
    claimed one.
    """

    m: int
    primed: bool
    cross: np.ndarray
    mass_residual: float


def block_identity_checks(
    b: BlockOperators, r: Realization, sc: SchmidtCoefficients
) -> BlockIdentityReport:
    """Residuals of the block-identity equalities on the state."""
    mat = r.state_matrix()
    ia = (b.ia0, b.ia1)
    ib = (b.ib0, b.ib1)
    cross = np.zeros((2, 2))
    for i in range(2):
        for j in range(2):
            cross[i, j] = np.linalg.norm(_alice(ia[i], mat) - _bob(ib[j], mat))
    lo, hi = b.pair
    mass = float(sc.c[lo] ** 2 + sc.c[hi] ** 2)
    measured = float(np.linalg.norm(_alice(b.ia0, mat)))
    return BlockIdentityReport(
        m=b.m,
        primed=b.primed,
        cross=cross,
        mass_residual=abs(measured - np.sqrt(mass)),
    )


@dataclass(frozen=True)
class BlockFrame:
    """Unitarized Z/X frame of one block, both parties."""

    m: int
    primed: bool
    za: np.ndarray
    xa: np.ndarray
    zb: np.ndarray
    xb: np.ndarray


def _reflect(identity_block: np.ndarray, observable: np.ndarray) -> np.ndarray:
    """Extend a block observable to a reflection: +1 off the block."""
    dim = identity_block.shape[0]
    return np.eye(dim) - identity_block + observable


def build_block_frame(
    b: BlockOperators, schedule: AngleSchedule, *, zero_tol: float = 1e-10
) -> BlockFrame:
    """Unitarized block frame from the block observables.

    The first party's observables are extended to reflections directly.
    The second party's combinations pick up a zero eigenspace only in
    degenerate realizations; sign-unitarization sends it to +1.
    """
    mu = float(schedule.mu_primed[b.m] if b.primed else schedule.mu[b.m])
    b0u = _reflect(b.ib0, b.b0)
    b1u = _reflect(b.ib1, b.b1)
    z_star = (b0u + b1u) / (2.0 * np.cos(mu))
    x_star = (b0u - b1u) / (2.0 * np.sin(mu))
    return BlockFrame(
        m=b.m,
        primed=b.primed,
        za=_reflect(b.ia0, b.a0),
        xa=_reflect(b.ia1, b.a1),
        zb=sign_unitarize(z_star, zero_tol),
        xb=sign_unitarize(x_star, zero_tol),
    )


@dataclass(frozen=True)
class FrameReport:
    """Residuals of the two anchor identities on the normalized block state."""

    m: int
    primed: bool
    z_residual: float
    flip_residual: float


def frame_identity_checks(
    ops: BlockFrame,
    b: BlockOperators,
    r: Realization,
    sc: SchmidtCoefficients,
) -> FrameReport:
    """Check Z agreement and the tan(theta) flip identity for one block.

    Both are evaluated on the block state ``1_m^{A_0}|psi>`` normalized by
    the claimed mass, so a realization lying about its coefficients shows
    up here rather than being silently renormalized away.
    """
    lo, hi = b.pair
    mass = float(sc.c[lo] ** 2 + sc.c[hi] ** 2)
    if mass <= MASS_FLOOR:
        raise DegenerateBlockError(
            f"block ({b.m}, primed={b.primed}) claimed mass {mass:.3e} below floor"
        )
    sched = angles(sc)
    theta = float(sched.theta_primed[b.m] if b.primed else sched.theta[b.m])
    mat = _alice(b.ia0, r.state_matrix()) / np.sqrt(mass)
    dim_a = r.dim_a
    z_res = np.linalg.norm(_alice(ops.za, mat) - _bob(ops.zb, mat))
    lhs = _alice(ops.xa @ (np.eye(dim_a) - ops.za), mat)
    rhs = np.tan(theta) * _bob(ops.xb, _alice(np.eye(dim_a) + ops.za, mat))
    return FrameReport(
        m=b.m,
        primed=b.primed,
        z_residual=float(z_res),
        flip_residual=float(np.linalg.norm(lhs - rhs)),
    )


@dataclass
class CriterionOperators:
    """Everything the chain criterion and the isometry consume.

    ``p_a[k]`` and ``p_b[k]`` are the outcome-k projectors on the two
    sides; ``x_a[k]`` / ``x_b[k]`` the flip chains; ``z_a`` / ``z_b`` the
    phase operators ``sum_k omega^k P^(k)`` (the second party padded with
    identity off the covered range); `block_ops` and `frame_ops` keep the
    per-block structures for reuse, keyed by (primed, m).
    """

    d: int
    dim_a: int
    dim_b: int
    omega: complex
    p_a: list[np.ndarray]
    p_b: list[np.ndarray]
    x_a: list[np.ndarray]
    x_b: list[np.ndarray]
    z_a: np.ndarray
    z_b: np.ndarray
    block_ops: dict[tuple[bool, int], BlockOperators] = field(repr=False)
    frame_ops: dict[tuple[bool, int], BlockFrame] = field(repr=False)


def build_criterion_ops(
    r: Realization,
    sc: SchmidtCoefficients,
    *,
    rank_tol: float = 1e-8,
    zero_tol: float = 1e-10,
) -> CriterionOperators:
    """Assemble projector ladders, flip chains, and phase operators.

    The angle schedule comes from the claimed coefficients `sc`, never
    from the realization's own statistics: an adversarial device gets
    measured against the state it claims to produce.
    """
    d = sc.d
    sched = angles(sc)
    n_blocks = d // 2

    block_ops: dict[tuple[bool, int], BlockOperators] = {}
    frame_ops: dict[tuple[bool, int], BlockFrame] = {}
    for primed in (False, True):
        for m in range(n_blocks):
            b = build_block_operators(r, m, primed=primed)
            block_ops[(primed, m)] = b
            frame_ops[(primed, m)] = build_block_frame(b, sched, zero_tol=zero_tol)

    p_a = [r.alice[0].projectors[k].copy() for k in range(d)]

    # Second party's ladder: cut each unprimed block's frame in two.
    p_b: list[np.ndarray] = [np.zeros((r.dim_b, r.dim_b), dtype=complex) for _ in range(d)]
    for m in range(n_blocks):
        b = block_ops[(False, m)]
        frame = frame_ops[(False, m)]
        support = projector_onto_range(b.ib0 + b.ib1, rank_tol)
        z_cut = support @ frame.zb @ support
        lo, hi = b.pair
        p_b[lo] = (support + z_cut) / 2.0
        p_b[hi] = (support - z_cut) / 2.0
    if d % 2:
        # Top outcome comes from the last primed block's frame.
        b = block_ops[(True, n_blocks - 1)]
        frame = frame_ops[(True, n_blocks - 1)]
        support = projector_onto_range(b.ib0 + b.ib1, rank_tol)
        z_cut = support @ frame.zb @ support
        p_b[d - 1] = (support - z_cut) / 2.0

    # Flip chains, alternating unprimed and primed flips up the ladder.
    x_a: list[np.ndarray] = [np.eye(r.dim_a, dtype=complex)]
    x_b: list[np.ndarray] = [np.eye(r.dim_b, dtype=complex)]
    for k in range(1, d):
        m, parity = divmod(k - 1, 2)
        frame = frame_ops[(bool(parity), m)]
        x_a.append(x_a[k - 1] @ frame.xa)
        x_b.append(x_b[k - 1] @ frame.xb)

    omega = complex(np.exp(2j * np.pi / d))
    phases = omega ** np.arange(d)
    z_a = sum(phases[k] * p_a[k] for k in range(d))
    covered = sum(p_b)
    z_b = sum(phases[k] * p_b[k] for k in range(d)) + np.eye(r.dim_b) - covered

    return CriterionOperators(
        d=d,
        dim_a=r.dim_a,
        dim_b=r.dim_b,
        omega=omega,
        p_a=p_a,
        p_b=p_b,
        x_a=x_a,
        x_b=x_b,
        z_a=z_a,
        z_b=z_b,
        block_ops=block_ops,
        frame_ops=frame_ops,
    )


@dataclass(frozen=True)
class CriterionReport:
    """Residuals of the two criterion conditions, per outcome.

    ``projector_match[k]`` is the projector agreement ``||(P_A^(k) - P_B^(k))|psi>||``.
    ``chain_map[k]`` is the chain condition in its two-sided form
    ``||X_A^(k) X_B^(k) P_B^(k)|psi> - (c_k/c_0) P_A^(0)|psi>||`` and
    ``chain_map_adjoint[k]`` the equivalent single-sided form with the second
    party's chain moved to the other side as an adjoint; both are reported
    because they differ in how they consume the projector agreement.
    ``pb_orthogonality_sum`` is ``sum_{i != j} ||P_B^(i) P_B^(j)|psi>||^2``,
    the on-state surrogate for globally orthogonalized projectors.
    """

    projector_match: np.ndarray
    chain_map: np.ndarray
    chain_map_adjoint: np.ndarray
    pb_orthogonality_sum: float


def check_criterion(
    ops: CriterionOperators, r: Realization, sc: SchmidtCoefficients
) -> CriterionReport:
    """Evaluate the chain criterion residuals on the realization."""
    mat = r.state_matrix()
    c = sc.c
    d = ops.d
    projector_match = np.zeros(d)
    chain_map = np.zeros(d)
    chain_adj = np.zeros(d)
    extra = _alice(ops.p_a[0], mat)
    for k in range(d):
        ratio = c[k] / c[0]
        projector_match[k] = np.linalg.norm(_alice(ops.p_a[k], mat) - _bob(ops.p_b[k], mat))
        lhs = _alice(ops.x_a[k], _bob(ops.x_b[k] @ ops.p_b[k], mat))
        chain_map[k] = np.linalg.norm(lhs - ratio * extra)
        lhs_adj = _alice(ops.x_a[k] @ ops.p_a[k], mat)
        chain_adj[k] = np.linalg.norm(lhs_adj - ratio * _bob(dagger(ops.x_b[k]), extra))
    ortho = 0.0
    for i in range(d):
        for j in range(d):
            if i != j:
                ortho += np.linalg.norm(_bob(ops.p_b[i] @ ops.p_b[j], mat)) ** 2
    return CriterionReport(
        projector_match=projector_match,
        chain_map=chain_map,
        chain_map_adjoint=chain_adj,
        pb_orthogonality_sum=float(ortho),
    )


def _fourier(d: int, omega: complex) -> np.ndarray:
    grid = np.arange(d)
    return omega ** np.outer(grid, grid) / np.sqrt(d)


def _apply_isometry_matrix(ops: CriterionOperators, mat: np.ndarray) -> np.ndarray:
    """Run the four-stage circuit on an arbitrary two-party vector.

    Returns the amplitude tensor over (first party, second party, first
    ancilla, second ancilla). Stages are applied slice by slice; the full
    isometry matrix is never materialized.
    """
    psi = _attach_ancillas(ops, mat)
    f = _fourier(ops.d, ops.omega)
    psi = _ancilla_transform(psi, f)
    psi = _controlled_phase(psi, ops.z_a, ops.z_b, ops.d)
    psi = _ancilla_transform(psi, dagger(f))
    psi = _controlled_flip(psi, ops.x_a, ops.x_b)
    return psi


def _attach_ancillas(ops: CriterionOperators, mat: np.ndarray) -> np.ndarray:
    psi = np.zeros((mat.shape[0], mat.shape[1], ops.d, ops.d), dtype=complex)
    psi[:, :, 0, 0] = mat
    return psi


def _ancilla_transform(psi: np.ndarray, f: np.ndarray) -> np.ndarray:
    psi = np.einsum("kj,abjl->abkl", f, psi, optimize=True)
    return np.einsum("lj,abkj->abkl", f, psi, optimize=True)


def _controlled_phase(
    psi: np.ndarray, z_a: np.ndarray, z_b: np.ndarray, d: int
) -> np.ndarray:
    out = psi.copy()
    pow_a = np.eye(z_a.shape[0], dtype=complex)
    pow_b = np.eye(z_b.shape[0], dtype=complex)
    for k in range(1, d):
        pow_a = pow_a @ z_a
        pow_b = pow_b @ z_b
        out[:, :, k, :] = np.einsum("ia,abl->ibl", pow_a, out[:, :, k, :], optimize=True)
        out[:, :, :, k] = np.einsum("jb,abk->ajk", pow_b, out[:, :, :, k], optimize=True)
    return out


def _controlled_flip(
    psi: np.ndarray, x_a: list[np.ndarray], x_b: list[np.ndarray]
) -> np.ndarray:
    out = psi.copy()
    for k in range(1, len(x_a)):
        out[:, :, k, :] = np.einsum("ia,abl->ibl", x_a[k], out[:, :, k, :], optimize=True)
        out[:, :, :, k] = np.einsum("jb,abk->ajk", x_b[k], out[:, :, :, k], optimize=True)
    return out


def _pre_flip_state(ops: CriterionOperators, r: Realization) -> np.ndarray:
    """State after the first three stages, before the flip chains."""
    psi = _attach_ancillas(ops, r.state_matrix())
    f = _fourier(ops.d, ops.omega)
    psi = _ancilla_transform(psi, f)
    psi = _controlled_phase(psi, ops.z_a, ops.z_b, ops.d)
    return _ancilla_transform(psi, dagger(f))


@dataclass(frozen=True)
class IsometryReport:
    """Quality of the extraction output.

    ``fidelity`` is the ancilla-pair fidelity with the target state after
    tracing out the original systems; ``product_overlap`` additionally
    requires the original systems to factor into the predicted junk state,
    so it lower-bounds ``fidelity``.
    """

    output_norm: float
    fidelity: float
    product_overlap: float
    rho_ancilla: np.ndarray


def apply_isometry(
    ops: CriterionOperators, r: Realization, sc: SchmidtCoefficients
) -> tuple[np.ndarray, IsometryReport]:
    """Extract the target state onto the ancilla pair.

    Returns the output amplitudes as a flat vector over (first party,
    second party, first ancilla, second ancilla), row-major, together with
    the quality report. A norm drift beyond ``NORM_BUDGET`` means the
    operators fed in were far from unitary and the run is rejected.
    """
    psi = _apply_isometry_matrix(ops, r.state_matrix())
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > NORM_BUDGET:
        raise IsometryConsistencyError(
            f"isometry output norm {norm!r} drifted beyond {NORM_BUDGET:.0e}"
        )
    d = ops.d
    flat = psi.reshape(ops.dim_a * ops.dim_b, d * d)
    rho = np.einsum("ax,ay->xy", flat, flat.conj(), optimize=True)
    target = target_state(sc)
    fid = pure_fidelity(rho, target / np.linalg.norm(target), trace_tol=2 * NORM_BUDGET)
    junk = _alice(ops.p_a[0], r.state_matrix()) / sc.c[0]
    amp = np.einsum(
        "ab,kl,abkl->", junk.conj(), target.reshape(d, d).conj(), psi, optimize=True
    )
    return psi.reshape(-1), IsometryReport(
        output_norm=norm,
        fidelity=float(fid),
        product_overlap=float(np.abs(amp) ** 2),
        rho_ancilla=rho,
    )


@dataclass(frozen=True)
class MeasurementResidual:
    """Mismatch of one transported block observable against its ideal."""

    side: str
    setting: int
    m: int
    primed: bool
    residual: float


def _two_level(d: int, lo: int, hi: int, zz: float, xx: float) -> np.ndarray:
    """The operator zz * Z + xx * X on the (lo, hi) two-level subspace."""
    op = np.zeros((d, d), dtype=complex)
    op[lo, lo] = zz
    op[hi, hi] = -zz
    op[lo, hi] = xx
    op[hi, lo] = xx
    return op


def measurement_equivalence(
    ops: CriterionOperators, r: Realization, sc: SchmidtCoefficients
) -> list[MeasurementResidual]:
    """Transport each block observable through the isometry.

    For every block and relevant setting, compares the isometry image of
    ``O |psi>`` with the ideal block observable acting on the target state
    next to the factored junk state. Small residuals certify the
    measurements themselves, not just the state.
    """
    sched = angles(sc)
    d = ops.d
    mat = r.state_matrix()
    junk = _alice(ops.p_a[0], mat) / sc.c[0]
    tgt = target_state(sc).reshape(d, d)
    out: list[MeasurementResidual] = []
    for primed in (False, True):
        a_settings = (0, 2) if primed else (0, 1)
        b_settings = (2, 3) if primed else (0, 1)
        mus = sched.mu_primed if primed else sched.mu
        for m in range(d // 2):
            b = ops.block_ops[(primed, m)]
            lo, hi = b.pair
            mu = float(mus[m])
            ideals_a = (
                _two_level(d, lo, hi, 1.0, 0.0),
                _two_level(d, lo, hi, 0.0, 1.0),
            )
            ideals_b = (
                _two_level(d, lo, hi, np.cos(mu), np.sin(mu)),
                _two_level(d, lo, hi, np.cos(mu), -np.sin(mu)),
            )
            for setting, obs, ideal in zip(a_settings, (b.a0, b.a1), ideals_a):
                image = _apply_isometry_matrix(ops, _alice(obs, mat))
                want = junk[:, :, None, None] * (ideal @ tgt)[None, None, :, :]
                out.append(
                    MeasurementResidual(
                        side="A",
                        setting=setting,
                        m=m,
                        primed=primed,
                        residual=float(np.linalg.norm(image - want)),
                    )
                )
            for setting, obs, ideal in zip(b_settings, (b.b0, b.b1), ideals_b):
                image = _apply_isometry_matrix(ops, _bob(obs, mat))
                want = junk[:, :, None, None] * (tgt @ ideal.T)[None, None, :, :]
                out.append(
                    MeasurementResidual(
                        side="B",
                        setting=setting,
                        m=m,
                        primed=primed,
                        residual=float(np.linalg.norm(image - want)),
                    )
                )
    return out


@dataclass(frozen=True)
class ExtractionReport:
    """Full certification record for one realization."""

    projector_residuals: np.ndarray
    chain_residuals: np.ndarray
    chain_adjoint_residuals: np.ndarray
    pb_orthogonality_sum: float
    output_norm: float
    fidelity: float
    product_overlap: float
    measurement_residuals: list[MeasurementResidual]

    def max_criterion_residual(self) -> float:
        return float(
            max(
                np.max(self.projector_residuals),
                np.max(self.chain_residuals),
                np.max(self.chain_adjoint_residuals),
            )
        )

    def max_measurement_residual(self) -> float:
        return max(v.residual for v in self.measurement_residuals)

    def passes(self, *, fidelity_min: float = 1 - 1e-6, residual_tol: float = 1e-6) -> bool:
        return (
            self.fidelity >= fidelity_min
            and self.max_criterion_residual() <= residual_tol
            and self.max_measurement_residual() <= residual_tol
        )


def extraction_report(
    r: Realization,
    sc: SchmidtCoefficients,
    *,
    rank_tol: float = 1e-8,
    zero_tol: float = 1e-10,
) -> ExtractionReport:
    """Run the whole pipeline on a realization and collect every residual."""
    ops = build_criterion_ops(r, sc, rank_tol=rank_tol, zero_tol=zero_tol)
    crit = check_criterion(ops, r, sc)
    _, iso = apply_isometry(ops, r, sc)
    meas = measurement_equivalence(ops, r, sc)
    return ExtractionReport(
        projector_residuals=crit.projector_match,
        chain_residuals=crit.chain_map,
        chain_adjoint_residuals=crit.chain_map_adjoint,
        pb_orthogonality_sum=crit.pb_orthogonality_sum,
        output_norm=iso.output_norm,
        fidelity=iso.fidelity,
        product_overlap=iso.product_overlap,
        measurement_residuals=meas,
    )
