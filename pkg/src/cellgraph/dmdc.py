"""Linear operator identification from snapshot data under known inputs.

Fits x_{k+1} ~ A x_k + B u_k by a truncated-SVD least squares: the stacked
matrix [X; U] is inverted through its rank-p SVD, the output space is
compressed to the rank-r basis of X', and the reduced operator's
eigendecomposition yields the complex mode matrix whose columns describe
how each embedded coordinate participates in each dynamic mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .embedding import SnapshotSet
from .errors import InfeasibleRankError, NumericalError, RankDeficiencyError

EIG_RESIDUAL_TOL = 1e-10
RANK_FLOOR = 1e-14
MASK_REL_TOL = 1e-12

RankSpec = int | float


@dataclass(frozen=True)
class DmdcConfig:
    """Truncation ranks for the two SVDs.

    With ``energy_mode`` (the default) the rank values are cumulative energy
    fractions in (0, 1]: the smallest rank capturing that share of the squared
    singular values is retained. Otherwise they are explicit counts, with
    1 <= rank_state <= rank_joint required.
    """

    rank_state: RankSpec = 0.9999
    rank_joint: RankSpec = 0.9999
    energy_mode: bool = True

    def __post_init__(self) -> None:
        for name in ("rank_state", "rank_joint"):
            value = getattr(self, name)
            if self.energy_mode:
                if not 0.0 < value <= 1.0:
                    raise ValueError(f"{name} energy fraction must lie in (0, 1]")
            else:
                if int(value) != value or value < 1:
                    raise ValueError(f"{name} count must be a positive integer")
        if not self.energy_mode and self.rank_state > self.rank_joint:
            raise ValueError("rank_state must not exceed rank_joint")


@dataclass(frozen=True)
class CenterOffsets:
    """Row offsets removed before fitting; predictions add them back."""

    state: np.ndarray
    input: np.ndarray


@dataclass(frozen=True)
class DmdcModel:
    """Fitted reduced-order model with its spectral decomposition.

    ``a_tilde`` (r x r) and ``b_tilde`` (r x q) act in the coordinates of the
    orthonormal output basis ``u_hat`` (d x r). ``eigenvalues``/``eigenvectors``
    solve a_tilde W = W diag(L), ordered by descending modulus with ties
    broken by descending imaginary part, each eigenvector unit-norm with its
    first significant component rotated real-positive. ``phi`` (d x r) holds
    the modes reconstructed through the data, one column per eigenvalue.
    """

    a_tilde: np.ndarray
    b_tilde: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    phi: np.ndarray
    sing_vals_joint: np.ndarray
    sing_vals_state: np.ndarray
    u_hat: np.ndarray
    offsets: CenterOffsets
    eig_residual: float = field(default=0.0, compare=False)

    @property
    def d(self) -> int:
        return self.u_hat.shape[0]

    @property
    def r(self) -> int:
        return self.a_tilde.shape[0]

    @property
    def q(self) -> int:
        return self.b_tilde.shape[1]


def _resolve_rank(spec: RankSpec, sigmas: np.ndarray, energy_mode: bool, what: str) -> int:
    if energy_mode:
        cum = np.cumsum(sigmas**2)
        # cum[-1] rather than a separate sum so a fraction of 1.0 stays reachable
        return int(np.searchsorted(cum, spec * cum[-1]) + 1)
    rank = int(spec)
    if rank > len(sigmas):
        raise InfeasibleRankError(
            f"{what} rank {rank} infeasible: only {len(sigmas)} singular values available"
        )
    return rank


def _check_retained(sigmas: np.ndarray, rank: int, what: str) -> None:
    if sigmas[rank - 1] < RANK_FLOOR * sigmas[0]:
        raise RankDeficiencyError(
            f"{what} singular value {rank} is below {RANK_FLOOR:g} of the largest; "
            f"use a smaller rank"
        )


def _gauge_eigenvectors(w: np.ndarray) -> np.ndarray:
    """Unit 2-norm columns with the first significant component real-positive."""
    w = w / np.linalg.norm(w, axis=0, keepdims=True)
    for j in range(w.shape[1]):
        col = w[:, j]
        idx = np.flatnonzero(np.abs(col) > 1e-12)
        if idx.size:
            pivot = col[idx[0]]
            w[:, j] = col * (pivot.conjugate() / abs(pivot))
    return w


def _zero_model(snapshots: SnapshotSet) -> DmdcModel:
    """Minimum-norm model for identically-zero data: everything maps to 0."""
    d, q = snapshots.d, snapshots.q
    u_hat = np.zeros((d, 1))
    u_hat[0, 0] = 1.0
    return DmdcModel(
        a_tilde=np.zeros((1, 1)),
        b_tilde=np.zeros((1, q)),
        eigenvalues=np.zeros(1, dtype=complex),
        eigenvectors=np.ones((1, 1), dtype=complex),
        phi=np.zeros((d, 1), dtype=complex),
        sing_vals_joint=np.zeros(1),
        sing_vals_state=np.zeros(1),
        u_hat=u_hat,
        offsets=CenterOffsets(
            state=snapshots.state_offsets.copy(), input=snapshots.input_offsets.copy()
        ),
    )


def fit(snapshots: SnapshotSet, config: DmdcConfig | None = None) -> DmdcModel:
    """Identify the reduced operator, input map and mode matrix.

    Raises :class:`InfeasibleRankError` when an explicit rank exceeds the
    data shapes and :class:`RankDeficiencyError` when a retained singular
    value is numerically zero. All-zero snapshot data (a centered constant
    series) yields the zero model rather than an error.
    """
    if config is None:
        config = DmdcConfig()
    x, x_next, u = snapshots.x, snapshots.x_next, snapshots.u
    d, m = x.shape
    q = u.shape[0]

    omega = np.vstack([x, u])
    u_om, s_om, vt_om = np.linalg.svd(omega, full_matrices=False)
    u_xp, s_xp, _ = np.linalg.svd(x_next, full_matrices=False)
    if s_om[0] == 0.0 or s_xp[0] == 0.0:
        return _zero_model(snapshots)

    if not config.energy_mode and config.rank_joint > m:
        raise InfeasibleRankError(
            f"joint rank {config.rank_joint} infeasible: only {m} snapshots"
        )
    p = _resolve_rank(config.rank_joint, s_om, config.energy_mode, "joint")
    r = _resolve_rank(config.rank_state, s_xp, config.energy_mode, "state")
    if config.energy_mode:
        r = min(r, p)  # keep the count-mode invariant r <= p
    elif r > min(d, m):
        raise InfeasibleRankError(
            f"state rank {r} infeasible for {d} x {m} snapshot matrix"
        )
    _check_retained(s_om, p, "joint")
    _check_retained(s_xp, r, "state")

    ut = u_om[:, :p]
    ut_x = ut[:d, :]
    ut_u = ut[d:, :]
    u_hat = u_xp[:, :r]
    # X' V S^-1, shared by the operator and the mode reconstruction
    core = (x_next @ vt_om[:p, :].T) / s_om[:p]

    a_tilde = u_hat.T @ core @ (ut_x.T @ u_hat)
    b_tilde = u_hat.T @ core @ ut_u.T

    eigenvalues, w = np.linalg.eig(a_tilde)
    order = np.lexsort((-eigenvalues.imag, -np.abs(eigenvalues)))
    eigenvalues = eigenvalues[order]
    w = _gauge_eigenvectors(w[:, order])

    phi = core @ (ut_x.T @ (u_hat @ w))

    residual = np.linalg.norm(a_tilde @ w - w * eigenvalues, "fro")
    denom = np.linalg.norm(a_tilde, "fro")
    rel_residual = residual / denom if denom > 0 else residual
    if rel_residual > EIG_RESIDUAL_TOL:
        raise NumericalError(
            f"eigendecomposition residual {rel_residual:.3e} exceeds {EIG_RESIDUAL_TOL:g}"
        )

    return DmdcModel(
        a_tilde=a_tilde,
        b_tilde=b_tilde,
        eigenvalues=eigenvalues,
        eigenvectors=w,
        phi=phi,
        sing_vals_joint=s_om[:p].copy(),
        sing_vals_state=s_xp[:r].copy(),
        u_hat=u_hat.copy(),
        offsets=CenterOffsets(
            state=snapshots.state_offsets.copy(), input=snapshots.input_offsets.copy()
        ),
        eig_residual=float(rel_residual),
    )


def predict_one_step(model: DmdcModel, x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Advance one state vector a single step, in original (uncentered) units."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if x.shape != (model.d,):
        raise ValueError(f"state must have shape ({model.d},), got {x.shape}")
    if u.shape != (model.q,):
        raise ValueError(f"input must have shape ({model.q},), got {u.shape}")
    xc = x - model.offsets.state
    uc = u - model.offsets.input
    reduced = model.a_tilde @ (model.u_hat.T @ xc) + model.b_tilde @ uc
    return model.u_hat @ reduced + model.offsets.state


def training_rmse(model: DmdcModel, snapshots: SnapshotSet) -> float:
    """One-step root-mean-square error over the (centered) training columns."""
    reduced = model.a_tilde @ (model.u_hat.T @ snapshots.x) + model.b_tilde @ snapshots.u
    predicted = model.u_hat @ reduced
    return float(np.sqrt(np.mean((predicted - snapshots.x_next) ** 2)))


def mode_magnitude(model: DmdcModel) -> np.ndarray:
    """Entrywise modulus of the mode matrix (d x r, nonnegative)."""
    return np.abs(model.phi)


def mode_phase(model: DmdcModel) -> tuple[np.ndarray, np.ndarray]:
    """Entrywise argument of the mode matrix in (-pi, pi].

    Entries whose modulus is below 1e-12 of the largest carry no meaningful
    phase; they are emitted as 0 and marked True in the companion mask.
    """
    magnitude = np.abs(model.phi)
    max_mag = magnitude.max() if magnitude.size else 0.0
    if max_mag == 0.0:
        mask = np.ones(magnitude.shape, dtype=bool)
    else:
        mask = magnitude < MASK_REL_TOL * max_mag
    phase = np.angle(model.phi)
    phase[phase == -np.pi] = np.pi
    phase[mask] = 0.0
    return phase, mask
