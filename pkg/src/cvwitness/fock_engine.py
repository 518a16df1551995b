"""Exact numerics on a truncated two-mode Fock space.

Basis states ``|n1, n2>`` with ``0 <= n1, n2 <= cutoff`` are flattened
row-major, ``index = n1 * (cutoff + 1) + n2``. A pure state stores a vector
of length ``(cutoff + 1)**2``; a density operator stores the square matrix.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .epr_criterion import MomentSet
from .errors import DomainError, ShapeError, TruncationLoss, WeightError

ANNIHILATE = "annihilate"
CREATE = "create"

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
EIGEN_TOL = 1e-9


def a(mode: int) -> tuple[int, str]:
    return (mode, ANNIHILATE)


def adag(mode: int) -> tuple[int, str]:
    return (mode, CREATE)


class Kind(enum.Enum):
    PURE = "pure"
    DENSITY = "density"


@dataclass(frozen=True)
class TruncationPolicy:
    """How large a cutoff may grow, and how much tail probability is tolerated."""

    tail_tolerance: float = 1e-10
    max_cutoff: int = 120

    def __post_init__(self):
        if not (0 < self.tail_tolerance < 1):
            raise DomainError("tail_tolerance must lie in (0, 1)")
        if self.max_cutoff < 1:
            raise DomainError("max_cutoff must be at least 1")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Two-mode state on ``{0..cutoff}²``.

    ``truncation_loss`` marks results of a creation operator that pushed
    amplitude past the cutoff. Ladder results are unnormalised; use
    :func:`validate` on states meant to be physical.
    """

    cutoff: int
    kind: Kind
    amplitudes: np.ndarray
    truncation_loss: bool = False
    tail_tolerance: float = DEFAULT_POLICY.tail_tolerance

    def __post_init__(self):
        D = (self.cutoff + 1) ** 2
        shape = (D,) if self.kind is Kind.PURE else (D, D)
        if self.amplitudes.shape != shape:
            raise ShapeError(f"expected amplitudes of shape {shape}, got {self.amplitudes.shape}")
        self.amplitudes.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    def tensor(self) -> np.ndarray:
        """Amplitudes with the two mode indices split out."""
        d = self.dim
        if self.kind is Kind.PURE:
            return self.amplitudes.reshape(d, d)
        return self.amplitudes.reshape(d, d, d, d)

    def populations(self) -> np.ndarray:
        """Probabilities ``P(n1, n2)`` as a ``(d, d)`` array."""
        d = self.dim
        if self.kind is Kind.PURE:
            return np.abs(self.amplitudes.reshape(d, d)) ** 2
        return np.real(np.diagonal(self.amplitudes)).reshape(d, d)

    @property
    def tail_mass(self) -> float:
        """Probability on basis states with ``n1 = cutoff`` or ``n2 = cutoff``."""
        p = self.populations()
        return float(p[-1, :].sum() + p[:-1, -1].sum())

    @property
    def converged(self) -> bool:
        return self.tail_mass < self.tail_tolerance

    def norm(self) -> float:
        """Squared norm (pure) or trace (density)."""
        if self.kind is Kind.PURE:
            return float(np.vdot(self.amplitudes, self.amplitudes).real)
        return float(np.trace(self.amplitudes).real)

    def density_matrix(self) -> np.ndarray:
        if self.kind is Kind.DENSITY:
            return np.array(self.amplitudes)
        return np.outer(self.amplitudes, self.amplitudes.conj())


def validate(state: TwoModeState) -> None:
    """Raise :class:`DomainError` unless ``state`` is a normalised physical state."""
    if abs(state.norm() - 1.0) > NORM_TOL:
        raise DomainError(f"state norm {state.norm()!r} differs from 1")
    if state.kind is Kind.DENSITY:
        rho = state.amplitudes
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise DomainError("density operator is not Hermitian")
        if np.linalg.eigvalsh(rho).min() < -EIGEN_TOL:
            raise DomainError("density operator has a negative eigenvalue")


def pure_state(amplitudes, tail_tolerance: float = DEFAULT_POLICY.tail_tolerance, normalize=True) -> TwoModeState:
    """Build a pure state from a ``(d, d)`` array or a flat vector."""
    psi = np.array(amplitudes, dtype=complex)
    if psi.ndim == 2:
        if psi.shape[0] != psi.shape[1]:
            raise ShapeError("both modes must share one cutoff")
        d = psi.shape[0]
        psi = psi.reshape(-1)
    else:
        d = int(round(np.sqrt(psi.size)))
        if d * d != psi.size:
            raise ShapeError(f"length {psi.size} is not a square")
    if normalize:
        nrm = np.linalg.norm(psi)
        if nrm == 0:
            raise DomainError("cannot normalise the zero vector")
        psi = psi / nrm
    return TwoModeState(d - 1, Kind.PURE, psi, tail_tolerance=tail_tolerance)


def density_state(rho, tail_tolerance: float = DEFAULT_POLICY.tail_tolerance, normalize=True) -> TwoModeState:
    rho = np.array(rho, dtype=complex)
    d = int(round(np.sqrt(rho.shape[0])))
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or d * d != rho.shape[0]:
        raise ShapeError(f"bad density matrix shape {rho.shape}")
    rho = 0.5 * (rho + rho.conj().T)
    if normalize:
        rho = rho / np.trace(rho).real
    return TwoModeState(d - 1, Kind.DENSITY, rho, tail_tolerance=tail_tolerance)


def basis_state(n1: int, n2: int, cutoff: int) -> TwoModeState:
    psi = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    psi[n1, n2] = 1.0
    return pure_state(psi)


# --- ladder action -----------------------------------------------------------

def _ladder_rows(t: np.ndarray, mode: int, which: str) -> tuple[np.ndarray, bool]:
    """Apply a ladder operator to the leading ``(d, d)`` indices of ``t``."""
    if mode not in (1, 2):
        raise DomainError(f"mode must be 1 or 2, got {mode!r}")
    axis = mode - 1
    t = np.moveaxis(t, axis, 0)
    d = t.shape[0]
    shape = (d - 1,) + (1,) * (t.ndim - 1)
    sq = np.sqrt(np.arange(1, d, dtype=float)).reshape(shape)
    out = np.zeros_like(t)
    lost = False
    if which == ANNIHILATE:
        out[:-1] = sq * t[1:]
    elif which == CREATE:
        out[1:] = sq * t[:-1]
        lost = bool(np.any(t[-1] != 0))
    else:
        raise DomainError(f"unknown ladder symbol {which!r}")
    return np.moveaxis(out, 0, axis), lost


def _apply_word_rows(t: np.ndarray, word: Sequence[tuple[int, str]]) -> tuple[np.ndarray, bool]:
    # rightmost symbol acts first
    lost = False
    for mode, which in reversed(word):
        t, l = _ladder_rows(t, mode, which)
        lost |= l
    return t, lost


def apply_ladder(state: TwoModeState, mode: int, which: str) -> TwoModeState:
    """Apply ``a_mode`` or ``a_mode†`` from the left (ket side for density operators).

    The result is not renormalised. Creation at the cutoff drops that
    component and sets ``truncation_loss``.
    """
    d = state.dim
    if state.kind is Kind.PURE:
        t = state.amplitudes.reshape(d, d)
    else:
        t = state.amplitudes.reshape(d, d, d * d)
    out, lost = _ladder_rows(t, mode, which)
    return TwoModeState(
        state.cutoff,
        state.kind,
        out.reshape(state.amplitudes.shape),
        truncation_loss=state.truncation_loss or lost,
        tail_tolerance=state.tail_tolerance,
    )


def _split_word(word):
    # Leading creators move to the bra as annihilators, so normal-ordered
    # words never touch the cutoff edge.
    k = 0
    while k < len(word) and word[k][1] == CREATE:
        k += 1
    bra = [(mode, ANNIHILATE) for mode, _ in word[:k]][::-1]
    return bra, list(word[k:])


def expectation(state: TwoModeState, word: Iterable[tuple[int, str]]) -> complex:
    """``Tr(ρ W)`` for a product ``W`` of ladder symbols written left to right."""
    word = list(word)
    bra_word, ket_word = _split_word(word)
    d = state.dim
    if state.kind is Kind.PURE:
        psi = state.amplitudes.reshape(d, d)
        ket, _ = _apply_word_rows(psi, ket_word)
        bra, _ = _apply_word_rows(psi, bra_word)
        return complex(np.vdot(bra, ket))
    D = d * d
    rho = state.amplitudes.reshape(d, d, D)
    m, _ = _apply_word_rows(rho, ket_word)  # R ρ
    m = m.reshape(D, D).conj().T.reshape(d, d, D)
    m, _ = _apply_word_rows(m, bra_word)  # P (R ρ)†
    return complex(np.trace(m.reshape(D, D))).conjugate()


def variance(state: TwoModeState, terms: Sequence[tuple[complex, tuple[int, str]]]) -> float:
    """Variance of the linear operator ``L = Σ w_k s_k`` (assumed Hermitian)."""
    mean = sum(w * expectation(state, [s]) for w, s in terms)
    second = sum(
        wj * wk * expectation(state, [sj, sk]) for wj, sj in terms for wk, sk in terms
    )
    return float(np.real(second - mean * mean))


def extract_moments(state: TwoModeState) -> MomentSet:
    m1 = expectation(state, [a(1)])
    m2 = expectation(state, [a(2)])
    return MomentSet(
        mean1=m1,
        mean2=m2,
        n1=float(np.real(expectation(state, [adag(1), a(1)])) - abs(m1) ** 2),
        n2=float(np.real(expectation(state, [adag(2), a(2)])) - abs(m2) ** 2),
        sq1=expectation(state, [a(1), a(1)]) - m1 * m1,
        sq2=expectation(state, [a(2), a(2)]) - m2 * m2,
        cross=expectation(state, [a(1), a(2)]) - m1 * m2,
        crossc=expectation(state, [adag(2), a(1)]) - m1 * np.conj(m2),
    )


# --- cutoff selection --------------------------------------------------------

def weighted_tail(populations: np.ndarray, cutoff: int, missing: float = 0.0) -> float:
    """Photon-weighted probability on ``n1 >= cutoff`` or ``n2 >= cutoff``.

    Weighting by ``1 + n1 + n2`` bounds the moment error from discarding the
    tail, not just the probability. ``missing`` is mass known to lie beyond
    the array; it is charged at the largest weight present.
    """
    d = populations.shape[0]
    n = np.arange(d)
    w = 1.0 + n[:, None] + n[None, :]
    q = populations * w
    inside = q[:cutoff, :cutoff].sum()
    return float(q.sum() - inside + max(missing, 0.0) * (2 * d - 1))


def choose_cutoff(populations: np.ndarray, total: float, policy: TruncationPolicy) -> int:
    """Smallest cutoff whose weighted tail is below ``policy.tail_tolerance``.

    ``populations`` covers ``{0..max_cutoff}²`` and ``total`` is the exact mass
    of the untruncated state.
    """
    d = populations.shape[0]
    n = np.arange(d)
    q = populations * (1.0 + n[:, None] + n[None, :])
    missing = max(total - populations.sum(), 0.0) * (2 * d - 1)
    # mass strictly inside [0, N)² for every N via a 2-D cumulative sum
    cs = np.cumsum(np.cumsum(q, axis=0), axis=1)
    grand = q.sum()
    for N in range(1, d):
        if grand - cs[N - 1, N - 1] + missing < policy.tail_tolerance:
            return N
    raise TruncationLoss(
        f"tail exceeds {policy.tail_tolerance:g} even at max_cutoff={policy.max_cutoff}"
    )


# --- displacement ------------------------------------------------------------

def displacement_matrix(beta: complex, rows: int, cols: int) -> np.ndarray:
    """Exact Fock matrix elements ``<m|D(β)|n>`` for ``m < rows``, ``n < cols``."""
    m = np.arange(rows)[:, None]
    n = np.arange(cols)[None, :]
    x = abs(beta) ** 2
    lo = np.minimum(m, n)
    k = np.abs(m - n)
    mag = np.exp(0.5 * (gammaln(lo + 1) - gammaln(lo + k + 1)) - x / 2)
    lag = eval_genlaguerre(lo, k, x)
    phase = np.where(m >= n, beta ** k, (-np.conj(beta)) ** k) if beta != 0 else (k == 0).astype(complex)
    return mag * lag * phase


def _displace_at(state: TwoModeState, b1: complex, b2: complex, M: int) -> np.ndarray:
    d = state.dim
    D1 = displacement_matrix(b1, M + 1, d)
    D2 = displacement_matrix(b2, M + 1, d)
    if state.kind is Kind.PURE:
        return D1 @ state.amplitudes.reshape(d, d) @ D2.T
    U = np.kron(D1, D2)
    return U @ state.amplitudes @ U.conj().T


def displace(state: TwoModeState, beta1: complex, beta2: complex,
             policy: TruncationPolicy = DEFAULT_POLICY) -> TwoModeState:
    """Apply ``D(β1) ⊗ D(β2)``; the output cutoff grows until the tail is negligible."""
    if beta1 == 0 and beta2 == 0:
        return state
    trace = state.norm()
    step = 4
    M = state.cutoff
    while True:
        M = min(M + step, policy.max_cutoff)
        out = _displace_at(state, beta1, beta2, M)
        pops = np.abs(out) ** 2 if state.kind is Kind.PURE else np.real(np.diagonal(out)).reshape(M + 1, M + 1)
        missing = trace - pops.sum()
        if weighted_tail(pops, M, missing) < policy.tail_tolerance:
            break
        if M >= policy.max_cutoff:
            raise TruncationLoss(
                f"displaced state does not fit below max_cutoff={policy.max_cutoff}"
            )
        step *= 2
    # trim to the smallest adequate cutoff
    N = M
    while N > 1 and weighted_tail(pops, N - 1, missing) < policy.tail_tolerance:
        N -= 1
    if state.kind is Kind.PURE:
        return pure_state(out[: N + 1, : N + 1], tail_tolerance=policy.tail_tolerance)
    d = M + 1
    rho = out.reshape(d, d, d, d)[: N + 1, : N + 1, : N + 1, : N + 1]
    D = (N + 1) ** 2
    return density_state(rho.reshape(D, D), tail_tolerance=policy.tail_tolerance)


# --- mixtures ----------------------------------------------------------------

def mix(states: Sequence[TwoModeState], weights: Sequence[float]) -> TwoModeState:
    """Convex combination ``Σ w_i ρ_i`` as a density operator."""
    if len(states) == 0 or len(states) != len(weights):
        raise WeightError("need one weight per state and at least one state")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise WeightError(f"weights must be non-negative and sum to 1, got {w.tolist()}")
    cutoffs = {s.cutoff for s in states}
    if len(cutoffs) != 1:
        raise ShapeError(f"states have mismatched cutoffs {sorted(cutoffs)}")
    rho = sum(wi * s.density_matrix() for wi, s in zip(w, states))
    return density_state(rho, tail_tolerance=min(s.tail_tolerance for s in states))
