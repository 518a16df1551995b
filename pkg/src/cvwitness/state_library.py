"""Constructors for the two-mode states studied by the witness.

Each constructor takes an optional explicit ``cutoff``. Without one the
amplitudes are generated up to ``policy.max_cutoff`` and the smallest cutoff
whose photon-weighted tail is below ``policy.tail_tolerance`` is kept; if none
qualifies, :class:`~cvwitness.errors.TruncationLoss` is raised. With an
explicit cutoff the state is built as requested and ``state.converged``
reports whether the tail condition holds.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DegenerateNorm, DomainError
from .fock_engine import (
    DEFAULT_POLICY,
    TruncationPolicy,
    TwoModeState,
    choose_cutoff,
    mix,
    pure_state,
)


class EcsSign(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"

    @property
    def factor(self) -> float:
        return 1.0 if self is EcsSign.PLUS else -1.0


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Poissonian amplitudes ``exp(-|α|²/2) αⁿ / sqrt(n!)`` for ``n < dim``."""
    out = np.empty(dim, dtype=complex)
    out[0] = math.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, dim):
        out[n] = out[n - 1] * alpha / math.sqrt(n)
    return out


def _finish(psi_ref: np.ndarray, total: float, cutoff, policy: TruncationPolicy) -> TwoModeState:
    """Truncate exact amplitudes to an explicit or automatically chosen cutoff."""
    if cutoff is None:
        cutoff = choose_cutoff(np.abs(psi_ref) ** 2, total, policy)
    return pure_state(psi_ref[: cutoff + 1, : cutoff + 1], tail_tolerance=policy.tail_tolerance)


def _ref_dim(cutoff, policy: TruncationPolicy) -> int:
    return (cutoff if cutoff is not None else policy.max_cutoff) + 1


def two_mode_squeezed_vacuum(r: float, policy: TruncationPolicy = DEFAULT_POLICY,
                             cutoff: int | None = None) -> TwoModeState:
    """``exp[r(a1† a2† - a1 a2)]|00>`` in Schmidt form ``Σ tanhⁿ r / cosh r |n,n>``."""
    if r < 0:
        raise DomainError(f"squeezing r must be non-negative, got {r!r}")
    d = _ref_dim(cutoff, policy)
    coeff = np.tanh(r) ** np.arange(d) / np.cosh(r)
    return _finish(np.diag(coeff.astype(complex)), 1.0, cutoff, policy)


def coherent_product(alpha1: complex, alpha2: complex, policy: TruncationPolicy = DEFAULT_POLICY,
                     cutoff: int | None = None) -> TwoModeState:
    d = _ref_dim(cutoff, policy)
    psi = np.outer(coherent_amplitudes(alpha1, d), coherent_amplitudes(alpha2, d))
    return _finish(psi, 1.0, cutoff, policy)


def entangled_coherent(sign: EcsSign, alpha: complex, policy: TruncationPolicy = DEFAULT_POLICY,
                       cutoff: int | None = None) -> TwoModeState:
    """``N±(|α>|α> ± |-α>|-α>)`` with ``N± = 1/sqrt(2[1 ± exp(-4|α|²)])``."""
    sign = EcsSign(sign)
    norm2 = 2.0 * (1.0 + sign.factor * math.exp(-4 * abs(alpha) ** 2))
    if norm2 < 1e-16:
        raise DegenerateNorm(f"|psi-> vanishes at alpha={alpha!r}")
    d = _ref_dim(cutoff, policy)
    plus = coherent_amplitudes(alpha, d)
    minus = coherent_amplitudes(-alpha, d)
    psi = (np.outer(plus, plus) + sign.factor * np.outer(minus, minus)) / math.sqrt(norm2)
    return _finish(psi, 1.0, cutoff, policy)


def random_separable(seed: int, cutoff: int, branches: int, max_amplitude: float = 1.5) -> TwoModeState:
    """Seeded mixture ``Σ w_i |α_i><α_i| ⊗ |β_i><β_i|`` of coherent products.

    Amplitudes are uniform in the disk ``|α| <= max_amplitude``; weights are
    Dirichlet(1, ..., 1). Each branch is renormalised after truncation, so the
    mixture stays exactly separable on the truncated space.
    """
    if branches < 1:
        raise DomainError("need at least one branch")
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(branches))
    radii = max_amplitude * np.sqrt(rng.uniform(size=(branches, 2)))
    phases = rng.uniform(0, 2 * np.pi, size=(branches, 2))
    amps = radii * np.exp(1j * phases)
    d = cutoff + 1
    parts = [
        pure_state(np.outer(coherent_amplitudes(a1, d), coherent_amplitudes(a2, d)))
        for a1, a2 in amps
    ]
    weights = weights / weights.sum()
    return mix(parts, weights)
