"""Analytic moments of two-mode Gaussian Q functions.

The family covered here is

    Q(α, β) = (AB - C²) exp{-A|α|² - B|β|² - C(αβ + α*β*)}

normalised under ``d²α d²β / π²``. Writing ``w = (α, β*)`` the exponent is
``-w† M w`` with ``M = [[A, C], [C, B]]``, so the Q-averages follow from
``<w w†> = M⁻¹``. Q-averages are anti-normally ordered, which gives
``n1 = <|α|²>_Q - 1`` and ``<a1 a2> = <αβ>_Q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .epr_criterion import MomentSet
from .errors import DomainError


@dataclass(frozen=True)
class GaussianQForm:
    A: float
    B: float
    C: float
    physical: bool = True
    label: str = ""

    def __post_init__(self):
        if not (self.A > 0 and self.B > 0 and self.A * self.B - self.C**2 > 0):
            raise DomainError(
                f"Q kernel does not converge for A={self.A!r}, B={self.B!r}, C={self.C!r}"
            )

    @property
    def det(self) -> float:
        return self.A * self.B - self.C**2

    @property
    def prefactor(self) -> float:
        return self.det


def santos_form(n: float, x: float) -> GaussianQForm:
    """Equal-photon-number state: ``A = B = K``, ``C = K x``, ``K = 1/((n+1)(1-x²))``.

    Only ``|x| <= sqrt(n/(n+1))`` describes a physical state; other points are
    flagged via ``physical=False``.
    """
    if n < 0:
        raise DomainError(f"mean photon number must be non-negative, got {n!r}")
    if abs(x) >= 1:
        raise DomainError(f"correlation |x| must be below 1, got {x!r}")
    K = 1.0 / ((n + 1.0) * (1.0 - x * x))
    physical = abs(x) <= math.sqrt(n / (n + 1.0))
    return GaussianQForm(K, K, K * x, physical=physical, label="santos")


def minimum_correlation_form(r: float, d: float) -> GaussianQForm:
    """``A = (1-d) tanh r``, ``B = (1-d) / tanh r``, ``C = d``; requires ``d < 1/2``."""
    if r <= 0:
        raise DomainError(f"squeezing r must be positive, got {r!r}")
    if d >= 0.5:
        raise DomainError(f"d must be below 1/2 for a normalisable kernel, got {d!r}")
    g = math.tanh(r)
    A = (1.0 - d) * g
    B = (1.0 - d) / g
    n1 = B / (1.0 - 2 * d) - 1.0
    n2 = A / (1.0 - 2 * d) - 1.0
    return GaussianQForm(A, B, d, physical=(n1 >= 0 and n2 >= 0), label="mincorr")


def tmsv_form(r: float) -> GaussianQForm:
    """Q kernel of the two-mode squeezed vacuum: ``A = B = 1``, ``C = -tanh r``."""
    if r < 0:
        raise DomainError(f"squeezing r must be non-negative, got {r!r}")
    return GaussianQForm(1.0, 1.0, -math.tanh(r), label="tmsv")


def q_averages(form: GaussianQForm) -> tuple[float, float, float]:
    """``(<|α|²>_Q, <|β|²>_Q, <αβ>_Q)`` from the inverse kernel."""
    det = form.det
    return form.B / det, form.A / det, -form.C / det


def to_moment_set(form: GaussianQForm) -> MomentSet:
    aa, bb, ab = q_averages(form)
    n1 = aa - 1.0
    n2 = bb - 1.0
    warnings = []
    if not form.physical:
        warnings.append(f"{form.label or 'Q kernel'} parameters outside the physical region")
    if n1 < 0 or n2 < 0:
        warnings.append(f"negative photon number (n1={n1:.6g}, n2={n2:.6g})")
    return MomentSet(n1=n1, n2=n2, cross=complex(ab), warnings=tuple(warnings))


def q_normalization_check(form: GaussianQForm) -> float:
    """Prefactor times the Gaussian integral ``1/det M``; 1 for a normalised kernel."""
    return form.prefactor / form.det
