"""EPR-like operator entanglement witness for two bosonic modes.

Everything here is a function of a :class:`MomentSet`, the first and central
second moments of ``a1`` and ``a2``. Quadratures follow ``x = (a + a†)/√2``,
``p = (a - a†)/(i√2)`` so the vacuum has ``Δx² = Δp² = 1/2``.

For a scale ``c != 0`` the EPR-like operators are

    u = |c| x1 + x2 / c,        v = |c| p1 - p2 / c

and every separable state obeys ``Δu² + Δv² >= c² + 1/c²``. The test
operator expectation

    <T> = c² n1 + n2 / c² + sign(c) δ,     δ = <a1 a2 + a1† a2†>

measures the excess: ``Δu² + Δv² = c² + 1/c² + 2 <T>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateModeError, DomainError

#: ``<T>`` must fall below ``-GEES_MARGIN`` to count as entangled.
GEES_MARGIN = 1e-12
#: A variance must fall below half the bound by this much to count as squeezed;
#: sized to the Fock engine accuracy (ten times the default tail tolerance).
SQUEEZE_MARGIN = 1e-9
#: Photon numbers at or below this are treated as vacuum when choosing ``c``.
VACUUM_THRESHOLD = 1e-12
#: Slack for the necessary physicality checks on a moment set.
PHYSICAL_SLACK = 1e-9


@dataclass(frozen=True)
class MomentSet:
    """First moments and central second moments of the two mode operators.

    ``n1``, ``n2`` are central photon numbers ``<a†a> - |<a>|²``; ``sq1``,
    ``sq2`` central ``<a²>``; ``cross`` central ``<a1 a2>`` and ``crossc``
    central ``<a1 a2†>``. ``warnings`` carries physicality notes from the
    engine that produced the moments.
    """

    mean1: complex = 0j
    mean2: complex = 0j
    n1: float = 0.0
    n2: float = 0.0
    sq1: complex = 0j
    sq2: complex = 0j
    cross: complex = 0j
    crossc: complex = 0j
    warnings: tuple[str, ...] = ()

    def physicality_warnings(self) -> list[str]:
        """Necessary (not sufficient) conditions a physical state must meet."""
        out = []
        eps = PHYSICAL_SLACK
        if self.n1 < -eps:
            out.append(f"n1 = {self.n1:.6g} is negative")
        if self.n2 < -eps:
            out.append(f"n2 = {self.n2:.6g} is negative")
        cross2 = abs(self.cross) ** 2
        if cross2 > (self.n1 + 1) * self.n2 + eps or cross2 > self.n1 * (self.n2 + 1) + eps:
            out.append("|cross|^2 violates the Cauchy-Schwarz bound")
        if abs(self.sq1) > self.n1 + 1 + eps:
            out.append("|sq1| exceeds n1 + 1")
        if abs(self.sq2) > self.n2 + 1 + eps:
            out.append("|sq2| exceeds n2 + 1")
        return out


@dataclass(frozen=True)
class EprScale:
    """The scale ``c`` of the EPR-like operators."""

    c: float

    def __post_init__(self):
        if not math.isfinite(self.c) or self.c == 0:
            raise DomainError(f"EPR scale must be finite and nonzero, got {self.c!r}")

    @property
    def sign(self) -> float:
        return 1.0 if self.c > 0 else -1.0

    @property
    def bound(self) -> float:
        """Separable lower bound ``c² + 1/c²`` on ``Δu² + Δv²``."""
        return self.c**2 + 1.0 / self.c**2


@dataclass
class CriterionReport:
    c: float
    delta: float
    du2: float
    dv2: float
    total_variance: float
    bound: float
    t_expectation: float
    is_gees: bool
    u_squeezed: bool
    v_squeezed: bool
    tau: float
    degree_literal: float | None
    degree_monotone: float | None
    physical_warnings: list[str] = field(default_factory=list)


def _scale(c) -> EprScale:
    return c if isinstance(c, EprScale) else EprScale(float(c))


def delta(m: MomentSet) -> float:
    """Phase-sensitive correlation ``<a1 a2 + a1† a2†>`` on central moments."""
    return 2.0 * float(np.real(m.cross))


def optimal_c(m: MomentSet) -> EprScale:
    """Scale minimising ``<T>``: ``c² = sqrt(n2/n1)``, sign opposite to δ.

    The tie-break at ``δ = 0`` is ``c > 0``. Two vacuum modes give ``c = 1``.
    """
    small1 = m.n1 <= VACUUM_THRESHOLD
    small2 = m.n2 <= VACUUM_THRESHOLD
    sign = -1.0 if delta(m) > 0 else 1.0
    if small1 and small2:
        return EprScale(1.0)
    if small1 or small2:
        raise DegenerateModeError(
            f"optimal c diverges for n1={m.n1:.3g}, n2={m.n2:.3g}"
        )
    return EprScale(sign * (m.n2 / m.n1) ** 0.25)


def t_expectation(m: MomentSet, c) -> float:
    c = _scale(c)
    return c.c**2 * m.n1 + m.n2 / c.c**2 + c.sign * delta(m)


def uv_variances(m: MomentSet, c) -> tuple[float, float]:
    """Return ``(Δu², Δv²)`` built from quadrature variances and covariances."""
    c = _scale(c)
    c2 = c.c**2
    dx1 = 0.5 + m.n1 + np.real(m.sq1)
    dx2 = 0.5 + m.n2 + np.real(m.sq2)
    dp1 = 0.5 + m.n1 - np.real(m.sq1)
    dp2 = 0.5 + m.n2 - np.real(m.sq2)
    cov_x = np.real(m.cross) + np.real(m.crossc)
    cov_p = -np.real(m.cross) + np.real(m.crossc)
    du2 = c2 * dx1 + dx2 / c2 + 2.0 * c.sign * cov_x
    dv2 = c2 * dp1 + dp2 / c2 - 2.0 * c.sign * cov_p
    return float(du2), float(dv2)


def gees_quick_test(m: MomentSet) -> bool:
    """``|δ| > 2 sqrt(n1 n2)``, with the same strictness margin as :func:`assess`."""
    n1 = max(m.n1, 0.0)
    n2 = max(m.n2, 0.0)
    return abs(delta(m)) - 2.0 * math.sqrt(n1 * n2) > GEES_MARGIN


def squeezing_flags(m: MomentSet, c) -> tuple[bool, bool]:
    c = _scale(c)
    du2, dv2 = uv_variances(m, c)
    half = c.bound / 2.0
    return du2 < half - SQUEEZE_MARGIN, dv2 < half - SQUEEZE_MARGIN


def _tau_at(m: MomentSet, c: EprScale) -> float:
    # tau < 1 exactly when the state passes the GEES test
    if t_expectation(m, c) >= -GEES_MARGIN:
        return 1.0
    du2, dv2 = uv_variances(m, c)
    return min((du2 + dv2) / c.bound, 1.0)


def concurrence(m: MomentSet) -> float:
    """Normalised total variance ``min[(Δu² + Δv²) / (c² + 1/c²), 1]`` at optimal c."""
    return _tau_at(m, optimal_c(m))


def _binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def entanglement_degree(tau: float, mode: str = "monotone") -> float:
    """Entanglement degree from the concurrence.

    ``mode="literal"`` evaluates ``h((1 + sqrt(1 - τ²)) / 2)``, which grows
    with τ. ``mode="monotone"`` evaluates ``h((1 + τ) / 2)``, which falls from
    1 at τ → 0 to 0 at τ = 1.
    """
    if not (0.0 < tau <= 1.0):
        raise DomainError(f"tau must lie in (0, 1], got {tau!r}")
    if mode == "literal":
        return _binary_entropy((1.0 + math.sqrt(1.0 - tau * tau)) / 2.0)
    if mode == "monotone":
        return _binary_entropy((1.0 + tau) / 2.0)
    raise DomainError(f"unknown entanglement degree mode {mode!r}")


def assess(m: MomentSet) -> CriterionReport:
    """Run the full witness at the optimal scale and collect every output."""
    warnings = list(m.warnings) + m.physicality_warnings()
    try:
        c = optimal_c(m)
    except DegenerateModeError:
        # For physical moments cross = 0 here, so <T> >= 0 and tau = 1 at |c| = 1.
        c = EprScale(-1.0 if delta(m) > 0 else 1.0)
        warnings.append("one mode is vacuum or negative: optimal c diverges, report uses |c| = 1")

    du2, dv2 = uv_variances(m, c)
    t = t_expectation(m, c)
    u_sq, v_sq = squeezing_flags(m, c)
    tau = _tau_at(m, c)

    degree_literal = degree_monotone = None
    if 0.0 < tau <= 1.0:
        degree_literal = entanglement_degree(tau, "literal")
        degree_monotone = entanglement_degree(tau, "monotone")
    else:
        warnings.append(f"tau = {tau:.6g} outside (0, 1]; degrees undefined")

    return CriterionReport(
        c=c.c,
        delta=delta(m),
        du2=du2,
        dv2=dv2,
        total_variance=du2 + dv2,
        bound=c.bound,
        t_expectation=t,
        is_gees=t < -GEES_MARGIN,
        u_squeezed=u_sq,
        v_squeezed=v_sq,
        tau=tau,
        degree_literal=degree_literal,
        degree_monotone=degree_monotone,
        physical_warnings=warnings,
    )
