"""Closed-form predictions used to cross-check the two moment engines.

Each oracle returns an :class:`OracleValue` whose ``source`` names the
closed-form result it evaluates. :func:`q_quadrature_moments` is a numerical
oracle for the Gaussian engine that never inverts the kernel matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gaussian_moments import GaussianQForm
from .state_library import EcsSign


@dataclass(frozen=True)
class OracleValue:
    value: float
    source: str
    caveat: str | None = None

    def __post_init__(self):
        if not self.source:
            raise ValueError("oracle source must be nonempty")


def tmsv_tau(r: float) -> OracleValue:
    if r < 0:
        raise DomainError("r must be non-negative")
    return OracleValue(math.exp(-2 * r), "tmsv.concurrence")


def santos_t(n: float, x: float) -> OracleValue:
    """Test-operator expectation at the optimal sign, ``2n - 2|x|(n+1)``."""
    if n < 0 or abs(x) >= 1:
        raise DomainError("need n >= 0 and |x| < 1")
    return OracleValue(2 * n - 2 * abs(x) * (n + 1), "santos.test_operator")


def santos_window(n: float) -> tuple[float, float]:
    """Entangled window ``n/(n+1) < |x| <= sqrt(n/(n+1))``, as ``(low, high)``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    ratio = n / (n + 1)
    return ratio, math.sqrt(ratio)


def _tanh_coth_excess(r: float) -> float:
    return math.tanh(r) + 1 / math.tanh(r) - 2


def mincorr_t_c1(r: float, d: float) -> OracleValue:
    """``<T>`` at ``c = 1``: ``[tanh r + coth r - 2](1-d)/(1-2d)``, never negative."""
    if r <= 0 or d >= 0.5:
        raise DomainError("need r > 0 and d < 1/2")
    return OracleValue(_tanh_coth_excess(r) * (1 - d) / (1 - 2 * d), "mincorr.test_operator_c1")


def mincorr_t_reported(r: float, d: float) -> OracleValue:
    """The published optimal-scale value ``-[tanh r + coth r - 2](1-d)/(1-2d)``.

    Its magnitude disagrees with ``2 sqrt(n1 n2) - |δ|`` evaluated on the
    published moments, so only its sign is ever compared.
    """
    if r <= 0 or d >= 0.5:
        raise DomainError("need r > 0 and d < 1/2")
    return OracleValue(
        -_tanh_coth_excess(r) * (1 - d) / (1 - 2 * d),
        "mincorr.test_operator_optimal",
        caveat="sign-only check: magnitude differs from 2*sqrt(n1*n2)-|delta|",
    )


def ecs_t(sign: EcsSign, R: float, theta: float) -> OracleValue:
    """``2R²[tanh(2R²) - |cos 2θ|]`` (plus) or ``2R²[coth(2R²) - |cos 2θ|]`` (minus)."""
    sign = EcsSign(sign)
    if R < 0:
        raise DomainError("R must be non-negative")
    x = 2 * R * R
    c2 = abs(math.cos(2 * theta))
    if sign is EcsSign.PLUS:
        return OracleValue(x * (math.tanh(x) - c2), "ecs.test_operator_plus")
    if R == 0:
        raise DomainError("the minus branch is undefined at R = 0")
    return OracleValue(x * (1 / math.tanh(x) - c2), "ecs.test_operator_minus")


def q_quadrature_moments(form: GaussianQForm, nodes: int = 160, width: float = 9.0) -> dict[str, float]:
    """Integrate the Q function numerically and return its normalisation and moments.

    With ``α = x1 + i y1`` and ``β = x2 + i y2`` the exponent separates into a
    ``(x1, x2)`` part with coupling ``+2C x1 x2`` and a ``(y1, y2)`` part with
    ``-2C y1 y2``, so the 4-D integral is a product of two 2-D Gauss-Legendre
    quadratures. Returns ``norm``, ``n1``, ``n2`` and ``delta``.
    """
    lam = 0.5 * (form.A + form.B) - math.hypot(0.5 * (form.A - form.B), form.C)
    L = width / math.sqrt(lam)
    t, w = np.polynomial.legendre.leggauss(nodes)
    t = L * t
    w = L * w
    u, v = np.meshgrid(t, t, indexing="ij")
    W = np.outer(w, w)

    def plane(coupling):
        g = W * np.exp(-(form.A * u * u + form.B * v * v + coupling * u * v))
        return g.sum(), (g * u * u).sum(), (g * v * v).sum(), (g * u * v).sum()

    zx, xx1, xx2, xx12 = plane(2 * form.C)
    zy, yy1, yy2, yy12 = plane(-2 * form.C)
    pref = form.prefactor / math.pi**2
    norm = pref * zx * zy
    # second moments relative to the full measure
    e_a2 = (xx1 / zx + yy1 / zy) * norm
    e_b2 = (xx2 / zx + yy2 / zy) * norm
    e_ab = (xx12 / zx - yy12 / zy) * norm
    return {"norm": norm, "n1": e_a2 - 1.0, "n2": e_b2 - 1.0, "delta": 2.0 * e_ab}
