import math

import numpy as np
import pytest

from cvwitness.epr_criterion import (
    EprScale,
    assess,
    concurrence,
    gees_quick_test,
    t_expectation,
    uv_variances,
)
from cvwitness.errors import DegenerateNorm, DomainError, TruncationLoss
from cvwitness.fock_engine import (
    TruncationPolicy,
    a,
    adag,
    apply_ladder,
    expectation,
    extract_moments,
    validate,
)
from cvwitness.state_library import (
    EcsSign,
    coherent_product,
    entangled_coherent,
    random_separable,
    two_mode_squeezed_vacuum,
)

C_GRID = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)


def test_tmsv_zero_is_vacuum():
    s = two_mode_squeezed_vacuum(0.0)
    assert s.tensor()[0, 0] == pytest.approx(1.0)
    assert np.count_nonzero(s.amplitudes) == 1


def test_tmsv_schmidt_form():
    r = 0.4
    s = two_mode_squeezed_vacuum(r, cutoff=40)
    psi = s.tensor()
    n = np.arange(41)
    assert np.allclose(np.diag(psi), np.tanh(r) ** n / np.cosh(r), atol=1e-15)
    assert np.allclose(psi - np.diag(np.diag(psi)), 0)


def test_tmsv_symmetry_and_concurrence():
    m = extract_moments(two_mode_squeezed_vacuum(0.5))
    assert abs(m.n1 - m.n2) < 1e-10
    assert abs(m.sq1) < 1e-15 and abs(m.sq2) < 1e-15
    assert concurrence(m) == pytest.approx(0.367879441171442, abs=1e-9)


def test_auto_cutoff_satisfies_tail_tolerance():
    policy = TruncationPolicy(tail_tolerance=1e-10)
    for s in (two_mode_squeezed_vacuum(1.0, policy), coherent_product(1.2, -0.5j, policy),
              entangled_coherent(EcsSign.PLUS, 1.1, policy)):
        assert s.converged
        assert s.tail_mass < 1e-10
        validate(s)


def test_truncation_loss_when_max_cutoff_too_small():
    with pytest.raises(TruncationLoss):
        two_mode_squeezed_vacuum(2.0, TruncationPolicy(max_cutoff=10))


def test_explicit_cutoff_flags_non_convergence():
    s = two_mode_squeezed_vacuum(1.5, cutoff=5)
    assert not s.converged


def test_negative_squeezing_rejected():
    with pytest.raises(DomainError):
        two_mode_squeezed_vacuum(-0.1)


def test_coherent_product_examples():
    s = coherent_product(0, 0)
    assert s.tensor()[0, 0] == pytest.approx(1.0)
    s = coherent_product(1, 1)
    assert expectation(s, [adag(1), a(1)]).real == pytest.approx(1.0, abs=1e-10)
    assert expectation(s, [adag(2), a(2)]).real == pytest.approx(1.0, abs=1e-10)
    assert not gees_quick_test(extract_moments(coherent_product(0.9 + 0.3j, -1.1)))


def test_ecs_plus_at_zero_is_vacuum():
    s = entangled_coherent(EcsSign.PLUS, 0.0)
    assert s.tensor()[0, 0] == pytest.approx(1.0)


def test_ecs_minus_degenerate_norm():
    with pytest.raises(DegenerateNorm):
        entangled_coherent(EcsSign.MINUS, 1e-10)


def test_ecs_orthogonality():
    p = entangled_coherent(EcsSign.PLUS, 1.0, cutoff=30)
    m = entangled_coherent(EcsSign.MINUS, 1.0, cutoff=30)
    assert abs(np.vdot(p.amplitudes, m.amplitudes)) < 1e-12


@pytest.mark.parametrize("sign", list(EcsSign))
def test_ecs_zero_mean_and_pair_eigenvalue(sign):
    alpha = 0.9 * np.exp(0.4j)
    s = entangled_coherent(sign, alpha, cutoff=35)
    m = extract_moments(s)
    assert abs(m.mean1) < 1e-12 and abs(m.mean2) < 1e-12
    pair = apply_ladder(apply_ladder(s, 2, "annihilate"), 1, "annihilate")
    assert np.max(np.abs(pair.amplitudes - alpha**2 * s.amplitudes)) < 1e-10


def test_ecs_photon_numbers():
    # |α|² N±²/N∓² at α = 1
    plus = extract_moments(entangled_coherent(EcsSign.PLUS, 1.0, cutoff=30))
    minus = extract_moments(entangled_coherent(EcsSign.MINUS, 1.0, cutoff=30))
    assert plus.n1 == pytest.approx(math.tanh(2), abs=1e-12)
    assert minus.n2 == pytest.approx(1 / math.tanh(2), abs=1e-12)


def test_random_separable_is_reproducible():
    a1 = random_separable(7, 12, 3)
    a2 = random_separable(7, 12, 3)
    assert np.array_equal(a1.amplitudes, a2.amplitudes)
    assert not np.array_equal(a1.amplitudes, random_separable(8, 12, 3).amplitudes)
    validate(a1)


def test_random_separable_single_branch_is_product():
    m = extract_moments(random_separable(3, 20, 1))
    assert abs(m.cross) < 1e-12 and abs(m.crossc) < 1e-12
    for c in C_GRID:
        assert t_expectation(m, c) >= -1e-12


@pytest.mark.parametrize("seed", range(25))
def test_random_separable_respects_bound(seed):
    m = extract_moments(random_separable(seed, 20, 4))
    assert not gees_quick_test(m)
    assert not assess(m).is_gees
    for c in C_GRID:
        du2, dv2 = uv_variances(m, c)
        assert du2 + dv2 >= EprScale(c).bound - 1e-9
