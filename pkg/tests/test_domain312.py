import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import A_FIX
from mudomains.core_types import DenominatorVanishes, random_contraction
from mudomains.domain312 import (
    bidisc_fiber, denominator_root_margin, embed, eta_bridge_G, eta_bridge_Gamma, in_G_312,
    in_Gamma_312, in_Gamma_312_pfiber, p_fiber, phi_eta, pi312, psi3, retract_pair,
)
from mudomains.domain333 import in_G_333, in_Gamma_333, pi333
from mudomains.realization import g_of_A
from mudomains.tetrablock import in_G_bidisc
from oracles import pi5


def test_pi312_examples():
    assert np.array_equal(pi312(np.zeros((3, 3))), np.zeros(5))
    assert np.allclose(pi312(np.eye(3)), [1, 2, 1, 2, 1])
    assert np.allclose(pi312(A_FIX), pi5(A_FIX), atol=1e-15)
    assert np.allclose(retract_pair(pi333(A_FIX)), pi312(A_FIX), atol=1e-15)


def test_psi3_examples():
    xt = np.array([0.1, 0.2, 0.3, 0.4, 0.5])
    assert psi3(0, xt) == 0.1
    z = 0.3 - 0.4j
    assert abs(psi3(z, pi312(A_FIX)) - g_of_A(A_FIX, z, z)) < 1e-13
    deg = np.array([0.5, 0.5 * 0.4, 0.5 * 0.3, 0.4, 0.3])
    assert psi3(0.7j, deg) == pytest.approx(0.5)
    with pytest.raises(DenominatorVanishes):
        psi3(1.0, [0, 0, 0, 1, 0])


def test_root_margin():
    assert denominator_root_margin(np.zeros(5)) == 1.0
    # t^2 - 0.5 t + 0.06 has roots 0.2, 0.3
    assert denominator_root_margin([0, 0, 0, 0.5, 0.06]) == pytest.approx(0.7)
    # linear case y2 = 0: single root 1/y1 of the denominator
    assert denominator_root_margin([0, 0, 0, 2, 0]) == pytest.approx(-1.0)


def test_membership_examples():
    assert in_G_312(np.zeros(5)).inside
    assert in_Gamma_312(1j * np.array([1, 2, 2, 1, 1])).outside
    mid = (np.array([1, 1 + 1j, 1j + 1, 1j, 1j]) + np.array([-1j, 1 - 1j, -1j - 1, 1j, -1])) / 2
    assert in_Gamma_312(mid).outside
    assert in_Gamma_312([0, 0, 1, 0, 0]).in_closure
    assert not in_G_312([0, 0, 1, 0, 0]).inside


def test_witness_claims_that_fail_numerically():
    # Psi3(-1) = (2 + 2 + 1) / (1 + 1 + 1) = 5/3 at a boundary point of the disc,
    # and sup over |z| = 1 - 2^-k approaches it, so (1,2,2,1,1) is not in Gamma.
    assert psi3(-1, [1, 2, 2, 1, 1]) == pytest.approx(5 / 3)
    assert in_Gamma_312([1, 2, 2, 1, 1]).outside


def test_fibers():
    xt = np.array([0.1, 0.2, 0.3, 0.4, 0.5])
    assert np.allclose(bidisc_fiber(xt, 0), [0.4, 0.5])
    assert np.allclose(bidisc_fiber(np.zeros(5), 0.3), [0, 0])
    assert np.allclose(p_fiber(xt, 0), [0.1, 0.2, 0.1])
    assert np.allclose(p_fiber(np.zeros(5), 0.5j), [0, 0, 0])
    with pytest.raises(DenominatorVanishes):
        p_fiber([0, 0, 0, 2, 0], 1)


@given(st.integers(0, 2**32), st.floats(-np.pi, np.pi))
def test_bidisc_fiber_of_inside_points(seed, t):
    xt = pi312(random_contraction(seed, 0.9))
    assert in_G_bidisc(bidisc_fiber(xt, 0.95 * np.exp(1j * t))).inside


def test_phi_eta_and_retraction():
    x = np.arange(1, 8).astype(complex)
    assert np.array_equal(phi_eta(x, 1), [1, 8, 7, 6, 6])
    assert np.array_equal(phi_eta(np.zeros(7), 0.3j), np.zeros(5))
    assert np.array_equal(embed(np.zeros(5)), np.zeros(7))
    rng = np.random.default_rng(0)
    for _ in range(100):
        xt = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        assert np.array_equal(retract_pair(embed(xt)), xt)


@pytest.mark.parametrize("seed", range(4))
def test_eta_bridge_agrees_with_c7_test(seed):
    for scale in (1.0, 1.6):
        x = pi333(scale * random_contraction(seed, 0.9))
        a, b = in_G_333(x), eta_bridge_G(x)
        if min(abs(a.margin), abs(b.margin)) > 1e-6:
            assert a.state == b.state
        a, b = in_Gamma_333(x), eta_bridge_Gamma(x)
        if min(abs(a.margin), abs(b.margin)) > 1e-6:
            assert a.state == b.state


@pytest.mark.parametrize("seed", range(6))
def test_pfiber_gamma_equivalence(seed):
    rng = np.random.default_rng(seed)
    for xt in (pi312(random_contraction(seed, 0.95)),
               pi312(1.5 * random_contraction(seed, 0.95)),
               rng.uniform(-1, 1, 5) + 1j * rng.uniform(-1, 1, 5)):
        a, b = in_Gamma_312(xt), in_Gamma_312_pfiber(xt)
        if min(abs(a.margin), abs(b.margin)) > 1e-6:
            assert a.state == b.state
