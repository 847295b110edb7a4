import numpy as np
import pytest

from mudomains.core_types import (
    DuplicateNodes, Lambda0OutOfRange, TargetNotInG, random_contraction,
)
from mudomains.domain312 import pi312
from mudomains.domain333 import pi333
from mudomains.schwarz import (
    membership_propagation_check, pick_matrix_psd, schwarz_necessary_312,
    schwarz_necessary_333, sup_quantity,
)
from mudomains.tetrablock import tetra_margin


def test_zero_point():
    for w in ("G1", "G2", "H1", "H2", "I1", "I2"):
        assert sup_quantity(np.zeros(7), w)[0] == 0
    assert schwarz_necessary_333(0.2, np.zeros(7)).necessary_ok
    assert schwarz_necessary_312(0.2, np.zeros(5)).necessary_ok


def test_constant_fiber_reduces_to_point_quantity():
    # only x2, x4, x6 nonzero: the X fiber is the constant triple (x2, x4, x6)
    c = np.array([0.3, 0.2j, 0.1])
    x = np.array([0, c[0], 0, c[1], 0, c[2], 0])
    expect = (abs(c[0] - np.conj(c[1]) * c[2]) + abs(c[0] * c[1] - c[2])) / (1 - abs(c[1]) ** 2)
    assert sup_quantity(x, "G1")[0] == pytest.approx(expect, abs=1e-15)
    assert tetra_margin(c) > 0


@pytest.mark.parametrize("seed", range(5))
def test_scaled_contractions_pass(seed):
    C = random_contraction(seed, 1.0)
    assert schwarz_necessary_333(0.5, pi333(0.5 * C)).necessary_ok
    assert schwarz_necessary_312(0.5, pi312(0.5 * C)).necessary_ok


def test_large_point_small_lambda_fails():
    C = random_contraction(3, 1.0)
    rep = schwarz_necessary_333(0.1, pi333(0.9 * C))
    assert not rep.necessary_ok and rep.worst[0] in {"G1", "G2", "H1", "H2", "I1", "I2"}
    assert not schwarz_necessary_312(0.1, pi312(0.9 * C)).necessary_ok


def test_errors():
    with pytest.raises(Lambda0OutOfRange):
        schwarz_necessary_333(1.0, np.zeros(7))
    with pytest.raises(TargetNotInG):
        schwarz_necessary_333(0.5, np.ones(7))
    with pytest.raises(DuplicateNodes):
        pick_matrix_psd([0.1, 0.1], [0, 0])


def test_pick_examples():
    assert pick_matrix_psd([0, 0.5], [0, 0.25])[0]
    assert not pick_matrix_psd([0, 0.5], [0, 0.75])[0]
    assert pick_matrix_psd([0.3j], [1.0])[0]
    assert not pick_matrix_psd([0.3j], [1.01])[0]


def test_sup_quantity_monotone_in_grid():
    from mudomains.core_types import DEFAULT_CONFIG
    x = pi333(0.8 * random_contraction(1, 1.0))
    v = [sup_quantity(x, "H1", DEFAULT_CONFIG.with_(disc_nr=n, disc_ntheta=4 * n))[0]
         for n in (8, 32, 128)]
    assert v[0] <= v[1] + 1e-9 and v[1] <= v[2] + 1e-9


def test_membership_propagation():
    C = random_contraction(2, 1.0)
    lam = 0.95 * np.exp(2j * np.pi * np.arange(32) / 32)
    rep = membership_propagation_check([(l, pi333(l * C)) for l in lam])
    assert rep["ok"] and rep["any_inside"]
    assert membership_propagation_check([(0.0, np.zeros(7))])["ok"]
    rep = membership_propagation_check([(0.0, np.zeros(7)), (1.0, np.ones(7))])
    assert rep["ok"] and rep["band_flags"] == [1.0]
