import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mudomains.core_types import DenominatorVanishes, State
from mudomains.tetrablock import (
    bidisc_to_tetra, in_bGamma_tetra, in_G_bidisc, in_G_tetra, in_Gamma_bidisc,
    in_Gamma_tetra, psi, tetra_margin,
)
from oracles import ginibre, tetra_in_closed


def test_origin_inside_margin_one():
    v = in_G_tetra([0, 0, 0])
    assert v.inside and v.margin == 1.0


def test_frozen_margin():
    # both variants by hand: 0.91 - 0.195 = 0.715 and 0.96 - 0.30 = 0.66
    assert tetra_margin([0.2, 0.3, 0.05]) == pytest.approx(0.66, abs=1e-15)


def test_identity_image_is_boundary():
    assert in_Gamma_tetra([1, 1, 1]).state is State.BOUNDARY_BAND
    assert not in_G_tetra([1, 1, 1]).inside


def test_outside_point():
    assert in_Gamma_tetra([2, 0, 0]).outside


def test_psi_and_its_singularity():
    assert psi(0, [0.3, 0.2, 0.1]) == 0.3
    with pytest.raises(DenominatorVanishes):
        psi(2.0, [0, 0.5, 0])


@given(st.integers(0, 2**32), st.floats(0.05, 1.3))
def test_margin_sign_matches_circle_oracle(seed, scale):
    rng = np.random.default_rng(seed)
    A = ginibre(rng, 2)
    A = scale * A / np.linalg.norm(A, 2)
    c = np.array([A[0, 0], A[1, 1], np.linalg.det(A)])
    m = tetra_margin(c)
    if abs(m) > 1e-6:
        assert (m > 0) == tetra_in_closed(c)


@given(st.integers(0, 2**32))
def test_contraction_images_inside(seed):
    rng = np.random.default_rng(seed)
    A = ginibre(rng, 2)
    A = 0.99 * A / np.linalg.norm(A, 2)
    assert in_Gamma_tetra([A[0, 0], A[1, 1], np.linalg.det(A)]).in_closure


def test_bgamma_of_unitary_images():
    rng = np.random.default_rng(3)
    for _ in range(20):
        Q, _ = np.linalg.qr(ginibre(rng, 2))
        v = in_bGamma_tetra([Q[0, 0], Q[1, 1], np.linalg.det(Q)])
        assert v.inside and v.margin > -1e-12
    assert in_bGamma_tetra([0, 0, 0]).outside


def test_bidisc_embedding():
    assert np.array_equal(bidisc_to_tetra([2, 1]), np.array([1, 1, 1]))
    assert in_G_bidisc([0.5, 0.06]).inside          # roots 0.2 and 0.3
    assert in_Gamma_bidisc([2, 1]).state is State.BOUNDARY_BAND
    assert in_Gamma_bidisc([2.5, 1]).outside         # roots 2 and 0.5
