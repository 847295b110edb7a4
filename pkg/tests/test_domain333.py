import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import A_FIX, MU_A_FIX, ONES7
from mudomains.core_types import (
    DenominatorVanishes, FiberBaseOutside, State, conjugate_by, random_contraction,
)
from mudomains.domain333 import (
    PERMUTATIONS, fiber, find_contractive_preimage, in_G_333, in_G_333_fiberwise,
    in_Gamma_333, is_degenerate, mu_E333, permute, pi333, psi_i, r_poly, rpoly_zero_search,
    scale_for_radius, starlike_scale, sup_psi_torus,
)
from mudomains.realization import f_of_A, g_of_A
from oracles import brute_sup_psi1, det_resolvent, mu_by_phases, pi7


def test_pi333_examples():
    assert np.array_equal(pi333(np.zeros((3, 3))), np.zeros(7))
    assert np.array_equal(pi333(np.eye(3)), ONES7)
    assert np.allclose(pi333(0.5 * np.eye(3)), [.5, .5, .25, .5, .25, .25, .125])
    assert np.allclose(pi333(A_FIX), pi7(A_FIX), atol=1e-15)


def test_r_poly_examples(a_fix):
    assert r_poly(np.zeros(7), (0.3, 0.2, 0.1)) == 1
    assert r_poly(ONES7, (1, 1, 1)) == 0
    z = (0.3 + 0.4j, -0.7, 0.1j)
    assert abs(r_poly(pi333(a_fix), z) - det_resolvent(a_fix, z)) < 1e-12


def test_fiber_examples(a_fix):
    x = np.arange(1, 8) / 10
    assert np.allclose(fiber(x, "X", 0), x[[1, 3, 5]])
    assert np.allclose(fiber(x, "Y", 0), x[[0, 3, 4]])
    assert np.allclose(fiber(x, "Z", 0), x[[0, 1, 2]])
    assert np.array_equal(fiber(np.zeros(7), "Y", 0.5), np.zeros(3))
    z3 = 0.4 - 0.5j
    F = f_of_A(a_fix, z3)
    assert np.allclose(fiber(pi333(a_fix), "Z", z3), [F[0, 0], F[1, 1], np.linalg.det(F)])
    with pytest.raises(DenominatorVanishes):
        fiber([2, 0, 0, 0, 0, 0, 0], "X", 0.5)


def test_psi_examples(a_fix):
    x = np.arange(1, 8) / 10
    assert psi_i(1, (0, 0), x) == x[0]
    assert psi_i(2, (0, 0), x) == x[1]
    assert psi_i(3, (0, 0), x) == x[3]
    deg = np.array([0.4, 0.3, 0.12, 0.5, 0.2, 0.1, 0.04])   # x3=x2x1, x5=x4x1, x7=x6x1
    assert is_degenerate(deg, 1)
    for z in [(0.3, 0.9j), (-0.5, 0.5)]:
        assert psi_i(1, z, deg) == pytest.approx(0.4, abs=1e-15)
    assert abs(psi_i(1, (0.2j, -0.6), pi333(a_fix)) - g_of_A(a_fix, 0.2j, -0.6)) < 1e-13


def test_sup_psi_torus_against_brute_force():
    x = pi333(A_FIX)
    brute = brute_sup_psi1(x, 2048)          # 0.6420545844187948
    sup, _ = sup_psi_torus(1, x)
    assert brute - 1e-12 <= sup <= brute + 1e-6
    assert sup_psi_torus(1, np.zeros(7))[0] == 0
    assert sup_psi_torus(1, pi333(0.5 * np.eye(3)))[0] == pytest.approx(0.5)
    with pytest.raises(FiberBaseOutside):
        sup_psi_torus(1, [0, 2, 0, 0, 0, 0, 0])


def test_sup_monotone_in_grid_without_refinement():
    from mudomains.core_types import DEFAULT_CONFIG
    x = pi333(A_FIX)
    vals = [sup_psi_torus(1, x, DEFAULT_CONFIG.with_(torus_n=n, refine_iters=40))[0]
            for n in (16, 64, 256)]
    assert vals[0] <= vals[1] + 1e-9 <= vals[2] + 2e-9


def test_membership_examples():
    assert in_G_333(np.zeros(7)).inside and in_G_333(np.zeros(7)).margin == 1.0
    assert in_G_333(ONES7).state is State.BOUNDARY_BAND
    assert in_Gamma_333(ONES7).in_closure
    assert in_Gamma_333(1j * ONES7).outside
    mid = (np.array([1, 1j, 1j, 1, 1, 1j, 1j]) + np.array([-1j, 1, -1j, -1j, -1, 1j, 1])) / 2
    assert in_Gamma_333(mid).outside
    assert in_G_333_fiberwise([0, 0, 0, 0, 0, 0, 2], "Z").outside
    for w in "XYZ":
        assert in_G_333_fiberwise(pi333(0.5 * np.eye(3)), w).inside


@pytest.mark.parametrize("seed", range(5))
def test_contraction_images_inside(seed):
    x = pi333(random_contraction(seed, 0.9))
    assert in_G_333(x).inside


def test_permutations():
    x = np.arange(1, 8).astype(complex)
    assert np.array_equal(permute(x, "P23"), [1, 4, 5, 2, 3, 6, 7])
    assert np.array_equal(permute(permute(x, "P12"), "P12"), x)
    assert np.array_equal(permute(permute(x, "P13"), "P13"), x)
    assert np.array_equal(permute(permute(permute(x, "C1"), "C1"), "C1"), x)
    assert np.array_equal(permute(np.zeros(7), "C2"), np.zeros(7))


@pytest.mark.parametrize("name", sorted(PERMUTATIONS))
def test_permutation_is_a_variable_relabeling(name):
    # R_{perm(x)}(z) = R_x(sigma z) for the matching variable permutation
    rng = np.random.default_rng(1)
    x = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    px = permute(x, name)
    values = {r_poly(x, z[list(s)]) for s in
              [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]}
    assert any(abs(r_poly(px, z) - v) < 1e-12 for v in values)


def test_scale_for_radius():
    assert np.array_equal(scale_for_radius(ONES7, 1), ONES7)
    assert np.array_equal(scale_for_radius(ONES7, 0), np.zeros(7))
    assert np.allclose(scale_for_radius(ONES7, 0.5), [.5, .5, .25, .5, .25, .25, .125])
    assert np.allclose(scale_for_radius(pi333(A_FIX), 0.7), pi333(0.7 * A_FIX))


def test_starlike_scale():
    x = np.arange(1, 8).astype(complex)
    assert np.array_equal(starlike_scale(x, 0, 1), [1, 0, 0, 0, 0, 0, 0])
    assert np.allclose(starlike_scale(ONES7, 0.5, 1), [1, .5, .5, .5, .5, .5, .5])
    assert starlike_scale(x, 0.5, 4)[3] == 4


def test_mu_examples():
    r = mu_E333(np.zeros((3, 3)))
    assert r.mu == 0.0 and r.degenerate
    assert mu_E333(np.eye(3)).mu == pytest.approx(1.0, abs=1e-6)
    assert mu_E333(np.diag([2, 0, 0])).mu == pytest.approx(2.0, abs=1e-6)
    r = mu_E333(A_FIX)
    assert r.mu == pytest.approx(MU_A_FIX, abs=1e-8)
    assert abs(r.mu * r.witness_r - 1) < 1e-9


def test_mu_frozen_value_matches_phase_oracle():
    assert mu_by_phases(A_FIX) == pytest.approx(MU_A_FIX, abs=1e-9)


@pytest.mark.parametrize("which", ["J1J1", "J1J2", "J1tJ2t"])
def test_mu_conjugation_invariance(which):
    A = random_contraction(4, 1.0) * 1.3
    assert abs(mu_E333(A).mu - mu_E333(conjugate_by(A, which)).mu) < 1e-6


def test_rpoly_zero_search_finds_boundary_and_exterior_zeros():
    assert rpoly_zero_search(ONES7)["found"]
    assert rpoly_zero_search([0, 0, 0, 0, 0, 0, 2])["found"]
    assert not rpoly_zero_search(pi333(0.5 * np.eye(3)))["found"]


def test_contractive_preimage_search_on_inside_point():
    found, A, res = find_contractive_preimage(pi333(0.5 * A_FIX), seed=0)
    assert found and res < 1e-10 and np.linalg.norm(A, 2) < 1


@given(st.integers(0, 2**32), st.floats(0.1, 1.0))
def test_determinant_bridge(seed, bound):
    rng = np.random.default_rng(seed)
    A = random_contraction(seed, bound) * 2
    z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert abs(r_poly(pi333(A), z) - det_resolvent(A, z)) < 1e-12 * max(1, np.abs(z).max() ** 3 * 8)
