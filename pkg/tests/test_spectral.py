import numpy as np
import pytest

from zassenhaus import linalg
from zassenhaus.field import FieldError
from zassenhaus.penv import PEnvelope
from zassenhaus.spectral import Spectral


@pytest.fixture(scope="module")
def setup():
    L = PEnvelope(5, 2)
    S = Spectral(L)
    h = S.find_regular_toral()
    eb = S.build_e_basis(h)
    sd = S.sigma(eb)
    return L, S, eb, sd


def test_needs_Fq_inside_the_field():
    with pytest.raises(FieldError):
        Spectral(PEnvelope(5, 2, 1))


def test_regular_toral(setup):
    L, S, eb, _ = setup
    h = L.element(eb.h)
    assert L.filtration_degree(h) == -1
    assert S.has_full_spectrum(eb.h)
    # exhaustive oracle: h is the first candidate with spectrum F_q
    first = next(f for f in S.candidates() if S.has_full_spectrum(f))
    assert np.array_equal(first, eb.h)


def test_e_basis(setup):
    L, S, eb, _ = setup
    F = L.F
    assert S.check_e_basis(eb)
    for b in eb.elements:
        assert np.array_equal(L.W.bracket(eb.e[0], eb.e[b]), F.mul(b, eb.e[b]))
    assert linalg.rank(F, eb.matrix()) == L.q


def test_ad_e0_has_q_eigenspaces(setup):
    L, S, eb, _ = setup
    spaces = linalg.eigen_split(L.F, S.ad_on_L(eb.e[0]), S.Fq)
    assert len(spaces) == L.q and all(len(v) == 1 for v in spaces.values())


def test_sigma(setup):
    L, S, eb, sd = setup
    q = L.q
    assert S.sigma_is_automorphism(sd)
    assert S.sigma_order_ok(sd)
    assert S.sigma_filtration_scalars(sd)
    assert sd.multiplicities[q - 2] == 2
    assert all(sd.multiplicities[k] == 1 for k in range(q - 2))
    assert sum(sd.multiplicities.values()) == q


def test_eigenspace_of_xi_inverse(setup):
    """L[-1] = span{e_0, v} with v in L_(q-2) = k x^(q-1) D."""
    L, S, eb, sd = setup
    F = L.F
    space = sd.eigenspaces[L.q - 2]
    top = L.d(L.q - 2).f
    assert linalg.rank(F, np.concatenate([space, [eb.e[0], top]])) == 2


def test_toral_u(setup):
    L, S, eb, sd = setup
    assert sd.multiplicities[0] == 1
    u = S.toral_u(sd)
    assert L.p_power(u) == u
    assert L.filtration_degree(u) == 0


def test_torus(setup):
    L, S, eb, sd = setup
    V = S.v_subspace(eb, S.toral_u(sd))
    assert len(V.basis) == L.n + 1
    assert S.torus_is_semisimple(V)


def test_sampled_sweep(setup):
    L, S, eb, sd = setup
    V = S.v_subspace(eb, S.toral_u(sd))
    grid = S.grid()
    assert len(grid) == L.q ** (L.n + 1) - 1
    rows = grid[np.random.default_rng(0).choice(len(grid), 1500, replace=False)]
    stats = S.check_V_intersection(V, rows, batch=500)
    assert stats.tested == 1500 and stats.passed
    assert stats.singular == 0 and stats.head_exclusion_failures == 0


def test_sweep_flags_a_singular_point():
    """The counters do see N_sing: D^p sits in L_(0) and is nilpotent."""
    from zassenhaus.spectral import VSubspace
    L = PEnvelope(5, 2)
    S = Spectral(L)
    V = VSubspace([L.partial_power(1), L.d(-1)])
    stats = S.check_V_intersection(V, np.array([[1, 0], [0, 1]]))
    assert stats.singular == 1 and stats.counterexamples == [[1, 0]]
    assert not stats.passed


def test_tangent_dimensions():
    from zassenhaus.spectral import tangent_dimensions
    L = PEnvelope(5, 2)
    dims = tangent_dimensions(L, L.d(-1))
    assert dims == {"image": 23, "total": 24, "x_cap_lieg": 0}
    assert Spectral(L).tangent_dimension(L.add(L.d(-1), L.partial_power(1, 3))) == 24
