import numpy as np
import pytest
from hypothesis import given, strategies as st

from zassenhaus.autgrp import AutomorphismGroup
from zassenhaus.normalform import BadHead, NormalForms, NOT_NILPOTENT, REGULAR, SINGULAR_DEEP
from zassenhaus.penv import PEnvelope

seeds = st.integers(0, 2 ** 32 - 1)
L = PEnvelope(5, 2)
G = AutomorphismGroup(L)
NF = NormalForms(L, G)
L1 = PEnvelope(5, 2, 1)
NF1 = NormalForms(L1)
L3 = PEnvelope(5, 3, 1)
NF3 = NormalForms(L3)


def head_element(A, rng, m):
    D = A.random(rng)
    tail = D.tail.copy()
    tail[m - 1] = 1
    tail[m:] = 0
    return A.element(D.f, tail)


def replays(A, G_, cert):
    return G_.act_on_Lp(cert.composed, cert.input) == cert.output


def test_head_and_normalization():
    D = L.add(L.partial_power(1, 3), L.d(2))
    assert NF.head(D) == (1, 3)
    monic, phi = NF.normalize_head(D)
    assert NF.head(monic) == (1, 1)
    with pytest.raises(BadHead):
        NF.head(L.d(3))


def test_reduce_top_example():
    """D^5 + x D over F_5: the first step is x -> x + x^(6)."""
    D = L1.add(L1.partial_power(1), L1.d(0))
    cert = NF1.reduce_top(D)
    i, c, phi = cert.steps[0]
    assert (i, c) == (1, 1)
    want = L1.O.monomial(1)
    want[6] = 1
    assert np.array_equal(phi.y, want)
    assert replays(L1, NF1.G, cert)
    assert not np.any(cert.output.f[1:20])
    assert cert.skipped == []


@given(seeds)
def test_reduce_top_certificates(seed):
    D = head_element(L, np.random.default_rng(seed), 1)
    cert = NF.reduce_top(D)
    assert replays(L, G, cert)
    assert not np.any(cert.output.f[1:L.q - L.p])
    assert len(cert.steps) <= L.q - L.p - 1
    assert cert.skipped == []
    assert NF.is_canonical(cert.output)


def test_reduce_top_needs_monic_tail_head():
    with pytest.raises(BadHead):
        NF.reduce_top(L.d(-1))
    with pytest.raises(BadHead):
        NF.reduce_top(L.partial_power(1, 2))


@given(seeds)
def test_reduce_top_lower_head_skips(seed):
    """Head D^5 in W(1;3): the only skipped degree is 25 - 5 = 20."""
    D = head_element(L3, np.random.default_rng(seed), 1)
    cert = NF3.reduce_top(D)
    assert cert.skipped == [20]
    assert replays(L3, NF3.G, cert)
    support = set(np.nonzero(cert.output.f)[0]) - {0}
    assert support <= {20} | set(range(L3.q - 5, L3.q))


def test_reduce_witt_example():
    D = L.add(L.d(-1), L.d(0))
    cert = NF.reduce_witt(D)
    assert replays(L, G, cert)
    assert set(np.nonzero(cert.output.f)[0]) <= {0, 4, 24}


@given(seeds)
def test_reduce_witt_sends_nilpotent_to_partial(seed):
    rng = np.random.default_rng(seed)
    E = G.act_on_Lp(G.random(rng), L.d(-1))
    D, _ = NF.normalize_head(E)
    assert NF.reduce_witt(D).output == L.d(-1)


def test_classify_examples():
    assert NF.classify(L.d(-1)).verdict == REGULAR
    assert NF.classify(L.d(0)).verdict == NOT_NILPOTENT
    assert NF.classify(L.partial_power(1)).verdict == SINGULAR_DEEP
    assert NF.classify(L.d(1)).verdict == SINGULAR_DEEP
    deep = L.add(L.partial_power(1), L.d(23, 3))
    assert NF.classify(deep).verdict == SINGULAR_DEEP


@given(seeds, st.integers(1, 24))
def test_filtered_verdict_is_unreachable(seed, a):
    """w in L_(0) with d_0-coefficient a != 0 acts on x^(k) as a k mod higher terms,
    so it is never nilpotent; hence a nilpotent D is never SingularFiltered."""
    w = L.element(L.W.random(np.random.default_rng(seed), min_degree=0))
    w.f[1] = a
    assert not L.is_nilpotent(w)
    assert NF.classify(w).verdict == NOT_NILPOTENT


@given(seeds)
def test_classification_is_G_invariant(seed):
    rng = np.random.default_rng(seed)
    D = L.random(rng)
    if rng.random() < 0.5:
        D = L.element(L.W.random(rng, min_degree=0))
    phi = G.random(rng)
    assert NF.classify(G.act_on_Lp(phi, D)).verdict == NF.classify(D).verdict


@given(seeds)
def test_regular_orbit(seed):
    rng = np.random.default_rng(seed)
    f = L.O.zero()
    f[0] = rng.integers(1, L.F.order)
    D = G.act_on_Lp(G.random(rng), L.element(f, rng.integers(0, L.F.order, 1)))
    assert NF.classify(D).verdict == REGULAR
    red = NF.reduce_regular(D)
    assert not np.any(red.output.f[1:]) and red.output.f[0]
    assert G.act_on_Lp(red.composed, D) == red.output


def test_canonical_form_is_not_unique():
    """D^5 + D + x^(23) D is canonical and nilpotent with mu_3 != 0, yet
    conjugate to the pure tail form D^5 + g D."""
    D = L1.element([1] + [0] * 22 + [1, 0], [1])
    assert L1.is_nilpotent(D) and NF1.is_canonical(D)
    assert NF1.reduce_top(D).output == D
    red = NF1.reduce_regular(D)
    assert not np.any(red.output.f[1:]) and red.output.f[0]
    assert NF1.verify_ppower_chain(D) == "b0"


def test_ppower_chain_examples():
    D = L.add(L.partial_power(1), L.d(-1, 3))
    assert NF.verify_ppower_chain(D) == "b0"
    D = L.add(L.partial_power(1), L.d(22, 2))
    assert NF.verify_ppower_chain(D) == "all-zero"
    with pytest.raises(BadHead):
        NF.verify_ppower_chain(L.add(L.partial_power(1), L.d(3)))


def test_ppower_chain_in_rank_three():
    rng = np.random.default_rng(5)
    F = L3.F
    seen = set()
    for _ in range(300):
        f = L3.O.zero()
        f[0] = rng.integers(0, 5) * (rng.random() < 0.5)
        top = L3.q - 25
        f[top:] = rng.integers(0, 5, 25) * (rng.random(25) < 0.1)
        tail = np.array([rng.integers(0, 5) * (rng.random() < 0.5), 1])
        D = L3.element(f, tail)
        if L3.is_nilpotent(D):
            seen.add(NF3.verify_ppower_chain(D))
    assert "b0" in seen and len(seen) >= 2
