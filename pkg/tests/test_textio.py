import numpy as np
import pytest
from hypothesis import given, strategies as st

from zassenhaus.autgrp import AutomorphismGroup
from zassenhaus.penv import PEnvelope
from zassenhaus.textio import (ParseError, automorphism_from_json, automorphism_to_json,
                               env_from_json, env_to_json, format_divpow, format_env,
                               parse_divpow, parse_env, parse_scalar)

L = PEnvelope(5, 2)
G = AutomorphismGroup(L)
seeds = st.integers(0, 2 ** 32 - 1)


def test_parse_examples():
    assert parse_env(L, "1*x^(1)*D") == L.d(0)
    assert parse_env(L, " 1 * D^p^0 + 3*D^p^1 ") == L.add(L.d(-1), L.partial_power(1, 3))
    assert parse_env(L, "2,1*x^(3)*D") == L.d(2, L.F.element([2, 1]))
    assert parse_env(L, "0").is_zero() and parse_env(L, "").is_zero()
    assert parse_env(L, "1*D^p^2").is_zero()        # D^(p^n) acts as zero
    assert parse_env(L, "1*x^(2)*D + 4*x^(2)*D").is_zero()
    assert np.array_equal(parse_divpow(L.O, "3*x^(0) + 1*x^(7)"),
                          L.O.add(L.O.monomial(0, 3), L.O.monomial(7)))


@pytest.mark.parametrize("bad", ["x^(1)*D", "1*x^(25)*D", "1*x^(1)", "7*x^(1)*D", "1*y", "1*x^(1)*D +"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_env(L, bad)


def test_divpow_rejects_derivations():
    with pytest.raises(ParseError):
        parse_divpow(L.O, "1*x^(1)*D")


def test_scalar_digits():
    assert parse_scalar(L.F, "2,1") == 2 + 5
    with pytest.raises(ParseError):
        parse_scalar(L.F, "5")


@given(seeds)
def test_text_round_trip(seed):
    D = L.random(np.random.default_rng(seed))
    assert parse_env(L, format_env(L, D)) == D
    f = L.O.random(np.random.default_rng(seed))
    assert np.array_equal(parse_divpow(L.O, format_divpow(L.F, f)), f)


@given(seeds)
def test_json_round_trip(seed):
    rng = np.random.default_rng(seed)
    D = L.random(rng)
    assert env_from_json(L, env_to_json(L, D)) == D
    phi = G.random(rng)
    assert automorphism_from_json(G, automorphism_to_json(L.F, phi)) == phi


def test_json_config_mismatch():
    data = env_to_json(L, L.d(0))
    with pytest.raises(ParseError):
        env_from_json(PEnvelope(5, 2, 1), data)
