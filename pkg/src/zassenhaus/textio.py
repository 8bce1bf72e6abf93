"""Text and JSON forms of field scalars, O(1;n) elements and elements of L_p.

Grammar (whitespace is ignored)::

    element  := '0' | term ('+' term)*
    term     := scalar '*x^(' int ')'          in O(1;n)
              | scalar '*x^(' int ')*D'        Witt term  c x^(i) D
              | scalar '*D^p^' int             tail term  c D^(p^i)
    scalar   := digit (',' digit)*             base-p digits, lowest first

so ``2,1*x^(3)*D`` is (2 + t) x^(3) D with t the field generator.
"""

from __future__ import annotations

import re

import numpy as np

from .autgrp import Automorphism, AutomorphismGroup
from .divpow import DividedPowerAlgebra
from .field import GF
from .penv import EnvElement, PEnvelope

_TERM = re.compile(
    r"^(?P<s>\d+(?:,\d+)*)\*(?:x\^\((?P<i>\d+)\)(?P<d>\*D)?|D\^p\^(?P<t>\d+))$")


class ParseError(ValueError):
    pass


def parse_scalar(F: GF, text: str) -> int:
    digits = [int(d) for d in text.split(",")]
    if any(d >= F.p for d in digits):
        raise ParseError(f"digit out of range in scalar {text!r}")
    return F.element(digits)


def format_scalar(F: GF, a: int) -> str:
    d = F.scalar_digits(a)
    while len(d) > 1 and d[-1] == 0:
        d.pop()
    return ",".join(map(str, d))


def _terms(text: str):
    s = re.sub(r"\s+", "", text)
    if s in ("", "0"):
        return []
    out = []
    for chunk in s.split("+"):
        m = _TERM.match(chunk)
        if not m:
            raise ParseError(f"cannot parse term {chunk!r}")
        out.append(m)
    return out


def parse_divpow(O: DividedPowerAlgebra, text: str) -> np.ndarray:
    F = O.F
    f = O.zero()
    for m in _terms(text):
        if m["i"] is None or m["d"]:
            raise ParseError(f"{m.string!r} is not a term of O(1;n)")
        i = int(m["i"])
        if i >= O.q:
            raise ParseError(f"degree {i} exceeds p^n - 1")
        f[i] = F.add(int(f[i]), parse_scalar(F, m["s"]))
    return f


def parse_env(L: PEnvelope, text: str) -> EnvElement:
    F = L.F
    f = L.O.zero()
    tail = np.zeros(L.n - 1, dtype=np.int64)
    for m in _terms(text):
        c = parse_scalar(F, m["s"])
        if m["t"] is not None:
            t = int(m["t"])
            if t == 0:
                f[0] = F.add(int(f[0]), c)
            elif t <= L.n - 1:
                tail[t - 1] = F.add(int(tail[t - 1]), c)
            # D^(p^t) with t >= n acts as zero
            continue
        if not m["d"]:
            raise ParseError(f"{m.string!r} is missing the trailing *D")
        i = int(m["i"])
        if i >= L.q:
            raise ParseError(f"degree {i} exceeds p^n - 1")
        f[i] = F.add(int(f[i]), c)
    return L.element(f, tail)


def format_divpow(F: GF, f, suffix: str = "") -> str:
    terms = [f"{format_scalar(F, int(c))}*x^({i}){suffix}" for i, c in enumerate(f) if c]
    return " + ".join(terms) if terms else "0"


def format_env(L: PEnvelope, D: EnvElement) -> str:
    F = L.F
    terms = [f"{format_scalar(F, int(c))}*x^({i})*D" for i, c in enumerate(D.f) if c]
    terms += [f"{format_scalar(F, int(c))}*D^p^{i + 1}" for i, c in enumerate(D.tail) if c]
    return " + ".join(terms) if terms else "0"


# JSON ---------------------------------------------------------------------

def scalars_to_json(F: GF, arr) -> list:
    return [F.scalar_digits(int(a)) for a in np.asarray(arr).reshape(-1)]


def scalars_from_json(F: GF, data) -> np.ndarray:
    return np.array([F.element(d) for d in data], dtype=np.int64)


def env_to_json(L: PEnvelope, D: EnvElement) -> dict:
    return {"p": L.p, "n": L.n, "m": L.m,
            "f": scalars_to_json(L.F, D.f), "tail": scalars_to_json(L.F, D.tail),
            "text": format_env(L, D)}


def env_from_json(L: PEnvelope, data: dict) -> EnvElement:
    if (data["p"], data["n"], data["m"]) != (L.p, L.n, L.m):
        raise ParseError("element was written for a different (p, n, m)")
    return L.element(scalars_from_json(L.F, data["f"]), scalars_from_json(L.F, data["tail"]))


def automorphism_to_json(F: GF, phi: Automorphism) -> dict:
    return {"alpha": scalars_to_json(F, phi.alpha),
            "text": format_divpow(F, phi.y)}


def automorphism_from_json(G: AutomorphismGroup, data: dict) -> Automorphism:
    return G.from_alpha(scalars_from_json(G.F, data["alpha"]))


def certificate_to_json(L: PEnvelope, cert) -> dict:
    F = L.F
    return {
        "head": cert.head,
        "input": env_to_json(L, cert.input),
        "steps": [{"degree": i, "coefficient": F.scalar_digits(c),
                   "phi": automorphism_to_json(F, phi)} for i, c, phi in cert.steps],
        "skipped": list(cert.skipped),
        "output": env_to_json(L, cert.output),
        "composed": automorphism_to_json(F, cert.composed),
    }
