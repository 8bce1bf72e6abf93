"""Admissible automorphisms of O(1;n) and their action on L and L_p.

An automorphism is determined by y = Phi(x) = sum_i alpha_i x^(i) with
alpha_1 != 0 and alpha_(p^t) = 0; it sends x^(a) to y^(a).  We keep the
whole matrix of that action (column a is y^(a)) and compose by multiplying
matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .divpow import divided_power_generic
from .field import GF, binom_mod_p, divpow_coeff
from .penv import EnvElement, PEnvelope


class BadLinearPart(ValueError):
    pass


class BadPPowerCoefficient(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Automorphism:
    """Phi with Phi(x) = y; ``table`` is the matrix of Phi on O(1;n)."""

    y: np.ndarray
    table: np.ndarray = field(repr=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def alpha(self) -> np.ndarray:
        return self.y[1:]

    def __eq__(self, other):
        return isinstance(other, Automorphism) and np.array_equal(self.y, other.y)

    def __hash__(self):
        return hash(self.y.tobytes())


class DualNumber:
    """a + b t with t^2 = 0 over a finite field."""

    __slots__ = ("F", "a", "b")

    def __init__(self, F: GF, a: int = 0, b: int = 0):
        self.F, self.a, self.b = F, int(a), int(b)

    def __add__(self, other):
        F = self.F
        return DualNumber(F, F.add(self.a, other.a), F.add(self.b, other.b))

    def __mul__(self, other):
        F = self.F
        if isinstance(other, (int, np.integer)):
            c = F.from_int(int(other))
            return DualNumber(F, F.mul(self.a, c), F.mul(self.b, c))
        return DualNumber(F, F.mul(self.a, other.a),
                          F.add(F.mul(self.a, other.b), F.mul(self.b, other.a)))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, DualNumber) and (self.a, self.b) == (other.a, other.b)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"{self.a}+{self.b}t"


class AutomorphismGroup:
    """The admissible automorphisms acting on O(1;n), L and L_p."""

    def __init__(self, L: PEnvelope):
        self.L = L
        self.O, self.F = L.O, L.F
        self.p, self.n, self.q = L.p, L.n, L.q
        self.ppowers = [self.p ** t for t in range(1, self.n)]

    # construction -------------------------------------------------------
    def make(self, y, check: bool = True) -> Automorphism:
        """Validate Phi(x) = y (a length q array with y[0] = 0)."""
        y = np.array(y, dtype=np.int64)
        if y.shape != (self.q,) or y[0] != 0:
            raise BadLinearPart("Phi(x) must lie in the maximal ideal")
        if y[1] == 0:
            raise BadLinearPart("alpha_1 must be nonzero")
        bad = [k for k in self.ppowers if y[k]]
        if bad:
            raise BadPPowerCoefficient(f"alpha_{bad[0]} must vanish")
        table = self.O.divided_powers(y, self.q - 1).T.copy()
        phi = Automorphism(y, table)
        if check:
            assert self.check_admissible(phi), "substitution table is not admissible"
        return phi

    def from_alpha(self, alpha, check: bool = True) -> Automorphism:
        return self.make(np.concatenate([[0], np.asarray(alpha, dtype=np.int64)]), check)

    def identity(self) -> Automorphism:
        return self.make(self.O.monomial(1), check=False)

    def scaling(self, a: int) -> Automorphism:
        """x -> a x."""
        return self.make(self.O.monomial(1, a), check=False)

    def elementary(self, k: int, c: int) -> Automorphism:
        """x -> x + c x^(k), k >= 2.

        Column a of the table is sum_j c^j w_j(a) x^(a + j(k-1)) with
        w_j(a) = C(a - j + jk, jk) (jk)! / (j! (k!)^j), one diagonal per j.
        """
        F, q = self.F, self.q
        if k < 2:
            y = self.O.monomial(1)
            y[k] = F.add(int(y[k]), c)
            return self.make(y, check=False)
        y = self.O.monomial(1)
        y[k] = c
        if k in self.ppowers:
            raise BadPPowerCoefficient(f"alpha_{k} must vanish")
        table = np.zeros((q, q), dtype=np.int64)
        cj = 1
        for j, w in enumerate(self._elementary_weights(k)):
            a = np.arange(j, q - j * (k - 1))
            table[a + j * (k - 1), a] = F.mul(cj, w)
            cj = F.mul(cj, c)
        # 1 / y' = sum_j (-c)^j (x^(k-1))^j and (x^(a))^j = j! (x^(a))^(j)
        dy_inv = np.zeros(q, dtype=np.int64)
        minus_c, cj = F.neg(c), 1
        for j in range(q):
            if j * (k - 1) >= q:
                break
            w = math.factorial(j) * divpow_coeff(k - 1, j, self.p) % self.p
            dy_inv[j * (k - 1)] = F.mul(cj, F.from_int(w))
            cj = F.mul(cj, minus_c)
        return Automorphism(y, table, {"dy_inv": dy_inv})

    def _elementary_weights(self, k: int) -> list:
        cache = self.__dict__.setdefault("_elem_cache", {})
        if k not in cache:
            p, q = self.p, self.q
            out = []
            for j in range(q):
                if j * k >= q:
                    break
                base = divpow_coeff(k, j, p)
                out.append(np.array([base * binom_mod_p(a - j + j * k, j * k, p) % p
                                     for a in range(j, q - j * (k - 1))], dtype=np.int64))
            cache[k] = out
        return cache[k]

    def random(self, rng, density: float = 1.0) -> Automorphism:
        Fq = self.F.order
        y = rng.integers(0, Fq, self.q)
        if density < 1.0:
            y[rng.random(self.q) >= density] = 0
        y[0] = 0
        y[1] = rng.integers(1, Fq)
        y[self.ppowers] = 0
        return self.make(y, check=False)

    def check_admissible(self, phi: Automorphism, table=None) -> bool:
        """Phi(x^(p^j)) == Phi(x)^(p^j) for every 1 <= j <= n-1."""
        T = phi.table if table is None else np.asarray(table)
        if not np.array_equal(T[:, 1], phi.y):
            return False
        return all(np.array_equal(T[:, k], self.O.divided_power(phi.y, k))
                   for k in self.ppowers)

    # actions ------------------------------------------------------------
    def act_on_O(self, phi: Automorphism, f) -> np.ndarray:
        F = self.F
        return F.sum(F.mul(phi.table, np.asarray(f)[None, :]), axis=1)

    def act_on_L(self, phi: Automorphism, g) -> np.ndarray:
        """Phi(g D) = (y')^{-1} g(y) D, returned as the new coefficient."""
        O = self.O
        if "dy_inv" not in phi._cache:
            phi._cache["dy_inv"] = O.invert_unit(O.derivative(phi.y))
        return O.multiply(phi._cache["dy_inv"], self.act_on_O(phi, g))

    def act_on_Lp(self, phi: Automorphism, D: EnvElement) -> EnvElement:
        L = self.L
        out = L.element(self.act_on_L(phi, D.f))
        nz = np.nonzero(D.tail)[0]
        if nz.size:
            power = L.element(self.act_on_L(phi, self.O.one()))
            for i in range(1, int(nz[-1]) + 2):
                power = L.p_power(power, 1)
                b = int(D.tail[i - 1])
                if b:
                    out = L.add(out, L.scale(b, power))
        return out

    def act_on_Lp_by_conjugation(self, phi: Automorphism, D: EnvElement) -> EnvElement:
        """Oracle: the operator of Phi(D) is A M A^{-1} with A the table of Phi."""
        F, L = self.F, self.L
        inv = self.inverse(phi)
        M = F.matmul(F.matmul(phi.table, L.to_operator(D)), inv.table)
        return L.from_operator(M)

    # group structure ----------------------------------------------------
    def compose(self, phi1: Automorphism, phi2: Automorphism) -> Automorphism:
        """phi1 after phi2: x -> phi1(phi2(x))."""
        y = self.act_on_O(phi1, phi2.y)
        return Automorphism(y, self.F.matmul(phi1.table, phi2.table))

    def inverse(self, phi: Automorphism) -> Automorphism:
        """Solve phi(psi(x)) = x degree by degree (the table is triangular)."""
        F, T = self.F, phi.table
        psi = self.O.zero()
        target = self.O.monomial(1)
        for c in range(1, self.q):
            acc = F.sum(F.mul(T[c, 1:c], psi[1:c])) if c > 1 else 0
            psi[c] = F.div(F.sub(int(target[c]), acc), int(T[c, c]))
        return self.make(psi, check=False)

    # Lie algebra of G ---------------------------------------------------
    def lieG_indices(self) -> list[int]:
        excluded = {k - 1 for k in self.ppowers}
        return [i for i in range(self.q - 1) if i not in excluded]

    def lieG_basis(self) -> list[EnvElement]:
        """d_i for 0 <= i <= q-2 with i + 1 not a power of p."""
        return [self.L.d(i) for i in self.lieG_indices()]

    def tangent_check(self, i: int) -> bool:
        """Phi_t(x) = x + t x^(i+1) over dual numbers acts as 1 + t d_i on x^(p^j)."""
        F, O, p, q = self.F, self.O, self.p, self.q
        zero, one, t = DualNumber(F), DualNumber(F, 1), DualNumber(F, 0, 1)
        coeffs = [zero] * q
        coeffs[1] = one
        if i + 1 < q:
            coeffs[i + 1] = coeffs[i + 1] + t
        for k in self.ppowers:
            got = divided_power_generic(coeffs, k, p, q, zero, one)
            image = O.multiply(O.monomial(k - 1), O.monomial(i + 1))
            want = [DualNumber(F, int(k == c), int(image[c])) for c in range(q)]
            if got != want:
                return False
        return True
