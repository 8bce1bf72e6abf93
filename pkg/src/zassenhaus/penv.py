"""The minimal p-envelope L_p = W(1;n) + sum_i k D^(p^i).

An element is a Witt part f (standing for f D) plus a tail (b_1, ..., b_{n-1})
standing for sum b_i D^(p^i).  Everything acts on O(1;n) by derivations,
and the [p]-map is computed on those operator matrices (D^(p^n) acts as 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .divpow import DividedPowerAlgebra
from .field import get_field
from .witt import WittAlgebra


class NotInEnvelope(ValueError):
    """An operator on O(1;n) that is not the image of any element of L_p."""


@dataclass(frozen=True, eq=False)
class EnvElement:
    f: np.ndarray
    tail: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, EnvElement):
            return NotImplemented
        return np.array_equal(self.f, other.f) and np.array_equal(self.tail, other.tail)

    def __hash__(self):
        return hash((self.f.tobytes(), self.tail.tobytes()))

    def __repr__(self):
        return f"EnvElement(f={self.f.tolist()}, tail={self.tail.tolist()})"

    @property
    def is_witt(self) -> bool:
        return not np.any(self.tail)

    def is_zero(self) -> bool:
        return not (np.any(self.f) or np.any(self.tail))

    def coords(self) -> np.ndarray:
        return np.concatenate([self.f, self.tail])


class PEnvelope:
    """L_p for W(1;n) over F_{p^m} (m defaults to n, so F_{p^n} is inside)."""

    def __init__(self, p: int, n: int, m: int | None = None):
        self.F = get_field(p, n if m is None else m)
        self.O = DividedPowerAlgebra(p, n, self.F)
        self.W = WittAlgebra(self.O)
        self.p, self.n, self.q, self.m = p, n, p ** n, self.F.m
        self.dim = self.q + n - 1
        q = self.q
        # operator of f D: M[c, a] = f[c - a + 1] * C(c, a - 1)
        c = np.arange(q)[:, None]
        a = np.arange(q)[None, :]
        src = c - a + 1
        valid = (a >= 1) & (src >= 0)
        self._gather = np.where(valid, src, q)
        self._gather_coef = np.where(
            valid, self.O.shift_binom[np.clip(a - 1, 0, q - 1), np.clip(src, 0, q - 1)], 0)
        shifts = np.zeros((n - 1, q, q), dtype=np.int64)
        for i in range(1, n):
            s = p ** i
            shifts[i - 1, np.arange(q - s), np.arange(s, q)] = 1
        self._shifts = shifts

    def __repr__(self):
        return f"PEnvelope(p={self.p}, n={self.n}, m={self.m})"

    # constructors -------------------------------------------------------
    def element(self, f=None, tail=None) -> EnvElement:
        f = self.O.zero() if f is None else np.array(f, dtype=np.int64)
        t = np.zeros(self.n - 1, dtype=np.int64) if tail is None else np.array(tail, dtype=np.int64)
        if f.shape != (self.q,) or t.shape != (self.n - 1,):
            raise ValueError("wrong shape for an element of L_p")
        return EnvElement(f, t)

    def zero(self) -> EnvElement:
        return self.element()

    def d(self, i: int, c: int = 1) -> EnvElement:
        """c * d_i = c x^(i+1) D."""
        return self.element(self.F.mul(c, self.W.d(i)))

    def partial_power(self, i: int, c: int = 1) -> EnvElement:
        """c * D^(p^i); i = 0 gives the Witt element c D."""
        if i == 0:
            return self.d(-1, c)
        if not 1 <= i <= self.n - 1:
            raise IndexError(f"D^(p^{i}) is not a tail basis element")
        t = np.zeros(self.n - 1, dtype=np.int64)
        t[i - 1] = c
        return self.element(tail=t)

    def from_coords(self, v) -> EnvElement:
        v = np.asarray(v, dtype=np.int64)
        return self.element(v[:self.q], v[self.q:])

    def basis(self) -> list[EnvElement]:
        """d_{-1}, ..., d_{q-2}, then D^p, ..., D^(p^{n-1})."""
        return [self.d(i) for i in range(-1, self.q - 1)] + \
               [self.partial_power(i) for i in range(1, self.n)]

    def random(self, rng, tail: bool = True, min_degree: int = -1) -> EnvElement:
        f = self.W.random(rng, min_degree)
        t = rng.integers(0, self.F.order, self.n - 1) if tail else None
        return self.element(f, t)

    # vector space -------------------------------------------------------
    def add(self, a: EnvElement, b: EnvElement) -> EnvElement:
        F = self.F
        return EnvElement(F.add(a.f, b.f), F.add(a.tail, b.tail))

    def sub(self, a: EnvElement, b: EnvElement) -> EnvElement:
        F = self.F
        return EnvElement(F.sub(a.f, b.f), F.sub(a.tail, b.tail))

    def scale(self, c: int, a: EnvElement) -> EnvElement:
        F = self.F
        return EnvElement(F.mul(c, a.f), F.mul(c, a.tail))

    def combine(self, coeffs, elements) -> EnvElement:
        out = self.zero()
        for c, e in zip(coeffs, elements):
            if c:
                out = self.add(out, self.scale(int(c), e))
        return out

    # Lie structure ------------------------------------------------------
    def bracket(self, a: EnvElement, b: EnvElement) -> EnvElement:
        O = self.O
        f = self.W.bracket(a.f, b.f)
        for i in range(1, self.n):
            s = self.p ** i
            if a.tail[i - 1]:
                f = O.add(f, O.scale(int(a.tail[i - 1]), O.shift_down(b.f, s)))
            if b.tail[i - 1]:
                f = O.sub(f, O.scale(int(b.tail[i - 1]), O.shift_down(a.f, s)))
        return self.element(f)

    def ad_matrix(self, D: EnvElement, ambient: str = "lp") -> np.ndarray:
        """Matrix of ad D in basis coordinates; rows always span all of L_p.

        ``ambient='l'`` keeps only the columns of the Witt basis.
        """
        cols = self.q if ambient == "l" else self.dim
        basis = self.basis()[:cols]
        return np.stack([self.bracket(D, b).coords() for b in basis], axis=1)

    def centralizer(self, D: EnvElement, ambient: str = "lp") -> list[EnvElement]:
        if ambient not in ("l", "lp"):
            raise ValueError("ambient must be 'l' or 'lp'")
        kernel = linalg.nullspace(self.F, self.ad_matrix(D, ambient))
        pad = self.dim - kernel.shape[1]
        return [self.from_coords(np.concatenate([v, np.zeros(pad, dtype=np.int64)]))
                for v in kernel]

    # operators on O(1;n) ------------------------------------------------
    def to_operator(self, D: EnvElement) -> np.ndarray:
        return self.to_operator_batch(D.f[None], D.tail[None])[0]

    def to_operator_batch(self, fs, tails) -> np.ndarray:
        """Operators for a stack of elements: fs is (B, q), tails is (B, n-1)."""
        F = self.F
        fs = np.asarray(fs, dtype=np.int64)
        tails = np.asarray(tails, dtype=np.int64)
        fext = np.concatenate([fs, np.zeros((fs.shape[0], 1), dtype=np.int64)], axis=1)
        M = F.mul(fext[:, self._gather], self._gather_coef)
        for i in range(self.n - 1):
            if np.any(tails[:, i]):
                M = F.add(M, F.mul(tails[:, i, None, None], self._shifts[i]))
        return M

    def from_operator(self, M) -> EnvElement:
        """Read the element off an operator: f = M(x), tails from the first row."""
        M = np.asarray(M, dtype=np.int64)
        f = M[:, 1].copy()
        R = self.F.sub(M, self.to_operator(self.element(f)))
        tail = np.array([R[0, self.p ** i] for i in range(1, self.n)], dtype=np.int64)
        D = self.element(f, tail)
        if not np.array_equal(self.to_operator(D), M):
            raise NotInEnvelope("operator is not a derivation from L_p")
        return D

    def from_operator_solve(self, M) -> EnvElement:
        """Same as from_operator, by a linear solve against the basis operators."""
        A = np.stack([self.to_operator(b).reshape(-1) for b in self.basis()], axis=1)
        try:
            coords = linalg.solve(self.F, A, np.asarray(M, dtype=np.int64).reshape(-1))
        except linalg.NoSolution as exc:
            raise NotInEnvelope(str(exc)) from None
        return self.from_coords(coords)

    # restricted structure -----------------------------------------------
    def p_power(self, D: EnvElement, k: int = 1) -> EnvElement:
        """D^[p^k]."""
        if k == 0:
            return D
        if not np.any(D.tail):
            # (u D)^p = u^p D^p + (u D)^{p-1}(u) D, and u^p = u(0)^p in O(1;n)
            O, F = self.O, self.F
            g = D.f
            for _ in range(self.p - 1):
                g = O.multiply(D.f, O.derivative(g))
            tail = np.zeros(self.n - 1, dtype=np.int64)
            if self.n > 1:
                tail[0] = F.pow(int(D.f[0]), self.p)
            D, k = self.element(g, tail), k - 1
            if k == 0:
                return D
        return self.from_operator(linalg.matrix_p_power(self.F, self.to_operator(D), k))

    def p_power_via_ad(self, D: EnvElement) -> EnvElement:
        """D^[p] computed inside Der(L): the element whose ad on L is (ad D)^p."""
        q = self.q
        target = linalg.matpow(self.F, self.ad_matrix(D, "l")[:q], self.p)
        A = np.stack([self.ad_matrix(b, "l")[:q].reshape(-1) for b in self.basis()], axis=1)
        return self.from_coords(linalg.solve(self.F, A, target.reshape(-1)))

    def is_nilpotent(self, D: EnvElement) -> bool:
        return linalg.is_zero(linalg.matrix_p_power(self.F, self.to_operator(D), self.n))

    def jacobson_si(self, D1: EnvElement, D2: EnvElement) -> list[EnvElement]:
        """s_1..s_{p-1} with ad(t D1 + D2)^{p-1}(D1) = sum i s_i t^{i-1}."""
        p, F = self.p, self.F
        poly = [D1]
        for _ in range(p - 1):
            new = [self.zero() for _ in range(len(poly) + 1)]
            for k, c in enumerate(poly):
                new[k] = self.add(new[k], self.bracket(D2, c))
                new[k + 1] = self.add(new[k + 1], self.bracket(D1, c))
            poly = new
        return [self.scale(F.inv(F.from_int(i)), poly[i - 1]) for i in range(1, p)]

    def filtration_degree(self, D: EnvElement):
        """Largest i with D in L_(i); -1 when D has a tail; None for zero."""
        if np.any(D.tail):
            return -1
        return self.W.filtration_degree(D.f)

    def in_filtration(self, D: EnvElement, i: int) -> bool:
        return D.is_witt and self.W.in_filtration(D.f, i)
