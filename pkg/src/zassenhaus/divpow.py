"""The divided power algebra O(1;n) over F_{p^m}.

An element is a length ``p**n`` integer array ``f`` over the field, ``f[a]``
being the coefficient of x^(a).  Products follow
x^(a) x^(b) = C(a+b, a) x^(a+b), with everything of degree >= p^n dropped.
"""

from __future__ import annotations

import numpy as np

from .field import GF, binom_mod_p, divpow_coeff, get_field


class NotInMaximalIdeal(ValueError):
    pass


class NotAUnit(ValueError):
    pass


class DividedPowerAlgebra:
    def __init__(self, p: int, n: int, field: GF | None = None):
        if n < 2:
            raise ValueError("n must be >= 2")
        if field is None:
            field = get_field(p, n)
        if field.p != p:
            raise ValueError("field characteristic does not match p")
        self.p = p
        self.n = n
        self.q = p ** n
        self.F = field
        q = self.q
        # shift_binom[s, c] = C(c + s, s), zero once c + s >= q
        sb = np.zeros((q, q), dtype=np.int64)
        for s in range(q):
            for c in range(q - s):
                sb[s, c] = binom_mod_p(c + s, s, p)
        self.shift_binom = sb
        a = np.arange(q)
        self._sum_index = a[:, None] + a[None, :]
        valid = self._sum_index < q
        prod_binom = np.zeros((q, q), dtype=np.int64)
        ii, jj = np.nonzero(valid)
        prod_binom[ii, jj] = sb[ii, jj]
        self.prod_binom = prod_binom
        self._sum_index = np.where(valid, self._sum_index, q)

    def __repr__(self):
        return f"O(1;{self.n}) over {self.F!r}"

    # constructors
    def zero(self) -> np.ndarray:
        return np.zeros(self.q, dtype=np.int64)

    def one(self) -> np.ndarray:
        return self.monomial(0)

    def monomial(self, a: int, c: int = 1) -> np.ndarray:
        f = self.zero()
        if a < self.q:
            f[a] = c
        return f

    def random(self, rng, in_ideal: bool = False) -> np.ndarray:
        f = rng.integers(0, self.F.order, self.q)
        if in_ideal:
            f[0] = 0
        return f

    # module-ish helpers
    def add(self, f, g):
        return self.F.add(f, g)

    def sub(self, f, g):
        return self.F.sub(f, g)

    def scale(self, c: int, f):
        return self.F.mul(c, f)

    def shift_down(self, f, s: int):
        """Apply the s-th power of the derivative (x^(a) -> x^(a-s))."""
        out = self.zero()
        if s < self.q:
            out[:self.q - s] = f[s:]
        return out

    def times_monomial(self, f, s: int, c: int = 1):
        """c x^(s) * f; works on the last axis so 2D stacks are fine."""
        q = self.q
        out = np.zeros_like(f)
        if s >= q or c == 0:
            return out
        body = self.F.mul(self.shift_binom[s, :q - s], f[..., :q - s])
        if c != 1:
            body = self.F.mul(c, body)
        out[..., s:] = body
        return out

    def _fold(self, values, index):
        """Sum field values grouped by index (index q means 'drop')."""
        F = self.F
        d = F.digits(values).reshape(-1, F.m)
        idx = np.asarray(index).reshape(-1)
        sums = np.stack([np.bincount(idx, weights=d[:, k], minlength=self.q + 1)
                         for k in range(F.m)], axis=-1)
        return F.pack(sums[:self.q].astype(np.int64))

    # operations
    def multiply(self, f, g) -> np.ndarray:
        F = self.F
        outer = F.mul(F.mul(f[:, None], g[None, :]), self.prod_binom)
        return self._fold(outer, self._sum_index)

    def derivative(self, f) -> np.ndarray:
        return self.shift_down(f, 1)

    def invert_unit(self, f) -> np.ndarray:
        """f^{-1} = c^{-1} (1 - u + u^2 - ...) where f = c (1 + u).

        u lies in the maximal ideal, whose p-th powers vanish (u^p = p! u^(p)),
        so the geometric series stops after p terms.
        """
        F = self.F
        if f[0] == 0:
            raise NotAUnit("constant term is zero")
        c_inv = F.inv(int(f[0]))
        u = F.mul(c_inv, f)
        u[0] = 0
        g = self.one()
        for _ in range(self.p - 1):
            g = F.sub(self.one(), self.multiply(u, g))
        return F.mul(c_inv, g)

    def _monomial_power_terms(self, lam: int, a: int, rmax: int):
        """(lam x^(a))^(i) for 0 <= i <= rmax as (i, coefficient, degree)."""
        F, p, q = self.F, self.p, self.q
        out = []
        for i in range(rmax + 1):
            if a * i >= q:
                break
            c = F.mul(F.pow(lam, i), divpow_coeff(a, i, p))
            out.append((i, c, a * i))
        return out

    def divided_powers(self, f, rmax: int, order=None) -> np.ndarray:
        """Stack of f^(r) for r = 0..rmax, shape (rmax + 1, q).

        Built by the sum rule (u + v)^(r) = sum_{i+j=r} u^(i) v^(j), one
        monomial of f at a time, in ascending degree unless ``order`` is given.
        """
        if f[0] != 0:
            raise NotInMaximalIdeal("divided powers need a zero constant term")
        q = self.q
        S = np.zeros((rmax + 1, q), dtype=np.int64)
        S[0, 0] = 1
        support = [int(a) for a in np.nonzero(f)[0]]
        if order is not None:
            support = [a for a in order if f[a] != 0]
        for a in support:
            new = np.zeros_like(S)
            for i, c, deg in self._monomial_power_terms(int(f[a]), a, rmax):
                if c == 0:
                    continue
                moved = self.times_monomial(S[:rmax + 1 - i], deg, c)
                new[i:] = self.F.add(new[i:], moved)
            S = new
        return S

    def divided_power(self, f, r: int, order=None) -> np.ndarray:
        return self.divided_powers(f, r, order=order)[r].copy()

    def substitute(self, f, y) -> np.ndarray:
        """f(y) = sum_a f[a] y^(a)."""
        if y[0] != 0:
            raise NotInMaximalIdeal("substituted element must lie in the maximal ideal")
        top = int(np.max(np.nonzero(f)[0])) if np.any(f) else 0
        powers = self.divided_powers(y, top)
        F = self.F
        return F.sum(F.mul(f[:top + 1, None], powers), axis=0)

    def power_table(self, y) -> np.ndarray:
        """Matrix whose column a is y^(a).

        Uses y^(p^j) from the sum rule and the axioms
        y^(a) = prod_j y^(a_j p^j) (a_j the base-p digits) and
        y^((d+1) p^v) = y^(d p^v) y^(p^v) / (d+1).
        """
        if y[0] != 0:
            raise NotInMaximalIdeal("substituted element must lie in the maximal ideal")
        F, p, q = self.F, self.p, self.q
        cols = [None] * q
        cols[0] = self.one()
        cols[1] = np.array(y, dtype=np.int64)
        for j in range(1, self.n):
            cols[p ** j] = self.divided_power(y, p ** j)
        for a in range(2, q):
            if cols[a] is not None:
                continue
            v, rest = 0, a
            while rest % p == 0:
                rest //= p
                v += 1
            d = rest % p
            low = d * p ** v
            if low == a:
                prev = cols[(d - 1) * p ** v]
                cols[a] = F.mul(F.inv(d), self.multiply(prev, cols[p ** v]))
            else:
                cols[a] = self.multiply(cols[low], cols[a - low])
        return np.stack(cols, axis=1)

    def is_zero(self, f) -> bool:
        return not np.any(f)


def divided_power_generic(coeffs, r: int, p: int, q: int, zero, one, order=None):
    """f^(r) over an arbitrary coefficient ring (e.g. dual numbers).

    ``coeffs`` is a list of ring elements indexed by degree (coeffs[0] must be
    zero).  Ring elements need ``+``, ``*`` and ``* int``; only the monomial
    rule (c x^(a))^(i) = c^i (ai)!/(i! a!^i) x^(ai) and the sum rule are used.
    """
    S = [[zero] * q for _ in range(r + 1)]
    S[0][0] = one
    support = [a for a in (order or range(q)) if coeffs[a] != zero]
    for a in support:
        if a == 0:
            raise NotInMaximalIdeal("constant term must vanish")
        new = [[zero] * q for _ in range(r + 1)]
        cpow = one
        for i in range(r + 1):
            if a * i >= q:
                break
            mc = cpow * divpow_coeff(a, i, p)
            for k in range(i, r + 1):
                src = S[k - i]
                for c in range(q - a * i):
                    if src[c] != zero:
                        b = binom_mod_p(c + a * i, c, p)
                        if b:
                            new[k][c + a * i] = new[k][c + a * i] + mc * src[c] * b
            cpow = cpow * coeffs[a]
        S = new
    return S[r]
