"""Finite fields F_{p^m} with table-driven arithmetic, plus modular binomials.

Elements are plain integers ``0 <= a < p**m``.  The base-p digits of ``a``
are the coefficients of the polynomial basis ``1, t, ..., t^(m-1)`` modulo a
fixed irreducible polynomial, so ``a < p`` are exactly the prime-field
elements.  All operations accept numpy integer arrays as well as scalars.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import product

import numpy as np

MAX_TABLE_ORDER = 4096


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


# -- polynomials over F_p, coefficient lists, lowest degree first -------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _trim(a)
    return a


def is_irreducible(poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


def first_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree m.

    Candidates x^m + c_{m-1} x^{m-1} + ... + c_0 are ordered by the integer
    sum c_i p^i, i.e. by the same packing used for field elements.
    """
    for k in range(p ** m):
        low = [(k // p ** i) % p for i in range(m)]
        if is_irreducible(low + [1], p):
            return tuple(low + [1])
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")


# -- binomials ----------------------------------------------------------------

def binom_mod_p(a: int, b: int, p: int) -> int:
    """C(a, b) mod p by Lucas' theorem."""
    if b < 0 or b > a:
        return 0
    result = 1
    while a or b:
        ai, bi = a % p, b % p
        if bi > ai:
            return 0
        result = result * math.comb(ai, bi) % p
        a //= p
        b //= p
    return result


@lru_cache(maxsize=None)
def divpow_coeff(a: int, r: int, p: int) -> int:
    """(a r)! / (r! (a!)^r) mod p, the coefficient in (x^(a))^(r)."""
    num = math.factorial(a * r)
    den = math.factorial(r) * math.factorial(a) ** r
    quot, rem = divmod(num, den)
    assert rem == 0, (a, r)
    return quot % p


# -- the field ----------------------------------------------------------------

class GF:
    """The field F_{p^m}.

    >>> F = GF(5, 2)
    >>> F.mul(F.inv(7), 7)
    1
    """

    def __init__(self, p: int, m: int = 1, modulus=None):
        if not is_prime(p) or p <= 3:
            raise FieldError(f"characteristic must be a prime > 3, got {p}")
        if m < 1:
            raise FieldError("extension degree must be >= 1")
        order = p ** m
        if order > MAX_TABLE_ORDER:
            raise FieldError(f"F_{p}^{m} too large for table arithmetic")
        if modulus is None:
            modulus = first_irreducible(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1 or not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is not monic irreducible of degree {m}")
        self.p = p
        self.m = m
        self.order = order
        self.modulus = modulus
        self._pw = p ** np.arange(m, dtype=np.int64)
        self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.m, self.modulus) == (
            other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __reduce__(self):
        return (GF, (self.p, self.m, self.modulus))

    # digits <-> packed integers
    def digits(self, a) -> np.ndarray:
        """Base-p digits along a new trailing axis."""
        a = np.asarray(a, dtype=np.int64)
        table = self.__dict__.get("_dtab")
        if table is not None:
            return table[a]
        return (a[..., None] // self._pw) % self.p

    def pack(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=np.int64) % self.p
        return d @ self._pw

    def _build_tables(self):
        p, m, Q = self.p, self.m, self.order
        dg = self.digits(np.arange(Q))
        self._dtab = dg
        self._add = self.pack(dg[:, None, :] + dg[None, :, :])
        self._neg = self.pack(-dg)
        # t^k reduced, for k < 2m - 1; used by matmul
        red = np.array([self._reduce_monomial(k) for k in range(2 * m - 1)])
        self._red = red

        def mul_digits(x, y):
            acc = np.zeros(2 * m - 1, dtype=np.int64)
            for i in range(m):
                acc[i:i + m] += x[i] * y
            return (acc @ red) % p

        # a primitive element: first one of order Q - 1
        exp = None
        for g in range(1, Q):
            seq = np.zeros(Q - 1, dtype=np.int64)
            cur = np.zeros(m, dtype=np.int64)
            cur[0] = 1
            gd = dg[g]
            ok = True
            for k in range(Q - 1):
                val = int(cur @ self._pw)
                if k > 0 and val == 1:
                    ok = False
                    break
                seq[k] = val
                cur = mul_digits(cur, gd)
            if ok:
                exp = seq
                self.primitive = g
                break
        log = np.zeros(Q, dtype=np.int64)
        log[exp] = np.arange(Q - 1)
        self._exp = exp
        self._log = log
        la = log[:, None] + log[None, :]
        mul = exp[la % (Q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        self._mul = mul
        inv = np.zeros(Q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (Q - 1)]
        self._inv = inv

    def _reduce_monomial(self, k):
        r = _poly_mod([0] * k + [1], list(self.modulus), self.p)
        return np.array(r + [0] * (self.m - len(r)), dtype=np.int64)

    # elementwise arithmetic (scalars or arrays)
    def _out(self, r):
        return int(r) if np.ndim(r) == 0 else r

    def add(self, a, b):
        return self._out(self._add[a, b])

    def sub(self, a, b):
        return self._out(self._add[a, self._neg[b]])

    def neg(self, a):
        return self._out(self._neg[a])

    def mul(self, a, b):
        return self._out(self._mul[a, b])

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self._out(self._inv[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return self._out(np.ones_like(a))
        Q = self.order
        if e < 0:
            a = self._inv[a] if np.all(a != 0) else self.inv(a)
            e = -e
        r = self._exp[(self._log[a] * (e % (Q - 1))) % (Q - 1)]
        r = np.where(a == 0, 0, r)
        return self._out(r)

    def frobenius(self, a, k: int = 1):
        return self.pow(a, self.p ** (k % self.m))

    def frobenius_inv(self, a, k: int = 1):
        return self.pow(a, self.p ** ((-k) % self.m))

    def from_int(self, k):
        """Image of an integer in the prime field."""
        return self._out(np.asarray(k, dtype=np.int64) % self.p)

    def sum(self, a, axis=None):
        d = self.digits(a)
        if axis is None:
            s = d.reshape(-1, self.m).sum(axis=0)
        else:
            s = d.sum(axis=axis if axis >= 0 else axis - 1)
        return self._out(self.pack(s))

    def scalar_digits(self, a: int) -> list[int]:
        return [int(d) for d in self.digits(a)]

    def element(self, digits) -> int:
        digits = list(digits)
        if len(digits) > self.m:
            raise FieldError(f"too many digits for {self!r}: {digits}")
        return int(self.pack(digits + [0] * (self.m - len(digits))))

    def order_of(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        return (self.order - 1) // math.gcd(int(self._log[a]), self.order - 1)

    def subfield(self, d: int) -> np.ndarray:
        """The elements of the subfield F_{p^d}, in increasing packed order."""
        if self.m % d:
            raise FieldError(f"F_{self.p}^{d} is not a subfield of {self!r}")
        allel = np.arange(self.order)
        return allel[self.pow(allel, self.p ** d) == allel]

    def subfield_generator(self, d: int) -> int:
        """First (in packed order) generator of the multiplicative group of F_{p^d}."""
        target = self.p ** d - 1
        for a in self.subfield(d):
            if a and self.order_of(int(a)) == target:
                return int(a)
        raise FieldError("no generator")  # pragma: no cover

    # matrices -----------------------------------------------------------
    def matmul(self, A, B):
        """Matrix product over the field; supports stacked (batched) operands."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        p, m = self.p, self.m
        if m == 1:
            return (A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64) % p
        Ad = self.digits(A).astype(np.float64)
        Bd = self.digits(B).astype(np.float64)
        acc = None
        for i in range(m):
            for j in range(m):
                prod = Ad[..., i] @ Bd[..., j]
                if acc is None:
                    acc = np.zeros((2 * m - 1,) + prod.shape)
                acc[i + j] += prod
        acc = acc.astype(np.int64) % p
        out = np.tensordot(self._red.T, acc, axes=(1, 0)) % p   # (m, ...)
        return np.moveaxis(out, 0, -1) @ self._pw

    def kummer_root(self, c: int, e: int):
        """Some lam with lam**e == c, or None if no such lam lies in this field."""
        if e == 0:
            if c == 0:
                raise FieldError("ZeroInput: c = 0 with e = 0")
            return 1 if c == 1 else None
        if c == 0:
            return 0
        n = self.order - 1
        g = math.gcd(e, n)
        L = int(self._log[c])
        if L % g:
            return None
        k = (L // g) * pow(e // g, -1, n // g) % (n // g)
        lam = int(self._exp[k])
        assert self.pow(lam, e) == c
        return lam


@lru_cache(maxsize=None)
def get_field(p: int, m: int) -> GF:
    return GF(p, m)
