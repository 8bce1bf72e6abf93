"""The Zassenhaus algebra W(1;n) = O(1;n) * D.

A Witt element is stored as its coefficient array f, standing for f D where
D is the derivative.  The graded basis is d_i = x^(i+1) D for
-1 <= i <= p^n - 2, so the d_i-coefficient of f D is ``f[i + 1]``.
"""

from __future__ import annotations

import numpy as np

from .divpow import DividedPowerAlgebra
from .field import binom_mod_p


class WittAlgebra:
    def __init__(self, O: DividedPowerAlgebra):
        self.O = O
        self.F = O.F
        self.p, self.n, self.q = O.p, O.n, O.q
        q, p = self.q, self.p
        sc = np.zeros((q, q), dtype=np.int64)
        idx = np.full((q, q), q, dtype=np.int64)
        for i in range(q):
            for j in range(q):
                s = i + j
                if 1 <= s <= q:
                    c = (binom_mod_p(s - 1, i, p) - binom_mod_p(s - 1, j, p)) % p
                    sc[i, j] = c
                    idx[i, j] = s - 1
        self.structure = sc
        self._target = idx

    def d(self, i: int) -> np.ndarray:
        """The basis element d_i = x^(i+1) D."""
        if not -1 <= i <= self.q - 2:
            raise IndexError(f"d_{i} is not a basis element")
        return self.O.monomial(i + 1)

    def bracket(self, f, g) -> np.ndarray:
        F = self.F
        outer = F.mul(F.mul(f[:, None], g[None, :]), self.structure)
        return self.O._fold(outer, self._target)

    def bracket_as_derivations(self, f, g) -> np.ndarray:
        """[f D, g D] = (f g' - g f') D, straight from the derivation rule."""
        O = self.O
        return O.sub(O.multiply(f, O.derivative(g)), O.multiply(g, O.derivative(f)))

    def filtration_degree(self, f):
        """Largest i with f D in L_(i); None for zero."""
        nz = np.nonzero(f)[0]
        if nz.size == 0:
            return None
        return int(nz[0]) - 1

    def in_filtration(self, f, i: int) -> bool:
        return not np.any(f[:i + 1])

    def random(self, rng, min_degree: int = -1) -> np.ndarray:
        f = self.O.random(rng)
        f[:min_degree + 1] = 0
        return f
