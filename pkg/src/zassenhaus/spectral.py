"""The e_alpha presentation of W(1;n), the automorphism sigma and the V-sweep.

A regular toral h = e_0 has ad-spectrum F_q with one-dimensional eigenspaces.
Rescaling eigenvectors so that [e_a, e_b] = (b - a) e_{a+b} leaves no freedom
(an additive character F_q -> F^* is trivial), so the scalars are solved for
rather than chosen.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import linalg
from .autgrp import AutomorphismGroup
from .field import FieldError, get_field
from .penv import EnvElement, PEnvelope


class NotFound(LookupError):
    pass


class InconsistentScaling(ArithmeticError):
    pass


class NotATorus(ArithmeticError):
    pass


class RootNotInField(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class EBasis:
    xi: int
    elements: list          # F_q in increasing packed order
    e: dict                 # alpha -> Witt coefficient array
    h: np.ndarray

    def matrix(self) -> np.ndarray:
        """Columns e_alpha (in the order of ``elements``) in d-coordinates."""
        return np.stack([self.e[a] for a in self.elements], axis=1)


@dataclass(frozen=True, eq=False)
class SigmaData:
    matrix: np.ndarray
    xi: int
    eigenvalues: list       # xi^k for k = 0..q-2
    eigenspaces: dict       # k -> basis rows
    multiplicities: dict    # k -> dimension


@dataclass(frozen=True, eq=False)
class VSubspace:
    basis: list             # e_0, e_0^[p], ..., e_0^[p^{n-1}], u


@dataclass
class SweepStats:
    tested: int = 0
    nilpotent: int = 0
    singular: int = 0
    violations: int = 0
    head_exclusion_failures: int = 0
    counterexamples: list = field(default_factory=list)

    def merge(self, other: "SweepStats"):
        self.tested += other.tested
        self.nilpotent += other.nilpotent
        self.singular += other.singular
        self.violations += other.violations
        self.head_exclusion_failures += other.head_exclusion_failures
        self.counterexamples.extend(other.counterexamples)

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.head_exclusion_failures == 0


class Spectral:
    def __init__(self, L: PEnvelope):
        if L.F.m % L.n:
            raise FieldError(f"F_{L.q} is not contained in {L.F!r}")
        self.L = L
        self.F, self.W = L.F, L.W
        self.p, self.n, self.q = L.p, L.n, L.q
        self.Fq = [int(a) for a in self.F.subfield(self.n)]
        self.xi = self.F.subfield_generator(self.n)

    def ad_on_L(self, f) -> np.ndarray:
        return self.L.ad_matrix(self.L.element(f), "l")[: self.q]

    # e_0 --------------------------------------------------------------
    def candidates(self):
        """h = D + sum_t c_t x^(p^t - 1) D for c in F_q^n, lexicographically."""
        for cs in product(self.Fq, repeat=self.n):
            f = self.L.O.monomial(0)
            for t, c in enumerate(cs, start=1):
                f[self.p ** t - 1] = self.F.add(int(f[self.p ** t - 1]), c)
            yield f

    def has_full_spectrum(self, f) -> bool:
        A = self.ad_on_L(f)
        # diagonalizable over F_q exactly when A^q = A; then check the spectrum
        if not np.array_equal(linalg.matpow(self.F, A, self.q), A):
            return False
        try:
            spaces = linalg.eigen_split(self.F, A, self.Fq)
        except linalg.NotDiagonalizable:
            return False
        return len(spaces) == self.q

    def find_regular_toral(self) -> np.ndarray:
        for f in self.candidates():
            if self.has_full_spectrum(f):
                return f
        raise NotFound(f"no regular toral element of the searched form over {self.F!r}")

    # e-basis ------------------------------------------------------------
    def _structure_constant(self, v, w, target) -> int:
        F = self.F
        br = self.W.bracket(v, w)
        piv = int(np.nonzero(target)[0][0])
        c = F.div(int(br[piv]), int(target[piv]))
        if not np.array_equal(br, F.mul(c, target)):
            raise InconsistentScaling("bracket of eigenvectors is not an eigenvector")
        return c

    def _fp_basis(self) -> list[int]:
        """First F_p-basis of F_q among its elements in packed order."""
        Fp = get_field(self.p, 1)
        chosen, rows = [], []
        for a in self.Fq:
            if a == 0:
                continue
            trial = rows + [self.F.scalar_digits(a)]
            if linalg.rank(Fp, np.array(trial)) == len(trial):
                chosen.append(a)
                rows = trial
            if len(chosen) == self.n:
                break
        return chosen

    def build_e_basis(self, h) -> EBasis:
        F, p = self.F, self.p
        h = np.asarray(h, dtype=np.int64)
        spaces = linalg.eigen_split(F, self.ad_on_L(h), self.Fq)
        if len(spaces) != self.q:
            raise linalg.NotDiagonalizable("ad h does not have spectrum F_q")
        v = {a: spaces[a][0] for a in self.Fq}
        v[0] = h
        lam = {0: 1}

        def kappa(a, b):
            c = self._structure_constant(v[a], v[b], v[F.add(a, b)])
            return F.div(c, F.sub(b, a))

        def pair_product(a):
            c = self._structure_constant(v[a], v[F.neg(a)], h)
            return F.div(F.mul(F.from_int(-2), a), c)

        def k_times(k, b):
            return F.mul(F.from_int(k), b)

        for b in self._fp_basis():
            # provisional values with l_1 = l_2 = 1, then solve for the two free scalars
            l0 = {1: 1, 2: 1}
            for k in range(3, p):
                l0[k] = F.mul(l0[k - 1], kappa(b, k_times(k - 1, b)))
            Pb, P2b = pair_product(b), pair_product(k_times(2, b))
            rhs = F.div(F.mul(F.mul(Pb, Pb), l0[p - 2]), F.mul(P2b, F.mul(l0[p - 1], l0[p - 1])))
            s = F.frobenius_inv(rhs, 1)
            t = F.div(Pb, F.mul(F.pow(s, p - 2), l0[p - 1]))
            lam[b] = s
            for k in range(2, p):
                lam[k_times(k, b)] = F.mul(F.mul(F.pow(s, k - 2), t), l0[k])

        queue = deque(lam)
        while queue and len(lam) < self.q:
            a = queue.popleft()
            for b in list(lam):
                s_ab = F.add(a, b)
                if a == b or s_ab in lam:
                    continue
                c = self._structure_constant(v[a], v[b], v[s_ab])
                if c == 0:
                    continue
                lam[s_ab] = F.div(F.mul(F.mul(lam[a], lam[b]), c), F.sub(b, a))
                queue.append(s_ab)
        if len(lam) < self.q:
            raise InconsistentScaling("scalings did not reach every eigenvector")
        e = {a: F.mul(lam[a], v[a]) for a in self.Fq}
        eb = EBasis(self.xi, list(self.Fq), e, h)
        if not self.check_e_basis(eb):
            raise InconsistentScaling("exhaustive bracket check failed")
        return eb

    def check_e_basis(self, eb: EBasis) -> bool:
        F = self.F
        for a in eb.elements:
            for b in eb.elements:
                want = F.mul(F.sub(b, a), eb.e[F.add(a, b)])
                if not np.array_equal(self.W.bracket(eb.e[a], eb.e[b]), want):
                    return False
        return True

    # sigma ------------------------------------------------------------
    def sigma(self, eb: EBasis) -> SigmaData:
        F, q = self.F, self.q
        E = eb.matrix()
        pos = {a: i for i, a in enumerate(eb.elements)}
        P = np.zeros((q, q), dtype=np.int64)
        xi_inv = F.inv(eb.xi)
        for a in eb.elements:
            P[pos[F.mul(eb.xi, a)], pos[a]] = xi_inv
        S = F.matmul(F.matmul(E, P), linalg.inverse(F, E))
        powers = [F.pow(eb.xi, k) for k in range(q - 1)]
        spaces = linalg.eigen_split(F, S, powers)
        by_k = {k: spaces[lam] for k, lam in enumerate(powers) if lam in spaces}
        mult = {k: len(b) for k, b in by_k.items()}
        return SigmaData(S, eb.xi, powers, by_k, mult)

    def sigma_is_automorphism(self, sd: SigmaData) -> bool:
        F, q, S = self.F, self.q, sd.matrix
        cols = [S[:, j] for j in range(q)]
        for i in range(q):
            for j in range(i + 1, q):
                lhs = F.sum(F.mul(S, self.W.bracket(self.W.O.monomial(i), self.W.O.monomial(j))[None, :]), axis=1)
                if not np.array_equal(lhs, self.W.bracket(cols[i], cols[j])):
                    return False
        return True

    def sigma_order_ok(self, sd: SigmaData) -> bool:
        return np.array_equal(linalg.matpow(self.F, sd.matrix, self.q - 1), linalg.identity(self.q))

    def sigma_filtration_scalars(self, sd: SigmaData) -> bool:
        """sigma is lower triangular in the d-basis with xi^k on d_k."""
        F, S = self.F, sd.matrix
        if np.any(np.triu(S, 1)):
            return False
        diag = [F.pow(sd.xi, c - 1) for c in range(self.q)]
        return np.array_equal(np.diag(S), np.array(diag))

    def toral_u(self, sd: SigmaData) -> EnvElement:
        L, F = self.L, self.F
        if sd.multiplicities.get(0) != 1:
            raise NotATorus("L[0] is not one-dimensional")
        w = L.element(sd.eigenspaces[0][0])
        wp = L.p_power(w)
        if np.any(wp.tail):
            raise NotATorus("w^[p] has a tail component")
        piv = int(np.nonzero(w.f)[0][0])
        c = F.div(int(wp.f[piv]), int(w.f[piv]))
        if c == 0 or wp != L.scale(c, w):
            raise NotATorus("w^[p] is not a nonzero multiple of w")
        lam = F.kummer_root(F.inv(c), self.p - 1)
        if lam is None:
            raise RootNotInField(f"no (p-1)-th root of {F.inv(c)} in {F!r}")
        u = L.scale(lam, w)
        assert L.p_power(u) == u
        assert L.filtration_degree(u) == 0
        return u

    def v_subspace(self, eb: EBasis, u: EnvElement) -> VSubspace:
        L = self.L
        cur = L.element(eb.h)
        basis = [cur]
        for _ in range(1, self.n):
            cur = L.p_power(cur)
            basis.append(cur)
        return VSubspace(basis + [u])

    def torus_is_semisimple(self, v: VSubspace) -> bool:
        """e_0^[p^n] = e_0 and the n powers are independent."""
        L = self.L
        T = v.basis[: self.n]
        if L.p_power(T[0], self.n) != T[0]:
            return False
        return linalg.rank(self.F, np.stack([t.coords() for t in T])) == self.n

    # the sweep ------------------------------------------------------------
    def check_V_intersection(self, v: VSubspace, coords=None, jobs: int = 1,
                             batch: int = 2048) -> SweepStats:
        """Count points of V in N_sing.

        ``coords`` is an array of coefficient rows; by default every nonzero
        point with coordinates in F_q.
        """
        if coords is None:
            coords = self.grid()
        coords = np.asarray(coords, dtype=np.int64)
        ops = np.stack([self.L.to_operator(b) for b in v.basis])
        args = (self.p, self.n, self.F.m, ops)
        chunks = [coords[i:i + batch] for i in range(0, len(coords), batch)]
        stats = SweepStats()
        if jobs > 1 and len(chunks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for part in pool.map(_sweep_chunk, [args] * len(chunks), chunks):
                    stats.merge(part)
        else:
            for ch in chunks:
                stats.merge(_sweep_chunk(args, ch))
        return stats

    def grid(self) -> np.ndarray:
        vals = np.array(self.Fq, dtype=np.int64)
        k = self.n + 1
        idx = np.arange(1, self.q ** k)
        digits = (idx[:, None] // (self.q ** np.arange(k - 1, -1, -1))) % self.q
        return vals[digits]

    def tangent_dimension(self, D: EnvElement) -> int:
        return tangent_dimensions(self.L, D)["total"]


def tangent_dimensions(L: PEnvelope, D: EnvElement) -> dict:
    """Ranks of [D, Lie(G)], of [D, Lie(G)] + X, and dim X cap Lie(G).

    X = span{D, D^p, ..., D^(p^{n-1})}.
    """
    F = L.F
    G = AutomorphismGroup(L)
    lie = np.stack([b.coords() for b in G.lieG_basis()])
    image = np.stack([L.bracket(D, b).coords() for b in G.lieG_basis()])
    X = np.stack([L.partial_power(i).coords() for i in range(L.n)])
    return {
        "image": linalg.rank(F, image),
        "total": linalg.rank(F, np.concatenate([image, X])),
        "x_cap_lieg": len(X) + len(lie) - linalg.rank(F, np.concatenate([X, lie])),
    }


def _sweep_chunk(args, coords) -> SweepStats:
    p, n, m, ops = args
    F = get_field(p, m)
    M = np.zeros((len(coords),) + ops.shape[1:], dtype=np.int64)
    for i in range(ops.shape[0]):
        M = F.add(M, F.mul(coords[:, i, None, None], ops[i][None]))
    W = linalg.matrix_p_power(F, M, n - 1)
    nil = ~np.any(linalg.matrix_p_power(F, W, 1), axis=(1, 2))
    cols = [1] + [p ** i for i in range(1, n)]
    in_l0 = ~np.any(W[:, 0, cols], axis=1)
    singular = nil & in_l0
    head = coords[:, 0] != 0
    stats = SweepStats(
        tested=len(coords), nilpotent=int(nil.sum()), singular=int(singular.sum()),
        violations=int(singular.sum()), head_exclusion_failures=int((head & in_l0).sum()))
    for row in coords[singular][:5]:
        stats.counterexamples.append([int(c) for c in row])
    return stats
