"""Reduction of elements of L_p to canonical tail forms, and the N_reg/N_sing split.

A head ``D^(p^m)`` (m >= 1) is pushed into canonical form
D^(p^m) + sum_{i<m} b_i D^(p^i) + x^(p^n - p^m) h(x) D by killing the Witt
part degree by degree with x -> x + c x^(p^m + i); a head ``D`` is handled the
same way with x -> x + c x^(i+1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .autgrp import Automorphism, AutomorphismGroup
from .penv import EnvElement, PEnvelope
from . import linalg

NOT_NILPOTENT = "NotNilpotent"
REGULAR = "Regular"
SINGULAR_DEEP = "SingularDeep"
SINGULAR_FILTERED = "SingularFiltered"


class BadHead(ValueError):
    pass


class ReductionIncomplete(ValueError):
    pass


class LemmaViolation(AssertionError):
    def __init__(self, message: str, element: EnvElement):
        super().__init__(message)
        self.element = element


@dataclass(frozen=True, eq=False)
class ReductionCertificate:
    input: EnvElement
    steps: list            # (degree, coefficient, Automorphism)
    skipped: list
    output: EnvElement
    composed: Automorphism
    head: int              # m for a head D^(p^m)
    kept: list = field(default_factory=list)   # nonzero coefficients left at skipped degrees


@dataclass(frozen=True, eq=False)
class RegularReduction:
    input: EnvElement
    output: EnvElement
    composed: Automorphism
    levels: list           # (level k, local head j, number of steps)


@dataclass(frozen=True, eq=False)
class Classification:
    verdict: str
    witness: EnvElement    # D^[p^{n-1}]

    @property
    def singular(self) -> bool:
        return self.verdict in (SINGULAR_DEEP, SINGULAR_FILTERED)


class NormalForms:
    def __init__(self, L: PEnvelope, G: AutomorphismGroup | None = None):
        self.L = L
        self.G = G or AutomorphismGroup(L)
        self.F, self.O = L.F, L.O
        self.p, self.n, self.q = L.p, L.n, L.q
        self._ppowers = {self.p ** t for t in range(self.n + 1)}

    def is_ppower(self, k: int) -> bool:
        return k in self._ppowers

    # heads --------------------------------------------------------------
    def head(self, D: EnvElement) -> tuple[int, int]:
        """(m, coefficient) of the top term D^(p^m); raises BadHead for D in L_(0)."""
        nz = np.nonzero(D.tail)[0]
        if nz.size:
            m = int(nz[-1]) + 1
            return m, int(D.tail[m - 1])
        if D.f[0]:
            return 0, int(D.f[0])
        raise BadHead("element has no D^(p^m) head")

    def normalize_head(self, D: EnvElement) -> tuple[EnvElement, Automorphism]:
        """Scale x -> a x with a^(p^m) = head coefficient, making the head monic."""
        m, c = self.head(D)
        a = self.F.frobenius_inv(c, m)
        phi = self.G.scaling(a)
        out = self.G.act_on_Lp(phi, D)
        assert self.head(out) == (m, 1)
        return out, phi

    def _check_monic(self, D: EnvElement, m: int):
        if self.head(D) != (m, 1):
            raise BadHead(f"expected a monic head D^(p^{m})")

    # reductions ---------------------------------------------------------
    def _descend(self, D: EnvElement, m: int, degrees, shift: int) -> ReductionCertificate:
        G, O = self.G, self.O
        cur = D
        y = O.monomial(1)
        steps, skipped, kept = [], [], []
        for i in degrees:
            k = shift + i
            if self.is_ppower(k):
                skipped.append(i)
                if cur.f[i]:
                    kept.append(i)
                continue
            c = int(cur.f[i])
            if not c:
                continue
            phi = G.elementary(k, c)
            cur = G.act_on_Lp(phi, cur)
            assert cur.f[i] == 0, (i, c)
            y = G.act_on_O(phi, y)
            steps.append((i, c, phi))
        composed = G.make(y, check=False)   # the replay below is the check
        cert = ReductionCertificate(D, steps, skipped, cur, composed, m, kept)
        if G.act_on_Lp(composed, D) != cur:
            raise AssertionError("reduction certificate does not replay")
        return cert

    def reduce_top(self, D: EnvElement) -> ReductionCertificate:
        """Canonical form for a monic head D^(p^m), m >= 1."""
        m, _ = self.head(D)
        if m < 1:
            raise BadHead("reduce_top needs a head D^(p^m) with m >= 1")
        self._check_monic(D, m)
        pm = self.p ** m
        return self._descend(D, m, range(1, self.q - pm), pm)

    def reduce_witt(self, D: EnvElement) -> ReductionCertificate:
        """D + g D (no tail) to D + sum_t b_t x^(p^t - 1) D."""
        if np.any(D.tail):
            raise BadHead("reduce_witt needs an element without tail")
        self._check_monic(D, 0)
        return self._descend(D, 0, range(1, self.q), 1)

    def canonical_form(self, D: EnvElement) -> tuple[Automorphism, ReductionCertificate]:
        """Monic head, then the matching reduction.  Returns (scaling, certificate)."""
        monic, scale = self.normalize_head(D)
        m, _ = self.head(monic)
        cert = self.reduce_top(monic) if m >= 1 else self.reduce_witt(monic)
        return scale, cert

    def reduce_regular(self, D: EnvElement) -> RegularReduction:
        """Conjugate D to a pure tail form sum_i g_i D^(p^i), one level at a time.

        At level k the Witt part has degree < p^k.  The local head is the top
        tail D^(p^j) with j < k (or D itself); after the descent below it, a
        leftover Witt part is removed by reducing D^[p^{k-1}] to a multiple
        of D^(p^{k-1}), which moves D into the centralizer of D^(p^{k-1}),
        i.e. to level k - 1.  Raises ReductionIncomplete when a stage does not
        close exactly.
        """
        G, L, F, p = self.G, self.L, self.F, self.p
        total = G.identity()
        cur = D
        levels = []

        def apply(phi):
            nonlocal cur, total
            cur = G.act_on_Lp(phi, cur)
            total = G.compose(phi, total)

        def local_head(E, k):
            nz = [t for t in range(1, k) if E.tail[t - 1]]
            j = nz[-1] if nz else 0
            return j, int(E.tail[j - 1]) if j else int(E.f[0])

        for k in range(self.n, 0, -1):
            j, c = local_head(cur, k)
            if c == 0:
                raise ReductionIncomplete(f"no head below D^(p^{k}) at level {k}")
            apply(G.scaling(F.frobenius_inv(c, j)))
            pj = p ** j
            cert = self._descend(cur, j, range(1, p ** k - pj), pj)
            apply(cert.composed)
            levels.append((k, j, len(cert.steps)))
            if not np.any(cur.f[1:]):
                break
            if j == 0 or k == 1:
                raise ReductionIncomplete(f"Witt part survives at level {k}")
            if cur.f[0] == 0:
                raise ReductionIncomplete("no D-component, so D is not in the regular branch")
            w = L.p_power(cur, k - 1)
            top = k - 1
            a = F.frobenius_inv(int(w.tail[top - 1]), top) if w.tail[top - 1] else 0
            if not a:
                raise ReductionIncomplete(f"the p^{k - 1} power has no D^(p^{k - 1}) term")
            scale = G.scaling(a)
            w = G.act_on_Lp(scale, w)
            wcert = self._descend(w, top, range(1, p ** k - p ** top), p ** top)
            if np.any(wcert.output.f):
                raise ReductionIncomplete(f"the p^{k - 1} power does not reduce to D^(p^{k - 1})")
            apply(G.compose(wcert.composed, scale))
            if np.any(cur.f[p ** top:]):
                raise ReductionIncomplete("conjugate does not centralize D^(p^{k-1})")
        else:
            raise ReductionIncomplete("ran out of levels")
        if G.act_on_Lp(total, D) != cur:
            raise AssertionError("regular reduction does not replay")
        return RegularReduction(D, cur, total, levels)

    # classification -----------------------------------------------------
    def classify(self, D: EnvElement) -> Classification:
        L, F = self.L, self.F
        W = linalg.matrix_p_power(F, L.to_operator(D), self.n - 1)
        w = L.from_operator(W)
        if not linalg.is_zero(linalg.matrix_p_power(F, W, 1)):
            return Classification(NOT_NILPOTENT, w)
        if np.any(w.tail) or w.f[0]:
            return Classification(REGULAR, w)
        if w.f[1] == 0:
            return Classification(SINGULAR_DEEP, w)
        return Classification(SINGULAR_FILTERED, w)

    # the p-power dichotomy for canonical forms with head D^(p^{n-1}) ------------
    def canonical_parts(self, D: EnvElement):
        """(betas b_0..b_{n-2}, mus mu_0..mu_{p^{n-1}-1}) of a canonical form."""
        top = self.q - self.p ** (self.n - 1)
        betas = [int(D.f[0])] + [int(b) for b in D.tail[: self.n - 2]]
        return betas, [int(c) for c in D.f[top:]]

    def is_canonical(self, D: EnvElement) -> bool:
        if self.head(D) != (self.n - 1, 1):
            return False
        top = self.q - self.p ** (self.n - 1)
        return not np.any(D.f[1:top])

    def verify_ppower_chain(self, D: EnvElement) -> str:
        """Check the p-power dichotomy on a nilpotent canonical D; returns the branch."""
        if not self.is_canonical(D):
            raise BadHead("expected a canonical form with head D^(p^{n-1})")
        if not self.L.is_nilpotent(D):
            raise ValueError("verify_ppower_chain needs a nilpotent element")
        betas, mus = self.canonical_parts(D)
        w = self.L.p_power(D, self.n - 1)
        in_l1 = self.L.in_filtration(w, 1)
        nonzero = [j for j, b in enumerate(betas) if b]
        if not nonzero:
            if mus[0] or mus[1]:
                raise LemmaViolation("all b_i = 0 but mu_0 or mu_1 is nonzero", D)
            if not in_l1:
                raise LemmaViolation("all b_i = 0 but the p^{n-1} power leaves L_(1)", D)
            return "all-zero"
        j = nonzero[0]
        if mus[0]:
            raise LemmaViolation("some b_j != 0 but mu_0 != 0", D)
        if j >= 1:
            if not in_l1:
                raise LemmaViolation(f"smallest b-index {j} but the power leaves L_(1)", D)
            return "j>=1"
        _, cert = self.canonical_form(w)
        if cert.output != self.L.partial_power(self.n - 1):
            raise LemmaViolation("b_0 != 0 but the power does not reduce to D^(p^{n-1})", D)
        try:
            red = self.reduce_regular(D)
        except ReductionIncomplete as exc:
            raise LemmaViolation(f"b_0 != 0 but D does not reduce to a tail form: {exc}", D)
        if np.any(red.output.f[1:]) or red.output.f[0] == 0:
            raise LemmaViolation("b_0 != 0 but the Witt part survives reduction", D)
        return "b0"
