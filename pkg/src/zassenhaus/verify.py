"""Verification suites: each one replays a computational claim and returns check records.

Reports are plain dicts, deterministic for a given (p, n, m, seed); wall time
is only included when asked for.
"""

from __future__ import annotations

import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .autgrp import AutomorphismGroup, BadPPowerCoefficient
from .normalform import LemmaViolation, NormalForms, REGULAR, ReductionIncomplete
from .penv import PEnvelope
from .spectral import NotATorus, RootNotInField, Spectral, tangent_dimensions
from .textio import env_to_json, format_env

SCHEMA = 1


@dataclass
class RunConfig:
    p: int = 5
    n: int = 2
    m: int | None = None
    seed: int = 0
    jobs: int = 1
    timing: bool = False
    samples: int | None = None      # overrides the per-suite sample count

    def __post_init__(self):
        if self.m is None:
            self.m = self.n

    def echo(self) -> dict:
        return {"p": self.p, "n": self.n, "m": self.m, "seed": self.seed}


@dataclass
class Check:
    name: str
    status: str                     # pass | fail | info
    detail: dict = field(default_factory=dict)
    counterexample: dict | None = None


class Context:
    """Lazily built algebra objects shared by the checks of one suite."""

    def __init__(self, cfg: RunConfig, suite: str):
        self.cfg = cfg
        self.rng = np.random.default_rng([cfg.seed, zlib.crc32(suite.encode())])

    @cached_property
    def L(self):
        return PEnvelope(self.cfg.p, self.cfg.n, self.cfg.m)

    @cached_property
    def G(self):
        return AutomorphismGroup(self.L)

    @cached_property
    def NF(self):
        return NormalForms(self.L, self.G)

    def count(self, default: int) -> int:
        return default if self.cfg.samples is None else self.cfg.samples

    def check(self, name, ok, detail=None, counterexample=None) -> Check:
        ce = env_to_json(self.L, counterexample) if counterexample is not None else None
        return Check(name, "pass" if ok else "fail", detail or {}, ce)


# samplers -----------------------------------------------------------------

def sparse_scalars(rng, F, size, density=0.5):
    vals = rng.integers(1, F.order, size)
    vals[rng.random(size) >= density] = 0
    return vals


def random_head_element(ctx: Context, m: int):
    """Monic D^(p^m) head, random lower tails, random Witt part."""
    L = ctx.L
    D = L.random(ctx.rng)
    tail = D.tail.copy()
    tail[m - 1] = 1
    tail[m:] = 0
    return L.element(D.f, tail)


def nilpotent_canonical_forms(ctx: Context, count: int, max_tries: int = 200000):
    """Sparse random canonical forms with head D^(p^{n-1}), kept when nilpotent."""
    L, rng = ctx.L, ctx.rng
    p, n, q = L.p, L.n, L.q
    top = q - p ** (n - 1)
    out = []
    for _ in range(max_tries):
        if len(out) == count:
            break
        f = L.O.zero()
        f[0] = sparse_scalars(rng, L.F, 1)[0]
        f[top:] = sparse_scalars(rng, L.F, q - top)
        tail = np.zeros(n - 1, dtype=np.int64)
        tail[: n - 2] = sparse_scalars(rng, L.F, n - 2)
        tail[n - 2] = 1
        D = L.element(f, tail)
        if L.is_nilpotent(D):
            out.append(D)
    return out


def random_torus_tail(ctx: Context):
    """lambda_0 D + sum lambda_i D^(p^i) with lambda_0 != 0."""
    L, rng = ctx.L, ctx.rng
    f = L.O.zero()
    f[0] = rng.integers(1, L.F.order)
    return L.element(f, rng.integers(0, L.F.order, L.n - 1))


def random_partial_plus_tail(ctx: Context):
    """D + sum lambda_i D^(p^i)."""
    L = ctx.L
    return L.element(L.O.monomial(0), ctx.rng.integers(0, L.F.order, L.n - 1))


# suites -------------------------------------------------------------------

def suite_eq21(ctx: Context):
    L = ctx.L
    p, n, q = L.p, L.n, L.q
    images = {0: 0}
    for t in range(1, n):
        images[p ** t - 1] = p * (p ** t - 1)
    bad, observed = [], {}
    for i in range(q - 1):
        want = L.d(images[i]) if i in images else L.zero()
        got = L.p_power(L.d(i))
        if got != want:
            bad.append(i)
            observed[str(i)] = format_env(L, got)
    checks = [ctx.check("witt-basis", not bad,
                        {"checked": q - 1, "bad": bad, "observed": observed})]
    bad = []
    for t in range(n):
        want = L.partial_power(t + 1) if t + 1 < n else L.zero()
        if L.p_power(L.partial_power(t)) != want:
            bad.append(t)
    checks.append(ctx.check("partial-powers", not bad, {"checked": n, "bad": bad}))
    return checks


def suite_lieg_basis(ctx: Context):
    L, G = ctx.L, ctx.G
    idx = G.lieG_indices()
    checks = [ctx.check("size", len(idx) == L.q - L.n, {"size": len(idx), "expected": L.q - L.n})]
    failing = [i for i in idx if not G.tangent_check(i)]
    checks.append(ctx.check("tangent", not failing, {"checked": len(idx), "failing": failing}))
    accepted = []
    for t in range(1, L.n):
        y = L.O.monomial(1)
        y[L.p ** t] = 1
        try:
            G.make(y)
            accepted.append(L.p ** t - 1)
        except BadPPowerCoefficient:
            pass
    checks.append(ctx.check("excluded-inadmissible", not accepted,
                            {"excluded": [L.p ** t - 1 for t in range(1, L.n)], "accepted": accepted}))
    return checks


def suite_jacobson(ctx: Context):
    L = ctx.L
    N = ctx.count(200)
    for _ in range(N):
        a, b = L.random(ctx.rng), L.random(ctx.rng)
        lhs = L.p_power(L.add(a, b))
        rhs = L.add(L.p_power(a), L.p_power(b))
        for s in L.jacobson_si(a, b):
            rhs = L.add(rhs, s)
        if lhs != rhs:
            return [ctx.check("pairs", False, {"tested": N}, a)]
    return [ctx.check("pairs", True, {"tested": N})]


def suite_lemma31(ctx: Context):
    L, G, NF = ctx.L, ctx.G, ctx.NF
    N = ctx.count(500)
    q, pm = L.q, L.p ** (L.n - 1)
    limit = q - pm - 1
    max_steps = 0
    for _ in range(N):
        D = random_head_element(ctx, L.n - 1)
        cert = NF.reduce_top(D)
        out = cert.output
        max_steps = max(max_steps, len(cert.steps))
        problems = []
        if G.act_on_Lp(cert.composed, D) != out:
            problems.append("replay")
        if np.any(out.f[1:q - pm]):
            problems.append("support")
        if len(cert.steps) > limit:
            problems.append("steps")
        if cert.skipped:
            problems.append("skipped")
        if problems:
            return [ctx.check("certificates", False, {"problems": problems}, D)]
    return [ctx.check("certificates", True,
                      {"tested": N, "max_steps": max_steps, "step_limit": limit})]


def _cor32_nilpotent_inputs(ctx: Context, m: int, count: int, max_tries: int = 20000):
    """Nilpotent elements with head D^(p^m): sparse Witt parts, filtered."""
    L, rng = ctx.L, ctx.rng
    out = []
    for _ in range(max_tries):
        if len(out) == count:
            break
        f = sparse_scalars(rng, L.F, L.q, density=0.1)
        tail = np.zeros(L.n - 1, dtype=np.int64)
        tail[: m - 1] = sparse_scalars(rng, L.F, m - 1)
        tail[m - 1] = 1
        D = L.element(f, tail)
        if L.is_nilpotent(D):
            out.append(D)
    return out


def suite_cor32(ctx: Context):
    L, G, NF = ctx.L, ctx.G, ctx.NF
    p, n, q = L.p, L.n, L.q
    if n < 3:
        return [Check("heads", "info", {"note": "no head D^(p^m) with 1 <= m <= n-2 when n < 3"})]
    N = ctx.count(100)
    checks = []
    for m in range(1, n - 1):
        pm = p ** m
        expected = [p ** t - pm for t in range(m + 1, n) if 1 <= p ** t - pm <= q - pm - 1]
        randoms = [random_head_element(ctx, m) for _ in range(N)]
        nilpotents = _cor32_nilpotent_inputs(ctx, m, N)
        counts = {"random": {str(i): 0 for i in expected}, "nilpotent": {str(i): 0 for i in expected}}
        for label, inputs in (("random", randoms), ("nilpotent", nilpotents)):
            for D in inputs:
                cert = NF.reduce_top(D)
                if G.act_on_Lp(cert.composed, D) != cert.output:
                    return [ctx.check(f"m={m}-replay", False, {}, D)]
                if cert.skipped != expected:
                    return [ctx.check(f"m={m}-skipped", False,
                                      {"skipped": cert.skipped, "expected": expected}, D)]
                allowed = set(expected) | {0} | set(range(q - pm, q))
                if any(i not in allowed for i in np.nonzero(cert.output.f)[0]):
                    return [ctx.check(f"m={m}-support", False, {}, D)]
                for i in expected:
                    if cert.output.f[i]:
                        counts[label][str(i)] += 1
        checks.append(ctx.check(f"m={m}-certificates", True,
                                {"random": len(randoms), "nilpotent": len(nilpotents),
                                 "skipped": expected}))
        checks.append(Check(f"m={m}-skipped-nonvanishing", "info", counts))
    return checks


def suite_ppower_lemma(ctx: Context):
    NF = ctx.NF
    N = ctx.count(500)
    samples = nilpotent_canonical_forms(ctx, N)
    branches = {"all-zero": 0, "j>=1": 0, "b0": 0}
    violations, first = {}, None
    for D in samples:
        try:
            branches[NF.verify_ppower_chain(D)] += 1
        except LemmaViolation as exc:
            violations[str(exc)] = violations.get(str(exc), 0) + 1
            first = first if first is not None else exc.element
    # the reduce_top form itself need not be pure when b_0 != 0
    b0_forms = [D for D in samples if D.f[0]]
    impure = sum(bool(any(NF.canonical_parts(D)[1])) for D in b0_forms)
    return [
        ctx.check("dichotomy", not violations and len(samples) == N,
                  {"tested": len(samples), "requested": N, "branches": branches,
                   "violations": violations}, first),
        Check("b0-canonical-forms-with-witt-part", "info",
              {"b0": len(b0_forms), "nonzero_mu": impure}),
    ]


def suite_nreg(ctx: Context):
    L, G, NF = ctx.L, ctx.G, ctx.NF
    N = ctx.count(1000)
    checks = []
    bad = None
    canonical_bad = None
    for _ in range(N):
        D = G.act_on_Lp(G.random(ctx.rng), random_torus_tail(ctx))
        if NF.classify(D).verdict != REGULAR:
            bad = D
            break
        try:
            out = NF.reduce_regular(D).output
            if np.any(out.f[1:]) or out.f[0] == 0:
                canonical_bad = D
        except ReductionIncomplete:
            canonical_bad = D
    checks.append(ctx.check("translates-regular", bad is None, {"tested": N}, bad))
    checks.append(ctx.check("regular-reduces-to-tail-form", canonical_bad is None,
                            {"tested": N}, canonical_bad))
    bad = None
    for _ in range(N):
        D = L.element(L.W.random(ctx.rng, min_degree=1))
        if not NF.classify(D).singular:
            bad = D
            break
    checks.append(ctx.check("filtered-singular", bad is None, {"tested": N}, bad))
    # nilpotent D + g D: conjugates of D and sparse draws kept when nilpotent
    samples = []
    for _ in range(N // 2):
        E = G.act_on_Lp(G.random(ctx.rng), L.d(-1))
        samples.append(NF.normalize_head(E)[0])
    for _ in range(4 * N):
        if len(samples) >= N:
            break
        f = sparse_scalars(ctx.rng, L.F, L.q, density=0.15)
        f[0] = 1
        D = L.element(f)
        if L.is_nilpotent(D):
            samples.append(D)
    bad = None
    for D in samples:
        if NF.reduce_witt(D).output != L.d(-1):
            bad = D
            break
    checks.append(ctx.check("reduce-witt-to-partial", bad is None, {"tested": len(samples)}, bad))
    return checks


def suite_centralizer(ctx: Context):
    L, G = ctx.L, ctx.G
    F, q, n = L.F, L.q, L.n
    N = ctx.count(20)
    lie = np.stack([b.coords() for b in G.lieG_basis()])
    for _ in range(N):
        D = random_partial_plus_tail(ctx)
        adL = L.ad_matrix(D, "l")[:q]
        zl, zlp = L.centralizer(D, "l"), L.centralizer(D, "lp")
        zl_rows = np.stack([z.coords() for z in zl])
        facts = {
            "dim_zL": len(zl) == 1,
            "dim_zLp": len(zlp) == n,
            "rank_adL": linalg.rank(F, adL) == q - 1,
            "ad^(q-1)!=0": not linalg.is_zero(linalg.matpow(F, adL, q - 1)),
            "ad^q=0": linalg.is_zero(linalg.matpow(F, adL, q)),
            "zL_cap_lieG": linalg.rank(F, np.concatenate([zl_rows, lie])) == len(zl) + len(lie),
        }
        failed = [k for k, v in facts.items() if not v]
        if failed:
            return [ctx.check("partial-plus-tail", False, {"failed": failed}, D)]
    checks = [ctx.check("partial-plus-tail", True, {"tested": N})]
    z = L.centralizer(L.partial_power(n - 1), "lp")
    want = L.p ** (n - 1) + n - 1
    checks.append(ctx.check("top-partial-power", len(z) == want, {"dim": len(z), "expected": want}))
    return checks


def _spectral_setup(ctx: Context):
    S = Spectral(ctx.L)
    h = S.find_regular_toral()
    eb = S.build_e_basis(h)
    return S, eb


def suite_sigma_spectrum(ctx: Context):
    if ctx.L.F.m % ctx.L.n:
        return [Check("field", "fail", {"note": "F_q is not inside the configured field"})]
    S, eb = _spectral_setup(ctx)
    q = S.q
    sd = S.sigma(eb)
    mult = sd.multiplicities
    profile = mult.get(q - 2) == 2 and all(mult.get(k) == 1 for k in range(q - 2))
    checks = [
        ctx.check("e-basis", S.check_e_basis(eb), {"h": ctx.L.element(eb.h).coords().tolist()}),
        ctx.check("automorphism", S.sigma_is_automorphism(sd)),
        ctx.check("order", S.sigma_order_ok(sd), {"order": q - 1}),
        ctx.check("multiplicities", profile, {"xi": sd.xi, "multiplicities": {str(k): v for k, v in sorted(mult.items())}}),
        ctx.check("filtration-scalars", S.sigma_filtration_scalars(sd)),
    ]
    try:
        u = S.toral_u(sd)
        v = S.v_subspace(eb, u)
        checks.append(ctx.check("toral-u", True, {"u": env_to_json(ctx.L, u)["text"]}))
        checks.append(ctx.check("torus-semisimple", S.torus_is_semisimple(v)))
    except (NotATorus, RootNotInField) as exc:
        checks.append(ctx.check("toral-u", False, {"error": repr(exc)}))
    return checks


def suite_prop_vsing(ctx: Context):
    L = ctx.L
    if L.F.m % L.n:
        return [Check("field", "fail", {"note": "F_q is not inside the configured field"})]
    S, eb = _spectral_setup(ctx)
    u = S.toral_u(S.sigma(eb))
    V = S.v_subspace(eb, u)
    stats = S.check_V_intersection(V, jobs=ctx.cfg.jobs)
    checks = [ctx.check("exhaustive-Fq", stats.passed, _stats_detail(stats))]
    if L.F.m % (2 * L.n) == 0:
        N = ctx.count(10000)
        coords = ctx.rng.integers(0, L.F.order, (N, L.n + 1))
        while True:
            zero = ~np.any(coords, axis=1)
            if not zero.any():
                break
            coords[zero] = ctx.rng.integers(0, L.F.order, (int(zero.sum()), L.n + 1))
        stats = S.check_V_intersection(V, coords, jobs=ctx.cfg.jobs)
        checks.append(ctx.check("sampled-Fq2", stats.passed, _stats_detail(stats)))
    else:
        checks.append(Check("sampled-Fq2", "info",
                            {"note": f"needs m divisible by {2 * L.n}; rerun with --m {2 * L.n}"}))
    return checks


def _stats_detail(stats) -> dict:
    return asdict(stats)


def suite_tangent(ctx: Context):
    L = ctx.L
    N = ctx.count(50)
    q, n = L.q, L.n
    for _ in range(N):
        D = random_partial_plus_tail(ctx)
        dims = tangent_dimensions(L, D)
        if dims != {"image": q - n, "total": q - 1, "x_cap_lieg": 0}:
            return [ctx.check("dimensions", False, dims, D)]
    return [ctx.check("dimensions", True, {"tested": N, "total": q - 1, "image": q - n, "x_cap_lieg": 0})]


SUITES = {
    "eq21": suite_eq21,
    "lieg-basis": suite_lieg_basis,
    "jacobson": suite_jacobson,
    "lemma31": suite_lemma31,
    "cor32": suite_cor32,
    "ppower-lemma": suite_ppower_lemma,
    "nreg": suite_nreg,
    "centralizer": suite_centralizer,
    "sigma-spectrum": suite_sigma_spectrum,
    "prop-vsing": suite_prop_vsing,
    "tangent": suite_tangent,
}


def run_suite(name: str, cfg: RunConfig) -> dict:
    start = time.perf_counter()
    ctx = Context(cfg, name)
    try:
        checks = SUITES[name](ctx)
    except Exception as exc:       # a crash is a failed check, not a lost report
        checks = [Check("crash", "fail", {"error": f"{type(exc).__name__}: {exc}"})]
    status = "fail" if any(c.status == "fail" for c in checks) else "pass"
    report = {"suite": name, "status": status, "checks": [asdict(c) for c in checks]}
    if cfg.timing:
        report["seconds"] = round(time.perf_counter() - start, 3)
    return report


def _run_one(args):
    return run_suite(*args)


def run(names, cfg: RunConfig) -> dict:
    names = list(SUITES) if names == ["all"] or names == "all" else list(names)
    if cfg.jobs > 1 and len(names) > 1:
        inner = RunConfig(**{**asdict(cfg), "jobs": 1})
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            suites = list(pool.map(_run_one, [(nm, inner) for nm in names]))
    else:
        suites = [run_suite(nm, cfg) for nm in names]
    status = "fail" if any(s["status"] == "fail" for s in suites) else "pass"
    return {"schema": SCHEMA, "config": cfg.echo(), "status": status, "suites": suites}
