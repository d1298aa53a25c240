"""Identity, oracle and symmetry check suites behind `zetazeros verify`.

Every check measures a residual against a fixed threshold; random sample
points are drawn from a seeded generator so runs are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import EvalConfig, DEFAULT_CONFIG
from .expr import eval_expr, parse_expr
from .families import (
    BarnesParams,
    SymMatrixParams,
    barnes_direct,
    barnes_zeta,
    ez_diagonal,
    ez_direct,
    sphere_mult_poly,
    sphere_spectral,
    symmat_zeta,
)
from .zeta import completed_zeta, hurwitz_zeta, riemann_zeta, rpow

SEED = 20240901


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.residual < self.threshold


def _sphere_printed_forms():
    """The four explicit low-dimension spectral zeta expressions."""
    def s1(s):
        return 2 * riemann_zeta(2 * s).z

    def s2(s):
        return (rpow(2.0, 2 * s) - 2) * riemann_zeta(2 * s - 1).z - rpow(4.0, s)

    def s3(s):
        return riemann_zeta(2 * s - 2).z - 1

    def s4(s):
        return ((rpow(2.0, 2 * s - 3) - 1) / 3 * riemann_zeta(2 * s - 3).z
                - (rpow(2.0, 2 * s - 3) - 0.25) / 3 * riemann_zeta(2 * s - 1).z
                - rpow(2.0 / 3.0, 2 * s - 3) / 3 + rpow(2.0 / 3.0, 2 * s) / 8)

    return {1: s1, 2: s2, 3: s3, 4: s4}


def sphere_direct_sum(n: int, s: complex, k_max: int = 10**6) -> complex:
    """Raw eigenvalue sum with binomial multiplicities; test-grade oracle."""
    k = np.arange(1, k_max, dtype=np.float64)
    mult = 2 * k + n - 1
    for i in range(1, n - 1):
        mult = mult * (k + i)
    mult /= math.factorial(n - 1)
    lam = (k + (n - 1) / 2.0) ** 2
    return complex(np.sum(mult * np.exp(-s * np.log(lam))))


def identity_checks(cfg: EvalConfig = DEFAULT_CONFIG) -> list[CheckResult]:
    out = []

    def add(name, residual, threshold):
        out.append(CheckResult("identities", name, float(abs(residual)), threshold))

    add("zeta(2)=pi^2/6", riemann_zeta(2, cfg).z - math.pi**2 / 6, 1e-10)
    add("ezd(2)@2=pi^4/120", ez_diagonal(2, 2, cfg).z - math.pi**4 / 120, 1e-10)
    add("ezd(3)@2=pi^6/5040", ez_diagonal(3, 2, cfg).z - math.pi**6 / 5040, 1e-10)

    for s1v, s2v in ((4, 2), (3, 3), (2.5, 2.5 + 2j)):
        lhs = riemann_zeta(s1v, cfg).z * riemann_zeta(s2v, cfg).z
        rhs = (ez_direct((s1v, s2v), cfg).z + ez_direct((s2v, s1v), cfg).z
               + riemann_zeta(s1v + s2v, cfg).z)
        add(f"harmonic({s1v},{s2v})", lhs - rhs, 1e-9)

    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(20):
        s = complex(rng.uniform(-2, 3), rng.uniform(-50, 50))
        if abs(s - 1) < 0.05:
            s += 0.1
        lhs = hurwitz_zeta(s, 0.5, cfg).z
        rhs = (rpow(2.0, s) - 1) * riemann_zeta(s, cfg).z
        worst = max(worst, abs(lhs - rhs))
    add("hurwitz-half-shift", worst, 10 * cfg.target_abs_err)

    for sv in (3.7, 2.2 + 1j, 4.0, 5.2 - 3j, 3.01):
        v = barnes_zeta(BarnesParams(2, 1.0), sv, cfg).z
        add(f"barnes2(s,1)=zeta(s-1)@{sv}", v - riemann_zeta(sv - 1, cfg).z, 1e-10)

    worst = 0.0
    for _ in range(6):
        a = float(rng.uniform(0.05, 1.0))
        s = complex(rng.uniform(-1, 3), rng.uniform(-10, 10))
        v = barnes_zeta(BarnesParams(2, a), s, cfg).z
        ref = (1 - a) * hurwitz_zeta(s, a, cfg).z + hurwitz_zeta(s - 1, a, cfg).z
        worst = max(worst, abs(v - ref))
    add("barnes2-explicit-form", worst, 1e-10)

    printed = _sphere_printed_forms()
    for n in (1, 2, 3, 4):
        worst = 0.0
        for _ in range(10):
            s = complex(rng.uniform(n / 2 - 0.2, n / 2 + 1.5), rng.uniform(-20, 20))
            if min(abs(s - (j + 1) / 2) for j in range(n)) < 0.05:
                s += 0.07
            worst = max(worst, abs(sphere_spectral(n, s, cfg).z - printed[n](s)))
        add(f"sphere-closed-form-n{n}", worst, 1e-10)

    for t in (5.0, 10.0, 30.0):
        s = complex(0.5, t)
        resid = (riemann_zeta(s, cfg).z ** 2 - 2 * ez_diagonal(2, s, cfg).z
                 - riemann_zeta(complex(1, 2 * t), cfg).z)
        add(f"lindelof-r2@t={t:g}", resid, 1e-8)
    s = complex(0.5, 10.0)
    z1 = riemann_zeta(s, cfg).z
    resid = (z1**3 / 6 - z1 * riemann_zeta(complex(1, 20), cfg).z / 2
             + riemann_zeta(3 * s, cfg).z / 3 - ez_diagonal(3, s, cfg).z)
    add("lindelof-r3@t=10", resid, 1e-7)

    v = completed_zeta(0.3 + 5j, cfg).z - completed_zeta(0.7 - 5j, cfg).z
    add("xi-functional-eq@0.3+5i", v, 1e-9)
    return out


def oracle_checks(cfg: EvalConfig = DEFAULT_CONFIG) -> list[CheckResult]:
    out = []

    def add(name, residual, threshold):
        out.append(CheckResult("oracles", name, float(abs(residual)), threshold))

    for r in (2, 3, 4, 5, 6):
        for s in (2.5, 3 + 2j):
            d = ez_diagonal(r, s, cfg).z
            b = ez_direct((s,) * r, cfg).z
            add(f"ez-diag-vs-direct-r{r}@{s}", abs(d - b) / abs(d), 1e-8)

    for r in (2, 3):
        for a in (0.3, 0.5, 1.0):
            for s in (r + 1.0, r + 1.5 + 2j):
                v1 = barnes_zeta(BarnesParams(r, a), s, cfg).z
                v2 = barnes_direct(BarnesParams(r, a), s, cfg).z
                add(f"barnes-r{r}-a{a}@{s}", abs(v1 - v2) / abs(v1), 1e-8)

    for n in (2, 3, 4):
        s = n / 2 + 1.0
        v = sphere_spectral(n, s, cfg).z
        d = sphere_direct_sum(n, s)
        add(f"sphere-direct-n{n}", abs(v - d) / abs(v), 1e-8)

    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(10):
        s1 = complex(rng.uniform(1.5, 3.5), rng.uniform(-5, 5))
        s2 = complex(rng.uniform(1.5, 3.5), rng.uniform(-5, 5))
        lhs = riemann_zeta(s1, cfg).z * riemann_zeta(s2, cfg).z
        rhs = (ez_direct((s1, s2), cfg).z + ez_direct((s2, s1), cfg).z
               + riemann_zeta(s1 + s2, cfg).z)
        worst = max(worst, abs(lhs - rhs))
    add("harmonic-random10", worst, 1e-9)
    return out


def symmetry_checks(cfg: EvalConfig = DEFAULT_CONFIG) -> list[CheckResult]:
    out = []

    def add(name, residual, threshold):
        out.append(CheckResult("symmetry", name, float(abs(residual)), threshold))

    rng = np.random.default_rng(SEED + 2)

    def conj_resid(f, s):
        a = f(s)
        b = f(s.conjugate())
        return abs(b - a.conjugate()) / max(abs(a), 1e-300)

    worst = {"zeta": 0.0, "hurwitz": 0.0, "xi": 0.0}
    for _ in range(8):
        s = complex(rng.uniform(-1.5, 3), rng.uniform(0.5, 40))
        worst["zeta"] = max(worst["zeta"], conj_resid(lambda z: riemann_zeta(z, cfg).z, s))
        worst["hurwitz"] = max(
            worst["hurwitz"], conj_resid(lambda z: hurwitz_zeta(z, 0.3, cfg).z, s)
        )
        s_xi = complex(rng.uniform(0.1, 0.9), rng.uniform(1, 30))
        worst["xi"] = max(worst["xi"], conj_resid(lambda z: completed_zeta(z, cfg).z, s_xi))
    for name, w in worst.items():
        add(f"conj-{name}", w, 1e-12)

    add("conj-ezd3", conj_resid(lambda z: ez_diagonal(3, z, cfg).z, 1.4 + 9j), 1e-12)
    add("conj-barnes2",
        conj_resid(lambda z: barnes_zeta(BarnesParams(2, 0.3), z, cfg).z, 2.3 + 5j), 1e-12)
    add("conj-sphere3", conj_resid(lambda z: sphere_spectral(3, z, cfg).z, 1.9 + 4j), 1e-12)
    add("conj-symmat3",
        conj_resid(lambda z: symmat_zeta(SymMatrixParams(3, "Ln", 1, 1), z, cfg).z,
                   1.8 + 7j), 1e-12)
    expr = parse_expr("zeta(s)^2-zeta(2*s)+dirichlet[(1,0),(-1,0.5)]")
    add("conj-expression", conj_resid(lambda z: eval_expr(expr, z, cfg).z, 0.8 + 11j), 1e-12)
    return out


SUITES = {
    "identities": identity_checks,
    "oracles": oracle_checks,
    "symmetry": symmetry_checks,
}


def run_suite(name: str, cfg: EvalConfig = DEFAULT_CONFIG) -> list[CheckResult]:
    if name == "all":
        results = []
        for key in ("identities", "oracles", "symmetry"):
            results.extend(SUITES[key](cfg))
        return results
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from identities, oracles, symmetry, all")
    return SUITES[name](cfg)
