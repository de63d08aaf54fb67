"""Randomised audits of the elementary inequalities and the inclusion constants.

Every suite returns a :class:`SuiteResult`; a violation is a defect below
``-slack``.  Sequences are normalised to unit source norm before constant
checks so that the absolute slack is meaningful.
"""

from dataclasses import dataclass

import numpy as np

from .catalog import EmbeddingSpec, classify, series_norm
from .norms import INF, _inv, lorentz, norm_rows, rearrangement_bound_constant

SLACK = 1e-9
L_AUDIT = 24


@dataclass
class SuiteResult:
    name: str
    cases: int
    violations: int
    min_defect: float

    def to_dict(self):
        return {"name": self.name, "cases": self.cases, "violations": self.violations,
                "min_defect": self.min_defect}


def _result(name, defects, slack=SLACK):
    defects = np.asarray(defects, dtype=np.float64)
    return SuiteResult(name, int(defects.size), int(np.count_nonzero(defects < -slack)),
                       float(defects.min()))


def random_sequences(rng, n, L=L_AUDIT, p=None):
    """Mixed test rows: dense, sparse, ties, block indicators and power decay."""
    kind = rng.integers(0, 5, size=n)
    Y = rng.standard_normal((n, L)) * np.exp(rng.normal(0, 1, (n, 1)))
    support = (L ** rng.random(n)).astype(int)
    mask = np.arange(L)[None, :] >= support[:, None]
    Y[(kind == 1)[:, None] & mask] = 0.0
    ties = kind == 2
    Y[ties] = np.round(Y[ties])
    blocks = kind == 3
    Y[blocks] = np.where(mask[blocks], 0.0, 1.0)
    decay = kind == 4
    if p is not None and p < INF:
        prof = np.arange(1, L + 1, dtype=np.float64) ** (-1.0 / p)
    else:
        prof = np.ones(L)
    Y[decay] = np.where(mask[decay], 0.0, prof[None, :])
    zero = ~np.any(Y != 0.0, axis=1)
    Y[zero, 0] = 1.0
    signs = rng.choice([-1.0, 1.0], size=Y.shape)
    return rng.permuted(Y * signs, axis=1)


def audit_scalar_lemmas(n, rng):
    x = np.exp(rng.uniform(np.log(1e-2), np.log(10.0), n))
    y = np.exp(rng.uniform(np.log(1e-2), np.log(10.0), n))
    y[: n // 10] = x[: n // 10]  # equality cases
    q_big = rng.uniform(1.0, 4.0, n)
    q_small = rng.uniform(0.05, 1.0, n)
    d1 = 2.0 ** (q_big - 1.0) * (x**q_big + y**q_big) - (x + y) ** q_big
    d2 = x**q_small + y**q_small - (x + y) ** q_small
    return [_result("power-sum q>=1", d1), _result("power-sum 0<q<1", d2)]


# p <= q, where the 2^{1/p} constant is proved
QUASI_PARAMS = [(0.5, 0.5), (0.25, 0.5), (0.5, 2.0), (1.0, 2.0), (2.0, INF), (1.0, INF), (2.0, 3.0)]


def audit_quasi_triangle(n, rng):
    out = []
    for p, q in QUASI_PARAMS:
        s = lorentz(p, q)
        A = random_sequences(rng, n)
        B = random_sequences(rng, n)
        d = 2.0 ** _inv(p) * (norm_rows(A, s) + norm_rows(B, s)) - norm_rows(A + B, s)
        out.append(_result(f"quasi-triangle p={p:g} q={q:g}", d))
    for p, q in [(2.0, 1.0), (3.0, 2.0), (INF, 1.0), (2.0, 2.0), (1.0, 1.0)]:
        s = lorentz(p, q)
        A = random_sequences(rng, n)
        B = random_sequences(rng, n)
        d = norm_rows(A, s) + norm_rows(B, s) - norm_rows(A + B, s)
        out.append(_result(f"triangle p={p:g} q={q:g}", d))
    return out


BOUND_PARAMS = [(1.0, 2.0), (2.0, 1.0), (2.0, 2.0), (0.5, 3.0), (3.0, 0.5), (INF, 2.0)]


def audit_rearrangement_bound(n, rng):
    out = []
    for p, q in BOUND_PARAMS:
        s = lorentz(p, q)
        A = random_sequences(rng, n, p=p)
        A /= norm_rows(A, s)[:, None]
        V = -np.sort(-np.abs(A), axis=1)
        k = np.arange(1, A.shape[1] + 1, dtype=np.float64)
        C = rearrangement_bound_constant(p, q)
        d = C * k ** (-_inv(p)) - V
        branch = "p<=q" if p <= q else "q<p"
        out.append(_result(f"a_n* bound {branch} p={p:g} q={q:g}", d.min(axis=1)))
    return out


def _draw_case(case, rng, restricted=False):
    """Random (p1, q1, p2, q2) satisfying one inclusion case with p1 < p2.

    ``restricted`` adds q2 >= q1 to case 1 and q2 = q1 to case 4, the
    ranges where the unit constant is actually proved.
    """
    p1 = rng.uniform(0.4, 4.0)
    p2 = INF if rng.random() < 0.2 else p1 * rng.uniform(1.05, 3.0)
    if case == 1:
        q1 = rng.uniform(0.2, p1)
        q2 = INF if rng.random() < 0.25 else rng.uniform(q1 if restricted else 0.2, 6.0)
    elif case == 2:
        q1, q2 = INF, rng.uniform(0.3, 6.0)
    elif case == 3:
        q1 = p1 * rng.uniform(1.05, 4.0)
        q2 = INF if rng.random() < 0.3 else q1 * rng.uniform(1.05, 3.0)
    elif case == 4:
        q1 = p1 * rng.uniform(1.05, 4.0)
        q2 = q1 if restricted else rng.uniform(0.2, q1)
    else:
        q1 = q2 = INF
    return p1, q1, p2, q2


def inclusion_constant(case, p1, q1, p2, q2):
    if case in (1, 4, 5):
        return 1.0
    if case == 2:
        return series_norm(p1, p2, q2, rel_tol=1e-10).hi
    return (q1 / p1) ** (1.0 / q1 - _inv(q2))


def _inclusion_suite(name, case, n, rng, groups, restricted=False):
    per = max(1, n // groups)
    defects = []
    for _ in range(groups):
        p1, q1, p2, q2 = _draw_case(case, rng, restricted)
        C = inclusion_constant(case, p1, q1, p2, q2)
        A = random_sequences(rng, per, p=p1)
        A /= norm_rows(A, lorentz(p1, q1))[:, None]
        defects.append(C - norm_rows(A, lorentz(p2, q2)))
    return _result(name, np.concatenate(defects))


def audit_weak_chain(n, rng, groups=100):
    """The catalog constant for q2 < q1 < inf, p1 < p2 (bound through ell^{p1,inf})."""
    per = max(1, n // groups)
    defects = []
    for _ in range(groups):
        p1 = rng.uniform(0.4, 4.0)
        p2 = INF if rng.random() < 0.2 else p1 * rng.uniform(1.05, 3.0)
        q1 = rng.uniform(0.3, 8.0)
        q2 = rng.uniform(0.2, q1)
        C = classify(EmbeddingSpec(lorentz(p1, q1), lorentz(p2, q2))).constant.hi
        A = random_sequences(rng, per, p=p1)
        A /= norm_rows(A, lorentz(p1, q1))[:, None]
        defects.append(C - norm_rows(A, lorentz(p2, q2)))
    return _result("inclusion q2 < q1 via weak space", np.concatenate(defects))


def audit_inclusion_constants(n, rng, groups=100):
    """All five constants of the p1 < p2 inclusion theorem over their stated
    hypotheses, the two unit-constant cases over the ranges where they hold,
    and the two same-p constants.

    Cases 1 and 4 as stated admit q2 < q1, where the unit constant fails
    (``(1, 1)`` in ell^{3,2} -> ell^{4,1} has ratio about 1.19), so those two
    suites report violations.
    """
    out = [_inclusion_suite(f"inclusion case {case}", case, n, rng, groups)
           for case in (1, 2, 3, 4, 5)]
    out.append(_inclusion_suite("inclusion case 1, q2 >= q1", 1, n, rng, groups, True))
    out.append(_inclusion_suite("inclusion case 4, q2 = q1", 4, n, rng, groups, True))
    out.append(audit_weak_chain(n, rng, groups))
    per = max(1, n // groups)
    for label in ("p<q1", "p>=q1"):
        defects = []
        for _ in range(groups):
            p = rng.uniform(0.4, 4.0)
            q1 = p * rng.uniform(1.05, 3.0) if label == "p<q1" else rng.uniform(0.2, p)
            q2 = INF if rng.random() < 0.3 else q1 * rng.uniform(1.05, 3.0)
            C = (q1 / p) ** (1.0 / q1 - _inv(q2)) if label == "p<q1" else 1.0
            A = random_sequences(rng, per, p=p)
            A /= norm_rows(A, lorentz(p, q1))[:, None]
            defects.append(C - norm_rows(A, lorentz(p, q2)))
        out.append(_result(f"same-p constant {label}", np.concatenate(defects)))
    return out


def run_audits(samples=10_000, seed=0):
    rng = np.random.default_rng(seed)
    suites = []
    suites += audit_scalar_lemmas(samples, rng)
    suites += audit_quasi_triangle(samples, rng)
    suites += audit_rearrangement_bound(samples, rng)
    suites += audit_inclusion_constants(samples, rng)
    return suites
