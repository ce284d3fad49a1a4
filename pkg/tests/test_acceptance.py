"""Acceptance criteria 1-8.

Each criterion is a plain function returning ``(ok, detail)``; the pytest
wrappers enforce the time limit and print one PASS/FAIL line each.  Run
``python3 tests/test_acceptance.py`` for the same lines without pytest.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from hypsupport import cohomology as co
from hypsupport import qci, suites, tate
from hypsupport.fields import field_create
from hypsupport.io import load_problem

try:
    from .conftest import PROBLEMS_DIR
except ImportError:  # run as a script
    from conftest import PROBLEMS_DIR


# -- algebra zoo --------------------------------------------------------------

# quantum parameters (p, e, l, q): q has exact order l in F_{p^e}
_QUANTUM = [(2, 2, 3, [0, 1]), (3, 1, 2, 2), (3, 2, 4, None), (5, 1, 2, 4), (5, 1, 4, 2)]


def _element_of_order(F, l):
    for x in range(1, F.order):
        if F.mult_order(x) == l:
            return x
    raise AssertionError(f"no element of order {l} in {F}")


def random_algebra(rng):
    """Random algebra with n <= 3, p in {2,3,5}, l in {2,3,4}, in either regime."""
    n = int(rng.integers(1, 4))
    if rng.random() < 0.5:
        p, l = int(rng.choice([2, 3, 5])), int(rng.choice([2, 3, 4]))
        if n == 3 and l == 4:
            l = 3
        return qci.algebra_create(field_create(p), n, l, 1, np.zeros((n, n), dtype=int))
    p, e, l, q = _QUANTUM[int(rng.integers(len(_QUANTUM)))]
    if n == 3 and l == 4:
        n = 2
    F = field_create(p, e)
    q = _element_of_order(F, l) if q is None else q
    upper = rng.integers(0, l, size=(n, n))
    a = np.triu(upper, 1)
    a = a - a.T
    return qci.algebra_create(F, n, l, q, a)


def random_point(rng, F, n):
    while True:
        coords = [int(x) for x in F.random(rng, n)]
        if any(coords):
            return tate.make_point(F, coords)


def shipped():
    """The three example problems shipped in ``problems/``."""
    return {p.stem: load_problem(p) for p in sorted(PROBLEMS_DIR.glob("*.json"))}


def rank_three():
    """n = 3 algebras, one per regime."""
    return {
        "(Z/2)^3": qci.algebra_create(field_create(2), 3, 2, 1, np.zeros((3, 3), dtype=int)),
        "quantum n=3 over F_3": qci.algebra_create(field_create(3), 3, 2, 2, [[0, 1, 1], [1, 0, 0], [1, 0, 0]]),
    }


# -- criteria -----------------------------------------------------------------


def criterion_1():
    rng = np.random.default_rng(2024)
    pairs = [(alg, random_point(rng, alg.field, alg.n)) for alg in (random_algebra(rng) for _ in range(200))]
    regimes = {alg.regime for alg, _ in pairs}
    for alg, c in pairs:
        tate.tate_complex(alg, c, 0, alg.n + 5).assert_d2()
    bad = []
    for j in range(50):
        alg, c = pairs[j]
        M = qci.corpus_generate(alg, 1000 + j, 1)[0]
        t = tate.tor_dims(alg, M, c, alg.n, alg.n + 6)
        if any(t[i] != t[i + 2] for i in range(alg.n, alg.n + 5)):
            bad.append((j, t))
    ok = not bad and regimes == {qci.QUANTUM, qci.COMMUTATIVE}
    return ok, f"200 complexes with D^2 = 0, regimes {sorted(regimes)}, periodicity failures {len(bad)}/50"


def criterion_2():
    alg = qci.algebra_create(field_create(5), 1, 4, 1, [[0]])
    k, R = qci.trivial_module(alg), qci.regular_module(alg)
    c = tate.make_point(alg.field, [1])
    dims = tate.tor_dims(alg, k, c, 0, 5)
    ok = list(dims.values()) == [1] * 6 and tate.supported_at(alg, k, c) and not tate.supported_at(alg, R, c)
    return ok, f"Tor(k) on 0..5 = {list(dims.values())}"


def criterion_3():
    lines, ok = [], True
    for n, p in ((2, 2), (2, 3), (3, 2)):
        alg = qci.algebra_create(field_create(p), n, p, 1, np.zeros((n, n), dtype=int))
        corpus = suites.named_corpus(alg, 30 + n + p, 30)
        for e in (1, 2):
            rep = suites.suite_rank_variety(alg, corpus, e)
            ok &= rep.passed and len(rep.cases) == 30
            lines.append(f"(n={n},p={p},e={e}) {len(rep.cases) - len(rep.failures)}/30")
    return ok, "; ".join(lines)


def _pairs(alg, rng, count):
    """``count`` pairs (f, g) with g - f in m_Z^2; g always gains y_1 y_n (or y_1^2 when n = 1)."""
    F, n = alg.field, alg.n
    out = []
    for _ in range(count):
        lin = {}
        while not lin:
            for i in range(n):
                c = int(F.random(rng))
                if c:
                    lin[tuple(int(t == i) for t in range(n))] = c
        f_terms = dict(lin)
        for _ in range(2):
            alpha = tuple(int(x) for x in rng.integers(0, 3, size=n))
            if sum(alpha) >= 2:
                f_terms[alpha] = int(F.random(rng)) or 1
        g_terms = dict(f_terms)
        extra = tuple(1 if t in (0, n - 1) else 0 for t in range(n)) if n > 1 else (2,)
        g_terms[extra] = int(F.add(g_terms.get(extra, 0), 1))
        alpha = tuple(int(x) for x in rng.integers(0, 3, size=n))
        if sum(alpha) >= 2:
            g_terms[alpha] = int(F.add(g_terms.get(alpha, 0), int(F.random(rng))))
        out.append((tate.hypersurface_poly(F, n, f_terms), tate.hypersurface_poly(F, n, g_terms)))
    return out


def criterion_4():
    rng = np.random.default_rng(4)
    ok, lines = True, []
    for name, prob in shipped().items():
        alg = prob.algebra
        corpus = suites.named_corpus(alg, 40, 20)
        differ = 0
        for f, g in _pairs(alg, rng, 5):
            rep = suites.suite_representative_independence(alg, f, g, corpus)
            ok &= rep.passed
            differ += rep.cases[0]["divisions_differ"]
        ok &= differ >= 1
        lines.append(f"{name}: 5 pairs x 20 modules, {differ} with differing divisions")
    return ok, "; ".join(lines)


def criterion_5():
    ok, lines = True, []
    cases = [(name, prob.algebra, prob.modules) for name, prob in shipped().items()]
    cases += [(name, alg, suites.designed_modules(alg)) for name, alg in rank_three().items()]
    for name, alg, designed in cases:
        corpus = {**designed, **suites.named_corpus(alg, 50, 50)}
        for e in suites.relative_degrees(alg):
            rep = suites.suite_route_agreement(alg, corpus, e, exact=set(designed))
            ok &= rep.passed
            lines.append(f"{name} e={e}: {len(rep.cases) - len(rep.failures)}/{len(rep.cases)}")
    ok &= _expected_loci()
    return ok, "; ".join(lines) + "; designed zero loci match"


def _expected_loci():
    ea = shipped()["elementary_abelian_2x2"]
    alg = ea.algebra
    expect = {"V": [(1, 0)], "R": []}
    for name, pts in expect.items():
        ann = co.annihilator_window(alg, ea.modules[name])
        if [P.coords for P in co.zero_locus(alg, ann, 1)] != pts:
            return False
    ann_k = co.annihilator_window(alg, ea.modules["k"])
    return len(co.zero_locus(alg, ann_k, 2)) == 5


def criterion_6():
    ok, lines = True, []
    algebras = {name: prob.algebra for name, prob in shipped().items()} | rank_three()
    for name, alg in algebras.items():
        corpus = {**suites.designed_modules(alg), **suites.named_corpus(alg, 60, 30)}
        rep = suites.suite_detection(alg, corpus)
        ok &= rep.passed
        n_free = sum(c["free"] for c in rep.cases)
        lines.append(f"{name}: {len(rep.cases)} modules ({n_free} free)")
    return ok, "; ".join(lines)


def criterion_7():
    algebras = [
        qci.algebra_create(field_create(2), 1, 2, 1, [[0]]),
        qci.algebra_create(field_create(2), 2, 2, 1, [[0, 0], [0, 0]]),
        qci.algebra_create(field_create(2), 3, 2, 1, np.zeros((3, 3), dtype=int)),
        qci.algebra_create(field_create(5), 1, 4, 2, [[0]]),
        qci.algebra_create(field_create(5), 2, 4, 2, [[0, 1], [-1, 0]]),
        qci.algebra_create(field_create(3), 3, 2, 2, [[0, 1, 1], [1, 0, 0], [1, 0, 0]]),
    ]
    ok, lines = True, []
    for alg in algebras:
        betti = co.minimal_resolution(alg, qci.trivial_module(alg), 8).betti
        want = [co.poincare_betti(alg.n, s) for s in range(9)]
        ok &= betti == want
        lines.append(f"{alg.regime[0]} n={alg.n}: {betti}")
    return ok, "; ".join(lines)


def _short_exact_sequences(alg, seed, count):
    """``count`` sequences ``0 -> N -> M -> M/N -> 0``, ``N`` generated by one or two random elements."""
    rng = np.random.default_rng(seed)
    out = []
    batch = 0
    while len(out) < count:
        for M in qci.corpus_generate(alg, seed + 1000 * batch, count):
            gens = alg.field.random(rng, (int(rng.integers(1, 3)), M.dim))
            B, piv = qci.span_closure(M, gens)
            N, Q = qci.submodule(M, B, piv), qci.quotient(M, B, piv)
            if N.dim and Q.dim and len(out) < count:
                out.append((N, M, Q))
        batch += 1
    return out


def criterion_8():
    ea = qci.algebra_create(field_create(2), 2, 2, 1, [[0, 0], [0, 0]])
    qu = qci.algebra_create(field_create(5), 2, 4, 2, [[0, 1], [-1, 0]])
    counts = dict.fromkeys(("sum", "triangle", "scaling", "syzygy", "extension"), 0)
    failures = []

    def check(rule, cond):
        counts[rule] += 1
        if not cond:
            failures.append(rule)

    n_ses = 0
    for alg, seed in ((ea, 80), (qu, 81)):
        F = alg.field
        ext = field_create(F.p, 2 * F.e)
        pts = tate.enumerate_points(ext, alg.n)
        algK = alg.base_change(ext)
        sup = lambda M, P: tate.supported_at(algK, qci.base_change(M, ext), P)  # noqa: E731
        seqs = _short_exact_sequences(alg, seed, 10)
        n_ses += len(seqs)
        for N, M, Q in seqs:
            for P in pts:
                sN, sM, sQ = sup(N, P), sup(M, P), sup(Q, P)
                check("triangle", (not sM) or sN or sQ)
                check("triangle", (not sN) or sM or sQ)
                check("triangle", (not sQ) or sN or sM)
                check("sum", sup(qci.direct_sum(N, Q), P) == (sN or sQ))
            if not qci.module_is_free(alg, M):
                O = qci.syzygy(alg, M)
                for P in pts:
                    check("syzygy", sup(O, P) == sup(M, P))
        for M in qci.corpus_generate(alg, seed + 10, 5):
            for P in tate.enumerate_points(F, alg.n):
                base = tate.tor_dims(alg, M, tate.cocycle_for_point(alg, P), alg.n + 1, alg.n + 2)
                for lam in range(2, F.order):
                    raw = tate._cocycle_from_linear(alg, [int(F.mul(lam, c)) for c in P.coords])
                    check("scaling", tate.tor_dims(alg, M, raw, alg.n + 1, alg.n + 2) == base)
                check("extension", tate.supported_at(alg, M, P) == sup(M, P.over(ext)))
    ok = not failures and n_ses >= 20
    detail = f"{n_ses} short exact sequences; checks " + ", ".join(f"{k} {v}" for k, v in counts.items())
    return ok, detail + (f"; failed {sorted(set(failures))}" if failures else "")


CRITERIA = [
    (1, "structural soundness", criterion_1, 60),
    (2, "n = 1 oracle", criterion_2, 1),
    (3, "rank-variety agreement", criterion_3, 120),
    (4, "representative independence", criterion_4, 60),
    (5, "route agreement", criterion_5, 300),
    (6, "detection", criterion_6, 120),
    (7, "Poincare series", criterion_7, 30),
    (8, "support axioms", criterion_8, 120),
]


def run_criterion(fn, limit):
    t0 = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - t0
    return ok and elapsed < limit, elapsed, detail


def _line(num, title, ok, elapsed, limit, detail):
    return f"[criterion {num}] {'PASS' if ok else 'FAIL'} {title} ({elapsed:.2f}s / {limit}s): {detail}"


@pytest.mark.parametrize("num,title,fn,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn, limit, capsys):
    ok, elapsed, detail = run_criterion(fn, limit)
    with capsys.disabled():
        print("\n" + _line(num, title, ok, elapsed, limit, detail))
    assert ok, detail


if __name__ == "__main__":
    for num, title, fn, limit in CRITERIA:
        ok, elapsed, detail = run_criterion(fn, limit)
        print(_line(num, title, ok, elapsed, limit, detail))
