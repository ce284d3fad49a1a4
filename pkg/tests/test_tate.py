import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypsupport import qci, tate
from hypsupport.errors import EnumerationTooLarge, ValidationError, ZeroLinearPart
from hypsupport.fields import field_create

F2, F4, F5 = field_create(2), field_create(2, 2), field_create(5)


def poly(F, n, terms):
    return tate.hypersurface_poly(F, n, terms)


# -- points and hypersurfaces ----------------------------------------------


def test_points_are_normalised():
    P = tate.make_point(F5, [0, 3])
    assert P.coords == (0, 1)
    assert tate.make_point(F5, [2, 4]).coords == (1, 2)
    with pytest.raises(ValidationError):
        tate.make_point(F5, [0, 0])


@pytest.mark.parametrize("pe,n", [((2, 1), 2), ((2, 2), 2), ((5, 1), 2), ((3, 1), 3)])
def test_point_count(pe, n):
    F = field_create(*pe)
    pts = tate.enumerate_points(F, n)
    assert len(pts) == (F.order**n - 1) // (F.order - 1)
    assert len(set(pts)) == len(pts)


def test_enumeration_limit():
    with pytest.raises(EnumerationTooLarge):
        tate.enumerate_points(field_create(2, 8), 4)


def test_division_examples():
    assert tate.divide_by_generators(poly(F5, 2, {(1, 0): 1})) == [{(0, 0): 1}, {}]
    assert tate.divide_by_generators(poly(F5, 2, {(1, 0): 1, (1, 1): 1})) == [{(0, 0): 1, (0, 1): 1}, {}]
    f = poly(F5, 2, {(0, 2): 1})
    assert tate.divide_by_generators(f) == [{}, {(0, 1): 1}]
    assert f.linear_part == (0, 0)


def test_constant_term_rejected():
    with pytest.raises(ValidationError):
        poly(F5, 1, {(0,): 1})


def test_cocycle_single_generator(cyclic4):
    z = tate.bounding_cocycle_reduced(cyclic4, poly(F5, 1, {(1,): 1}))
    assert z.terms == ((0, {(3,): 1}),)


def test_cocycle_independent_of_higher_terms(quantum5):
    f = poly(F5, 2, {(1, 0): 1, (1, 1): 1})
    g = poly(F5, 2, {(1, 0): 1})
    assert tate.divide_by_generators(f) != tate.divide_by_generators(g)
    assert tate.bounding_cocycle_reduced(quantum5, f) == tate.bounding_cocycle_reduced(quantum5, g)


def test_zero_linear_part(cyclic4):
    with pytest.raises(ZeroLinearPart):
        tate.bounding_cocycle_reduced(cyclic4, poly(F5, 1, {(2,): 1}))


# -- the complex -------------------------------------------------------------


def test_cyclic_complex_shape(cyclic4):
    T = tate.tate_complex(cyclic4, tate.make_point(F5, [1]), 0, 4)
    assert [T.rank(d) for d in range(4)] == [1, 1, 1, 1]
    for d in range(1, 5):
        entry = T.differential_as_r_matrix(d)[0][0]
        assert list(entry) == [(1,) if d % 2 else (3,)]


def test_rank_counts_n2(quantum5):
    T = tate.tate_complex(quantum5, tate.make_point(F5, [1, 2]), 0, 4)
    assert [T.rank(d) for d in range(5)] == [1, 2, 2, 2, 2]


ALGEBRAS = [
    (2, 1, 2, 2, 1, [[0, 0], [0, 0]]),
    (3, 1, 3, 3, 1, [[0] * 3] * 3),
    (5, 1, 2, 4, 2, [[0, 1], [-1, 0]]),
    (3, 1, 3, 2, 2, [[0, 1, 1], [1, 0, 1], [1, 1, 0]]),
    (2, 2, 2, 3, [0, 1], [[0, 1], [-1, 0]]),
    (5, 1, 3, 4, 3, [[0, 1, 2], [-1, 0, 3], [-2, -3, 0]]),
]


def _alg(case):
    p, e, n, l, q, a = case
    return qci.algebra_create(field_create(p, e), n, l, q, a)


@pytest.mark.parametrize("case", ALGEBRAS)
@settings(max_examples=10, deadline=None)
@given(data=st.data())
def test_d_squared_zero(case, data):
    alg = _alg(case)
    F = alg.field
    coords = data.draw(st.lists(st.integers(0, F.order - 1), min_size=alg.n, max_size=alg.n).filter(any))
    T = tate.tate_complex(alg, tate.make_point(F, coords), 0, alg.n + 4)
    T.assert_d2()
    # and after tensoring with a module the ChainComplex check passes too
    M = qci.corpus_generate(alg, data.draw(st.integers(0, 100)), 1)[0]
    T.tensor(M)


# -- Tor and support ---------------------------------------------------------


def test_cyclic_tor_oracle(cyclic4):
    k, R = qci.trivial_module(cyclic4), qci.regular_module(cyclic4)
    c = tate.make_point(F5, [1])
    assert tate.tor_dims(cyclic4, k, c, 0, 5) == {i: 1 for i in range(6)}
    assert tate.supported_at(cyclic4, k, c)
    assert not tate.supported_at(cyclic4, R, c)


def test_regular_never_supported(quantum5):
    for e in (1, 2):
        rep = tate.support_enumerate(quantum5, qci.regular_module(quantum5), e)
        assert rep.supported == []


def test_trivial_supported_everywhere(ea22):
    rep = tate.support_enumerate(ea22, qci.trivial_module(ea22), 1)
    assert len(rep.points) == 3 and len(rep.supported) == 3


def test_ideal_quotient_support_over_f4(ea22):
    rep = tate.support_enumerate(ea22, qci.ideal_quotient(ea22, [[1]]), 2)
    assert len(rep.points) == 5
    assert [P.coords for P in rep.supported] == [(1, 0)]
    js = rep.to_json()
    assert js["supported"] == [[[1, 0], [0, 0]]]


@pytest.mark.parametrize("fixture", ["ea22", "quantum5"])
def test_periodicity(fixture, request):
    alg = request.getfixturevalue(fixture)
    pts = tate.enumerate_points(alg.field, alg.n)
    for j, M in enumerate(qci.corpus_generate(alg, 21, 6)):
        c = pts[j % len(pts)]
        t = tate.tor_dims(alg, M, c, alg.n, alg.n + 6)
        assert all(t[i] == t[i + 2] for i in range(alg.n, alg.n + 5))


def test_scaling_before_normalisation(quantum5):
    F = quantum5.field
    M = qci.ideal_quotient(quantum5, [[1]])
    for coords in ([1, 0], [1, 3], [0, 1]):
        base = tate.tor_dims(quantum5, M, tate.cocycle_for_point(quantum5, tate.make_point(F, coords)), 2, 4)
        for lam in range(2, 5):
            raw = tate._cocycle_from_linear(quantum5, [int(F.mul(lam, c)) for c in coords])
            assert tate.tor_dims(quantum5, M, raw, 2, 4) == base


def test_field_extension_invariance(ea22):
    M = qci.corpus_generate(ea22, 4, 3)
    F16 = field_create(2, 4)
    for N in M:
        for P in tate.enumerate_points(F4, 2):
            assert tate.supported_at(ea22, N, P) == tate.supported_at(ea22, N, P.over(F16))


def test_sum_rule(quantum5):
    A, B = qci.corpus_generate(quantum5, 8, 2)
    S = qci.direct_sum(A, B)
    for P in tate.enumerate_points(F5, 2):
        assert tate.supported_at(quantum5, S, P) == (
            tate.supported_at(quantum5, A, P) or tate.supported_at(quantum5, B, P)
        )


def test_syzygy_invariance(ea22):
    for M in qci.corpus_generate(ea22, 9, 4):
        if qci.module_is_free(ea22, M):
            continue
        O = qci.syzygy(ea22, M)
        for P in tate.enumerate_points(F4, 2):
            assert tate.supported_at(ea22, O, P) == tate.supported_at(ea22, M, P)


def test_report_json_is_plain(quantum5):
    import json

    rep = tate.support_enumerate(quantum5, qci.trivial_module(quantum5), 1, "k")
    text = json.dumps(rep.to_json())
    assert json.loads(text)["module"] == "k"
    assert np.all([p["supported"] for p in rep.to_json()["points"]])
