import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qwolct.quat import (
    I,
    J,
    K,
    ONE,
    ComplexPair,
    cd_join,
    cd_split,
    exp_i,
    exp_j,
    from_complex,
    from_left_pairs,
    from_right_pairs,
    left_pairs,
    qconj,
    qinner,
    qinv,
    qmul,
    qnorm,
    quat,
    right_pairs,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
quats = arrays(np.float64, 4, elements=finite)


def test_unit_table():
    assert np.array_equal(qmul(I, J), K)
    assert np.array_equal(qmul(J, K), I)
    assert np.array_equal(qmul(K, I), J)
    for u in (I, J, K):
        assert np.array_equal(qmul(u, u), -ONE)
    assert np.array_equal(qmul(qmul(I, J), K), -ONE)


def test_anticommutation_exact():
    for u in (I, J, K):
        for v in (I, J, K):
            if u is not v:
                assert np.array_equal(qmul(u, v), -qmul(v, u))


def test_hand_expanded_products():
    assert np.allclose(qmul(quat(1, 1), quat(1, 0, 1)), quat(1, 1, 1, 1))
    assert np.allclose(qmul(quat(1, 2, 3, 4), quat(5, 6, 7, 8)), quat(-60, 12, 30, 24))


def test_conj_and_norm_examples():
    assert np.array_equal(qconj(quat(1, 1, 1, 1)), quat(1, -1, -1, -1))
    assert qnorm(quat(1, 1, 1, 1)) == 2.0
    assert qnorm(quat()) == 0.0
    assert np.array_equal(qconj(quat(3.5)), quat(3.5))


@given(quats)
def test_identity_and_involution(q):
    assert np.array_equal(qmul(ONE, q), q)
    assert np.array_equal(qconj(qconj(q)), q)


@given(quats)
def test_self_product_is_real(q):
    p = qmul(q, qconj(q))
    assert np.all(np.abs(p[1:]) <= 1e-14 * max(1.0, qnorm(q) ** 2))


@given(quats, quats)
def test_norm_multiplicative(a, b):
    lhs = qnorm(qmul(a, b))
    assert lhs == pytest.approx(qnorm(a) * qnorm(b), rel=1e-12, abs=1e-300)


def test_norm_multiplicative_bulk(rng):
    a = rng.standard_normal((10_000, 4))
    b = rng.standard_normal((10_000, 4))
    rel = np.abs(qnorm(qmul(a, b)) - qnorm(a) * qnorm(b)) / (qnorm(a) * qnorm(b))
    assert rel.max() < 1e-12


def test_associative(rng):
    a, b, c = rng.standard_normal((3, 1000, 4))
    lhs = qmul(qmul(a, b), c)
    rhs = qmul(a, qmul(b, c))
    assert np.max(qnorm(lhs - rhs) / qnorm(lhs)) < 1e-12


@given(quats, quats)
def test_conj_reverses_products(a, b):
    lhs = qconj(qmul(a, b))
    rhs = qmul(qconj(b), qconj(a))
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-9)


def test_split_examples():
    p = cd_split(quat(1, 2, 3, 4))
    assert p.f1 == 1 + 2j and p.f2 == 3 - 4j
    p = cd_split(J)
    assert p.f1 == 0 and p.f2 == 1


def test_split_join_exact(rng):
    q = rng.standard_normal((1000, 4))
    assert np.array_equal(cd_join(cd_split(q)), q)


def test_split_is_f1_plus_j_f2(rng):
    q = rng.standard_normal((50, 4))
    f1, f2 = cd_split(q)
    rebuilt = from_complex(f1, "i") + qmul(J, from_complex(f2, "i"))
    assert np.allclose(rebuilt, q, atol=1e-15)


def test_x_j_equals_j_conj_x(rng):
    z = rng.standard_normal(100) + 1j * rng.standard_normal(100)
    x = from_complex(z, "i")
    assert np.array_equal(qmul(x, J), qmul(J, from_complex(np.conj(z), "i")))


def test_inner_examples():
    q = quat(1, -2, 0.5, 3)
    assert np.allclose(qinner(q, q), quat(qnorm(q) ** 2))
    assert np.array_equal(qinner(I, J), -K)


def test_inner_matches_complex_pair_formula(rng):
    a, b = rng.standard_normal((2, 20, 4))
    f1, f2 = cd_split(a)
    g1, g2 = cd_split(b)
    got = cd_split(qinner(a, b))
    # (f1 + j f2)(conj g1 - j g2) expanded with x j = j conj(x)
    assert np.allclose(got.f1, f1 * np.conj(g1) + np.conj(f2) * g2)
    assert np.allclose(got.f2, f2 * np.conj(g1) - np.conj(f1) * g2)


def test_pair_views_reproduce_one_sided_products(rng):
    q = rng.standard_normal((30, 4))
    th = rng.uniform(-3, 3, 30)
    p1, p2 = left_pairs(q)
    e = np.exp(1j * th)
    assert np.allclose(from_left_pairs(e * p1, e * p2), qmul(exp_i(th), q))
    r1, r2 = right_pairs(q)
    assert np.allclose(from_right_pairs(e * r1, e * r2), qmul(q, exp_j(th)))


def test_inverse(rng):
    q = rng.standard_normal((10, 4))
    assert np.allclose(qmul(q, qinv(q)), ONE, atol=1e-14)
    with pytest.raises(ZeroDivisionError):
        qinv(quat())


def test_unit_exponentials():
    th = np.linspace(-5, 5, 11)
    assert np.allclose(qnorm(exp_i(th)), 1.0)
    assert np.allclose(exp_j(th)[..., [1, 3]], 0.0)
    assert np.allclose(qmul(exp_i(0.3), exp_i(0.4)), exp_i(0.7))


def test_shape_errors():
    with pytest.raises(ValueError):
        qmul(np.zeros(3), ONE)
    with pytest.raises(ValueError):
        from_complex(1j, "k")
    assert isinstance(cd_split(ONE), ComplexPair)


@settings(max_examples=50)
@given(st.floats(-10, 10), st.floats(-10, 10))
def test_i_and_j_exponentials_commute_only_in_their_planes(a, b):
    ei, ej = exp_i(a), exp_j(b)
    comm = qmul(ei, ej) - qmul(ej, ei)
    # the commutator is 2 sin a sin b k
    assert np.allclose(comm, quat(0, 0, 0, 2 * np.sin(a) * np.sin(b)), atol=1e-12)
