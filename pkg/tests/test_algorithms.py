import numpy as np
import pytest
from numpy.testing import assert_allclose

from conelab import algebra as alg
from conelab import algorithms as ma
from conelab.errors import DomainError, ValidationError

from conftest import ALGEBRAS


def all_algorithms(a, frame=None):
    frame = frame or alg.standard_frame(a)
    k = alg.random_automorphism_k(a, np.random.default_rng(99))
    return [
        ma.w1(a),
        ma.w2(frame),
        ma.interp(0.25, frame),
        ma.k_extended(ma.w1(a), k),
    ]


def test_w1_multiply_example():
    a = alg.sym_real(2)
    w = ma.w1(a)
    x = alg.from_matrix(a, np.diag([4.0, 1.0]))
    y = alg.from_matrix(a, np.ones((2, 2)))
    assert_allclose(ma.multiply(w, x, y).to_matrix(), [[4.0, 2.0], [2.0, 1.0]], atol=1e-12)
    assert_allclose(
        ma.divide(w, x, alg.from_matrix(a, [[4.0, 2.0], [2.0, 1.0]])).to_matrix(),
        np.ones((2, 2)),
        atol=1e-12,
    )


def test_w2_matches_cholesky_congruence(rng):
    a = alg.sym_real(3)
    frame = alg.standard_frame(a)
    w = ma.w2(frame)
    x = alg.random_cone_element(a, rng)
    y = alg.random_element(a, rng)
    chol = np.linalg.cholesky(x.to_matrix())
    assert_allclose(
        ma.multiply(w, x, y).to_matrix(), chol @ y.to_matrix() @ chol.T, atol=1e-10
    )


@pytest.mark.parametrize("a", ALGEBRAS, ids=lambda a: a.name)
def test_neutrality_and_divide_contracts(a, rng):
    e = alg.identity(a)
    for w in all_algorithms(a):
        for _ in range(5):
            x = alg.random_cone_element(a, rng, 0.2, 5.0)
            assert alg.norm(ma.multiply(w, x, e) - x) <= 1e-9 * alg.norm(x)
            assert alg.norm(ma.divide(w, x, x) - e) <= 1e-10
            y = alg.random_element(a, rng)
            back = ma.multiply(w, x, ma.divide(w, x, y))
            assert alg.norm(back - y) <= 1e-10 * max(1.0, alg.norm(y))


def test_division_is_the_inverse_endomorphism(rng):
    for a in [alg.sym_real(3), alg.lorentz(4)]:
        for w in all_algorithms(a):
            x = alg.random_cone_element(a, rng, 0.2, 5.0)
            wx = w(x).matrix
            gx = np.linalg.inv(wx)
            assert np.max(np.abs(wx @ gx - np.eye(a.dim))) < 1e-10
            y = alg.random_element(a, rng)
            assert_allclose(ma.divide(w, x, y).coords, gx @ y.coords, atol=1e-10)


def test_multiply_requires_cone_point(rng):
    a = alg.sym_real(2)
    w = ma.w1(a)
    bad = alg.from_matrix(a, np.diag([1.0, -2.0]))
    with pytest.raises(DomainError):
        ma.multiply(w, bad, alg.identity(a))
    with pytest.raises(DomainError):
        ma.divide(w, bad, alg.identity(a))


def test_interp_endpoints(rng):
    a = alg.herm_complex(2)
    frame = alg.standard_frame(a)
    x = alg.random_cone_element(a, rng)
    d_half = np.max(np.abs(ma.interp(0.5, frame)(x).matrix - ma.w1(a)(x).matrix))
    d_zero = np.max(np.abs(ma.interp(0.0, frame)(x).matrix - ma.w2(frame)(x).matrix))
    assert d_half < 1e-9
    assert d_zero < 1e-9


def test_k_extension_neutrality_and_unit_image(rng):
    a = alg.sym_real(3)
    k = alg.random_automorphism_k(a, rng)
    w = ma.k_extended(ma.w2(alg.standard_frame(a)), k)
    e = alg.identity(a)
    x = alg.random_cone_element(a, rng)
    assert alg.norm(ma.multiply(w, x, e) - x) < 1e-9
    assert_allclose(w.unit_image().matrix, k.matrix, atol=1e-12)
    with pytest.raises(ValidationError):
        ma.k_extended(ma.w1(a), alg.lmap(2.0 * e))  # does not fix e


@pytest.mark.parametrize("a", [alg.sym_real(2), alg.lorentz(3)], ids=lambda a: a.name)
def test_check_algorithm_homogeneous_cases(a):
    rng = np.random.default_rng(5)
    for w in all_algorithms(a):
        report = ma.check_algorithm(w, 30, rng)
        assert report.neutrality <= 1e-9
        assert report.cone_violation == 0.0
        assert report.homogeneity <= 1e-9
        assert report.divide_scaling <= 1e-9
        assert report.ddet_rel <= 1e-8
        assert report.homogeneous


def test_piecewise_algorithm_is_valid_but_not_homogeneous():
    a = alg.sym_real(2)
    w = ma.piecewise_det(alg.standard_frame(a))
    report = ma.check_algorithm(w, 40, np.random.default_rng(0))
    assert report.neutrality <= 1e-9
    assert report.cone_violation == 0.0
    assert report.ddet_rel <= 1e-8
    assert not report.homogeneous
    assert report.homogeneity > 0.01


def test_det_multiplicativity(rng):
    for a in ALGEBRAS:
        for w in all_algorithms(a):
            y = alg.random_cone_element(a, rng, 0.2, 5.0)
            x = alg.random_cone_element(a, rng, 0.2, 5.0)
            lhs = alg.determinant(ma.multiply(w, y, x))
            want = alg.determinant(y) * alg.determinant(x)
            assert lhs == pytest.approx(want, rel=1e-9)


def test_ddet_law(rng):
    for a in [alg.sym_real(3), alg.herm_complex(2), alg.lorentz(4)]:
        frame = alg.standard_frame(a)
        for w in (ma.w1(a), ma.w2(frame), ma.interp(0.25, frame)):
            y = alg.random_cone_element(a, rng, 0.2, 5.0)
            dd = w(y).ddet()
            assert dd == pytest.approx(
                alg.determinant(y) ** (a.dim / a.rank), rel=1e-8
            )


def test_parse_algorithm_specs():
    a = alg.sym_real(2)
    assert ma.parse_algorithm("w1", a).kind == "w1"
    assert ma.parse_algorithm("w2", a).kind == "w2"
    wi = ma.parse_algorithm("interp:0.25", a)
    assert wi.kind == "interp" and wi.alpha == 0.25
    wk = ma.parse_algorithm("kext:w2:17", a)
    assert wk.kind == "kext" and wk.spec == "kext:w2:17"
    # the seeded rotation is reproducible
    wk2 = ma.parse_algorithm("kext:w2:17", a)
    x = alg.random_cone_element(a, np.random.default_rng(1))
    assert_allclose(wk(x).matrix, wk2(x).matrix)
    for bad in ("w3", "interp:x", "kext:w1", "kext:w1:seed"):
        with pytest.raises(ValidationError):
            ma.parse_algorithm(bad, a)
