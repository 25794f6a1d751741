import json
import math

import numpy as np
import pytest

from oracles import cyclic_fd_jet
from selfsim.cyclic import (
    CONTRADICTION,
    LINEAR_CENTERS,
    MINIMAL,
    NOT_SELF_SIMILAR,
    REVOLUTION,
    SPHERE_CASE,
    CyclicJet,
    FrameDegenerateError,
    ParallelCircleJet,
    closed_forms,
    corrected_closed_forms,
    cyclic_immersion_jet,
    cyclic_lhs_poly,
    cyclic_residual_poly,
    cyclic_rhs_poly,
    extracted_coefficients,
    lemma2_classify,
    parallel_circle_analysis,
    random_cyclic_jet,
    random_parallel_jet,
)
from selfsim.geometry import fundamental_data, residual_from_forms, shrinker_residual
from selfsim.trig_poly import coeff, is_zero

ZERO = {f: 0.0 for f in ("k", "kp", "tau", "taup", "R", "Rp", "Rpp", "p", "pp", "ppp",
                          "q", "qp", "qpp", "r", "rp", "rpp")}


def jet(**kw):
    d = dict(ZERO, R=1.0)
    d.update(kw)
    return CyclicJet(**d)


def test_jet_matches_integrated_frenet_frame(rng):
    for _ in range(5):
        cj = random_cyclic_jet(rng)
        for t in (0.0, 1.1, 4.0):
            fd = cyclic_fd_jet(cj, t)
            an = cyclic_immersion_jet(cj, np.array(t))
            for u, v in zip(fd.vectors(), an.vectors()):
                np.testing.assert_allclose(np.ravel(v), u, atol=2e-7)


def test_residual_expansion_has_stated_orders(rng):
    cj = random_cyclic_jet(rng)
    lhs = cyclic_lhs_poly(cj, order=6)
    rhs = cyclic_rhs_poly(cj, order=6)
    assert np.max(np.abs(lhs.a[4:])) < 1e-12 and np.max(np.abs(lhs.b[3:])) < 1e-12
    assert np.max(np.abs(rhs.a[5:])) < 1e-12 and np.max(np.abs(rhs.b[4:])) < 1e-12


def test_residual_poly_reproduces_pointwise_residual(rng):
    cj = random_cyclic_jet(rng)
    lam = 0.7
    t = np.linspace(0, 2 * np.pi, 11)
    direct = residual_from_forms(fundamental_data(cyclic_immersion_jet(cj, t)), lam)
    np.testing.assert_allclose(cyclic_residual_poly(cj, lam)(t), direct, atol=1e-11)


def test_corrected_closed_forms_match_extraction(rng):
    for _ in range(200):
        cj = random_cyclic_jet(rng)
        ex, cf = extracted_coefficients(cj), corrected_closed_forms(cj)
        for key in ex:
            assert abs(ex[key] - cf[key]) <= 1e-10 * max(1.0, abs(ex[key])), key


def test_quoted_forms_agree_for_order_three_and_a2(rng):
    for _ in range(50):
        cj = random_cyclic_jet(rng)
        ex, q = extracted_coefficients(cj), closed_forms(cj)
        for key in ("a3", "b3", "a2"):
            assert abs(ex[key] - q[key]) <= 1e-10 * max(1.0, abs(ex[key]))
        if abs(ex["b2"]) > 1e-6:
            assert ex["b2"] / q["b2"] == pytest.approx(1.5, rel=1e-9)


def test_quoted_order_four_forms_differ():
    cj = random_cyclic_jet(np.random.default_rng(5))
    ex, q = extracted_coefficients(cj), closed_forms(cj)
    assert abs(ex["a4p"] - q["a4p"]) > 1e-3


def test_sphere_case_example():
    out = lemma2_classify(jet(k=1.0, p=1.0))
    assert out.verdict == SPHERE_CASE
    assert out.lam == pytest.approx(0.5)
    assert out.lam * (1.0 + 1.0) == pytest.approx(1.0)


def test_sphere_case_lambda_law(rng):
    vals = []
    for _ in range(30):
        cj = random_cyclic_jet(rng, "sphere")
        out = lemma2_classify(cj)
        assert out.verdict == SPHERE_CASE
        vals.append(out.lam * (cj.R ** 2 + cj.p ** 2))
    np.testing.assert_allclose(vals, 1.0, rtol=1e-9)


def test_case_two_contradiction():
    out = lemma2_classify(jet(k=1.0, pp=1.0, q=1.0, rp=1.0))
    assert out.verdict == CONTRADICTION


@pytest.mark.parametrize("kind", ["forced", "singular"])
def test_forced_jets_are_contradictions(kind, rng):
    for _ in range(20):
        assert lemma2_classify(random_cyclic_jet(rng, kind)).verdict == CONTRADICTION


def test_generic_jets_not_self_similar(rng):
    for _ in range(20):
        assert lemma2_classify(random_cyclic_jet(rng)).verdict == NOT_SELF_SIMILAR


def test_flat_frame_raises():
    with pytest.raises(FrameDegenerateError):
        lemma2_classify(jet(k=0.0))


def test_jet_validation_and_json():
    with pytest.raises(ValueError):
        jet(R=-1.0)
    with pytest.raises(ValueError):
        jet(k=-0.5)
    cj = random_cyclic_jet(np.random.default_rng(1))
    assert CyclicJet.from_json(cj.to_json()) == cj
    d = cj.to_dict()
    d.pop("k")
    with pytest.raises(ValueError):
        CyclicJet.from_dict(d)
    with pytest.raises(ValueError):
        CyclicJet.from_dict(dict(cj.to_dict(), extra=1.0))
    json.loads(cj.to_json())


# --- parallel circles -------------------------------------------------------

def pjet(**kw):
    d = dict(a=0.0, ap=0.0, app=0.0, b=0.0, bp=0.0, bpp=0.0, R=1.0, Rp=0.0, Rpp=0.0, s=0.0)
    d.update(kw)
    return ParallelCircleJet(**d)


def test_parallel_reference_jet():
    an = parallel_circle_analysis(pjet(a=1.0, ap=1.0), 1.0)
    assert an.verdict == NOT_SELF_SIMILAR
    assert an.witness["cos3t"] == pytest.approx(-0.25, abs=1e-13)


def test_parallel_cos3_closed_form(rng):
    for _ in range(100):
        pj = random_parallel_jet(rng)
        an = parallel_circle_analysis(pj, 1.0)
        w = complex(pj.ap, pj.bp)
        delta = complex(pj.ap * pj.s - pj.a, pj.bp * pj.s - pj.b)
        z = pj.R ** 3 / 4 * w * w * delta
        assert an.witness["cos3t"] == pytest.approx(z.real, abs=1e-11)
        assert an.witness["sin3t"] == pytest.approx(z.imag, abs=1e-11)


def test_linear_centres_cos2_closed_form(rng):
    for _ in range(100):
        pj = random_parallel_jet(rng, linear=True)
        an = parallel_circle_analysis(pj, 1.0)
        assert abs(an.witness["cos3t"]) < 1e-12 and abs(an.witness["sin3t"]) < 1e-12
        expect = pj.R ** 3 / 2 * (pj.Rp * pj.s - pj.R) * (pj.ap ** 2 - pj.bp ** 2)
        assert an.witness["cos2t"] == pytest.approx(expect, abs=1e-11)
        assert an.verdict == LINEAR_CENTERS


def test_parallel_revolution_and_minimal():
    assert parallel_circle_analysis(pjet(R=1.5, Rp=0.3), 1.0).verdict == REVOLUTION
    an = parallel_circle_analysis(pjet(a=2.0, ap=1.0, s=2.0, R=1.0, Rp=0.5), 1.0)
    assert an.verdict == MINIMAL


def test_parallel_residual_matches_geometry(rng):
    from selfsim.cyclic import parallel_circle_jet

    pj = random_parallel_jet(rng)
    an = parallel_circle_analysis(pj, 0.8)
    t = np.linspace(0, 2 * np.pi, 9)
    direct = shrinker_residual(parallel_circle_jet(pj, t), 0.8)
    np.testing.assert_allclose(an.residual(t), direct, atol=1e-11)
    assert not is_zero(an.rhs)
    assert coeff(an.rhs, 3) == an.witness["cos3t"]
    assert math.isfinite(an.witness["center_offset"])
