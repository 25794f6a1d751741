import math

import numpy as np
import pytest

from selfsim.geometry import (
    DegenerateJetError,
    fundamental_data,
    grid,
    shrinker_residual,
)
from selfsim.numerics import BracketError, eval_jet2
from selfsim.solutions import (
    PLANAR,
    PROFILE,
    SampledCurve,
    abresch_langer_scan,
    abresch_langer_shoot,
    abresch_langer_solve,
    angenent_profile_shoot,
    canonical_shrinker,
    circle,
    closure_ratio,
    csf_evolve,
    hausdorff,
    planar_ode_residual,
    profile_ode_residual,
    revolve_profile,
    self_similarity_check,
    spectral_derivatives,
    square,
    stable_dt,
)


@pytest.fixture(scope="module")
def angenent():
    return angenent_profile_shoot(1.0)


@pytest.fixture(scope="module")
def al23():
    return abresch_langer_solve(1.0, 2, 3)


# --- curves ---------------------------------------------------------------

def test_sampled_curve_validation():
    with pytest.raises(ValueError):
        SampledCurve(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        SampledCurve([[0, 0], [1, 0], [1, 1], [np.nan, 1]])
    with pytest.raises(ValueError):
        SampledCurve([[0, 0], [1, 0], [1.1, 0], [1.2, 0]], closed=False)
    with pytest.raises(ValueError):
        SampledCurve([[-1, 0], [-1, 1], [-1, 2]], closed=False, kind=PROFILE)


def test_csv_round_trip(tmp_path):
    c = circle(1.5, 64)
    text = c.to_csv()
    assert text.splitlines()[0] == "s,x,y"
    back = SampledCurve.from_csv(text)
    np.testing.assert_array_equal(back.points, c.points)
    with pytest.raises(ValueError):
        SampledCurve.from_csv("a,b,c\n0,1,2\n")


def test_resample_is_uniform():
    c = SampledCurve(np.column_stack([2 * np.cos(np.linspace(0, 2 * np.pi, 300, endpoint=False)),
                                      np.sin(np.linspace(0, 2 * np.pi, 300, endpoint=False))]),
                     check=False)
    r = c.resample(200)
    g = r.gaps()
    assert np.max(g) / np.min(g) < 1 + 1e-3


def test_hausdorff_between_concentric_circles():
    assert hausdorff(circle(1.0, 600), circle(1.1, 700)) == pytest.approx(0.1, abs=1e-4)
    assert hausdorff(circle(1.0, 600), circle(1.0, 600)) < 1e-12


def test_spectral_derivatives_of_trig():
    t = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    d1, d2 = spectral_derivatives(np.sin(3 * t), 2 * np.pi)
    np.testing.assert_allclose(d1, 3 * np.cos(3 * t), atol=1e-12)
    np.testing.assert_allclose(d2, -9 * np.sin(3 * t), atol=1e-11)


# --- canonical shrinkers --------------------------------------------------

@pytest.mark.parametrize("R", [0.5, 1.0, 3.0])
def test_canonical_lambdas(R):
    patch, lam_s = canonical_shrinker("sphere", R)
    _, lam_c = canonical_shrinker("cylinder", R)
    assert lam_s / lam_c == pytest.approx(2.0, rel=1e-14)
    S, T = grid(16, 16, (0.2, 3.0), (0, 6.0))
    assert np.max(np.abs(shrinker_residual(eval_jet2(patch, S, T), lam_s))) < 1e-9


def test_canonical_examples():
    assert canonical_shrinker("sphere", 1.0)[1] == 1.0
    assert canonical_shrinker("cylinder", 1.0)[1] == 0.5
    patch, lam = canonical_shrinker("plane")
    assert lam is None
    for axis in "xyz":
        p, lam = canonical_shrinker("cylinder", 2.0, axis=axis)
        assert abs(float(shrinker_residual(eval_jet2(p, 0.3, 0.4), lam))) < 1e-12
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            canonical_shrinker("sphere", bad)
    with pytest.raises(ValueError):
        canonical_shrinker("cone")


# --- revolve --------------------------------------------------------------

def test_revolved_vertical_line_is_cylinder():
    z = np.linspace(-2, 2, 81)
    prof = SampledCurve(np.column_stack([np.ones_like(z), z]), closed=False, kind=PROFILE)
    patch = revolve_profile(prof)
    cyl, _ = canonical_shrinker("cylinder", 1.0)
    for s, t in ((0.5, 0.3), (2.0, 4.0), (3.3, 1.0)):
        a = fundamental_data(eval_jet2(patch, s, t)).as_dict()
        b = fundamental_data(eval_jet2(cyl, s - 2.0, t)).as_dict()
        for key in a:
            assert float(a[key]) == pytest.approx(float(b[key]), abs=1e-10), key


def test_revolved_circle_is_torus():
    n = 4096
    u = np.linspace(0, 2 * np.pi, n, endpoint=False)
    prof = SampledCurve(np.column_stack([2 + np.cos(u), np.sin(u)]), kind=PROFILE, arclength=True)
    patch = revolve_profile(prof)
    speed = 2 * np.pi / prof.length
    s = np.linspace(0, prof.length, 37)
    fd = fundamental_data(eval_jet2(patch, s, 0.7 + 0 * s))
    np.testing.assert_allclose(fd.E, speed ** 2, atol=1e-8)
    np.testing.assert_allclose(fd.G, (2 + np.cos(speed * s)) ** 2, atol=1e-8)


def test_revolve_rejects_axis_and_planar():
    with pytest.raises(ValueError):
        revolve_profile(circle())
    prof = SampledCurve(np.column_stack([np.linspace(0.0, 1.0, 5), np.zeros(5)]), closed=False,
                        kind=PROFILE, check=False)
    with pytest.raises(DegenerateJetError):
        revolve_profile(prof)


# --- Abresch-Langer -------------------------------------------------------

def test_circle_recovered():
    res = abresch_langer_shoot(1.0, 1.0)
    assert res.success and res.closure_defect < 1e-8 and res.rotation_index == 1
    r = np.hypot(*res.curve.points.T)
    np.testing.assert_allclose(r, 1.0, atol=1e-9)


def test_circle_for_other_lambda():
    res = abresch_langer_shoot(4.0, 2.0)
    assert res.success
    np.testing.assert_allclose(np.hypot(*res.curve.points.T), 0.5, atol=1e-9)


def test_small_k0_does_not_close():
    res = abresch_langer_shoot(1.0, 0.2)
    assert not res.success


def test_turning_ratio_limits():
    assert closure_ratio(1.0 + 1e-4) == pytest.approx(1 / math.sqrt(2), abs=1e-3)
    vals = [closure_ratio(k) for k in (1.2, 1.6, 2.0, 2.6)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert all(0.5 < v < 0.71 for v in vals)


def test_two_three_curve(al23):
    assert al23.success and al23.closure_defect < 1e-8
    assert al23.rotation_index == 2
    assert al23.info["p"] == 2 and al23.info["q"] == 3
    assert planar_ode_residual(al23.curve, 1.0) < 1e-7


def test_scan_finds_noncircular_curve():
    found = abresch_langer_scan(1.0, (1.0, 3.0), samples=21, max_q=5)
    assert any(r.success and r.rotation_index >= 2 for r in found)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        abresch_langer_shoot(-1.0, 1.0)
    with pytest.raises(ValueError):
        abresch_langer_shoot(1.0, 0.0)


# --- Angenent -------------------------------------------------------------

def test_angenent_closes(angenent):
    assert angenent.success and angenent.closure_defect < 1e-8
    pts = angenent.curve.points
    assert np.all(pts[:, 0] > 0)
    # symmetric about z = 0
    assert hausdorff(angenent.curve, SampledCurve(pts * [1, -1], kind=PROFILE), 2048) < 1e-9
    assert profile_ode_residual(angenent.curve, 1.0) < 1e-6


def test_angenent_surface_residual(angenent):
    patch = revolve_profile(angenent.curve)
    S, T = grid(128, 64, (0, angenent.curve.length), (0, 2 * np.pi), endpoint_s=False)
    assert np.max(np.abs(shrinker_residual(eval_jet2(patch, S, T), 1.0))) < 1e-6


def test_angenent_scaling(angenent):
    quarter = angenent_profile_shoot(4.0, normalize=False)
    assert quarter.success
    np.testing.assert_allclose(quarter.curve.points, 0.5 * angenent.curve.points, atol=1e-6)


def test_angenent_bad_bracket():
    with pytest.raises(BracketError):
        angenent_profile_shoot(1.0, bracket=(0.5, 0.6))


# --- flow -----------------------------------------------------------------

def test_circle_law():
    res = csf_evolve(circle(1.0, 400), 0.1)
    assert res.completed
    np.testing.assert_allclose(np.hypot(*res.curve.points.T), math.sqrt(0.8), atol=1e-4)
    assert self_similarity_check(circle(1.0, 400), res.curve, 1.0, 0.1) < 1e-4


def test_zero_time_is_identity():
    c = square(1.0, 128)
    res = csf_evolve(c, 0.0)
    assert res.curve is c and res.steps == 0


def test_dt_above_bound_rejected():
    c = circle(1.0, 100)
    with pytest.raises(ValueError):
        csf_evolve(c, 0.01, dt=2 * stable_dt(c))


def test_square_is_not_self_similar():
    c = square(2.0, 400)
    res = csf_evolve(c, 0.05)
    assert self_similarity_check(c, res.curve, 0.5, 0.05) > 1e-2


def test_blow_up_is_reported():
    res = csf_evolve(circle(0.1, 64), 0.01)
    # extinction at r^2 / 2 = 0.005
    assert not res.completed and res.time == pytest.approx(0.005, rel=1e-2)


def test_abresch_langer_shape_preserved(al23):
    c = al23.curve.resample(1000)
    res = csf_evolve(c, 0.05)
    assert self_similarity_check(c, res.curve, 1.0, 0.05) < 1e-3


def test_similarity_check_rejects_bad_time():
    c = circle()
    with pytest.raises(ValueError):
        self_similarity_check(c, c, 1.0, 0.5)
    with pytest.raises(ValueError):
        self_similarity_check(c, c, 1.0, -0.1)


def test_curve_kinds():
    assert circle().kind == PLANAR
