import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgfconv.distributions import (
    CltExponential,
    Continuity,
    Exponential,
    Frechet,
    Lognormal,
    NoQuantileError,
    Normal,
    ParetoSeq,
    PointMass,
    TabulatedCdfError,
    Uniform,
    clt_exponential_mgf,
    frechet_cdf,
    load_tabulated,
    make_family,
    pareto_seq_cdf,
    parse_model,
    quantile,
)
from mgfconv.quadrature import Status, integrate

CONTINUOUS = [Frechet(), ParetoSeq(1), ParetoSeq(7), ParetoSeq(1000), Lognormal(), Uniform(),
              Normal(), Exponential(), CltExponential(1), CltExponential(25), CltExponential(400)]
ALL_MODELS = CONTINUOUS + [PointMass(-3.0), PointMass(0.5)]
U_LEVELS = [0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99]


class TestFrechetCdf:
    def test_nonpositive_is_zero(self):
        assert frechet_cdf(-1.0) == 0.0
        assert frechet_cdf(0.0) == 0.0

    def test_at_one(self):
        assert frechet_cdf(1.0) == pytest.approx(0.3678794, abs=1e-7)

    def test_upper_limit(self):
        assert abs(frechet_cdf(1e6) - 1) < 1e-6

    def test_vectorized(self):
        out = frechet_cdf(np.array([-1.0, 1.0]))
        assert out.shape == (2,)


class TestParetoSeqCdf:
    def test_pareto_member(self):
        assert pareto_seq_cdf(1, 2.0) == pytest.approx(0.5, abs=1e-15)

    def test_zero_at_support_edge(self):
        assert pareto_seq_cdf(7, 1 / 7) == 0.0

    def test_large_n_close_to_frechet(self):
        v = pareto_seq_cdf(1000, 1.0)
        assert v == pytest.approx(0.3676954, abs=1e-7)
        assert abs(v - math.exp(-1)) < 5e-4

    @pytest.mark.parametrize("bad", [0, -1, 1.5])
    def test_rejects_bad_index(self, bad):
        with pytest.raises(ValueError):
            pareto_seq_cdf(bad, 1.0)

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 5.0])
    def test_pointwise_convergence_to_frechet(self, x):
        gaps = [abs(pareto_seq_cdf(n, x) - frechet_cdf(x)) for n in (10, 100, 1000)]
        assert gaps[-1] < 1e-3
        assert gaps[0] > gaps[1] > gaps[2]


class TestQuantile:
    def test_frechet_at_inverse_e(self):
        assert quantile(Frechet(), math.exp(-1)) == pytest.approx(1.0, rel=1e-14)

    def test_frechet_median(self):
        assert quantile(Frechet(), 0.5) == pytest.approx(1.4426950, abs=1e-7)

    def test_pareto_median(self):
        assert quantile(ParetoSeq(1), 0.5) == pytest.approx(2.0, rel=1e-14)

    @pytest.mark.parametrize("model", [PointMass(-3.0)])
    def test_no_quantile_for_degenerate(self, model):
        with pytest.raises(NoQuantileError):
            quantile(model, 0.5)

    @pytest.mark.parametrize("u", [0.0, 1.0, -0.2])
    def test_rejects_u_outside_open_interval(self, u):
        with pytest.raises(ValueError):
            quantile(Frechet(), u)

    @pytest.mark.parametrize("model", CONTINUOUS, ids=lambda m: m.model_id)
    def test_round_trip(self, model):
        u = np.array(U_LEVELS)
        assert np.max(np.abs(model.cdf(model.quantile(u)) - u)) < 1e-10


@pytest.mark.parametrize("model", ALL_MODELS, ids=lambda m: m.model_id)
class TestModelInvariants:
    def test_support_ordered(self, model):
        assert model.support_lo < model.support_hi

    def test_cdf_monotone_on_dense_grid(self, model):
        lo = model.support_lo if math.isfinite(model.support_lo) else -50.0
        x = np.sort(np.concatenate([np.linspace(lo - 5, lo + 100, 5000),
                                    np.geomspace(1e-8, 1e8, 5000)]))
        f = model.cdf(x)
        assert np.all(np.diff(f) >= 0)
        assert np.all((f >= 0) & (f <= 1))

    def test_cdf_zero_below_support(self, model):
        if math.isfinite(model.support_lo):
            assert model.cdf(model.support_lo - 1.0) == 0.0

    def test_cdf_tends_to_one(self, model):
        hi = model.support_hi if math.isfinite(model.support_hi) else 1e12
        assert model.cdf(hi) == pytest.approx(1.0, abs=1e-6)

    def test_left_limit_below_cdf(self, model):
        x = np.linspace(-5, 5, 101)
        assert np.all(model.cdf_left(x) <= model.cdf(x))


@pytest.mark.parametrize("model", CONTINUOUS, ids=lambda m: m.model_id)
def test_density_integrates_to_one(model):
    out = integrate(model.density, model.support_lo, model.support_hi,
                    points=[float(q) for q in model.quantile(np.array([0.01, 0.5, 0.99]))])
    assert out.status is Status.FINITE
    assert out.value == pytest.approx(1.0, abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=200),
       st.sampled_from(ALL_MODELS))
def test_cdf_nondecreasing_property(xs, model):
    xs = np.sort(np.array(xs))
    assert np.all(np.diff(model.cdf(xs)) >= 0)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-6, 1 - 1e-6), st.sampled_from(CONTINUOUS))
def test_quantile_round_trip_property(u, model):
    assert abs(model.cdf(model.quantile(u)) - u) < 1e-10


class TestPointMass:
    def test_step_is_right_continuous(self):
        m = PointMass(-3.0)
        assert m.cdf(-3.0) == 1.0
        assert m.cdf_left(-3.0) == 0.0
        assert m.cdf(-3.0001) == 0.0
        assert m.continuity is Continuity.DISCRETE

    def test_closed_form_mgf(self):
        assert PointMass(-3.0).closed_form_mgf(-0.5) == pytest.approx(math.exp(1.5))


class TestFamilies:
    def test_pareto_member_one(self):
        fam = make_family("pareto_to_frechet")
        m = fam.member(1)
        assert isinstance(m, ParetoSeq) and m.support_lo == 1.0 and m.support_hi == math.inf
        assert isinstance(fam.declared_limit, Frechet)

    def test_degenerate_drift(self):
        fam = make_family("degenerate_drift")
        m = fam.member(3)
        assert m.cdf(-3.0) == 1.0 and m.cdf(-3.0 - 1e-9) == 0.0
        assert fam.declared_limit is None

    def test_clt_member(self):
        fam = make_family("clt_exponential")
        m = fam.member(4)
        assert isinstance(m, CltExponential) and m.n == 4
        assert m.support_lo == -2.0
        assert isinstance(fam.declared_limit, Normal)
        assert any("exp(t^2/2)" in note for note in fam.notes)

    def test_members_valid_over_index_set(self):
        fam = make_family("pareto_to_frechet", {"index_set": [3, 1, 3, 9]})
        assert fam.index_set == (1, 3, 9)
        assert [m.n for m in fam.members()] == [1, 3, 9]

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            make_family("nope")

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            make_family("pareto_to_frechet", {"index_set": [0]})
        with pytest.raises(ValueError):
            make_family("pareto_to_frechet", {"bogus": 1})

    def test_limit_override(self):
        fam = make_family("pareto_to_frechet", {"declared_limit": Normal()})
        assert isinstance(fam.declared_limit, Normal)

    def test_constant_family(self):
        fam = make_family("constant", {"model": Frechet()})
        assert fam.member(17) == Frechet() == fam.declared_limit


class TestCltMgf:
    def test_at_zero(self):
        v = clt_exponential_mgf(1, 0.0)
        assert v.status is Status.FINITE and v.value == 1.0

    def test_boundary_diverges(self):
        assert clt_exponential_mgf(4, 2.0).status is Status.DIVERGENT

    def test_close_to_normal_mgf(self):
        v = clt_exponential_mgf(400, 0.5)
        assert abs(v.value - math.exp(0.125)) < 1e-2

    def test_matches_gamma_mgf(self):
        # E exp(t (S - n)/sqrt n) with S ~ Gamma(n): (1 - t/sqrt n)^-n e^{-t sqrt n}
        n, t = 9, 1.0
        expected = (1 - t / 3) ** -n * math.exp(-t * 3)
        assert clt_exponential_mgf(n, t).value == pytest.approx(expected, rel=1e-14)


class TestTabulated:
    def write(self, tmp_path, rows, header="x,F"):
        p = tmp_path / "cdf.csv"
        p.write_text(header + "\n" + "\n".join(f"{x},{f}" for x, f in rows) + "\n")
        return p

    def test_linear_interpolation(self, tmp_path):
        model, report = load_tabulated(self.write(tmp_path, [(0, 0), (1, 0.5), (3, 1)]))
        assert model.cdf(0.5) == pytest.approx(0.25)
        assert model.cdf(2.0) == pytest.approx(0.75)
        assert model.cdf(-1) == 0.0 and model.cdf(5) == 1.0
        assert not report.lower_truncated and not report.upper_truncated
        assert model.continuity is Continuity.CONTINUOUS

    def test_truncated_support_reported(self, tmp_path):
        model, report = load_tabulated(self.write(tmp_path, [(1, 0.2), (2, 1.0)]))
        assert report.lower_truncated
        assert report.messages
        assert model.cdf_left(1.0) == 0.0 and model.cdf(1.0) == pytest.approx(0.2)

    @pytest.mark.parametrize("rows", [
        [(0, 0), (0, 1)],          # x not strictly increasing
        [(0, 0.5), (1, 0.4)],      # F decreasing
        [(0, 0), (1, 1.2)],        # F above 1
        [(0, 0)],                  # too short
    ])
    def test_rejects_malformed(self, tmp_path, rows):
        with pytest.raises(TabulatedCdfError):
            load_tabulated(self.write(tmp_path, rows))

    def test_rejects_header(self, tmp_path):
        with pytest.raises(TabulatedCdfError):
            load_tabulated(self.write(tmp_path, [(0, 0), (1, 1)], header="a,b"))

    def test_no_quantile(self, tmp_path):
        model, _ = load_tabulated(self.write(tmp_path, [(0, 0), (1, 1)]))
        with pytest.raises(NoQuantileError):
            model.quantile(0.5)

    def test_parse_model_selector(self, tmp_path):
        p = self.write(tmp_path, [(0, 0), (1, 1)])
        assert parse_model(f"tabulated:{p}").cdf(0.5) == pytest.approx(0.5)


@pytest.mark.parametrize("text, expected", [
    ("frechet", Frechet()), ("pareto_seq:5", ParetoSeq(5)), ("point_mass:-3", PointMass(-3.0)),
    ("clt_exponential:4", CltExponential(4)), ("lognormal", Lognormal()),
])
def test_parse_model(text, expected):
    assert parse_model(text) == expected


@pytest.mark.parametrize("text", ["bogus", "pareto_seq:x", "pareto_seq:0", "frechet:3"])
def test_parse_model_rejects(text):
    with pytest.raises(ValueError):
        parse_model(text)
