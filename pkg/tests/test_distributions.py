import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfpp import distributions as D

UNIT = st.floats(min_value=0.0, max_value=1.0, exclude_max=True, allow_nan=False)


def bisect_cdf_inverse(dist, u, lo=0.0, hi=1e9, iters=200):
    """Independent quantile oracle: numerically invert the CDF."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if D.cdf(dist, mid) >= u:
            hi = mid
        else:
            lo = mid
    return hi


def test_bernoulli_sampling_atoms():
    b = D.Bernoulli01(0.6)
    assert D.sample(b, 0.3) == 0.0
    assert D.sample(b, 0.9) == 1.0


def test_exponential_closed_form_and_numeric_inverse():
    e = D.Exponential(1.0)
    got = D.sample(e, 0.5)
    assert abs(got - math.log(2)) < 1e-12
    assert abs(got - bisect_cdf_inverse(e, 0.5)) < 1e-6
    e2 = D.Exponential(2.5)
    for u in (0.1, 0.37, 0.9):
        assert abs(D.sample(e2, u) - bisect_cdf_inverse(e2, u)) < 1e-6


@given(u1=UNIT, u2=UNIT)
@settings(max_examples=100, deadline=None)
def test_sample_monotone_in_u(u1, u2):
    lo, hi = min(u1, u2), max(u1, u2)
    for dist in (
        D.Bernoulli01(0.5),
        D.DiscreteAtoms(values=(0.0, 0.5, 2.0), probs=(0.3, 0.3, 0.4)),
        D.Exponential(1.3),
        D.Shifted(inner=D.Bernoulli01(0.7), a=0.25),
    ):
        assert D.sample(dist, lo) <= D.sample(dist, hi)


@given(u=UNIT, a=st.floats(min_value=0.0, max_value=10.0, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_shift_identity(u, a):
    for inner in (D.Bernoulli01(0.4), D.Exponential(2.0)):
        assert D.sample(D.Shifted(inner=inner, a=a), u) == D.sample(inner, u) + a


@given(u=UNIT, p1=st.floats(0.05, 0.95), p2=st.floats(0.05, 0.95))
@settings(max_examples=100, deadline=None)
def test_pointwise_domination_gives_pathwise_order(u, p1, p2):
    lo_p, hi_p = min(p1, p2), max(p1, p2)
    f1, f2 = D.Bernoulli01(lo_p), D.Bernoulli01(hi_p)
    assert D.stochastically_dominates(f1, f2)
    assert D.sample(f2, u) <= D.sample(f1, u)


def test_dominance_examples():
    assert D.stochastically_dominates(D.Bernoulli01(0.4), D.Bernoulli01(0.6))
    assert not D.stochastically_dominates(D.Bernoulli01(0.6), D.Bernoulli01(0.4))
    f = D.DiscreteAtoms(values=(0.0, 1.0), probs=(0.5, 0.5))
    assert D.stochastically_dominates(f, f)
    # exponential vs discrete needs probe points
    grid = [0.1 * k for k in range(80)]
    assert D.stochastically_dominates(D.Shifted(inner=D.Exponential(1.0), a=1.0),
                                      D.Exponential(1.0), grid)


def test_validation_errors():
    with pytest.raises(ValueError):
        D.Bernoulli01(1.5)
    with pytest.raises(ValueError):
        D.DiscreteAtoms(values=(0.0, 1.0), probs=(0.5, 0.6))
    with pytest.raises(ValueError):
        D.DiscreteAtoms(values=(1.0, 0.0), probs=(0.5, 0.5))
    with pytest.raises(ValueError):
        D.DiscreteAtoms(values=(-1.0, 0.0), probs=(0.5, 0.5))
    with pytest.raises(ValueError):
        D.Exponential(0.0)
    with pytest.raises(ValueError):
        D.Shifted(inner=D.Bernoulli01(0.5), a=-0.5)
    with pytest.raises(ValueError):
        D.sample(D.Bernoulli01(0.5), 1.0)


def test_atom_at_zero():
    assert D.atom_at_zero(D.Bernoulli01(0.8)) == 0.8
    assert D.atom_at_zero(D.Exponential(3.0)) == 0.0
    assert D.atom_at_zero(D.Shifted(inner=D.Bernoulli01(0.8), a=0.5)) == 0.0
    f = D.DiscreteAtoms(values=(0.0, 2.0), probs=(0.25, 0.75))
    assert D.atom_at_zero(f) == 0.25


def _g_spec():
    base = D.DiscreteAtoms(values=(0.0, 1.0, 3.0), probs=(0.6447, 0.2, 0.1553))
    return D.GEpsilonSpec(base=base, h=1.0, epsilon=0.05)


def test_g_epsilon_spec_validation():
    base = D.DiscreteAtoms(values=(0.0, 1.0, 3.0), probs=(0.6447, 0.2, 0.1553))
    with pytest.raises(ValueError):
        D.GEpsilonSpec(base=base, h=1.0, epsilon=0.25)  # epsilon >= jump
    with pytest.raises(ValueError):
        D.GEpsilonSpec(base=base, h=0.5, epsilon=0.05)  # no atom at h
    flat_violator = D.DiscreteAtoms(values=(0.0, 0.5, 1.0), probs=(0.5, 0.2, 0.3))
    with pytest.raises(ValueError):
        D.GEpsilonSpec(base=flat_violator, h=1.0, epsilon=0.05)  # atom inside (0, h)


def test_couple_cases():
    spec = _g_spec()
    assert D.couple_g_epsilon(spec, 0.0, 0.99) == D.CoupledPair(t=0.0, g=0.0)
    assert D.couple_g_epsilon(spec, 3.0, 0.0) == D.CoupledPair(t=3.0, g=3.0)
    branch = spec.branch_prob
    assert math.isclose(branch, 0.25)
    assert D.couple_g_epsilon(spec, 1.0, branch - 1e-9).g == 0.0
    assert D.couple_g_epsilon(spec, 1.0, branch + 1e-9).g == 1.0
    with pytest.raises(ValueError):
        D.couple_g_epsilon(spec, 2.0, 0.5)


@given(u_t=UNIT, u_aux=UNIT)
@settings(max_examples=200, deadline=None)
def test_couple_edgewise_inequality(u_t, u_aux):
    spec = _g_spec()
    t = D.sample(spec.base, u_t)
    pair = D.couple_g_epsilon(spec, t, u_aux)
    bump = spec.h if (pair.t == spec.h and pair.g == 0.0) else 0.0
    assert pair.t <= pair.g + bump
    assert pair.g <= pair.t  # the coupled sample never exceeds the original


def test_g_epsilon_marginal_law():
    spec = _g_spec()
    g = D.g_epsilon_distribution(spec)
    assert g.values == (0.0, 1.0, 3.0)
    assert math.isclose(g.probs[0], 0.6947)
    assert math.isclose(g.probs[1], 0.15)
    assert math.isclose(g.probs[2], 0.1553)
    # the coupled marginal dominates the base law pointwise
    assert D.stochastically_dominates(spec.base, g)


def test_build_g_n_examples():
    f = D.DiscreteAtoms(values=(0.0, 0.5, 1.0), probs=(0.64, 0.16, 0.2))
    same = D.build_g_n(f, 0.5)
    assert same.values == (0.0, 0.5, 1.0) and same.probs == (0.64, 0.16, 0.2)
    flat = D.build_g_n(f, 1.0)
    assert flat.values == (0.0, 1.0)
    assert math.isclose(flat.probs[0], 0.64) and math.isclose(flat.probs[1], 0.36)
    assert D.cdf(flat, 0.99) == pytest.approx(0.64)
    with pytest.raises(ValueError):
        D.build_g_n(f, 0.7)
    with pytest.raises(ValueError):
        D.build_g_n(D.Exponential(1.0), 1.0)


def test_json_roundtrip_and_literals():
    examples = [
        '{"bernoulli01": {"p0": 0.8}}',
        '{"atoms": [[0, 0.6447], [1, 0.3553]]}',
        '{"exponential": {"rate": 1.0}}',
        '{"shift": {"a": 0.5, "inner": {"exponential": {"rate": 2.0}}}}',
    ]
    for text in examples:
        d = D.from_json(text)
        assert D.from_json(D.to_json(d)) == d
    with pytest.raises(ValueError):
        D.from_json('{"weibull": {"k": 2}}')
    with pytest.raises(ValueError):
        D.from_json('{"bernoulli01": {"p0": 0.5}, "extra": 1}')


def test_sample_array_matches_scalar():
    u = np.linspace(0.0, 0.999, 64)
    for dist in (D.Bernoulli01(0.3), D.Exponential(0.7),
                 D.DiscreteAtoms(values=(0.0, 2.0, 5.0), probs=(0.2, 0.5, 0.3))):
        arr = D.sample_array(dist, u)
        assert [D.sample(dist, float(x)) for x in u] == arr.tolist()
