import math

import numpy as np
import pytest

from asymptotica import jets
from asymptotica.spectral import TrigSeries


def test_trig_polynomial_exact():
    fn = lambda x: 1.5 + np.cos(x) - 2 * np.sin(3 * x)
    s = TrigSeries.fit(fn, 2 * math.pi, nodes=16)
    xs = np.linspace(0, 2 * math.pi, 101)
    assert np.max(np.abs(s(xs) - fn(xs))) < 1e-13


def test_analytic_function_converges():
    fn = lambda x: np.exp(np.sin(x))
    s = TrigSeries.fit(fn, 2 * math.pi, nodes=8)
    xs = np.linspace(0, 2 * math.pi, 301)
    assert np.max(np.abs(s(xs) - fn(xs))) < 1e-10


def test_fit_refuses_rough_function():
    fn = lambda x: np.abs(np.sin(x / 2))  # kink at 0: Fourier converges too slowly
    with pytest.raises(ValueError):
        TrigSeries.fit(fn, 2 * math.pi, nodes=8, max_nodes=512)


def test_nonstandard_period():
    fn = lambda x: np.sin(2 * math.pi * x / 3.0)
    s = TrigSeries.fit(fn, 3.0, nodes=16)
    assert s(0.7) == pytest.approx(fn(0.7), abs=1e-12)
    assert s(0.7 + 3.0) == pytest.approx(s(0.7), abs=1e-12)


def test_derivative():
    s = TrigSeries.fit(lambda x: np.sin(2 * x), 2 * math.pi, nodes=16)
    d = s.derivative()
    xs = np.linspace(0, 2 * math.pi, 50)
    assert np.max(np.abs(d(xs) - 2 * np.cos(2 * xs))) < 1e-12


def test_mean():
    s = TrigSeries.fit(lambda x: 4.0 + np.cos(x), 2 * math.pi, nodes=16)
    assert s.mean() == pytest.approx(4.0)


def test_from_samples_round_trip():
    n = 32
    xs = np.arange(n) * (2 * math.pi / n)
    vals = np.cos(3 * xs) - 0.5 * np.sin(xs)
    s = TrigSeries.from_samples(vals, 2 * math.pi)
    assert np.max(np.abs(s(xs) - vals)) < 1e-13


def test_jet_evaluation_matches_derivatives():
    s = TrigSeries.fit(lambda x: np.exp(np.sin(x)), 2 * math.pi, nodes=64)
    x0 = 1.1
    j = s(jets.Jet.variable(x0, 0, 1, 2))
    d1 = s.derivative()
    d2 = d1.derivative()
    assert j.value == pytest.approx(float(s(x0)))
    assert j.deriv(1) == pytest.approx(float(d1(x0)))
    assert j.deriv(2) == pytest.approx(float(d2(x0)))


def test_array_evaluation_shape():
    s = TrigSeries.fit(lambda x: np.sin(x), 2 * math.pi, nodes=8)
    xs = np.linspace(0, 1, 5)
    out = s(xs)
    assert out.shape == xs.shape
