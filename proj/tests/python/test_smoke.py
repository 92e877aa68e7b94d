import math

import mpmath
import numpy as np
import pytest

import salemlab


def test_zeta_matches_mpmath():
    for s in (0.75 + 3j, 0.5 + 14.134725j, 2.0 + 0j):
        ref = complex(mpmath.zeta(s))
        assert abs(salemlab.zeta(s) - ref) <= 1e-10 * max(1.0, abs(ref))


def test_salem_symbol_is_gamma_eta():
    k = salemlab.Kernel("salem", 0.75)
    for y in (0.0, 1.0, -5.0):
        s = complex(0.75, y)
        ref = complex(mpmath.gamma(s) * mpmath.altzeta(s))
        assert abs(k.symbol(y) - ref) <= 1e-10 * abs(ref)
    assert abs(k.symbol_numeric(5.0) - k.symbol(5.0)) <= 1e-8 * abs(k.symbol(5.0))


def test_kernel_values():
    k = salemlab.Kernel("fracpart", 0.75)
    assert k(0.0) == 0.0
    assert abs(k(1.0) - math.exp(0.75) * math.exp(-1.0)) < 1e-15


def test_sigma_domain_error():
    with pytest.raises(salemlab.DomainError):
        salemlab.Kernel("salem", 0.3)
    assert salemlab.Kernel("salem", 0.3, strict=False).sigma == 0.3


def test_calibration():
    r = salemlab.calibrate()
    assert r["pass"]
    assert r["fracpart_constant"] == "one"
    assert r["digamma_sine"] == "pi_s"


def test_forward_inverse_roundtrip():
    g = salemlab.SampledFunction.tabulate(lambda x: complex(math.exp(-x * x)), 20.0, 512)
    back = salemlab.inverse_ft(salemlab.forward_ft(g, taper=False))
    assert np.max(np.abs(back.samples - g.samples)) < 1e-12


def test_solver_roundtrip():
    k = salemlab.Kernel("digamma", 0.75)
    phi = salemlab.SampledFunction.tabulate(lambda x: complex(math.exp(-x * x)), 128.0, 512)
    h = salemlab.apply(k, phi)
    r = salemlab.solve(k, h)
    err = np.linalg.norm(r["phi"].samples - phi.samples) / np.linalg.norm(phi.samples)
    assert err < 1e-3
    zero = salemlab.solve(k, salemlab.SampledFunction.zeros(128.0, 512))
    assert not np.any(zero["phi"].samples)


def test_mertens_and_example():
    ev = salemlab.MertensEvaluator(1000)
    assert ev(5.0) == -2
    assert ev.mu(30) == -1
    r = salemlab.verify_example(0.75)
    assert r["pass"] and len(r["xs"]) == 11


def test_ei_mellin():
    r = salemlab.ei_mellin_check(2.0, 0.75 + 3j)
    assert r["pass"]
    ref = complex(-mpmath.gamma(0.75 + 3j) / ((0.75 + 3j) * mpmath.power(2, 0.75 + 3j)))
    assert abs(r["analytic"] - ref) <= 1e-12 * abs(ref)


def test_scan():
    r = salemlab.scan("salem", 0.75, 0.75, 0.0, 30.0)
    assert r["classification"] == "NONVANISHING"
    line = salemlab.scan("salem", 0.5, 0.5, 14.0, 14.3, dt=1e-3, strict=False)
    assert abs(line["minima"][0]["t"] - 14.134725141734693) < 2e-3
    assert line["magnitudes"].shape == (1, 301)
