"""Smoke tests of the python bindings."""

import json
import math

import numpy as np
import pytest

import mpk


def test_symplectic_form_and_mu():
    sigma = mpk.symplectic_form(1)
    assert mpk.is_symplectic(sigma)["ok"]
    out = mpk.mu_of_symplectic(sigma)
    assert out["mu"] == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-12)

    ident = np.eye(4)
    assert mpk.mu_of_symplectic(ident)["mu"] == pytest.approx(0.0, abs=1e-15)


def test_rejects_non_symplectic():
    bad = np.eye(4)
    bad[0, 3] = 1.0
    assert not mpk.is_symplectic(bad)["ok"]
    with pytest.raises(mpk.MpkError):
        mpk.mu_of_symplectic(bad)


def test_factor_round_trip():
    p = np.array([[0.3]])
    l = np.array([[1.7]])
    q = np.array([[-0.8]])
    lam = mpk.make_lambda_plq(p, l, q)
    fp, fl, fq = mpk.factor_free(lam)
    assert fp[0, 0] == pytest.approx(0.3, abs=1e-12)
    assert fl[0, 0] == pytest.approx(1.7, abs=1e-12)
    assert fq[0, 0] == pytest.approx(-0.8, abs=1e-12)

    (f1, f2) = mpk.factor_two_free(np.eye(4))
    prod = mpk.make_lambda_plq(*f1) @ mpk.make_lambda_plq(*f2)
    assert np.max(np.abs(prod - np.eye(4))) <= 1e-9


def test_gaussian_closed_forms():
    theta = 1j * np.eye(1)
    c = 2.0 ** 0.25
    assert mpk.gaussian_variance(c, theta) == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-12)

    amp, th = mpk.fourier_gaussian(1.0 + 0.0j, np.array([[3.7j]]))
    assert amp == pytest.approx(1.0 / math.sqrt(3.7), rel=1e-12)
    assert th[0, 0] == pytest.approx(1j / 3.7, rel=1e-12)


def test_optimizer_family_limit():
    out = mpk.optimizer_family(np.array([[0.0]]), np.array([[2.0]]), np.array([[1.0]]), 0, 1000.0)
    want = math.sqrt(1.0 + 1e-6) / (8.0 * math.pi)
    assert math.sqrt(out["variance_product"]) == pytest.approx(want, rel=1e-12)
    assert out["limit"] == pytest.approx(1.0 / (8.0 * math.pi), rel=1e-12)


def test_grid_oracles():
    samples = mpk.sample_gaussian(2.0 ** 0.25, 1j * np.eye(1), 1024, 8.0)
    assert mpk.variance_grid(samples, 8.0) == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-10)

    hat, hw = mpk.grid_fourier(samples, 8.0)
    assert hw == pytest.approx(32.0)
    ref = mpk.sample_gaussian(2.0 ** 0.25, 1j * np.eye(1), 1024, 32.0)
    assert np.max(np.abs(hat - ref)) <= 1e-12

    w = mpk.wigner_grid(samples, samples, 8.0)
    assert w["l2_norm"] == pytest.approx(1.0, rel=1e-10)
    peak = w["values"][512, 512].real
    assert peak == pytest.approx(2.0, rel=1e-10)


def test_word_interface():
    word = {"n": 1, "factors": [{"kind": "fourier"}]}
    psi = mpk.psi_word(json.dumps(word))
    assert np.max(np.abs(psi - mpk.symplectic_form(1))) <= 1e-14

    neg = {"n": 1, "factors": [{"kind": "dilation", "B": [[1.0]], "m": 2}]}
    assert mpk.canonical_phase(json.dumps(neg)) == pytest.approx(-1.0)

    prod = mpk.word_variance_product(json.dumps(word), 50.0)
    assert math.sqrt(prod) >= 1.0 / (4.0 * math.pi) - 1e-12


def test_ground_energy():
    out = mpk.ground_energy(np.eye(2), 0.0, 64)
    assert out["value"] == pytest.approx(1.0 / (2.0 * math.pi), abs=1e-8)
    assert out["converged"]
