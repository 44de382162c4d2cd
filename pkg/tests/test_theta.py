"""Section-basis oracle: construction checks, Gram matrix, density match."""

import math

import numpy as np
import pytest

import toruskernel as tk

from conftest import random_chi

TWO_PI = 2 * math.pi


def test_basis_dimension_is_section_count(chi0):
    for tau, d, k in ((1j, 1, 1), (1j, 1, 3), (1j, 2, 2), (0.3 + 1.2j, 1, 2)):
        basis = tk.build_basis(tau, d, chi0, k)
        assert basis.N == k * d
        vals = basis.evaluate(0.1 + 0.2j)
        assert vals.shape == (k * d,)
        assert np.all(np.isfinite(vals))


def test_build_verifies_functional_equation(rng, chi0):
    # construction self-checks; reaching here means the residuals passed
    for tau in (1j, 0.3 + 1.2j):
        tk.build_basis(tau, 1, chi0, 2)
        tk.build_basis(tau, 2, random_chi(rng), 1)


def test_cutoff_guard(chi0):
    with pytest.raises(tk.CutoffTooSmall):
        tk.build_basis(1j, 1, chi0, 3, cutoff=1)


def test_gram_structure(rng, chi0):
    basis = tk.build_basis(1j, 2, random_chi(rng), 2)
    gram = tk.build_gram(basis)
    G = gram.matrix
    assert np.allclose(G, G.conj().T, rtol=0, atol=1e-14)
    eig = np.linalg.eigvalsh(G)
    assert np.all(eig > 0)
    assert gram.rel_change < 1e-12
    assert gram.cond < 1e6
    assert np.allclose(G @ gram.inverse, np.eye(basis.N), atol=1e-12)


def test_gram_rejects_coarse_quadrature(chi0):
    basis = tk.build_basis(1j, 1, chi0, 1)
    with pytest.raises(ValueError):
        tk.build_gram(basis, quad_res=4)


def test_oracle_matches_loop_sum(rng, chi0):
    """Independent routes to the same density, three bundle shapes."""
    for tau, d, chi in ((1j, 1, chi0), (1j, 2, chi0), (0.3 + 1.2j, 1, random_chi(rng))):
        torus = tk.standard_torus(tau, d)
        for k in (1, 2):
            basis = tk.build_basis(tau, d, chi, k)
            gram = tk.build_gram(basis)
            for _ in range(5):
                p = tk.TorusPoint.from_coords(torus, rng.random(2))
                a = tk.rho_diag(torus, chi, k, p, eps=1e-12).value
                b = tk.rho_oracle(basis, gram, p)
                assert abs(a - b) < 1e-9 * max(1.0, abs(b))


def test_oracle_integrates_to_section_count(chi0):
    basis = tk.build_basis(1j, 1, chi0, 1)
    gram = tk.build_gram(basis)
    torus = basis.torus
    res = 24
    vals = [tk.rho_oracle(basis, gram, tk.TorusPoint.from_coords(torus, np.array([i / res, j / res])))
            for i in range(res) for j in range(res)]
    assert abs(float(np.mean(vals)) * torus.volume() - basis.N) < 1e-10


def test_oracle_vanishes_at_half_period(chi0):
    """The lone k = 1 section has its zero at the half period."""
    basis = tk.build_basis(1j, 1, chi0, 1)
    gram = tk.build_gram(basis)
    half = tk.TorusPoint.from_coords(basis.torus, np.array([0.5, 0.5]))
    assert tk.rho_oracle(basis, gram, half) < 1e-16


def test_offdiag_oracle_diagonal_consistency(rng, chi0):
    basis = tk.build_basis(1j, 1, chi0, 2)
    gram = tk.build_gram(basis)
    for _ in range(4):
        p = tk.TorusPoint.from_coords(basis.torus, rng.random(2))
        d = tk.offdiag_oracle(basis, gram, p, p)
        r = tk.rho_oracle(basis, gram, p)
        assert abs(d - r) < 1e-12 * max(1.0, r)


def test_offdiag_oracle_below_bound(rng, chi0):
    """The translate-sum bound must majorize the true off-diagonal kernel."""
    for tau, d in ((1j, 1), (1j, 2)):
        torus = tk.standard_torus(tau, d)
        for k in (1, 2):
            basis = tk.build_basis(tau, d, chi0, k)
            gram = tk.build_gram(basis)
            for _ in range(8):
                x = tk.TorusPoint.from_coords(torus, rng.random(2))
                y = tk.TorusPoint.from_coords(torus, rng.random(2))
                val = tk.offdiag_oracle(basis, gram, x, y)
                bound = tk.offdiag_bound(torus, k, x, y)
                allowance = bound.density_halfwidth(torus.n, k)
                assert val <= bound.value + allowance + 1e-13
