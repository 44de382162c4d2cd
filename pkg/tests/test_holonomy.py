"""Holonomy: closed form against transport, and the structural laws."""

import cmath
import math

import numpy as np
import pytest

import toruskernel as tk

from conftest import random_chi, random_torus

TWO_PI = 2 * math.pi


def test_square_quarter_point_loop(sq1, chi0):
    """The i-direction loop at the quarter point picks up a quarter turn."""
    p = tk.TorusPoint.from_coords(sq1, np.array([0.25, 0.0]))
    res = tk.hol_closed(sq1, chi0, 1, p, [0, 1])
    assert abs(res.value - 1j) < 1e-12
    assert abs(res.alpha - 0.25) < 1e-12


def test_zero_phase_character_base_point(sq1, chi0):
    """At the base point the holonomy is chi(v)^(-k); the zero-phase
    semicharacter still carries the cocycle parity (-1)^(c1*c2*E12)."""
    p = tk.TorusPoint.zero(sq1)
    for v, want in (([1, 0], 1.0), ([0, 1], 1.0), ([1, 1], -1.0), ([2, -1], 1.0)):
        res = tk.hol_closed(sq1, chi0, 1, p, v)
        assert abs(res.value - want) < 1e-12


def test_calibration_sign_fixed():
    assert tk.calibration_sign() == 1


def test_closed_matches_transport(rng):
    for _ in range(25):
        torus = random_torus(rng)
        chi = random_chi(rng)
        k = int(rng.integers(1, 4))
        p = tk.TorusPoint.from_coords(torus, rng.random(2))
        v = rng.integers(-2, 3, size=2)
        if not v.any():
            v = np.array([1, 0])
        closed = tk.hol_closed(torus, chi, k, p, v)
        ode = tk.hol_ode(torus, chi, k, p, v)
        assert abs(closed.value - ode.value) < 1e-8
        assert abs(abs(ode.value) - 1.0) < 1e-9


def test_power_law(rng, skew):
    chi = random_chi(rng)
    p = tk.TorusPoint.from_coords(skew, rng.random(2))
    base = tk.hol_closed(skew, chi, 1, p, [1, -1]).value
    for k in range(2, 6):
        val = tk.hol_closed(skew, chi, k, p, [1, -1]).value
        assert abs(val - base ** k) < 1e-9


def test_displacement_law(rng, sq1):
    """Moving the base point by w multiplies the holonomy by
    exp(2*pi*i*k*s*E(v, w)) in lattice coordinates."""
    s = tk.calibration_sign()
    chi = random_chi(rng)
    for _ in range(10):
        k = int(rng.integers(1, 4))
        v = rng.integers(-2, 3, size=2)
        if not v.any():
            v = np.array([0, 1])
        base_coords = rng.random(2)
        w = rng.random(2) * 0.5
        a = tk.hol_closed(sq1, chi, k, tk.TorusPoint.from_coords(sq1, base_coords), v).value
        b = tk.hol_closed(sq1, chi, k, tk.TorusPoint.from_coords(sq1, base_coords + w), v).value
        twist = cmath.exp(2j * math.pi * k * s * float(v @ sq1.E @ w))
        assert abs(b - a * twist) < 1e-9


def test_lattice_periodicity(rng, skew):
    chi = random_chi(rng)
    p = rng.random(2)
    for shift in ([1, 0], [0, 1], [-2, 3]):
        a = tk.hol_closed(skew, chi, 2, tk.TorusPoint.from_coords(skew, p), [1, 1]).value
        b = tk.hol_closed(skew, chi, 2, tk.TorusPoint.from_coords(skew, p + np.array(shift)), [1, 1]).value
        assert abs(a - b) < 1e-9


def test_orthogonal_direction_constancy(sq1, d2, chi0):
    """On a product, a loop from one factor has constant holonomy along
    the other factor (the pairing E(v, u) vanishes)."""
    prod = tk.product_torus(sq1, d2)
    chi = tk.Semicharacter.trivial(2)
    v = [1, 0, 0, 0]
    base = tk.hol_closed(prod, chi, 1, tk.TorusPoint.from_coords(prod, np.array([0.2, 0.0, 0.0, 0.0])), v)
    for t in np.linspace(0.0, 0.9, 7):
        moved = tk.hol_closed(
            prod, chi, 1,
            tk.TorusPoint.from_coords(prod, np.array([0.2, 0.0, t, 0.3 * t])), v,
        )
        assert abs(moved.value - base.value) < 1e-10


def test_alpha_consistency(rng, sq1):
    chi = random_chi(rng)
    p = tk.TorusPoint.from_coords(sq1, rng.random(2))
    for k in (1, 2, 3):
        res = tk.hol_closed(sq1, chi, k, p, [1, 2])
        assert abs(res.value - cmath.exp(2j * math.pi * res.alpha)) < 1e-12
        # the series coefficient is the cosine of the holonomy angle
        coeff = tk.alpha_series_coeff(sq1, chi, k, p, [1, 2])
        assert abs(coeff - res.value.real) < 1e-12


def test_step_count_guard(sq1, chi0):
    with pytest.raises(tk.StepCountTooSmall):
        tk.hol_ode(sq1, chi0, 1, tk.TorusPoint.zero(sq1), [1, 0], steps=10)


def test_transport_step_refinement(sq1):
    """Transport error falls with step count toward the closed value."""
    chi = tk.Semicharacter((0.37, 0.21))
    p = tk.TorusPoint.from_coords(sq1, np.array([0.3, 0.6]))
    closed = tk.hol_closed(sq1, chi, 2, p, [1, 1]).value
    errs = [abs(tk.hol_ode(sq1, chi, 2, p, [1, 1], steps=n).value - closed)
            for n in (400, 800, 1600)]
    assert errs[2] < errs[0]
    assert errs[2] < 1e-9
