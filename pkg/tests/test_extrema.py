"""Extremum location, holonomy congruences, pushforward, comparison."""

import math

import numpy as np
import pytest

import toruskernel as tk
from toruskernel.intlin import extended_gcd_row, smith_normal_form

from conftest import random_chi

TWO_PI = 2 * math.pi


def circ(a, b):
    return abs((a - b + 0.5) % 1.0 - 0.5)


def test_smith_normal_form_properties(rng):
    for _ in range(12):
        m = int(rng.integers(1, 5))
        n = int(rng.integers(1, 5))
        M = rng.integers(-9, 10, size=(m, n))
        U, D, V = smith_normal_form(M)
        assert np.array_equal(np.array(U @ np.array(M, dtype=object) @ V, dtype=object), D)
        # unimodular transforms
        assert abs(round(float(np.linalg.det(np.array(U, dtype=float))))) == 1
        assert abs(round(float(np.linalg.det(np.array(V, dtype=float))))) == 1
        diag = [int(D[i, i]) for i in range(min(m, n))]
        assert all(d >= 0 for d in diag)
        for a, b in zip(diag, diag[1:]):
            if b != 0:
                assert a != 0 and b % a == 0
        off = [D[i, j] for i in range(m) for j in range(n) if i != j]
        assert all(int(x) == 0 for x in off)


def test_extended_gcd_row(rng):
    for _ in range(10):
        n = int(rng.integers(2, 5))
        r = rng.integers(-9, 10, size=n)
        if not np.any(r):
            r[0] = 3
        g, c, kernel = extended_gcd_row(r)
        assert g == math.gcd(*[int(x) for x in r])
        assert int(np.array(r, dtype=object) @ c) == g
        K = np.array(kernel, dtype=object)
        assert K.shape == (n, n - 1)
        assert all(int(x) == 0 for x in np.array(r, dtype=object) @ K)


def test_solve_holonomy_square(sq1, chi0):
    """Unit targets on the basis loops pin the base point completely."""
    for tgt, want in ((1.0, (0.0, 0.0)), (-1.0, (0.5, 0.5))):
        sol = tk.solve_holonomy(sq1, chi0, tk.HolonomyTarget(
            vectors=((1, 0), (0, 1)), targets=(complex(tgt),) * 2, k=1))
        assert not sol.underdetermined
        assert len(sol.points) == 1
        assert sol.points[0].coords == want
        # the solved point really achieves the targets
        for v in ((1, 0), (0, 1)):
            hol = tk.hol_closed(sq1, chi0, 1, sol.points[0], v)
            assert abs(hol.value - tgt) < 1e-10


def test_solve_holonomy_doubled_form(d2, chi0):
    # doubled pairing halves the congruence scale: four solutions
    sol = tk.solve_holonomy(d2, chi0, tk.HolonomyTarget(
        vectors=((1, 0), (0, 1)), targets=(1.0 + 0j, 1.0 + 0j), k=1))
    got = sorted(tuple(round(c, 9) for c in p.coords) for p in sol.points)
    assert got == [(0.0, 0.0), (0.0, 0.5), (0.5, 0.0), (0.5, 0.5)]


def test_solve_holonomy_underdetermined(rect, chi0):
    sol = tk.solve_holonomy(rect, chi0, tk.HolonomyTarget(
        vectors=((1, 0),), targets=(1.0 + 0j,), k=1), mesh=4)
    assert sol.underdetermined
    assert len(sol.free_directions) == 1
    assert len(sol.points) > 1


def test_solve_holonomy_inconsistent(sq1, chi0):
    with pytest.raises(tk.InconsistentSystem):
        tk.solve_holonomy(sq1, chi0, tk.HolonomyTarget(
            vectors=((1, 0), (2, 0)), targets=(1.0 + 0j, -1.0 + 0j), k=1))


def test_solve_holonomy_rejects_off_circle(sq1, chi0):
    with pytest.raises(ValueError):
        tk.solve_holonomy(sq1, chi0, tk.HolonomyTarget(
            vectors=((1, 0),), targets=(2.0 + 0j,), k=1))


def test_find_extrema_square(sq1, chi0):
    mx, mn = tk.find_extrema(sq1, chi0, 1)
    assert all(circ(c, 0.0) < 1e-6 for c in mx.location.coords)
    assert abs(TWO_PI * mx.value - 1.6692536833481473) < 1e-9
    assert all(circ(c, 0.5) < 1e-6 for c in mn.location.coords)
    assert abs(mn.value) < 1e-12
    sh = tk.shells(sq1)
    assert mx.window == pytest.approx(math.exp(0.25 * (sh.l1 ** 2 - sh.l2 ** 2)))
    assert mx.distance < 1e-6


def test_find_extrema_doubled_form(d2, chi0):
    """Doubled pairing ties four translated maxima at equal height."""
    mx, _ = tk.find_extrema(d2, chi0, 1)
    ties = sorted(tuple(round(c, 6) % 1.0 for c in p.coords) for p in mx.tied_locations)
    assert ties == [(0.0, 0.0), (0.0, 0.5), (0.5, 0.0), (0.5, 0.5)]
    assert abs(TWO_PI * mx.value - 1.1803405990160964) < 1e-9
    assert mx.distance < 1e-8
    assert len(mx.predicted) == 4


def test_find_extrema_twisted(sq1):
    """A generic flat twist moves the peak to the holonomy-1 point."""
    chi = tk.Semicharacter((0.3, 0.0))
    mx, _ = tk.find_extrema(sq1, chi, 1)
    assert circ(mx.location.coords[0], 0.0) < 1e-6
    assert circ(mx.location.coords[1], 0.7) < 1e-6
    for v in ((1, 0), (0, 1)):
        hol = tk.hol_closed(sq1, chi, 1, mx.location, v)
        assert abs(hol.value - 1.0) < 1e-6


def test_find_extrema_rejects_small_resolution(sq1, chi0):
    with pytest.raises(ValueError):
        tk.find_extrema(sq1, chi0, 1, resolution=8)


def test_localization_sweep(sq1):
    chi = tk.Semicharacter((0.3, 0.0))
    rows = tk.localization_sweep(sq1, chi, (2, 3, 4))
    sh = tk.shells(sq1)
    for row in rows:
        assert row.bound == pytest.approx(math.exp(0.25 * row.k * (sh.l1 ** 2 - sh.l2 ** 2)))
        assert row.ratio == pytest.approx(row.dist / row.bound)
        assert row.ratio <= 10.0
    assert rows[0].bound > rows[1].bound > rows[2].bound


def test_pushforward_frozen_profile(sq1):
    """Loop-average profile of the basic twist: amplitude 2*sqrt(2pi)*exp(-pi/2)."""
    chi = tk.Semicharacter((0.3, 0.0))
    fit = tk.pushforward_fit(sq1, chi, 1, (1, 0))
    assert abs(fit.phase - 0.7) < 1e-9
    assert abs(fit.amplitude - 2.0 * math.sqrt(TWO_PI) * math.exp(-math.pi / 2)) < 1e-12
    assert abs(fit.fiber_volume - math.sqrt(TWO_PI)) < 1e-12
    assert fit.frequency == 1
    assert fit.measured_frequency == 1
    assert fit.residual < 1e-12


def test_pushforward_matches_holonomy(rng, sq1):
    """Recovered phase equals the closed-form loop holonomy at the origin."""
    for trial in range(4):
        chi = random_chi(rng)
        v = ((1, 0), (0, 1), (1, 1))[trial % 3]
        k = 1 + trial % 2
        phase = tk.pushforward_recover(sq1, chi, k, v)
        hol = tk.hol_closed(sq1, chi, k, tk.TorusPoint.zero(sq1), v)
        assert circ(phase, hol.alpha % 1.0) < 1e-6


def test_pushforward_guards(sq1):
    chi = tk.Semicharacter((0.3, 0.0))
    with pytest.raises(ValueError):
        tk.pushforward_fit(sq1, chi, 1, (0, 0))
    # a 3-point fiber mesh cannot cancel the transverse loops
    with pytest.raises(tk.FitResidualTooLarge):
        tk.pushforward_fit(sq1, chi, 1, (1, 0), samples=3)


def test_compare_distinct_at_k1(sq1, chi0):
    """Half twist against no twist: densities differ visibly at k = 1."""
    other = tk.Semicharacter((0.5, 0.0))
    cmp = tk.compare_bundles(sq1, chi0, other, 1)
    assert cmp.verdict == "distinct"
    assert cmp.witness is not None
    assert cmp.max_diff > cmp.threshold
    assert TWO_PI * cmp.max_diff > 0.05
    # the witness is honest: recompute both densities there
    a = tk.rho_diag(sq1, chi0, 1, cmp.witness).value
    b = tk.rho_diag(sq1, other, 1, cmp.witness).value
    assert abs(abs(a - b) - cmp.max_diff) < 1e-10


def test_compare_isomorphic_power_at_k2(sq1, chi0):
    """The same half twist squares to the trivial bundle."""
    other = tk.Semicharacter((0.5, 0.0))
    cmp = tk.compare_bundles(sq1, chi0, other, 2)
    assert cmp.verdict == "isomorphic_power"
    assert cmp.witness is None
    assert cmp.max_diff <= cmp.threshold
    for pa, pb in cmp.recovered:
        assert circ(pa, pb) < 1e-9


def test_compare_same_bundle(sq1, rng):
    chi = random_chi(rng)
    cmp = tk.compare_bundles(sq1, chi, chi, 1)
    assert cmp.verdict == "isomorphic_power"
    assert cmp.max_diff < 1e-13
