"""How the density evaluator decides when to stop summing.

Every density value carries a certificate: the loop sum is cut at a
radius whose Gaussian tail bound is below the requested accuracy, and
the bound itself is checked here against the brute-force mass of the
vectors it discards.
"""

import math

import numpy as np

import toruskernel as tk


def brute_tail(torus, radius: float, k: int, reach: float = 10.0) -> float:
    # every vector between radius and radius + reach; beyond that the
    # terms are below 1e-300 for the radii used here
    vecs = tk.enumerate_within(torus, radius + reach)
    return sum(math.exp(-0.25 * k * v.length ** 2)
               for v in vecs if v.length > radius)


def main():
    sq1 = tk.standard_torus(1j, 1)
    chi0 = tk.Semicharacter.trivial(1)

    print("tail bound vs the mass it actually discards (square torus, k = 1)")
    print(f"  {'radius':>7} {'bound':>12} {'brute tail':>12} {'ratio':>7}")
    for radius in (3.0, 4.5, 6.0, 7.5):
        bound = tk.tail_bound(sq1, radius, 1)
        brute = brute_tail(sq1, radius, 1)
        print(f"  {radius:7.1f} {bound:12.3e} {brute:12.3e} {bound / brute:7.2f}")

    print()
    print("radius chosen for a requested accuracy (k = 1)")
    for eps in (1e-4, 1e-8, 1e-12):
        radius = tk.truncation_radius(sq1, 1, eps)
        bound = tk.tail_bound(sq1, radius, 1)
        print(f"  eps = {eps:.0e}: radius {radius:6.3f}, certified tail {bound:.3e}")

    print()
    print("the certificate is honest: a loose evaluation stays within its")
    print("own half-width of a tight one")
    p = tk.TorusPoint.from_coords(sq1, (0.23, 0.71))
    tight = tk.rho_diag(sq1, chi0, 1, p, eps=1e-13)
    loose = tk.rho_diag(sq1, chi0, 1, p, eps=1e-4)
    diff = abs(loose.value - tight.value)
    hw = loose.density_halfwidth(1, 1)
    print(f"  tight (eps 1e-13): {tight.value:.15f} using {tight.terms} terms")
    print(f"  loose (eps 1e-4):  {loose.value:.15f} using {loose.terms} terms")
    print(f"  difference {diff:.2e} vs loose half-width {hw:.2e}")

    print()
    print("higher k tightens the Gaussian, so the same accuracy needs a")
    print("smaller radius and fewer loops")
    for k in (1, 2, 4, 8):
        radius = tk.truncation_radius(sq1, k, 1e-10)
        count = sum(1 for v in tk.enumerate_within(sq1, radius)
                    if v.length > 0)
        print(f"  k = {k}: radius {radius:6.3f}, {count:4d} nonzero loops")


if __name__ == "__main__":
    main()
