"""Peak localization as the bundle power grows.

The density peak sits where the first-shell loops all have holonomy +1,
and the pull toward that point sharpens exponentially: the distance
between the observed argmax and the predicted point is controlled by
exp((k/4)(l1^2 - l2^2)), the weight ratio of the first two shells.
"""

import math

import toruskernel as tk


def main():
    sq1 = tk.standard_torus(1j, 1)
    chi = tk.Semicharacter((0.3, 0.0))
    sh = tk.shells(sq1)
    print(f"first shell length^2 = {sh.l1 ** 2:.4f}, second = {sh.l2 ** 2:.4f}")

    sol = tk.solve_holonomy(sq1, chi, tk.HolonomyTarget(
        vectors=((1, 0), (0, 1)), targets=(1.0 + 0j, 1.0 + 0j), k=1))
    p = sol.points[0]
    print("predicted k = 1 peak (holonomy +1 on both basis loops): "
          + "(" + ", ".join(f"{c:.3f}" for c in p.coords) + ")")
    print()

    print(f"{'k':>3} {'distance to prediction':>24} {'window':>12} {'ratio':>10}")
    for row in tk.localization_sweep(sq1, chi, range(2, 11)):
        print(f"{row.k:>3} {row.dist:>24.3e} {row.bound:>12.3e} {row.ratio:>10.3g}")
    print()
    print("the window shrinks by exp(-(l2^2 - l1^2)/4) per power: the peak is")
    print("pinned to the holonomy condition at an exponential rate, while the")
    print("measured distance bottoms out at the refinement precision")


if __name__ == "__main__":
    main()
