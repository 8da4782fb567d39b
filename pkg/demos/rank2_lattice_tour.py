"""Tour of the rank-2 multiplicity lattice.

Three or more concurrent lines have a free derivation module for every
multiplicity, so each lattice point m carries an exponent pair (d1, d2) and
the story is the gap d2 - d1.  Walking the lattice one hyperplane at a time
changes the gap by exactly one; balanced multiplicities cluster into finite
components, each with a unique gap-maximizing peak.
"""

from multider import catalog, classify_component, delta, is_balanced, lattice_distance


def show(ma, label):
    dv = delta(ma)
    flag = "balanced" if is_balanced(ma) else "unbalanced"
    print(f"  m={ma.mult}  exponents ({dv.d1}, {dv.d2})  gap {dv.delta}  [{flag}]")
    return dv


def main():
    print("Four lines x, y, x-y, x+y with multiplicity (3, 4, 2, 2):")
    start = catalog("B2", (3, 4, 2, 2))
    show(start, "start")

    print("\nBumping one hyperplane at a time moves the gap by exactly 1:")
    for h in range(4):
        show(start.plus_delta(h), f"bump {h}")

    print("\nClassifying the component of (3, 4, 2, 2):")
    c = classify_component(start)
    print(f"  peak {tuple(c.peak)} with gap {c.peak_delta}, "
          f"distance {c.distance}, path {[tuple(m) for m in c.path]}")
    peak = catalog("B2", tuple(c.peak))
    peak_gap = delta(peak).delta
    print("  distance law: gap(query) = gap(peak) - distance ->",
          delta(start).delta == peak_gap - c.distance)

    print("\nInside the component the law holds pointwise:")
    for q in [(3, 5, 2, 2), (2, 5, 2, 2), (3, 4, 2, 3)]:
        d = lattice_distance(q, tuple(c.peak))
        g = delta(catalog("B2", q)).delta
        print(f"  m={q}: distance {d}, gap {g}, law {g == peak_gap - d}")

    print("\nAn unbalanced ray instead stretches forever along its dominant line:")
    c2 = classify_component(catalog("A2", (1, 1, 5)))
    print(f"  (1, 1, 5): infinite={c2.infinite}, dominated by hyperplane {c2.dominant}")
    for extra in range(3):
        show(catalog("A2", (1, 1, 5 + extra)), "ray")


if __name__ == "__main__":
    main()
