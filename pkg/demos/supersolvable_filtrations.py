"""Reading exponents straight off a supersolvable filtration.

A filtration fixes nested sub-arrangements of ranks 1, 2, ..., rank(A).
When the multiplicity satisfies the filtration's inequalities, the exponents
need no basis search at all: the rank-2 level contributes its exponent pair
and every later level contributes its multiplicity increment.  The same
filtration also yields quick obstructions to universal derivations.
"""

from multider import (
    catalog,
    catalog_filtration,
    check_supersolvable,
    euler_multiplicity,
    find_free_basis,
    supersolvable_exponents,
    universal_obstruction_report,
)


def main():
    ma = catalog("A3", (2, 2, 2, 1, 1, 1))
    filt = catalog_filtration("A3")
    print(f"Braid arrangement, multiplicity {ma.mult}")
    print("  filtration levels:", [list(lvl) for lvl in filt.levels])
    print("  inequalities hold:", check_supersolvable(ma, filt))
    formula = supersolvable_exponents(ma, filt)
    search = find_free_basis(ma).exponents
    print(f"  formula {formula} (filtration order) vs search {search}")

    print("\nEuler restriction onto the third hyperplane after bumping it:")
    er = euler_multiplicity(ma.plus_delta(2), 2)
    for fr in er.flats:
        print(f"  flat {fr.flat.indices}: induced multiplicity {fr.mu}"
              f" of local order {fr.local_order}")
    print("  restricted order:", er.order())

    print("\nObstruction report for a universal derivation one step down:")
    rep = universal_obstruction_report(ma, filt)
    print("  level-2 exponents of the base:", rep.rank2_exponents)
    print("  level increments of the base:", rep.increments)
    print("  all conditions pass:", rep.passes())
    print("  universal derivation found:", rep.universal.render())

    print("\nThe nine-plane catalog fails the same conditions everywhere, e.g.:")
    mb = catalog("B3", (2, 2, 2, 2, 1, 1, 1, 1, 1))
    rep_b = universal_obstruction_report(mb, catalog_filtration("B3"))
    print(f"  {mb.mult}: failed conditions {rep_b.failed()}")

    print("\nA fan of four extra planes over three base lines:")
    fan = catalog("fan2d", (4, 2, 1, 1, 1, 1, 1), h=4, slopes=(1, 2, 3, 4))
    fan_filt = catalog_filtration("fan2d", h=4, slopes=(1, 2, 3, 4))
    print("  formula:", supersolvable_exponents(fan, fan_filt),
          "vs search:", find_free_basis(fan).exponents)


if __name__ == "__main__":
    main()
