"""From one special derivation to a whole free basis.

A universal derivation theta for a multiplicity m lives one level up, in
D(A, m+1), and turns plain coordinate derivations into a basis of D(A, m):
phi maps to the covariant derivative of theta along phi.  The same transport
carries a basis for any 0/1 multiplicity mu onto a basis for m + mu, so one
derivation encodes an entire family of freeness certificates.
"""

from multider import (
    Derivation,
    Poly,
    catalog,
    covariant_derivative,
    find_free_basis,
    find_universal,
    graded_dimension,
    is_k_critical,
    saito_check,
)


def main():
    base = catalog("B2", (2, 4, 1, 1))
    cert = find_free_basis(base)
    print(f"Base multiplicity {base.mult}: exponents {cert.exponents}")
    print("Equal exponents are the door; criticality one degree up is the key:")
    lift = base.plus_ones()
    d = cert.exponents[0]
    print(f"  dimensions of D(A, m+1) in degrees {list(range(d + 2))}:",
          [graded_dimension(lift, k) for k in range(d + 2)])
    print(f"  is_k_critical(m+1, {d + 1}):", is_k_critical(lift, d + 1))

    theta = find_universal(base)
    print(f"\nUniversal derivation (degree {theta.homogeneous_degree()}):")
    print(" ", theta.render())

    print("\nCovariant derivatives along the coordinate directions:")
    images = []
    for i, name in enumerate(["d/dx", "d/dy"]):
        partial = Derivation(tuple(
            Poly(2, {(0, 0): 1}) if j == i else Poly(2, {}) for j in range(2)
        ))
        image = covariant_derivative(partial, theta)
        images.append(image)
        print(f"  along {name}: {image.render()}")
    ok, constant = saito_check(images, base)
    print(f"  Saito check for D(A, m): {ok}, constant {constant}")

    mu = base.with_mult([0, 1, 0, 1])
    print(f"\nTransporting a basis of D(A, mu) for mu={mu.mult}:")
    target = base.with_mult([m + u for m, u in zip(base.mult, mu.mult)])
    transported = [covariant_derivative(psi, theta) for psi in find_free_basis(mu).basis]
    ok2, constant2 = saito_check(transported, target)
    print(f"  lands in D(A, {target.mult}); Saito check {ok2}, constant {constant2}")

    print("\nWhere the exponents split, no universal derivation exists:")
    for mult in [(3, 4, 2, 2), (1, 3, 1, 1)]:
        print(f"  {mult}:", find_universal(catalog("B2", mult)))


if __name__ == "__main__":
    main()
