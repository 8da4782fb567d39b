"""Complete classification over a five-line rank-3 arrangement.

The deleted braid arrangement has defining forms (y-z, y, x-y, x, x-z) with
multiplicities (a, b, c, d, e).  The middle line x-y sits in both triple
points, and everything is decided by comparing c against a+e-1 and b+d-1:

  free            iff  c >= a+e-1  or  c >= b+d-1
  universal below iff  c  = a+e-1  =   b+d-1

The second line means: the multiplicity one step down, (a,b,c,d,e) - 1,
admits a universal derivation exactly on the stated diagonal.
"""

from itertools import product

from multider import catalog, find_free_basis, find_universal


def main():
    print("Slice a=b=d=e=2 while the shared line's multiplicity c varies:")
    print("  c | free | exponents | universal derivation for (a..e)-1")
    for c in range(1, 6):
        mult = (2, 2, c, 2, 2)
        cert = find_free_basis(catalog("deletedA3", mult))
        theta = find_universal(catalog("deletedA3", tuple(v - 1 for v in mult)))
        exps = cert.exponents if cert.free else "-"
        degree = "-" if theta is None else f"degree {theta.homogeneous_degree()}"
        print(f"  {c} | {str(cert.free):5} | {str(exps):9} | {degree}")
    print("  (boundary: a+e-1 = b+d-1 = 3, so c=3 is the single universal point)")

    print("\nExhaustive check on the cube 1 <= a,...,e <= 3:")
    free_hits = universal_hits = 0
    for mult in product(range(1, 4), repeat=5):
        a, b, c, d, e = mult
        cert = find_free_basis(catalog("deletedA3", mult))
        assert cert.free == (c >= a + e - 1 or c >= b + d - 1), mult
        free_hits += cert.free
        theta = find_universal(catalog("deletedA3", tuple(v - 1 for v in mult)))
        assert (theta is not None) == (c == a + e - 1 == b + d - 1), mult
        universal_hits += theta is not None
    print(f"  243 points: {free_hits} free, {universal_hits} universal one step down,"
          " formulas exact everywhere")


if __name__ == "__main__":
    main()
