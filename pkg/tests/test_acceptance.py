"""Acceptance suite: ten end-to-end criteria, one PASS/FAIL line each.

Each test records a single verdict line; the conftest terminal-summary hook
prints the collected lines after the run, outside pytest's output capture.
All arithmetic is exact; every numeric comparison below is equality, and the
stated runtime ceilings are asserted.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations_with_replacement, product

from multider import (
    Arrangement,
    Derivation,
    Multiarrangement,
    Poly,
    catalog,
    catalog_filtration,
    check_supersolvable,
    classify_component,
    classify_universal_rank2,
    covariant_derivative,
    defining_polynomial,
    delta,
    euler_multiplicity,
    find_free_basis,
    find_universal,
    graded_dimension,
    graded_piece,
    is_balanced,
    is_k_critical,
    is_universal,
    lattice_distance,
    noncritical_criterion,
    saito_check,
    saito_determinant,
    supersolvable_exponents,
    universal_obstruction_report,
    wakamiko_exponents,
)
from multider.sweep import parse_ranges, row_seed, run_sweep


VERDICTS: list[str] = []


@contextmanager
def verdict(number, label):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        elapsed = time.perf_counter() - start
        VERDICTS.append(f"[criterion {number:2d}] FAIL {elapsed:7.1f}s  {label}")
        raise
    elapsed = time.perf_counter() - start
    VERDICTS.append(f"[criterion {number:2d}] PASS {elapsed:7.1f}s  {label}")


def exps_of(ma):
    cert = find_free_basis(ma)
    assert cert.free, ma.mult
    return cert.exponents


def minimal_element(ma):
    k = 0
    while graded_dimension(ma, k) == 0:
        k += 1
    return graded_piece(ma, k).basis[0]


def test_criterion_01_four_line_exponents_and_universal():
    with verdict(1, "four-line rank-2 family: exponents, criticality, universal"):
        start = time.perf_counter()
        lift = catalog("B2", (3, 5, 2, 2))
        assert exps_of(lift) == (5, 7)
        assert exps_of(catalog("B2", (2, 4, 1, 1))) == (4, 4)
        for h in range(4):
            assert exps_of(lift.plus_delta(h)) == (6, 7)
        assert is_k_critical(lift, 5)
        theta = find_universal(catalog("B2", (2, 4, 1, 1)))
        assert theta is not None and theta.homogeneous_degree() == 5
        assert time.perf_counter() - start < 2.0


def test_criterion_02_braid_universal_and_transport():
    with verdict(2, "braid arrangement: printed derivation, Saito check, transport"):
        start = time.perf_counter()
        assert exps_of(catalog("A3", (3, 3, 3, 3, 3, 3))) == (5, 6, 7)
        P = lambda terms: Poly(3, terms)
        phi1 = Derivation((
            P({(4, 0, 0): 1, (3, 1, 0): -2}),
            P({(1, 3, 0): -2, (0, 4, 0): 1}),
            P({(0, 0, 4): -3, (1, 1, 2): -6, (1, 0, 3): 4, (0, 1, 3): 4}),
        ))
        partials = [
            Derivation(tuple(P({(0, 0, 0): 1}) if i == j else P({}) for j in range(3)))
            for i in range(3)
        ]
        nablas = [covariant_derivative(d, phi1) for d in partials]
        displayed = [
            Derivation((
                P({(3, 0, 0): 4, (2, 1, 0): -6}),
                P({(0, 3, 0): -2}),
                P({(0, 1, 2): -6, (0, 0, 3): 4}),
            )),
            Derivation((
                P({(3, 0, 0): -2}),
                P({(1, 2, 0): -6, (0, 3, 0): 4}),
                P({(1, 0, 2): -6, (0, 0, 3): 4}),
            )),
            Derivation((
                P({}),
                P({}),
                P({(1, 1, 1): -12, (1, 0, 2): 12, (0, 1, 2): 12, (0, 0, 3): -12}),
            )),
        ]
        assert nablas == displayed
        base = catalog("A3", (2, 1, 2, 1, 2, 1))
        ok, constant = saito_check(nablas, base)
        assert ok and constant == 288
        assert saito_determinant(nablas) == defining_polynomial(base) * 288
        assert is_universal(phi1, base)
        mu = catalog("A3", (0, 1, 0, 1, 0, 1))
        transported = [covariant_derivative(psi, phi1) for psi in find_free_basis(mu).basis]
        ok2, constant2 = saito_check(transported, catalog("A3", (2, 2, 2, 2, 2, 2)))
        assert ok2 and constant2 != 0
        assert time.perf_counter() - start < 10.0


def test_criterion_03_three_line_closed_form():
    with verdict(3, "three-line closed form vs linear algebra, 216 cases"):
        start = time.perf_counter()
        for k in product(range(1, 7), repeat=3):
            # the closed form takes its largest argument last; the exponents
            # themselves only depend on the multiset
            assert wakamiko_exponents(*sorted(k)) == exps_of(catalog("A2", k)), k
        assert time.perf_counter() - start < 60.0


def test_criterion_04_deleted_braid_classification_grid():
    with verdict(4, "deleted braid grid, 1024 points: freeness and universality laws"):
        start = time.perf_counter()
        lifted_rows = run_sweep(
            "deletedA3", parse_ranges("a=1..4,b=1..4,c=1..4,d=1..4,e=1..4"),
            predicates=("free",), jobs=4,
        )
        base_rows = run_sweep(
            "deletedA3", parse_ranges("a=0..3,b=0..3,c=0..3,d=0..3,e=0..3"),
            predicates=("universal",), jobs=4,
        )
        assert len(lifted_rows) == len(base_rows) == 1024
        for lifted, low in zip(lifted_rows, base_rows):
            a, b, c, d, e = lifted.mult
            assert low.mult == (a - 1, b - 1, c - 1, d - 1, e - 1)
            assert lifted.free == (c >= a + e - 1 or c >= b + d - 1), lifted.mult
            expect_universal = c == a + e - 1 == b + d - 1
            assert (low.universal_degree is not None) == expect_universal, lifted.mult
        assert time.perf_counter() - start < 900.0


def test_criterion_05_hexagonal_free_set():
    with verdict(5, "six-line rank-3 sweep to order 18: free set and no universals"):
        start = time.perf_counter()
        rows = run_sweep(
            "X3", parse_ranges(",".join(f"m{i}=1..13" for i in range(6))),
            predicates=("free", "universal"), jobs=4, max_total=18, dedupe=True,
        )
        assert len(rows) == 3393
        free_set = {r.mult for r in rows if r.free}
        assert free_set == {(2, 2, 2, 1, 1, 1), (4, 4, 4, 1, 1, 1)}
        assert all(r.universal_degree is None for r in rows)
        assert time.perf_counter() - start < 1200.0


def test_criterion_06_universality_equivalence_property():
    with verdict(6, "universality equivalence on 50 random instances"):
        rng = random.Random(20260823)

        def rank2_instance():
            n = rng.randint(3, 5)
            slopes = rng.sample([s for s in range(-6, 7) if s != 0], n - 2)
            arr = Arrangement(2, [(1, 0), (0, 1)] + [(1, -s) for s in slopes])
            while True:
                mult = tuple(rng.randint(0, 4) for _ in range(n))
                if sum(mult) <= 10:
                    return Multiarrangement(arr, mult)

        def rank3_instance():
            name = rng.choice(["A3", "deletedA3"])
            width = 6 if name == "A3" else 5
            return catalog(name, tuple(rng.randint(0, 3) for _ in range(width)))

        for i in range(50):
            ma = rank2_instance() if i < 30 else rank3_instance()
            lift = ma.plus_ones()
            left = is_universal(minimal_element(lift), ma)
            ell = ma.nvars
            total = sum(ma.mult)
            cert = find_free_basis(ma)
            right = (
                total % ell == 0
                and cert.free
                and cert.exponents == (total // ell,) * ell
                and is_k_critical(lift, total // ell + 1)
            )
            assert left == right, (ma.forms, ma.mult, left, right)


def test_criterion_07_rank2_lattice_laws():
    with verdict(7, "rank-2 lattice: gap bound, step law, component distance law"):
        cache = {}

        def gap(name, mult):
            key = (name, mult)
            if key not in cache:
                cache[key] = delta(catalog(name, mult)).delta
            return cache[key]

        for name, n in (("A2", 3), ("B2", 4)):
            grid = [m for m in product(range(13), repeat=n) if sum(m) <= 12]
            for m in grid:
                g = gap(name, m)
                if is_balanced(catalog(name, m)):
                    assert g <= n - 2, (name, m, g)
                for h in range(n):
                    bumped = tuple(v + (i == h) for i, v in enumerate(m))
                    assert abs(g - gap(name, bumped)) == 1, (name, m, h)
            for m in grid:
                ma = catalog(name, m)
                if not is_balanced(ma) or gap(name, m) < 1:
                    continue
                c = classify_component(ma)
                assert c.peak is not None, (name, m)
                peak = tuple(c.peak)
                peak_gap = gap(name, peak)
                assert peak_gap - c.distance == gap(name, m), (name, m, c)
                rng = random.Random(row_seed(1729, m))
                sampled = attempts = 0
                while sampled < 5 and attempts < 60:
                    attempts += 1
                    steps = rng.randint(0, peak_gap - 1)
                    q = list(peak)
                    for _ in range(steps):
                        q[rng.randrange(n)] += rng.choice((1, -1))
                    q = tuple(q)
                    if (min(q) < 0 or lattice_distance(q, peak) != steps
                            or not is_balanced(catalog(name, q))):
                        continue
                    assert gap(name, q) == peak_gap - steps, (name, m, q)
                    sampled += 1


def test_criterion_08_generic_four_line_parity():
    with verdict(8, "generic four-line slopes: gap parity, universality, invariance"):
        grid = [
            m for m in product(range(13), repeat=4)
            if sum(m) <= 12 and 2 * max(m) <= sum(m) and m != (1, 1, 1, 1)
        ]
        assert len(grid) == 811
        outcomes = []
        for t in (Fraction(7, 3), Fraction(11, 4), Fraction(13, 5)):
            per_slope = {}
            for m in grid:
                base = catalog("maehara4", m, t=t)
                g = delta(base).delta
                assert g == sum(m) % 2, (t, m, g)
                theta = minimal_element(base.plus_ones())
                per_slope[m] = (g, classify_universal_rank2(base, theta))
            true_points = sorted(m for m, (_, u) in per_slope.items() if u)
            # the zero multiplicity is the one trivial exception: there the
            # scaling derivation transports Der_S to itself identically
            assert true_points == [(0, 0, 0, 0)], (t, true_points[:5])
            outcomes.append(per_slope)
        assert outcomes[0] == outcomes[1] == outcomes[2]


def test_criterion_09_braid_supersolvable_formulas():
    with verdict(9, "braid supersolvable: exponent formula, restriction, negatives"):
        filt = catalog_filtration("A3")
        lift = catalog("A3", (2, 2, 2, 1, 1, 1))
        assert supersolvable_exponents(lift, filt) == (2, 3, 4)
        a, b, _, d = lift.mult[:4]
        restriction = euler_multiplicity(lift.plus_delta(2), 2)
        assert restriction.mu_values() == (a + 1, b + 1, d) == (3, 3, 1)
        theta = find_universal(catalog("A3", (1, 1, 1, 0, 0, 0)))
        assert theta is not None and theta.homogeneous_degree() == 2
        negatives = []
        for k in product(range(1, 4), repeat=6):
            if len(negatives) == 20:
                break
            ma = catalog("A3", k)
            if not check_supersolvable(ma, filt):
                continue
            if universal_obstruction_report(ma, filt).passes():
                continue
            negatives.append(k)
        assert len(negatives) == 20
        for k in negatives:
            base = catalog("A3", tuple(v - 1 for v in k))
            assert find_universal(base) is None, k


def test_criterion_10_fan_and_nine_line_negatives():
    with verdict(10, "fan and nine-plane catalogs: non-criticality, no universals"):
        fan = catalog("fan2d", (4, 2, 1, 1, 1, 1, 1), h=4, slopes=(1, 2, 3, 4))
        fan_filt = catalog_filtration("fan2d", h=4, slopes=(1, 2, 3, 4))
        assert check_supersolvable(fan, fan_filt)
        hits = [h for h in range(3, 7) if noncritical_criterion(fan, h)]
        assert hits
        d1 = exps_of(fan)[0]
        assert graded_dimension(fan.plus_delta(hits[0]), d1) > 0
        assert not is_k_critical(fan, d1)
        assert find_universal(catalog("fan2d", (3, 1, 0, 0, 0, 0, 0),
                                      h=4, slopes=(1, 2, 3, 4))) is None
        b3_filt = catalog_filtration("B3")
        supersolvable = 0
        for total in range(6):
            for slots in combinations_with_replacement(range(9), total):
                extra = [0] * 9
                for i in slots:
                    extra[i] += 1
                ma = catalog("B3", tuple(1 + e for e in extra))
                if not check_supersolvable(ma, b3_filt):
                    continue
                supersolvable += 1
                assert not universal_obstruction_report(ma, b3_filt).passes(), ma.mult
        assert supersolvable == 36
