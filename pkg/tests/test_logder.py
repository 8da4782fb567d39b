"""Derivation modules: membership, covariant derivatives, freeness, universality."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multider import (
    ArrangementError,
    Derivation,
    Poly,
    catalog,
    covariant_derivative,
    defining_polynomial,
    derivation_from_dict,
    derivation_from_vector,
    derivation_to_dict,
    euler_derivation,
    exponents,
    find_free_basis,
    find_universal,
    graded_dimension,
    graded_piece,
    hilbert_dims,
    is_k_critical,
    is_universal,
    membership,
    saito_check,
    saito_determinant,
)
from multider.polyring import monomial_exponents

scalars = st.integers(-3, 3).map(Fraction)


def polys(nvars, max_degree=2):
    exps = [
        e
        for d in range(max_degree + 1)
        for e in monomial_exponents(nvars, d)
    ]
    return st.dictionaries(st.sampled_from(exps), scalars, max_size=4).map(
        lambda terms: Poly(nvars, terms)
    )


def derivations(nvars, max_degree=2):
    return st.tuples(*[polys(nvars, max_degree)] * nvars).map(Derivation)


# -- Derivation basics -----------------------------------------------------


def test_derivation_constructor_validation():
    x = Poly.variable(2, 0)
    with pytest.raises(ValueError):
        Derivation([])
    with pytest.raises(ValueError):
        Derivation([x])  # one coefficient for two variables
    with pytest.raises(ValueError):
        Derivation([x, Poly.variable(3, 0)])
    with pytest.raises(ValueError):
        Derivation([x, x], degree_tag=2)
    tagged = Derivation([Poly.zero(2), Poly.zero(2)], degree_tag=4)
    assert tagged.degree() == 4 and not tagged


@given(derivations(2), derivations(2), polys(2), polys(2))
@settings(max_examples=40, deadline=None)
def test_apply_is_a_derivation(theta, eta, p, q):
    assert theta.apply(p * q) == theta.apply(p) * q + p * theta.apply(q)
    assert theta.apply(p + q) == theta.apply(p) + theta.apply(q)
    assert (theta + eta).apply(p) == theta.apply(p) + eta.apply(p)


def test_apply_form_matches_apply():
    ma = catalog("B2")
    theta = Derivation([Poly.variable(2, 0) ** 2, Poly.variable(2, 0) * Poly.variable(2, 1)])
    for form in ma.forms:
        assert theta.apply_form(form) == theta.apply(form.as_poly())


@given(polys(3))
@settings(max_examples=30, deadline=None)
def test_euler_identity(p):
    e = euler_derivation(3)
    parts = {}
    for exp, c in p.terms.items():
        parts.setdefault(sum(exp), {})[exp] = c
    expected = Poly.zero(3)
    for d, terms in parts.items():
        expected = expected + Poly(3, terms) * d
    assert e.apply(p) == expected


# -- covariant derivative --------------------------------------------------


@given(derivations(2), derivations(2))
@settings(max_examples=40, deadline=None)
def test_covariant_evaluation_identity(phi, theta):
    # (nabla_phi theta)(alpha) = phi(theta(alpha)) for linear alpha
    from multider import LinearForm

    for coeffs in [(1, 0), (0, 1), (1, -1), (2, 3)]:
        alpha = LinearForm(coeffs)
        lhs = covariant_derivative(phi, theta).apply_form(alpha)
        rhs = phi.apply(theta.apply_form(alpha))
        assert lhs == rhs


@given(derivations(2), derivations(2), derivations(2))
@settings(max_examples=30, deadline=None)
def test_covariant_derivative_is_bilinear(phi, psi, theta):
    lhs = covariant_derivative(phi + psi, theta)
    rhs = covariant_derivative(phi, theta) + covariant_derivative(psi, theta)
    assert lhs == rhs
    lhs = covariant_derivative(phi, psi + theta)
    rhs = covariant_derivative(phi, psi) + covariant_derivative(phi, theta)
    assert lhs == rhs


@given(derivations(2), derivations(2), polys(2))
@settings(max_examples=30, deadline=None)
def test_covariant_derivative_leibniz_in_second_slot(phi, theta, g):
    scaled = Derivation(g * f for f in theta.coeffs)
    lhs = covariant_derivative(phi, scaled)
    rhs = Derivation(phi.apply(g) * f for f in theta.coeffs) + Derivation(
        g * f for f in covariant_derivative(phi, theta).coeffs
    )
    assert lhs == rhs


def test_covariant_derivative_degree_law():
    phi = Derivation([Poly.variable(2, 0) ** 2, Poly.variable(2, 1) ** 2])
    theta = Derivation(
        [Poly.variable(2, 0) ** 3, Poly.variable(2, 0) * Poly.variable(2, 1) ** 2]
    )
    out = covariant_derivative(phi, theta)
    assert out.homogeneous_degree() == 2 + 3 - 1
    assert covariant_derivative(phi, theta).degree_tag == 4


# -- membership ------------------------------------------------------------


def test_euler_lies_in_simple_module():
    for name in ("A2", "B2", "A3", "B3", "deletedA3", "X3"):
        ma = catalog(name)
        assert membership(euler_derivation(ma.nvars), ma)


def test_q_times_coordinate_fields_lie_in_module():
    ma = catalog("A2", (2, 1, 3))
    q = defining_polynomial(ma)
    for i in range(ma.nvars):
        coeffs = [Poly.zero(ma.nvars) for _ in range(ma.nvars)]
        coeffs[i] = q
        assert membership(Derivation(coeffs), ma)


def test_membership_rejects_outsiders():
    ma = catalog("A2", (1, 1, 1))
    assert not membership(Derivation([Poly.constant(2, 1), Poly.zero(2)]), ma)
    x = Poly.variable(2, 0)
    assert not membership(Derivation([x, Poly.zero(2)]), ma)


# -- freeness and Saito ----------------------------------------------------


def _binomials_for(exps, nvars, k):
    return sum(math.comb(k - d + nvars - 1, nvars - 1) for d in exps if k >= d)


@pytest.mark.parametrize(
    "name,mult",
    [
        ("A2", (3, 2, 2)),
        ("A2", (1, 1, 5)),
        ("B2", (3, 5, 2, 2)),
        ("A3", (1, 1, 1, 1, 1, 1)),
        ("A3", (3, 3, 3, 3, 3, 3)),
        ("deletedA3", (2, 2, 3, 2, 2)),
        ("X3", (2, 2, 2, 1, 1, 1)),
    ],
)
def test_free_certificates_verify_saito(name, mult):
    ma = catalog(name, mult)
    cert = find_free_basis(ma)
    assert cert.free and bool(cert)
    assert len(cert.basis) == ma.nvars
    assert sum(cert.exponents) == ma.order()
    assert cert.exponents == tuple(sorted(cert.exponents))
    # re-verify everything the certificate claims, from scratch
    for theta in cert.basis:
        assert membership(theta, ma)
    det = saito_determinant(cert.basis)
    assert det == defining_polynomial(ma) * cert.constant
    ok, const = saito_check(cert.basis, ma)
    assert ok and const == cert.constant and const != 0
    # the graded dimensions are exactly the free-module binomial counts
    kmax = max(cert.exponents) + 1
    dims = hilbert_dims(ma, kmax)
    for k in range(kmax + 1):
        assert dims[k] == _binomials_for(cert.exponents, ma.nvars, k)
    assert any(line.startswith("degree ") for line in cert.search_log)


def test_known_exponents():
    assert exponents(catalog("B2", (3, 5, 2, 2))) == (5, 7)
    assert exponents(catalog("B2", (2, 4, 1, 1))) == (4, 4)
    assert exponents(catalog("A3", (3, 3, 3, 3, 3, 3))) == (5, 6, 7)
    assert exponents(catalog("A2", (1, 1, 5))) == (2, 5)


def test_non_free_certificate():
    ma = catalog("X3", (2, 2, 2, 2, 2, 2))
    cert = find_free_basis(ma)
    assert not cert.free and not bool(cert)
    assert cert.basis == () and cert.exponents is None and cert.constant is None
    assert cert.refutation
    assert exponents(ma) is None


def test_saito_check_refuses_non_members():
    from multider import MembershipError

    ma = catalog("A2", (1, 1, 1))
    cert = find_free_basis(ma)
    # against a bigger multiplicity the inputs are not even members: that is
    # an ill-posed question and raises rather than reporting "not a basis"
    with pytest.raises(MembershipError):
        saito_check(cert.basis, catalog("A2", (2, 1, 1)))


def test_saito_check_false_on_dependent_members():
    ma = catalog("A2", (1, 1, 1))
    theta = find_free_basis(ma).basis[0]
    scaled = Derivation(Poly.variable(2, 0) * p for p in theta.coeffs)
    ok, const = saito_check([theta, scaled], ma)
    assert not ok and const is None
    assert saito_determinant([theta, scaled]) == Poly.zero(2)


def test_find_free_basis_is_deterministic():
    ma = catalog("deletedA3", (2, 2, 3, 2, 2))
    a = find_free_basis(ma)
    b = find_free_basis(ma)
    assert a.basis == b.basis and a.constant == b.constant
    c = find_free_basis(ma, seed=99)
    assert c.free and c.exponents == a.exponents


# -- criticality and universality ------------------------------------------


def test_is_k_critical():
    lifted = catalog("B2", (3, 5, 2, 2))
    assert is_k_critical(lifted, 5)
    assert not is_k_critical(lifted, 4)
    assert not is_k_critical(lifted, 6)
    assert graded_dimension(lifted, 4) == 0
    assert graded_dimension(lifted, 5) > 0


def test_find_universal_b2():
    base = catalog("B2", (2, 4, 1, 1))
    theta = find_universal(base)
    assert theta is not None
    assert theta.homogeneous_degree() == 5
    assert is_universal(theta, base)
    assert membership(theta, base.plus_ones())


def test_find_universal_small_a2():
    base = catalog("A2", (1, 1, 2))
    theta = find_universal(base)
    assert theta is not None and theta.homogeneous_degree() == 3
    assert is_universal(theta, base)


def test_find_universal_returns_none_on_odd_total():
    assert find_universal(catalog("A2", (1, 1, 1))) is None
    assert find_universal(catalog("B2", (1, 1, 1, 2))) is None


def test_find_universal_returns_none_without_equal_exponents():
    assert find_universal(catalog("B2", (1, 3, 1, 1))) is None
    assert find_universal(catalog("X3", (2, 2, 2, 1, 1, 1))) is None


def test_universal_requires_essential_irreducible_input():
    from multider import Arrangement

    cross = Arrangement(2, [(1, 0), (0, 1)]).with_multiplicity((1, 1))
    with pytest.raises(ArrangementError):
        find_universal(cross)
    tall = Arrangement(3, [(1, 0, 0), (0, 1, 0), (1, -1, 0)]).with_multiplicity((1, 1, 1))
    with pytest.raises(ArrangementError):
        find_universal(tall)


def test_equal_exponents_make_a2_constant_multiplicity_universal():
    base = catalog("A2", (2, 2, 2))
    assert exponents(base) == (3, 3)
    assert is_k_critical(base.plus_ones(), 4)
    theta = find_universal(base)
    assert theta is not None and theta.homogeneous_degree() == 4


def test_is_universal_rejects_non_universal_members():
    base = catalog("A2", (2, 2, 2))
    theta = find_universal(base)
    # a polynomial multiple is still a member of D(A, m+1) but has the wrong
    # degree, so it cannot induce the isomorphism
    scaled = Derivation(Poly.variable(2, 0) * p for p in theta.coeffs)
    assert membership(scaled, base.plus_ones())
    assert not is_universal(scaled, base)


def test_equal_exponents_without_criticality_fail():
    base = catalog("X3", (2, 2, 2, 1, 1, 1))
    assert exponents(base) == (3, 3, 3)
    assert not is_k_critical(base.plus_ones(), 4)
    assert find_universal(base) is None
    lifted = base.plus_ones()
    k = 0
    while not graded_piece(lifted, k).basis:
        k += 1
    assert not is_universal(graded_piece(lifted, k).basis[0], base)


def test_universal_transport_shifts_zero_one_multiplicities():
    # for universal theta and mu in {0,1}^n, psi -> nabla_psi theta carries
    # D(A, mu) isomorphically onto D(A, m + mu)
    base = catalog("B2", (2, 4, 1, 1))
    theta = find_universal(base)
    for mu in [(1, 0, 1, 1), (0, 1, 0, 0), (1, 1, 1, 1)]:
        source = catalog("B2", mu)
        target = catalog("B2", tuple(a + b for a, b in zip(mu, base.mult)))
        for k in range(3):
            for psi in graded_piece(source, k).basis:
                image = covariant_derivative(psi, theta)
                assert membership(image, target)
        cert = find_free_basis(source)
        images = [covariant_derivative(psi, theta) for psi in cert.basis]
        ok, const = saito_check(images, target)
        assert ok and const != 0


# -- serialization ---------------------------------------------------------


def test_derivation_dict_round_trip():
    theta = Derivation(
        [
            Poly(2, {(2, 0): Fraction(1, 3), (0, 2): -2}),
            Poly(2, {(1, 1): 5}),
        ]
    )
    data = derivation_to_dict(theta)
    assert derivation_from_dict(data) == theta
    import json

    assert derivation_from_dict(json.loads(json.dumps(data))) == theta


def test_derivation_dict_rejects_malformed():
    with pytest.raises(ValueError):
        derivation_from_dict({})
    with pytest.raises(ValueError):
        derivation_from_dict({"coefficients": []})
    with pytest.raises(ValueError):
        derivation_from_dict({"coefficients": [{"0,0": "x"}, {}]})
    with pytest.raises(ValueError):
        derivation_from_dict({"coefficients": [{"0": 1}, {"0,0": 1}]})


def test_derivation_vector_round_trip():
    theta = Derivation(
        [Poly(2, {(2, 0): 3, (1, 1): -1}), Poly(2, {(0, 2): Fraction(1, 2)})]
    )
    vec = theta.coefficient_vector(2)
    assert derivation_from_vector(2, 2, vec) == theta
