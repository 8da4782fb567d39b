"""Euler restrictions, boundary polynomials, and supersolvable filtrations.

Restricting a multiarrangement to one of its hyperplanes H0 assigns every
rank-2 flat through H0 an Euler multiplicity: the degree of the basis element
theta_Y of the local rank-2 module that survives away from H0, its partner
psi_Y having all coefficients divisible by alpha_0.  The existence of such a
special basis is a standard fact (every rank-2 localization is free, and one
basis element can always be pushed into alpha_0 * Der by column operations);
here it is reconstructed from residues on the line alpha_0 = 0 and certified
by exact division.

On top of the restriction sit the boundary polynomial B (a gate on theta(
alpha_0) for members of the module), the resulting non-criticality test, and
the supersolvable machinery: filtration validation, the multiplicity
inequalities, the combinatorial exponent formula, and the necessary-condition
report for universal derivations over a supersolvable multiplicity.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .arrangement import (
    Arrangement,
    Flat,
    Multiarrangement,
    essentialize,
    flat_of,
    localize,
    rank2_flats,
)
from .errors import (
    ArrangementError,
    FiltrationError,
    HypothesisError,
    InternalCheckError,
    MultiderError,
    UndefinedExponentError,
)
from .logder import (
    DEFAULT_SEED,
    Derivation,
    find_free_basis,
    find_universal,
)
from .polyring import LinearForm, Poly, product_of_forms, try_divide_linear
from .rank2 import delta, is_balanced

__all__ = [
    "Filtration",
    "FlatRestriction",
    "EulerRestriction",
    "BFactor",
    "BPolynomialData",
    "ObstructionReport",
    "special_rank2_basis",
    "euler_multiplicity",
    "b_polynomial",
    "noncritical_criterion",
    "check_supersolvable",
    "supersolvable_exponents",
    "universal_obstruction_report",
    "filtration_from_dict",
    "filtration_to_dict",
    "load_filtration",
]


@dataclass(frozen=True)
class Filtration:
    """Nested sub-arrangements A_1 < A_2 < ... < A_r = A with rank(A_i) = i.

    Levels are index tuples into the arrangement's hyperplane list.  The
    constructor validates strict inclusion, the rank ladder, and the
    combinatorial closure condition: any two hyperplanes new at one level
    intersect inside some hyperplane of the previous level.
    """

    arrangement: Arrangement
    levels: tuple[tuple[int, ...], ...]

    def __init__(self, arrangement: Arrangement, levels):
        norm = tuple(tuple(sorted({int(i) for i in lvl})) for lvl in levels)
        if not norm:
            raise FiltrationError("a filtration needs at least one level")
        n = len(arrangement.forms)
        for lvl in norm:
            if not lvl:
                raise FiltrationError("empty filtration level")
            if lvl[0] < 0 or lvl[-1] >= n:
                raise FiltrationError("hyperplane index out of range")
        prev: tuple[int, ...] = ()
        for depth, lvl in enumerate(norm, start=1):
            if not set(prev) < set(lvl):
                raise FiltrationError("filtration levels must strictly increase")
            sub = Arrangement(arrangement.nvars, [arrangement.forms[i] for i in lvl])
            if sub.rank() != depth:
                raise FiltrationError(f"level {depth} must have rank {depth}")
            prev = lvl
        if set(norm[-1]) != set(range(n)):
            raise FiltrationError("the last level must contain every hyperplane")
        for depth in range(1, len(norm)):
            before = set(norm[depth - 1])
            fresh = [i for i in norm[depth] if i not in before]
            for a in range(len(fresh)):
                for b in range(a + 1, len(fresh)):
                    fl = flat_of(arrangement, (fresh[a], fresh[b]))
                    if not any(i in before for i in fl.indices):
                        raise FiltrationError(
                            "two hyperplanes new at level "
                            f"{depth + 1} meet outside the previous level"
                        )
        object.__setattr__(self, "arrangement", arrangement)
        object.__setattr__(self, "levels", norm)

    @property
    def rank(self) -> int:
        return len(self.levels)

    def new_at(self, depth: int) -> tuple[int, ...]:
        """Hyperplane indices first appearing at 1-based level `depth`."""
        if depth == 1:
            return self.levels[0]
        before = set(self.levels[depth - 2])
        return tuple(i for i in self.levels[depth - 1] if i not in before)

    def sub_multiarrangement(self, ma: Multiarrangement, depth: int) -> Multiarrangement:
        """The level-`depth` (1-based) piece of `ma`."""
        if ma.arrangement != self.arrangement:
            raise FiltrationError("multiarrangement does not match the filtration")
        idx = self.levels[depth - 1]
        sub = Arrangement(ma.nvars, [ma.forms[i] for i in idx])
        return sub.with_multiplicity([ma.mult[i] for i in idx])

    def level_order(self, ma: Multiarrangement, depth: int) -> int:
        """Total multiplicity of `ma` on the level-`depth` hyperplanes."""
        if ma.arrangement != self.arrangement:
            raise FiltrationError("multiarrangement does not match the filtration")
        return sum(ma.mult[i] for i in self.levels[depth - 1])


def filtration_from_dict(arrangement: Arrangement, data: dict) -> Filtration:
    try:
        levels = data["filtration"]
    except (KeyError, TypeError) as exc:
        raise FiltrationError("expected a 'filtration' key with index lists") from exc
    if not isinstance(levels, list) or not all(isinstance(lvl, list) for lvl in levels):
        raise FiltrationError("'filtration' must be a list of index lists")
    return Filtration(arrangement, tuple(tuple(lvl) for lvl in levels))


def filtration_to_dict(f: Filtration) -> dict:
    return {"filtration": [list(lvl) for lvl in f.levels]}


def load_filtration(arrangement: Arrangement, path: str) -> Filtration:
    with open(path, "r", encoding="utf-8") as fh:
        return filtration_from_dict(arrangement, json.load(fh))


# -- the special rank-2 basis and the Euler multiplicity -------------------


def _parallel_ratio(r1, r2) -> Fraction | None:
    """lam with r2 == lam * r1 for nonzero 2-vectors, None if independent."""
    if r1[0] * r2[1] - r1[1] * r2[0]:
        return None
    i = 0 if r1[0] else 1
    return r2[i] / r1[i]


def special_rank2_basis(ma: Multiarrangement, alpha0: LinearForm) -> tuple[Derivation, Derivation]:
    """Basis (theta, psi) of a rank-2 module with psi inside alpha0 * Der.

    Returned on the essential two-variable coordinates of the localization.
    theta keeps a coefficient not divisible by alpha0 while every coefficient
    of psi is divisible; both facts are certified by exact division.  The
    construction takes any free basis (b1, b2) with degrees d1 <= d2 and
    looks at the coefficient residues on the line alpha0 = 0: a basis element
    with zero residue is already divisible, and otherwise the residues must
    be parallel, so subtracting the matching multiple of b1 (scaled by a
    linear form that is 1 on the residue point) pushes b2 into alpha0 * Der.
    """
    if alpha0 not in ma.forms:
        raise ArrangementError("alpha0 must be one of the localization's forms")
    ess, change = essentialize(ma)
    if ess.nvars != 2:
        raise ArrangementError("special basis needs a rank-2 localization")
    a0 = change.map_form(alpha0)
    cert = find_free_basis(ess)
    if not cert.free or cert.exponents is None:
        raise InternalCheckError("rank-2 localizations are always free")
    b1, b2 = cert.basis
    d1, d2 = cert.exponents
    w = a0.kernel_point_2d()
    r1 = tuple(p.evaluate(w) for p in b1.coeffs)
    r2 = tuple(p.evaluate(w) for p in b2.coeffs)
    if not any(r2):
        theta, psi = b1, b2
    elif not any(r1):
        theta, psi = b2, b1
    else:
        lam = _parallel_ratio(r1, r2)
        if lam is None:
            raise InternalCheckError("independent residues leave no special basis")
        j = next(i for i, v in enumerate(w) if v)
        unit = Poly.variable(2, j) * Fraction(1, w[j])
        g = unit ** (d2 - d1) * lam
        theta = b1
        psi = b2 - Derivation(g * p for p in b1.coeffs)
    for p in psi.coeffs:
        if p and try_divide_linear(p, a0) is None:
            raise InternalCheckError("special element failed exact division")
    if all((not p) or try_divide_linear(p, a0) is not None for p in theta.coeffs):
        raise InternalCheckError("both basis elements are divisible by the boundary form")
    return theta, psi


@dataclass(frozen=True)
class FlatRestriction:
    """One point of the restricted arrangement with its witnesses."""

    flat: Flat
    mu: int
    theta: Derivation
    psi: Derivation
    local_order: int


@dataclass(frozen=True)
class EulerRestriction:
    """Restriction of (A, m) to a hyperplane with Euler multiplicities."""

    ma: Multiarrangement
    h0: int
    flats: tuple[FlatRestriction, ...]

    def mu_values(self) -> tuple[int, ...]:
        return tuple(fr.mu for fr in self.flats)

    def order(self) -> int:
        """Total Euler multiplicity |mu*|."""
        return sum(fr.mu for fr in self.flats)


def euler_multiplicity(ma: Multiarrangement, h0: int) -> EulerRestriction:
    """Euler multiplicity of every flat of the restriction to hyperplane h0.

    Flats are the rank-2 intersections through h0, ordered by their index
    lists; each is localized and handed to `special_rank2_basis`, and mu* is
    the degree of the returned theta.
    """
    if not 0 <= h0 < len(ma.forms):
        raise ArrangementError(f"hyperplane index {h0} out of range")
    alpha0 = ma.forms[h0]
    records = []
    for fl in rank2_flats(ma.arrangement):
        if h0 not in fl.indices:
            continue
        local = localize(ma, fl)
        theta, psi = special_rank2_basis(local, alpha0)
        mu = theta.homogeneous_degree()
        if mu is None:
            raise InternalCheckError("special basis element lost homogeneity")
        records.append(FlatRestriction(fl, mu, theta, psi, local.order()))
    return EulerRestriction(ma, h0, tuple(records))


# -- the boundary polynomial and non-criticality ---------------------------


@dataclass(frozen=True)
class BFactor:
    """Contribution of one restriction flat to the boundary polynomial."""

    flat: Flat
    chosen: int
    d_x: int


@dataclass(frozen=True)
class BPolynomialData:
    """Boundary polynomial B = alpha_0^{m0-1} * prod alpha_{H_X}^{d_X - m0}."""

    ma: Multiarrangement
    h0: int
    m0: int
    factors: tuple[BFactor, ...]
    polynomial: Poly

    def degree(self) -> int:
        return (self.m0 - 1) + sum(f.d_x - self.m0 for f in self.factors)


def _local_exponents(ma: Multiarrangement, fl: Flat) -> tuple[int, ...]:
    ess, _ = essentialize(localize(ma, fl))
    cert = find_free_basis(ess)
    if not cert.free or cert.exponents is None:
        raise InternalCheckError("rank-2 localizations are always free")
    return cert.exponents


def b_polynomial(ma: Multiarrangement, h0: int) -> BPolynomialData:
    """Assemble the boundary polynomial gating theta(alpha_0) at h0.

    The input multiplicity plays the role of m+1, so m0 is the input value at
    h0 plus one.  Each flat X through h0 contributes the exponent d_X that
    appears in the localization's pair after raising h0 and not before; the
    chosen representative H_X is the lowest-index hyperplane of the flat
    other than h0.  Negative factor exponents d_X - m0 are rejected.
    """
    if not 0 <= h0 < len(ma.forms):
        raise ArrangementError(f"hyperplane index {h0} out of range")
    m0 = ma.mult[h0] + 1
    bumped = ma.plus_delta(h0)
    factors: list[BFactor] = []
    powers: list[tuple[LinearForm, int]] = [(ma.forms[h0], m0 - 1)]
    for fl in rank2_flats(ma.arrangement):
        if h0 not in fl.indices:
            continue
        before = _local_exponents(ma, fl)
        after = _local_exponents(bumped, fl)
        diff = Counter(after) - Counter(before)
        if sum(diff.values()) != 1:
            raise UndefinedExponentError(
                f"no unique non-shared exponent at flat {fl.indices}: "
                f"{before} versus {after}"
            )
        d_x = next(iter(diff))
        if d_x < m0:
            raise MultiderError(
                f"negative boundary factor exponent at flat {fl.indices}"
            )
        chosen = next(i for i in fl.indices if i != h0)
        factors.append(BFactor(fl, chosen, d_x))
        powers.append((ma.forms[chosen], d_x - m0))
    return BPolynomialData(ma, h0, m0, tuple(factors), product_of_forms(powers))


def noncritical_criterion(ma: Multiarrangement, h: int) -> bool:
    """Restriction-order test forcing a surviving low-degree element.

    For a free rank-3 multiplicity with exponents d1 <= d2 <= d3 (the input
    again playing the role of m+1): when the Euler restriction of the raised
    multiplicity to h has total order below d2 + d3, the degree-d1 piece of
    the raised module cannot vanish, so criticality fails there.
    """
    if ma.arrangement.rank() != 3:
        raise HypothesisError("the criterion needs a rank-3 multiarrangement")
    ess = ma if ma.nvars == 3 else essentialize(ma)[0]
    cert = find_free_basis(ess)
    if not cert.free or cert.exponents is None:
        raise HypothesisError("the criterion needs a free multiarrangement")
    _, d2, d3 = cert.exponents
    restricted = euler_multiplicity(ma.plus_delta(h), h)
    return restricted.order() < d2 + d3


# -- supersolvable multiplicities ------------------------------------------


def check_supersolvable(ma: Multiarrangement, filt: Filtration) -> bool:
    """Multiplicity inequalities of the supersolvable exponent formula.

    For every level d >= 3, every hyperplane H'' of the previous level, and
    every flat X spanned by H'' with a hyperplane new at level d: either the
    full localization at X is just the pair, or m(H'') is at least the total
    new multiplicity through X minus one.
    """
    if filt.arrangement != ma.arrangement:
        raise FiltrationError("filtration belongs to a different arrangement")
    for depth in range(3, filt.rank + 1):
        level = set(filt.levels[depth - 1])
        before = set(filt.levels[depth - 2])
        fresh = sorted(level - before)
        seen: set[tuple] = set()
        for hp in fresh:
            for hq in sorted(before):
                fl = flat_of(ma.arrangement, (hp, hq))
                key = (fl.indices, hq)
                if key in seen:
                    continue
                seen.add(key)
                if set(fl.indices) == {hp, hq}:
                    continue
                new_total = sum(ma.mult[i] for i in fl.indices if i in level and i not in before)
                if ma.mult[hq] < new_total - 1:
                    return False
    return True


def supersolvable_exponents(ma: Multiarrangement, filt: Filtration,
                            seed: int = DEFAULT_SEED) -> tuple[int, ...]:
    """Exponents read off a supersolvable filtration without a Saito search.

    The rank-2 level contributes its exponent pair; every later level
    contributes its multiplicity increment; trailing zeros pad non-essential
    ambient coordinates.
    """
    if filt.rank < 2:
        raise HypothesisError("the exponent formula needs rank at least 2")
    if not check_supersolvable(ma, filt):
        raise FiltrationError("the multiplicity fails the supersolvable inequalities")
    dv = delta(filt.sub_multiarrangement(ma, 2), seed=seed)
    exps = [dv.d1, dv.d2]
    for depth in range(3, filt.rank + 1):
        exps.append(filt.level_order(ma, depth) - filt.level_order(ma, depth - 1))
    exps.extend([0] * (ma.nvars - filt.rank))
    return tuple(exps)


@dataclass(frozen=True)
class ObstructionReport:
    """Necessary conditions for a universal derivation over m, from a
    supersolvable filtration of the lifted multiplicity m+1.

    The input multiarrangement carries m+1; `rank2_exponents` and
    `increments` refer to the base multiplicity m.  When every condition
    holds the final verdict is delegated to the existence search and stored
    in `universal`.
    """

    ma: Multiarrangement
    filtration: Filtration
    lift_balanced: bool
    base_order_even: bool
    rank2_exponents: tuple[int, int]
    rank2_equal: bool
    increments: tuple[int, ...]
    increments_equal: bool
    universal: Derivation | None

    def passes(self) -> bool:
        return (self.lift_balanced and self.base_order_even
                and self.rank2_equal and self.increments_equal)

    def failed(self) -> tuple[str, ...]:
        names = (
            ("lift_balanced", self.lift_balanced),
            ("base_order_even", self.base_order_even),
            ("rank2_equal", self.rank2_equal),
            ("increments_equal", self.increments_equal),
        )
        return tuple(name for name, ok in names if not ok)


def universal_obstruction_report(ma: Multiarrangement, filt: Filtration,
                                 seed: int = DEFAULT_SEED) -> ObstructionReport:
    """Evaluate the necessary conditions for universality over the base m.

    Conditions: the lifted level-2 multiplicity is balanced; the base level-2
    order is even with equal exponents; every later level increment of the
    base equals half the base level-2 order.  All conditions passing defers
    the final verdict to the existence search on the base multiplicity.
    """
    if not check_supersolvable(ma, filt):
        raise FiltrationError("the lifted multiplicity is not supersolvable here")
    if any(v < 1 for v in ma.mult):
        raise ArrangementError("the input must carry m+1, so every entry is positive")
    base = ma.with_mult([v - 1 for v in ma.mult])
    lift2 = filt.sub_multiarrangement(ma, 2)
    base2 = filt.sub_multiarrangement(base, 2)
    lift_balanced = is_balanced(lift2)
    base2_order = base2.order()
    base_order_even = base2_order % 2 == 0
    dv = delta(base2, seed=seed)
    rank2_exps = dv.pair
    half = base2_order // 2
    rank2_equal = base_order_even and rank2_exps == (half, half)
    increments = tuple(
        filt.level_order(base, depth) - filt.level_order(base, depth - 1)
        for depth in range(3, filt.rank + 1)
    )
    increments_equal = base_order_even and all(inc == half for inc in increments)
    universal = None
    if lift_balanced and base_order_even and rank2_equal and increments_equal:
        universal = find_universal(base, seed=seed)
    return ObstructionReport(
        ma,
        filt,
        lift_balanced,
        base_order_even,
        rank2_exps,
        rank2_equal,
        increments,
        increments_equal,
        universal,
    )
