"""Central hyperplane arrangements with multiplicities.

A hyperplane is identified with its canonicalized defining LinearForm; an
arrangement is an ordered tuple of pairwise non-proportional forms, and a
multiarrangement attaches a nonnegative integer multiplicity to each.
Multiplicities are plain tuples aligned with the form order.

Also here: codimension-2 flats, localization/deletion/essentialization, a
catalog of named arrangements used throughout the test corpus, and JSON I/O.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ArrangementError
from .polyring import (
    LinearForm,
    Poly,
    Scalar,
    _frac,
    product_of_forms,
    variable_names,
)

Multiplicity = tuple[int, ...]


def ones(count: int) -> Multiplicity:
    return (1,) * count


def indicator(count: int, index: int) -> Multiplicity:
    """The multiplicity that is 1 at one hyperplane and 0 elsewhere."""
    if not 0 <= index < count:
        raise ArrangementError(f"hyperplane index {index} out of range")
    return tuple(1 if i == index else 0 for i in range(count))


def add_mult(a: Multiplicity, b: Multiplicity) -> Multiplicity:
    if len(a) != len(b):
        raise ArrangementError("multiplicity lengths differ")
    return tuple(x + y for x, y in zip(a, b))


def order(m: Multiplicity) -> int:
    return sum(m)


def _rref_fraction(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; tiny matrices only."""
    mat = [row[:] for row in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        lead = mat[r][c]
        mat[r] = [v / lead for v in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [v - f * w for v, w in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    return mat[:r], pivots


@dataclass(frozen=True)
class Arrangement:
    nvars: int
    forms: tuple[LinearForm, ...]

    def __init__(self, nvars: int, forms: Iterable[LinearForm | Sequence[Scalar]]):
        canonical = tuple(f if isinstance(f, LinearForm) else LinearForm(f) for f in forms)
        if not canonical:
            raise ArrangementError("an arrangement needs at least one hyperplane")
        for f in canonical:
            if f.nvars != nvars:
                raise ArrangementError("form dimension does not match the arrangement")
        # proportional forms collide after canonicalization; reject, do not merge
        if len({f.coeffs for f in canonical}) != len(canonical):
            raise ArrangementError("proportional defining forms")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "forms", canonical)

    def __len__(self) -> int:
        return len(self.forms)

    def rank(self) -> int:
        rows = [[c for c in f.coeffs] for f in self.forms]
        _, pivots = _rref_fraction([list(r) for r in rows])
        return len(pivots)

    def with_multiplicity(self, mult: Sequence[int]) -> Multiarrangement:
        return Multiarrangement(self, tuple(mult))

    def simple(self) -> Multiarrangement:
        return self.with_multiplicity(ones(len(self)))


def is_essential(a: Arrangement) -> bool:
    return a.rank() == a.nvars


@dataclass(frozen=True)
class Multiarrangement:
    arrangement: Arrangement
    mult: Multiplicity

    def __init__(self, arrangement: Arrangement, mult: Sequence[int]):
        m = tuple(int(v) for v in mult)
        if len(m) != len(arrangement):
            raise ArrangementError("multiplicity length does not match hyperplane count")
        if any(v < 0 for v in m):
            raise ArrangementError("negative multiplicity")
        object.__setattr__(self, "arrangement", arrangement)
        object.__setattr__(self, "mult", m)

    @property
    def nvars(self) -> int:
        return self.arrangement.nvars

    @property
    def forms(self) -> tuple[LinearForm, ...]:
        return self.arrangement.forms

    def order(self) -> int:
        return order(self.mult)

    def plus_ones(self) -> Multiarrangement:
        return Multiarrangement(self.arrangement, add_mult(self.mult, ones(len(self.mult))))

    def plus_delta(self, index: int) -> Multiarrangement:
        return Multiarrangement(self.arrangement, add_mult(self.mult, indicator(len(self.mult), index)))

    def with_mult(self, mult: Sequence[int]) -> Multiarrangement:
        return Multiarrangement(self.arrangement, tuple(mult))


def defining_polynomial(ma: Multiarrangement) -> Poly:
    return product_of_forms((f, m) for f, m in zip(ma.forms, ma.mult))


@dataclass(frozen=True)
class Flat:
    """A codimension-2 intersection, named by canonical defining equations."""

    basis: tuple[tuple[Fraction, ...], ...]  # RREF rows spanning the forms through it
    indices: tuple[int, ...]

    def codimension(self) -> int:
        return len(self.basis)


def _span_key(forms: Sequence[LinearForm]) -> tuple[tuple[Fraction, ...], ...]:
    rref, _ = _rref_fraction([[c for c in f.coeffs] for f in forms])
    return tuple(tuple(row) for row in rref)


def _in_span(form: LinearForm, basis: tuple[tuple[Fraction, ...], ...]) -> bool:
    rows = [list(r) for r in basis] + [[c for c in form.coeffs]]
    rref, pivots = _rref_fraction(rows)
    return len(pivots) == len(basis)


def rank2_flats(a: Arrangement) -> list[Flat]:
    """All codimension-2 intersection subspaces, with their full index lists."""
    if a.nvars < 2:
        raise ArrangementError("rank2_flats needs ambient dimension at least 2")
    seen: dict[tuple, Flat] = {}
    n = len(a.forms)
    for i in range(n):
        for j in range(i + 1, n):
            key = _span_key([a.forms[i], a.forms[j]])
            if len(key) != 2:
                continue  # proportional forms cannot occur, but stay safe
            if key in seen:
                continue
            members = tuple(k for k, f in enumerate(a.forms) if _in_span(f, key))
            seen[key] = Flat(key, members)
    return sorted(seen.values(), key=lambda fl: fl.indices)


def flat_of(a: Arrangement, indices: Sequence[int]) -> Flat:
    """The rank-2 flat spanned by the given hyperplanes; checks it is one."""
    idx = sorted(set(indices))
    if len(idx) < 2:
        raise ArrangementError("a rank-2 flat needs at least two hyperplanes")
    key = _span_key([a.forms[i] for i in idx])
    if len(key) != 2:
        raise ArrangementError("selected hyperplanes do not span a codimension-2 flat")
    members = tuple(k for k, f in enumerate(a.forms) if _in_span(f, key))
    if not set(idx) <= set(members):
        raise ArrangementError("inconsistent flat membership")
    return Flat(key, members)


def localize(ma: Multiarrangement, x: Flat) -> Multiarrangement:
    for i in x.indices:
        if not 0 <= i < len(ma.forms):
            raise ArrangementError("flat index out of range")
        if not _in_span(ma.forms[i], x.basis):
            raise ArrangementError("not a flat of this arrangement")
    for k, f in enumerate(ma.forms):
        if k not in x.indices and _in_span(f, x.basis):
            raise ArrangementError("flat index list is missing a containing hyperplane")
    sub = Arrangement(ma.nvars, [ma.forms[i] for i in x.indices])
    return sub.with_multiplicity([ma.mult[i] for i in x.indices])


def delete(ma: Multiarrangement, h0: int) -> Multiarrangement:
    if not 0 <= h0 < len(ma.forms):
        raise ArrangementError(f"hyperplane index {h0} out of range")
    if ma.mult[h0] == 0:
        raise ArrangementError("cannot delete a hyperplane of multiplicity 0")
    if ma.mult[h0] == 1:
        if len(ma.forms) == 1:
            raise ArrangementError("deletion would leave an empty arrangement")
        keep = [i for i in range(len(ma.forms)) if i != h0]
        sub = Arrangement(ma.nvars, [ma.forms[i] for i in keep])
        return sub.with_multiplicity([ma.mult[i] for i in keep])
    mult = list(ma.mult)
    mult[h0] -= 1
    return ma.with_mult(mult)


@dataclass(frozen=True)
class CoordinateChange:
    """Essentialization data: new forms live on the span of the old ones.

    `basis` rows are the chosen spanning forms (RREF of the coefficient
    matrix); a form a in the span maps to its coordinate vector over these
    rows, read off at the pivot columns.
    """

    basis: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]

    def map_form(self, form: LinearForm) -> LinearForm:
        if not _in_span(form, self.basis):
            raise ArrangementError("form does not lie in the essential span")
        return LinearForm([form.coeffs[p] for p in self.pivots])


def essentialize(ma: Multiarrangement) -> tuple[Multiarrangement, CoordinateChange]:
    """Rewrite a multiarrangement on the span of its forms.

    The derivation module of the result matches the original in every degree;
    the original just carries rank-many extra free directions (extra exponent
    zeros).
    """
    rref, pivots = _rref_fraction([[c for c in f.coeffs] for f in ma.forms])
    change = CoordinateChange(tuple(tuple(r) for r in rref), tuple(pivots))
    r = len(pivots)
    new_forms = [LinearForm([f.coeffs[p] for p in pivots]) for f in ma.forms]
    sub = Arrangement(r, new_forms)
    return sub.with_multiplicity(ma.mult), change


def irreducible_component_count(a: Arrangement) -> int:
    """Number of irreducible factors, read as dim D(A)_1 for essential A."""
    if not is_essential(a):
        raise ArrangementError("irreducible_component_count needs an essential arrangement")
    from .graded import graded_dimension

    return graded_dimension(a.simple(), 1)


# -- catalog ---------------------------------------------------------------


def _forms(nvars: int, *rows: Sequence[Scalar]) -> Arrangement:
    return Arrangement(nvars, [LinearForm(r) for r in rows])


def catalog(name: str, mult: Sequence[int] | None = None, **params) -> Multiarrangement:
    """Named arrangements; multiplicities default to all ones.

    fan2d takes `h` and `slopes` (len h, distinct, nonzero allowed); maehara4
    takes a rational slope `t` (default 7/3) standing in for a generic slope.
    """
    if name == "A2":
        arr = _forms(2, (1, 0), (0, 1), (1, -1))
    elif name == "B2":
        arr = _forms(2, (1, 0), (0, 1), (1, -1), (1, 1))
    elif name == "A3":
        # braid on 4 coordinates made essential via x = x1-x4, y = x2-x4,
        # z = x3-x4; order matches (x1-x2, x1-x3, x1-x4, x2-x3, x2-x4, x3-x4)
        arr = _forms(3, (1, -1, 0), (1, 0, -1), (1, 0, 0), (0, 1, -1), (0, 1, 0), (0, 0, 1))
    elif name == "B3":
        arr = _forms(
            3,
            (1, 0, 0), (0, 1, 0), (1, 1, 0), (2, 1, 0),
            (0, 0, 1), (0, 1, 1), (1, 1, 1), (2, 1, 1), (2, 2, 1),
        )
    elif name == "deletedA3":
        arr = _forms(3, (0, 1, -1), (0, 1, 0), (1, -1, 0), (1, 0, 0), (1, 0, -1))
    elif name == "X3":
        arr = _forms(3, (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 0, 1))
    elif name == "fan2d":
        h = int(params.get("h", 0))
        slopes = [_frac(s) for s in params.get("slopes", ())]
        if h <= 0 or len(slopes) != h:
            raise ArrangementError("fan2d needs h and exactly h slopes")
        if len(set(slopes)) != h:
            raise ArrangementError("fan2d slopes must be distinct")
        rows: list[tuple[Scalar, ...]] = [(1, 0, 0), (0, 1, 0), (1, -1, 0)]
        rows += [(-s, 0, 1) for s in slopes]
        arr = _forms(3, *rows)
    elif name == "maehara4":
        t = _frac(params.get("t", Fraction(7, 3)))
        if t == 0 or t == 1:
            raise ArrangementError("maehara4 slope must avoid 0 and 1")
        arr = _forms(2, (1, 0), (0, 1), (1, -1), (1, -t))
    else:
        raise ArrangementError(f"unknown catalog name {name!r}")
    if mult is None:
        mult = ones(len(arr))
    return arr.with_multiplicity(mult)


def catalog_filtration(name: str, **params):
    """The standard supersolvable filtration shipped with a catalog entry."""
    from .multirestrict import Filtration

    if name == "deletedA3":
        # {x} in {x, y, x-y} in all, on form order (y-z, y, x-y, x, x-z)
        levels = ((3,), (1, 2, 3), (0, 1, 2, 3, 4))
    elif name == "deletedA3-alt":
        # {x-y} in {x-y, x-z, y-z} in all
        levels = ((2,), (0, 2, 4), (0, 1, 2, 3, 4))
    elif name == "A3":
        levels = ((0,), (0, 1, 3), (0, 1, 2, 3, 4, 5))
    elif name == "B3":
        levels = ((0,), (0, 1, 2, 3), tuple(range(9)))
    elif name == "fan2d":
        h = int(params.get("h", 0))
        if h <= 0:
            raise ArrangementError("fan2d filtration needs h")
        levels = ((0,), (0, 1, 2), tuple(range(3 + h)))
    else:
        raise ArrangementError(f"no filtration shipped for catalog name {name!r}")
    ma = catalog(name, **params) if name != "deletedA3-alt" else catalog("deletedA3")
    return Filtration(ma.arrangement, levels)


# -- JSON ------------------------------------------------------------------


def _scalar_to_json(c: Fraction):
    return int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _scalar_from_json(v) -> Fraction:
    if isinstance(v, bool):
        raise ArrangementError("boolean is not a coefficient")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise ArrangementError(f"bad rational value {v!r}")


def multiarrangement_to_dict(ma: Multiarrangement) -> dict:
    return {
        "variables": list(variable_names(ma.nvars)),
        "hyperplanes": [
            {"form": [_scalar_to_json(c) for c in f.coeffs], "multiplicity": m}
            for f, m in zip(ma.forms, ma.mult)
        ],
    }


def multiarrangement_from_dict(data: dict) -> Multiarrangement:
    try:
        variables = data["variables"]
        hyperplanes = data["hyperplanes"]
    except (KeyError, TypeError) as exc:
        raise ArrangementError("expected keys 'variables' and 'hyperplanes'") from exc
    nvars = len(variables)
    forms = []
    mult = []
    for h in hyperplanes:
        coeffs = [_scalar_from_json(v) for v in h["form"]]
        if len(coeffs) != nvars:
            raise ArrangementError("form length does not match variable count")
        forms.append(LinearForm(coeffs))
        m = h.get("multiplicity", 1)
        if not isinstance(m, int) or m < 0:
            raise ArrangementError("multiplicity must be a nonnegative integer")
        mult.append(m)
    return Arrangement(nvars, forms).with_multiplicity(mult)


def load_multiarrangement(path: str) -> Multiarrangement:
    with open(path, "r", encoding="utf-8") as fh:
        return multiarrangement_from_dict(json.load(fh))


def dump_multiarrangement(ma: Multiarrangement, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(multiarrangement_to_dict(ma), fh, indent=2)
        fh.write("\n")
