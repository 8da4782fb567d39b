"""Grid sweeps over multiplicity space with deterministic parallel reports.

A sweep fixes a catalog arrangement, assigns every hyperplane a finite
multiplicity range, and evaluates freeness / exponents / universality on each
grid point.  Rows are independent, so they fan out over a process pool, but
the emitted table is always in grid order with per-row seeds derived from the
base seed and the multiplicity alone — identical input and seed give
byte-identical output at any parallelism width.

The optional symmetry dedupe keeps one representative per orbit of the
arrangement's linear automorphisms acting on hyperplane indices; isomorphic
multiarrangements share every verdict computed here, so dropping
non-canonical grid points loses nothing.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from multiprocessing import get_context

from .arrangement import Arrangement, Multiarrangement, _rref_fraction, catalog
from .errors import ArrangementError
from .logder import DEFAULT_SEED, find_free_basis, find_universal

__all__ = [
    "PREDICATES",
    "SweepRow",
    "parse_ranges",
    "index_symmetries",
    "orbit_canonical",
    "evaluate_point",
    "run_sweep",
    "format_tsv",
]

PREDICATES = ("free", "exponents", "universal")


def parse_ranges(spec: str) -> list[tuple[str, range]]:
    """Parse "a=1..4,b=2,..." into named inclusive integer ranges."""
    out: list[tuple[str, range]] = []
    for piece in spec.split(","):
        name, _, value = piece.partition("=")
        name = name.strip()
        if not name or not value:
            raise ArrangementError(f"bad range entry {piece!r}; expected name=lo..hi")
        lo, sep, hi = value.partition("..")
        try:
            low = int(lo)
            high = int(hi) if sep else low
        except ValueError as exc:
            raise ArrangementError(f"bad range bounds in {piece!r}") from exc
        if low < 0 or high < low:
            raise ArrangementError(f"empty or negative range in {piece!r}")
        out.append((name, range(low, high + 1)))
    return out


# -- hyperplane symmetries -------------------------------------------------


def _rank(forms) -> int:
    _, pivots = _rref_fraction([[c for c in f.coeffs] for f in forms])
    return len(pivots)


def _express(form, basis) -> tuple[Fraction, ...] | None:
    """Coefficients lam with form = sum lam_i basis_i, None if not in span."""
    n = len(basis)
    cols = len(form.coeffs)
    aug = [[basis[i].coeffs[c] for i in range(n)] + [form.coeffs[c]] for c in range(cols)]
    rref, pivots = _rref_fraction(aug)
    lam = [Fraction(0)] * n
    for row, p in zip(rref, pivots):
        if p == n:
            return None  # pivot in the right-hand side: outside the span
        lam[p] = row[n]
    return tuple(lam)


def _frame(a: Arrangement) -> tuple[int, ...] | None:
    """l+1 hyperplanes with every l of them independent, or None."""
    n, l = len(a.forms), a.nvars
    for combo in combinations(range(n), l + 1):
        if all(_rank([a.forms[i] for i in sub]) == l for sub in combinations(combo, l)):
            return combo
    return None


def index_symmetries(a: Arrangement) -> tuple[tuple[int, ...], ...]:
    """Hyperplane permutations induced by invertible linear substitutions.

    A projective frame (l+1 forms, every l independent) pins any linear map
    down to one scalar: once the frame's image forms are chosen, the relative
    scales are forced by the coordinates of the extra form.  Candidates are
    therefore enumerated as injective frame images, the map is assembled from
    the forced scales, and a permutation is kept only when every single form
    lands exactly on a form.  The search is complete whenever a frame exists;
    without one only the identity is reported, which keeps dedupe sound, just
    coarser.  Arrangements of l independent forms take the shortcut: every
    permutation is realizable diagonally.
    """
    n, l = len(a.forms), a.nvars
    identity = tuple(range(n))
    if _rank(a.forms) < l:
        return (identity,)
    if n == l:
        return tuple(sorted(permutations(range(n))))
    frame = _frame(a)
    if frame is None:
        return (identity,)
    base = [a.forms[i] for i in frame[:l]]
    lam = _express(a.forms[frame[l]], base)
    if lam is None or not all(lam):
        raise ArrangementError("frame coordinates degenerate")  # unreachable by construction
    canon = {f.coeffs: i for i, f in enumerate(a.forms)}
    coords = [_express(f, base) for f in a.forms]
    found = {identity}
    for targets in permutations(range(n), l + 1):
        tbase = [a.forms[i] for i in targets[:l]]
        if _rank(tbase) != l:
            continue
        mu = _express(a.forms[targets[l]], tbase)
        if mu is None or not all(mu):
            continue
        scale = tuple(m / v for m, v in zip(mu, lam))
        perm: list[int] | None = []
        for vec in coords:
            image = [Fraction(0)] * a.nvars
            for i in range(l):
                if vec[i]:
                    sv = vec[i] * scale[i]
                    row = tbase[i].coeffs
                    for c in range(a.nvars):
                        image[c] += sv * row[c]
            lead = next((v for v in image if v), None)
            hit = None if lead is None else canon.get(tuple(v / lead for v in image))
            if hit is None:
                perm = None
                break
            perm.append(hit)
        if perm is not None and len(set(perm)) == n:
            found.add(tuple(perm))
    return tuple(sorted(found))


def orbit_canonical(mult: tuple[int, ...], group) -> tuple[int, ...]:
    """Lexicographically smallest multiplicity in the symmetry orbit."""
    return min(tuple(mult[p] for p in perm) for perm in group)


# -- row evaluation --------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    mult: tuple[int, ...]
    seed: int
    free: bool | None
    exponents: tuple[int, ...] | None
    universal_degree: int | None


def row_seed(base_seed: int, mult: tuple[int, ...]) -> int:
    tag = f"{base_seed}|{','.join(str(v) for v in mult)}"
    return zlib.crc32(tag.encode("ascii")) & 0x7FFFFFFF


def evaluate_point(ma: Multiarrangement, predicates, seed: int) -> SweepRow:
    free = exps = None
    if "free" in predicates or "exponents" in predicates:
        cert = find_free_basis(ma, seed=seed)
        free = cert.free
        exps = cert.exponents
    degree = None
    if "universal" in predicates:
        theta = find_universal(ma, seed=seed)
        if theta is not None:
            degree = theta.homogeneous_degree()
    return SweepRow(tuple(ma.mult), seed, free, exps, degree)


def _eval_task(args) -> SweepRow:
    name, params, mult, predicates, seed = args
    ma = catalog(name, mult, **dict(params))
    return evaluate_point(ma, predicates, seed)


def run_sweep(
    name: str,
    ranges: list[tuple[str, range]],
    predicates=PREDICATES,
    seed: int = DEFAULT_SEED,
    jobs: int = 1,
    max_total: int | None = None,
    dedupe: bool = False,
    params: dict | None = None,
) -> list[SweepRow]:
    """Evaluate every grid point; rows come back in grid order."""
    params = params or {}
    for p in predicates:
        if p not in PREDICATES:
            raise ArrangementError(f"unknown predicate {p!r}")
    probe = catalog(name, **params)
    if len(ranges) != len(probe.forms):
        raise ArrangementError(
            f"{len(probe.forms)} hyperplanes need {len(probe.forms)} ranges, got {len(ranges)}"
        )
    group = index_symmetries(probe.arrangement) if dedupe else None
    grid = []
    for mult in product(*(r for _, r in ranges)):
        if max_total is not None and sum(mult) > max_total:
            continue
        if group is not None and orbit_canonical(mult, group) != mult:
            continue
        grid.append(mult)
    frozen_params = tuple(sorted(params.items()))
    tasks = [(name, frozen_params, mult, tuple(predicates), row_seed(seed, mult))
             for mult in grid]
    if jobs <= 1 or len(tasks) <= 1:
        return [_eval_task(t) for t in tasks]
    chunk = max(1, len(tasks) // (jobs * 8))
    with get_context("fork").Pool(jobs) as pool:
        return list(pool.imap(_eval_task, tasks, chunksize=chunk))


def format_tsv(names: list[str], predicates, rows: list[SweepRow]) -> str:
    """One row per grid point, grid order, stable header."""
    cols = list(names) + ["total"]
    if "free" in predicates:
        cols.append("free")
    if "exponents" in predicates:
        cols.append("exponents")
    if "universal" in predicates:
        cols.append("universal_degree")
    cols.append("seed")
    lines = ["\t".join(cols)]
    for row in rows:
        cells = [str(v) for v in row.mult] + [str(sum(row.mult))]
        if "free" in predicates:
            cells.append("1" if row.free else "0")
        if "exponents" in predicates:
            cells.append(",".join(str(d) for d in row.exponents) if row.exponents else "-")
        if "universal" in predicates:
            cells.append(str(row.universal_degree) if row.universal_degree is not None else "-")
        cells.append(str(row.seed))
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"
