"""Constraint construction, exhaustive search, and symmetry classification of designs."""
from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .designs import DEFAULT_SPEC, Design, FactorSpec
from .polyalg import MultilinearPoly, is_indicator, monomial_sign, point_coords, point_index, popcount

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MarginalConstraint:
    """Fix every cell of a marginal table; ``targets`` is indexed like MarginalTable.counts."""

    T: tuple[int, ...]
    targets: tuple[int, ...]
    star: bool = False
    kind: str = "uniformity"

    def __post_init__(self) -> None:
        if len(self.targets) != 1 << len(self.T):
            raise ValueError(f"{len(self.targets)} targets for |T|={len(self.T)}")
        if self.kind not in ("uniformity", "cell-equality"):
            raise ValueError(f"unknown constraint kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"T": list(self.T), "star": self.star, "kind": self.kind, "targets": list(self.targets)}


@dataclass(frozen=True)
class ConstraintSet:
    spec: FactorSpec
    runs: int
    constraints: tuple[MarginalConstraint, ...]
    # Marginals required to be non-uniform (checked on complete designs).
    nonuniform: tuple[tuple[tuple[int, ...], bool], ...] = ()

    def __post_init__(self) -> None:
        for c in self.constraints:
            if sum(c.targets) != self.runs:
                raise ValueError(f"constraint on {c.T} sums to {sum(c.targets)}, not {self.runs}")

    def factor_masks(self, T: Sequence[int], star: bool) -> list[int]:
        """Generator-space variable masks (bit j = variable j+1) for the factors of T."""
        if star:
            masks = self.spec.star_masks()
            return [masks[t - 1] for t in T]
        return [1 << (t - 1) for t in T]

    def with_uniform(self, T: Sequence[int], star: bool = False) -> ConstraintSet:
        T = tuple(sorted(T))
        cells = 1 << len(T)
        if self.runs % cells:
            raise ValueError(f"{self.runs} runs cannot fill {cells} cells evenly")
        extra = MarginalConstraint(T, (self.runs // cells,) * cells, star)
        return ConstraintSet(self.spec, self.runs, self.constraints + (extra,), self.nonuniform)

    def with_nonuniform(self, T: Sequence[int], star: bool = False) -> ConstraintSet:
        key = (tuple(sorted(T)), star)
        return ConstraintSet(self.spec, self.runs, self.constraints, self.nonuniform + (key,))

    def without(self, T: Sequence[int], star: bool = False) -> ConstraintSet:
        T = tuple(sorted(T))
        kept = tuple(c for c in self.constraints if not (c.T == T and c.star == star))
        if len(kept) == len(self.constraints):
            raise KeyError(f"no constraint on {T} (star={star})")
        return ConstraintSet(self.spec, self.runs, kept, self.nonuniform)

    def matrix(self) -> tuple[list[list[int]], list[int]]:
        """Rows of C and entries of h with C u = h; the last row is the run count."""
        n = self.spec.base_count
        rows, rhs = [], []
        for c in self.constraints:
            masks = self.factor_masks(c.T, c.star)
            cells = [_cell_of(i, masks, n) for i in range(1 << n)]
            for cell, target in enumerate(c.targets):
                rows.append([int(x == cell) for x in cells])
                rhs.append(target)
        rows.append([1] * (1 << n))
        rhs.append(self.runs)
        return rows, rhs

    def is_satisfied(self, d: Design) -> bool:
        from .designs import is_uniform, marginal

        for c in self.constraints:
            if marginal(d, c.T, c.star).counts != c.targets:
                return False
        if d.runs != self.runs:
            return False
        return all(not is_uniform(marginal(d, T, star)) for T, star in self.nonuniform)

    def to_dict(self) -> dict:
        return {
            "runs": self.runs,
            "spec": {"p": self.spec.p, "q": self.spec.q, "s": self.spec.s,
                     "relations": [list(r) for r in self.spec.relations]},
            "uniform": [c.to_dict() for c in self.constraints],
            "nonuniform": [{"T": list(T), "star": star} for T, star in self.nonuniform],
        }


def _cell_of(index: int, masks: Sequence[int], n: int) -> int:
    cell = 0
    for m in masks:
        cell = cell << 1 | (monomial_sign(m, index, n) == 1)
    return cell


def build_constraints(spec: FactorSpec = DEFAULT_SPEC, runs: int = 24, strength: int = 3) -> ConstraintSet:
    """Uniformity of every ``strength``-factor marginal of u, plus the run count."""
    cells = 1 << strength
    if runs <= 0 or runs % cells:
        raise ValueError(f"runs={runs} is not a positive multiple of {cells}")
    if strength > spec.base_count:
        raise ValueError(f"strength {strength} exceeds the {spec.base_count} generator-space factors")
    target = runs // cells
    constraints = tuple(
        MarginalConstraint(T, (target,) * cells)
        for T in itertools.combinations(range(1, spec.base_count + 1), strength)
    )
    return ConstraintSet(spec, runs, constraints)


# -- coefficient-space facts -------------------------------------------------


@dataclass
class CoefficientFacts:
    n: int
    pinned: dict[int, Fraction]
    derived_zero: list[int]
    free: list[int]

    def summary(self) -> dict[str, int]:
        return {"pinned": len(self.pinned), "derived": len(self.derived_zero), "free": len(self.free)}


def coefficient_constraints(runs: int = 24, spec: FactorSpec = DEFAULT_SPEC, strength: int = 3) -> CoefficientFacts:
    """Translate strength-``strength`` uniformity into indicator-coefficient facts.

    Uniform t-marginals pin theta_0 = runs / 2^n and theta_c = 0 for weights
    1..t.  Further zeros are derived from the idempotency equations
    theta_c = sum_c' theta_c' theta_{c xor c'}: when every cross term has a factor
    already known to vanish, the equation reads theta_c (1 - 2 theta_0) = 0.
    """
    if spec != DEFAULT_SPEC or runs != 24:
        raise ValueError("coefficient facts are provided for the default 24-run instance only")
    n = spec.base_count
    size = 1 << n
    theta0 = Fraction(runs, size)
    pinned = {0: theta0}
    for c in range(1, size):
        if popcount(c) <= strength:
            pinned[c] = Fraction(0)
    zero = {c for c, v in pinned.items() if v == 0}
    derived: list[int] = []
    if 1 - 2 * theta0 != 0:
        changed = True
        while changed:
            changed = False
            for c in range(1, size):
                if c in zero:
                    continue
                cross_vanishes = all(
                    c2 in zero or (c2 ^ c) in zero for c2 in range(1, size) if c2 != c
                )
                if cross_vanishes:
                    zero.add(c)
                    derived.append(c)
                    changed = True
    derived.sort(key=lambda m: (popcount(m), m))
    free = sorted((c for c in range(size) if c not in pinned and c not in zero), key=lambda m: (popcount(m), m))
    return CoefficientFacts(n, pinned, derived, free)


# -- design-space search -----------------------------------------------------


class _Search:
    """Backtracking over generator cells: each picks `per_cell` noise points."""

    def __init__(self, cs: ConstraintSet):
        spec = cs.spec
        self.cs = cs
        n = spec.base_count
        self.n_x = 1 << spec.s
        self.n_y = 1 << spec.q
        if cs.runs % self.n_x:
            raise ValueError(f"{cs.runs} runs do not split evenly over {self.n_x} control cells")
        if not any(not c.star and set(range(1, spec.s + 1)) <= set(c.T) and len(set(c.targets)) == 1
                   for c in cs.constraints):
            raise ValueError("the search needs a uniformity constraint covering all generator controls")
        self.per_cell = cs.runs // self.n_x
        self.candidates = list(itertools.combinations(range(self.n_y), self.per_cell))
        self.targets = [c.targets for c in cs.constraints]
        cellmaps = []
        for c in cs.constraints:
            masks = cs.factor_masks(c.T, c.star)
            cellmaps.append([_cell_of(i, masks, n) for i in range(1 << n)])
        self.cellmaps = cellmaps
        # increments[xc][cand] -> list of (constraint, cell)
        self.increments = [
            [
                [(k, cm[xc * self.n_y + y]) for y in cand for k, cm in enumerate(cellmaps)]
                for cand in self.candidates
            ]
            for xc in range(self.n_x)
        ]
        # Most points x-cell xc can still add to (constraint, cell); suffix sums over xc.
        ncons = len(cellmaps)
        suffix = [[[0] * len(t) for t in self.targets] for _ in range(self.n_x + 1)]
        for xc in range(self.n_x - 1, -1, -1):
            for k, cm in enumerate(cellmaps):
                hits = [0] * len(self.targets[k])
                for y in range(self.n_y):
                    hits[cm[xc * self.n_y + y]] += 1
                for cell in range(len(hits)):
                    suffix[xc][k][cell] = suffix[xc + 1][k][cell] + min(self.per_cell, hits[cell])
        self.suffix = suffix
        self.ncons = ncons

    def _feasible(self, counts: list[list[int]], next_xc: int) -> bool:
        rest = self.suffix[next_xc]
        for k in range(self.ncons):
            row, tgt, cap = counts[k], self.targets[k], rest[k]
            for cell in range(len(row)):
                v = row[cell]
                if v > tgt[cell] or v + cap[cell] < tgt[cell]:
                    return False
        return True

    def run(self, first_choices: Iterable[int] | None = None) -> list[int]:
        counts = [[0] * len(t) for t in self.targets]
        chosen: list[int] = []
        words: list[int] = []

        def place(xc: int, ci: int, sign: int) -> None:
            for k, cell in self.increments[xc][ci]:
                counts[k][cell] += sign

        def rec(xc: int) -> None:
            if xc == self.n_x:
                word = 0
                for cell, ci in enumerate(chosen):
                    for y in self.candidates[ci]:
                        word |= 1 << (cell * self.n_y + y)
                words.append(word)
                return
            for ci in range(len(self.candidates)):
                place(xc, ci, 1)
                if self._feasible(counts, xc + 1):
                    chosen.append(ci)
                    rec(xc + 1)
                    chosen.pop()
                place(xc, ci, -1)

        roots = range(len(self.candidates)) if first_choices is None else first_choices
        for ci in roots:
            place(0, ci, 1)
            if self._feasible(counts, 1):
                chosen.append(ci)
                rec(1)
                chosen.pop()
            place(0, ci, -1)
        return words


def _search_chunk(args: tuple[ConstraintSet, list[int]]) -> list[int]:
    cs, roots = args
    return _Search(cs).run(roots)


def enumerate_designs(cs: ConstraintSet, workers: int = 1) -> list[Design]:
    """All 0/1 responses satisfying ``cs``, sorted by occupancy word."""
    search = _Search(cs)
    roots = list(range(len(search.candidates)))
    if workers <= 1:
        words = search.run(roots)
    else:
        chunks = [roots[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            words = [w for part in pool.map(_search_chunk, [(cs, ch) for ch in chunks]) for w in part]
    words.sort()
    designs = [Design.from_word(cs.spec, w) for w in words]
    if cs.nonuniform:
        designs = [d for d in designs if cs.is_satisfied(d)]
    log.info("enumerated %d designs for %d runs", len(designs), cs.runs)
    return designs


# -- coefficient-space oracle ------------------------------------------------


def enumerate_by_coefficients(runs: int = 24, max_numerator: int = 8) -> list[MultilinearPoly]:
    """Indicator polynomials found by brute force over the free coefficients.

    Free coefficients range over k/64 with k even and |k| <= max_numerator.
    Assignments are pruned with two necessary conditions of idempotency (the
    constant-term equation sum theta_c^2 = theta_0, and each point value staying
    reachable in {0, 1}) and accepted only if ``is_indicator`` holds.
    """
    facts = coefficient_constraints(runs)
    n = facts.n
    size = 1 << n
    theta0 = facts.pinned[0]
    free = facts.free
    # Work in units of 1/size.
    budget = (theta0 - theta0 * theta0) * size * size
    if budget.denominator != 1:
        raise ValueError("non-integral square budget")
    budget = int(budget)
    base = int(theta0 * size)
    values = list(range(-max_numerator, max_numerator + 1, 2))
    signs = [[monomial_sign(c, i, n) for c in free] for i in range(size)]
    partial = [base] * size
    assign = [0] * len(free)
    found: list[MultilinearPoly] = []

    def rec(j: int, used: int) -> None:
        if j == len(free):
            if used != budget:
                return
            if any(v not in (0, size) for v in partial):
                return
            coeffs = dict(facts.pinned)
            coeffs.update({c: Fraction(k, size) for c, k in zip(free, assign)})
            poly = MultilinearPoly(n, coeffs)
            if is_indicator(poly):
                found.append(poly)
            return
        rest = len(free) - j - 1
        for v in values:
            used2 = used + v * v
            if used2 > budget or budget - used2 > rest * max_numerator**2:
                continue
            reach = math.isqrt(rest * (budget - used2))
            ok = True
            for i in range(size):
                val = partial[i] + v * signs[i][j]
                if not (abs(val) <= reach or abs(size - val) <= reach):
                    ok = False
                    break
            if not ok:
                continue
            assign[j] = v
            for i in range(size):
                partial[i] += v * signs[i][j]
            rec(j + 1, used2)
            for i in range(size):
                partial[i] -= v * signs[i][j]
        assign[j] = 0

    rec(0, 0)
    return found


# -- symmetry group ----------------------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    """Sign changes on every generator-space factor and within-block permutations.

    On a point c: position ``x_perm[i]`` receives ``signs[i] * c[i]`` for the
    controls; the noise block is handled likewise with ``y_perm``.
    """

    signs: tuple[int, ...]
    x_perm: tuple[int, ...]
    y_perm: tuple[int, ...]

    @classmethod
    def identity(cls, spec: FactorSpec = DEFAULT_SPEC) -> GroupElement:
        return cls((1,) * spec.base_count, tuple(range(spec.s)), tuple(range(spec.q)))

    @classmethod
    def flip_all(cls, spec: FactorSpec = DEFAULT_SPEC) -> GroupElement:
        return cls((-1,) * spec.base_count, tuple(range(spec.s)), tuple(range(spec.q)))

    def apply_point(self, point: Sequence[int]) -> tuple[int, ...]:
        s = len(self.x_perm)
        out = [0] * len(point)
        for i, target in enumerate(self.x_perm):
            out[target] = self.signs[i] * point[i]
        for j, target in enumerate(self.y_perm):
            out[s + target] = self.signs[s + j] * point[s + j]
        return tuple(out)

    def point_permutation(self, n: int) -> list[int]:
        return [point_index(self.apply_point(point_coords(i, n))) for i in range(1 << n)]


def group_elements(spec: FactorSpec = DEFAULT_SPEC) -> list[GroupElement]:
    return [
        GroupElement(signs, xp, yp)
        for signs in itertools.product((1, -1), repeat=spec.base_count)
        for xp in itertools.permutations(range(spec.s))
        for yp in itertools.permutations(range(spec.q))
    ]


@lru_cache(maxsize=None)
def _permutation_table(spec: FactorSpec) -> np.ndarray:
    n = spec.base_count
    return np.array([g.point_permutation(n) for g in group_elements(spec)], dtype=np.uint64)


def apply_group(g: GroupElement, d: Design) -> Design:
    perm = g.point_permutation(d.spec.base_count)
    u = [0] * len(d.u)
    for i, v in enumerate(d.u):
        if v:
            u[perm[i]] = 1
    return Design(d.spec, tuple(u))


def orbit_words(d: Design) -> np.ndarray:
    """Occupancy words of the images of ``d`` under every group element (with repeats)."""
    if d.spec.base_count > 64:
        raise ValueError("occupancy words are limited to 64 points")
    table = _permutation_table(d.spec)
    idx = np.array(d.indices(), dtype=np.uint64)
    if idx.size == 0:
        return np.zeros(len(table), dtype=np.uint64)
    bits = np.left_shift(np.uint64(1), table[:, idx.astype(np.intp)])
    return np.bitwise_or.reduce(bits, axis=1)


def canonical_word(d: Design) -> int:
    """Smallest occupancy word over the orbit of ``d``."""
    return int(orbit_words(d).min())


def orbit_closure(d: Design) -> list[Design]:
    words = sorted(set(int(w) for w in orbit_words(d)))
    return [Design.from_word(d.spec, w) for w in words]


def stabilizer_order(d: Design) -> int:
    return int(np.count_nonzero(orbit_words(d) == np.uint64(d.word)))


@dataclass
class OrbitPartition:
    orbits: list[list[int]]
    canonical: list[int]
    stabilizers: list[int] = field(default_factory=list)
    group_order: int = 0

    def to_dict(self) -> dict:
        return {
            "orbits": self.orbits,
            "canonical": [f"{w:016x}" for w in self.canonical],
            "stabilizer_orders": self.stabilizers,
            "group_order": self.group_order,
        }


def classify_orbits(designs: Sequence[Design]) -> OrbitPartition:
    """Group input indices by canonical form; orbits listed by first appearance."""
    by_form: dict[int, list[int]] = {}
    for i, d in enumerate(designs):
        by_form.setdefault(canonical_word(d), []).append(i)
    order = sorted(by_form, key=lambda w: by_form[w][0])
    spec = designs[0].spec if designs else DEFAULT_SPEC
    return OrbitPartition(
        orbits=[by_form[w] for w in order],
        canonical=order,
        stabilizers=[stabilizer_order(designs[by_form[w][0]]) for w in order],
        group_order=len(_permutation_table(spec)),
    )


def canonical_reps(designs: Sequence[Design], anchor: Sequence[Sequence[int]]) -> list[Design]:
    """Designs containing every anchor point, sorted by occupancy word."""
    chosen = [d for d in designs if all(d.contains(pt) for pt in anchor)]
    return sorted(chosen, key=lambda d: d.word)
