"""Two-level cross-array designs, defining relations and marginal tables.

Factor indices follow the usual contingency-table convention and are 1-based.
In generator space (``star=False``) factors 1..s are the free controls and
s+1..s+q the noise factors.  In the extended space (``star=True``) factors
1..p are all controls and p+1..p+q the noise factors.  Level -1 is cell 1 and
level +1 is cell 2.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .polyalg import DimensionError, DomainError, point_coords, point_index


@dataclass(frozen=True)
class FactorSpec:
    """p controls of which s are free, q noise factors, and the defining relations.

    ``relations[j]`` lists the (1-based) generator indices whose product gives
    control ``s + j + 1``.
    """

    p: int = 6
    q: int = 3
    s: int = 3
    relations: tuple[tuple[int, ...], ...] = ((1, 2), (1, 3), (2, 3))

    def __post_init__(self) -> None:
        if not 0 < self.s <= self.p:
            raise ValueError(f"need 0 < s <= p, got s={self.s}, p={self.p}")
        if self.q < 0:
            raise ValueError("q must be nonnegative")
        if len(self.relations) != self.p - self.s:
            raise ValueError(f"expected {self.p - self.s} defining relations, got {len(self.relations)}")
        for rel in self.relations:
            if not rel or any(not 1 <= k <= self.s for k in rel):
                raise ValueError(f"defining relation {rel} must be a nonempty subset of 1..{self.s}")
        object.__setattr__(self, "relations", tuple(tuple(sorted(set(r))) for r in self.relations))

    @property
    def base_count(self) -> int:
        return self.s + self.q

    @property
    def star_count(self) -> int:
        return self.p + self.q

    def names(self, star: bool = False) -> list[str]:
        controls = [f"x{i}" for i in range(1, (self.p if star else self.s) + 1)]
        return controls + [f"y{j}" for j in range(1, self.q + 1)]

    def star_masks(self) -> list[int]:
        """Each extended-space factor as a product of generator-space variables (bit j = factor j+1)."""
        masks = [1 << i for i in range(self.s)]
        for rel in self.relations:
            masks.append(sum(1 << (k - 1) for k in rel))
        masks += [1 << (self.s + j) for j in range(self.q)]
        return masks

    def extend_point(self, point: Sequence[int]) -> tuple[int, ...]:
        if len(point) != self.base_count:
            raise DimensionError(f"point has {len(point)} coordinates, expected {self.base_count}")
        xs, ys = tuple(point[: self.s]), tuple(point[self.s :])
        derived = tuple(math.prod(xs[k - 1] for k in rel) for rel in self.relations)
        return xs + derived + ys

    def satisfies_relations(self, controls: Sequence[int]) -> bool:
        if len(controls) != self.p:
            raise DimensionError(f"control point has {len(controls)} coordinates, expected {self.p}")
        return tuple(controls) == self.extend_point(tuple(controls[: self.s]) + (1,) * self.q)[: self.p]


DEFAULT_SPEC = FactorSpec()


@dataclass(frozen=True)
class Design:
    """A fraction of the generator-space full factorial, given by its 0/1 response."""

    spec: FactorSpec
    u: tuple[int, ...]

    def __post_init__(self) -> None:
        u = tuple(int(v) for v in self.u)
        if len(u) != 1 << self.spec.base_count:
            raise DimensionError(f"response has length {len(u)}, expected {1 << self.spec.base_count}")
        if any(v not in (0, 1) for v in u):
            raise DomainError("design responses must be 0 or 1")
        object.__setattr__(self, "u", u)

    @classmethod
    def from_points(cls, spec: FactorSpec, points: Iterable[Sequence[int]]) -> Design:
        u = [0] * (1 << spec.base_count)
        for pt in points:
            if len(pt) != spec.base_count:
                raise DimensionError(f"point {tuple(pt)} should have {spec.base_count} coordinates")
            idx = point_index(pt)
            if u[idx]:
                raise DomainError(f"point {tuple(pt)} listed twice")
            u[idx] = 1
        return cls(spec, tuple(u))

    @classmethod
    def from_word(cls, spec: FactorSpec, word: int) -> Design:
        size = 1 << spec.base_count
        return cls(spec, tuple(word >> i & 1 for i in range(size)))

    @classmethod
    def full(cls, spec: FactorSpec = DEFAULT_SPEC) -> Design:
        return cls(spec, (1,) * (1 << spec.base_count))

    @classmethod
    def empty(cls, spec: FactorSpec = DEFAULT_SPEC) -> Design:
        return cls(spec, (0,) * (1 << spec.base_count))

    @property
    def runs(self) -> int:
        return sum(self.u)

    @cached_property
    def word(self) -> int:
        """Occupancy word: bit i is u_i."""
        return sum(1 << i for i, v in enumerate(self.u) if v)

    def indices(self) -> list[int]:
        return [i for i, v in enumerate(self.u) if v]

    def points(self, star: bool = False) -> list[tuple[int, ...]]:
        base = [point_coords(i, self.spec.base_count) for i in self.indices()]
        if star:
            return [self.spec.extend_point(pt) for pt in base]
        return base

    def contains(self, point: Sequence[int]) -> bool:
        if len(point) != self.spec.base_count:
            raise DimensionError(f"point should have {self.spec.base_count} coordinates")
        return bool(self.u[point_index(point)])


def extend_response(d: Design) -> tuple[int, ...]:
    """u*: the design as a response on the full factorial of all p + q factors."""
    out = [0] * (1 << d.spec.star_count)
    for pt in d.points(star=True):
        out[point_index(pt)] = 1
    return tuple(out)


@dataclass(frozen=True)
class MarginalTable:
    T: tuple[int, ...]
    counts: tuple[int, ...]
    star: bool = False

    def __post_init__(self) -> None:
        if len(self.counts) != 1 << len(self.T):
            raise DimensionError(f"{len(self.counts)} cells for |T|={len(self.T)}")
        if any(c < 0 for c in self.counts):
            raise DomainError("marginal counts must be nonnegative")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def cell(self, levels: Sequence[int]) -> int:
        """Count at cell ``levels`` given in {1, 2} per factor of T."""
        idx = 0
        for lv in levels:
            if lv not in (1, 2):
                raise DomainError(f"cell index {lv} must be 1 or 2")
            idx = idx << 1 | (lv - 1)
        return self.counts[idx]

    @property
    def uniform(self) -> bool:
        return is_uniform(self)

    def to_dict(self) -> dict:
        return {"T": list(self.T), "star": self.star, "counts": list(self.counts), "uniform": self.uniform}


def _check_subset(T: Sequence[int], nfactors: int) -> tuple[int, ...]:
    T = tuple(T)
    if len(set(T)) != len(T):
        raise ValueError(f"repeated factor in {T}")
    for t in T:
        if not 1 <= t <= nfactors:
            raise IndexError(f"factor index {t} outside 1..{nfactors}")
    return T


def marginal(d: Design, T: Sequence[int], star: bool = False) -> MarginalTable:
    """T-marginal table of u (or of u* when ``star``)."""
    nfactors = d.spec.star_count if star else d.spec.base_count
    T = _check_subset(T, nfactors)
    counts = [0] * (1 << len(T))
    for pt in d.points(star=star):
        idx = 0
        for t in T:
            idx = idx << 1 | (pt[t - 1] == 1)
        counts[idx] += 1
    return MarginalTable(T, tuple(counts), star)


def is_uniform(t: MarginalTable) -> bool:
    return len(set(t.counts)) <= 1


def marginal_profile(d: Design, size: int, star: bool = False) -> dict[tuple[int, ...], bool]:
    """Uniformity of every ``size``-subset marginal."""
    nfactors = d.spec.star_count if star else d.spec.base_count
    return {
        T: is_uniform(marginal(d, T, star))
        for T in itertools.combinations(range(1, nfactors + 1), size)
    }


def strength(d: Design, star: bool = False) -> int:
    """Largest t with every t-factor marginal uniform."""
    if d.runs == 0:
        raise DomainError("strength of an empty design is undefined")
    nfactors = d.spec.star_count if star else d.spec.base_count
    t = 0
    for size in range(1, nfactors + 1):
        if not all(marginal_profile(d, size, star).values()):
            break
        t = size
    return t


def direct_product(
    inner: Iterable[Sequence[int]], outer: Iterable[Sequence[int]], spec: FactorSpec = DEFAULT_SPEC
) -> Design:
    """Cross array F_x x F_y from control points (all p coordinates) and noise points."""
    inner = [tuple(pt) for pt in inner]
    outer = [tuple(pt) for pt in outer]
    for pt in inner:
        if any(c not in (-1, 1) for c in pt):
            raise DomainError(f"inner point {pt} has a level other than -1/+1")
        if not spec.satisfies_relations(pt):
            raise DomainError(f"inner point {pt} violates the defining relations")
    for pt in outer:
        if len(pt) != spec.q:
            raise DimensionError(f"outer point {pt} should have {spec.q} coordinates")
    return Design.from_points(spec, (x[: spec.s] + y for x in inner for y in outer))


def _required_nonuniform() -> frozenset[tuple[int, ...]]:
    noise = (7, 8, 9)
    req = {(1, 2, 4), (1, 3, 5), (2, 3, 6), (4, 5, 6)}
    for ell in noise:
        req |= {tuple(sorted(pair + (ell,))) for pair in ((1, 6), (2, 5), (3, 4))}
    for c in (4, 5, 6):
        req |= {(c,) + pair for pair in itertools.combinations(noise, 2)}
    return frozenset(req)


REQUIRED_NONUNIFORM = _required_nonuniform()


@dataclass
class ProfileReport:
    passed: bool
    nonuniform_pairs: list[tuple[int, ...]] = field(default_factory=list)
    unexpected_uniform: list[tuple[int, ...]] = field(default_factory=list)
    unexpected_nonuniform: list[tuple[int, ...]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "nonuniform_pairs": [list(t) for t in self.nonuniform_pairs],
            "unexpected_uniform": [list(t) for t in self.unexpected_uniform],
            "unexpected_nonuniform": [list(t) for t in self.unexpected_nonuniform],
        }


def check_crossed_profile(d: Design) -> ProfileReport:
    """Compare the 2- and 3-marginals of u* with the required 24-run profile.

    All 2-marginals must be uniform; exactly the triples in REQUIRED_NONUNIFORM
    must be non-uniform.
    """
    if d.spec != DEFAULT_SPEC:
        raise ValueError("the profile check is defined for the 6-control/3-noise instance only")
    pairs = marginal_profile(d, 2, star=True)
    triples = marginal_profile(d, 3, star=True)
    bad_pairs = sorted(T for T, ok in pairs.items() if not ok)
    unexpected_uniform = sorted(T for T in REQUIRED_NONUNIFORM if triples[T])
    unexpected_nonuniform = sorted(T for T, ok in triples.items() if not ok and T not in REQUIRED_NONUNIFORM)
    passed = not (bad_pairs or unexpected_uniform or unexpected_nonuniform)
    return ProfileReport(passed, bad_pairs, unexpected_uniform, unexpected_nonuniform)
