"""Exact multilinear polynomial algebra on the two-level full factorial {-1, +1}^n.

A monomial is squarefree and is stored as a support bitmask: bit ``j`` set means
variable ``j`` (0-based, so ``x1`` is bit 0) appears.  Points of the full factorial
are indexed so that the first variable varies slowest: coordinate ``j`` of point
``i`` is ``+1`` iff bit ``n - 1 - j`` of ``i`` is set.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

MAX_FAST_VARS = 16


class DimensionError(ValueError):
    """Vector or polynomial sizes do not agree."""


class DomainError(ValueError):
    """A value lies outside the admissible set (e.g. a response entry not in {0, 1})."""


def popcount(x: int) -> int:
    return bin(x).count("1")


def default_names(n: int) -> list[str]:
    return [f"z{j + 1}" for j in range(n)]


@dataclass(frozen=True, order=True)
class Monomial:
    """Squarefree monomial over ``n`` two-level variables."""

    n: int
    mask: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >= 1 << self.n:
            raise DimensionError(f"mask {self.mask:#x} out of range for n={self.n}")

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> Monomial:
        mask = 0
        for j in support:
            if not 0 <= j < n:
                raise DimensionError(f"variable index {j} out of range for n={n}")
            mask |= 1 << j
        return cls(n, mask)

    @classmethod
    def from_exponents(cls, exponents: str | Sequence[int]) -> Monomial:
        """Build from an exponent string such as ``"111100"`` (first variable first)."""
        exps = [int(e) for e in exponents]
        if any(e not in (0, 1) for e in exps):
            raise DomainError("exponents of a two-level monomial must be 0 or 1")
        return cls.from_support(len(exps), (j for j, e in enumerate(exps) if e))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if self.mask >> j & 1)

    @property
    def weight(self) -> int:
        return popcount(self.mask)

    def exponents(self) -> str:
        return "".join("1" if self.mask >> j & 1 else "0" for j in range(self.n))

    def name(self, names: Sequence[str] | None = None) -> str:
        names = names or default_names(self.n)
        return "*".join(names[j] for j in self.support) or "1"

    def sort_key(self) -> tuple[int, int]:
        return (self.weight, self.mask)

    def __str__(self) -> str:
        return self.name()


def point_coords(index: int, n: int) -> tuple[int, ...]:
    return tuple(1 if index >> (n - 1 - j) & 1 else -1 for j in range(n))


def point_index(coords: Sequence[int]) -> int:
    n = len(coords)
    idx = 0
    for j, c in enumerate(coords):
        if c == 1:
            idx |= 1 << (n - 1 - j)
        elif c != -1:
            raise DomainError(f"coordinate {c!r} is not -1 or +1")
    return idx


def monomial_sign(mask: int, index: int, n: int) -> int:
    """Value of the monomial ``mask`` at full-factorial point ``index``."""
    minus = 0
    for j in range(n):
        if mask >> j & 1 and not index >> (n - 1 - j) & 1:
            minus ^= 1
    return -1 if minus else 1


@dataclass(frozen=True)
class FullFactorial:
    """All ``2**n`` points of {-1, +1}^n in canonical order."""

    n: int
    points: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "points", tuple(point_coords(i, self.n) for i in range(1 << self.n))
        )

    def __len__(self) -> int:
        return 1 << self.n

    def index(self, point: Sequence[int]) -> int:
        if len(point) != self.n:
            raise DimensionError(f"point has {len(point)} coordinates, expected {self.n}")
        return point_index(point)

    def model_matrix(self) -> list[list[int]]:
        """X[i][c] = d_i^c with columns ordered by support mask."""
        size = 1 << self.n
        return [[monomial_sign(c, i, self.n) for c in range(size)] for i in range(size)]


class MultilinearPoly:
    """Polynomial with exact rational coefficients in Q[z] / <z_j^2 - 1>.

    Zero coefficients are never stored.  Instances are immutable.
    """

    __slots__ = ("n", "_coeffs")

    def __init__(self, n: int, coeffs: Mapping[int, Fraction | int] | None = None):
        if n < 0:
            raise DimensionError("n must be nonnegative")
        store: dict[int, Fraction] = {}
        for mask, value in (coeffs or {}).items():
            if isinstance(mask, Monomial):
                if mask.n != n:
                    raise DimensionError("monomial and polynomial sizes differ")
                mask = mask.mask
            if not 0 <= mask < 1 << n:
                raise DimensionError(f"mask {mask:#x} out of range for n={n}")
            value = Fraction(value)
            if value:
                store[mask] = value
        self.n = n
        self._coeffs = store

    @classmethod
    def constant(cls, n: int, value: Fraction | int) -> MultilinearPoly:
        return cls(n, {0: value})

    @classmethod
    def from_exponents(cls, terms: Mapping[str, Fraction | int | str]) -> MultilinearPoly:
        """Build from ``{"000000": "3/8", "111100": "1/8", ...}``."""
        n = len(next(iter(terms)))
        coeffs = {}
        for exps, value in terms.items():
            mono = Monomial.from_exponents(exps)
            if mono.n != n:
                raise DimensionError("inconsistent exponent string lengths")
            coeffs[mono.mask] = Fraction(value)
        return cls(n, coeffs)

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def coefficient(self, mono: Monomial | int) -> Fraction:
        mask = mono.mask if isinstance(mono, Monomial) else mono
        return self._coeffs.get(mask, Fraction(0))

    def terms(self) -> Iterator[tuple[Monomial, Fraction]]:
        for mask in sorted(self._coeffs, key=lambda m: (popcount(m), m)):
            yield Monomial(self.n, mask), self._coeffs[mask]

    def support_weights(self) -> set[int]:
        return {popcount(m) for m in self._coeffs}

    def __len__(self) -> int:
        return len(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        return self.n == other.n and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._coeffs.items())))

    def __add__(self, other: MultilinearPoly) -> MultilinearPoly:
        _check_same_n(self, other)
        out = dict(self._coeffs)
        for m, v in other._coeffs.items():
            out[m] = out.get(m, Fraction(0)) + v
        return MultilinearPoly(self.n, out)

    def __sub__(self, other: MultilinearPoly) -> MultilinearPoly:
        return self + other.scale(-1)

    def __mul__(self, other: MultilinearPoly) -> MultilinearPoly:
        return multiply_mod_squares(self, other)

    def scale(self, factor: Fraction | int) -> MultilinearPoly:
        return MultilinearPoly(self.n, {m: v * factor for m, v in self._coeffs.items()})

    def __call__(self, point: Sequence[int]) -> Fraction:
        if len(point) != self.n:
            raise DimensionError(f"point has {len(point)} coordinates, polynomial has n={self.n}")
        return self.evaluate_index(point_index(point))

    def evaluate_index(self, index: int) -> Fraction:
        return sum(
            (v * monomial_sign(m, index, self.n) for m, v in self._coeffs.items()),
            Fraction(0),
        )

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for mono, value in self.terms():
            sign = "-" if value < 0 else "+"
            mag = abs(value)
            if mono.mask == 0:
                body = str(mag)
            elif mag == 1:
                body = mono.name(names)
            else:
                body = f"{mag}*{mono.name(names)}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        return text + "".join(f" {s} {b}" for s, b in parts[1:])

    def __repr__(self) -> str:
        return f"MultilinearPoly(n={self.n}, {self.to_string()})"


def _check_same_n(p: MultilinearPoly, q: MultilinearPoly) -> None:
    if p.n != q.n:
        raise DimensionError(f"polynomials over {p.n} and {q.n} variables")


def _log2_length(length: int) -> int:
    n = length.bit_length() - 1
    if length <= 0 or 1 << n != length:
        raise DimensionError(f"response length {length} is not a power of two")
    return n


def _bit_reverse(x: int, n: int) -> int:
    out = 0
    for _ in range(n):
        out = out << 1 | x & 1
        x >>= 1
    return out


def _butterfly(values: list[Fraction], *, evaluate: bool = False) -> list[Fraction]:
    # Analysis pairs (u at -1, u at +1) -> (lo + hi, hi - lo); evaluation is the
    # transpose, (constant, linear) -> (lo - hi, lo + hi).
    a = list(values)
    h = 1
    size = len(a)
    while h < size:
        for start in range(0, size, 2 * h):
            for i in range(start, start + h):
                lo, hi = a[i], a[i + h]
                if evaluate:
                    a[i], a[i + h] = lo - hi, lo + hi
                else:
                    a[i], a[i + h] = lo + hi, hi - lo
        h *= 2
    return a


def coeffs_from_response(
    u: Sequence[Fraction | int], *, require_binary: bool = True
) -> MultilinearPoly:
    """Indicator (or interpolating) polynomial of a response on the full factorial.

    ``theta_c = (1/m) * sum_i u_i * d_i^c``; computed with a rational butterfly.
    With ``require_binary`` the response must be 0/1-valued.
    """
    n = _log2_length(len(u))
    values = [Fraction(v) for v in u]
    if require_binary and any(v not in (0, 1) for v in values):
        raise DomainError("response entries must be 0 or 1")
    if n > MAX_FAST_VARS:
        raise DimensionError(f"n={n} exceeds the supported size {MAX_FAST_VARS}")
    size = len(values)
    transformed = _butterfly(values)
    # Position k of the butterfly output carries the monomial whose variables are
    # the set bits of k in point-bit convention; convert to support masks.
    return MultilinearPoly(
        n, {_bit_reverse(k, n): transformed[k] / size for k in range(size) if transformed[k]}
    )


def coeffs_from_response_naive(u: Sequence[Fraction | int]) -> MultilinearPoly:
    """O(4^n) reference: theta = X^T u / m with X materialized."""
    n = _log2_length(len(u))
    size = 1 << n
    values = [Fraction(v) for v in u]
    coeffs = {}
    for c in range(size):
        total = sum((values[i] * monomial_sign(c, i, n) for i in range(size)), Fraction(0))
        coeffs[c] = total / size
    return MultilinearPoly(n, coeffs)


def response_from_coeffs(p: MultilinearPoly, n: int | None = None) -> list[Fraction]:
    """Evaluate ``p`` at every full-factorial point, in canonical order."""
    if n is not None and n != p.n:
        raise DimensionError(f"requested n={n} but polynomial has n={p.n}")
    size = 1 << p.n
    spectrum = [Fraction(0)] * size
    for mask, value in p.coeffs.items():
        spectrum[_bit_reverse(mask, p.n)] = value
    return _butterfly(spectrum, evaluate=True)


def multiply_mod_squares(p: MultilinearPoly, q: MultilinearPoly) -> MultilinearPoly:
    """Product in Q[z] / <z_j^2 - 1>: monomials multiply by symmetric difference."""
    _check_same_n(p, q)
    out: dict[int, Fraction] = {}
    for m1, v1 in p.coeffs.items():
        for m2, v2 in q.coeffs.items():
            m = m1 ^ m2
            out[m] = out.get(m, Fraction(0)) + v1 * v2
    return MultilinearPoly(p.n, out)


def is_indicator(p: MultilinearPoly) -> bool:
    """True iff ``p * p == p`` in the quotient ring, i.e. ``p`` is 0/1-valued."""
    return multiply_mod_squares(p, p) == p


def all_monomials(n: int) -> Iterator[Monomial]:
    for w in range(n + 1):
        for support in itertools.combinations(range(n), w):
            yield Monomial.from_support(n, support)
