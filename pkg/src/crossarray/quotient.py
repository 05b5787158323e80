"""Standard monomials of vanishing ideals of finite point sets, and confounding.

Polynomials here are plain dicts mapping exponent tuples (indexed like the
variable list) to rationals.  The reduced Groebner basis is never formed: the
normal form of a polynomial is the unique combination of standard monomials
that interpolates it on the points.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponents = tuple[int, ...]
Poly = Mapping[Exponents, Fraction]


class DuplicatePointError(ValueError):
    pass


@dataclass(frozen=True)
class TermOrder:
    """Degree reverse lexicographic order; ``priority`` lists variables from largest."""

    priority: tuple[str, ...]
    kind: str = "degrevlex"

    def __post_init__(self) -> None:
        if self.kind != "degrevlex":
            raise ValueError(f"unsupported term order {self.kind!r}")
        if len(set(self.priority)) != len(self.priority):
            raise ValueError("repeated variable in priority")

    def key(self, exps: Exponents, variables: Sequence[str]) -> tuple:
        """Sort key, ascending in the order."""
        pos = {v: i for i, v in enumerate(variables)}
        ordered = [exps[pos[v]] for v in self.priority]
        return (sum(exps), tuple(-e for e in reversed(ordered)))

    def display_key(self, exps: Exponents, variables: Sequence[str]) -> tuple:
        """Degree first, then lexicographically largest first (the conventional display order)."""
        pos = {v: i for i, v in enumerate(variables)}
        return (sum(exps), tuple(-exps[pos[v]] for v in self.priority))


DEFAULT_VARIABLES = ("x1", "x2", "x3", "x4", "x5", "x6", "y1", "y2", "y3")
DEFAULT_ORDER = TermOrder(DEFAULT_VARIABLES)


def monomial_name(exps: Exponents, variables: Sequence[str]) -> str:
    parts = []
    for v, e in zip(variables, exps):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) or "1"


def parse_monomial(text: str, variables: Sequence[str]) -> Exponents:
    exps = [0] * len(variables)
    text = text.strip()
    if text == "1":
        return tuple(exps)
    for factor in text.split("*"):
        name, _, power = factor.strip().partition("^")
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        exps[variables.index(name)] += int(power or 1)
    return tuple(exps)


def evaluate_monomial(exps: Exponents, point: Sequence[Fraction]) -> Fraction:
    value = Fraction(1)
    for e, c in zip(exps, point):
        if e:
            value *= Fraction(c) ** e
    return value


def evaluate(p: Poly, point: Sequence[Fraction]) -> Fraction:
    return sum((Fraction(c) * evaluate_monomial(m, point) for m, c in p.items()), Fraction(0))


# -- exact linear algebra ----------------------------------------------------


def rank(rows: Sequence[Sequence[Fraction | int]]) -> int:
    """Rank over Q by Gaussian elimination with first-nonzero pivots."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def inverse(a: Sequence[Sequence[Fraction | int]]) -> list[list[Fraction]]:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        pv = m[c][c]
        m[c] = [x / pv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n:] for row in m]


# -- quotient basis ----------------------------------------------------------


@dataclass
class QuotientBasis:
    variables: tuple[str, ...]
    order: TermOrder
    monomials: list[Exponents]
    points: list[tuple[Fraction, ...]]
    _inverse: list[list[Fraction]] | None = field(default=None, repr=False)

    def names(self) -> list[str]:
        return [monomial_name(m, self.variables) for m in self.monomials]

    def evaluation_matrix(self) -> list[list[Fraction]]:
        """Rows are points, columns are basis monomials."""
        return [[evaluate_monomial(m, pt) for m in self.monomials] for pt in self.points]

    def inverse(self) -> list[list[Fraction]]:
        if self._inverse is None:
            self._inverse = inverse(self.evaluation_matrix())
        return self._inverse

    def display_order(self) -> list[Exponents]:
        return sorted(self.monomials, key=lambda m: self.order.display_key(m, self.variables))

    def is_order_ideal(self) -> bool:
        present = set(self.monomials)
        for m in self.monomials:
            for i, e in enumerate(m):
                if e and m[:i] + (e - 1,) + m[i + 1 :] not in present:
                    return False
        return True

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "order": {"kind": self.order.kind, "priority": list(self.order.priority)},
            "monomials": self.names(),
        }


def _divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))


def quotient_basis(
    points: Iterable[Sequence[Fraction | int]],
    order: TermOrder = DEFAULT_ORDER,
    variables: Sequence[str] | None = None,
) -> QuotientBasis:
    """Standard monomials of the vanishing ideal of ``points`` under ``order``.

    Monomials are scanned in increasing order; one joins the basis iff its
    evaluation vector is independent of those already accepted.  A dependent
    monomial is a leading term of the ideal, so its multiples are skipped.
    """
    pts = [tuple(Fraction(c) for c in pt) for pt in points]
    if len(set(pts)) != len(pts):
        raise DuplicatePointError("points must be distinct")
    variables = tuple(variables or order.priority)
    if set(variables) != set(order.priority):
        raise ValueError("term order and variable list disagree")
    nvars = len(variables)
    if any(len(pt) != nvars for pt in pts):
        raise ValueError(f"points must have {nvars} coordinates")
    basis: list[Exponents] = []
    leading: list[Exponents] = []
    echelon: list[tuple[int, list[Fraction]]] = []
    degree = 0
    while len(basis) < len(pts):
        candidates = []
        for combo in itertools.combinations_with_replacement(range(nvars), degree):
            exps = [0] * nvars
            for i in combo:
                exps[i] += 1
            m = tuple(exps)
            if not any(_divides(lt, m) for lt in leading):
                candidates.append(m)
        candidates.sort(key=lambda m: order.key(m, variables))
        for m in candidates:
            vec = [evaluate_monomial(m, pt) for pt in pts]
            for piv, row in echelon:
                if vec[piv]:
                    f = vec[piv] / row[piv]
                    vec = [a - f * b for a, b in zip(vec, row)]
            piv = next((i for i, a in enumerate(vec) if a), None)
            if piv is None:
                leading.append(m)
            else:
                echelon.append((piv, vec))
                basis.append(m)
                if len(basis) == len(pts):
                    break
        degree += 1
    return QuotientBasis(variables, order, basis, pts)


def normal_form(p: Poly, qb: QuotientBasis) -> dict[Exponents, Fraction]:
    """Coefficients over the basis of the interpolant of ``p`` on the points."""
    values = [evaluate(p, pt) for pt in qb.points]
    inv = qb.inverse()
    out = {}
    for m, row in zip(qb.monomials, inv):
        c = sum((a * v for a, v in zip(row, values)), Fraction(0))
        if c:
            out[m] = c
    return out


# -- the main-effects plus control-by-noise interaction model ----------------


def interaction_model(
    controls: Sequence[str] = DEFAULT_VARIABLES[:6],
    noises: Sequence[str] = DEFAULT_VARIABLES[6:],
    variables: Sequence[str] = DEFAULT_VARIABLES,
) -> list[tuple[str, Exponents]]:
    """(parameter, term) pairs: mu, alpha_i x_i, beta_j y_j, gamma_ij x_i y_j."""
    terms = [("mu", parse_monomial("1", variables))]
    terms += [(f"alpha{i}", parse_monomial(x, variables)) for i, x in enumerate(controls, 1)]
    terms += [(f"beta{j}", parse_monomial(y, variables)) for j, y in enumerate(noises, 1)]
    terms += [
        (f"gamma{i}{j}", parse_monomial(f"{x}*{y}", variables))
        for i, x in enumerate(controls, 1)
        for j, y in enumerate(noises, 1)
    ]
    return terms


@dataclass
class ConfoundingMatrix:
    rows: list[Exponents]
    cols: list[str]
    entries: list[list[Fraction]]
    variables: tuple[str, ...]

    def row_names(self) -> list[str]:
        return [monomial_name(m, self.variables) for m in self.rows]

    def column(self, j: int) -> list[Fraction]:
        return [row[j] for row in self.entries]

    def to_csv(self) -> str:
        lines = [",".join(["term"] + self.cols)]
        for name, row in zip(self.row_names(), self.entries):
            lines.append(",".join([name] + [f"{v.numerator}/{v.denominator}" for v in row]))
        return "\n".join(lines) + "\n"


def confounding_matrix(
    qb: QuotientBasis,
    model: Sequence[tuple[str, Exponents]] | None = None,
    row_order: str = "display",
) -> ConfoundingMatrix:
    """Entry (r, c): coefficient of basis monomial r in the normal form of term c.

    ``row_order`` is "display" (degree, then lexicographically largest first) or
    "basis" (ascending in the term order).
    """
    model = list(model or interaction_model(variables=qb.variables))
    if row_order == "display":
        rows = qb.display_order()
    elif row_order == "basis":
        rows = list(qb.monomials)
    else:
        raise ValueError(f"unknown row order {row_order!r}")
    forms = [normal_form({term: Fraction(1)}, qb) for _, term in model]
    entries = [[nf.get(r, Fraction(0)) for nf in forms] for r in rows]
    return ConfoundingMatrix(rows, [name for name, _ in model], entries, qb.variables)


def standard_form(cm: ConfoundingMatrix) -> list[tuple[str, dict[str, Fraction]]]:
    """The model's normal form grouped by basis monomial: [(monomial, {param: coeff})]."""
    out = []
    for name, row in zip(cm.row_names(), cm.entries):
        coeffs = {p: v for p, v in zip(cm.cols, row) if v}
        if coeffs:
            out.append((name, coeffs))
    return out


def render_standard_form(cm: ConfoundingMatrix) -> str:
    pieces = []
    for mono, coeffs in standard_form(cm):
        inner = ""
        for k, (param, v) in enumerate(coeffs.items()):
            mag = "" if abs(v) == 1 else f"{abs(v)}*"
            sign = "-" if v < 0 else ("+" if k else "")
            inner += (f" {sign} " if k else sign) + mag + param
        inner = inner.strip()
        body = f"({inner})" if len(coeffs) > 1 else inner
        pieces.append(body if mono == "1" else f"{body}*{mono}")
    return " + ".join(pieces).replace("+ -", "- ")


@dataclass
class Estimability:
    columns: list[int]
    rank: int
    estimable: bool

    def to_dict(self) -> dict:
        return {"columns": self.columns, "rank": self.rank, "estimable": self.estimable}


def estimable_subset(
    cm: ConfoundingMatrix,
    strategy: str = "keep-order-greedy",
    columns: Iterable[int] | None = None,
) -> Estimability:
    """Pick or verify a set of 1-based columns with full column rank.

    "keep-order-greedy" scans left to right and keeps each column that raises
    the rank.  "verify-given" checks ``columns`` as supplied.
    """
    ncols = len(cm.cols)
    if strategy == "verify-given":
        if columns is None:
            raise ValueError("verify-given needs a column set")
        chosen = sorted(set(columns))
        if any(not 1 <= j <= ncols for j in chosen):
            raise IndexError(f"column index outside 1..{ncols}")
        r = rank([cm.column(j - 1) for j in chosen])
        return Estimability(chosen, r, r == len(chosen))
    if strategy != "keep-order-greedy":
        raise ValueError(f"unknown strategy {strategy!r}")
    chosen: list[int] = []
    current = 0
    for j in range(1, ncols + 1):
        trial = rank([cm.column(k - 1) for k in chosen + [j]])
        if trial > current:
            chosen.append(j)
            current = trial
    return Estimability(chosen, current, True)
