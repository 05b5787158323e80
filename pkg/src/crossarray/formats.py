"""File formats: indicator JSON, design CSV, text grids, and result bundles."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

from .designs import Design, FactorSpec, DEFAULT_SPEC
from .polyalg import Monomial, MultilinearPoly, point_coords


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def dumps(obj: Any) -> str:
    """Canonical JSON text used for every artifact."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def fraction_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def indicator_to_dict(p: MultilinearPoly, names: Sequence[str] | None = None) -> dict:
    names = list(names) if names else [f"z{j + 1}" for j in range(p.n)]
    if len(names) != p.n:
        raise ValueError(f"{len(names)} names for {p.n} variables")
    return {
        "n": p.n,
        "vars": names,
        "terms": [
            {"support": list(m.support), "num": v.numerator, "den": v.denominator}
            for m, v in p.terms()
        ],
    }


def indicator_to_json(p: MultilinearPoly, names: Sequence[str] | None = None) -> str:
    return dumps(indicator_to_dict(p, names))


def indicator_from_dict(obj: dict) -> MultilinearPoly:
    try:
        n = int(obj["n"])
        coeffs = {}
        for term in obj["terms"]:
            mono = Monomial.from_support(n, term["support"])
            coeffs[mono.mask] = Fraction(int(term["num"]), int(term["den"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"malformed indicator: {exc}") from exc
    return MultilinearPoly(n, coeffs)


def indicator_from_json(text: str) -> MultilinearPoly:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno) from exc
    return indicator_from_dict(obj)


def design_to_csv(d: Design, star: bool = False) -> str:
    lines = [",".join(d.spec.names(star))]
    for pt in d.points(star=star):
        lines.append(",".join(str(c) for c in pt))
    return "\n".join(lines) + "\n"


def design_from_csv(text: str, spec: FactorSpec = DEFAULT_SPEC) -> Design:
    """Read generator-space or extended-space rows (chosen by the header)."""
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty design file", 1)
    header = [h.strip() for h in lines[0].split(",")]
    if header == spec.names(star=False):
        star = False
    elif header == spec.names(star=True):
        star = True
    else:
        raise FormatError(f"unexpected header {','.join(header)}", 1)
    points = []
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != len(header):
            raise FormatError(f"expected {len(header)} values, found {len(fields)}", lineno)
        try:
            pt = tuple(int(f) for f in fields)
        except ValueError as exc:
            raise FormatError(f"non-integer level ({exc})", lineno) from exc
        if any(c not in (-1, 1) for c in pt):
            raise FormatError("levels must be -1 or 1", lineno)
        if star:
            if not spec.satisfies_relations(pt[: spec.p]):
                raise FormatError("row violates the defining relations", lineno)
            pt = pt[: spec.s] + pt[spec.p :]
        if pt in seen:
            raise FormatError("duplicate design point", lineno)
        seen.add(pt)
        points.append(pt)
    return Design.from_points(spec, points)


def design_grid(d: Design, mark: str = "∘") -> str:
    """Controls as rows, noise settings as columns, a mark at each run."""
    spec = d.spec
    n_y = 1 << spec.q
    ys = [point_coords(j, spec.q) for j in range(n_y)]
    width = max(2, len(mark))
    xnames = spec.names(star=True)[: spec.p]
    out = []
    for k in range(spec.q):
        label = f"y{k + 1}"
        out.append(" ".join(" " * 2 for _ in xnames) + f" {label:>3} |" + "".join(f"{v[k]:>{width + 1}}" for v in ys))
    out.append(" ".join(f"{n:>2}" for n in xnames) + "     |")
    for xc in range(1 << spec.s):
        gen = point_coords(xc, spec.s)
        controls = spec.extend_point(gen + (1,) * spec.q)[: spec.p]
        row = " ".join(f"{c:>2}" for c in controls) + "     |"
        for j in range(n_y):
            row += f"{mark if d.u[xc * n_y + j] else '':>{width + 1}}"
        out.append(row.rstrip())
    return "\n".join(out) + "\n"


def word_hex(word: int) -> str:
    return f"{word:016x}"
