"""Regression artifacts: regenerate, write, and byte-compare against stored copies."""
from __future__ import annotations

import itertools
import json
from pathlib import Path
from typing import Callable

from . import reference
from .designs import DEFAULT_SPEC, Design, direct_product, marginal, strength
from .enumeration import build_constraints
from .formats import dumps, indicator_to_json
from .polyalg import coeffs_from_response
from .quotient import DEFAULT_ORDER, confounding_matrix, estimable_subset, quotient_basis
from .reports import enumeration_bundle, representatives_table

DEFAULT_DIR = Path(__file__).with_name("golden")

GENERATOR_NAMES = list(reference.GENERATOR_SPACE_NAMES)

ARTIFACT_NAMES = (
    "enumeration.json",
    "catalog.json",
    "f1_indicator.json",
    "f1_quotient_basis.json",
    "f1_confounding.csv",
    "f1_estimable.json",
    "product_marginals.json",
)


def default_config() -> dict:
    return {
        "p": DEFAULT_SPEC.p,
        "q": DEFAULT_SPEC.q,
        "s": DEFAULT_SPEC.s,
        "relations": [list(r) for r in DEFAULT_SPEC.relations],
        "runs": 24,
        "anchors": [list(a) for a in reference.CATALOG_ANCHORS],
        "order": list(DEFAULT_ORDER.priority),
        "require_uniform": [],
        "forbid_uniform": [],
        "drop_uniform": [],
    }


def f1_design() -> Design:
    return Design.from_points(DEFAULT_SPEC, reference.f1_points())


def product_design() -> Design:
    inner = [DEFAULT_SPEC.extend_point(x + (1,) * DEFAULT_SPEC.q)[: DEFAULT_SPEC.p] for x in reference.L8_GENERATORS]
    return direct_product(inner, reference.L4_POINTS, DEFAULT_SPEC)


def build_artifacts(workers: int = 1) -> dict[str, str]:
    """Every golden artifact, keyed by file name."""
    out: dict[str, str] = {}
    bundle, designs = enumeration_bundle(
        build_constraints(DEFAULT_SPEC, 24), reference.CATALOG_ANCHORS, default_config(), workers
    )
    out["enumeration.json"] = dumps(bundle)
    reps = [designs[i] for i in bundle["representatives"]]
    out["catalog.json"] = dumps(representatives_table(reps, GENERATOR_NAMES))

    f1 = f1_design()
    out["f1_indicator.json"] = indicator_to_json(coeffs_from_response(f1.u), GENERATOR_NAMES)
    qb = quotient_basis(f1.points(star=True), DEFAULT_ORDER)
    out["f1_quotient_basis.json"] = dumps(qb.to_dict())
    cm = confounding_matrix(qb)
    out["f1_confounding.csv"] = cm.to_csv()
    kept = [j for j in range(1, len(cm.cols) + 1) if j not in reference.F1_DROPPED_COLUMNS]
    out["f1_estimable.json"] = dumps(estimable_subset(cm, "verify-given", kept).to_dict())

    t2 = product_design()
    tables = [marginal(t2, T, star=True).to_dict() for T in _triples(DEFAULT_SPEC.star_count)]
    out["product_marginals.json"] = dumps({"strength_u_star": strength(t2, star=True), "marginals": tables})
    assert tuple(out) == ARTIFACT_NAMES
    return out


def _triples(n: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(1, n + 1), 3))


def write_artifacts(directory: Path, workers: int = 1) -> list[str]:
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in build_artifacts(workers).items():
        (directory / name).write_text(text, encoding="utf-8")
        written.append(name)
    return written


def _describe_catalog(golden: str, computed: str) -> list[str]:
    try:
        old, new = json.loads(golden), json.loads(computed)
    except json.JSONDecodeError:
        return ["catalog.json: golden file is not valid JSON"]
    msgs = []
    for k, (a, b) in enumerate(zip(old, new)):
        label = b.get("label") or a.get("label") or f"representative {k}"
        if a.get("label") != b.get("label"):
            msgs.append(f"catalog.json: representative {k} labelled {a.get('label')} in golden, {b.get('label')} computed")
        names = b["indicator"]["vars"]
        ta = {tuple(t["support"]): (t["num"], t["den"]) for t in a["indicator"]["terms"]}
        tb = {tuple(t["support"]): (t["num"], t["den"]) for t in b["indicator"]["terms"]}
        for support in sorted(set(ta) | set(tb), key=lambda s: (len(s), s)):
            if ta.get(support) != tb.get(support):
                exps = "".join("1" if j in support else "0" for j in range(len(names)))
                fmt = lambda v: "0" if v is None else f"{v[0]}/{v[1]}"
                msgs.append(
                    f"catalog.json: column {label}, theta_{exps}: golden {fmt(ta.get(support))}, computed {fmt(tb.get(support))}"
                )
    if len(old) != len(new):
        msgs.append(f"catalog.json: golden has {len(old)} representatives, computed {len(new)}")
    return msgs or ["catalog.json: bytes differ (formatting)"]


def _describe_lines(name: str, golden: str, computed: str) -> list[str]:
    a, b = golden.splitlines(), computed.splitlines()
    for i, (x, y) in enumerate(zip(a, b), start=1):
        if x != y:
            return [f"{name}: first difference at line {i}"]
    return [f"{name}: golden has {len(a)} lines, computed {len(b)}"]


DESCRIBERS: dict[str, Callable[[str, str], list[str]]] = {"catalog.json": _describe_catalog}


class MissingGolden(FileNotFoundError):
    pass


def verify(directory: Path, workers: int = 1) -> list[str]:
    """Recompute every artifact; return one message per mismatch."""
    missing = [name for name in ARTIFACT_NAMES if not (directory / name).is_file()]
    if missing:
        raise MissingGolden(f"missing golden files in {directory}: {', '.join(missing)}")
    computed = build_artifacts(workers)
    problems = []
    for name, text in computed.items():
        stored = (directory / name).read_bytes()
        if stored != text.encode("utf-8"):
            describe = DESCRIBERS.get(name, lambda g, c, n=name: _describe_lines(n, g, c))
            problems.extend(describe(stored.decode("utf-8", errors="replace"), text))
    return problems
