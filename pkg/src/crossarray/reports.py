"""Result bundles and analysis reports shared by the CLI and the golden harness."""
from __future__ import annotations

from typing import Sequence

from . import reference
from .designs import Design, marginal_profile, strength
from .enumeration import (
    ConstraintSet,
    canonical_reps,
    classify_orbits,
    enumerate_designs,
)
from .formats import fraction_str, indicator_to_dict, word_hex
from .polyalg import MultilinearPoly, coeffs_from_response
from .quotient import TermOrder, confounding_matrix, estimable_subset, quotient_basis, render_standard_form


def catalog_label(p: MultilinearPoly) -> str | None:
    for label, ref in reference.catalog().items():
        if ref == p:
            return label
    return None


def enumeration_bundle(
    cs: ConstraintSet,
    anchors: Sequence[Sequence[int]],
    config: dict,
    workers: int = 1,
) -> tuple[dict, list[Design]]:
    designs = enumerate_designs(cs, workers=workers)
    partition = classify_orbits(designs)
    reps = canonical_reps(designs, anchors)
    position = {d.word: i for i, d in enumerate(designs)}
    bundle = {
        "config": config,
        "constraints": cs.to_dict(),
        "solutions": [word_hex(d.word) for d in designs],
        "orbits": partition.orbits,
        "orbit_stabilizer_orders": partition.stabilizers,
        "group_order": partition.group_order,
        "representatives": [position[d.word] for d in reps],
    }
    return bundle, designs


def summary_line(bundle: dict) -> str:
    def plural(k: int, word: str) -> str:
        return f"{k} {word}" + ("" if k == 1 else "s")

    return ", ".join(
        [
            plural(len(bundle["solutions"]), "solution"),
            plural(len(bundle["orbits"]), "orbit"),
            f"{len(bundle['representatives'])} anchored representative"
            + ("" if len(bundle["representatives"]) == 1 else "s"),
        ]
    )


def representatives_table(designs: Sequence[Design], names: Sequence[str]) -> list[dict]:
    out = []
    for d in designs:
        p = coeffs_from_response(d.u)
        out.append(
            {"label": catalog_label(p), "word": word_hex(d.word), "indicator": indicator_to_dict(p, names)}
        )
    return out


def _nonuniform(d: Design, size: int, star: bool) -> list[list[int]]:
    return [list(T) for T, ok in marginal_profile(d, size, star).items() if not ok]


def analysis_report(d: Design, order: TermOrder, estimable_columns: Sequence[int] | None = None) -> dict:
    """Indicator, marginal profile, strength, quotient basis, confounding, estimability."""
    spec = d.spec
    p = coeffs_from_response(d.u)
    report: dict = {
        "runs": d.runs,
        "indicator": indicator_to_dict(p, spec.names(star=False)),
        "catalog_label": catalog_label(p),
    }
    if d.runs == 0:
        return report
    report["strength"] = {"u": strength(d, star=False), "u_star": strength(d, star=True)}
    report["nonuniform_marginals"] = {
        f"{space}_{size}": _nonuniform(d, size, star)
        for star, space in ((False, "u"), (True, "u_star"))
        for size in (1, 2, 3)
    }
    qb = quotient_basis(d.points(star=True), order, spec.names(star=True))
    cm = confounding_matrix(qb)
    if estimable_columns is None:
        est = estimable_subset(cm, "keep-order-greedy")
    else:
        est = estimable_subset(cm, "verify-given", estimable_columns)
    report["quotient_basis"] = qb.names()
    report["confounding"] = {
        "rows": cm.row_names(),
        "cols": cm.cols,
        "entries": [[fraction_str(v) for v in row] for row in cm.entries],
    }
    report["standard_form"] = render_standard_form(cm)
    report["estimable"] = est.to_dict()
    return report
