"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest, or directly with ``python tests/test_acceptance.py`` for a
plain summary.
"""
from __future__ import annotations

import itertools
import random
import re
import sys
import time
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES, DATA, read_catalog, read_grid, read_matrix  # noqa: E402
from crossarray.designs import (  # noqa: E402
    DEFAULT_SPEC,
    REQUIRED_NONUNIFORM,
    Design,
    check_crossed_profile,
    marginal,
    marginal_profile,
    strength,
)
from crossarray.enumeration import (  # noqa: E402
    GroupElement,
    apply_group,
    build_constraints,
    canonical_reps,
    classify_orbits,
    enumerate_by_coefficients,
    enumerate_designs,
    orbit_closure,
)
from crossarray.polyalg import (  # noqa: E402
    MultilinearPoly,
    coeffs_from_response,
    is_indicator,
    point_coords,
    response_from_coeffs,
)
from crossarray.quotient import (  # noqa: E402
    DEFAULT_ORDER,
    confounding_matrix,
    estimable_subset,
    quotient_basis,
    render_standard_form,
)
from crossarray.reference import CATALOG_ANCHORS  # noqa: E402

TIME_LIMIT = 300.0


def report(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line, flush=True)
    assert ok, line


@lru_cache(maxsize=None)
def timed_solutions() -> tuple[tuple[Design, ...], float]:
    start = time.perf_counter()
    designs = enumerate_designs(build_constraints(DEFAULT_SPEC, 24))
    return tuple(designs), time.perf_counter() - start


def solutions() -> tuple[Design, ...]:
    return timed_solutions()[0]


def f1() -> Design:
    return read_grid("grid_f1.txt")


def displayed_indicator() -> MultilinearPoly:
    names = ["x1", "x2", "x3", "y1", "y2", "y3"]
    terms = {}
    for line in (DATA / "f1_indicator.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        sign, body = line.split()
        if sign == "const":
            terms["0" * 6] = Fraction(body)
            continue
        present = set(re.findall(r"[xy]\d", body))
        exps = "".join("1" if v in present else "0" for v in names)
        terms[exps] = Fraction(1 if sign == "+" else -1, 8)
    return MultilinearPoly.from_exponents(terms)


def test_criterion_01_enumeration_count():
    designs, elapsed = timed_solutions()
    report(1, "default enumeration yields 192 designs within the time limit",
           len(designs) == 192 and elapsed < TIME_LIMIT, f"{len(designs)} designs in {elapsed:.1f}s")


def test_criterion_02_single_orbit():
    designs = solutions()
    part = classify_orbits(designs)
    closure = [d.word for d in orbit_closure(f1())]
    ok = len(part.orbits) == 1 and part.group_order == 2304 and closure == [d.word for d in designs]
    report(2, "one orbit under the 2304-element group; closure of F1 gives all 192",
           ok, f"{len(part.orbits)} orbit(s), closure size {len(closure)}")


def test_criterion_03_catalog():
    reps = canonical_reps(solutions(), CATALOG_ANCHORS)
    catalog = read_catalog()
    polys = [coeffs_from_response(d.u) for d in reps]
    ok = (
        len(reps) == 12
        and all(len(p) == 16 for p in polys)
        and set(polys) == set(catalog.values())
        and len(set(polys)) == 12
    )
    matched = sum(p in set(catalog.values()) for p in polys)
    report(3, "anchored designs match catalog columns F1..F12 exactly", ok, f"{len(reps)} designs, {matched} matched")


def test_criterion_04_displayed_indicator():
    p = coeffs_from_response(f1().u)
    expected = displayed_indicator()
    ok = p == expected and len(p) == 16 and p.coefficient(0) == Fraction(3, 8)
    report(4, "F1 transforms to the displayed indicator polynomial", ok)


def test_criterion_05_product_profile():
    d = read_grid("grid_product32.txt")
    pairs_ok = all(marginal_profile(d, 2, star=True).values())
    bad = sorted(T for T, ok in marginal_profile(d, 3, star=True).items() if not ok)
    t = strength(d, star=True)
    ok = pairs_ok and bad == [(1, 2, 4), (1, 3, 5), (2, 3, 6), (4, 5, 6), (7, 8, 9)] and t == 2
    report(5, "32-run product design profile and strength 2", ok, f"strength {t}, non-uniform {bad}")


def test_criterion_06_profile_of_every_solution():
    designs = solutions()
    ok = all(check_crossed_profile(d).passed and strength(d) == 3 for d in designs)
    report(6, "every solution passes the crossed profile check with strength 3 on u", ok)


def test_criterion_07_infeasible_uniformity():
    base = build_constraints()
    counts = {T: len(enumerate_designs(base.with_uniform(T, star=True))) for T in sorted(REQUIRED_NONUNIFORM)}
    ok = counts[(1, 6, 7)] == 0 and all(v == 0 for v in counts.values())
    report(7, "requiring u*_167 (or any forbidden triple) to be uniform gives no designs",
           ok, f"{sum(counts.values())} designs over {len(counts)} triples")


def test_criterion_08_vanishing_weights_and_redundant_constraint():
    designs = solutions()
    weights_ok = all(
        coeffs_from_response(d.u).support_weights() <= {0, 4}
        and coeffs_from_response(d.u).coefficient(0) == Fraction(3, 8)
        for d in designs
    )
    relaxed = enumerate_designs(build_constraints().without((4, 5, 6)))
    same = [d.word for d in relaxed] == [d.word for d in designs]
    report(8, "coefficients vanish at weights 1,2,3,5,6; dropping u_456 changes nothing",
           weights_ok and same, f"relaxed set has {len(relaxed)} designs")


def test_criterion_09_quotient_basis():
    qb = quotient_basis(f1().points(star=True), DEFAULT_ORDER)
    listed = (DATA / "basis_f1.txt").read_text().split()
    ok = sorted(qb.names()) == sorted(listed) and len(qb.monomials) == 24 and qb.is_order_ideal()
    report(9, "quotient basis of F1 reproduces the 24 listed monomials", ok)


def test_criterion_10_confounding():
    qb = quotient_basis(f1().points(star=True), DEFAULT_ORDER)
    cm = confounding_matrix(qb)
    matrix_ok = [[int(v) for v in row] for row in cm.entries] == read_matrix("confounding_f1.txt")
    expected_form = (DATA / "standard_form_f1.txt").read_text().strip().replace(" ", "")
    form_ok = render_standard_form(cm).replace(" ", "") == expected_form
    est = estimable_subset(cm, "verify-given", [j for j in range(1, 29) if j not in (19, 25, 27, 28)])
    report(10, "confounding matrix, standard form, and rank-24 estimable subset",
           matrix_ok and form_ok and est.estimable and est.rank == 24,
           f"matrix {matrix_ok}, form {form_ok}, rank {est.rank}")


def test_criterion_11_property_suites():
    rng = random.Random(2026)
    round_trip = True
    for _ in range(10_000):
        u = [rng.randint(0, 1) for _ in range(64)]
        if response_from_coeffs(coeffs_from_response(u)) != u:
            round_trip = False
            break

    grid = [Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1, 4), Fraction(-1, 4), Fraction(1)]
    idempotent = True
    for n in (1, 2):
        for coeffs in itertools.product(grid, repeat=1 << n):
            p = MultilinearPoly(n, dict(enumerate(coeffs)))
            idempotent &= is_indicator(p) == all(v in (0, 1) for v in response_from_coeffs(p))
    for values in itertools.product([Fraction(0), Fraction(1), Fraction(1, 2)], repeat=8):
        p = coeffs_from_response(list(values), require_binary=False)
        idempotent &= is_indicator(p) == all(v in (0, 1) for v in values)
    for word in range(0, 1 << 16, 7):
        u = [word >> i & 1 for i in range(16)]
        idempotent &= is_indicator(coeffs_from_response(u))

    consistent = True
    for _ in range(30):
        d = Design.from_points(DEFAULT_SPEC, [point_coords(i, 6) for i in rng.sample(range(64), rng.randint(1, 64))])
        for T in itertools.combinations(range(1, 7), 3):
            big = marginal(d, T).counts
            small = marginal(d, T[:2]).counts
            consistent &= tuple(big[2 * k] + big[2 * k + 1] for k in range(4)) == small

    oracle = set(enumerate_by_coefficients(24))
    search = {coeffs_from_response(d.u) for d in solutions()}
    oracle_ok = oracle == search and len(oracle) == 192

    report(11, "round trip, idempotency, marginal consistency, coefficient oracle",
           round_trip and idempotent and consistent and oracle_ok,
           f"round trip {round_trip}, idempotency {idempotent}, marginals {consistent}, "
           f"oracle {len(oracle)} vs search {len(search)}")


def test_criterion_12_point_symmetry():
    flip = GroupElement.flip_all()
    designs = solutions()
    even = all(all(w % 2 == 0 for w in coeffs_from_response(d.u).support_weights()) for d in designs)
    fixed = all(apply_group(flip, d) == d for d in designs)
    report(12, "even-weight support and invariance under flipping every sign", even and fixed)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
