from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from crossarray.designs import DEFAULT_SPEC, Design
from crossarray.enumeration import build_constraints, enumerate_designs
from crossarray.polyalg import MultilinearPoly, point_coords

DATA = Path(__file__).with_name("data")
ACCEPTANCE_LINES: list[str] = []


def read_grid(name: str) -> Design:
    """Design from a fixture grid: control settings, then one 0/1 mark per noise column."""
    points = []
    for line in (DATA / name).read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        controls, marks = line.split("|")
        x = tuple(int(v) for v in controls.split())
        for col, mark in enumerate(marks.strip()):
            if mark == "1":
                points.append(x[:3] + point_coords(col, 3))
    return Design.from_points(DEFAULT_SPEC, points)


def read_catalog() -> dict[str, MultilinearPoly]:
    rows = [
        line.split()
        for line in (DATA / "catalog.txt").read_text().splitlines()
        if line.strip() and not line.startswith("#")
    ]
    labels = [f"F{k}" for k in range(1, len(rows[0]))]
    return {
        label: MultilinearPoly.from_exponents({row[0]: Fraction(row[k + 1]) for row in rows})
        for k, label in enumerate(labels)
    }


def read_matrix(name: str) -> list[list[int]]:
    return [[int(v) for v in line.split()] for line in (DATA / name).read_text().splitlines() if line.strip()]


@pytest.fixture(scope="session")
def solutions() -> list[Design]:
    return enumerate_designs(build_constraints(DEFAULT_SPEC, 24))


@pytest.fixture(scope="session")
def f1() -> Design:
    return read_grid("grid_f1.txt")


@pytest.fixture(scope="session")
def product32() -> Design:
    return read_grid("grid_product32.txt")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
