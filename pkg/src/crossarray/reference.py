"""Reference data for the 6-control / 3-noise two-level instance.

The catalogue of twelve anchored designs F1..F12 is used to label output,
and the remaining constants serve as fixtures.
"""
from __future__ import annotations

from fractions import Fraction

from .polyalg import MultilinearPoly, point_coords

CONTROL_NAMES = ("x1", "x2", "x3", "x4", "x5", "x6")
NOISE_NAMES = ("y1", "y2", "y3")
GENERATOR_SPACE_NAMES = ("x1", "x2", "x3", "y1", "y2", "y3")
STAR_SPACE_NAMES = CONTROL_NAMES + NOISE_NAMES

# The two points every catalogued representative contains.
CATALOG_ANCHORS = ((-1, -1, -1, -1, -1, -1), (-1, -1, -1, -1, -1, 1))

# Inner array L8 over (x1, x2, x3); x4..x6 follow from x4=x1x2, x5=x1x3, x6=x2x3.
L8_GENERATORS = tuple(point_coords(i, 3) for i in range(8))

# Outer array L4 over (y1, y2, y3) with y3 = y1*y2.
L4_POINTS = ((-1, -1, 1), (-1, 1, -1), (1, -1, -1), (1, 1, 1))

# 24-run design F1: for each (x1, x2, x3) cell in canonical order, the indices
# (canonical order over (y1, y2, y3)) of the three noise settings that are run.
F1_CELLS = (
    (0, 1, 7),
    (2, 5, 6),
    (2, 4, 7),
    (1, 3, 4),
    (3, 4, 6),
    (0, 3, 5),
    (1, 2, 5),
    (0, 6, 7),
)


def f1_points() -> list[tuple[int, ...]]:
    """F1 as points over (x1, x2, x3, y1, y2, y3), canonical order."""
    return [point_coords(xc, 3) + point_coords(y, 3) for xc, ys in enumerate(F1_CELLS) for y in ys]


CATALOG_ROWS = (
    "000000", "111100", "111010", "111001", "110110", "110101", "110011", "101110",
    "101101", "101011", "011110", "011101", "011011", "100111", "010111", "001111",
)

# Signs of the fifteen weight-4 coefficients (each +-1/8) per column F1..F12,
# in CATALOG_ROWS[1:] order.  The constant term is 3/8 in every column.
_CATALOG_SIGNS = {
    "F1":  "+ + - + + - + + + + - + - + -",
    "F2":  "+ + + + - - + - + + + - + + -",
    "F3":  "+ + - + - + + + + + + - - + -",
    "F4":  "+ + + + - - + + - + - + + + -",
    "F5":  "+ + - + + + + - + + + - - - +",
    "F6":  "+ + + + - + + - - + + - + - +",
    "F7":  "+ + - + + + + + - + - + - - +",
    "F8":  "+ + + + + - + - - + - + + - +",
    "F9":  "+ + - + - + + + - + + + + - -",
    "F10": "+ + - + + - + - + + + + + - -",
    "F11": "+ + + + - + + + - + - - - + +",
    "F12": "+ + + + + - + - + + - - - + +",
}


def catalog() -> dict[str, MultilinearPoly]:
    out = {}
    for label, signs in _CATALOG_SIGNS.items():
        terms = {CATALOG_ROWS[0]: Fraction(3, 8)}
        for exps, s in zip(CATALOG_ROWS[1:], signs.split()):
            terms[exps] = Fraction(1 if s == "+" else -1, 8)
        out[label] = MultilinearPoly.from_exponents(terms)
    return out


# Standard monomials of the vanishing ideal of F1 (nine coordinates), in display order.
F1_QUOTIENT_BASIS = (
    "1", "x1", "x2", "x3", "x4", "x5", "x6", "y1",
    "y2", "y3", "x1*y2", "x1*y3", "x2*y2", "x2*y3", "x3*y3", "x4*y3",
    "x5*y1", "x5*y3", "x5*y2", "x6*y2", "x6*y3", "y1*y2", "y1*y3", "y2*y3",
)

# 1-based columns of the confounding matrix that are dropped in the estimable
# 24-parameter model (gamma33, gamma53, gamma62, gamma63).
F1_DROPPED_COLUMNS = (19, 25, 27, 28)
