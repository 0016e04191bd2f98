"""Printed values used as acceptance oracles, kept apart from the package data."""

from fractions import Fraction as F

# Series in x for potentials, coefficients of x^1, x^2, ...
XI1_SERIES = [F(1), F(-7, 4), F(55, 9), F(-455, 16), F(3876, 25), F(-33649, 36)]
XI2_MU1_SERIES = [F(-2), F(11, 2), F(-272, 9), F(1771, 8)]

# Two-parameter potential with symbolic mu; polynomials in mu as
# coefficient lists, constant term first.
XI2_MU_SERIES = [
    [F(-4), F(2)],
    [F(26), F(-53, 2), F(6)],
    [F(-3028, 9), F(4646, 9), F(-246), F(36)],
    [F(11601, 2), F(-95077, 8), F(17363, 2), F(-2664), F(288)],
]

# Interpolated mirror maps, q^1..q^4 coefficients as (constant, w) pairs.
INTERP_T0 = [(F(-2), F(0)), (F(17), F(-2)), (F(-710, 3), F(50)), (F(8049, 2), F(-1137))]
INTERP_T = [(F(-8), F(2)), (F(74), F(-29)), (F(-3212, 3), F(1532, 3)), (F(18609), F(-19893, 2))]
# W at p = 0, x^1..x^4 coefficients as lists in powers of w.
INTERP_W = [
    [F(1)],
    [F(-7, 4), F(-2)],
    [F(55, 9), F(15), F(6)],
    [F(-455, 16), F(-643, 6), F(-100), F(-64, 3)],
]

# Refined generating function: colored degree (d1, d2, d3) -> coefficient of
# x1^d1 x2^d2 x3^d3 w^(d1+d2+d3).
REFINED_TABLE = {
    # total degree 1
    (1, 0, 0): F("1"), (0, 1, 0): F("1"), (0, 0, 1): F("1"),
    # total degree 2
    (2, 0, 0): F("-7/8"), (1, 1, 0): F("-1"), (1, 0, 1): F("-1"),
    (0, 2, 0): F("-7/8"), (0, 1, 1): F("-1"), (0, 0, 2): F("-7/8"),
    # total degree 3
    (3, 0, 0): F("55/27"), (2, 1, 0): F("3"), (2, 0, 1): F("3"),
    (1, 2, 0): F("3"), (1, 1, 1): F("3"), (1, 0, 2): F("3"),
    (0, 3, 0): F("55/27"), (0, 2, 1): F("3"), (0, 1, 2): F("3"),
    (0, 0, 3): F("55/27"),
    # total degree 4
    (4, 0, 0): F("-455/64"), (3, 1, 0): F("-13"), (3, 0, 1): F("-13"),
    (2, 2, 0): F("-121/8"), (2, 1, 1): F("-16"), (2, 0, 2): F("-121/8"),
    (1, 3, 0): F("-13"), (1, 2, 1): F("-16"), (1, 1, 2): F("-16"),
    (1, 0, 3): F("-13"), (0, 4, 0): F("-455/64"), (0, 3, 1): F("-13"),
    (0, 2, 2): F("-121/8"), (0, 1, 3): F("-13"), (0, 0, 4): F("-455/64"),
    # total degree 5
    (5, 0, 0): F("3876/125"), (4, 1, 0): F("68"), (4, 0, 1): F("68"),
    (3, 2, 0): F("91"), (3, 1, 1): F("104"), (3, 0, 2): F("91"),
    (2, 3, 0): F("91"), (2, 2, 1): F("112"), (2, 1, 2): F("112"),
    (2, 0, 3): F("91"), (1, 4, 0): F("68"), (1, 3, 1): F("104"),
    (1, 2, 2): F("112"), (1, 1, 3): F("104"), (1, 0, 4): F("68"),
    (0, 5, 0): F("3876/125"), (0, 4, 1): F("68"), (0, 3, 2): F("91"),
    (0, 2, 3): F("91"), (0, 1, 4): F("68"), (0, 0, 5): F("3876/125"),
    # total degree 6
    (6, 0, 0): F("-33649/216"), (5, 1, 0): F("-399"), (5, 0, 1): F("-399"),
    (4, 2, 0): F("-4845/8"), (4, 1, 1): F("-741"), (4, 0, 2): F("-4845/8"),
    (3, 3, 0): F("-18496/27"), (3, 2, 1): F("-891"), (3, 1, 2): F("-891"),
    (3, 0, 3): F("-18496/27"), (2, 4, 0): F("-4845/8"), (2, 3, 1): F("-891"),
    (2, 2, 2): F("-7533/8"), (2, 1, 3): F("-891"), (2, 0, 4): F("-4845/8"),
    (1, 5, 0): F("-399"), (1, 4, 1): F("-741"), (1, 3, 2): F("-891"),
    (1, 2, 3): F("-891"), (1, 1, 4): F("-741"), (1, 0, 5): F("-399"),
    (0, 6, 0): F("-33649/216"), (0, 5, 1): F("-399"), (0, 4, 2): F("-4845/8"),
    (0, 3, 3): F("-18496/27"), (0, 2, 4): F("-4845/8"), (0, 1, 5): F("-399"),
    (0, 0, 6): F("-33649/216"),
}

# The separately printed x3 = 0 specialization, same keys.
REFINED_X3_ZERO = {
    (1, 0, 0): F("1"), (0, 1, 0): F("1"), (2, 0, 0): F("-7/8"),
    (1, 1, 0): F("-1"), (0, 2, 0): F("-7/8"), (3, 0, 0): F("55/27"),
    (2, 1, 0): F("3"), (1, 2, 0): F("3"), (0, 3, 0): F("55/27"),
    (4, 0, 0): F("-455/64"), (3, 1, 0): F("-13"), (2, 2, 0): F("-121/8"),
    (1, 3, 0): F("-13"), (0, 4, 0): F("-455/64"), (5, 0, 0): F("3876/125"),
    (4, 1, 0): F("68"), (3, 2, 0): F("91"), (2, 3, 0): F("91"),
    (1, 4, 0): F("68"), (0, 5, 0): F("3876/125"), (6, 0, 0): F("-33649/216"),
    (5, 1, 0): F("-399"), (4, 2, 0): F("-4845/8"), (3, 3, 0): F("-18496/27"),
    (2, 4, 0): F("-4845/8"), (1, 5, 0): F("-399"), (0, 6, 0): F("-33649/216"),
}

# Specializations of the refined function, w^1..w^6.
REFINED_X1_X2 = [F(2), F(-11, 4), F(272, 27), F(-1771, 32), F(47502, 125), F(-81158, 27)]
REFINED_X1 = [F(1), F(-7, 8), F(55, 27), F(-455, 64), F(3876, 125), F(-33649, 216)]
