"""Taylor polynomials of sqrt(1 - x) and their squaring defect."""

from fractions import Fraction
from typing import List

from algebra.polynomial import Polynomial


def binomial_half(k: int) -> Fraction:
    """Generalized binomial coefficient binom(1/2, k)"""
    if k < 0:
        raise ValueError("k must be nonnegative")
    value = Fraction(1)
    for i in range(k):
        value *= (Fraction(1, 2) - i) / (i + 1)
    return value


def taylor_sqrt(n: int) -> Polynomial:
    """t_n(x) = sum_{k<=n} binom(1/2, k) (-x)^k"""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return Polynomial({(k,): binomial_half(k) * (-1) ** k for k in range(n + 1)}, 1)


def sqrt_defect(n: int) -> Polynomial:
    """p_n(x) = t_n(x)^2 - (1 - x); its coefficients are nonnegative dyadic rationals"""
    if n < 1:
        raise ValueError("n must be at least 1")
    t = taylor_sqrt(n)
    return t * t - Polynomial({(0,): 1, (1,): -1}, 1)


def defect_coefficients(n: int) -> List[Fraction]:
    """Dense coefficient list of sqrt_defect(n), index = power of x"""
    p = sqrt_defect(n)
    coeffs = [Fraction(0)] * (2 * n + 1)
    for (k,), c in p.terms.items():
        coeffs[k] = c
    return coeffs


def is_dyadic(value: Fraction) -> bool:
    d = value.denominator
    return d & (d - 1) == 0
