"""Branches of the scalar p-th root and their derivatives.

The (j+1)-st branch is ``f_j(z) = r**(1/p) * exp(1j*(theta + 2*pi*j)/p)`` with
``z = r*exp(1j*theta)`` and ``theta`` in ``(-pi, pi]``. Negative reals have
``theta = pi`` (never ``-pi``), which is what the negative-axis conjugacy rule
relies on.
"""

from __future__ import annotations

import cmath
import math

MAX_DERIVATIVE_ORDER = 64


def _check_branch(p: int, j: int) -> None:
    if int(p) != p or p < 2:
        raise ValueError(f"p must be an integer >= 2, got {p}")
    if int(j) != j or not 0 <= j <= p - 1:
        raise ValueError(f"branch index must lie in 0..{p - 1}, got {j}")


def polar(z: complex) -> tuple[float, float]:
    """Modulus and argument of ``z`` with the argument in ``(-pi, pi]``."""
    z = complex(z)
    if z == 0:
        raise ValueError("p-th root branches are undefined at z = 0")
    r = abs(z)
    theta = cmath.phase(z)
    if theta <= -math.pi:
        theta = math.pi
    return r, theta


def branch_value(z: complex, p: int, j: int) -> complex:
    """Value of the (j+1)-st branch of the p-th root at ``z``."""
    _check_branch(p, j)
    r, theta = polar(z)
    return r ** (1.0 / p) * cmath.exp(1j * (theta + 2 * math.pi * j) / p)


def branch_derivative(z: complex, p: int, j: int, k: int) -> complex:
    """k-th derivative of the (j+1)-st branch at ``z``.

    ``k = 0`` returns the branch value itself.
    """
    _check_branch(p, j)
    if int(k) != k or k < 0:
        raise ValueError("derivative order must be a nonnegative integer")
    if k > MAX_DERIVATIVE_ORDER:
        raise ValueError(f"derivative order capped at {MAX_DERIVATIVE_ORDER}")
    r, theta = polar(z)
    coeff = 1.0
    for i in range(k):
        coeff *= (1 - i * p) / p
    phase = cmath.exp(1j * (2 * math.pi * j + theta * (1 - k * p)) / p)
    return coeff * r ** ((1 - k * p) / p) * phase


def conjugate_branch_condition(j: int, j_prime: int, p: int) -> bool:
    """``f_j(z) == conj(f_j'(conj z))`` for non-real z iff ``j + j' = 0 (mod p)``."""
    _check_branch(p, j)
    _check_branch(p, j_prime)
    return (j + j_prime) % p == 0


def negative_axis_branch_condition(j: int, j_prime: int, p: int) -> bool:
    """On the negative real axis ``f_j == conj(f_j')`` iff ``j + j' = p - 1``."""
    _check_branch(p, j)
    _check_branch(p, j_prime)
    return j + j_prime == p - 1


def real_branches(lam: float, p: int) -> list[int]:
    """Branch indices giving a real value at the nonzero real ``lam``.

    Positive ``lam``: ``0``, plus ``p/2`` when p is even. Negative ``lam``:
    ``(p-1)/2`` when p is odd, none when p is even.
    """
    if lam == 0:
        raise ValueError("p-th root branches are undefined at 0")
    if lam > 0:
        return [0, p // 2] if p % 2 == 0 else [0]
    return [] if p % 2 == 0 else [(p - 1) // 2]
