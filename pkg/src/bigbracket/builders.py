"""Constructors for structures and tensors from structure constants and matrices.

Conventions (checked by the test-suite):

* ``lie_algebra_theta(c)`` gives ``mu`` with ``[theta^a, theta^b] = sum_c c[a][b][c] theta^c``;
* ``bialgebra_theta(c, cs)`` adds ``gamma`` with ``[xi_a, xi_b] = sum_c cs[a][b][c] xi_c``;
* ``anchor[a][i]`` is the component of ``rho(theta^a)`` along ``d/dx_i``;
* matrices act on column vectors: ``N[b][a]`` is the ``theta^b`` component of ``N theta^a``
  and ``pi[a][b]`` the ``theta^b`` component of ``pi# xi_a``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .courant import PreCourant
from .grading import AlgebraSignature, SuperPolynomial, as_rational
from .tensors import Endomorphism, TensorFunction, func_of

__all__ = [
    "structure_constants",
    "lie_algebra_theta",
    "bialgebra_theta",
    "lie_algebroid_theta",
    "tangent_theta",
    "j_pi",
    "j_omega",
    "i_n",
    "j_general",
    "id_a",
    "maurer_cartan_residual",
]


def _coef(sig: AlgebraSignature, v) -> SuperPolynomial:
    return v if isinstance(v, SuperPolynomial) else sig.constant(as_rational(v))


def structure_constants(d: int, brackets: dict) -> list:
    """Dense ``c[a][b][c]`` (0-based) from ``{(a, b): {c: value}}`` with 1-based keys.

    Only ``a < b`` need be given; the rest follows by antisymmetry.
    """
    c = [[[0] * d for _ in range(d)] for _ in range(d)]
    for (a, b), out in brackets.items():
        if a == b or not all(1 <= i <= d for i in (a, b, *out)):
            raise ValueError(f"bad structure constant key ({a},{b}) -> {sorted(out)} for d = {d}")
        for k, v in out.items():
            c[a - 1][b - 1][k - 1] = v
            c[b - 1][a - 1][k - 1] = -as_rational(v) if not isinstance(v, SuperPolynomial) else -v
    return c


def _check_antisymmetric(c, d):
    for a, b, k in itertools.product(range(d), repeat=3):
        if as_rational(c[a][b][k]) != -as_rational(c[b][a][k]):
            raise ValueError(f"structure constants not antisymmetric at ({a + 1},{b + 1};{k + 1})")


def _odd_cubic(sig: AlgebraSignature, c, lower, upper) -> SuperPolynomial:
    d = sig.d
    out = sig.zero()
    for a, b in itertools.combinations(range(d), 2):
        for k in range(d):
            v = c[a][b][k]
            if isinstance(v, SuperPolynomial) or as_rational(v):
                out = out + _coef(sig, v) * lower(b + 1) * lower(a + 1) * upper(k + 1)
    return out


def lie_algebra_theta(c: Sequence, n: int = 0) -> PreCourant:
    """``mu`` of a Lie algebra (or bracket on A) from constants ``c[a][b][k]``."""
    d = len(c)
    if all(not isinstance(v, SuperPolynomial) for r in c for s in r for v in s):
        _check_antisymmetric(c, d)
    sig = AlgebraSignature(n, d)
    return PreCourant(_odd_cubic(sig, c, sig.xi, sig.theta))


def bialgebra_theta(c: Sequence, c_star: Sequence) -> PreCourant:
    """``mu + gamma`` for brackets on A (``c``) and on A* (``c_star``)."""
    d = len(c)
    _check_antisymmetric(c, d)
    _check_antisymmetric(c_star, d)
    sig = AlgebraSignature(0, d)
    return PreCourant(_odd_cubic(sig, c, sig.xi, sig.theta) + _odd_cubic(sig, c_star, sig.theta, sig.xi))


def lie_algebroid_theta(sig: AlgebraSignature, anchor: Sequence, c: Sequence | None = None) -> PreCourant:
    """``mu`` of a bracket on A with an anchor; entries may be polynomials in x."""
    out = sig.zero()
    for a in range(sig.d):
        for i in range(sig.n):
            v = _coef(sig, anchor[a][i])
            if v:
                out = out + v * sig.p(i + 1) * sig.xi(a + 1)
    if c is not None:
        out = out + _odd_cubic(sig, c, sig.xi, sig.theta)
    return PreCourant(out)


def tangent_theta(n: int) -> PreCourant:
    """Standard Courant algebroid TM + T*M over R^n: ``mu = sum_i p^i xi_i``."""
    sig = AlgebraSignature(n, n)
    return lie_algebroid_theta(sig, [[1 if i == a else 0 for i in range(n)] for a in range(n)])


def _sig(sig_or_d) -> AlgebraSignature:
    return sig_or_d if isinstance(sig_or_d, AlgebraSignature) else AlgebraSignature(0, sig_or_d)


def j_general(sig_or_d, N=None, pi=None, omega=None) -> TensorFunction:
    """Skew tensor ``(N, pi#; omega_flat, -N*)``."""
    sig = _sig(sig_or_d)
    conv = lambda m: None if m is None else [[_coef(sig, v) for v in r] for r in m]
    E = Endomorphism.from_blocks(sig, conv(N), conv(pi), conv(omega))
    return TensorFunction(func_of(E))


def j_pi(sig_or_d, pi) -> TensorFunction:
    return j_general(sig_or_d, pi=pi)


def j_omega(sig_or_d, omega) -> TensorFunction:
    return j_general(sig_or_d, omega=omega)


def i_n(sig_or_d, N) -> TensorFunction:
    return j_general(sig_or_d, N=N)


def id_a(sig_or_d) -> TensorFunction:
    """The function ``sum_a xi_a theta^a`` of ``diag(id_A, -id_A*)``."""
    sig = _sig(sig_or_d)
    out = sig.zero()
    for a in range(1, sig.d + 1):
        out = out + sig.xi(a) * sig.theta(a)
    return TensorFunction(out)


def maurer_cartan_residual(mu, gamma, pi) -> SuperPolynomial:
    """``{pi, gamma} - 1/2 {pi, {pi, mu}}`` for a bivector ``pi`` (a function of bidegree (2,0)).

    It vanishes exactly when ``1/2 id + pi`` is deforming for ``mu + gamma`` (with ``eta = 1/4``).
    """
    from .bracket import bracket
    m, g = _poly(mu), _poly(gamma)
    p = pi.value if isinstance(pi, TensorFunction) else pi
    return bracket(p, g) - bracket(p, bracket(p, m)).scale(Fraction(1, 2))


def _poly(obj) -> SuperPolynomial:
    return obj.theta if isinstance(obj, PreCourant) else obj
