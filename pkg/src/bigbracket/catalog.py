"""Builtin structures with known classifications.

Each example carries its Theta, named tensors, the default role assignment
``I``/``J`` and the properties the engine is expected to report for it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .builders import (
    bialgebra_theta,
    i_n,
    j_general,
    j_pi,
    lie_algebra_theta,
    structure_constants,
    tangent_theta,
)
from .courant import PreCourant
from .grading import AlgebraSignature, SuperPolynomial
from .tensors import TensorFunction

__all__ = ["Example", "builtin_examples", "get_example", "quaternion_left"]


@dataclass
class Example:
    name: str
    summary: str
    theta: PreCourant
    tensors: dict
    roles: dict
    expected: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    @property
    def signature(self) -> AlgebraSignature:
        return self.theta.signature

    @property
    def I(self) -> Optional[TensorFunction]:
        return self.tensors.get(self.roles.get("I"))

    @property
    def J(self) -> Optional[TensorFunction]:
        return self.tensors.get(self.roles.get("J"))


def _qmul(a, b):
    return (
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    )


def quaternion_left(q) -> list:
    """Matrix of ``v -> q v`` on the quaternions in the basis 1, i, j, k."""
    basis = [tuple(int(i == j) for i in range(4)) for j in range(4)]
    cols = [_qmul(q, e) for e in basis]
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def _heisenberg() -> Example:
    c = structure_constants(3, {(1, 2): {3: 1}})
    N = [[0, 0, 0], [0, 0, 0], [1, 0, 0]]
    I = i_n(3, N)
    return Example(
        "heisenberg-central",
        "Heisenberg algebra with N e1 = e3 (N^2 = 0, centre valued); (I_N, I_N) is Poisson-Nijenhuis",
        lie_algebra_theta(c),
        {"N": I},
        {"I": "N", "J": "N"},
        {"courant": True, "pair_class": "Poisson-Nijenhuis", "nijenhuis_I": True, "poisson_J": True, "eta": Fraction(0)},
    )


def _pn_affine() -> Example:
    c = structure_constants(3, {(1, 2): {2: 1}})
    pi = [[0, -1, 0], [1, 0, 0], [0, 0, 0]]
    N = [[-1, 0, 0], [0, -1, 0], [0, 0, 1]]
    return Example(
        "pn-affine-3d",
        "aff(1) + R with the Poisson bivector e1^e2 and N = diag(-1,-1,1), N^2 = id",
        lie_algebra_theta(c),
        {"IN": i_n(3, N), "Jpi": j_pi(3, pi)},
        {"I": "IN", "J": "Jpi"},
        {"courant": True, "pair_class": "Poisson-Nijenhuis", "nijenhuis_I": True, "poisson_J": True, "alpha": Fraction(1), "lambda0": Fraction(0)},
    )


def _mc2() -> Example:
    c = structure_constants(2, {(1, 2): {2: 1}})
    cs = structure_constants(2, {(1, 2): {1: -1, 2: -1}})
    half = Fraction(1, 2)
    pi = [[0, 1], [-1, 0]]
    theta = bialgebra_theta(c, cs)
    return Example(
        "maurer-cartan-2d",
        "Lie bialgebra on aff(1); J = 1/2 id_A + pi is deforming with eta = 1/4",
        theta,
        {"J": j_general(2, N=[[half, 0], [0, half]], pi=pi), "Jpi": j_pi(2, pi)},
        {"I": None, "J": "J"},
        {"courant": True, "eta": Fraction(1, 4)},
        {"mu": lie_algebra_theta(c).theta, "gamma": theta.theta - lie_algebra_theta(c).theta, "pi": j_pi(2, pi)},
    )


def _mc3() -> Example:
    c = structure_constants(3, {(1, 2): {2: 1}})
    cs = structure_constants(3, {(1, 2): {1: -1, 2: -1}})
    half = Fraction(1, 2)
    pi = [[0, 1, -1], [-1, 0, 0], [1, 0, 0]]
    theta = bialgebra_theta(c, cs)
    mu = lie_algebra_theta(c).theta
    return Example(
        "maurer-cartan-3d",
        "Lie bialgebra on aff(1) + R with a non-Poisson pi solving the Maurer-Cartan equation",
        theta,
        {"J": j_general(3, N=[[half, 0, 0], [0, half, 0], [0, 0, half]], pi=pi), "Jpi": j_pi(3, pi)},
        {"I": None, "J": "J"},
        {"courant": True, "eta": Fraction(1, 4), "pi_poisson": False},
        {"mu": mu, "gamma": theta.theta - mu, "pi": j_pi(3, pi)},
    )


def _hypercomplex() -> Example:
    c = structure_constants(4, {(2, 3): {4: 1}, (3, 4): {2: 1}, (2, 4): {3: -1}})
    I = i_n(4, quaternion_left((0, 1, 0, 0)))
    J = i_n(4, quaternion_left((0, 0, 1, 0)))
    return Example(
        "hypercomplex-u2",
        "u(2) = R + su(2) with left multiplication by i and j on the quaternions",
        lie_algebra_theta(c),
        {"Ii": I, "Ij": J},
        {"I": "Ii", "J": "Ij"},
        {"courant": True, "pair_class": "deforming-Nijenhuis", "nijenhuis_I": True, "nijenhuis_J": True, "eta": Fraction(-1), "alpha": Fraction(-1), "lambda0": Fraction(-4)},
    )


def _tangent_plane() -> Example:
    theta = tangent_theta(2)
    sig = theta.signature
    f = sig.x(1) * sig.x(1) + sig.x(2)
    zero = sig.zero()
    return Example(
        "tangent-plane-pn",
        "TR^2 + T*R^2 with N = id and the Poisson bivector (x1^2 + x2) d1^d2",
        theta,
        {"IN": i_n(sig, [[1, 0], [0, 1]]), "Jpi": j_pi(sig, [[zero, f], [-f, zero]])},
        {"I": "IN", "J": "Jpi"},
        {"courant": True, "pair_class": "Poisson-Nijenhuis", "nijenhuis_I": True, "poisson_J": True, "alpha": Fraction(1)},
    )


def _abelian_zero() -> Example:
    sig = AlgebraSignature(0, 2)
    return Example(
        "abelian-zero",
        "Theta = 0 on R^2 + R^2*; every skew pair is degenerate",
        PreCourant(sig.zero()),
        {"IN": i_n(2, [[1, 0], [0, 1]]), "Jpi": j_pi(2, [[0, 1], [-1, 0]])},
        {"I": "IN", "J": "Jpi"},
        {"courant": True, "pair_class": "Poisson-Nijenhuis", "eta": Fraction(0)},
    )


_BUILDERS = [_heisenberg, _pn_affine, _mc2, _mc3, _hypercomplex, _tangent_plane, _abelian_zero]


def builtin_examples() -> list[Example]:
    return [b() for b in _BUILDERS]


def get_example(name: str) -> Example:
    for b in _BUILDERS:
        ex = b()
        if ex.name == name:
            return ex
    raise KeyError(f"no builtin example named {name!r}")
