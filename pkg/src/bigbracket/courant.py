"""Pre-Courant structures on A + A* as degree-3 functions.

Sections of A + A* are the degree-1 functions (``theta^a`` spans A, ``xi_a``
spans A*), degree-0 functions are polynomials in ``x``, and for a degree-3
function ``Theta``

    anchor:   rho(X).f = {{X, Theta}, f}
    Dorfman:  [X, Y]   = {{X, Theta}, Y}
    pairing:  <X, Y>   = {X, Y}
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bracket import bracket
from .grading import AlgebraSignature, HomogeneityError, SuperPolynomial

__all__ = [
    "PreCourant",
    "CourantDecomposition",
    "make_pre_courant",
    "is_courant",
    "decompose",
    "dorfman",
    "anchor_apply",
    "pairing",
    "check_pre_courant_axioms",
    "jacobiator",
    "section_basis",
    "section_vector",
    "section_from_vector",
    "check_section",
]

SPLIT_BIDEGREES = {(0, 3), (1, 2), (2, 1), (3, 0)}


def check_section(X: SuperPolynomial) -> SuperPolynomial:
    if X.is_zero():
        return X
    if X.degrees() != {1} or X.has_p():
        raise HomogeneityError(f"not a section (degree-1 function): {X}")
    return X


def _check_function(f: SuperPolynomial) -> SuperPolynomial:
    if not f.is_zero() and (f.degrees() != {0}):
        raise HomogeneityError(f"expected a degree-0 function of x, got {f}")
    return f


def section_basis(sig: AlgebraSignature) -> list[SuperPolynomial]:
    """``theta^1..theta^d`` (the A part) followed by ``xi_1..xi_d``."""
    return [sig.theta(a) for a in range(1, sig.d + 1)] + [sig.xi(a) for a in range(1, sig.d + 1)]


def section_vector(X: SuperPolynomial) -> list[SuperPolynomial]:
    """Coefficients of ``X`` in :func:`section_basis` order, as functions of ``x``."""
    check_section(X)
    sig = X.signature
    d = sig.d
    buckets: list[dict] = [{} for _ in range(2 * d)]
    for m, c in X.items():
        bit = m.odd.bit_length() - 1
        slot = bit - d if bit >= d else d + bit
        buckets[slot][m._replace(odd=0)] = c
    return [SuperPolynomial(sig, b) for b in buckets]


def section_from_vector(sig: AlgebraSignature, vec: Sequence[SuperPolynomial]) -> SuperPolynomial:
    out = sig.zero()
    for f, e in zip(vec, section_basis(sig)):
        if f:
            out = out + f * e
    return out


def pairing(X: SuperPolynomial, Y: SuperPolynomial) -> SuperPolynomial:
    return bracket(X, Y)


@dataclass(frozen=True)
class CourantDecomposition:
    mu: SuperPolynomial
    gamma: SuperPolynomial
    phi: SuperPolynomial
    psi: SuperPolynomial

    def total(self) -> SuperPolynomial:
        return self.mu + self.gamma + self.phi + self.psi


class PreCourant:
    """A degree-3 function on T*[2]A[1], i.e. a pre-Courant structure on A + A*."""

    __slots__ = ("theta", "_arrow_cache")

    def __init__(self, theta: SuperPolynomial):
        if not theta.is_zero():
            if theta.degrees() != {3}:
                raise HomogeneityError(f"pre-Courant structure must have degree 3, got {sorted(theta.degrees())}")
            extra = theta.bidegrees() - SPLIT_BIDEGREES
            if extra:
                raise HomogeneityError(f"unexpected bidegrees {sorted(extra)}")
        self.theta = theta
        self._arrow_cache: dict = {}

    @property
    def signature(self) -> AlgebraSignature:
        return self.theta.signature

    def arrow(self, X: SuperPolynomial) -> SuperPolynomial:
        """``{X, Theta}``, memoised per section."""
        got = self._arrow_cache.get(X)
        if got is None:
            got = bracket(X, self.theta)
            self._arrow_cache[X] = got
        return got

    def dorfman(self, X, Y) -> SuperPolynomial:
        return bracket(self.arrow(X), Y)

    def anchor(self, X, f) -> SuperPolynomial:
        return bracket(self.arrow(X), f)

    def __eq__(self, other):
        return isinstance(other, PreCourant) and self.theta == other.theta

    def __hash__(self):
        return hash(self.theta)

    def __repr__(self):
        return f"PreCourant({self.theta})"

    def __str__(self):
        return str(self.theta)


def _theta(obj) -> SuperPolynomial:
    return obj.theta if isinstance(obj, PreCourant) else obj


def _pc(obj) -> PreCourant:
    return obj if isinstance(obj, PreCourant) else PreCourant(obj)


def make_pre_courant(F: SuperPolynomial) -> PreCourant:
    return PreCourant(F)


def is_courant(theta) -> bool:
    """``{Theta, Theta} == 0``, decided exactly."""
    t = _theta(theta)
    return bracket(t, t).is_zero()


def decompose(theta) -> CourantDecomposition:
    t = _theta(theta)
    return CourantDecomposition(mu=t.project(1, 2), gamma=t.project(2, 1), phi=t.project(0, 3), psi=t.project(3, 0))


def dorfman(theta, X: SuperPolynomial, Y: SuperPolynomial) -> SuperPolynomial:
    check_section(X)
    check_section(Y)
    return _pc(theta).dorfman(X, Y)


def anchor_apply(theta, X: SuperPolynomial, f: SuperPolynomial) -> SuperPolynomial:
    check_section(X)
    _check_function(f)
    return _pc(theta).anchor(X, f)


def default_sections(sig: AlgebraSignature) -> list[SuperPolynomial]:
    """Basis sections, plus ``x_i`` multiples of them when the base is not a point."""
    basis = section_basis(sig)
    out = list(basis)
    for i in range(1, sig.n + 1):
        out += [sig.x(i) * e for e in basis]
    return out


def check_pre_courant_axioms(theta, sections: Iterable[SuperPolynomial] | None = None) -> list[tuple[str, SuperPolynomial]]:
    """Residuals of both pre-Courant axioms over all ordered triples of sections."""
    pc = _pc(theta)
    secs = list(sections) if sections is not None else default_sections(pc.signature)
    out = []
    for (i, X), (j, Y), (k, Z) in itertools.product(enumerate(secs), repeat=3):
        lhs = pc.anchor(X, pairing(Y, Z))
        r1 = lhs - pairing(pc.dorfman(X, Y), Z) - pairing(Y, pc.dorfman(X, Z))
        r2 = lhs - pairing(X, pc.dorfman(Y, Z) + pc.dorfman(Z, Y))
        out.append((f"eq1({i},{j},{k})", r1))
        out.append((f"eq2({i},{j},{k})", r2))
    return out


def jacobiator(theta, X, Y, Z) -> SuperPolynomial:
    """``[X,[Y,Z]] - [[X,Y],Z] - [Y,[X,Z]]``."""
    pc = _pc(theta)
    return pc.dorfman(X, pc.dorfman(Y, Z)) - pc.dorfman(pc.dorfman(X, Y), Z) - pc.dorfman(Y, pc.dorfman(X, Z))
