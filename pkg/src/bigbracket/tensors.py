"""(1,1)-tensors on A + A*: matrices, degree-2 functions, deformations and torsions.

An :class:`Endomorphism` is a ``2d x 2d`` matrix of polynomials in ``x`` acting
on coefficient vectors in the basis ``theta^1..theta^d, xi_1..xi_d``; in block
form ``(N, pi#; omega_flat, S)``. A skew tensor is also a degree-2 function
``J`` and acts on sections by ``J X = {X, J}``, which is the sign that makes
``{{X, {J, Theta}}, Y} = [JX, Y] + [X, JY] - J[X, Y]``.

Bracket operators (:class:`BracketOperator`) carry the Dorfman bracket of a
structure and its deformations by arbitrary, not necessarily skew,
endomorphisms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .bracket import bracket
from .courant import PreCourant, section_basis, section_from_vector, section_vector
from .grading import AlgebraSignature, HomogeneityError, SuperPolynomial, as_rational

__all__ = [
    "Endomorphism",
    "TensorFunction",
    "NotSkewError",
    "SquareError",
    "BracketOperator",
    "DorfmanOperator",
    "DeformedOperator",
    "PairClassification",
    "endo_of",
    "func_of",
    "is_skew",
    "compose",
    "power",
    "deform_theta",
    "deform_word",
    "deform_bracket",
    "torsion",
    "torsion_via_deformations",
    "torsion_function",
    "concomitant",
    "concomitant_map",
    "nijenhuis_concomitant",
    "function_map",
    "anti_commute",
    "is_nijenhuis",
    "deforming_constant",
    "classify_pair",
    "harness_sections",
    "bilinear_residuals",
    "proportionality",
    "square_constant",
    "as_endo",
    "as_function",
    "as_operator",
    "deform_bracket_word",
    "PAIR_CLASSES",
]


class NotSkewError(ValueError):
    """A skew-symmetric tensor was required."""


class SquareError(ValueError):
    """``I o I`` is not the requested multiple of the identity."""


def _entry(sig: AlgebraSignature, v) -> SuperPolynomial:
    if isinstance(v, SuperPolynomial):
        if v.signature != sig:
            raise ValueError("entry over a different signature")
        if not v.is_zero() and (v.degrees() != {0}):
            raise HomogeneityError(f"matrix entries must be functions of x, got {v}")
        return v
    return sig.constant(as_rational(v))


class Endomorphism:
    """Bundle endomorphism of A + A* over the identity of the base."""

    __slots__ = ("signature", "matrix", "_hash")

    def __init__(self, signature: AlgebraSignature, rows: Sequence[Sequence]):
        size = 2 * signature.d
        if len(rows) != size or any(len(r) != size for r in rows):
            raise ValueError(f"expected a {size}x{size} matrix")
        self.signature = signature
        self.matrix = tuple(tuple(_entry(signature, v) for v in r) for r in rows)
        self._hash = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, sig: AlgebraSignature) -> "Endomorphism":
        s = 2 * sig.d
        return cls(sig, [[0] * s for _ in range(s)])

    @classmethod
    def identity(cls, sig: AlgebraSignature) -> "Endomorphism":
        return cls.scalar(sig, 1)

    @classmethod
    def scalar(cls, sig: AlgebraSignature, c) -> "Endomorphism":
        s = 2 * sig.d
        return cls(sig, [[c if i == j else 0 for j in range(s)] for i in range(s)])

    @classmethod
    def from_blocks(cls, sig: AlgebraSignature, N=None, pi=None, omega=None, S=None) -> "Endomorphism":
        """Assemble ``(N, pi#; omega_flat, S)``; missing blocks are zero, ``S`` defaults to ``-N*``."""
        d = sig.d
        z = [[0] * d for _ in range(d)]
        N = N if N is not None else z
        pi = pi if pi is not None else z
        omega = omega if omega is not None else z
        if S is None:
            S = [[-_entry(sig, N[j][i]) for j in range(d)] for i in range(d)]
        rows = [list(N[i]) + list(pi[i]) for i in range(d)] + [list(omega[i]) + list(S[i]) for i in range(d)]
        return cls(sig, rows)

    # -- structure ---------------------------------------------------------
    @property
    def size(self) -> int:
        return 2 * self.signature.d

    def blocks(self):
        d = self.signature.d
        M = self.matrix
        cut = lambda r0, c0: [list(M[r0 + i][c0:c0 + d]) for i in range(d)]
        return cut(0, 0), cut(0, d), cut(d, 0), cut(d, d)

    def is_constant(self) -> bool:
        return all(all(not any(m.x) for m, _ in e.items()) for r in self.matrix for e in r)

    def __call__(self, X: SuperPolynomial) -> SuperPolynomial:
        v = section_vector(X)
        out = []
        for row in self.matrix:
            acc = self.signature.zero()
            for e, c in zip(row, v):
                if e and c:
                    acc = acc + e * c
            out.append(acc)
        return section_from_vector(self.signature, out)

    def __matmul__(self, other: "Endomorphism") -> "Endomorphism":
        if not isinstance(other, Endomorphism):
            return NotImplemented
        if other.signature != self.signature:
            raise ValueError("signature mismatch")
        s = self.size
        A, B = self.matrix, other.matrix
        zero = self.signature.zero()
        rows = []
        for i in range(s):
            row = []
            for j in range(s):
                acc = zero
                for k in range(s):
                    if A[i][k] and B[k][j]:
                        acc = acc + A[i][k] * B[k][j]
                row.append(acc)
            rows.append(row)
        return Endomorphism(self.signature, rows)

    def _zip(self, other, op):
        return Endomorphism(
            self.signature, [[op(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)]
        )

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return Endomorphism(self.signature, [[-a for a in r] for r in self.matrix])

    def __rmul__(self, c):
        if isinstance(c, SuperPolynomial):
            return Endomorphism(self.signature, [[c * a for a in r] for r in self.matrix])
        c = as_rational(c)
        return Endomorphism(self.signature, [[a.scale(c) for a in r] for r in self.matrix])

    def __pow__(self, n: int) -> "Endomorphism":
        return power(self, n)

    def dual(self) -> "Endomorphism":
        """``J*`` with ``<u, J* v> = <J u, v>``; for this pairing ``J* = G M^T G``."""
        d = self.signature.d
        s = self.size
        flip = lambda i: i + d if i < d else i - d
        M = self.matrix
        return Endomorphism(self.signature, [[M[flip(j)][flip(i)] for j in range(s)] for i in range(s)])

    def is_zero(self) -> bool:
        return all(not e for r in self.matrix for e in r)

    def is_skew(self) -> bool:
        return (self + self.dual()).is_zero()

    def scalar_value(self) -> Optional[Fraction]:
        """``c`` if this is ``c * id`` with constant ``c``, else None."""
        s = self.size
        c = self.matrix[0][0]
        for i in range(s):
            for j in range(s):
                e = self.matrix[i][j]
                if i == j:
                    if e != c:
                        return None
                elif e:
                    return None
        if any(any(m.x) for m, _ in c.items()):
            return None
        return c.constant_term()

    def __eq__(self, other):
        return isinstance(other, Endomorphism) and self.signature == other.signature and self.matrix == other.matrix

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.matrix)
        return self._hash

    def __repr__(self):
        rows = "; ".join(", ".join(str(e) for e in r) for r in self.matrix)
        return f"Endomorphism([{rows}])"


def _skew_function_check(J: SuperPolynomial) -> SuperPolynomial:
    if not J.is_zero():
        if J.degrees() != {2} or J.has_p():
            raise HomogeneityError(f"a (1,1)-tensor is a degree-2 function without p: {J}")
    return J


class TensorFunction:
    """A skew (1,1)-tensor held as its degree-2 function ``N + pi + omega``."""

    __slots__ = ("value", "_endo")

    def __init__(self, value: SuperPolynomial):
        self.value = _skew_function_check(value)
        self._endo = None

    @property
    def signature(self) -> AlgebraSignature:
        return self.value.signature

    @property
    def endo(self) -> Endomorphism:
        if self._endo is None:
            self._endo = endo_of(self.value)
        return self._endo

    def __add__(self, other):
        return TensorFunction(self.value + as_function(other))

    def __sub__(self, other):
        return TensorFunction(self.value - as_function(other))

    def __neg__(self):
        return TensorFunction(-self.value)

    def __rmul__(self, c):
        return TensorFunction(self.value.scale(c))

    def __eq__(self, other):
        return isinstance(other, TensorFunction) and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"TensorFunction({self.value})"


def as_function(T) -> SuperPolynomial:
    if isinstance(T, TensorFunction):
        return T.value
    if isinstance(T, Endomorphism):
        return func_of(T)
    if isinstance(T, SuperPolynomial):
        return _skew_function_check(T)
    raise TypeError(f"not a tensor: {T!r}")


def as_endo(T) -> Endomorphism:
    if isinstance(T, Endomorphism):
        return T
    if isinstance(T, TensorFunction):
        return T.endo
    if isinstance(T, SuperPolynomial):
        return endo_of(T)
    raise TypeError(f"not a tensor: {T!r}")


def endo_of(J) -> Endomorphism:
    """Matrix of ``X -> {X, J}`` in the section basis."""
    J = J.value if isinstance(J, TensorFunction) else _skew_function_check(J)
    sig = J.signature
    cols = [section_vector(bracket(e, J)) for e in section_basis(sig)]
    s = 2 * sig.d
    return Endomorphism(sig, [[cols[j][i] for j in range(s)] for i in range(s)])


def func_of(E: Endomorphism) -> SuperPolynomial:
    """Degree-2 function of a skew endomorphism; inverse of :func:`endo_of`."""
    if not E.is_skew():
        raise NotSkewError("only skew-symmetric endomorphisms correspond to functions")
    sig = E.signature
    d = sig.d
    M = E.matrix
    out = sig.zero()
    for a in range(d):
        for b in range(d):
            if M[b][a]:
                out = out + M[b][a] * sig.xi(a + 1) * sig.theta(b + 1)
    for a, b in itertools.combinations(range(d), 2):
        if M[b][d + a]:
            out = out + M[b][d + a] * sig.theta(a + 1) * sig.theta(b + 1)
        if M[d + b][a]:
            out = out + M[d + b][a] * sig.xi(a + 1) * sig.xi(b + 1)
    return out


def is_skew(J) -> bool:
    return as_endo(J).is_skew() if not isinstance(J, Endomorphism) else J.is_skew()


def compose(E1, E2) -> Endomorphism:
    return as_endo(E1) @ as_endo(E2)


def power(E, n: int) -> Endomorphism:
    E = as_endo(E)
    if n < 0:
        raise ValueError("negative powers are not defined")
    out = Endomorphism.identity(E.signature)
    for _ in range(n):
        out = out @ E
    return out


# -- function-level deformation ----------------------------------------------

def _theta_poly(theta) -> SuperPolynomial:
    return theta.theta if isinstance(theta, PreCourant) else theta


def deform_theta(theta, J) -> PreCourant:
    """``Theta_J = {J, Theta}``."""
    return PreCourant(bracket(as_function(J), _theta_poly(theta)))


def deform_word(theta, word: Iterable) -> PreCourant:
    """``Theta_{T1, ..., Ts} = {Ts, ... {T1, Theta}}``."""
    out = _theta_poly(theta)
    for T in word:
        out = bracket(as_function(T), out)
    return PreCourant(out)


def function_map(F) -> Callable:
    """Read a degree-3 function as the bilinear map ``(X, Y) -> {{X, F}, Y}``."""
    F = _theta_poly(F)
    return lambda X, Y: bracket(bracket(X, F), Y)


# -- operator-level brackets -------------------------------------------------

class BracketOperator:
    """Bilinear bracket on sections; results are memoised."""

    signature: AlgebraSignature

    def __init__(self):
        self._cache: dict = {}

    def __call__(self, X: SuperPolynomial, Y: SuperPolynomial) -> SuperPolynomial:
        if not X or not Y:
            return self.signature.zero()
        key = (X, Y)
        got = self._cache.get(key)
        if got is None:
            got = self._compute(X, Y)
            self._cache[key] = got
        return got

    def _compute(self, X, Y):
        raise NotImplementedError

    def deformed(self, T) -> "DeformedOperator":
        return DeformedOperator(self, as_endo(T))


class DorfmanOperator(BracketOperator):
    def __init__(self, theta):
        super().__init__()
        self.pc = theta if isinstance(theta, PreCourant) else PreCourant(theta)
        self.signature = self.pc.signature

    def _compute(self, X, Y):
        return self.pc.dorfman(X, Y)


class DeformedOperator(BracketOperator):
    """``[X, Y]_T = [TX, Y] + [X, TY] - T[X, Y]``."""

    def __init__(self, base: BracketOperator, T: Endomorphism):
        super().__init__()
        self.base = base
        self.T = T
        self.signature = base.signature

    def _compute(self, X, Y):
        T, B = self.T, self.base
        return B(T(X), Y) + B(X, T(Y)) - T(B(X, Y))


def as_operator(obj) -> BracketOperator:
    if isinstance(obj, BracketOperator):
        return obj
    return DorfmanOperator(obj)


def deform_bracket(B, T) -> DeformedOperator:
    return as_operator(B).deformed(T)


def deform_bracket_word(B, word: Iterable) -> BracketOperator:
    out = as_operator(B)
    for T in word:
        out = out.deformed(T)
    return out


def torsion(B, T) -> Callable:
    """``T_B(X, Y) = [TX, TY] - T([X, Y]_T)``, as a bilinear map."""
    B = as_operator(B)
    T = as_endo(T)
    BT = B.deformed(T)
    return lambda X, Y: B(T(X), T(Y)) - T(BT(X, Y))


def torsion_via_deformations(B, T) -> Callable:
    """``1/2 ([X, Y]_{T,T} - [X, Y]_{T^2})``."""
    B = as_operator(B)
    T = as_endo(T)
    BTT = B.deformed(T).deformed(T)
    BT2 = B.deformed(T @ T)
    return lambda X, Y: (BTT(X, Y) - BT2(X, Y)).scale(Fraction(1, 2))


def square_constant(I) -> Optional[Fraction]:
    E = as_endo(I)
    return (E @ E).scalar_value()


def torsion_function(theta, I, alpha=None) -> SuperPolynomial:
    """``1/2 (Theta_{I,I} - alpha Theta)`` for skew ``I`` with ``I o I = alpha id``."""
    found = square_constant(I)
    if found is None:
        raise SquareError("I o I is not a constant multiple of the identity")
    if alpha is not None and as_rational(alpha) != found:
        raise SquareError(f"I o I = {found} id, not {alpha} id")
    t = _theta_poly(theta)
    f = as_function(I)
    return (bracket(f, bracket(f, t)) - t.scale(found)).scale(Fraction(1, 2))


def concomitant(theta, I, J) -> SuperPolynomial:
    """``C_Theta(I, J) = Theta_{I,J} + Theta_{J,I}``."""
    t = _theta_poly(theta)
    fi, fj = as_function(I), as_function(J)
    return bracket(fj, bracket(fi, t)) + bracket(fi, bracket(fj, t))


def concomitant_map(B, I, J) -> Callable:
    """``[X, Y]_{I,J} + [X, Y]_{J,I}``."""
    B = as_operator(B)
    I, J = as_endo(I), as_endo(J)
    BIJ = B.deformed(I).deformed(J)
    BJI = B.deformed(J).deformed(I)
    return lambda X, Y: BIJ(X, Y) + BJI(X, Y)


def nijenhuis_concomitant(B, I, J) -> Callable:
    B = as_operator(B)
    I, J = as_endo(I), as_endo(J)

    def N(X, Y):
        IX, JX, IY, JY = I(X), J(X), I(Y), J(Y)
        BXY = B(X, Y)
        return (
            B(IX, JY) - I(B(X, JY)) - J(B(IX, Y)) + I(J(BXY))
            + B(JX, IY) - J(B(X, IY)) - I(B(JX, Y)) + J(I(BXY))
        )

    return N


# -- predicates ----------------------------------------------------------------

def harness_sections(sig: AlgebraSignature) -> list[SuperPolynomial]:
    """Sections used to discharge "for all X, Y": the basis, and ``x_i`` times it."""
    basis = section_basis(sig)
    out = list(basis)
    for i in range(1, sig.n + 1):
        out += [sig.x(i) * e for e in basis]
    return out


def bilinear_residuals(f: Callable, g: Callable | None, sections: Sequence[SuperPolynomial]) -> list[tuple[tuple[int, int], SuperPolynomial]]:
    """Nonzero values of ``f - g`` (or of ``f``) over all ordered pairs."""
    out = []
    for (i, X), (j, Y) in itertools.product(enumerate(sections), repeat=2):
        r = f(X, Y) if g is None else f(X, Y) - g(X, Y)
        if r:
            out.append(((i, j), r))
    return out


def anti_commute(I, J) -> bool:
    I, J = as_endo(I), as_endo(J)
    return (I @ J + J @ I).is_zero()


def is_nijenhuis(B, I, sections: Sequence[SuperPolynomial] | None = None) -> bool:
    B = as_operator(B)
    secs = sections if sections is not None else harness_sections(B.signature)
    return not bilinear_residuals(torsion(B, I), None, secs)


def deforming_constant(theta, J) -> tuple[bool, Optional[Fraction]]:
    """Solve ``Theta_{J,J} = eta Theta``; returns ``(found, eta)``.

    When both sides vanish ``eta = 0`` by convention; when ``Theta = 0`` but
    ``Theta_{J,J} != 0`` there is no solution.
    """
    t = _theta_poly(theta)
    f = as_function(J)
    tjj = bracket(f, bracket(f, t))
    return proportionality(tjj, t)


def proportionality(lhs: SuperPolynomial, rhs: SuperPolynomial) -> tuple[bool, Optional[Fraction]]:
    """Find ``c`` with ``lhs = c * rhs`` (``c = 0`` if both vanish)."""
    if rhs.is_zero():
        return (True, Fraction(0)) if lhs.is_zero() else (False, None)
    m, c = next(iter(rhs.items()))
    eta = lhs.terms.get(m, Fraction(0)) / c
    if lhs == rhs.scale(eta):
        return True, eta
    return False, None


PAIR_CLASSES = ("none", "compatible", "deforming-Nijenhuis", "Poisson-Nijenhuis", "Nijenhuis")


@dataclass(frozen=True)
class PairClassification:
    """Predicates for a pair of skew tensors; ``J`` is the deforming/Poisson candidate."""

    anti_commute: bool
    anti_commute_wrt_theta: bool
    compatible_pair: bool
    nijenhuis_I: bool
    nijenhuis_J: bool
    deforming_eta: Optional[Fraction]
    deforming_J: bool
    poisson_J: bool
    pair_class: str
    degenerate_theta: bool

    def as_dict(self) -> dict:
        return {
            "anti_commute": self.anti_commute,
            "anti_commute_wrt_theta": self.anti_commute_wrt_theta,
            "compatible_pair": self.compatible_pair,
            "nijenhuis_I": self.nijenhuis_I,
            "nijenhuis_J": self.nijenhuis_J,
            "deforming_J": self.deforming_J,
            "deforming_eta": None if self.deforming_eta is None else str(self.deforming_eta),
            "poisson_J": self.poisson_J,
            "pair_class": self.pair_class,
            "degenerate_theta": self.degenerate_theta,
        }


def classify_pair(theta, I, J, sections=None) -> PairClassification:
    """Classify the pair of skew tensors ``I`` (Nijenhuis side) and ``J``."""
    t = _theta_poly(theta)
    if not (is_skew(I) and is_skew(J)):
        raise NotSkewError("pair classification is defined for skew tensors")
    ac = anti_commute(I, J)
    acw = concomitant(t, I, J).is_zero()
    compat = ac and acw
    op = DorfmanOperator(t)
    nI = is_nijenhuis(op, I, sections)
    nJ = is_nijenhuis(op, J, sections)
    found, eta = deforming_constant(t, J)
    f = as_function(J)
    poisson = bracket(f, bracket(f, t)).is_zero()
    if not compat:
        cls = "none"
    elif poisson and nI:
        cls = "Poisson-Nijenhuis"
    elif found and nI:
        cls = "deforming-Nijenhuis"
    elif nI and nJ:
        cls = "Nijenhuis"
    else:
        cls = "compatible"
    return PairClassification(
        anti_commute=ac,
        anti_commute_wrt_theta=acw,
        compatible_pair=compat,
        nijenhuis_I=nI,
        nijenhuis_J=nJ,
        deforming_eta=eta,
        deforming_J=found,
        poisson_J=poisson,
        pair_class=cls,
        degenerate_theta=t.is_zero(),
    )
