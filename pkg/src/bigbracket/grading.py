"""Graded commutative function algebra of T*[2]A[1] with exact coefficients.

Generators, per base coordinate ``i`` in ``1..n`` and fibre index ``a`` in ``1..d``:

======  ======  ========  ========
name    parity  degree    bidegree
======  ======  ========  ========
x_i     even    0         (0, 0)
p^i     even    2         (1, 1)
xi_a    odd     1         (0, 1)
theta^a odd     1         (1, 0)
======  ======  ========  ========

A monomial keeps its odd factors as a bitmask in the canonical order
``xi_1 < ... < xi_d < theta^1 < ... < theta^d`` (bit ``a-1`` is ``xi_a``, bit
``d+a-1`` is ``theta^a``); signs are resolved once, when a product is formed.
Only polynomial coefficient functions in ``x`` are modelled.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

__all__ = [
    "AlgebraSignature",
    "Bidegree",
    "Generator",
    "Monomial",
    "SignatureError",
    "HomogeneityError",
    "SuperPolynomial",
    "as_rational",
    "normalize",
    "multiply",
    "bidegree_project",
]

KINDS = ("x", "p", "xi", "theta")


class SignatureError(ValueError):
    """Generator index out of range, or operands over different signatures."""


class HomogeneityError(ValueError):
    """An operation that needs a homogeneous element got an inhomogeneous one."""


def as_rational(value) -> Fraction:
    """Coerce ``value`` to an exact Fraction; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"exact rational coefficient required, got {type(value).__name__}")


@dataclass(frozen=True)
class AlgebraSignature:
    """Numbers of base coordinates ``n`` and of odd pairs ``d`` (the rank of A)."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 0 or self.d < 1:
            raise SignatureError(f"need n >= 0 and d >= 1, got n={self.n}, d={self.d}")

    def check(self, kind: str, index: int) -> None:
        top = self.n if kind in ("x", "p") else self.d
        if kind not in KINDS:
            raise SignatureError(f"unknown generator kind {kind!r}")
        if not 1 <= index <= top:
            raise SignatureError(f"{kind}{index} outside signature (n={self.n}, d={self.d})")

    def odd_bit(self, kind: str, index: int) -> int:
        return index - 1 if kind == "xi" else self.d + index - 1

    def zero(self) -> "SuperPolynomial":
        return SuperPolynomial(self, {})

    def one(self) -> "SuperPolynomial":
        return self.constant(1)

    def constant(self, c) -> "SuperPolynomial":
        return SuperPolynomial(self, {self.unit_monomial(): as_rational(c)})

    def unit_monomial(self) -> "Monomial":
        z = (0,) * self.n
        return Monomial(z, z, 0)

    def gen(self, kind: str, index: int) -> "SuperPolynomial":
        self.check(kind, index)
        if kind in ("x", "p"):
            e = tuple(1 if i == index - 1 else 0 for i in range(self.n))
            z = (0,) * self.n
            m = Monomial(e, z, 0) if kind == "x" else Monomial(z, e, 0)
        else:
            m = Monomial((0,) * self.n, (0,) * self.n, 1 << self.odd_bit(kind, index))
        return SuperPolynomial(self, {m: Fraction(1)})

    def x(self, i: int) -> "SuperPolynomial":
        return self.gen("x", i)

    def p(self, i: int) -> "SuperPolynomial":
        return self.gen("p", i)

    def xi(self, a: int) -> "SuperPolynomial":
        return self.gen("xi", a)

    def theta(self, a: int) -> "SuperPolynomial":
        return self.gen("theta", a)

    def generators(self) -> list["Generator"]:
        gens = [Generator("x", i) for i in range(1, self.n + 1)]
        gens += [Generator("p", i) for i in range(1, self.n + 1)]
        gens += [Generator("xi", a) for a in range(1, self.d + 1)]
        gens += [Generator("theta", a) for a in range(1, self.d + 1)]
        return gens


_GEN_RE = re.compile(r"^(x|p|xi|theta)(\d+)$")


class Generator(NamedTuple):
    kind: str
    index: int

    @property
    def odd(self) -> bool:
        return self.kind in ("xi", "theta")

    @classmethod
    def parse(cls, token: str) -> "Generator":
        m = _GEN_RE.match(token.strip())
        if not m:
            raise ValueError(f"not a generator name: {token!r}")
        return cls(m.group(1), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


class Bidegree(NamedTuple):
    k: int
    l: int

    @property
    def total(self) -> int:
        return self.k + self.l


class Monomial(NamedTuple):
    """Exponents of ``x`` and ``p`` plus the bitmask of odd factors."""

    x: tuple
    p: tuple
    odd: int

    def bidegree(self, d: int) -> Bidegree:
        ps = sum(self.p)
        low = (1 << d) - 1
        return Bidegree((self.odd >> d).bit_count() + ps, (self.odd & low).bit_count() + ps)

    def degree(self) -> int:
        return self.odd.bit_count() + 2 * sum(self.p)

    def parity(self) -> int:
        return self.odd.bit_count() & 1

    def words(self, d: int) -> list[str]:
        out = []
        for i, e in enumerate(self.x):
            out += [f"x{i + 1}"] * e
        for i, e in enumerate(self.p):
            out += [f"p{i + 1}"] * e
        for b in range(2 * d):
            if self.odd >> b & 1:
                out.append(f"xi{b + 1}" if b < d else f"theta{b - d + 1}")
        return out


def merge_sign(a: int, b: int) -> int:
    """Sign of reordering the odd word ``a`` followed by ``b`` into canonical order."""
    s = 0
    while b:
        low = b & -b
        s += (a & ~((low << 1) - 1)).bit_count()
        b ^= low
    return -1 if s & 1 else 1


def mul_monomials(m1: Monomial, m2: Monomial) -> tuple[int, Monomial | None]:
    if m1.odd & m2.odd:
        return 0, None
    sign = merge_sign(m1.odd, m2.odd)
    x = tuple(a + b for a, b in zip(m1.x, m2.x))
    p = tuple(a + b for a, b in zip(m1.p, m2.p))
    return sign, Monomial(x, p, m1.odd | m2.odd)


class SuperPolynomial:
    """Finite exact-rational combination of normalized monomials.

    Values are immutable: arithmetic always returns a new object and the term
    map never holds a zero coefficient, so equality of term maps is equality
    of elements.
    """

    __slots__ = ("signature", "_terms", "_hash")

    def __init__(self, signature: AlgebraSignature, terms: Mapping[Monomial, Fraction] | None = None):
        self.signature = signature
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = c if isinstance(c, Fraction) else as_rational(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, signature, terms):
        obj = cls.__new__(cls)
        obj.signature = signature
        obj._terms = terms
        obj._hash = None
        return obj

    # -- inspection --------------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def bidegrees(self) -> set[Bidegree]:
        d = self.signature.d
        return {m.bidegree(d) for m in self._terms}

    def degrees(self) -> set[int]:
        return {m.degree() for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Total degree of a homogeneous nonzero element."""
        degs = self.degrees()
        if len(degs) != 1:
            if not degs:
                raise HomogeneityError("the zero element has no degree")
            raise HomogeneityError(f"inhomogeneous element with degrees {sorted(degs)}")
        return degs.pop()

    def has_p(self) -> bool:
        return any(any(m.p) for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(self.signature.unit_monomial(), Fraction(0))

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "SuperPolynomial") -> None:
        if other.signature != self.signature:
            raise SignatureError(f"signature mismatch: {self.signature} vs {other.signature}")

    def _coerce(self, other) -> "SuperPolynomial":
        if isinstance(other, SuperPolynomial):
            self._check(other)
            return other
        return self.signature.constant(other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return SuperPolynomial._raw(self.signature, out)

    __radd__ = __add__

    def __neg__(self):
        return SuperPolynomial._raw(self.signature, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SuperPolynomial":
        c = as_rational(c)
        if not c:
            return self.signature.zero()
        return SuperPolynomial._raw(self.signature, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, SuperPolynomial):
            return multiply(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        return self.scale(1 / as_rational(other))

    def __pow__(self, k: int):
        out = self.signature.one()
        for _ in range(k):
            out = out * self
        return out

    def project(self, k: int, l: int) -> "SuperPolynomial":
        return bidegree_project(self, Bidegree(k, l))

    def degree_part(self, deg: int) -> "SuperPolynomial":
        return SuperPolynomial._raw(
            self.signature, {m: c for m, c in self._terms.items() if m.degree() == deg}
        )

    # -- comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, SuperPolynomial):
            return self.signature == other.signature and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == self.signature.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.signature, frozenset(self._terms.items())))
        return self._hash

    # -- display -----------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        d = self.signature.d
        return sorted(self._terms.items(), key=lambda mc: _monomial_sort_key(mc[0], d))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            word = "*".join(m.words(self.signature.d))
            if not word:
                parts.append(str(c))
            elif c == 1:
                parts.append(word)
            elif c == -1:
                parts.append("-" + word)
            else:
                parts.append(f"{c}*{word}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"SuperPolynomial({self})"


def _monomial_sort_key(m: Monomial, d: int):
    bits = tuple(b for b in range(2 * d) if m.odd >> b & 1)
    return (m.degree(), len(bits), bits, tuple(-e for e in m.p), tuple(-e for e in m.x))


def normalize(
    signature: AlgebraSignature,
    raw_terms: Iterable[tuple[Sequence, object]],
) -> SuperPolynomial:
    """Build a canonical element from ``(generator word, coefficient)`` pairs.

    A word is a sequence of :class:`Generator` (or names such as ``"xi2"``),
    read left to right as a product. Odd factors are sorted into canonical
    order with the sign of the permutation; a repeated odd factor kills the
    term.
    """
    out: dict[Monomial, Fraction] = {}
    n = signature.n
    for word, coeff in raw_terms:
        c = as_rational(coeff)
        x = [0] * n
        p = [0] * n
        odd = 0
        sign = 1
        dead = False
        for g in word:
            if isinstance(g, str):
                g = Generator.parse(g)
            kind, idx = g
            signature.check(kind, idx)
            if kind == "x":
                x[idx - 1] += 1
            elif kind == "p":
                p[idx - 1] += 1
            else:
                bit = 1 << signature.odd_bit(kind, idx)
                if odd & bit:
                    dead = True
                    continue
                # appending on the right: pass over every higher factor already present
                if (odd & ~((bit << 1) - 1)).bit_count() & 1:
                    sign = -sign
                odd |= bit
        if dead or not c:
            continue
        m = Monomial(tuple(x), tuple(p), odd)
        v = out.get(m, 0) + sign * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return SuperPolynomial._raw(signature, out)


def multiply(F: SuperPolynomial, G: SuperPolynomial) -> SuperPolynomial:
    """Graded commutative product."""
    F._check(G)
    out: dict[Monomial, Fraction] = {}
    for m1, c1 in F._terms.items():
        for m2, c2 in G._terms.items():
            sign, m = mul_monomials(m1, m2)
            if not sign:
                continue
            v = out.get(m, 0) + (c1 * c2 if sign > 0 else -c1 * c2)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return SuperPolynomial._raw(F.signature, out)


def bidegree_project(F: SuperPolynomial, bideg: tuple[int, int]) -> SuperPolynomial:
    """Sum of the terms of ``F`` of exactly the given bidegree."""
    k, l = bideg
    d = F.signature.d
    return SuperPolynomial._raw(
        F.signature, {m: c for m, c in F._terms.items() if m.bidegree(d) == (k, l)}
    )
