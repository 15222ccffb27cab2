"""The big bracket: canonical Poisson bracket of bidegree (-1, -1).

On generators ``{p^i, x_i} = {theta^a, xi_a} = 1``; graded antisymmetry then
forces ``{x_i, p^i} = -1`` and ``{xi_a, theta^a} = +1``. For monomials the
bracket is

    {F, G} = sum_i  dF/dp^i  dG/dx_i  -  dF/dx_i  dG/dp^i
           + sum_a (F d/dtheta^a)(d/dxi_a G) + (F d/dxi_a)(d/dtheta^a G)

with right derivatives on ``F`` and left derivatives on ``G``.
"""
from __future__ import annotations

from fractions import Fraction

from .grading import Generator, Monomial, SuperPolynomial, mul_monomials

__all__ = ["bracket", "left_partial", "right_partial"]


def _even_partial(m: Monomial, field: str, i: int) -> tuple[int, Monomial | None]:
    exps = getattr(m, field)
    e = exps[i]
    if not e:
        return 0, None
    new = exps[:i] + (e - 1,) + exps[i + 1:]
    return e, m._replace(**{field: new})


def _odd_index(F: SuperPolynomial, g: Generator) -> int:
    F.signature.check(g.kind, g.index)
    return F.signature.odd_bit(g.kind, g.index)


def left_partial(F: SuperPolynomial, g: Generator | str) -> SuperPolynomial:
    """Derivative in ``g``; odd ``g`` is brought to the front of each monomial first."""
    if isinstance(g, str):
        g = Generator.parse(g)
    out = {}
    if not g.odd:
        F.signature.check(g.kind, g.index)
        field = g.kind
        for m, c in F.items():
            e, m2 = _even_partial(m, field, g.index - 1)
            if e:
                out[m2] = out.get(m2, 0) + e * c
        return SuperPolynomial(F.signature, out)
    bit = _odd_index(F, g)
    mask = 1 << bit
    for m, c in F.items():
        if m.odd & mask:
            sign = -1 if (m.odd & (mask - 1)).bit_count() & 1 else 1
            m2 = m._replace(odd=m.odd ^ mask)
            out[m2] = out.get(m2, 0) + sign * c
    return SuperPolynomial(F.signature, out)


def right_partial(F: SuperPolynomial, g: Generator | str) -> SuperPolynomial:
    """Derivative in ``g`` acting from the right."""
    if isinstance(g, str):
        g = Generator.parse(g)
    if not g.odd:
        return left_partial(F, g)
    bit = _odd_index(F, g)
    mask = 1 << bit
    out = {}
    for m, c in F.items():
        if m.odd & mask:
            sign = -1 if (m.odd >> (bit + 1)).bit_count() & 1 else 1
            m2 = m._replace(odd=m.odd ^ mask)
            out[m2] = out.get(m2, 0) + sign * c
    return SuperPolynomial(F.signature, out)


def _accumulate(out, sign_a, m_a, sign_b, m_b, coeff):
    sign, m = mul_monomials(m_a, m_b)
    if not sign:
        return
    v = out.get(m, 0) + sign * sign_a * sign_b * coeff
    if v:
        out[m] = v
    else:
        out.pop(m, None)


def _bracket_monomials(out, m1: Monomial, c1: Fraction, m2: Monomial, c2: Fraction, n: int, d: int):
    c = c1 * c2
    for i in range(n):
        if m1.p[i] and m2.x[i]:
            e1, a = _even_partial(m1, "p", i)
            e2, b = _even_partial(m2, "x", i)
            _accumulate(out, 1, a, 1, b, e1 * e2 * c)
        if m1.x[i] and m2.p[i]:
            e1, a = _even_partial(m1, "x", i)
            e2, b = _even_partial(m2, "p", i)
            _accumulate(out, 1, a, 1, b, -e1 * e2 * c)
    o1, o2 = m1.odd, m2.odd
    if not (o1 and o2):
        return
    for a in range(d):
        xi = 1 << a
        th = 1 << (d + a)
        for right, left in ((th, xi), (xi, th)):
            if o1 & right and o2 & left:
                s1 = -1 if (o1 & ~((right << 1) - 1)).bit_count() & 1 else 1
                s2 = -1 if (o2 & (left - 1)).bit_count() & 1 else 1
                _accumulate(out, s1, m1._replace(odd=o1 ^ right), s2, m2._replace(odd=o2 ^ left), c)


def bracket(F: SuperPolynomial, G: SuperPolynomial) -> SuperPolynomial:
    """Big bracket ``{F, G}``; bilinear, of degree -2 and bidegree (-1, -1)."""
    F._check(G)
    sig = F.signature
    out: dict = {}
    for m1, c1 in F.items():
        for m2, c2 in G.items():
            _bracket_monomials(out, m1, c1, m2, c2, sig.n, sig.d)
    return SuperPolynomial._raw(sig, out)
