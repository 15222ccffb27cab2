"""Random instances and independent oracles shared by the tests."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from bigbracket.grading import AlgebraSignature, Generator, SuperPolynomial, normalize
from bigbracket.tensors import Endomorphism

# -- Lie algebras by structure constants (1-based keys, a < b) --------------------

LIE_ALGEBRAS = {
    "heisenberg": (3, {(1, 2): {3: 1}}),
    "sl2": (3, {(1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1}}),  # h, e, f
    "so3": (3, {(1, 2): {3: 1}, (2, 3): {1: 1}, (1, 3): {2: -1}}),
    "aff1": (2, {(1, 2): {2: 1}}),
    "aff1+R": (3, {(1, 2): {2: 1}}),
    "u2": (4, {(2, 3): {4: 1}, (3, 4): {2: 1}, (2, 4): {3: -1}}),
    "abelian2": (2, {}),
    "r3": (3, {(1, 2): {2: 1}, (1, 3): {3: 1}}),
}


def dense(d, table):
    c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    for (a, b), out in table.items():
        for k, v in out.items():
            c[a - 1][b - 1][k - 1] = Fraction(v)
            c[b - 1][a - 1][k - 1] = -Fraction(v)
    return c


def lie_bracket(c, u, v):
    d = len(c)
    return [sum(c[a][b][k] * u[a] * v[b] for a in range(d) for b in range(d)) for k in range(d)]


def jacobi_holds(c) -> bool:
    d = len(c)
    e = [[Fraction(int(i == j)) for i in range(d)] for j in range(d)]
    for x, y, z in itertools.combinations(range(d), 3):
        X, Y, Z = e[x], e[y], e[z]
        t = [a + b + cc for a, b, cc in zip(
            lie_bracket(c, X, lie_bracket(c, Y, Z)),
            lie_bracket(c, Y, lie_bracket(c, Z, X)),
            lie_bracket(c, Z, lie_bracket(c, X, Y)),
        )]
        if any(t):
            return False
    return True


def matvec(M, v):
    return [sum(Fraction(M[i][j]) * v[j] for j in range(len(v))) for i in range(len(M))]


def matmul(A, B):
    n = len(A)
    return [[sum(Fraction(A[i][k]) * Fraction(B[k][j]) for k in range(n)) for j in range(n)] for i in range(n)]


def lie_torsion_zero(c, N) -> bool:
    """Classical ``[Nx,Ny] - N([Nx,y] + [x,Ny] - N[x,y])`` on basis pairs."""
    d = len(c)
    e = [[Fraction(int(i == j)) for i in range(d)] for j in range(d)]
    for x, y in itertools.product(range(d), repeat=2):
        X, Y = e[x], e[y]
        NX, NY = matvec(N, X), matvec(N, Y)
        inner = [a + b - cc for a, b, cc in zip(lie_bracket(c, NX, Y), lie_bracket(c, X, NY), matvec(N, lie_bracket(c, X, Y)))]
        t = [a - b for a, b in zip(lie_bracket(c, NX, NY), matvec(N, inner))]
        if any(t):
            return False
    return True


# -- random elements -----------------------------------------------------------------

def rand_coef(rng: random.Random) -> Fraction:
    return Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3]))


def random_homogeneous(rng: random.Random, sig: AlgebraSignature, degree: int, max_terms: int = 3, max_x: int = 2) -> SuperPolynomial:
    odd = [Generator("xi", a) for a in range(1, sig.d + 1)] + [Generator("theta", a) for a in range(1, sig.d + 1)]
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        n_p = rng.randint(0, degree // 2) if sig.n else 0
        n_odd = degree - 2 * n_p
        if n_odd > len(odd):
            continue
        word = rng.sample(odd, n_odd)
        word += [Generator("p", rng.randint(1, sig.n)) for _ in range(n_p)]
        if sig.n:
            word += [Generator("x", rng.randint(1, sig.n)) for _ in range(rng.randint(0, max_x))]
        rng.shuffle(word)
        terms.append((word, rand_coef(rng)))
    return normalize(sig, terms)


@st.composite
def signatures(draw, max_n=2, max_d=4):
    return AlgebraSignature(draw(st.integers(0, max_n)), draw(st.integers(1, max_d)))


@st.composite
def homogeneous(draw, sig, degree, max_terms=3):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_homogeneous(random.Random(seed), sig, degree, max_terms)


def skew_matrix(rng, d, lo=-2, hi=2):
    m = [[0] * d for _ in range(d)]
    for i, j in itertools.combinations(range(d), 2):
        v = rng.randint(lo, hi)
        m[i][j], m[j][i] = v, -v
    return m


# -- the group O(d,d) of the pairing, generated by B- and beta-transforms and GL(d) --------

def _ident(d):
    return [[int(i == j) for j in range(d)] for i in range(d)]


def _transpose(M):
    return [list(r) for r in zip(*M)]


def odd_element(rng: random.Random, sig: AlgebraSignature):
    d = sig.d
    I = _ident(d)
    kind = rng.choice(["B", "beta", "A"])
    if kind in ("B", "beta") and d >= 2:
        b = skew_matrix(rng, d, -1, 1)
        nb = [[-v for v in r] for r in b]
        if kind == "B":
            return Endomorphism.from_blocks(sig, I, None, b, I), Endomorphism.from_blocks(sig, I, None, nb, I)
        return Endomorphism.from_blocks(sig, I, b, None, I), Endomorphism.from_blocks(sig, I, nb, None, I)
    if d == 1:
        s = rng.choice([1, -1, 2])
        A, Ai = [[s]], [[Fraction(1, s)]]
    else:
        i, j = rng.sample(range(d), 2)
        cc = rng.choice([-1, 1, 2])
        A, Ai = _ident(d), _ident(d)
        A[i][j], Ai[i][j] = cc, -cc
    return (
        Endomorphism.from_blocks(sig, A, None, None, _transpose(Ai)),
        Endomorphism.from_blocks(sig, Ai, None, None, _transpose(A)),
    )


def random_orthogonal(rng: random.Random, sig: AlgebraSignature, steps: int = 3):
    """A random element ``g`` of O(d,d) with its inverse."""
    g = gi = Endomorphism.identity(sig)
    for _ in range(steps):
        e, ei = odd_element(rng, sig)
        g, gi = g @ e, ei @ gi
    return g, gi


def base_square_tensor(sig: AlgebraSignature, alpha: Fraction) -> Endomorphism:
    """A skew tensor with square ``alpha id`` (``alpha`` in {0, 1, -1, 1/4})."""
    d = sig.d
    if alpha == 0:
        pi = [[0] * d for _ in range(d)]
        if d >= 2:
            pi[0][1], pi[1][0] = 1, -1
            return Endomorphism.from_blocks(sig, None, pi)
        return Endomorphism.zero(sig)
    if alpha == -1:
        if d % 2:
            raise ValueError("a skew complex structure needs even d")
        N = [[0] * d for _ in range(d)]
        for i in range(0, d, 2):
            N[i][i + 1], N[i + 1][i] = -1, 1
        return Endomorphism.from_blocks(sig, N)
    root = {Fraction(1): 1, Fraction(1, 4): Fraction(1, 2)}[Fraction(alpha)]
    N = [[root if i == j else 0 for j in range(d)] for i in range(d)]
    return Endomorphism.from_blocks(sig, N)


def schouten_square_zero(c, pi) -> bool:
    """``[pi, pi] = 0`` for a bivector on a Lie algebra, via the cyclic sum of ``pi pi c``."""
    d = len(c)
    for i, j, k in itertools.combinations(range(d), 3):
        s = Fraction(0)
        for a, b, e in ((i, j, k), (j, k, i), (k, i, j)):
            s += sum(Fraction(pi[l][a]) * pi[m][b] * c[l][m][e] for l in range(d) for m in range(d))
        if s:
            return False
    return True


def random_square_matrix(rng: random.Random, d: int, alpha: int):
    """``P D P^-1`` with ``D^2 = alpha id`` (``alpha`` in {0, 1, -1}); ``alpha = -1`` needs even d."""
    D = [[Fraction(0)] * d for _ in range(d)]
    if alpha == 1:
        for i in range(d):
            D[i][i] = Fraction(rng.choice([1, -1]))
    elif alpha == -1:
        for i in range(0, d, 2):
            D[i][i + 1], D[i + 1][i] = Fraction(-1), Fraction(1)
    elif d >= 2:
        D[0][1] = Fraction(1)
    P, Pi = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)], [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    for _ in range(2 if d >= 2 else 0):
        i, j = rng.sample(range(d), 2)
        v = rng.choice([-1, 1, 2])
        E = [[Fraction(int(r == s)) for s in range(d)] for r in range(d)]
        Ei = [row[:] for row in E]
        E[i][j], Ei[i][j] = Fraction(v), Fraction(-v)
        P, Pi = matmul(P, E), matmul(Ei, Pi)
    return matmul(matmul(P, D), Pi)
