"""When is 1/2 id + pi deforming for a Lie bialgebra double?

The answer is a Maurer-Cartan equation in pi.  In dimension two it holds for
every bivector; in dimension three it cuts out a genuine subset.
"""
import itertools
from fractions import Fraction

from bigbracket import get_example
from bigbracket.builders import j_general, j_pi, maurer_cartan_residual
from bigbracket.tensors import deforming_constant

half = Fraction(1, 2)

for name, d in (("maurer-cartan-2d", 2), ("maurer-cartan-3d", 3)):
    ex = get_example(name)
    mu, gamma = ex.extras["mu"], ex.extras["gamma"]
    print(name)
    print("  mu    =", mu)
    print("  gamma =", gamma)
    solutions = total = shown = 0
    for entries in itertools.product([-1, 0, 1], repeat=d * (d - 1) // 2):
        pi = [[0] * d for _ in range(d)]
        for (i, j), v in zip(itertools.combinations(range(d), 2), entries):
            pi[i][j], pi[j][i] = v, -v
        residual = maurer_cartan_residual(mu, gamma, j_pi(d, pi))
        J = j_general(d, N=[[half * (i == j) for j in range(d)] for i in range(d)], pi=pi)
        found, eta = deforming_constant(ex.theta, J)
        assert found == residual.is_zero()
        total += 1
        if found:
            assert eta == Fraction(1, 4)
            solutions += 1
        elif shown < 3:
            shown += 1
            print("  pi =", pi, "leaves", residual)
    print(f"  {solutions} of {total} bivectors give a deforming tensor (eta = 1/4 each time)")
