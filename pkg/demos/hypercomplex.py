"""Left multiplication by i and j on the quaternions, seen as tensors on u(2)."""
from bigbracket import get_example
from bigbracket.hierarchy import Bounds, Harness, detect_lambda0, verify_identity
from bigbracket.tensors import anti_commute, classify_pair, compose, endo_of, func_of

ex = get_example("hypercomplex-u2")
I, J = ex.I, ex.J
K = func_of(compose(I, J))
print("I =", I.value)
print("J =", J.value)
print("K = I o J =", K)

E = endo_of(I)
print("I^2 scalar:", (E @ E).scalar_value())
print("I, J anti-commute:", anti_commute(I, J))

c = classify_pair(ex.theta, I, J)
print("pair class:", c.pair_class, " eta:", c.deforming_eta)
print("lambda_0:", detect_lambda0(ex.theta, I, J))

# a few catalog identities on this instance, sharing one cache
h = Harness(ex.theta, I, J, name=ex.name, bounds=Bounds(max_k=2, max_n=2))
for tid in ("T-04", "T-18", "T-20", "T-21"):
    rep = verify_identity(tid, None, harness=h)
    print(f"{tid}: {rep.status} ({rep.checks} checks)")
