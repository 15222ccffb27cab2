"""Walk through a Poisson-Nijenhuis pair on aff(1) + R and the hierarchy it generates."""
from bigbracket import get_example
from bigbracket.bracket import bracket
from bigbracket.hierarchy import build_pn_hierarchy, lambda_seq, theta_k
from bigbracket.tensors import classify_pair, deforming_constant

ex = get_example("pn-affine-3d")
print("Theta =", ex.theta.theta)
print("I     =", ex.I.value)
print("J     =", ex.J.value)

# what kind of pair is this?
c = classify_pair(ex.theta, ex.I, ex.J)
for key, value in sorted(c.as_dict().items()):
    print(f"  {key:18s} {value}")

# deform Theta repeatedly by I; since I is Nijenhuis, every pair of these brackets to zero
tks = [theta_k(ex.theta, ex.I, k).theta for k in range(4)]
for k, t in enumerate(tks):
    print(f"Theta_{k} =", t)
print("all {Theta_k, Theta_m} vanish:", all(bracket(a, b).is_zero() for a in tks for b in tks))

# I^n o J stays Poisson for every Theta_k and the family is pairwise compatible
h = build_pn_hierarchy(ex.theta, ex.J, ex.I, n_max=3, k_max=3)
print("hierarchy status:", h.status)
for e in h.entries:
    print(f"  I^{e.n} J = {e.tensor}")

# the scalars that go with a deforming J along the hierarchy
print("J deforming:", deforming_constant(ex.theta, ex.J))
print("lambda_k from lambda_0 = 1:", [str(v) for v in lambda_seq(1, 5)])
