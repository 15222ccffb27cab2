"""Exact big-bracket calculus for pre-Courant algebroids on A + A*."""
from .grading import AlgebraSignature, SuperPolynomial, HomogeneityError, normalize
from .bracket import bracket
from .courant import PreCourant, is_courant, decompose, dorfman, anchor_apply, pairing, jacobiator
from .tensors import (
    Endomorphism,
    TensorFunction,
    classify_pair,
    concomitant,
    deform_theta,
    deform_word,
    endo_of,
    func_of,
    torsion,
    torsion_function,
)
from .builders import (
    bialgebra_theta,
    i_n,
    id_a,
    j_general,
    j_omega,
    j_pi,
    lie_algebra_theta,
    lie_algebroid_theta,
    maurer_cartan_residual,
    structure_constants,
    tangent_theta,
)
from .hierarchy import (
    Bounds,
    IdentityReport,
    LambdaDomainError,
    build_pn_hierarchy,
    compatibility_check,
    lambda_seq,
    theta_k,
    verify_identity,
)
from .catalog import builtin_examples, get_example

__version__ = "0.1.0"
