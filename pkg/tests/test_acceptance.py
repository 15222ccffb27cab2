"""End-to-end acceptance checks, one test per criterion.

Every comparison is exact: polynomials over the rationals must agree term by term.
Each test records a PASS/FAIL line that is printed at the end of the session
(and immediately when run with ``-s``).
"""
import itertools
import json
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from bigbracket.bracket import bracket
from bigbracket.builders import (
    i_n,
    j_general,
    j_omega,
    j_pi,
    lie_algebra_theta,
    maurer_cartan_residual,
    structure_constants,
)
from bigbracket.catalog import builtin_examples, get_example
from bigbracket.courant import is_courant, jacobiator, section_basis
from bigbracket.fileformat import emit_definition, emit_report, parse_definition
from bigbracket.grading import AlgebraSignature
from bigbracket.hierarchy import (
    Bounds,
    LambdaDomainError,
    build_pn_hierarchy,
    lambda_closed_form,
    lambda_seq,
    theta_k,
)
from bigbracket.runner import builtin_definitions, example_definition, run_definitions
from bigbracket.tensors import (
    DorfmanOperator,
    Endomorphism,
    bilinear_residuals,
    concomitant,
    deform_word,
    deforming_constant,
    func_of,
    function_map,
    harness_sections,
    is_nijenhuis,
    torsion,
    torsion_function,
    torsion_via_deformations,
)
from conftest import CRITERIA
from helpers import (
    LIE_ALGEBRAS,
    base_square_tensor,
    dense,
    jacobi_holds,
    lie_torsion_zero,
    random_homogeneous,
    random_orthogonal,
    random_square_matrix,
    schouten_square_zero,
    skew_matrix,
)


@contextmanager
def criterion(number, title):
    info = {}
    start = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        extra = f" ({info['detail']})" if info.get("detail") else ""
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title}{extra} [{time.perf_counter() - start:.1f}s]"
        CRITERIA[number] = line
        print(line)


def _sign(e):
    return -1 if e % 2 else 1


def _same(f, g, secs):
    return not bilinear_residuals(f, g, secs)


def test_criterion_01_bracket_laws():
    with criterion(1, "antisymmetry, Leibniz and Jacobi on 1000 random triples") as info:
        rng = random.Random(20240101)
        start = time.perf_counter()
        nonzero = 0
        for _ in range(1000):
            sig = AlgebraSignature(rng.randint(0, 2), rng.randint(1, 4))
            f, g, h = (rng.randint(0, 4) for _ in range(3))
            F, G, H = (random_homogeneous(rng, sig, k, 3) for k in (f, g, h))
            fg = bracket(F, G)
            nonzero += bool(fg)
            assert fg + bracket(G, F).scale(_sign((f - 2) * (g - 2))) == sig.zero()
            assert bracket(F, G * H) == fg * H + (G * bracket(F, H)).scale(_sign((f - 2) * g))
            assert bracket(F, bracket(G, H)) == bracket(fg, H) + bracket(G, bracket(F, H)).scale(_sign((f - 2) * (g - 2)))
        elapsed = time.perf_counter() - start
        info["detail"] = f"{nonzero} triples with nonzero {{F,G}}"
        assert nonzero > 300
        assert elapsed < 10


def test_criterion_02_courant_recovery():
    with criterion(2, "Heisenberg and sl2 are Courant, a Jacobi-breaking table is not"):
        for name in ("heisenberg", "sl2"):
            d, table = LIE_ALGEBRAS[name]
            theta = lie_algebra_theta(structure_constants(d, table))
            assert bracket(theta.theta, theta.theta).is_zero()
            basis = section_basis(theta.signature)
            assert all(not jacobiator(theta, *t) for t in itertools.product(basis, repeat=3))
        table = {(1, 2): {3: 1}, (1, 3): {1: 1}}
        assert not jacobi_holds(dense(3, table))
        theta = lie_algebra_theta(structure_constants(3, table))
        assert not bracket(theta.theta, theta.theta).is_zero()
        basis = section_basis(theta.signature)
        assert any(jacobiator(theta, *t) for t in itertools.product(basis, repeat=3))


def _random_lie(rng, max_d=4):
    choices = [n for n, (d, _) in LIE_ALGEBRAS.items() if d <= max_d]
    name = rng.choice(choices)
    d, table = LIE_ALGEBRAS[name]
    return d, dense(d, table), lie_algebra_theta(structure_constants(d, table))


def _sparse_skew(rng, d):
    m = [[0] * d for _ in range(d)]
    for i, j in itertools.combinations(range(d), 2):
        v = rng.choice([0, 0, 1, -1, 2])
        m[i][j], m[j][i] = v, -v
    return m


def test_criterion_03_block_tensors():
    with criterion(3, "pi, omega and N block tensors on random Lie algebras, d <= 4") as info:
        rng = random.Random(31337)
        seen = {k: set() for k in "ade"}
        for _ in range(40):
            d, c, mu = _random_lie(rng)
            sig = mu.signature
            secs = harness_sections(sig)
            B = DorfmanOperator(mu)
            # a) and b): J_pi deforming <=> Nijenhuis <=> [pi, pi] = 0, torsion = 1/2 {pi,{pi,mu}}
            pi = _sparse_skew(rng, d)
            Jp = j_pi(d, pi)
            poisson = schouten_square_zero(c, pi)
            half = bracket(Jp.value, bracket(Jp.value, mu.theta)).scale(Fraction(1, 2))
            found, eta = deforming_constant(mu, Jp)
            assert found == poisson and (not found or eta == 0)
            assert deform_word(mu, [Jp, Jp]).theta == half.scale(2)
            assert _same(torsion(B, Jp), function_map(half), secs)
            assert is_nijenhuis(B, Jp) == poisson
            seen["a"].add(poisson)
            # c): J_omega is deforming with eta = 0 and Nijenhuis
            Jw = j_omega(d, skew_matrix(rng, d))
            assert deform_word(mu, [Jw, Jw]).theta.is_zero()
            assert is_nijenhuis(B, Jw)
            # d): for N^2 = alpha id, I_N Nijenhuis <=> N Nijenhuis on the Lie algebra
            alpha = rng.choice([0, 1] + ([-1] if d % 2 == 0 else []))
            N = random_square_matrix(rng, d, alpha)
            IN = i_n(d, N)
            classical = lie_torsion_zero(c, N)
            assert is_nijenhuis(B, IN) == classical
            seen["d"].add(classical)
            # e): J = (N, pi; 0, -N*) deforming <=> N deforming, mu_{N,pi} + mu_{pi,N} = 0, pi Poisson
            Ne = rng.choice([N, [[Fraction(rng.choice([1, 2])) * int(i == j) for j in range(d)] for i in range(d)]])
            J = j_general(d, N=Ne, pi=pi)
            lhs, eta_j = deforming_constant(mu, J)
            n_def, eta_n = deforming_constant(mu, i_n(d, Ne))
            rhs = n_def and concomitant(mu, i_n(d, Ne), Jp).is_zero() and poisson
            assert lhs == rhs
            if lhs:
                assert eta_j == eta_n
            seen["e"].add(lhs)
        info["detail"] = ", ".join(f"{k}: {sorted(v)}" for k, v in seen.items())
        assert all(v == {True, False} for v in seen.values())


def test_criterion_04_maurer_cartan():
    with criterion(4, "1/2 id + pi deforming <=> Maurer-Cartan, with eta = 1/4") as info:
        half = Fraction(1, 2)
        counts = {}
        for name, d in (("maurer-cartan-2d", 2), ("maurer-cartan-3d", 3)):
            ex = get_example(name)
            mu, gamma = ex.extras["mu"], ex.extras["gamma"]
            assert is_courant(ex.theta)
            for entries in itertools.product([-1, 0, 1, 2], repeat=d * (d - 1) // 2):
                pi = [[0] * d for _ in range(d)]
                for (i, j), v in zip(itertools.combinations(range(d), 2), entries):
                    pi[i][j], pi[j][i] = v, -v
                mc = maurer_cartan_residual(mu, gamma, j_pi(d, pi)).is_zero()
                J = j_general(d, N=[[half if i == j else 0 for j in range(d)] for i in range(d)], pi=pi)
                found, eta = deforming_constant(ex.theta, J)
                assert found == mc
                if found:
                    assert eta == Fraction(1, 4)
                counts.setdefault(name, set()).add(mc)
        assert counts["maurer-cartan-2d"] == {True}
        assert counts["maurer-cartan-3d"] == {True, False}
        info["detail"] = "2-d: every pi solves it; 3-d: both outcomes seen"


def test_criterion_05_torsion_forms():
    with criterion(5, "three torsion formulas agree on 100 tensors with I^2 = alpha id"):
        rng = random.Random(55)
        alphas = [Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 4)]
        for i in range(100):
            alpha = alphas[i % 4]
            d = 2 if alpha == -1 else rng.choice([1, 2, 3])
            sig = AlgebraSignature(rng.choice([0, 1]), d)
            g, gi = random_orthogonal(rng, sig)
            I = g @ base_square_tensor(sig, alpha) @ gi
            assert I.is_skew() and I @ I == Endomorphism.scalar(sig, alpha)
            theta = random_homogeneous(rng, sig, 3, 5, max_x=1)
            B = DorfmanOperator(theta)
            secs = harness_sections(sig)
            definition = torsion(B, I)
            assert _same(definition, torsion_via_deformations(B, I), secs)
            assert _same(definition, function_map(torsion_function(theta, func_of(I), alpha=alpha)), secs)


def _theta_k_compatible(ex, K):
    tks = [theta_k(ex.theta, ex.I, k).theta for k in range(K + 1)]
    return all(bracket(tks[k], tks[m]).is_zero() for k in range(K + 1) for m in range(K + 1))


def test_criterion_06_hierarchy_compatibility():
    with criterion(6, "{Theta_k, Theta_m} = 0 for k, m <= 4"):
        for name in ("hypercomplex-u2", "pn-affine-3d", "heisenberg-central"):
            ex = get_example(name)
            assert is_nijenhuis(DorfmanOperator(ex.theta), ex.I)
            assert _theta_k_compatible(ex, 4)


def test_criterion_07_lambda_sequence():
    with criterion(7, "lambda recursion equals the closed form; 1/2 and -1 rejected") as info:
        for l0 in (1, 2, Fraction(-1, 2), Fraction(1, 3)):
            seq = lambda_seq(l0, 10)
            assert all(seq[k] == lambda_closed_form(l0, k) for k in range(11))
        for bad in (Fraction(1, 2), -1):
            with pytest.raises(LambdaDomainError):
                lambda_seq(bad, 10)
        info["detail"] = "the -2 rejection is checked separately"


@pytest.mark.xfail(strict=True, reason="-2 is not of the form 4/((-3)^m - 1); the recursion is regular there")
def test_criterion_07_minus_two_rejected():
    try:
        with pytest.raises(LambdaDomainError):
            lambda_seq(-2, 10)
    except BaseException:
        CRITERIA[7.5] = "criterion  7 FAIL: lambda0 = -2 is accepted (4/((-3)^1 - 1) = -1, not -2); expected failure"
        print(CRITERIA[7.5])
        raise


_VERIFY_ALL = {}


def test_criterion_08_verify_all():
    with criterion(8, "full identity catalog over the builtins, k, n <= 3") as info:
        start = time.perf_counter()
        report = run_definitions(builtin_definitions(), Bounds(max_k=3, max_n=3), jobs=1)
        elapsed = time.perf_counter() - start
        _VERIFY_ALL["json"] = emit_report(report, "json")
        s = report["summary"]
        info["detail"] = f"passed {s['passed']}, failed {s['failed']}, not applicable {s['not-applicable']}"
        assert s["failed"] == 0 and s["passed"] > 0
        assert len(report["not_applicable"]) == s["not-applicable"]
        ids = {t["id"] for t in report["tasks"]}
        assert ids == {f"T-{i:02d}" for i in range(1, 22)}
        assert elapsed < 120


def test_criterion_09_pn_hierarchy():
    with criterion(9, "I^n o J Poisson for every Theta_k and pairwise compatible, n, k <= 3"):
        ex = get_example("pn-affine-3d")
        out = build_pn_hierarchy(ex.theta, ex.J, ex.I, 3, 3)
        assert out.status == "passed"
        assert [sorted(e.poisson) for e in out.entries] == [[0, 1, 2, 3]] * 4
        assert out.all_poisson and out.all_compatible
        assert len(out.compatibility) == 64


def test_criterion_10_round_trip_and_determinism():
    with criterion(10, "definition round trip and byte-identical JSON across runs and --jobs"):
        for ex in builtin_examples():
            text = emit_definition(example_definition(ex))
            back = parse_definition(text)
            assert emit_definition(back) == text
            assert back.theta == ex.theta.theta and back.tensors == ex.tensors
        if "json" not in _VERIFY_ALL:
            _VERIFY_ALL["json"] = emit_report(run_definitions(builtin_definitions(), Bounds(3, 3)), "json")
        out = subprocess.run(
            [sys.executable, "-m", "bigbracket", "verify-all", "--jobs", "2"],
            capture_output=True, text=True, check=True,
        ).stdout
        assert out == _VERIFY_ALL["json"]
        assert json.loads(out)["summary"]["failed"] == 0
