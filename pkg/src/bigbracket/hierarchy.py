"""Iterated deformations, the lambda recursion and the executable identity catalog.

Each catalog entry ``T-01`` ... ``T-21`` is a function taking a
:class:`Harness` (a structure with tensors bound to the roles ``I`` and ``J``)
and returning an :class:`IdentityReport`. Hypotheses are checked first; an
instance outside them is reported ``not-applicable`` with the failing gate
named, never ``failed``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .bracket import bracket
from .courant import PreCourant
from .grading import AlgebraSignature, SuperPolynomial, as_rational
from .tensors import (
    DorfmanOperator,
    Endomorphism,
    TensorFunction,
    as_endo,
    as_function,
    classify_pair,
    concomitant,
    func_of,
    function_map,
    harness_sections,
    nijenhuis_concomitant,
    proportionality,
    torsion,
)

__all__ = [
    "theta_k",
    "compatibility_check",
    "LambdaSequence",
    "LambdaDomainError",
    "lambda_seq",
    "lambda_closed_form",
    "excluded_lambda",
    "Bounds",
    "IdentityReport",
    "Harness",
    "IDENTITIES",
    "verify_identity",
    "HierarchyEntry",
    "PNHierarchy",
    "build_pn_hierarchy",
    "detect_lambda0",
]

PASSED, FAILED, NOT_APPLICABLE = "passed", "failed", "not-applicable"


def _poly(theta) -> SuperPolynomial:
    return theta.theta if isinstance(theta, PreCourant) else theta


def theta_k(theta, I, k: int) -> PreCourant:
    """``Theta_k``: ``k`` successive deformations by ``I``; ``Theta_0 = Theta``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = _poly(theta)
    f = as_function(I)
    for _ in range(k):
        out = bracket(f, out)
    return PreCourant(out)


def compatibility_check(theta1, theta2) -> bool:
    """``{Theta1, Theta2} == 0``."""
    return bracket(_poly(theta1), _poly(theta2)).is_zero()


# -- lambda recursion -----------------------------------------------------------

class LambdaDomainError(ValueError):
    def __init__(self, lambda0, m):
        super().__init__(f"lambda0 = {lambda0} equals 4/((-3)^{m} - 1) and is excluded")
        self.lambda0 = lambda0
        self.m = m


def excluded_lambda(m: int) -> Fraction:
    if m < 1:
        raise ValueError("m starts at 1")
    return Fraction(4, (-3) ** m - 1)


def lambda_closed_form(lambda0, k: int) -> Fraction:
    l0 = as_rational(lambda0)
    p = Fraction((-3) ** k)
    return p * l0 / (1 + (1 - p) / 4 * l0)


@dataclass(frozen=True)
class LambdaSequence:
    lambda0: Fraction
    values: tuple

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)


def lambda_seq(lambda0, K: int) -> LambdaSequence:
    """``lambda_k = -3 lambda_{k-1} / (1 + lambda_{k-1})`` for ``k <= K``.

    ``lambda0`` is rejected when it equals ``4/((-3)^m - 1)`` for some
    ``1 <= m <= max(K, 1)``; those are exactly the values where a denominator vanishes.
    """
    l0 = as_rational(lambda0)
    for m in range(1, max(K, 1) + 1):
        if l0 == excluded_lambda(m):
            raise LambdaDomainError(l0, m)
    vals = [l0]
    for _ in range(K):
        prev = vals[-1]
        vals.append(-3 * prev / (1 + prev))
    return LambdaSequence(l0, tuple(vals))


# -- reports ----------------------------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    """Desk-scale limits: ``max_k`` for deformation depth, ``max_n`` for powers and word lengths."""

    max_k: int = 3
    max_n: int = 3
    experimental: bool = False


@dataclass
class IdentityReport:
    identity_id: str
    instance: str
    status: str = PASSED
    residuals: list = field(default_factory=list)
    checks: int = 0
    gates: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == PASSED

    @property
    def residual_terms(self) -> int:
        return sum(len(r.terms) for _, r in self.residuals)

    def as_dict(self, max_residuals: int = 5) -> dict:
        return {
            "id": self.identity_id,
            "instance": self.instance,
            "status": self.status,
            "checks": self.checks,
            "residual_terms": self.residual_terms,
            "residuals": [{"at": at, "value": str(r)} for at, r in self.residuals[:max_residuals]],
            "gates": dict(sorted(self.gates.items())),
            "notes": list(self.notes),
        }


class _Gate(Exception):
    pass


def _fr(x) -> str:
    return str(Fraction(x))


class Harness:
    """A structure with the tensors playing ``I`` and ``J``, plus caches."""

    def __init__(self, theta, I=None, J=None, name: str = "", bounds: Bounds = Bounds(), fixed: Optional[dict] = None):
        self.theta = _poly(theta)
        self.sig: AlgebraSignature = self.theta.signature
        self.name = name
        self.bounds = bounds
        self.fixed = dict(fixed or {})
        self.I = None if I is None else _tensor(I)
        self.J = None if J is None else _tensor(J)
        self.sections = harness_sections(self.sig)
        self._ops: dict = {}
        self._br: dict = {}
        self._nij: dict = {}
        self._pow: dict = {}
        self.report: Optional[IdentityReport] = None

    # -- cached algebra ---------------------------------------------------------
    def br(self, f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
        key = (f, g)
        got = self._br.get(key)
        if got is None:
            got = bracket(f, g)
            self._br[key] = got
        return got

    def deform(self, theta: SuperPolynomial, *tensors) -> SuperPolynomial:
        for T in tensors:
            theta = self.br(_fn(T), theta)
        return theta

    def tk(self, k: int, theta: Optional[SuperPolynomial] = None) -> SuperPolynomial:
        return self.deform(self.theta if theta is None else theta, *([self.I] * k))

    def op(self, theta: SuperPolynomial) -> DorfmanOperator:
        got = self._ops.get(theta)
        if got is None:
            got = DorfmanOperator(theta) if not theta.is_zero() else DorfmanOperator(PreCourant(theta))
            self._ops[theta] = got
        return got

    def pw(self, T, n: int) -> Endomorphism:
        E = _endo(T)
        key = (E, n)
        got = self._pow.get(key)
        if got is None:
            got = Endomorphism.identity(self.sig) if n == 0 else self.pw(E, n - 1) @ E
            self._pow[key] = got
        return got

    def fpw(self, T, n: int) -> SuperPolynomial:
        """Function of the skew power ``T^n`` (``n`` odd, or any ``n`` for products that stay skew)."""
        return func_of(self.pw(T, n))

    def conc(self, theta, A, B) -> SuperPolynomial:
        fa, fb = _fn(A), _fn(B)
        return self.br(fb, self.br(fa, theta)) + self.br(fa, self.br(fb, theta))

    def torsion_zero(self, theta: SuperPolynomial, T) -> bool:
        """Nijenhuis test; uses ``1/2 (Theta_{T,T} - alpha Theta)`` when ``T^2 = alpha id``."""
        E = _endo(T)
        key = (theta, E)
        got = self._nij.get(key)
        if got is None:
            alpha = (E @ E).scalar_value()
            if alpha is not None and E.is_skew():
                f = func_of(E)
                got = (self.br(f, self.br(f, theta)) - theta.scale(alpha)).is_zero()
            else:
                tor = torsion(self.op(theta), E)
                got = all(not tor(X, Y) for X in self.sections for Y in self.sections)
            self._nij[key] = got
        return got

    def torsion_on_image(self, theta: SuperPolynomial, I, J) -> bool:
        """``T I(JX, Y) = T I(X, JY) = 0`` for all sections."""
        tor = torsion(self.op(theta), _endo(I))
        EJ = _endo(J)
        for X in self.sections:
            JX = EJ(X)
            for Y in self.sections:
                if tor(JX, Y) or tor(X, EJ(Y)):
                    return False
        return True

    def anti_commute(self, A, B) -> bool:
        EA, EB = _endo(A), _endo(B)
        return (EA @ EB + EB @ EA).is_zero()

    # -- index ranges -------------------------------------------------------------
    def rng(self, name: str, lo: int, hi: int) -> list:
        if name in self.fixed:
            v = int(self.fixed[name])
            return [v] if v >= lo else []
        return list(range(lo, hi + 1))

    @property
    def K(self):
        return self.bounds.max_k

    @property
    def Nn(self):
        return self.bounds.max_n

    # -- report helpers ---------------------------------------------------------
    def need(self, gate: str, ok: bool):
        self.report.gates[gate] = bool(ok)
        if not ok:
            raise _Gate(gate)

    def need_roles(self, *roles):
        for r in roles:
            if getattr(self, r) is None:
                self.report.gates[f"role {r} bound"] = False
                raise _Gate(f"role {r} bound")

    def gate_flag(self, gate: str, ok: bool) -> bool:
        self.report.gates[gate] = bool(ok)
        return ok

    def zero(self, label: str, residual: SuperPolynomial):
        self.report.checks += 1
        if not residual.is_zero():
            self.report.residuals.append((label, residual))

    def equal(self, label: str, lhs: SuperPolynomial, rhs: SuperPolynomial):
        self.zero(label, lhs - rhs)

    def truth(self, label: str, ok: bool):
        """A boolean conclusion; a failure is recorded with a unit residual."""
        self.report.checks += 1
        if not ok:
            self.report.residuals.append((label, self.sig.one()))

    def bilinear(self, label: str, f: Callable, g: Optional[Callable] = None):
        for (i, X), (j, Y) in itertools.product(enumerate(self.sections), repeat=2):
            r = f(X, Y) if g is None else f(X, Y) - g(X, Y)
            self.zero(f"{label}@({i},{j})", r)

    def endo_zero(self, label: str, E: Endomorphism):
        self.report.checks += 1
        if not E.is_zero():
            self.report.residuals.append((label, func_of(E) if E.is_skew() else self.sig.one()))

    def note(self, text: str):
        self.report.notes.append(text)

    # -- derived quantities -------------------------------------------------------
    def K_func(self) -> SuperPolynomial:
        """``{J, {I, J}}``."""
        fi, fj = _fn(self.I), _fn(self.J)
        return self.br(fj, self.br(fi, fj))

    def lambda0(self, theta: Optional[SuperPolynomial] = None) -> tuple[bool, Optional[Fraction]]:
        t = self.theta if theta is None else theta
        lhs = self.br(self.K_func(), t)
        rhs = self.deform(t, self.J, self.J, self.I)
        return proportionality(lhs, rhs)


def detect_lambda0(theta, I, J) -> tuple[bool, Optional[Fraction]]:
    """Solve ``Theta_{{J,{I,J}}} = lambda0 Theta_{J,J,I}``; ``lambda0 = 0`` when both vanish."""
    return Harness(theta, I, J).lambda0()


def _tensor(T):
    if isinstance(T, (TensorFunction, Endomorphism)):
        return T
    if isinstance(T, SuperPolynomial):
        return TensorFunction(T)
    raise TypeError(f"not a tensor: {T!r}")


def _fn(T) -> SuperPolynomial:
    if isinstance(T, SuperPolynomial):
        return T
    return as_function(T)


def _endo(T) -> Endomorphism:
    return as_endo(T)


# -- the catalog ------------------------------------------------------------------

def _t01(h: Harness):
    """Torsion recursion along Theta_k."""
    h.need_roles("I")
    h.need("I skew", _endo(h.I).is_skew())
    E = _endo(h.I)
    for k in h.rng("k", 1, h.K):
        Tk = torsion(h.op(h.tk(k)), E)
        Tp = torsion(h.op(h.tk(k - 1)), E)
        h.bilinear(f"k={k}", Tk, lambda X, Y: Tp(E(X), Y) + Tp(X, E(Y)) - E(Tp(X, Y)))


def _t02(h: Harness):
    """Nijenhuis for Theta implies Nijenhuis for Theta_k, and Theta_k Courant when Theta is."""
    h.need_roles("I")
    E = _endo(h.I)
    h.need("I skew", E.is_skew())
    h.need("I Nijenhuis for Theta", h.torsion_zero(h.theta, E))
    courant = h.gate_flag("Theta Courant", h.br(h.theta, h.theta).is_zero())
    for k in h.rng("k", 1, h.K):
        h.bilinear(f"torsion k={k}", torsion(h.op(h.tk(k)), E))
        if courant:
            t = h.tk(k)
            h.zero(f"{{Theta_{k},Theta_{k}}}", h.br(t, t))
    if not courant:
        h.note("Theta is not Courant: only the torsion statement applies")


def _t03(h: Harness):
    """Torsion of I^n for an arbitrary endomorphism."""
    h.need_roles("I")
    candidates = [("I", _endo(h.I))]
    if h.J is not None:
        candidates.append(("I+J^2", _endo(h.I) + h.pw(h.J, 2)))
    B = h.op(h.theta)
    for name, E in candidates:
        T1 = torsion(B, E)
        for n in h.rng("n", 2, max(h.Nn, 2)):
            En = h.pw(E, n)
            Tn = torsion(B, En)
            Tn1 = torsion(B, h.pw(E, n - 1))
            Tn2 = torsion(B, h.pw(E, n - 2))
            En1, E2, E2n2 = h.pw(E, n - 1), h.pw(E, 2), h.pw(E, 2 * n - 2)

            def rhs(X, Y, En1=En1, E2=E2, E2n2=E2n2, Tn1=Tn1, Tn2=Tn2):
                return (
                    T1(En1(X), En1(Y))
                    + E(Tn1(E(X), Y) + Tn1(X, E(Y)))
                    - E2(Tn2(E(X), E(Y)))
                    + E2n2(T1(X, Y))
                )

            h.bilinear(f"{name} n={n}", Tn, rhs)


def _t04(h: Harness):
    """Compatibility of the Theta_k."""
    h.need_roles("I")
    h.need("I skew", _endo(h.I).is_skew())
    h.need("Theta Courant", h.br(h.theta, h.theta).is_zero())
    h.need("I Nijenhuis for Theta", h.torsion_zero(h.theta, h.I))
    for k in h.rng("k", 0, h.K):
        for m in h.rng("m", 0, h.K):
            h.zero(f"{{Theta_{k},Theta_{m}}}", h.br(h.tk(k), h.tk(m)))


def _t05(h: Harness):
    """The bracket of an odd power versus one more deformation, with the torsion correction."""
    h.need_roles("I")
    E = _endo(h.I)
    B = h.op(h.theta)
    T = torsion(B, E)
    for n in h.rng("n", 0, h.Nn):
        lhs = B.deformed(h.pw(E, 2 * n + 1))
        base = B.deformed(h.pw(E, 2 * n)).deformed(E)

        def rhs(X, Y, n=n, base=base):
            out = base(X, Y)
            for i in range(2 * n):
                j = 2 * n - 1 - i
                Ii = h.pw(E, i)
                out = out - h.pw(E, j)(T(Ii(X), Y) + T(X, Ii(Y)))
            return out

        h.bilinear(f"n={n}", lhs, rhs)


def _t06(h: Harness):
    """Powers of a Nijenhuis tensor deform like iterated deformations."""
    h.need_roles("I")
    E = _endo(h.I)
    h.need("I skew", E.is_skew())
    h.need("I Nijenhuis for Theta", h.torsion_zero(h.theta, E))
    B = h.op(h.theta)
    for n in h.rng("n", 0, h.Nn):
        h.bilinear(f"b) n={n}", B.deformed(h.pw(E, n)), function_map(h.tk(n)))
    for m in h.rng("m", 0, h.Nn):
        for n in h.rng("n", 0, h.Nn):
            h.bilinear(f"c) m={m} n={n}", B.deformed(h.pw(E, m)).deformed(h.pw(E, n)), B.deformed(h.pw(E, m + n)))


def _t07(h: Harness):
    """Concomitant recursion C(I, I^n o J)."""
    h.need_roles("I", "J")
    EI, EJ = _endo(h.I), _endo(h.J)
    h.need("I skew", EI.is_skew())
    h.need("J skew", EJ.is_skew())
    h.need("I, J anti-commute", h.anti_commute(EI, EJ))
    T = torsion(h.op(h.theta), EI)
    for n in h.rng("n", 1, h.Nn):
        Kn = h.pw(EI, n) @ EJ
        Kp = h.pw(EI, n - 1) @ EJ
        lhs = function_map(h.conc(h.theta, EI, func_of(Kn)))
        prev = function_map(h.conc(h.theta, EI, func_of(Kp)))
        h.bilinear(
            f"n={n}", lhs, lambda X, Y, prev=prev, Kp=Kp: EI(prev(X, Y)) + (T(Kp(X), Y) + T(X, Kp(Y))).scale(2)
        )


def _torsion_on_J_gate(h: Harness, theta=None):
    t = h.theta if theta is None else theta
    h.need("torsion of I vanishes on J", h.torsion_on_image(t, h.I, h.J))


def _compat_gate(h: Harness):
    h.need("I, J anti-commute", h.anti_commute(h.I, h.J))
    h.need("C_Theta(I,J) = 0", h.conc(h.theta, h.I, h.J).is_zero())


def _t08(h: Harness):
    """C_{Theta_k}(I, I^n o J) = 0 when the torsion of I vanishes on J."""
    h.need_roles("I", "J")
    _compat_gate(h)
    _torsion_on_J_gate(h)
    EI, EJ = _endo(h.I), _endo(h.J)
    for n in h.rng("n", 0, h.Nn):
        Kn = h.pw(EI, n) @ EJ
        h.endo_zero(f"anti-commute n={n}", EI @ Kn + Kn @ EI)
        fk = func_of(Kn)
        for k in h.rng("k", 0, h.K):
            h.zero(f"C_(Theta_{k})(I,I^{n}J)", h.conc(h.tk(k), EI, fk))


def _t09(h: Harness):
    """Concomitant for Theta_I."""
    h.need_roles("I", "J")
    fi, fj = _fn(h.I), _fn(h.J)
    tI = h.tk(1)
    C = h.conc(h.theta, fi, fj)
    h.equal("general", h.conc(tI, fi, fj), h.conc(h.theta, fi, h.br(fj, fi)) + h.br(fi, C))
    if h.gate_flag("I, J anti-commute", h.anti_commute(h.I, h.J)):
        fij = func_of(_endo(h.I) @ _endo(h.J))
        h.equal("anti-commuting", h.conc(tI, fi, fj), h.conc(h.theta, fi, fij).scale(2) + h.br(fi, C))
    else:
        h.note("anti-commuting form skipped")


def _t10(h: Harness):
    """C(I,J) = 2(Theta_{I,J} - Theta_{IoJ}) and [.,.]_{I..I,J} = [.,.]_{I^n o J}."""
    h.need_roles("I", "J")
    EI, EJ = _endo(h.I), _endo(h.J)
    h.need("I, J anti-commute", h.anti_commute(EI, EJ))
    fi, fj = _fn(h.I), _fn(h.J)
    fij = func_of(EI @ EJ)
    h.equal("C = 2(Theta_IJ - Theta_IoJ)", h.conc(h.theta, fi, fj), (h.deform(h.theta, fi, fj) - h.br(fij, h.theta)).scale(2))
    compat = h.gate_flag("C_Theta(I,J) = 0", h.conc(h.theta, fi, fj).is_zero())
    nij = h.gate_flag("I Nijenhuis for Theta", h.torsion_zero(h.theta, EI))
    weak = False
    if compat and not nij and h.bounds.experimental:
        weak = h.gate_flag("torsion of I vanishes on J (experimental)", h.torsion_on_image(h.theta, EI, EJ))
        if weak:
            h.note("iterated form checked under the weakened torsion gate (experimental)")
    if not (compat and (nij or weak)):
        h.note("iterated form skipped: needs a compatible pair and I Nijenhuis")
        return
    for n in h.rng("n", 0, h.Nn):
        lhs = h.deform(h.theta, *([fi] * n), fj)
        rhs = h.br(func_of(h.pw(EI, n) @ EJ), h.theta)
        h.bilinear(f"n={n}", function_map(lhs), function_map(rhs))


def _t11(h: Harness):
    """Odd powers of I stay compatible with I^n o J (and with I^n o J^(2m+1))."""
    h.need_roles("I", "J")
    EI, EJ = _endo(h.I), _endo(h.J)
    h.need("I Nijenhuis for Theta", h.torsion_zero(h.theta, EI))
    _compat_gate(h)
    jn = h.gate_flag("J Nijenhuis for Theta", h.torsion_zero(h.theta, EJ))
    ms = h.rng("m", 0, h.Nn) if jn else [0]
    for s in h.rng("s", 0, h.Nn):
        A = h.pw(EI, 2 * s + 1)
        fa = func_of(A)
        for n in h.rng("n", 0, h.Nn):
            for m in ms:
                Bm = h.pw(EI, n) @ h.pw(EJ, 2 * m + 1)
                h.endo_zero(f"anti-commute s={s} n={n} m={m}", A @ Bm + Bm @ A)
                fb = func_of(Bm)
                for k in h.rng("k", 0, h.K):
                    h.zero(f"C_(Theta_{k})(I^{2 * s + 1},I^{n}J^{2 * m + 1})", h.conc(h.tk(k), fa, fb))
    if not jn:
        h.note("second statement skipped: J is not Nijenhuis")


def _t12(h: Harness):
    """Cocycle transport along Theta_k and the Theta_{J,I,J}, Theta_{I,J,J} formulas."""
    h.need_roles("I", "J")
    fi, fj = _fn(h.I), _fn(h.J)
    t = h.theta
    C = h.conc(t, fi, fj)
    Kf = h.K_func()
    tjji = h.deform(t, fj, fj, fi)
    tK = h.br(Kf, t)
    h.equal("Theta_JIJ", h.deform(t, fj, fi, fj), (tjji + tK + h.br(fj, C)).scale(Fraction(1, 3)))
    h.equal("Theta_IJJ", h.deform(t, fi, fj, fj), -(tjji + tK - h.br(fj, C).scale(2)).scale(Fraction(1, 3)))
    if not h.gate_flag("I, J anti-commute", h.anti_commute(h.I, h.J)):
        h.note("transport statements skipped: I, J do not anti-commute")
        return
    for k in h.rng("k", 0, h.K):
        target = h.deform(tK, *([fi] * k))
        for r in range(k + 1):
            s = k - r
            h.equal(f"eq k={k} r={r}", h.deform(h.br(Kf, h.tk(r)), *([fi] * s)), target)
    ok, l0 = h.lambda0()
    if h.gate_flag("lambda0 exists", ok):
        h.note(f"lambda0 = {_fr(l0)}")
        tjj = h.deform(t, fj, fj)
        for k in h.rng("k", 0, h.K):
            h.equal(f"i) k={k}", h.br(Kf, h.tk(k)), h.deform(tjj, *([fi] * (k + 1))).scale(l0))
        if h.gate_flag("C_Theta(I,J) = 0", C.is_zero()):
            alpha = -(l0 + 1) / 3
            h.equal("Theta_IJJ = alpha Theta_JJI", h.deform(t, fi, fj, fj), tjji.scale(alpha))
            found, eta = proportionality(tjj, t)
            if h.gate_flag("J deforming", found):
                h.equal("Theta_IJJ = eta alpha Theta_I", h.deform(t, fi, fj, fj), h.tk(1).scale(eta * alpha))
    if h.gate_flag("{J,{I,J}} Theta-cocycle", tK.is_zero()):
        for k in h.rng("k", 0, h.K):
            h.zero(f"ii) k={k}", h.br(Kf, h.tk(k)))


def _lambda_gates(h: Harness):
    _compat_gate(h)
    _torsion_on_J_gate(h)
    ok, l0 = h.lambda0()
    h.need("lambda0 exists", ok)
    h.note(f"lambda0 = {_fr(l0)}")
    try:
        seq = lambda_seq(l0, max([h.K] + h.rng("k", 0, h.K)))
    except LambdaDomainError as exc:
        h.need(f"lambda0 not excluded (m={exc.m})", False)
    h.gate_flag("lambda0 not excluded", True)
    return l0, seq


def _t13(h: Harness):
    """lambda_k along the hierarchy."""
    h.need_roles("I", "J")
    l0, seq = _lambda_gates(h)
    fi, fj = _fn(h.I), _fn(h.J)
    Kf = h.K_func()
    for k in h.rng("k", 0, h.K):
        tk = h.tk(k)
        jji = h.deform(tk, fj, fj, fi)
        h.equal(f"a) k={k}", h.br(Kf, tk), jji.scale(seq[k]))
        h.equal(f"b) k={k}", jji.scale(seq[k]), h.deform(h.theta, fj, fj, *([fi] * (k + 1))).scale(l0))
        if l0 == 0:
            h.equal(f"c) k={k}", h.deform(tk, fj, fj), h.deform(h.theta, fj, fj, *([fi] * k)).scale(Fraction(-1, 3) ** k))


def _t14(h: Harness):
    """J stays deforming along Theta_k; (J, I^(2n+1)) deforming-Nijenhuis."""
    h.need_roles("I", "J")
    l0, seq = _lambda_gates(h)
    fj = _fn(h.J)
    found, eta = proportionality(h.deform(h.theta, fj, fj), h.theta)
    h.need("J deforming", found)
    h.note(f"eta = {_fr(eta)}")
    for k in h.rng("k", 0, h.K):
        eta_k = (l0 / seq[k]) * eta if l0 != 0 else Fraction(-1, 3) ** k * eta
        tk = h.tk(k)
        h.equal(f"deforming k={k}", h.deform(tk, fj, fj), tk.scale(eta_k))
    if not h.gate_flag("I Nijenhuis for Theta", h.torsion_zero(h.theta, h.I)):
        h.note("odd-power statement skipped: I is not Nijenhuis")
        return
    EI = _endo(h.I)
    for n in h.rng("n", 0, h.Nn):
        A = h.pw(EI, 2 * n + 1)
        h.endo_zero(f"anti-commute n={n}", A @ _endo(h.J) + _endo(h.J) @ A)
        for k in h.rng("k", 0, h.K):
            tk = h.tk(k)
            h.truth(f"I^{2 * n + 1} Nijenhuis for Theta_{k}", h.torsion_zero(tk, A))
            h.zero(f"C_(Theta_{k})(I^{2 * n + 1},J)", h.conc(tk, func_of(A), fj))


def _t15(h: Harness):
    """J Poisson for Theta implies J Poisson for Theta_k."""
    h.need_roles("I", "J")
    _compat_gate(h)
    h.need("Theta_{J,{I,J}} = 0", h.br(h.K_func(), h.theta).is_zero())
    _torsion_on_J_gate(h)
    fj = _fn(h.J)
    h.need("J Poisson", h.deform(h.theta, fj, fj).is_zero())
    for k in h.rng("k", 0, h.K):
        h.zero(f"k={k}", h.deform(h.tk(k), fj, fj))


def _t16(h: Harness):
    """Torsion transfer between Theta_I and Theta_J."""
    h.need_roles("I", "J")
    EI, EJ = _endo(h.I), _endo(h.J)
    h.need("I, J anti-commute", h.anti_commute(EI, EJ))
    fi, fj = _fn(h.I), _fn(h.J)
    B = h.op(h.theta)
    Cmap = function_map(h.conc(h.theta, fi, fj))
    for name, A, Bt in (("T_(Theta_I) J", EI, EJ), ("T_(Theta_J) I", EJ, EI)):
        lhs = torsion(h.op(h.br(_fn(func_of(A)), h.theta)), Bt)
        T = torsion(B, Bt)
        h.bilinear(name, lhs, lambda X, Y, A=A, Bt=Bt, T=T: -Bt(Cmap(X, Y)) - T(A(X), Y) - T(X, A(Y)) - A(T(X, Y)))


def _pn_gates(h: Harness):
    _compat_gate(h)
    fj = _fn(h.J)
    h.need("J Poisson", h.deform(h.theta, fj, fj).is_zero())
    h.need("I Nijenhuis for Theta", h.torsion_zero(h.theta, h.I))


def _t17(h: Harness):
    """Poisson-Nijenhuis hierarchy."""
    h.need_roles("I", "J")
    _pn_gates(h)
    h.need("Theta_{J,{I,J}} = 0", h.br(h.K_func(), h.theta).is_zero())
    EI, EJ = _endo(h.I), _endo(h.J)
    ns = h.rng("n", 0, h.Nn)
    hier = {n: func_of(h.pw(EI, n) @ EJ) for n in ns}
    for k in h.rng("k", 0, h.K):
        tk = h.tk(k)
        for m, n in itertools.product(ns, repeat=2):
            h.zero(f"(Theta_{k})_(I^{m}J,I^{n}J)", h.deform(tk, hier[m], hier[n]))
        for m in h.rng("m", 0, h.Nn):
            A = h.pw(EI, 2 * m + 1)
            h.truth(f"I^{2 * m + 1} Nijenhuis for Theta_{k}", h.torsion_zero(tk, A))
            fa = func_of(A)
            for n in ns:
                Bn = _endo(hier[n])
                h.endo_zero(f"anti-commute I^{2 * m + 1}, I^{n}J", A @ Bn + Bn @ A)
                h.zero(f"C_(Theta_{k})(I^{n}J,I^{2 * m + 1})", h.conc(tk, hier[n], fa))


def _t18(h: Harness):
    """Theta_{IoJ,IoJ} = (2+5 lambda0)/18 eta alpha Theta."""
    h.need_roles("I", "J")
    EI, EJ = _endo(h.I), _endo(h.J)
    alpha = (EI @ EI).scalar_value()
    h.need("I^2 = alpha id", alpha is not None)
    ok, l0 = h.lambda0()
    h.need("lambda0 exists", ok)
    _compat_gate(h)
    fj = _fn(h.J)
    found, eta = proportionality(h.deform(h.theta, fj, fj), h.theta)
    h.need("J deforming", found)
    h.need("I Nijenhuis for Theta", h.torsion_zero(h.theta, EI))
    h.note(f"lambda0 = {_fr(l0)}, eta = {_fr(eta)}, alpha = {_fr(alpha)}")
    fij = func_of(EI @ EJ)
    h.equal("Theta_(IoJ,IoJ)", h.deform(h.theta, fij, fij), h.theta.scale((2 + 5 * l0) / 18 * eta * alpha))
    for n in h.rng("n", 0, h.Nn):
        Kn = h.pw(EI, n) @ EJ
        fk = func_of(Kn)
        found_n, _ = proportionality(h.deform(h.theta, fk, fk), h.theta)
        h.truth(f"I^{n}J deforming", found_n)
        h.endo_zero(f"anti-commute n={n}", EI @ Kn + Kn @ EI)
        h.zero(f"C(I,I^{n}J)", h.conc(h.theta, EI, fk))


def _t19(h: Harness):
    """Torsion of a composition of anti-commuting tensors."""
    h.need_roles("I", "J")
    EI, EJ = _endo(h.I), _endo(h.J)
    h.need("I, J anti-commute", h.anti_commute(EI, EJ))
    B = h.op(h.theta)
    TI, TJ, TIJ = torsion(B, EI), torsion(B, EJ), torsion(B, EI @ EJ)
    I2, J2 = EI @ EI, EJ @ EJ

    def half(T, A, A2, X, Y):
        return T(A(X), A(Y)) - A(T(A(X), Y) + T(X, A(Y))) - A2(T(X, Y))

    h.bilinear(
        "2 T(IoJ)",
        lambda X, Y: TIJ(X, Y).scale(2),
        lambda X, Y: half(TI, EJ, J2, X, Y) + half(TJ, EI, I2, X, Y),
    )


def _words(n: int):
    for s in range(n + 1):
        yield from itertools.product("IJ", repeat=s)


def _nij_pair(h: Harness, theta, A, B, label):
    h.endo_zero(f"anti-commute {label}", A @ B + B @ A)
    h.zero(f"C {label}", h.conc(theta, func_of(A), func_of(B)))
    h.truth(f"first Nijenhuis {label}", h.torsion_zero(theta, A))
    h.truth(f"second Nijenhuis {label}", h.torsion_zero(theta, B))


def _t20(h: Harness):
    """Nijenhuis pairs: closure under composition, deformation words and odd powers."""
    h.need_roles("I", "J")
    EI, EJ = _endo(h.I), _endo(h.J)
    _compat_gate(h)
    h.need("I Nijenhuis for Theta", h.torsion_zero(h.theta, EI))
    h.need("J Nijenhuis for Theta", h.torsion_zero(h.theta, EJ))
    EIJ = EI @ EJ
    _nij_pair(h, h.theta, EI, EIJ, "(I,IoJ)")
    _nij_pair(h, h.theta, EJ, EIJ, "(J,IoJ)")
    role = {"I": h.I, "J": h.J}
    N = h.Nn
    for m in h.rng("m", 0, N):
        for n in h.rng("n", 0, N):
            if m % 2 or n % 2:
                P = h.pw(EI, m) @ h.pw(EJ, n)
                h.truth(f"I^{m}J^{n} Nijenhuis", h.torsion_zero(h.theta, P))
    for w in _words(h.rng("s", 0, N)[-1] if h.rng("s", 0, N) else 0):
        tw = h.deform(h.theta, *(role[c] for c in w))
        tag = "".join(w) or "-"
        for m in h.rng("m", 0, N):
            A = h.pw(EI, 2 * m + 1)
            for t in h.rng("t", 0, N):
                Bt = h.pw(EJ, 2 * t + 1)
                _nij_pair(h, tw, A, Bt, f"(I^{2 * m + 1},J^{2 * t + 1}) word={tag}")
                for n in h.rng("n", 1, N):
                    P = A @ h.pw(EJ, n)
                    _nij_pair(h, tw, P, Bt, f"(I^{2 * m + 1}J^{n},J^{2 * t + 1}) word={tag}")


def _t21(h: Harness):
    """Hypercomplex triple from a Nijenhuis pair of complex structures."""
    h.need_roles("I", "J")
    EI, EJ = _endo(h.I), _endo(h.J)
    h.need("I^2 = -id", (EI @ EI).scalar_value() == -1)
    h.need("J^2 = -id", (EJ @ EJ).scalar_value() == -1)
    _compat_gate(h)
    h.need("I Nijenhuis for Theta", h.torsion_zero(h.theta, EI))
    h.need("J Nijenhuis for Theta", h.torsion_zero(h.theta, EJ))
    EK = EI @ EJ
    minus = Endomorphism.scalar(h.sig, -1)
    h.endo_zero("K^2 = -id", EK @ EK - minus)
    h.endo_zero("IJK = -id", EI @ EJ @ EK - minus)
    B = h.op(h.theta)
    names = {"I": EI, "J": EJ, "K": EK}
    for a, b in (("I", "I"), ("J", "J"), ("K", "K"), ("I", "J"), ("J", "K"), ("I", "K")):
        h.bilinear(f"N({a},{b})", nijenhuis_concomitant(B, names[a], names[b]))
    for a, b in (("I", "J"), ("J", "K"), ("K", "I")):
        _nij_pair(h, h.theta, names[a], names[b], f"({a},{b})")


IDENTITIES: dict[str, tuple[Callable, str]] = {
    "T-01": (_t01, "torsion recursion along Theta_k"),
    "T-02": (_t02, "Nijenhuis and Courant properties persist along Theta_k"),
    "T-03": (_t03, "torsion of powers of an endomorphism"),
    "T-04": (_t04, "Theta_k and Theta_m are compatible"),
    "T-05": (_t05, "bracket of odd powers with torsion correction"),
    "T-06": (_t06, "powers of a Nijenhuis tensor deform like iterated deformations"),
    "T-07": (_t07, "concomitant recursion C(I, I^n o J)"),
    "T-08": (_t08, "C_{Theta_k}(I, I^n o J) vanishes"),
    "T-09": (_t09, "concomitant for Theta_I"),
    "T-10": (_t10, "concomitant of anti-commuting tensors; iterated deformation by I then J"),
    "T-11": (_t11, "odd powers of I compatible with I^n o J^(2m+1)"),
    "T-12": (_t12, "cocycle transport and the Theta_{J,I,J}, Theta_{I,J,J} formulas"),
    "T-13": (_t13, "lambda_k along the hierarchy"),
    "T-14": (_t14, "deforming tensors along the hierarchy"),
    "T-15": (_t15, "Poisson tensors along the hierarchy"),
    "T-16": (_t16, "torsion transfer formulas"),
    "T-17": (_t17, "Poisson-Nijenhuis hierarchy"),
    "T-18": (_t18, "deforming constant of I o J"),
    "T-19": (_t19, "torsion of a composition"),
    "T-20": (_t20, "Nijenhuis pairs under composition, deformation words and odd powers"),
    "T-21": (_t21, "hypercomplex triples"),
}


def verify_identity(identity_id: str, theta, I=None, J=None, bounds: Bounds = Bounds(), instance: str = "", fixed: Optional[dict] = None, harness: Optional[Harness] = None) -> IdentityReport:
    """Run one catalog entry; hypothesis failures give ``not-applicable``."""
    if identity_id not in IDENTITIES:
        raise KeyError(f"unknown identity {identity_id!r}")
    fn, _ = IDENTITIES[identity_id]
    h = harness if harness is not None else Harness(theta, I, J, name=instance, bounds=bounds, fixed=fixed)
    if harness is not None:
        h.fixed = dict(fixed or {})
    h.report = IdentityReport(identity_id, instance or h.name)
    try:
        fn(h)
    except _Gate as gate:
        h.report.status = NOT_APPLICABLE
        h.report.notes.append(f"hypothesis not met: {gate}")
        return h.report
    h.report.status = PASSED if not h.report.residuals else FAILED
    return h.report


# -- Poisson-Nijenhuis hierarchy ------------------------------------------------------

@dataclass
class HierarchyEntry:
    n: int
    tensor: SuperPolynomial
    poisson: dict  # k -> bool


@dataclass
class PNHierarchy:
    status: str
    entries: list
    compatibility: dict  # (k, m, n) -> bool
    notes: list = field(default_factory=list)

    @property
    def all_poisson(self) -> bool:
        return all(all(e.poisson.values()) for e in self.entries)

    @property
    def all_compatible(self) -> bool:
        return all(self.compatibility.values())


def build_pn_hierarchy(theta, J, I, n_max: int, k_max: int) -> PNHierarchy:
    """``I^n o J`` for ``n <= n_max`` with Poisson flags for ``Theta_k``, ``k <= k_max``,
    and the table of ``(Theta_k)_{I^m o J, I^n o J} == 0``."""
    cls = classify_pair(theta, I, J)
    h = Harness(theta, I, J)
    notes = [f"input pair class: {cls.pair_class}"]
    cocycle = h.br(h.K_func(), h.theta).is_zero()
    if cls.pair_class != "Poisson-Nijenhuis" or not cocycle:
        if not cocycle:
            notes.append("hypothesis not met: Theta_{J,{I,J}} = 0")
        else:
            notes.append("hypothesis not met: (J, I) Poisson-Nijenhuis")
        return PNHierarchy(NOT_APPLICABLE, [], {}, notes)
    EI, EJ = _endo(I), _endo(J)
    funcs = [func_of(h.pw(EI, n) @ EJ) for n in range(n_max + 1)]
    entries = []
    compat = {}
    for n, f in enumerate(funcs):
        entries.append(HierarchyEntry(n, f, {k: h.deform(h.tk(k), f, f).is_zero() for k in range(k_max + 1)}))
    for k in range(k_max + 1):
        tk = h.tk(k)
        for m in range(n_max + 1):
            for n in range(n_max + 1):
                compat[(k, m, n)] = h.deform(tk, funcs[m], funcs[n]).is_zero()
    out = PNHierarchy(PASSED, entries, compat, notes)
    if not (out.all_poisson and out.all_compatible):
        out.status = FAILED
    return out
