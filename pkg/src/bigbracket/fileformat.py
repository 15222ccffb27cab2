"""Line-oriented structure definitions and deterministic reports.

Grammar (one directive per line, ``#`` starts a comment)::

    name <instance-name>
    signature <n> <d>
    theta <coef> <gen> <gen> ...              a term of Theta (repeatable)
    tensor <NAME> function                    a skew tensor as a degree-2 function
      term <coef> <gen> <gen> ...
    end
    tensor <NAME> matrix                      any (1,1)-tensor as a 2d x 2d matrix
      row <entry> ... <entry>                 columns theta^1..theta^d, xi_1..xi_d
    end
    roles I=<NAME> J=<NAME>                   default role binding for tasks
    task <T-xx|all> [k=2 m=3 ...] [I=<NAME>] [J=<NAME>]

Coefficients are exact rationals ``p/q``; generators are ``x<i>``, ``p<i>``,
``xi<a>``, ``theta<a>`` with an optional ``^e`` on even ones. Matrix entries
are polynomials in ``x`` written without spaces, e.g. ``-1/2*x1^2+x2``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .grading import AlgebraSignature, Generator, SuperPolynomial, normalize
from .tensors import Endomorphism, TensorFunction, func_of

__all__ = [
    "ParseError",
    "TaskSpec",
    "SetupDefinition",
    "parse_definition",
    "emit_definition",
    "parse_polynomial",
    "render_rational",
    "emit_report",
    "jsonable",
]

ROLES = ("I", "J")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class TaskSpec:
    identity_id: str
    params: dict = field(default_factory=dict)
    roles: dict = field(default_factory=dict)

    def render(self) -> str:
        parts = [self.identity_id]
        parts += [f"{k}={v}" for k, v in sorted(self.params.items())]
        parts += [f"{k}={v}" for k, v in sorted(self.roles.items())]
        return " ".join(parts)


@dataclass
class SetupDefinition:
    name: str
    signature: AlgebraSignature
    theta: SuperPolynomial
    tensors: dict = field(default_factory=dict)
    roles: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)

    def tensor_for(self, task: TaskSpec, role: str):
        name = task.roles.get(role, self.roles.get(role))
        return None if name is None else self.tensors[name]

    def echo(self) -> dict:
        return {
            "name": self.name,
            "signature": [self.signature.n, self.signature.d],
            "theta": str(self.theta),
            "tensors": {k: _tensor_str(v) for k, v in self.tensors.items()},
            "roles": dict(self.roles),
        }


def _tensor_str(T) -> str:
    if isinstance(T, TensorFunction):
        return str(T.value)
    return "[" + "; ".join(" ".join(str(e) for e in row) for row in T.matrix) + "]"


def render_rational(c) -> str:
    c = Fraction(c)
    return str(c)


_COEF_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_GEN_RE = re.compile(r"^(xi|theta|x|p)(\d+)(\^(\d+))?$")


def _norm_minus(s: str) -> str:
    return s.replace("−", "-")


def _coef(token: str, line: int, col: int) -> Fraction:
    token = _norm_minus(token)
    if not _COEF_RE.match(token):
        raise ParseError(f"bad rational coefficient {token!r}", line, col)
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {token!r}", line, col) from None


def _word(tokens: list, line: int, cols: list, sig: Optional[AlgebraSignature] = None) -> list:
    out = []
    for tok, col in zip(tokens, cols):
        m = _GEN_RE.match(tok)
        if not m:
            raise ParseError(f"bad generator {tok!r}", line, col)
        kind, idx, exp = m.group(1), int(m.group(2)), int(m.group(4) or 1)
        if exp != 1 and kind in ("xi", "theta"):
            raise ParseError(f"odd generator {tok!r} cannot carry a power", line, col)
        if sig is not None:
            try:
                sig.check(kind, idx)
            except ValueError as exc:
                raise ParseError(str(exc), line, col) from None
        out += [Generator(kind, idx)] * exp
    return out


def parse_polynomial(sig: AlgebraSignature, text: str, line: int = 1, column: int = 1) -> SuperPolynomial:
    """A polynomial in ``x`` (and possibly other generators) with no spaces, e.g. ``3/2*x1^2-x2``."""
    text = _norm_minus(text)
    if not text:
        raise ParseError("empty polynomial", line, column)
    terms = []
    pos = 0
    for m in re.finditer(r"[+-]?[^+-]+", text):
        if m.start() != pos:
            raise ParseError(f"bad polynomial {text!r}", line, column + pos)
        pos = m.end()
        piece = m.group(0)
        sign = -1 if piece.startswith("-") else 1
        piece = piece.lstrip("+-")
        factors = piece.split("*")
        coef = Fraction(sign)
        gens = []
        for f in factors:
            if _COEF_RE.match(f):
                coef *= _coef(f, line, column + m.start())
            else:
                gens += _word([f], line, [column + m.start()], sig)
        terms.append((gens, coef))
    if pos != len(text):
        raise ParseError(f"bad polynomial {text!r}", line, column + pos)
    try:
        return normalize(sig, terms)
    except ValueError as exc:
        raise ParseError(str(exc), line, column) from None


def _tokens(raw: str):
    """Whitespace tokens with 1-based columns."""
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", raw)]


def _kv(tok: str, col: int, line: int):
    key, sep, val = tok.partition("=")
    if not sep or not key or not val:
        raise ParseError(f"expected key=value, got {tok!r}", line, col)
    return key, val


def parse_definition(text: str) -> SetupDefinition:
    name = "unnamed"
    sig: Optional[AlgebraSignature] = None
    theta_terms = []
    tensors: dict = {}
    roles: dict = {}
    tasks: list = []
    pending_tasks = []
    block = None  # (name, kind, start line, rows or terms)

    def need_sig(line, col):
        if sig is None:
            raise ParseError("signature must come first", line, col)
        return sig

    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw.split("#", 1)[0])
        if not toks:
            continue
        head, hcol = toks[0]
        args = toks[1:]
        if block is not None:
            bname, kind, bstart, items = block
            if head == "end":
                tensors[bname] = _finish_tensor(sig, bname, kind, items, bstart)
                block = None
            elif head == "term" and kind == "function":
                if not args:
                    raise ParseError("term needs a coefficient", lineno, hcol)
                c = _coef(args[0][0], lineno, args[0][1])
                w = _word([t for t, _ in args[1:]], lineno, [c_ for _, c_ in args[1:]], sig)
                items.append((w, c, lineno))
            elif head == "row" and kind == "matrix":
                items.append(([parse_polynomial(sig, t, lineno, c) for t, c in args], lineno))
            else:
                raise ParseError(f"unexpected {head!r} inside tensor {bname}", lineno, hcol)
            continue
        if head == "name":
            if len(args) != 1:
                raise ParseError("name takes one token", lineno, hcol)
            name = args[0][0]
        elif head == "signature":
            if sig is not None:
                raise ParseError("duplicate signature", lineno, hcol)
            if len(args) != 2 or not all(t.isdigit() for t, _ in args):
                raise ParseError("signature takes two non-negative integers n d", lineno, hcol)
            n, d = int(args[0][0]), int(args[1][0])
            if d < 1:
                raise ParseError("d must be positive", lineno, args[1][1])
            sig = AlgebraSignature(n, d)
        elif head == "theta":
            need_sig(lineno, hcol)
            if not args:
                raise ParseError("theta needs a coefficient", lineno, hcol)
            c = _coef(args[0][0], lineno, args[0][1])
            w = _word([t for t, _ in args[1:]], lineno, [c_ for _, c_ in args[1:]], sig)
            theta_terms.append((w, c, lineno))
        elif head == "tensor":
            need_sig(lineno, hcol)
            if len(args) != 2 or args[1][0] not in ("function", "matrix"):
                raise ParseError("expected: tensor NAME function|matrix", lineno, hcol)
            tname = args[0][0]
            if tname in tensors:
                raise ParseError(f"duplicate tensor name {tname!r}", lineno, args[0][1])
            block = (tname, args[1][0], lineno, [])
        elif head == "roles":
            for tok, col in args:
                k, v = _kv(tok, col, lineno)
                if k not in ROLES:
                    raise ParseError(f"unknown role {k!r}", lineno, col)
                roles[k] = (v, lineno, col)
        elif head == "task":
            if not args:
                raise ParseError("task needs an identity id", lineno, hcol)
            tid = args[0][0]
            if not (tid == "all" or re.fullmatch(r"T-\d\d", tid)):
                raise ParseError(f"bad task id {tid!r}", lineno, args[0][1])
            params, troles = {}, {}
            for tok, col in args[1:]:
                k, v = _kv(tok, col, lineno)
                if k in ROLES:
                    troles[k] = (v, lineno, col)
                elif v.isdigit():
                    params[k] = int(v)
                else:
                    raise ParseError(f"parameter {k} must be a non-negative integer", lineno, col)
            pending_tasks.append((tid, params, troles, lineno, args[0][1]))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, hcol)
    if block is not None:
        raise ParseError(f"tensor {block[0]} is missing 'end'", block[2])
    if sig is None:
        raise ParseError("missing signature", 1)
    try:
        theta = normalize(sig, [(w, c) for w, c, _ in theta_terms])
    except ValueError as exc:
        raise ParseError(str(exc), theta_terms[0][2] if theta_terms else 1) from None
    if not theta.is_zero() and theta.degrees() != {3}:
        raise ParseError("theta must be homogeneous of degree 3", theta_terms[0][2])

    def resolve(rmap):
        out = {}
        for k, (v, ln, col) in rmap.items():
            if v not in tensors:
                raise ParseError(f"unknown tensor {v!r}", ln, col)
            out[k] = v
        return out

    roles_out = resolve(roles)
    for tid, params, troles, ln, col in pending_tasks:
        if tid != "all":
            from .hierarchy import IDENTITIES

            if tid not in IDENTITIES:
                raise ParseError(f"unknown identity {tid!r}", ln, col)
        tasks.append(TaskSpec(tid, params, resolve(troles)))
    return SetupDefinition(name, sig, theta, tensors, roles_out, tasks)


def _finish_tensor(sig, name, kind, items, line):
    if kind == "function":
        try:
            f = normalize(sig, [(w, c) for w, c, _ in items])
            return TensorFunction(f)
        except ValueError as exc:
            raise ParseError(f"tensor {name}: {exc}", line) from None
    size = 2 * sig.d
    rows = [r for r, _ in items]
    if len(rows) != size or any(len(r) != size for r in rows):
        raise ParseError(f"tensor {name}: expected a {size}x{size} matrix", line)
    E = Endomorphism(sig, rows)
    return TensorFunction(func_of(E)) if E.is_skew() else E


def _term_lines(prefix: str, poly: SuperPolynomial) -> list:
    d = poly.signature.d
    out = []
    for m, c in poly.sorted_terms():
        words = " ".join(m.words(d))
        out.append(f"{prefix} {render_rational(c)} {words}".rstrip())
    return out


def _poly_token(f: SuperPolynomial) -> str:
    if f.is_zero():
        return "0"
    d = f.signature.d
    parts = []
    for m, c in f.sorted_terms():
        ws = m.words(d)
        if not ws:
            parts.append(render_rational(c))
        else:
            mono = "*".join(ws)
            parts.append(mono if c == 1 else "-" + mono if c == -1 else f"{render_rational(c)}*{mono}")
    s = "+".join(parts)
    return s.replace("+-", "-")


def emit_definition(defn: SetupDefinition) -> str:
    lines = [f"name {defn.name}", f"signature {defn.signature.n} {defn.signature.d}"]
    lines += _term_lines("theta", defn.theta)
    for tname, T in defn.tensors.items():
        if isinstance(T, TensorFunction):
            lines.append(f"tensor {tname} function")
            lines += ["  " + s for s in _term_lines("term", T.value)]
        else:
            lines.append(f"tensor {tname} matrix")
            lines += ["  row " + " ".join(_poly_token(e) for e in row) for row in T.matrix]
        lines.append("end")
    if defn.roles:
        lines.append("roles " + " ".join(f"{k}={v}" for k, v in sorted(defn.roles.items())))
    for t in defn.tasks:
        lines.append("task " + t.render())
    return "\n".join(lines) + "\n"


def jsonable(obj):
    """Exact JSON rendering: Fractions become ``"p/q"`` strings."""
    if isinstance(obj, Fraction):
        return render_rational(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, SuperPolynomial):
        return str(obj)
    return obj


def emit_report(report: dict, fmt: str = "json") -> str:
    """Serialise a report dict ``{setup, tasks, summary}``; byte-stable for equal inputs."""
    if fmt == "json":
        return json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    for t in report.get("tasks", []):
        line = f"{t['id']:5s} {t['instance']:22s} {t['status']:15s} checks={t['checks']} residual_terms={t['residual_terms']}"
        lines.append(line)
        for note in t.get("notes", []):
            lines.append(f"      {note}")
        for r in t.get("residuals", []):
            lines.append(f"      residual at {r['at']}: {r['value']}")
    s = report["summary"]
    lines.append(f"passed={s['passed']} failed={s['failed']} not-applicable={s['not-applicable']}")
    return "\n".join(lines) + "\n"
