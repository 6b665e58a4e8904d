"""Line-oriented state-description language.

::

    dims 2 2
    ket k = (0.7071+0i)|0,0> + (0.7071+0i)|1,1>
    rho R = proj(k)
    rho S = mix 0.5 kron(P, Q) 0.5 classical_corr
    rho T = tripartite(0.5, 0.5).AB
    analyze R
    teleport S with 0.6 0.8
    compare (0.7071+0i) (0.7071+0i)

Kets are normalized when defined. A two-label ket lives on the declared
``dims n m``; a one-label ket is a single system of dimension ``n``. A
``matrix [..;..]`` literal of size ``n*m`` is bipartite, any other size is a
single system. ``tripartite`` uses dims ``(n, m, m)`` for A, B, C.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from densig.errors import DimsError, ParseError, UndefinedNameError

_FLOAT = r"-?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?"
_TOKEN = re.compile(
    rf"""
    (?P<ws>\s+)
  | (?P<comment>\#.*)
  | (?P<complex>\(\s*(?P<re>{_FLOAT})\s*(?P<sign>[-+])\s*(?P<im>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)\s*i\s*\))
  | (?P<float>{_FLOAT})
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()\[\],;=|>+.])
    """,
    re.VERBOSE,
)

BUILTINS = ("classical_corr", "bell")
KEYWORDS = frozenset(
    ("dims", "ket", "rho", "analyze", "teleport", "with", "compare", "proj", "kron", "mix", "matrix", "tripartite")
    + BUILTINS
)
PAIRS = ("AB", "AC", "BC")


@dataclass(frozen=True)
class Token:
    kind: str  # complex | float | name | punct | eol
    text: str
    col: int
    value: object = None


def tokenize(line: str, lineno: int) -> list[Token]:
    toks = []
    pos = 0
    while pos < len(line):
        mt = _TOKEN.match(line, pos)
        if mt is None:
            raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
        kind = mt.lastgroup
        text = mt.group(0)
        col = pos + 1
        pos = mt.end()
        if kind == "ws":
            continue
        if kind == "comment":
            break
        if kind == "complex":
            im = float(mt.group("im"))
            value = complex(float(mt.group("re")), -im if mt.group("sign") == "-" else im)
            toks.append(Token("complex", text, col, value))
        elif kind == "float":
            toks.append(Token("float", text, col, float(text)))
        else:
            toks.append(Token(kind, text, col))
    toks.append(Token("eol", "", len(line) + 1))
    return toks


# --- expression nodes -------------------------------------------------------


@dataclass(frozen=True)
class Ref:
    name: str
    col: int = 0


@dataclass(frozen=True)
class Proj:
    ket: str
    col: int = 0


@dataclass(frozen=True)
class Kron:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mix:
    terms: tuple  # ((weight, Expr), ...)


@dataclass(frozen=True)
class MatrixLit:
    rows: tuple  # tuple of tuples of complex


@dataclass(frozen=True)
class Builtin:
    name: str


@dataclass(frozen=True)
class Tripartite:
    weights: tuple
    keep: str


Expr = Union[Ref, Proj, Kron, Mix, MatrixLit, Builtin, Tripartite]


# --- statements -------------------------------------------------------------


@dataclass(frozen=True)
class DimsStmt:
    line: int
    n: int
    m: int


@dataclass(frozen=True)
class KetDef:
    line: int
    name: str
    terms: tuple  # ((amplitude, labels), ...)
    dims: tuple


@dataclass(frozen=True)
class RhoDef:
    line: int
    name: str
    expr: Expr
    dims: tuple


@dataclass(frozen=True)
class Analyze:
    line: int
    name: str


@dataclass(frozen=True)
class Teleport:
    line: int
    name: str
    c1: complex
    c2: complex


@dataclass(frozen=True)
class Compare:
    line: int
    c1: complex
    c2: complex


Statement = Union[DimsStmt, KetDef, RhoDef, Analyze, Teleport, Compare]


@dataclass(frozen=True)
class StateProgram:
    statements: tuple

    @property
    def actions(self) -> list:
        return [s for s in self.statements if isinstance(s, (Analyze, Teleport, Compare))]

    def source(self) -> str:
        """Canonical source text; parsing it yields an equivalent program."""
        return "".join(format_statement(s) + "\n" for s in self.statements)


# --- canonical formatting ---------------------------------------------------


def format_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if str(z.imag).startswith("-") else "+"
    return f"({z.real!r}{sign}{abs(z.imag)!r}i)"


def format_expr(e: Expr) -> str:
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, Proj):
        return f"proj({e.ket})"
    if isinstance(e, Kron):
        return f"kron({format_expr(e.left)}, {format_expr(e.right)})"
    if isinstance(e, Mix):
        return "mix " + " ".join(f"{w!r} {format_expr(x)}" for w, x in e.terms)
    if isinstance(e, MatrixLit):
        rows = "; ".join(", ".join(format_complex(z) for z in row) for row in e.rows)
        return f"matrix [{rows}]"
    if isinstance(e, Builtin):
        return e.name
    if isinstance(e, Tripartite):
        return "tripartite(" + ", ".join(repr(w) for w in e.weights) + f").{e.keep}"
    raise TypeError(f"unknown expression {e!r}")


def format_statement(s: Statement) -> str:
    if isinstance(s, DimsStmt):
        return f"dims {s.n} {s.m}"
    if isinstance(s, KetDef):
        terms = " + ".join(f"{format_complex(a)}|{','.join(map(str, lab))}>" for a, lab in s.terms)
        return f"ket {s.name} = {terms}"
    if isinstance(s, RhoDef):
        return f"rho {s.name} = {format_expr(s.expr)}"
    if isinstance(s, Analyze):
        return f"analyze {s.name}"
    if isinstance(s, Teleport):
        return f"teleport {s.name} with {format_complex(s.c1)} {format_complex(s.c2)}"
    if isinstance(s, Compare):
        return f"compare {format_complex(s.c1)} {format_complex(s.c2)}"
    raise TypeError(f"unknown statement {s!r}")


# --- parser -----------------------------------------------------------------


class _Line:
    def __init__(self, toks: list[Token], lineno: int):
        self.toks = toks
        self.i = 0
        self.lineno = lineno

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eol":
            self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None, cls=ParseError):
        tok = tok or self.tok
        return cls(msg, self.lineno, tok.col)

    def expect(self, text: str) -> Token:
        t = self.tok
        if t.text != text or t.kind not in ("punct", "name"):
            found = "end of line" if t.kind == "eol" else repr(t.text)
            raise self.error(f"expected {text!r}, found {found}")
        return self.next()

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("punct", "name"):
            self.next()
            return True
        return False

    def name(self, what: str = "name") -> Token:
        t = self.tok
        if t.kind != "name":
            raise self.error(f"expected {what}")
        return self.next()

    def new_name(self) -> Token:
        t = self.name()
        if t.text in KEYWORDS:
            raise self.error(f"{t.text!r} is a reserved word", t)
        return t

    def integer(self, what: str = "integer") -> int:
        t = self.tok
        if t.kind != "float" or not re.fullmatch(r"\d+", t.text):
            raise self.error(f"expected {what}")
        self.next()
        return int(t.text)

    def real(self) -> float:
        t = self.tok
        if t.kind != "float":
            raise self.error("expected a number")
        self.next()
        return t.value

    def complex(self) -> complex:
        t = self.tok
        if t.kind == "complex":
            self.next()
            return t.value
        if t.kind == "float":
            self.next()
            return complex(t.value)
        raise self.error("expected a complex number like (0.6+0i) or 0.6")

    def end(self):
        if self.tok.kind != "eol":
            raise self.error(f"unexpected {self.tok.text!r}")


class _Parser:
    def __init__(self):
        self.n, self.m = 2, 2
        self.kets: dict[str, tuple] = {}
        self.rhos: dict[str, tuple] = {}
        self.statements: list = []

    def _define(self, ln: _Line, tok: Token):
        if tok.text in self.kets or tok.text in self.rhos:
            raise ln.error(f"name {tok.text!r} is already defined", tok)

    def line(self, ln: _Line):
        head = ln.tok
        if head.kind == "eol":
            return
        if head.kind != "name":
            raise ln.error("expected a statement keyword")
        kw = head.text
        ln.next()
        handler = {
            "dims": self.dims,
            "ket": self.ket,
            "rho": self.rho,
            "analyze": self.analyze,
            "teleport": self.teleport,
            "compare": self.compare,
        }.get(kw)
        if handler is None:
            raise ln.error(f"unknown statement {kw!r}", head)
        stmt = handler(ln)
        ln.end()
        self.statements.append(stmt)

    def dims(self, ln: _Line):
        tok_n = ln.tok
        n = ln.integer("dimension")
        tok_m = ln.tok
        m = ln.integer("dimension")
        if n < 1 or m < 1:
            raise ln.error("dimensions must be positive", tok_n if n < 1 else tok_m, DimsError)
        self.n, self.m = n, m
        return DimsStmt(ln.lineno, n, m)

    def ket(self, ln: _Line):
        name = ln.new_name()
        self._define(ln, name)
        ln.expect("=")
        terms = []
        dims = None
        while True:
            amp = ln.complex()
            ln.expect("|")
            labels = []
            label_toks = []
            while True:
                label_toks.append(ln.tok)
                labels.append(ln.integer("basis label"))
                if not ln.accept(","):
                    break
            ln.expect(">")
            if len(labels) == 1:
                tdims = (self.n,)
            elif len(labels) == 2:
                tdims = (self.n, self.m)
            else:
                raise ln.error("kets take one or two basis labels", label_toks[2], DimsError)
            if dims is not None and tdims != dims:
                raise ln.error("all terms of a ket need the same number of labels", label_toks[0], DimsError)
            dims = tdims
            for lab, d, t in zip(labels, dims, label_toks):
                if lab >= d:
                    raise ln.error(f"basis label {lab} out of range for dimension {d}", t, DimsError)
            terms.append((amp, tuple(labels)))
            if not ln.accept("+"):
                break
        self.kets[name.text] = dims
        return KetDef(ln.lineno, name.text, tuple(terms), dims)

    def rho(self, ln: _Line):
        name = ln.new_name()
        self._define(ln, name)
        ln.expect("=")
        expr, dims = self.rexpr(ln)
        self.rhos[name.text] = dims
        return RhoDef(ln.lineno, name.text, expr, dims)

    def rexpr(self, ln: _Line) -> tuple[Expr, tuple]:
        t = ln.tok
        if t.kind != "name":
            raise ln.error("expected a state expression")
        ln.next()
        word = t.text
        if word == "proj":
            ln.expect("(")
            k = ln.name("ket name")
            if k.text not in self.kets:
                if k.text in self.rhos:
                    raise ln.error(f"{k.text!r} is a rho, proj() takes a ket", k)
                raise ln.error(f"undefined ket {k.text!r}", k, UndefinedNameError)
            ln.expect(")")
            return Proj(k.text, k.col), self.kets[k.text]
        if word == "kron":
            ln.expect("(")
            left_tok = ln.tok
            left, ld = self.rexpr(ln)
            ln.expect(",")
            right, rd = self.rexpr(ln)
            ln.expect(")")
            if len(ld) + len(rd) > 2:
                raise ln.error("kron operands must both be single-system states", left_tok, DimsError)
            return Kron(left, right), ld + rd
        if word == "mix":
            terms = []
            dims = None
            while ln.tok.kind == "float":
                w = ln.real()
                etok = ln.tok
                e, d = self.rexpr(ln)
                if dims is not None and d != dims:
                    raise ln.error(f"mixture term has dims {d}, expected {dims}", etok, DimsError)
                dims = d
                terms.append((w, e))
            if not terms:
                raise ln.error("mix needs at least one 'weight state' pair")
            return Mix(tuple(terms)), dims
        if word == "matrix":
            return self.matrix(ln)
        if word in BUILTINS:
            return Builtin(word), (2, 2)
        if word == "tripartite":
            ln.expect("(")
            weights = [ln.real()]
            while ln.accept(","):
                weights.append(ln.real())
            close = ln.tok
            ln.expect(")")
            ln.expect(".")
            k = ln.name("AB, AC or BC")
            if k.text not in PAIRS:
                raise ln.error(f"expected AB, AC or BC, found {k.text!r}", k)
            full = (self.n, self.m, self.m)
            if len(weights) > min(full):
                raise ln.error(f"{len(weights)} terms do not fit in dims {full}", close, DimsError)
            pair = {"AB": (0, 1), "AC": (0, 2), "BC": (1, 2)}[k.text]
            return Tripartite(tuple(weights), k.text), tuple(full[p] for p in pair)
        if word in KEYWORDS:
            raise ln.error(f"{word!r} cannot start a state expression", t)
        if word in self.rhos:
            return Ref(word, t.col), self.rhos[word]
        if word in self.kets:
            raise ln.error(f"{word!r} is a ket; use proj({word})", t)
        raise ln.error(f"undefined state {word!r}", t, UndefinedNameError)

    def matrix(self, ln: _Line):
        open_tok = ln.tok
        ln.expect("[")
        rows = [[ln.complex()]]
        while True:
            if ln.accept(","):
                rows[-1].append(ln.complex())
            elif ln.accept(";"):
                rows.append([ln.complex()])
            else:
                break
        ln.expect("]")
        k = len(rows)
        if any(len(r) != k for r in rows):
            raise ln.error(f"matrix must be square, got {k} rows of lengths {[len(r) for r in rows]}", open_tok, DimsError)
        dims = (self.n, self.m) if k == self.n * self.m else (k,)
        return MatrixLit(tuple(tuple(r) for r in rows)), dims

    def _state_ref(self, ln: _Line) -> Token:
        t = ln.name("state name")
        if t.text not in self.rhos:
            if t.text in self.kets:
                raise ln.error(f"{t.text!r} is a ket; define a rho with proj({t.text})", t)
            raise ln.error(f"undefined state {t.text!r}", t, UndefinedNameError)
        return t

    def analyze(self, ln: _Line):
        t = self._state_ref(ln)
        if len(self.rhos[t.text]) != 2:
            raise ln.error(f"analyze needs a bipartite state, {t.text!r} has dims {self.rhos[t.text]}", t, DimsError)
        return Analyze(ln.lineno, t.text)

    def teleport(self, ln: _Line):
        t = self._state_ref(ln)
        if self.rhos[t.text] != (2, 2):
            raise ln.error(f"teleport needs a 2x2 channel, {t.text!r} has dims {self.rhos[t.text]}", t, DimsError)
        ln.expect("with")
        c1 = ln.complex()
        c2 = ln.complex()
        return Teleport(ln.lineno, t.text, c1, c2)

    def compare(self, ln: _Line):
        c1 = ln.complex()
        c2 = ln.complex()
        return Compare(ln.lineno, c1, c2)


def parse_state_spec(text: str) -> StateProgram:
    """Parse program text; errors carry 1-based line and column."""
    p = _Parser()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        p.line(_Line(tokenize(raw, lineno), lineno))
    return StateProgram(tuple(p.statements))
