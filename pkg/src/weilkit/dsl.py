"""Scheme-description language: tokenizer, polynomial syntax and sessions.

Example session::

    field k = GF(2)
    algebra L = k[t]/(t^2 + t + 1)
    scheme G over L = [x, y]/(x*y - 1)
    verify adjunction G over GF(2)

Declarations and commands are separated by newlines or ``;``; ``#`` starts
a comment.  Errors carry the line and column of the offending token and the
set of tokens that would have been accepted there.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import WeilkitError


class DSLError(WeilkitError):
    kind = "DSLError"

    def __init__(self, message, line=None, column=None, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        where = f"{line}:{column}: " if line is not None else ""
        hint = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{hint}")
        self.message = message


class DSLSyntaxError(DSLError):
    kind = "SyntaxError"


class DSLNameError(DSLError):
    kind = "NameError"


class DSLTypeMismatch(DSLError):
    kind = "TypeMismatch"


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, INT, OP, NEWLINE, EOF
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>->|[-+*/^()\[\],;:=.])
""", re.VERBOSE)


def tokenize(text):
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "newline" or (kind == "op" and chunk == ";"):
            tokens.append(Token("NEWLINE", chunk, line, col))
        elif kind == "int":
            tokens.append(Token("INT", chunk, line, col))
        elif kind == "name":
            tokens.append(Token("NAME", chunk, line, col))
        elif kind == "op":
            tokens.append(Token("OP", chunk, line, col))
        if kind == "newline":
            line, col = line + 1, 1
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("EOF", "", line, col))
    return tokens


class TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset=0):
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def at(self, text=None, kind=None):
        tok = self.peek()
        if kind is not None and tok.kind != kind:
            return False
        return text is None or tok.text == text

    def accept(self, text=None, kind=None):
        if self.at(text, kind):
            return self.next()
        return None

    def expect(self, text=None, kind=None, expected=None):
        if (text is not None or kind is not None) and self.at(text, kind):
            return self.next()
        self.fail(expected or ([repr(text)] if text is not None else [kind]))

    def fail(self, want):
        tok = self.peek()
        found = repr(tok.text) if tok.kind != "EOF" else "end of input"
        if tok.kind == "NEWLINE":
            found = "end of line"
        raise DSLSyntaxError(f"unexpected {found}", tok.line, tok.column, want)


# -- polynomials

_ATOM_START = ("INT", "NAME", "'('", "'-'")


class PolyParser:
    """Recursive-descent parser for polynomial expressions in a fixed ring."""

    def __init__(self, stream, ring, generator="t"):
        self.s = stream
        self.ring = ring
        from .fields import EtaleAlgebra
        self.algebra = ring.domain if isinstance(ring.domain, EtaleAlgebra) else None
        self.generator = generator

    def expr(self):
        neg = self.s.accept("-")
        value = self.term()
        if neg:
            value = -value
        while self.s.at("+") or self.s.at("-"):
            op = self.s.next().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.power()
        while self.s.at("*") or self.s.at("/"):
            op = self.s.next()
            rhs = self.power()
            if op.text == "*":
                value = value * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise DSLTypeMismatch("division by a non-constant or zero", op.line, op.column)
                value = value.scale(self.ring.domain.inv(rhs.constant_term()))
        return value

    def power(self):
        base = self.atom()
        if self.s.accept("^"):
            tok = self.s.expect(kind="INT", expected=["INT"])
            return base ** int(tok.text)
        return base

    def atom(self):
        tok = self.s.peek()
        if tok.kind == "INT":
            self.s.next()
            return self.ring.coerce(self.ring.domain.convert(Fraction(int(tok.text))))
        if tok.kind == "NAME":
            self.s.next()
            if tok.text in self.ring.variables:
                return self.ring.var(tok.text)
            if self.algebra is not None and tok.text == self.generator:
                return self.ring.const(self.algebra.gen)
            raise DSLNameError(f"unknown variable {tok.text!r}", tok.line, tok.column,
                               list(self.ring.variables))
        if tok.text == "-":
            self.s.next()
            return -self.atom()
        if self.s.accept("("):
            value = self.expr()
            self.s.expect(")")
            return value
        self.s.fail(_ATOM_START)


def parse_poly(text, ring):
    stream = TokenStream([t for t in tokenize(text) if t.kind != "NEWLINE"])
    value = PolyParser(stream, ring).expr()
    stream.expect(kind="EOF", expected=["end of input"])
    return value


# -- sessions

VERIFY_TARGETS = {
    "adjunction": ("scheme",),
    "triangles": ("scheme",),
    "base-change": ("scheme", "scheme"),
    "fiber-product": ("morphism", "morphism"),
    "preserves-closed": ("morphism",),
    "preserves-smooth": ("scheme", "int?"),
    "preserves-etale": ("morphism",),
    "norm-open": ("scheme", "poly"),
    "bundle": ("bundle",),
    "zero-section": ("bundle",),
    "normal": ("scheme",),
    "thom": ("bundle",),
    "step2": ("bundle",),
    "gysin-shadow": ("scheme",),
    "galois-split": ("scheme",),
    "affine-shadow": ("scheme", "int?"),
}

_DECLS = ("field", "algebra", "scheme", "morphism", "bundle")
_VERBS = ("restrict", "points", "verify")


@dataclass
class Declaration:
    kind: str
    name: str
    value: object
    line: int
    column: int


@dataclass(frozen=True)
class FieldSpec:
    """A finite test algebra named in a command: ``GF(q)``, ``GF(q)[eps]`` or an algebra."""
    kind: str  # "field", "dual" or "algebra"
    p: int = 0
    s: int = 1
    algebra: str = ""

    def __str__(self):
        if self.kind == "algebra":
            return self.algebra
        q = f"{self.p}^{self.s}" if self.s > 1 else f"{self.p}"
        return f"GF({q})" + ("[eps]" if self.kind == "dual" else "")


@dataclass
class Command:
    verb: str
    target: str
    args: list
    fields: list = None
    text: str = ""
    line: int = 0
    column: int = 0


@dataclass
class Session:
    declarations: dict = field(default_factory=dict)
    commands: list = field(default_factory=list)
    options: dict = field(default_factory=dict)

    def get(self, name):
        return self.declarations[name].value


def _prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            s, r = 0, q
            while r % p == 0:
                r //= p
                s += 1
            return (p, s) if r == 1 else None
    return None


class SessionParser:
    def __init__(self, text):
        self.text = text
        self.lines = text.split("\n")
        self.s = TokenStream(tokenize(text))
        self.session = Session()

    def parse(self):
        s = self.s
        while True:
            while s.accept(kind="NEWLINE"):
                pass
            if s.at(kind="EOF"):
                return self.session
            tok = s.peek()
            if tok.kind == "NAME" and tok.text in _DECLS:
                getattr(self, "decl_" + tok.text)()
            elif tok.kind == "NAME" and tok.text in _VERBS:
                self.command()
            else:
                s.fail([repr(k) for k in _DECLS + _VERBS])
            if not s.at(kind="EOF"):
                s.expect(kind="NEWLINE", expected=["end of line", "';'"])

    # helpers

    def new_name(self):
        tok = self.s.expect(kind="NAME", expected=["NAME"])
        if tok.text in self.session.declarations:
            raise DSLNameError(f"{tok.text!r} is already declared", tok.line, tok.column)
        return tok

    def ref(self, *kinds):
        tok = self.s.expect(kind="NAME", expected=["NAME"])
        decl = self.session.declarations.get(tok.text)
        if decl is None:
            known = [n for n, d in self.session.declarations.items() if d.kind in kinds]
            raise DSLNameError(f"undefined name {tok.text!r}", tok.line, tok.column, known)
        if decl.kind not in kinds:
            raise DSLTypeMismatch(f"{tok.text!r} is a {decl.kind}, expected {' or '.join(kinds)}",
                                  tok.line, tok.column)
        return decl.value, tok

    def add(self, kind, tok, value):
        if hasattr(value, "name") and getattr(value, "name", None) is None:
            value.name = tok.text
        self.session.declarations[tok.text] = Declaration(kind, tok.text, value, tok.line, tok.column)

    def names(self, close):
        out = []
        if self.s.at(close):
            return out
        while True:
            tok = self.s.expect(kind="NAME", expected=["NAME"])
            if tok.text in out:
                raise DSLNameError(f"duplicate variable {tok.text!r}", tok.line, tok.column)
            out.append(tok.text)
            if not self.s.accept(","):
                return out

    def poly(self, ring, generator="t"):
        return PolyParser(self.s, ring, generator).expr()

    def polys(self, ring, generator="t"):
        out = []
        if self.s.at(")"):
            return out
        while True:
            out.append(self.poly(ring, generator))
            if not self.s.accept(","):
                return out

    def paren_polys(self, ring, generator="t"):
        self.s.expect("(")
        out = self.polys(ring, generator)
        self.s.expect(")", expected=["','", "')'"])
        return out

    def generator_of(self, base):
        from .fields import EtaleAlgebra
        return base.name if isinstance(base, EtaleAlgebra) else "t"

    # declarations

    def decl_field(self):
        self.s.next()
        name = self.new_name()
        self.s.expect("=")
        from .fields import GF, QQ
        tok = self.s.expect(kind="NAME", expected=["'QQ'", "'GF'"])
        if tok.text == "QQ":
            self.add("field", name, QQ)
            return
        if tok.text != "GF":
            raise DSLSyntaxError(f"unexpected {tok.text!r}", tok.line, tok.column, ["'QQ'", "'GF'"])
        self.s.expect("(")
        q = self.s.expect(kind="INT", expected=["INT"])
        self.s.expect(")")
        pp = _prime_power(int(q.text))
        if pp is None or pp[1] != 1:
            raise DSLTypeMismatch(f"GF({q.text}) is not a prime field; declare an algebra over GF(p)",
                                  q.line, q.column)
        self.add("field", name, GF(pp[0]))

    def decl_algebra(self):
        from .fields import EtaleAlgebra
        from .errors import NotMonic, NotSeparable
        from .poly import PolyRing
        self.s.next()
        name = self.new_name()
        self.s.expect("=")
        base, _ = self.ref("field")
        self.s.expect("[")
        gen = self.s.expect(kind="NAME", expected=["NAME"]).text
        self.s.expect("]")
        self.s.expect("/")
        self.s.expect("(")
        where = self.s.peek()
        f = self.poly(PolyRing(base, (gen,)))
        self.s.expect(")")
        coeffs = [f.terms.get((k,), base.zero) for k in range(f.degree() + 1)] if not f.is_zero() else []
        try:
            L = EtaleAlgebra(base, coeffs, name=gen)
        except (NotSeparable, NotMonic) as exc:
            raise DSLTypeMismatch(f"{type(exc).__name__}: {exc}", where.line, where.column) from None
        self.add("algebra", name, L)

    def decl_scheme(self):
        from .poly import PolyRing
        from .scheme import AffineScheme, closed_subscheme, distinguished_open, relative_scheme
        self.s.next()
        name = self.new_name()
        if self.s.accept("over"):
            base, _ = self.ref("field", "algebra")
            self.s.expect("=")
            self.s.expect("[")
            variables = self.names("]")
            self.s.expect("]", expected=["','", "']'"])
            gens = []
            if self.s.accept("/"):
                gens = self.paren_polys(PolyRing(base, variables), self.generator_of(base))
            self.add("scheme", name, AffineScheme(base, variables, gens))
            return
        self.s.expect("=", expected=["'over'", "'='"])
        parent, _ = self.ref("scheme")
        gen = self.generator_of(parent.base)
        if self.s.accept("/"):
            extra = self.paren_polys(parent.ring, gen)
            Z, _ = closed_subscheme(parent, extra)
            self.add("scheme", name, Z)
            return
        self.s.expect("[", expected=["'/'", "'['"])
        if self.s.at(kind="INT"):
            one = self.s.next()
            if one.text != "1":
                raise DSLSyntaxError("expected 1/(g)", one.line, one.column, ["'1'"])
            self.s.expect("/")
            self.s.expect("(")
            g = self.poly(parent.ring, gen)
            self.s.expect(")")
            self.s.expect("]")
            U, _ = distinguished_open(parent, g)
            self.add("scheme", name, U)
            return
        tok = self.s.peek()
        new_vars = self.names("]")
        self.s.expect("]", expected=["','", "']'"])
        clash = set(new_vars) & set(parent.variables)
        if clash:
            raise DSLNameError(f"variable {sorted(clash)[0]!r} already used by the parent",
                               tok.line, tok.column)
        self.s.expect("/")
        ring = PolyRing(parent.base, parent.variables + tuple(new_vars))
        rels = self.paren_polys(ring, gen)
        W, _ = relative_scheme(parent, new_vars, rels)
        self.add("scheme", name, W)

    def decl_morphism(self):
        from .errors import NotWellDefined, RingMismatch
        from .scheme import SchemeMorphism
        self.s.next()
        name = self.new_name()
        self.s.expect(":")
        X, _ = self.ref("scheme")
        self.s.expect("->")
        Y, _ = self.ref("scheme")
        self.s.expect("=")
        where = self.s.peek()
        images = self.paren_polys(X.ring, self.generator_of(X.base))
        try:
            m = SchemeMorphism(X, Y, images, name=name.text)
        except (NotWellDefined, RingMismatch) as exc:
            raise DSLTypeMismatch(f"{type(exc).__name__}: {exc}", where.line, where.column) from None
        self.add("morphism", name, m)

    def decl_bundle(self):
        from .bundle import make_bundle
        from .errors import BudgetExceeded, NotIdempotent, RankMismatch
        self.s.next()
        name = self.new_name()
        self.s.expect("on")
        X, _ = self.ref("scheme")
        self.s.expect("=")
        where = self.s.peek()
        gen = self.generator_of(X.base)
        self.s.expect("[")
        rows = []
        while True:
            self.s.expect("[")
            rows.append(self.polys(X.ring, gen))
            self.s.expect("]", expected=["','", "']'"])
            if not self.s.accept(","):
                break
        self.s.expect("]", expected=["','", "']'"])
        self.s.expect("rank")
        r = int(self.s.expect(kind="INT", expected=["INT"]).text)
        if any(len(row) != len(rows) for row in rows):
            raise DSLTypeMismatch("the bundle matrix must be square", where.line, where.column)
        try:
            E = make_bundle(X, rows, r)
        except (NotIdempotent, RankMismatch, BudgetExceeded) as exc:
            raise DSLTypeMismatch(f"{type(exc).__name__}: {exc}", where.line, where.column) from None
        E.name = name.text
        self.add("bundle", name, E)

    # commands

    def fieldspec(self):
        tok = self.s.expect(kind="NAME", expected=["'GF'", "NAME"])
        if tok.text != "GF":
            decl = self.session.declarations.get(tok.text)
            if decl is None:
                raise DSLNameError(f"undefined name {tok.text!r}", tok.line, tok.column)
            if decl.kind != "algebra":
                raise DSLTypeMismatch(f"{tok.text!r} is a {decl.kind}, expected a test algebra",
                                      tok.line, tok.column)
            return FieldSpec("algebra", algebra=tok.text)
        self.s.expect("(")
        q = self.s.expect(kind="INT", expected=["INT"])
        value = int(q.text)
        if self.s.accept("^"):
            value = value ** int(self.s.expect(kind="INT", expected=["INT"]).text)
        self.s.expect(")", expected=["'^'", "')'"])
        pp = _prime_power(value)
        if pp is None:
            raise DSLTypeMismatch(f"{value} is not a prime power", q.line, q.column)
        kind = "field"
        if self.s.accept("["):
            self.s.expect("eps")
            self.s.expect("]")
            kind = "dual"
        return FieldSpec(kind, pp[0], pp[1])

    def fieldlist(self):
        out = [self.fieldspec()]
        while self.s.accept(","):
            out.append(self.fieldspec())
        return out

    def command(self):
        first = self.s.next()
        verb = first.text
        fields = None
        if verb == "restrict":
            X, tok = self.ref("scheme")
            cmd = Command(verb, "", [tok.text])
        elif verb == "points":
            X, tok = self.ref("scheme")
            self.s.expect("over")
            cmd = Command(verb, "", [tok.text])
            fields = [self.fieldspec()]
        else:
            ttok = self.s.expect(kind="NAME", expected=sorted(VERIFY_TARGETS))
            target = ttok.text
            while self.s.at("-") and self.s.peek(1).kind == "NAME":
                self.s.next()
                target += "-" + self.s.next().text
            if target not in VERIFY_TARGETS:
                raise DSLSyntaxError(f"unknown verify target {target!r}", ttok.line, ttok.column,
                                     sorted(VERIFY_TARGETS))
            args, last = [], None
            for kind in VERIFY_TARGETS[target]:
                if kind == "int?":
                    tok = self.s.accept(kind="INT")
                    if tok is not None:
                        args.append(int(tok.text))
                elif kind == "poly":
                    X = last
                    self.s.expect("(")
                    args.append(self.poly(X.ring, self.generator_of(X.base)))
                    self.s.expect(")")
                else:
                    last, tok = self.ref(kind)
                    args.append(tok.text)
            cmd = Command(verb, target, args)
        if fields is None and self.s.accept("over"):
            fields = self.fieldlist()
        cmd.fields = fields
        last_tok = self.s.tokens[self.s.pos - 1]
        row = self.lines[first.line - 1]
        if last_tok.line == first.line:
            end = last_tok.column - 1 + len(last_tok.text)
            cmd.text = row[first.column - 1:end]
        else:
            cmd.text = " ".join(row[first.column - 1:].split())
        cmd.line, cmd.column = first.line, first.column
        self.session.commands.append(cmd)


def parse_session(text, options=None):
    """Parse a session file into declarations and commands."""
    session = SessionParser(text).parse()
    session.options.update(options or {})
    return session
