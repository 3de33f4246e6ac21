"""Text formats: Salamon shorthand, complex structure equations, metric records.

Salamon shorthand::

    (0,0,0,12,23,14-35)

Structure equations (``;`` or newline separated; ``wJK`` is w^{jk}, ``wJcK``
is w^{j kbar}; omitted equations are zero)::

    dw1 = 0; dw2 = 0; dw3 = w12 + w1c2 + 2*w2c1

Metric records::

    r=1, s=1, t=1, u=0, v=0, z=1/2+1/3*i

Coefficients are exact rationals (``3``, ``-1/2``) times an optional ``i``;
decimal literals (``0.25``, ``1e-3``) give approximate Scalars unless the
parser runs with ``exact=True``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .forms import Form, StructureEquations, format_word
from .scalar import DEFAULT_EPS, I, ONE, ZERO, Scalar

__all__ = [
    "ParseError", "parse_salamon", "emit_salamon", "parse_equations", "emit_equations",
    "parse_metric_fields", "emit_metric_fields", "parse_scalar", "emit_scalar",
]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/=(),;])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            toks.append(_Tok("sep", "\n", line, pos - line_start + 1))
            line += 1
            line_start = m.end()
        elif kind != "ws":
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


_WORD = re.compile(r"w((?:c?\d)+)$")
_LETTER = re.compile(r"(c?)(\d)")


class _Parser:
    def __init__(self, text: str, exact: bool, eps: float):
        self.toks = _tokenize(text)
        self.i = 0
        self.exact = exact
        self.eps = eps
        self.word_tok: dict[str, _Tok] = {}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("op", "sep") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        tok = self.tok
        if not self.accept(text):
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return tok

    def skip_seps(self) -> None:
        while self.tok.kind == "sep" or (self.tok.kind == "op" and self.tok.text == ";"):
            self.i += 1

    def number(self, tok: _Tok) -> Scalar:
        text = tok.text
        if any(ch in text for ch in ".eE"):
            if self.exact:
                return Scalar(Fraction(text))
            return Scalar(float(text), 0.0, self.eps)
        return Scalar(int(text))

    # sum := term (("+"|"-") term)*
    def sum(self, allow_words: bool):
        acc: dict = {}
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        while True:
            coef, word = self.term(allow_words)
            coef = coef if sign > 0 else -coef
            acc[word] = acc.get(word, ZERO) + coef
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                return acc

    # term := factor (("*"|"/") factor)*  with at most one word factor
    def term(self, allow_words: bool):
        coef, word = self.factor(allow_words)
        while True:
            if self.accept("*"):
                c, w = self.factor(allow_words)
                if w is not None:
                    if word is not None:
                        self.error("a term may contain only one basis word", self.toks[self.i - 1])
                    word = w
                coef = coef * c
            elif self.tok.kind == "op" and self.tok.text == "/":
                op = self.tok
                self.i += 1
                c, w = self.factor(False)
                if not c:
                    self.error("division by zero", op)
                coef = coef / c
            else:
                return coef, word

    def factor(self, allow_words: bool):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return self.number(tok), None
        if tok.kind == "ident":
            self.i += 1
            if tok.text == "i":
                return I, None
            m = _WORD.match(tok.text)
            if m and allow_words:
                self.word_tok.setdefault(m.group(1), tok)
                return ONE, m.group(1)
            self.error(f"unknown identifier {tok.text!r}", tok)
        if self.accept("("):
            inner = self.sum(False)
            self.expect(")")
            return inner.get(None, ZERO), None
        if self.accept("-"):
            c, w = self.factor(allow_words)
            return -c, w
        self.error(f"unexpected {tok.text or 'end of input'!r}")


def parse_scalar(text: str, exact: bool = False, eps: float = DEFAULT_EPS) -> Scalar:
    p = _Parser(text, exact, eps)
    acc = p.sum(False)
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    return acc.get(None, ZERO)


def emit_scalar(c: Scalar) -> str:
    return str(c)


# -- Salamon shorthand ----------------------------------------------------------

_SAL_TERM = re.compile(r"\s*([+-]?)\s*(\d)(\d)\s*")


def parse_salamon(text: str) -> list[dict]:
    """Differentials ``d e^k`` as dicts on real 2-words (bit ``a-1`` is e^a)."""
    from .scalar import Scalar as _S

    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError("Salamon string must be enclosed in parentheses", 1, 1)
    body = s[1:-1]
    offset = text.index("(") + 2
    out = []
    col = offset
    for tok in body.split(","):
        stripped = tok.strip()
        d: dict = {}
        if stripped != "0":
            pos = 0
            first = True
            if not stripped:
                raise ParseError("empty entry", 1, col)
            while pos < len(tok):
                m = _SAL_TERM.match(tok, pos)
                if not m or m.end() == pos:
                    raise ParseError(f"bad Salamon entry {stripped!r}", 1, col + pos)
                sign_txt, a, b = m.groups()
                if not sign_txt and not first:
                    raise ParseError("missing '+' or '-' between index pairs", 1, col + pos)
                a, b = int(a), int(b)
                if a == b or a == 0 or b == 0:
                    raise ParseError(f"invalid index pair {a}{b}", 1, col + pos)
                sign = -1 if sign_txt == "-" else 1
                if a > b:
                    a, b, sign = b, a, -sign
                w = (1 << (a - 1)) | (1 << (b - 1))
                d[w] = d.get(w, ZERO) + _S(sign)
                pos = m.end()
                first = False
        out.append({w: c for w, c in d.items() if c})
        col += len(tok) + 1
    n = len(out)
    for k, d in enumerate(out, 1):
        for w in d:
            if w >> n:
                raise ParseError(f"entry {k} refers to an index above {n}", 1, 1)
    return out


def emit_salamon(differentials) -> str:
    parts = []
    for d in differentials:
        if not d:
            parts.append("0")
            continue
        terms = []
        for w in sorted(d):
            c = d[w]
            if c == 1:
                sign = "+"
            elif c == -1:
                sign = "-"
            else:
                raise ValueError(f"Salamon shorthand needs unit coefficients, got {c}")
            a, b = [i + 1 for i in range(w.bit_length()) if w >> i & 1]
            terms.append(f"{sign}{a}{b}")
        txt = "".join(terms)
        parts.append(txt[1:] if txt.startswith("+") else txt)
    return "(" + ",".join(parts) + ")"


# -- structure equations ------------------------------------------------------------

def _word_form(n: int, letters: str, tok: _Tok) -> Form:
    out = Form.scalar(n, 1)
    from .forms import omega, omegabar

    for bar, digit in _LETTER.findall(letters):
        j = int(digit)
        if not 1 <= j <= n:
            raise ParseError(f"index {j} outside 1..{n}", tok.line, tok.col)
        out = out ^ (omegabar(n, j) if bar else omega(n, j))
    return out


def parse_equations(text: str, n: int | None = None, exact: bool = False,
                    eps: float = DEFAULT_EPS) -> StructureEquations:
    p = _Parser(text, exact, eps)
    raw: dict = {}
    p.skip_seps()
    while p.tok.kind != "eof":
        tok = p.tok
        m = re.fullmatch(r"dw(\d+)", tok.text) if tok.kind == "ident" else None
        if not m:
            p.error(f"expected 'dwN', found {tok.text!r}")
        j = int(m.group(1))
        if j < 1:
            p.error("equation index must be positive", tok)
        if j in raw:
            p.error(f"duplicate equation for dw{j}", tok)
        p.i += 1
        p.expect("=")
        raw[j] = (p.sum(True), tok)
        if p.tok.kind not in ("sep", "eof") and not (p.tok.kind == "op" and p.tok.text == ";"):
            p.error(f"unexpected {p.tok.text!r}")
        p.skip_seps()
    if not raw:
        raise ParseError("no equations", 1, 1)
    size = n or max(raw)
    letters_max = 0
    for terms, _ in raw.values():
        for key in terms:
            if key is not None:
                letters_max = max([letters_max] + [int(d) for _, d in _LETTER.findall(key)])
    if n is None:
        size = max(size, letters_max)
    mu = []
    for j in range(1, size + 1):
        form = Form(size)
        if j in raw:
            terms, tok = raw[j]
            for key, c in terms.items():
                if key is None:
                    if c:
                        raise ParseError(f"dw{j} has a nonzero scalar term", tok.line, tok.col)
                    continue
                wtok = p.word_tok[key]
                wf = _word_form(size, key, wtok)
                if wf and wf.degree != 2:
                    raise ParseError(f"dw{j}: word w{key} is not a 2-form", wtok.line, wtok.col)
                form = form + wf * c
        mu.append(form)
    for j in raw:
        if j > size:
            raise ParseError(f"dw{j} exceeds dimension {size}", raw[j][1].line, raw[j][1].col)
    return StructureEquations(size, tuple(mu))


def emit_equations(eqs: StructureEquations, sep: str = "; ") -> str:
    lines = []
    for j, m in enumerate(eqs.mu, 1):
        if not m.terms:
            lines.append(f"dw{j} = 0")
            continue
        terms = [f"({emit_scalar(c)})*w{format_word(w, eqs.n)}" for w, c in sorted(m.terms.items())]
        lines.append(f"dw{j} = " + " + ".join(terms))
    return sep.join(lines)


# -- metric records -------------------------------------------------------------

METRIC_KEYS = ("r", "s", "t", "u", "v", "z")


def parse_metric_fields(text: str, exact: bool = False, eps: float = DEFAULT_EPS,
                        keys: tuple[str, ...] = METRIC_KEYS) -> dict[str, Scalar]:
    p = _Parser(text, exact, eps)
    out: dict[str, Scalar] = {}
    p.skip_seps()
    while p.tok.kind != "eof":
        tok = p.tok
        if tok.kind != "ident" or tok.text not in keys:
            p.error(f"expected one of {', '.join(keys)}, found {tok.text!r}")
        if tok.text in out:
            p.error(f"duplicate field {tok.text!r}", tok)
        p.i += 1
        p.expect("=")
        acc = p.sum(False)
        out[tok.text] = acc.get(None, ZERO)
        if not (p.accept(",") or p.tok.kind in ("sep", "eof")
                or (p.tok.kind == "op" and p.tok.text == ";")):
            p.error(f"unexpected {p.tok.text!r}")
        p.skip_seps()
    missing = [k for k in keys if k not in out]
    if missing:
        raise ParseError(f"missing field(s): {', '.join(missing)}", p.tok.line, p.tok.col)
    return out


def emit_metric_fields(fields: dict) -> str:
    return ", ".join(f"{k}={emit_scalar(Scalar(fields[k]))}" for k in fields)
