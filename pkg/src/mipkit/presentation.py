"""Finite presentations ``<a,b | a^4=1, b^2=1, b^-1*a*b=a^-1>``.

Words are stored as lists of ``(generator index, exponent)`` syllables in
normal form: adjacent syllables never share a generator and no exponent is
zero.  All exponents are plain integers; parametrised family templates are
turned into concrete text by :func:`substitute_parameter` first.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

__all__ = [
    "PresentationSyntaxError",
    "GeneratorId",
    "Word",
    "Relation",
    "Presentation",
    "parse_presentation",
    "render_presentation",
    "substitute_parameter",
]


class PresentationSyntaxError(ValueError):
    """Malformed presentation text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


@dataclass(frozen=True)
class GeneratorId:
    index: int
    name: str


@dataclass(frozen=True)
class Word:
    syllables: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def from_syllables(cls, syllables: Iterable[Tuple[int, int]]) -> "Word":
        out: List[Tuple[int, int]] = []
        for gen, exp in syllables:
            if exp == 0:
                continue
            if out and out[-1][0] == gen:
                merged = out[-1][1] + exp
                out.pop()
                if merged:
                    out.append((gen, merged))
            else:
                out.append((gen, exp))
        return cls(tuple(out))

    def __mul__(self, other: "Word") -> "Word":
        return Word.from_syllables(self.syllables + other.syllables)

    def inverse(self) -> "Word":
        return Word.from_syllables((g, -e) for g, e in reversed(self.syllables))

    def letters(self) -> List[Tuple[int, int]]:
        """Expand to unit letters ``(generator, +1 or -1)``."""
        out = []
        for gen, exp in self.syllables:
            sign = 1 if exp > 0 else -1
            out.extend([(gen, sign)] * abs(exp))
        return out

    def is_identity(self) -> bool:
        return not self.syllables

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)


@dataclass(frozen=True)
class Relation:
    lhs: Word
    rhs: Word

    def relator(self) -> Word:
        return self.lhs * self.rhs.inverse()


@dataclass(frozen=True, eq=False)
class Presentation:
    generators: Tuple[GeneratorId, ...]
    relations: Tuple[Relation, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a presentation needs at least one generator")
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        n = len(self.generators)
        for rel in self.relations:
            for gen, _ in rel.lhs.syllables + rel.rhs.syllables:
                if not 0 <= gen < n:
                    raise ValueError(f"relation uses undeclared generator index {gen}")

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    def index(self, name: str) -> int:
        for g in self.generators:
            if g.name == name:
                return g.index
        raise KeyError(name)

    def _key(self):
        return (tuple(self.names), sorted(_render_relation(self, r) for r in self.relations))

    # relation order carries no meaning
    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        names, rels = self._key()
        return hash((names, tuple(rels)))

    def __str__(self):
        return render_presentation(self)


_TOKEN = re.compile(r"\s*(?:(?P<ident>[a-z][a-z0-9]*)|(?P<num>\d+)|(?P<sym>[<>|,=*^()\-]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos
            while bad < len(text) and text[bad].isspace():
                bad += 1
            line, col = _line_col(text, bad)
            raise PresentationSyntaxError(f"unexpected character {text[bad]!r}", line, col)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens, text


def _line_col(text: str, pos: int) -> Tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str):
        self.tokens, self.text = _tokenize(text)
        self.i = 0
        self.names: dict = {}

    def peek(self):
        return self.tokens[self.i]

    def fail(self, message: str, token=None):
        token = token or self.peek()
        line, col = _line_col(self.text, token[2])
        raise PresentationSyntaxError(message, line, col)

    def expect(self, value: str):
        tok = self.peek()
        if tok[1] != value or tok[0] == "eof":
            self.fail(f"expected {value!r}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def accept(self, value: str) -> bool:
        tok = self.peek()
        if tok[0] in ("sym", "num") and tok[1] == value:
            self.i += 1
            return True
        return False

    def presentation(self) -> Presentation:
        self.expect("<")
        gens = [self.ident()]
        while self.accept(","):
            gens.append(self.ident())
        for k, tok in enumerate(gens):
            if tok[1] in self.names:
                self.fail(f"duplicate generator {tok[1]!r}", tok)
            self.names[tok[1]] = k
        self.expect("|")
        relations = [self.relation()]
        while self.accept(","):
            relations.append(self.relation())
        self.expect(">")
        if self.peek()[0] != "eof":
            self.fail(f"trailing input {self.peek()[1]!r}")
        generators = tuple(GeneratorId(k, tok[1]) for k, tok in enumerate(gens))
        return Presentation(generators, tuple(relations))

    def ident(self):
        tok = self.peek()
        if tok[0] != "ident":
            self.fail(f"expected generator name, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def relation(self) -> Relation:
        lhs = self.word()
        rhs = self.word() if self.accept("=") else Word()
        return Relation(lhs, rhs)

    def word(self) -> Word:
        if self.accept("1"):
            return Word()
        syllables = [self.factor()]
        while self.accept("*"):
            syllables.append(self.factor())
        return Word.from_syllables(syllables)

    def factor(self) -> Tuple[int, int]:
        tok = self.ident()
        if tok[1] not in self.names:
            self.fail(f"unknown generator {tok[1]!r}", tok)
        exp = 1
        if self.accept("^"):
            paren = self.accept("(")
            sign = -1 if self.accept("-") else 1
            num = self.peek()
            if num[0] != "num":
                self.fail("expected integer exponent")
            self.i += 1
            exp = sign * int(num[1])
            if exp == 0:
                self.fail("zero exponent", num)
            if paren:
                self.expect(")")
        return self.names[tok[1]], exp


def parse_presentation(text: str) -> Presentation:
    """Parse presentation text; raises :class:`PresentationSyntaxError`."""
    return _Parser(text).presentation()


def _render_word(p: Presentation, w: Word) -> str:
    if w.is_identity():
        return "1"
    return "*".join(f"{p.generators[g].name}^{e}" for g, e in w.syllables)


def _render_relation(p: Presentation, r: Relation) -> str:
    return f"{_render_word(p, r.lhs)}={_render_word(p, r.rhs)}"


def render_presentation(p: Presentation) -> str:
    """Canonical text: every exponent explicit, relations sorted."""
    rels = sorted(_render_relation(p, r) for r in p.relations)
    return f"<{','.join(p.names)}| {', '.join(rels)}>"


_EXPR = re.compile(r"\{([^{}]*)\}")
_ALLOWED = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name,
            ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.USub, ast.UAdd, ast.Load)


def _eval_exponent(expr: str, m: int) -> int:
    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"bad exponent expression {{{expr}}}") from exc
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED):
            raise ValueError(f"unsupported construct in {{{expr}}}")
        if isinstance(node, ast.Name) and node.id != "m":
            raise ValueError(f"unknown symbol {node.id!r} in {{{expr}}}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, int):
            raise ValueError(f"non-integer literal in {{{expr}}}")
    value = eval(compile(tree, "<exponent>", "eval"), {"__builtins__": {}}, {"m": m})
    if not isinstance(value, int):
        raise ValueError(f"{{{expr}}} is not an integer for m={m}")
    return value


def substitute_parameter(template: str, m: int, min_m: Optional[int] = None) -> str:
    """Replace every ``{expr}`` in ``template`` by its integer value at ``m``.

    Expressions use ``m``, integer literals, ``+ - *`` and ``^`` for powers,
    e.g. ``a^{1+2^(m-3)}``.
    """
    if min_m is not None and m < min_m:
        raise ValueError(f"m={m} is below the family minimum {min_m}")
    return _EXPR.sub(lambda mt: str(_eval_exponent(mt.group(1), m)), template)


def evaluate_word(word: Word, images: Sequence, mul, inv, identity):
    """Evaluate ``word`` given generator images and group operations."""
    result = identity
    for gen, exp in word.syllables:
        x = images[gen] if exp > 0 else inv(images[gen])
        for _ in range(abs(exp)):
            result = mul(result, x)
    return result
