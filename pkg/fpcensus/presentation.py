"""Finitely presented groups: words, presentations and the presentation DSL.

A word is a tuple of signed generator indices: ``k`` stands for the k-th
generator (1-based) and ``-k`` for its inverse.  The DSL reads

    < a, b | a^2, b^3, (a*b)^7, [a,b]^2 >

with ``#`` line comments, optional ``*`` between factors, ``^n`` exponents
(negative allowed) on any factor and commutators ``[x,y] = x^-1 y^-1 x y``.
"""

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .config import get_settings
from .errors import PresentationSyntaxError, UnknownGeneratorError
from .utils import log_structured

settings = get_settings()


@dataclass(frozen=True)
class Word:
    """Sequence of signed generator indices."""

    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, "letters", tuple(self.letters))
        if any(x == 0 for x in self.letters):
            raise ValueError("letter 0 is not a generator index")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return free_reduce(Word(self.letters + other.letters))

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, exponent: int) -> "Word":
        base = self if exponent >= 0 else invert(self)
        return free_reduce(Word(base.letters * abs(exponent)))

    def is_empty(self) -> bool:
        return not self.letters

    def max_generator(self) -> int:
        return max((abs(x) for x in self.letters), default=0)


EMPTY_WORD = Word()


def free_reduce(w: Word) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    stack: List[int] = []
    for x in w.letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return Word(tuple(stack))


def cyclic_reduce(w: Word) -> Word:
    """Strip matching first/last inverse pairs from a freely reduced word."""
    letters = w.letters
    start, end = 0, len(letters)
    while end - start >= 2 and letters[start] == -letters[end - 1]:
        start += 1
        end -= 1
    return Word(letters[start:end])


def invert(w: Word) -> Word:
    """Formal inverse: reversed sequence with negated letters."""
    return Word(tuple(-x for x in reversed(w.letters)))


def exponent_sums(w: Word, generator_count: int) -> List[int]:
    """Exponent sum of each generator in ``w``."""
    sums = [0] * generator_count
    for x in w.letters:
        sums[abs(x) - 1] += 1 if x > 0 else -1
    return sums


@dataclass(frozen=True)
class Presentation:
    """Generators and relators of a finitely presented group.

    Relators are stored freely and cyclically reduced; relators that
    reduce to the empty word are dropped.
    """

    generator_names: Tuple[str, ...]
    relators: Tuple[Word, ...] = ()

    def __post_init__(self):
        names = tuple(self.generator_names)
        if not names:
            raise ValueError("a presentation needs at least one generator")
        if any(not name for name in names):
            raise ValueError("generator names must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        k = len(names)
        relators = []
        for r in self.relators:
            if r.max_generator() > k:
                raise ValueError(f"relator mentions generator {r.max_generator()} > {k}")
            r = cyclic_reduce(free_reduce(r))
            if not r.is_empty():
                relators.append(r)
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", tuple(relators))

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)"
    r"|(?P<newline>\n)"
    r"|(?P<comment>#[^\n]*)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<int>[0-9]+)"
    r"|(?P<punct>[<>|,*^()\[\]\-])"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise PresentationSyntaxError(f"unexpected character {text[pos]!r}", line, column)
        kind = match.lastgroup
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind == "ident" or kind == "int":
            tokens.append(_Token(kind, match.group(), line, column))
        elif kind == "punct":
            tokens.append(_Token(match.group(), match.group(), line, column))
        pos = match.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    """Recursive-descent parser over the token list."""

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.generators: dict = {}
        self.depth = 0
        self.max_depth = settings.max_nesting
        self.max_length = settings.max_word_length

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, kind: str, what: Optional[str] = None) -> _Token:
        token = self.current
        if token.kind != kind:
            found = token.text or "end of input"
            raise PresentationSyntaxError(
                f"expected {what or repr(kind)}, found {found!r}", token.line, token.column
            )
        return self.advance()

    def parse_presentation(self) -> Presentation:
        self.expect("<")
        names = [self.expect("ident", "generator name")]
        while self.current.kind == ",":
            self.advance()
            names.append(self.expect("ident", "generator name"))
        for index, token in enumerate(names, start=1):
            if token.text in self.generators:
                raise PresentationSyntaxError(
                    f"duplicate generator '{token.text}'", token.line, token.column
                )
            self.generators[token.text] = index

        relators: List[Word] = []
        if self.current.kind == "|":
            self.advance()
            if self.current.kind != ">":
                relators.append(self.parse_expression())
                while self.current.kind == ",":
                    self.advance()
                    relators.append(self.parse_expression())
        self.expect(">")
        self.expect("eof", "end of input")
        return Presentation(tuple(t.text for t in names), tuple(relators))

    def parse_standalone_word(self) -> Word:
        word = self.parse_expression()
        self.expect("eof", "end of word")
        return word

    def check_length(self, length: int, token: _Token) -> None:
        if length > self.max_length:
            raise PresentationSyntaxError(
                f"expanded word longer than {self.max_length} letters", token.line, token.column
            )

    def parse_expression(self) -> Word:
        letters = list(self.parse_term().letters)
        while True:
            token = self.current
            if token.kind == "*":
                self.advance()
                letters.extend(self.parse_term().letters)
            elif token.kind in ("ident", "int", "(", "["):
                letters.extend(self.parse_term().letters)
            else:
                break
            self.check_length(len(letters), token)
        return free_reduce(Word(tuple(letters)))

    def parse_term(self) -> Word:
        factor = self.parse_factor()
        while self.current.kind == "^":
            self.advance()
            sign = 1
            if self.current.kind == "-":
                self.advance()
                sign = -1
            token = self.expect("int", "integer exponent")
            exponent = int(token.text) * sign
            self.check_length(len(factor) * abs(exponent), token)
            factor = factor ** exponent
        return factor

    def enter(self, token: _Token) -> None:
        self.depth += 1
        if self.depth > self.max_depth:
            raise PresentationSyntaxError(
                f"brackets nested deeper than {self.max_depth}", token.line, token.column
            )

    def parse_factor(self) -> Word:
        token = self.current
        if token.kind == "ident":
            self.advance()
            index = self.generators.get(token.text)
            if index is None:
                raise UnknownGeneratorError(token.text, token.line, token.column)
            return Word((index,))
        if token.kind == "int":
            if token.text != "1":
                raise PresentationSyntaxError(
                    f"only '1' may stand for a factor, found {token.text!r}", token.line, token.column
                )
            self.advance()
            return EMPTY_WORD
        if token.kind == "(":
            self.enter(token)
            self.advance()
            inner = self.parse_expression()
            self.expect(")")
            self.depth -= 1
            return inner
        if token.kind == "[":
            self.enter(token)
            self.advance()
            x = self.parse_expression()
            self.expect(",")
            y = self.parse_expression()
            self.expect("]")
            self.depth -= 1
            commutator = invert(x) * invert(y) * x * y
            self.check_length(len(commutator), token)
            return commutator
        found = token.text or "end of input"
        raise PresentationSyntaxError(f"expected a factor, found {found!r}", token.line, token.column)


def parse_presentation(text: str) -> Presentation:
    """Parse DSL text into a presentation with reduced, expanded relators."""
    presentation = _Parser(text).parse_presentation()
    log_structured("presentation_parsed", {
        "generators": presentation.generator_count,
        "relators": len(presentation.relators),
    })
    return presentation


def parse_word(text: str, generator_names: Sequence[str]) -> Word:
    """Parse a single word expression over the given generators."""
    parser = _Parser(text)
    parser.generators = {name: i for i, name in enumerate(generator_names, start=1)}
    return parser.parse_standalone_word()


def parse_words(text: str, generator_names: Sequence[str]) -> List[Word]:
    """Parse a comma-separated list of words (commas inside brackets allowed)."""
    parser = _Parser(text)
    parser.generators = {name: i for i, name in enumerate(generator_names, start=1)}
    words = []
    if parser.current.kind != "eof":
        words.append(parser.parse_expression())
        while parser.current.kind == ",":
            parser.advance()
            words.append(parser.parse_expression())
    parser.expect("eof", "end of word list")
    return words


def _syllables(w: Word) -> Iterable[Tuple[int, int]]:
    current, count = None, 0
    for x in w.letters:
        g, e = abs(x), (1 if x > 0 else -1)
        if g == current and (count > 0) == (e > 0):
            count += e
        else:
            if current is not None:
                yield current, count
            current, count = g, e
    if current is not None:
        yield current, count


def format_word(w: Word, generator_names: Sequence[str]) -> str:
    """Serialize a word in syllable form, e.g. ``a^2*b^-1*a``."""
    if w.is_empty():
        return "1"
    parts = []
    for g, e in _syllables(w):
        name = generator_names[g - 1]
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_presentation(p: Presentation) -> str:
    """Serialize a presentation back to the DSL."""
    gens = ", ".join(p.generator_names)
    rels = ", ".join(format_word(r, p.generator_names) for r in p.relators)
    return f"< {gens} | {rels} >"


def presentation_to_json(p: Presentation) -> dict:
    """Canonical JSON form of a presentation."""
    return {
        "generators": list(p.generator_names),
        "relators": [list(r.letters) for r in p.relators],
        "text": format_presentation(p),
    }
