"""Types of implicational linear logic with dependency modalities.

Concrete syntax::

    np                              atom
    s_main                          atom with feature
    A -o B                          linear implication (right associative)
    <su> np -o s_main               complement-marked argument
    [mod](np -o np)                 adjunct-marked function

Types are also serialized to a prefix (Polish) symbol stream where each
implication becomes a single symbol fused with its decoration.
"""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Union


class TypeSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f'{message} (at position {position})')
        self.position = position


class WellFormednessError(ValueError):
    pass


class IllFormedSequence(ValueError):
    def __init__(self, message: str, segment: int | None = None):
        if segment is not None:
            message = f'segment {segment}: {message}'
        super().__init__(message)
        self.segment = segment


########################################################################################################################
# Vocabulary
########################################################################################################################

DEFAULT_COMPLEMENTS = ('su', 'obj', 'obj1', 'obj2', 'predc', 'body', 'pc', 'vc', 'cnj', 'se', 'sup', 'svp',
                       'pobj', 'hdf', 'ld', 'me', 'predm', 'invdet', 'whd', 'rhd', 'cmp', 'crd', 'dlink')
DEFAULT_ADJUNCTS = ('mod', 'det', 'app')
VOCAB_ENV = 'PROOFNETS_VOCAB'


class LabelKind(Enum):
    Complement = 'complement'
    Adjunct = 'adjunct'


@dataclass(frozen=True)
class Vocabulary:
    complements: frozenset[str] = frozenset(DEFAULT_COMPLEMENTS)
    adjuncts: frozenset[str] = frozenset(DEFAULT_ADJUNCTS)
    # None admits any well-formed atom token
    atoms: frozenset[str] | None = None

    def __post_init__(self):
        object.__setattr__(self, 'complements', frozenset(self.complements))
        object.__setattr__(self, 'adjuncts', frozenset(self.adjuncts))
        if self.atoms is not None:
            object.__setattr__(self, 'atoms', frozenset(self.atoms))
        if overlap := self.complements & self.adjuncts:
            raise ValueError(f'complement and adjunct labels overlap: {sorted(overlap)}')

    def kind(self, name: str) -> LabelKind | None:
        if name in self.complements:
            return LabelKind.Complement
        if name in self.adjuncts:
            return LabelKind.Adjunct
        return None

    @staticmethod
    def load(path: str | os.PathLike) -> Vocabulary:
        with open(path) as f:
            data = json.load(f)
        return Vocabulary(data.get('complements', DEFAULT_COMPLEMENTS), data.get('adjuncts', DEFAULT_ADJUNCTS),
                          data.get('atoms'))

    @staticmethod
    def from_env() -> Vocabulary:
        path = os.environ.get(VOCAB_ENV)
        return Vocabulary.load(path) if path else DEFAULT_VOCABULARY


DEFAULT_VOCABULARY = Vocabulary()


########################################################################################################################
# Type syntax
########################################################################################################################

_ATOM_RE = re.compile(r'[a-z][a-z0-9]*(?:_[a-z0-9]+)?')
_LABEL_RE = re.compile(r'[a-z][a-z0-9_]*')


@dataclass(frozen=True, order=True)
class Atom:
    base: str
    feature: str | None = None

    def __str__(self) -> str:
        return self.base if self.feature is None else f'{self.base}_{self.feature}'

    @staticmethod
    def parse(token: str) -> Atom:
        if not _ATOM_RE.fullmatch(token):
            raise ValueError(f'not an atom token: {token!r}')
        base, _, feature = token.partition('_')
        return Atom(base, feature or None)


@dataclass(frozen=True)
class DepLabel:
    name: str
    kind: LabelKind

    def __str__(self) -> str:
        return self.name


def complement(name: str) -> DepLabel:
    return DepLabel(name, LabelKind.Complement)


def adjunct(name: str) -> DepLabel:
    return DepLabel(name, LabelKind.Adjunct)


@dataclass(frozen=True)
class Atomic:
    atom: Atom

    def __str__(self) -> str:
        return print_type(self)


@dataclass(frozen=True)
class Arrow:
    argument: Type
    result: Type

    def __str__(self) -> str:
        return print_type(self)


@dataclass(frozen=True)
class Diamond:
    label: DepLabel
    inner: Type

    def __str__(self) -> str:
        return print_type(self)


@dataclass(frozen=True)
class Box:
    label: DepLabel
    inner: Type

    def __str__(self) -> str:
        return print_type(self)


Type = Union[Atomic, Arrow, Diamond, Box]


def atomic(token: str) -> Atomic:
    return Atomic(Atom.parse(token))


def check_wellformed(t: Type) -> None:
    """Raise `WellFormednessError` unless modalities sit where they can be fused into an implication."""
    match t:
        case Atomic():
            return
        case Diamond(label, _):
            raise WellFormednessError(f'<{label}> must be the argument of an implication')
        case Box(label, inner):
            if label.kind is not LabelKind.Adjunct:
                raise WellFormednessError(f'box label {label} is not an adjunct label')
            if not isinstance(inner, Arrow):
                raise WellFormednessError(f'[{label}] must wrap an implication')
            if isinstance(inner.argument, Diamond):
                raise WellFormednessError(f'[{label}] cannot wrap an implication with a decorated argument')
            check_wellformed(inner)
        case Arrow(argument, result):
            if isinstance(argument, Diamond):
                if argument.label.kind is not LabelKind.Complement:
                    raise WellFormednessError(f'diamond label {argument.label} is not a complement label')
                if isinstance(argument.inner, (Diamond, Box)):
                    raise WellFormednessError(f'<{argument.label}> cannot directly wrap another modality')
                check_wellformed(argument.inner)
            else:
                check_wellformed(argument)
            check_wellformed(result)
        case _:
            raise TypeError(f'not a type: {t!r}')


def order(t: Type) -> int:
    match t:
        case Atomic():
            return 0
        case Arrow(argument, result):
            return max(order(argument) + 1, order(result))
        case Diamond(_, inner) | Box(_, inner):
            return order(inner)
    raise TypeError(f'not a type: {t!r}')


def atoms_of(t: Type) -> list[Atom]:
    """Atom occurrences, left to right."""
    match t:
        case Atomic(atom):
            return [atom]
        case Arrow(argument, result):
            return atoms_of(argument) + atoms_of(result)
        case Diamond(_, inner) | Box(_, inner):
            return atoms_of(inner)
    raise TypeError(f'not a type: {t!r}')


def arrow_count(t: Type) -> int:
    match t:
        case Atomic():
            return 0
        case Arrow(argument, result):
            return 1 + arrow_count(argument) + arrow_count(result)
        case Diamond(_, inner) | Box(_, inner):
            return arrow_count(inner)
    raise TypeError(f'not a type: {t!r}')


def erase(t: Type) -> Type:
    """Drop all modal decorations."""
    match t:
        case Atomic():
            return t
        case Arrow(argument, result):
            return Arrow(erase(argument), erase(result))
        case Diamond(_, inner) | Box(_, inner):
            return erase(inner)
    raise TypeError(f'not a type: {t!r}')


def arrows(*types: Type) -> Type:
    """Right-nested implication: arrows(a, b, c) == a -o (b -o c)."""
    *args, result = types
    for arg in reversed(args):
        result = Arrow(arg, result)
    return result


########################################################################################################################
# Text parsing and printing
########################################################################################################################

_TOKEN_RE = re.compile(r'\s*(?:(-o)|(<)([^>\s]*)>|(\[)([^\]\s]*)\]|(\()|(\))|([A-Za-z0-9_]+)|(\S))')


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group(1):
            tokens.append(('arrow', '-o', start))
        elif m.group(2):
            tokens.append(('dia', m.group(3), start))
        elif m.group(4):
            tokens.append(('box', m.group(5), start))
        elif m.group(6):
            tokens.append(('(', '(', start))
        elif m.group(7):
            tokens.append((')', ')', start))
        elif m.group(8):
            tokens.append(('atom', m.group(8), start))
        elif m.group(9):
            raise TypeSyntaxError(f'unexpected character {m.group(9)!r}', start)
        pos = m.end()
    return tokens


class _TypeParser:
    def __init__(self, text: str, vocab: Vocabulary):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.vocab = vocab

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ('eof', '', len(self.text))

    def advance(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Type:
        t = self.arrow()
        kind, value, pos = self.peek()
        if kind != 'eof':
            raise TypeSyntaxError(f'unexpected {value!r}', pos)
        return t

    def arrow(self) -> Type:
        left = self.unary()
        if self.peek()[0] == 'arrow':
            self.advance()
            return Arrow(left, self.arrow())
        return left

    def label(self, name: str, kind: LabelKind, pos: int) -> DepLabel:
        if not _LABEL_RE.fullmatch(name):
            raise TypeSyntaxError(f'bad label {name!r}', pos)
        actual = self.vocab.kind(name)
        if actual is None:
            raise WellFormednessError(f'unknown dependency label {name!r} at position {pos}')
        if actual is not kind:
            raise WellFormednessError(f'{name!r} is an {actual.value} label, used as {kind.value} at position {pos}')
        return DepLabel(name, kind)

    def unary(self) -> Type:
        kind, value, pos = self.advance()
        match kind:
            case 'dia':
                return Diamond(self.label(value, LabelKind.Complement, pos), self.unary())
            case 'box':
                return Box(self.label(value, LabelKind.Adjunct, pos), self.unary())
            case 'atom':
                try:
                    atom = Atom.parse(value)
                except ValueError:
                    raise TypeSyntaxError(f'bad atom {value!r}', pos) from None
                if self.vocab.atoms is not None and str(atom) not in self.vocab.atoms:
                    raise WellFormednessError(f'unknown atom {value!r} at position {pos}')
                return Atomic(atom)
            case '(':
                inner = self.arrow()
                kind, value, pos = self.advance()
                if kind != ')':
                    raise TypeSyntaxError(f'expected ")" but found {value or "end of input"!r}', pos)
                return inner
            case 'eof':
                raise TypeSyntaxError('unexpected end of input', pos)
        raise TypeSyntaxError(f'unexpected {value!r}', pos)


def parse_type(text: str, vocab: Vocabulary = DEFAULT_VOCABULARY) -> Type:
    t = _TypeParser(text, vocab).parse()
    check_wellformed(t)
    return t


def print_type(t: Type) -> str:
    match t:
        case Atomic(atom):
            return str(atom)
        case Arrow(argument, result):
            return f'{_print_argument(argument)} -o {print_type(result)}'
        case Box(label, inner):
            return f'[{label}]({print_type(inner)})'
        case Diamond(label, inner):
            return f'<{label}>({print_type(inner)})' if isinstance(inner, Arrow) else f'<{label}> {print_type(inner)}'
    raise TypeError(f'not a type: {t!r}')


def _print_argument(t: Type) -> str:
    return f'({print_type(t)})' if isinstance(t, Arrow) else print_type(t)


########################################################################################################################
# Polish notation
########################################################################################################################

@dataclass(frozen=True)
class Sos:
    def __str__(self) -> str: return '[SOS]'


@dataclass(frozen=True)
class Sep:
    def __str__(self) -> str: return '[SEP]'


@dataclass(frozen=True)
class AtomSym:
    atom: Atom

    def __str__(self) -> str: return str(self.atom)


@dataclass(frozen=True)
class DiamondImpl:
    label: DepLabel

    def __str__(self) -> str: return f'<{self.label}>'


@dataclass(frozen=True)
class BoxImpl:
    label: DepLabel

    def __str__(self) -> str: return f'[{self.label}]'


@dataclass(frozen=True)
class BareImpl:
    def __str__(self) -> str: return '-o'


FrameSymbol = Union[Sos, Sep, AtomSym, DiamondImpl, BoxImpl, BareImpl]
SOS, SEP, BARE = Sos(), Sep(), BareImpl()
IMPLICATIONS = (DiamondImpl, BoxImpl, BareImpl)


def to_polish(t: Type) -> list[FrameSymbol]:
    out: list[FrameSymbol] = []

    def go(t: Type) -> None:
        match t:
            case Atomic(atom):
                out.append(AtomSym(atom))
            case Box(label, Arrow(argument, result)):
                out.append(BoxImpl(label))
                go(argument)
                go(result)
            case Arrow(Diamond(label, inner), result):
                out.append(DiamondImpl(label))
                go(inner)
                go(result)
            case Arrow(argument, result):
                out.append(BARE)
                go(argument)
                go(result)
            case _:
                raise WellFormednessError(f'cannot serialize {t!r}')
    go(t)
    return out


def from_polish(syms: Sequence[FrameSymbol]) -> Type:
    syms = list(syms)
    if not syms:
        raise IllFormedSequence('empty symbol sequence')
    pos = 0

    def go() -> Type:
        nonlocal pos
        if pos >= len(syms):
            raise IllFormedSequence(f'implication at position {pos - 1} is missing a subtree')
        sym = syms[pos]
        pos += 1
        match sym:
            case AtomSym(atom):
                return Atomic(atom)
            case DiamondImpl(label):
                argument = go()
                return Arrow(Diamond(label, argument), go())
            case BoxImpl(label):
                argument = go()
                return Box(label, Arrow(argument, go()))
            case BareImpl():
                argument = go()
                return Arrow(argument, go())
        raise IllFormedSequence(f'unexpected symbol {sym} at position {pos - 1}')

    t = go()
    if pos != len(syms):
        raise IllFormedSequence(f'{len(syms) - pos} trailing symbol(s) after a complete type')
    try:
        check_wellformed(t)
    except WellFormednessError as e:
        raise IllFormedSequence(str(e)) from None
    return t


def parse_symbol(token: str, vocab: Vocabulary = DEFAULT_VOCABULARY) -> FrameSymbol:
    if token == '[SOS]':
        return SOS
    if token == '[SEP]':
        return SEP
    if token == '-o':
        return BARE
    if token.startswith('<') and token.endswith('>'):
        name = token[1:-1]
        if vocab.kind(name) is not LabelKind.Complement:
            raise IllFormedSequence(f'{token!r} is not a complement marker')
        return DiamondImpl(complement(name))
    if token.startswith('[') and token.endswith(']'):
        name = token[1:-1]
        if vocab.kind(name) is not LabelKind.Adjunct:
            raise IllFormedSequence(f'{token!r} is not an adjunct marker')
        return BoxImpl(adjunct(name))
    try:
        atom = Atom.parse(token)
    except ValueError:
        raise IllFormedSequence(f'unknown symbol {token!r}') from None
    if vocab.atoms is not None and str(atom) not in vocab.atoms:
        raise IllFormedSequence(f'unknown atom {token!r}')
    return AtomSym(atom)


def parse_symbols(text: str, vocab: Vocabulary = DEFAULT_VOCABULARY) -> list[FrameSymbol]:
    return [parse_symbol(tok, vocab) for tok in text.split()]


def print_symbols(syms: Iterable[FrameSymbol]) -> str:
    return ' '.join(map(str, syms))
