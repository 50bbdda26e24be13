"""Proof-net correctness by traversal, with Curry-Howard term readback.

Reading a negative node yields a term: a negative atom jumps along its axiom
link and climbs the positive tree above its partner, turning every positive
implication on the way into an application; a negative implication becomes an
abstraction over a variable sitting at its positive argument. The structure is
a net iff this traversal visits every node once, never re-enters a node still
in progress, and consumes each bound variable inside its own abstraction.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

from .formulas import (Arrow, Box, BoxImpl, DepLabel, Diamond, DiamondImpl, LabelKind, Type,
                       erase, print_type)
from .frame import NEG, POS, FrameNode
from .linking import ProofStructure


########################################################################################################################
# Terms
########################################################################################################################

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lex:
    word: str
    index: int


@dataclass(frozen=True)
class App:
    fn: Term
    arg: Term
    complement: DepLabel | None = None


@dataclass(frozen=True)
class Abs:
    var: str
    complement: DepLabel | None
    body: Term


@dataclass(frozen=True)
class AdjunctApp:
    fn: Term
    label: DepLabel
    arg: Term


Term = Union[Var, Lex, App, Abs, AdjunctApp]


def print_term(t: Term, with_types: bool = False, types: tuple[Type, ...] | None = None) -> str:
    """ASCII rendering: ``(f a)``, ``(a)^label`` for complements, ``(f)_label`` for adjuncts.

    With `with_types`, lexical constants are annotated ``word::type`` using the
    undecorated premise types in `types`.
    """
    def wrap(s: str) -> str:
        return s if s.startswith('(') else f'({s})'

    def go(t: Term) -> str:
        match t:
            case Var(name):
                return name
            case Lex(word, index):
                if with_types and types is not None:
                    return f'{word}::{print_type(erase(types[index]))}'
                return word
            case App(fn, arg, None):
                return f'({go(fn)} {go(arg)})'
            case App(fn, arg, label):
                return f'({go(fn)} {wrap(go(arg))}^{label})'
            case Abs(var, None, body):
                return f'λ{var}.{go(body)}'
            case Abs(var, label, body):
                return f'λ{var}^{label}.{go(body)}'
            case AdjunctApp(fn, label, arg):
                return f'({wrap(go(fn))}_{label} {go(arg)})'
        raise TypeError(f'not a term: {t!r}')
    return go(t)


def term_to_json(t: Term) -> dict:
    match t:
        case Var(name):
            return {'kind': 'var', 'name': name}
        case Lex(word, index):
            return {'kind': 'lex', 'word': word, 'index': index}
        case App(fn, arg, label):
            return {'kind': 'app', 'complement': None if label is None else label.name,
                    'fn': term_to_json(fn), 'arg': term_to_json(arg)}
        case Abs(var, label, body):
            return {'kind': 'abs', 'var': var, 'complement': None if label is None else label.name,
                    'body': term_to_json(body)}
        case AdjunctApp(fn, label, arg):
            return {'kind': 'adjunct', 'label': label.name, 'fn': term_to_json(fn), 'arg': term_to_json(arg)}
    raise TypeError(f'not a term: {t!r}')


def term_from_json(data: dict) -> Term:
    def label(name, kind):
        return None if name is None else DepLabel(name, kind)
    match data['kind']:
        case 'var':
            return Var(data['name'])
        case 'lex':
            return Lex(data['word'], data['index'])
        case 'app':
            return App(term_from_json(data['fn']), term_from_json(data['arg']),
                       label(data['complement'], LabelKind.Complement))
        case 'abs':
            return Abs(data['var'], label(data['complement'], LabelKind.Complement), term_from_json(data['body']))
        case 'adjunct':
            return AdjunctApp(term_from_json(data['fn']), DepLabel(data['label'], LabelKind.Adjunct),
                              term_from_json(data['arg']))
    raise ValueError(f'unknown term kind {data["kind"]!r}')


def alpha_equivalent(a: Term, b: Term) -> bool:
    def go(a: Term, b: Term, env_a: dict[str, int], env_b: dict[str, int]) -> bool:
        match a, b:
            case Var(x), Var(y):
                return env_a.get(x, x) == env_b.get(y, y)
            case Lex(), Lex():
                return a == b
            case App(f1, x1, l1), App(f2, x2, l2):
                return l1 == l2 and go(f1, f2, env_a, env_b) and go(x1, x2, env_a, env_b)
            case AdjunctApp(f1, l1, x1), AdjunctApp(f2, l2, x2):
                return l1 == l2 and go(f1, f2, env_a, env_b) and go(x1, x2, env_a, env_b)
            case Abs(x, l1, b1), Abs(y, l2, b2):
                depth = len(env_a)
                return l1 == l2 and go(b1, b2, {**env_a, x: depth}, {**env_b, y: depth})
        return False
    return go(a, b, {}, {})


def free_variables(t: Term) -> list[str]:
    match t:
        case Var(name):
            return [name]
        case Lex():
            return []
        case App(fn, arg, _) | AdjunctApp(fn, _, arg):
            return free_variables(fn) + free_variables(arg)
        case Abs(var, _, body):
            return [v for v in free_variables(body) if v != var]
    raise TypeError(f'not a term: {t!r}')


def constants(t: Term) -> list[Lex]:
    match t:
        case Var():
            return []
        case Lex():
            return [t]
        case App(fn, arg, _) | AdjunctApp(fn, _, arg):
            return constants(fn) + constants(arg)
        case Abs(_, _, body):
            return constants(body)
    raise TypeError(f'not a term: {t!r}')


def is_linear(t: Term) -> bool:
    """Every bound variable occurs exactly once in its body, and no constant repeats."""
    def ok(t: Term) -> bool:
        match t:
            case Var() | Lex():
                return True
            case App(fn, arg, _) | AdjunctApp(fn, _, arg):
                return ok(fn) and ok(arg)
            case Abs(var, _, body):
                return free_variables(body).count(var) == 1 and ok(body)
        raise TypeError(f'not a term: {t!r}')
    lexes = constants(t)
    return ok(t) and len(lexes) == len(set(lexes))


class TermTypeError(ValueError):
    pass


def typecheck(t: Term, premise_types: tuple[Type, ...], goal: Type) -> None:
    """Check `t` against `goal` bottom-up from the premise types; raise `TermTypeError` on mismatch.

    Only β-normal terms are accepted: the functor of every application must be
    inferable (a constant, a variable, or another application).
    """
    def infer(t: Term, env: dict[str, Type]) -> Type:
        match t:
            case Lex(_, index):
                return premise_types[index]
            case Var(name):
                if name not in env:
                    raise TermTypeError(f'unbound variable {name}')
                return env[name]
            case App(fn, arg, label):
                match infer(fn, env):
                    case Arrow(Diamond(d, argument), result) as slot:
                        if label is None:
                            # only a hypothesis of the marked type itself fills the slot unlabeled
                            if not (isinstance(arg, Var) and env.get(arg.name) == slot.argument):
                                raise TermTypeError(f'missing complement label {d} on {print_term(arg)}')
                        elif label != d:
                            raise TermTypeError(f'label {label} where {d} is expected')
                        else:
                            check(arg, argument, env)
                        return result
                    case Arrow(argument, result) if label is None:
                        check(arg, argument, env)
                        return result
                    case other:
                        raise TermTypeError(f'cannot apply {print_type(other)} with label {label}')
            case AdjunctApp(fn, label, arg):
                match infer(fn, env):
                    case Box(m, Arrow(argument, result)) if m == label:
                        check(arg, argument, env)
                        return result
                    case other:
                        raise TermTypeError(f'cannot use {print_type(other)} as a {label} adjunct')
        raise TermTypeError(f'cannot infer a type for {print_term(t)}')

    def check(t: Term, expected: Type, env: dict[str, Type]) -> None:
        if isinstance(t, Abs):
            match expected:
                case Box(_, inner):
                    return check(t, inner, env)
                case Arrow(Diamond(d, _) as marked, result) if t.complement == d:
                    return check(t.body, result, {**env, t.var: marked})
                case Arrow(argument, result) if t.complement is None and not isinstance(argument, Diamond):
                    return check(t.body, result, {**env, t.var: argument})
            raise TermTypeError(f'abstraction {print_term(t)} does not have type {print_type(expected)}')
        actual = infer(t, env)
        if actual != expected and not (isinstance(expected, Box) and actual == expected.inner):
            raise TermTypeError(f'{print_term(t)} has type {print_type(actual)}, expected {print_type(expected)}')

    check(t, goal, {})


########################################################################################################################
# Traversal
########################################################################################################################

class Failure(Enum):
    Cyclic = 'cyclic'
    Disconnected = 'disconnected'
    ScopeViolation = 'scope-violation'


@dataclass(frozen=True)
class NetVerdict:
    valid: bool
    failure: Failure | None = None
    witness: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {'valid': self.valid, 'failure': None if self.failure is None else self.failure.value,
                'witness': list(self.witness)}


class _Reject(Exception):
    def __init__(self, failure: Failure, witness: tuple[int, ...]):
        self.failure = failure
        self.witness = witness


_UNSEEN, _ACTIVE, _DONE = 0, 1, 2


class _Traversal:
    def __init__(self, structure: ProofStructure):
        self.frame = structure.frame
        self.nodes = self.frame.nodes
        self.partner = structure.partner()
        self.state = [_UNSEEN] * len(self.nodes)
        # negative implication node id -> variable name, while its abstraction is open
        self.open_binders: dict[int, str] = {}
        self.used: set[int] = set()
        self.marked_vars: set[Var] = set()
        self.fresh = 0
        self.roots = {root: i for i, (_, root) in enumerate(self.frame.premises)}

    def enter(self, node: FrameNode) -> None:
        if self.state[node.id] != _UNSEEN:
            raise _Reject(Failure.Cyclic, (node.id,))
        self.state[node.id] = _ACTIVE

    def leave(self, node: FrameNode) -> None:
        self.state[node.id] = _DONE

    def negative(self, node: FrameNode) -> Term:
        self.enter(node)
        if node.is_atom:
            self.leave(node)
            positive = self.nodes[self.frame.atom_index[self.partner[node.atom_position]]]
            return self.positive(positive, slot=node)
        argument, result = (self.nodes[c] for c in node.children)
        var = f'x{self.fresh}'
        self.fresh += 1
        self.open_binders[node.id] = var
        if isinstance(node.content, DiamondImpl):
            self.marked_vars.add(Var(var))
        # the positive argument is entered when the variable is consumed
        body = self.negative(result)
        del self.open_binders[node.id]
        if node.id not in self.used:
            raise _Reject(Failure.ScopeViolation, (node.id, argument.id))
        self.leave(node)
        label = node.content.label if isinstance(node.content, DiamondImpl) else None
        return Abs(var, label, body)

    def slot_label(self, node: FrameNode) -> DepLabel | None:
        """Complement label of the argument position a negative node fills, if any."""
        if node.parent is None:
            return None
        parent = self.nodes[node.parent]
        if parent.polarity is POS and parent.children[0] == node.id and isinstance(parent.content, DiamondImpl):
            return parent.content.label
        return None

    def positive(self, node: FrameNode, slot: FrameNode | None = None) -> Term:
        """Term at a positive node; `slot` is the negative atom whose axiom link led here."""
        self.enter(node)
        if node.id in self.roots:
            self.leave(node)
            return Lex(self.frame.premises[self.roots[node.id]][0], self.roots[node.id])
        parent = self.nodes[node.parent]
        if parent.polarity is NEG:
            # argument of a negative implication: a hypothesis
            if parent.id not in self.open_binders:
                raise _Reject(Failure.ScopeViolation, (parent.id, node.id))
            # a complement-marked hypothesis only fills an identically marked argument position
            if isinstance(parent.content, DiamondImpl) and (
                    slot is None or self.slot_label(slot) != parent.content.label):
                raise _Reject(Failure.ScopeViolation, (parent.id, node.id))
            self.used.add(parent.id)
            self.leave(node)
            return Var(self.open_binders[parent.id])
        # result of a positive implication
        functor = self.positive(parent)
        argument = self.negative(self.nodes[parent.children[0]])
        self.leave(node)
        match parent.content:
            case BoxImpl(label):
                return AdjunctApp(functor, label, argument)
            case DiamondImpl(label):
                # a marked hypothesis already carries its label on the binder
                return App(functor, argument, None if argument in self.marked_vars else label)
        return App(functor, argument)

    def run(self) -> Term:
        term = self.negative(self.nodes[self.frame.goal])
        unvisited = tuple(i for i, s in enumerate(self.state) if s != _DONE)
        if unvisited:
            raise _Reject(Failure.Disconnected, unvisited)
        return term


def verify_and_extract(structure: ProofStructure) -> tuple[NetVerdict, Term | None]:
    try:
        term = _Traversal(structure).run()
    except _Reject as r:
        return NetVerdict(False, r.failure, r.witness), None
    return NetVerdict(True), term


def is_proof_net(structure: ProofStructure) -> bool:
    return verify_and_extract(structure)[0].valid
