"""Polarized proof frames: decomposition trees of all premises and the goal."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .formulas import (Atom, AtomSym, FrameSymbol, IllFormedSequence, Sep, Sos, Type, Vocabulary,
                       DEFAULT_VOCABULARY, IMPLICATIONS, SEP, SOS, from_polish, parse_type, print_type, to_polish)


class Polarity(Enum):
    Positive = '+'
    Negative = '-'

    def flip(self) -> Polarity:
        return Polarity.Negative if self is Polarity.Positive else Polarity.Positive

    def __str__(self) -> str:
        return self.value


POS, NEG = Polarity.Positive, Polarity.Negative


@dataclass(frozen=True)
class FrameNode:
    id: int
    content: FrameSymbol
    polarity: Polarity
    parent: int | None
    # (argument, result) for implications, empty for atoms
    children: tuple[int, ...]
    # index of the premise this node belongs to, None for goal nodes
    premise: int | None
    # global atom position for atom leaves
    atom_position: int | None = None

    @property
    def is_atom(self) -> bool:
        return isinstance(self.content, AtomSym)

    @property
    def atom(self) -> Atom:
        return self.content.atom


@dataclass(frozen=True)
class ProofFrame:
    premises: tuple[tuple[str, int], ...]
    goal: int
    nodes: tuple[FrameNode, ...]
    atom_index: tuple[int, ...]
    premise_types: tuple[Type, ...]
    goal_type: Type

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(w for w, _ in self.premises)

    def atom_node(self, position: int) -> FrameNode:
        return self.nodes[self.atom_index[position]]

    def atoms(self) -> list[tuple[int, Atom, Polarity]]:
        return [(i, self.nodes[n].atom, self.nodes[n].polarity) for i, n in enumerate(self.atom_index)]

    def sequent(self) -> list[tuple[str, Type]]:
        return list(zip(self.words, self.premise_types))


def build_frame(premises: Sequence[tuple[str, Type]], goal: Type) -> ProofFrame:
    nodes: list[FrameNode] = []
    atom_index: list[int] = []

    def decompose(t: Type, polarity: Polarity, parent: int | None, premise: int | None) -> int:
        symbols = to_polish(t)
        pos = 0

        def go(polarity: Polarity, parent: int | None) -> int:
            nonlocal pos
            sym = symbols[pos]
            pos += 1
            node_id = len(nodes)
            nodes.append(None)  # reserve preorder slot
            if isinstance(sym, IMPLICATIONS):
                argument = go(polarity.flip(), node_id)
                result = go(polarity, node_id)
                nodes[node_id] = FrameNode(node_id, sym, polarity, parent, (argument, result), premise)
            else:
                atom_index.append(node_id)
                nodes[node_id] = FrameNode(node_id, sym, polarity, parent, (), premise, len(atom_index) - 1)
            return node_id
        return go(polarity, parent)

    roots = [(word, decompose(t, POS, None, i)) for i, (word, t) in enumerate(premises)]
    goal_root = decompose(goal, NEG, None, None)
    return ProofFrame(premises=tuple(roots), goal=goal_root, nodes=tuple(nodes), atom_index=tuple(atom_index),
                      premise_types=tuple(t for _, t in premises), goal_type=goal)


def count_invariance(frame: ProofFrame) -> tuple[dict[Atom, tuple[int, int]], bool]:
    """Per-atom (negative, positive) occurrence counts and whether they all balance."""
    neg: Counter[Atom] = Counter()
    pos: Counter[Atom] = Counter()
    for _, atom, polarity in frame.atoms():
        (pos if polarity is POS else neg)[atom] += 1
    counts = {a: (neg[a], pos[a]) for a in sorted(set(neg) | set(pos), key=str)}
    return counts, all(n == p for n, p in counts.values())


def flatten_frame(frame: ProofFrame) -> list[FrameSymbol]:
    out: list[FrameSymbol] = [SOS]
    for t in frame.premise_types:
        out.extend(to_polish(t))
        out.append(SEP)
    return out


def parse_frame_sequence(syms: Sequence[FrameSymbol], goal: Type,
                         words: Sequence[str] | None = None) -> ProofFrame:
    syms = list(syms)
    if not syms or not isinstance(syms[0], Sos):
        raise IllFormedSequence('sequence must start with [SOS]', 0)
    segments: list[list[FrameSymbol]] = [[]]
    for sym in syms[1:]:
        if isinstance(sym, Sos):
            raise IllFormedSequence('[SOS] inside the sequence', len(segments) - 1)
        if isinstance(sym, Sep):
            segments.append([])
        else:
            segments[-1].append(sym)
    if segments[-1]:
        raise IllFormedSequence('segment not terminated by [SEP]', len(segments) - 1)
    segments.pop()
    if not segments:
        raise IllFormedSequence('no premises', 0)
    types = []
    for i, segment in enumerate(segments):
        try:
            types.append(from_polish(segment))
        except IllFormedSequence as e:
            raise IllFormedSequence(str(e), i) from None
    if words is None:
        words = [''] * len(types)
    elif len(words) != len(types):
        raise IllFormedSequence(f'{len(words)} words for {len(types)} types')
    return build_frame(list(zip(words, types)), goal)


########################################################################################################################
# Sequent (frame) files
########################################################################################################################

def read_sequent(text: str, vocab: Vocabulary = DEFAULT_VOCABULARY) -> tuple[list[tuple[str, Type]], Type]:
    """Parse the frame file format: a ``goal: <type>`` line, then ``<word>\\t<type>`` lines."""
    lines = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith('#')]
    if not lines or not lines[0].startswith('goal:'):
        raise IllFormedSequence('first line must be "goal: <type>"')
    goal = parse_type(lines[0][len('goal:'):].strip(), vocab)
    premises = []
    for line in lines[1:]:
        word, tab, type_text = line.partition('\t')
        if not tab:
            raise IllFormedSequence(f'premise line without a tab: {line!r}')
        premises.append((word, parse_type(type_text.strip(), vocab)))
    return premises, goal


def write_sequent(premises: Iterable[tuple[str, Type]], goal: Type) -> str:
    lines = [f'goal: {print_type(goal)}']
    lines += [f'{word}\t{print_type(t)}' for word, t in premises]
    return '\n'.join(lines) + '\n'


def load_frame(text: str, vocab: Vocabulary = DEFAULT_VOCABULARY) -> ProofFrame:
    return build_frame(*read_sequent(text, vocab))


def dump_frame(frame: ProofFrame) -> str:
    return write_sequent(frame.sequent(), frame.goal_type)


def frame_to_json(frame: ProofFrame) -> dict:
    return {
        'goal': print_type(frame.goal_type),
        'premises': [{'word': w, 'type': print_type(t)} for w, t in frame.sequent()],
        'atoms': [{'index': i, 'atom': str(a), 'polarity': str(p)} for i, a, p in frame.atoms()],
        'nodes': [{'id': n.id, 'symbol': str(n.content), 'polarity': str(n.polarity),
                   'parent': n.parent, 'children': list(n.children)} for n in frame.nodes],
    }


def frame_from_json(data: dict, vocab: Vocabulary = DEFAULT_VOCABULARY) -> ProofFrame:
    premises = [(p['word'], parse_type(p['type'], vocab)) for p in data['premises']]
    return build_frame(premises, parse_type(data['goal'], vocab))
