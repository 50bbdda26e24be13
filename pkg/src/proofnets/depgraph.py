"""Shallow dependency graphs read off decorated terms."""
from __future__ import annotations

from dataclasses import dataclass

from .verification import Abs, AdjunctApp, App, Lex, Term, Var


class HeadlessTerm(ValueError):
    pass


@dataclass(frozen=True)
class DependencyGraph:
    # word positions are 1-based premise positions
    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int, str]]
    root: int
    words: dict[int, str]

    def heads(self) -> dict[int, tuple[int, str]]:
        return {dep: (head, label) for head, dep, label in self.edges}

    def is_tree(self) -> bool:
        incoming = [dep for _, dep, _ in self.edges]
        return (len(incoming) == len(set(incoming)) and self.root not in incoming
                and set(incoming) | {self.root} == set(self.nodes))


def head(t: Term) -> int | None:
    """Word position heading `t`; None when the head is a bound variable."""
    match t:
        case Lex(_, index):
            return index + 1
        case Var():
            return None
        case App(fn, _, _):
            return head(fn)
        case AdjunctApp(_, _, arg):
            return head(arg)
        case Abs(_, _, body):
            return head(body)
    raise TypeError(f'not a term: {t!r}')


def extract_depgraph(term: Term) -> DependencyGraph:
    edges: set[tuple[int, int, str]] = set()
    words: dict[int, str] = {}

    def go(t: Term) -> None:
        match t:
            case Lex(word, index):
                words[index + 1] = word
            case Var():
                pass
            case App(fn, arg, label):
                go(fn)
                go(arg)
                h, d = head(fn), head(arg)
                if label is not None and h is not None and d is not None:
                    edges.add((h, d, label.name))
            case AdjunctApp(fn, label, arg):
                go(fn)
                go(arg)
                h, d = head(arg), head(fn)
                if h is not None and d is not None:
                    edges.add((h, d, label.name))
            case Abs(_, _, body):
                go(body)

    root = head(term)
    if root is None:
        raise HeadlessTerm('term is headed by a bound variable')
    go(term)
    return DependencyGraph(tuple(sorted(words)), frozenset(edges), root, words)


def to_conll(graph: DependencyGraph) -> str:
    """Tab-separated position, word, head position (0 for the root) and label."""
    heads = graph.heads()
    lines = []
    for position in graph.nodes:
        if position == graph.root:
            h, label = 0, 'ROOT'
        else:
            h, label = heads.get(position, ('_', '_'))
        lines.append(f'{position}\t{graph.words[position]}\t{h}\t{label}')
    return '\n'.join(lines) + '\n'


def depgraph_to_json(graph: DependencyGraph) -> dict:
    return {'root': graph.root,
            'nodes': [{'position': p, 'word': graph.words[p]} for p in graph.nodes],
            'edges': [{'head': h, 'dependent': d, 'label': l} for h, d, l in sorted(graph.edges)]}
