"""Axiom links as per-atom permutation tables, log-space Sinkhorn, and discretization."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Protocol

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import logsumexp

from .formulas import DEFAULT_VOCABULARY, Atom, Vocabulary
from .frame import NEG, POS, ProofFrame, count_invariance, frame_from_json, frame_to_json

DEFAULT_ITERATIONS = 5


class LinkingError(ValueError):
    pass


class ShapeMismatch(LinkingError):
    pass


class MissingAtomTable(LinkingError):
    pass


class InvarianceViolated(LinkingError):
    pass


@dataclass(frozen=True)
class AtomChains:
    atom: Atom
    negatives: tuple[int, ...]
    positives: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class PermutationTable:
    atom: Atom
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeMismatch(f'{self.atom}: table of shape {m.shape} is not square')
        if not np.isin(m, (0, 1)).all() or (m.sum(0) != 1).any() or (m.sum(1) != 1).any():
            raise ShapeMismatch(f'{self.atom}: table is not a permutation matrix')
        object.__setattr__(self, 'matrix', m.astype(np.int8))

    def __eq__(self, other) -> bool:
        return (isinstance(other, PermutationTable) and self.atom == other.atom
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self) -> int:
        return hash((self.atom, self.matrix.tobytes()))

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @staticmethod
    def from_permutation(atom: Atom, columns: Iterable[int]) -> PermutationTable:
        """Row i is linked to column columns[i]."""
        columns = list(columns)
        m = np.zeros((len(columns), len(columns)), dtype=np.int8)
        m[np.arange(len(columns)), columns] = 1
        return PermutationTable(atom, m)


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    atom: Atom
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeMismatch(f'{self.atom}: score matrix of shape {m.shape} is not square')
        if not np.isfinite(m).all():
            raise ValueError(f'{self.atom}: score matrix has non-finite entries')
        object.__setattr__(self, 'matrix', m)


@dataclass(frozen=True)
class ProofStructure:
    frame: ProofFrame
    # (negative atom position, positive atom position)
    links: frozenset[tuple[int, int]]

    def __post_init__(self):
        atoms = self.frame.atoms()
        seen: set[int] = set()
        for neg, pos in self.links:
            if not (0 <= neg < len(atoms) and 0 <= pos < len(atoms)):
                raise ValueError(f'link {(neg, pos)} out of range')
            _, a_n, p_n = atoms[neg]
            _, a_p, p_p = atoms[pos]
            if p_n is not NEG or p_p is not POS:
                raise ValueError(f'link {(neg, pos)} does not join a negative to a positive atom')
            if a_n != a_p:
                raise ValueError(f'link {(neg, pos)} joins {a_n} to {a_p}')
            if neg in seen or pos in seen:
                raise ValueError(f'link {(neg, pos)} reuses an atom')
            seen |= {neg, pos}
        if len(seen) != len(atoms):
            raise ValueError('links are not a perfect matching')

    def partner(self) -> dict[int, int]:
        """Negative atom position -> positive atom position."""
        return dict(self.links)


def partition_atoms(frame: ProofFrame) -> list[AtomChains]:
    chains: dict[Atom, tuple[list[int], list[int]]] = {}
    for i, atom, polarity in frame.atoms():
        negatives, positives = chains.setdefault(atom, ([], []))
        (negatives if polarity is NEG else positives).append(i)
    return [AtomChains(a, tuple(n), tuple(p)) for a, (n, p) in sorted(chains.items(), key=lambda kv: str(kv[0]))]


def _normalize(x: np.ndarray) -> np.ndarray:
    # log-space normalization over the first index for each fixed second index
    return x - logsumexp(x, axis=0, keepdims=True)


def sinkhorn(x: ScoreMatrix | np.ndarray, iterations: int = DEFAULT_ITERATIONS) -> np.ndarray:
    if iterations < 1:
        raise ValueError('iterations must be positive')
    x = np.array(x.matrix if isinstance(x, ScoreMatrix) else x, dtype=float)
    for _ in range(iterations):
        x = _normalize(_normalize(x).T).T
    return np.exp(x)


def _assignment_value(weights: np.ndarray) -> float:
    rows, cols = linear_sum_assignment(weights, maximize=True)
    return weights[rows, cols].sum()


def discretize(s: np.ndarray, atom: Atom | None = None) -> PermutationTable:
    """Maximum-weight perfect matching on log-entries; ties go to the lowest row, then lowest column."""
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ShapeMismatch(f'matrix of shape {s.shape} is not square')
    n = s.shape[0]
    weights = np.log(np.clip(s, 1e-300, None))
    best = _assignment_value(weights)
    tol = 1e-9 * max(1.0, abs(best))
    columns: list[int] = []
    free_rows, free_cols = list(range(n)), list(range(n))
    fixed = 0.0
    for row in range(n):
        free_rows.remove(row)
        for col in free_cols:
            rest = free_cols.copy()
            rest.remove(col)
            value = fixed + weights[row, col]
            if free_rows:
                value += _assignment_value(weights[np.ix_(free_rows, rest)])
            if value >= best - tol:
                break
        columns.append(col)
        free_cols.remove(col)
        fixed += weights[row, col]
    return PermutationTable.from_permutation(atom if atom is not None else Atom('_'), columns)


def check_invariance(frame: ProofFrame) -> None:
    counts, ok = count_invariance(frame)
    if not ok:
        bad = ', '.join(f'{a}: {n}-/{p}+' for a, (n, p) in counts.items() if n != p)
        raise InvarianceViolated(f'count invariance fails ({bad})')


def assemble_structure(frame: ProofFrame, tables: Mapping[Atom, PermutationTable]) -> ProofStructure:
    check_invariance(frame)
    links = set()
    for chains in partition_atoms(frame):
        if chains.atom not in tables:
            raise MissingAtomTable(f'no permutation table for {chains.atom}')
        table = tables[chains.atom]
        if table.size != len(chains.negatives):
            raise ShapeMismatch(f'{chains.atom}: table of size {table.size} for {len(chains.negatives)} occurrences')
        for i, j in zip(*np.nonzero(table.matrix)):
            links.add((chains.negatives[i], chains.positives[j]))
    return ProofStructure(frame, frozenset(links))


def links_to_tables(structure: ProofStructure) -> dict[Atom, PermutationTable]:
    partner = structure.partner()
    tables = {}
    for chains in partition_atoms(structure.frame):
        column = {p: j for j, p in enumerate(chains.positives)}
        tables[chains.atom] = PermutationTable.from_permutation(
            chains.atom, [column[partner[n]] for n in chains.negatives])
    return tables


########################################################################################################################
# Score sources
########################################################################################################################

class Scorer(Protocol):
    def __call__(self, frame: ProofFrame, chains: AtomChains) -> ScoreMatrix: ...


class RandomScorer:
    """Standard normal scores from a seeded generator, drawn per atom in chain order."""

    def __init__(self, seed: int | None = None):
        self.rng = np.random.default_rng(seed)

    def __call__(self, frame: ProofFrame, chains: AtomChains) -> ScoreMatrix:
        n = len(chains.negatives)
        return ScoreMatrix(chains.atom, self.rng.standard_normal((n, n)))


class TableScorer:
    """Scores read from a score-file mapping; chains in the file must agree with the frame."""

    def __init__(self, scores: Mapping[str, dict]):
        self.scores = scores

    def __call__(self, frame: ProofFrame, chains: AtomChains) -> ScoreMatrix:
        entry = self.scores.get(str(chains.atom))
        if entry is None:
            raise MissingAtomTable(f'no scores for {chains.atom}')
        for key in ('negatives', 'positives'):
            if key in entry and tuple(entry[key]) != getattr(chains, key):
                raise ShapeMismatch(f'{chains.atom}: {key} {entry[key]} do not match frame {list(getattr(chains, key))}')
        matrix = np.asarray(entry['scores'], dtype=float)
        n = len(chains.negatives)
        if matrix.shape != (n, n):
            raise ShapeMismatch(f'{chains.atom}: scores of shape {matrix.shape}, expected {(n, n)}')
        return ScoreMatrix(chains.atom, matrix)


def load_scores(text: str) -> TableScorer:
    return TableScorer(json.loads(text))


def scores_to_json(matrices: Iterable[tuple[AtomChains, ScoreMatrix]]) -> dict:
    return {str(c.atom): {'negatives': list(c.negatives), 'positives': list(c.positives),
                          'scores': s.matrix.tolist()} for c, s in matrices}


def link_frame(frame: ProofFrame, scorer: Scorer, iterations: int = DEFAULT_ITERATIONS) -> ProofStructure:
    """Score, normalize and discretize every atom table, then assemble the structure."""
    check_invariance(frame)
    tables = {}
    for chains in partition_atoms(frame):
        scores = scorer(frame, chains)
        tables[chains.atom] = discretize(sinkhorn(scores, iterations), chains.atom)
    return assemble_structure(frame, tables)


def structure_to_json(structure: ProofStructure) -> dict:
    return {'frame': {k: v for k, v in frame_to_json(structure.frame).items() if k in ('goal', 'premises')},
            'links': sorted([n, p] for n, p in structure.links)}


def structure_from_json(data: dict, vocab: Vocabulary = DEFAULT_VOCABULARY) -> ProofStructure:
    return ProofStructure(frame_from_json(data['frame'], vocab), frozenset((n, p) for n, p in data['links']))
