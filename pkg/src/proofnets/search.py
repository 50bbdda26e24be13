"""Exhaustive axiom linking for small frames."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterator

from .frame import ProofFrame
from .linking import InvarianceViolated, ProofStructure, check_invariance, partition_atoms
from .verification import Term, verify_and_extract


class Exhausted(RuntimeError):
    def __init__(self, message: str, budget: SearchBudget):
        super().__init__(message)
        self.budget = budget


@dataclass(frozen=True)
class SearchBudget:
    max_structures: int = 100_000
    max_atoms_per_type: int = 8

    def __post_init__(self):
        if self.max_structures < 1 or self.max_atoms_per_type < 1:
            raise ValueError('search budget caps must be positive')


def structure_count(frame: ProofFrame) -> int:
    return math.prod(math.factorial(len(c.negatives)) for c in partition_atoms(frame))


def enumerate_structures(frame: ProofFrame, budget: SearchBudget = SearchBudget()) -> Iterator[ProofStructure]:
    """All perfect matchings, lexicographic over per-atom permutations (atoms sorted by name)."""
    check_invariance(frame)
    chains = partition_atoms(frame)
    for c in chains:
        if len(c.negatives) > budget.max_atoms_per_type:
            raise Exhausted(f'{c.atom} has {len(c.negatives)} occurrences per polarity, '
                            f'over the cap of {budget.max_atoms_per_type}', budget)
    per_atom = [[list(zip(c.negatives, perm)) for perm in permutations(c.positives)] for c in chains]
    for produced, choice in enumerate(product(*per_atom)):
        if produced >= budget.max_structures:
            raise Exhausted(f'more than {budget.max_structures} structures', budget)
        yield ProofStructure(frame, frozenset(link for links in choice for link in links))


def enumerate_nets(frame: ProofFrame, budget: SearchBudget = SearchBudget()) -> Iterator[tuple[ProofStructure, Term]]:
    """Valid linkings only; a frame failing count invariance simply has none."""
    try:
        check_invariance(frame)
    except InvarianceViolated:
        return
    for structure in enumerate_structures(frame, budget):
        verdict, term = verify_and_extract(structure)
        if verdict.valid:
            yield structure, term


def derivable(frame: ProofFrame, budget: SearchBudget = SearchBudget()) -> bool:
    """Whether some linking of `frame` is a proof net; `Exhausted` if the budget runs out first."""
    try:
        check_invariance(frame)
    except InvarianceViolated:
        return False
    for _ in enumerate_nets(frame, budget):
        return True
    return False
