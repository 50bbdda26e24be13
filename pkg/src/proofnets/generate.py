"""Seeded random types and sequents for property tests and experiments."""
from __future__ import annotations

import random

from .formulas import Arrow, Atom, Atomic, Box, Diamond, Type, adjunct, complement
from .frame import ProofFrame, build_frame, count_invariance

ATOMS = tuple(Atom.parse(a) for a in ('np', 'n', 's_main', 'pron'))
COMPLEMENTS = tuple(complement(d) for d in ('su', 'obj', 'predc'))
ADJUNCTS = tuple(adjunct(m) for m in ('mod', 'det'))


class GenerationFailed(Exception):
    pass


def random_type(rng: random.Random, depth: int = 6, atoms=ATOMS, p_arrow: float = 0.45,
                p_decorate: float = 0.3) -> Type:
    """A well-formed type of depth at most `depth`, with random modal decorations."""
    def arrow_type(depth: int) -> Type:
        argument = go(depth - 1)
        result = go(depth - 1)
        if rng.random() < p_decorate:
            return Box(rng.choice(ADJUNCTS), Arrow(argument, result))
        if rng.random() < p_decorate and not isinstance(argument, Box):
            return Arrow(Diamond(rng.choice(COMPLEMENTS), argument), result)
        return Arrow(argument, result)

    def go(depth: int) -> Type:
        if depth <= 1 or rng.random() > p_arrow:
            return Atomic(rng.choice(atoms))
        return arrow_type(depth)
    return arrow_type(depth) if depth > 1 and rng.random() < p_arrow else go(depth)


def _spine(t: Type) -> tuple[list[tuple[Type, object]], Atom]:
    """Arguments (with their complement marks) and target atom of a positive type."""
    args = []
    while True:
        match t:
            case Atomic(atom):
                return args, atom
            case Box(_, inner):
                t = inner
            case Arrow(Diamond(d, argument), result):
                args.append((argument, d))
                t = result
            case Arrow(argument, result):
                args.append((argument, None))
                t = result


def _decorate(rng: random.Random, argument: Type, result: Type, mark, p_decorate: float) -> Type:
    if mark is not None:
        return Arrow(Diamond(mark, argument), result)
    if rng.random() < p_decorate:
        return Box(rng.choice(ADJUNCTS), Arrow(argument, result))
    return Arrow(argument, result)


def derivable_sequent(rng: random.Random, goal: Type | None = None, atoms=ATOMS, max_premises: int = 6,
                      max_depth: int = 3, p_decorate: float = 0.3) -> list[Type]:
    """Premise types from which `goal` is derivable, built by growing a random normal proof.

    Raises `GenerationFailed` when the random choices paint themselves into a corner.
    """
    premises: list[Type] = []

    def prove(goal: Type, hyps: list[tuple[Type, object]], slot_mark, depth: int) -> None:
        match goal:
            case Box(_, inner):
                return prove(inner, hyps, None, depth)
            case Arrow(Diamond(d, argument), result):
                if not isinstance(argument, Atomic):
                    raise GenerationFailed('marked higher-order hypothesis')
                return prove(result, hyps + [(argument, d)], None, depth)
            case Arrow(argument, result):
                return prove(result, hyps + [(argument, None)], None, depth)
        atom = goal.atom
        # a marked hypothesis of the right atom can fill a matching slot directly
        for i, (h, mark) in enumerate(hyps):
            if mark is not None and len(hyps) == 1 and h == goal and mark == slot_mark:
                return
        usable = [i for i, (h, mark) in enumerate(hyps) if mark is None and _spine(h)[1] == atom]
        if usable and rng.random() < 0.5:
            i = rng.choice(usable)
            head, rest = hyps[i][0], hyps[:i] + hyps[i + 1:]
            args, _ = _spine(head)
            if not args and rest:
                raise GenerationFailed('leftover hypotheses')
            return distribute(args, rest, depth)
        if len(premises) >= max_premises:
            raise GenerationFailed('too many premises')
        n = rng.choice((0, 1, 1, 2)) if depth < max_depth else 0
        if hyps and n == 0:
            n = 1
        if hyps and depth >= max_depth + 2:
            raise GenerationFailed('too deep')
        marked = [h for h in hyps if h[1] is not None]
        args = []
        for h, mark in marked:
            args.append((h, mark))
        while len(args) < n:
            args.append((random_type(rng, 3, atoms, p_decorate=0), None))
        rng.shuffle(args)
        t: Type = Atomic(atom)
        for argument, mark in reversed(args):
            t = _decorate(rng, argument, t, mark, p_decorate)
        premises.append(t)
        unmarked = [h for h in hyps if h[1] is None]
        # marked hypotheses go straight into their own slots
        plan = [[(h, m)] if m is not None else [] for h, m in args]
        for h in unmarked:
            choices = [i for i, (_, m) in enumerate(args) if m is None]
            if not choices:
                raise GenerationFailed('no slot for hypothesis')
            plan[rng.choice(choices)].append(h)
        for (argument, mark), part in zip(args, plan):
            prove(argument, part, mark, depth + 1)

    def distribute(args, rest, depth):
        plan = [[] for _ in args]
        for h in rest:
            plan[rng.randrange(len(args))].append(h)
        for (argument, mark), part in zip(args, plan):
            prove(argument, part, mark, depth + 1)

    if goal is None:
        goal = Atomic(rng.choice(atoms))
    prove(goal, [], None, 0)
    rng.shuffle(premises)
    return premises


def balanced_sequent(rng: random.Random, n: int, atoms=ATOMS) -> tuple[Type, list[Type]]:
    """Random premises patched to satisfy count invariance (derivable or not).

    Missing positive occurrences are supplied as atomic premises; surplus ones
    are collected by an extra premise ``e1 -o ... -o ek -o g`` whose target is the goal.
    """
    premises = [random_type(rng, 3, atoms) for _ in range(n)]
    frame = build_frame([('', t) for t in premises], Atomic(atoms[0]))
    surplus: dict[Atom, int] = {}
    for position, atom, polarity in frame.atoms():
        if position < len(frame.atom_index) - 1:
            surplus[atom] = surplus.get(atom, 0) + (1 if polarity.value == '+' else -1)
    extra: list[Type] = []
    collected: list[Type] = []
    for atom, count in surplus.items():
        if count < 0:
            extra += [Atomic(atom)] * -count
        collected += [Atomic(atom)] * max(count, 0)
    goal = Atomic(rng.choice(atoms))
    rng.shuffle(collected)
    t: Type = goal
    for argument in reversed(collected):
        t = Arrow(argument, t)
    premises = premises + extra + [t]
    rng.shuffle(premises)
    return goal, premises


def random_frame(rng: random.Random, max_premises: int = 6, max_per_type: int = 4,
                 p_derivable: float = 0.6, atoms=None, tries: int = 10_000) -> ProofFrame:
    """An invariance-satisfying frame, built from a random proof with probability `p_derivable`.

    Without explicit `atoms`, each attempt draws one to three atom types so that
    repeated occurrences (and hence competing linkings) are common.
    """
    pool = atoms
    for _ in range(tries):
        atoms = pool or ATOMS[:rng.randint(1, 3)]
        try:
            if rng.random() < p_derivable:
                goal = Atomic(rng.choice(atoms)) if rng.random() < 0.7 else random_type(rng, 3, atoms)
                premises = derivable_sequent(rng, goal, atoms, max_premises)
            else:
                goal, premises = balanced_sequent(rng, rng.randint(1, max_premises - 1), atoms)
        except GenerationFailed:
            continue
        if not 1 <= len(premises) <= max_premises:
            continue
        frame = build_frame([(f'w{i}', t) for i, t in enumerate(premises)], goal)
        counts, ok = count_invariance(frame)
        if ok and all(n <= max_per_type for n, _ in counts.values()):
            return frame
    raise GenerationFailed(f'no frame after {tries} tries')
