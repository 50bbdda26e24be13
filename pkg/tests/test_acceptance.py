"""Acceptance criteria, each at its stated tolerance.

Run under pytest (a summary line per criterion is printed at the end of the
session) or directly with ``python tests/test_acceptance.py``.
"""
import io
import math
import random
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import EXAMPLE_SEQUENT, EXAMPLE_TERM, EXAMPLE_POLARITIES, EXAMPLE_EDGES, EXAMPLE_LINKS, EXAMPLE_PERMUTATIONS  # noqa: E402
from nd_prover import derivations  # noqa: E402
from proofnets.cli import main as cli_main  # noqa: E402
from proofnets.depgraph import extract_depgraph  # noqa: E402
from proofnets.formulas import from_polish, parse_type, print_symbols, print_type, to_polish, parse_symbols  # noqa: E402
from proofnets.frame import dump_frame, flatten_frame, load_frame  # noqa: E402
from proofnets.generate import random_frame, random_type  # noqa: E402
from proofnets.linking import (PermutationTable, assemble_structure, discretize, links_to_tables,  # noqa: E402
                               partition_atoms, sinkhorn)
from proofnets.search import enumerate_structures, structure_count  # noqa: E402
from proofnets.verification import alpha_equivalent, verify_and_extract  # noqa: E402

RESULTS: dict[int, tuple[bool, str]] = {}
NAMES = {1: 'worked-example fidelity', 2: 'flattening fidelity', 3: 'Sinkhorn numerics', 4: 'oracle equivalence',
         5: 'structure-count closed form', 6: 'roundtrips', 7: 'sequence and frame filtering'}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    print(f'criterion {n} ({NAMES[n]}): {"PASS" if ok else "FAIL"} - {detail}')
    assert ok, detail


def test_1_worked_example():
    start = time.perf_counter()
    frame = load_frame(EXAMPLE_SEQUENT)
    polarities = [(str(a), str(p)) for _, a, p in frame.atoms()]
    tables = {c.atom: PermutationTable.from_permutation(c.atom, EXAMPLE_PERMUTATIONS[str(c.atom)])
              for c in partition_atoms(frame)}
    structure = assemble_structure(frame, tables)
    verdict, term = verify_and_extract(structure)
    graph = extract_depgraph(term) if term is not None else None
    elapsed = time.perf_counter() - start
    checks = {
        '16 atoms with expected polarities': polarities == EXAMPLE_POLARITIES,
        'expected links': structure.links == EXAMPLE_LINKS,
        'accepted': verdict.valid,
        'expected term': term is not None and alpha_equivalent(term, EXAMPLE_TERM),
        'expected graph': graph is not None and graph.edges == EXAMPLE_EDGES and graph.root == 6,
        'under 1 s': elapsed < 1.0,
    }
    failed = [k for k, v in checks.items() if not v]
    record(1, not failed, f'{elapsed * 1000:.1f} ms' + (f'; failed: {failed}' if failed else ''))


def test_2_flattening():
    expected = '[SOS] [det] n np [SEP] n [SEP] <body> <obj> pron s_sub [mod] np np [SEP] pron [SEP] <obj>'.split()
    tokens = print_symbols(flatten_frame(load_frame(EXAMPLE_SEQUENT))).split()
    record(2, tokens[:len(expected)] == expected, ' '.join(tokens))


def test_3_sinkhorn():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst20 = worst5 = worst_shift = 0.0
    for _ in range(1000):
        x = rng.standard_normal((8, 8))
        s20, s5 = sinkhorn(x, 20), sinkhorn(x, 5)
        worst20 = max(worst20, np.abs(s20.sum(0) - 1).max(), np.abs(s20.sum(1) - 1).max())
        worst5 = max(worst5, np.abs(s5.sum(0) - 1).max(), np.abs(s5.sum(1) - 1).max())
        c = rng.uniform(-100, 100)
        worst_shift = max(worst_shift, np.abs(sinkhorn(x + c) - s5).max())
    hits = 0
    for _ in range(1000):
        p = np.eye(8)[rng.permutation(8)]
        with np.errstate(divide='ignore'):
            s = sinkhorn(np.log(p) + 0.1 * rng.standard_normal((8, 8)))
        hits += np.array_equal(discretize(s).matrix, p)
    elapsed = time.perf_counter() - start
    # not gating: wide uniform scores converge far more slowly (see the strict xfail in the linking tests)
    wide = max(np.abs(sinkhorn(rng.uniform(-10, 10, (8, 8)), 20).sum(0) - 1).max() for _ in range(1000))
    ok = worst20 <= 1e-4 and worst5 <= 5e-2 and worst_shift <= 1e-9 and hits >= 990 and elapsed < 10
    record(3, ok, f'N(0,1) scores: max marginal error {worst20:.2e} at 20 iterations, {worst5:.2e} at 5; '
                  f'shift error {worst_shift:.1e}; recovered {hits}/1000; {elapsed:.2f} s '
                  f'(for reference, uniform [-10, 10] scores: {wide:.2e} at 20 iterations)')


def test_4_oracle_equivalence():
    rng = random.Random(4)
    disagreements = derivable = multiple = 0
    n = 600
    for _ in range(n):
        frame = random_frame(rng, max_premises=6, max_per_type=4)
        nets = {s.links for s in enumerate_structures(frame) if verify_and_extract(s)[0].valid}
        oracle = derivations(frame.premise_types, frame.goal_type)
        disagreements += nets != oracle
        derivable += bool(nets)
        multiple += len(nets) > 1
    record(4, disagreements == 0, f'{n} frames, {disagreements} disagreements '
                                  f'({derivable} derivable, {multiple} with several nets)')


def test_5_structure_counts():
    rng = random.Random(5)
    bad = 0
    for _ in range(100):
        frame = random_frame(rng)
        expected = math.prod(math.factorial(len(c.negatives)) for c in partition_atoms(frame))
        bad += not (len(list(enumerate_structures(frame))) == expected == structure_count(frame))
    example = len(list(enumerate_structures(load_frame(EXAMPLE_SEQUENT))))
    record(5, bad == 0 and example == 4, f'{100 - bad}/100 frames match the closed form; worked example: {example}')


def test_6_roundtrips():
    rng = random.Random(6)
    counts = dict.fromkeys(('type text', 'Polish', 'links/tables', 'frame file'), 0)
    for _ in range(1000):
        t = random_type(rng, depth=6)
        counts['type text'] += parse_type(print_type(t)) == t
        counts['Polish'] += from_polish(parse_symbols(print_symbols(to_polish(t)))) == t
    for _ in range(1000):
        frame = random_frame(rng)
        tables = {}
        for c in partition_atoms(frame):
            columns = list(range(len(c.negatives)))
            rng.shuffle(columns)
            tables[c.atom] = PermutationTable.from_permutation(c.atom, columns)
        structure = assemble_structure(frame, tables)
        counts['links/tables'] += links_to_tables(structure) == tables and \
            assemble_structure(frame, links_to_tables(structure)) == structure
        counts['frame file'] += load_frame(dump_frame(frame)) == frame
    record(6, all(v == 1000 for v in counts.values()), ', '.join(f'{k} {v}/1000' for k, v in counts.items()))


EXAMPLE_SEQUENCE = ('[SOS] [det] n np [SEP] n [SEP] <body> <obj> pron s_sub [mod] np np [SEP] pron [SEP] '
                 '<obj> pron <su> pron s_sub [SEP] <predc> adj <su> np s_main [SEP] adj [SEP]')

# (sequence, goal, expected exit code)
CORRUPTED = [
    (EXAMPLE_SEQUENCE[:-len(' [SEP]')], 's_main', 2),                       # unterminated last premise
    (EXAMPLE_SEQUENCE[len('[SOS] '):], 's_main', 2),                         # no start symbol
    ('[SOS] <obj> pron [SEP]', 'np', 2),                                  # missing result subtree
    ('[SOS] np np [SEP]', 'np', 2),                                       # trailing symbol
    ('[SOS] np [SEP] [SOS] np [SEP]', 'np', 2),                           # second start symbol
    ('', 'np', 2),                                                        # empty
    ('[SOS]', 'np', 2),                                                   # no premises
    ('[SOS] <xyz> np np [SEP]', 'np', 2),                                 # unknown label
    ('[SOS] <mod> np np [SEP]', 'np', 2),                                 # adjunct label on a diamond
    ('[SOS] [su] np np [SEP]', 'np', 2),                                  # complement label on a box
    (EXAMPLE_SEQUENCE.replace('<su> pron s_sub', '<su> pron'), 's_main', 2),  # truncated premise
    ('[SOS] -o np [SEP]', 'np', 2),                                       # bare implication missing result
    ('[SOS] [det] n [SEP] n [SEP]', 'np', 2),                             # box missing result
    ('[SOS] np $ [SEP]', 'np', 2),                                        # garbage token
    ('[SOS] np [SEP]', 'np -o', 2),                                       # malformed goal
    (EXAMPLE_SEQUENCE[:-len(' adj [SEP]')], 's_main', 3),                   # premise dropped
    (EXAMPLE_SEQUENCE, 'np', 3),                                             # wrong goal
    ('[SOS] np [SEP]', 's_main', 3),                                      # unrelated atoms
    (EXAMPLE_SEQUENCE.replace('[SEP] pron [SEP]', '[SEP] np [SEP]'), 's_main', 3),  # retyped premise
    ('[SOS] -o np np [SEP] np [SEP] np [SEP]', 'np', 3),                  # surplus resource
]

CONTROLS = [
    (EXAMPLE_SEQUENCE, 's_main'),
    ('[SOS] np [SEP]', 'np'),
    ('[SOS] -o np s_main [SEP] np [SEP]', 's_main'),
    ('[SOS] [det] n np [SEP] n [SEP]', 'np'),
    ('[SOS] <su> np s_main [SEP] np [SEP]', 's_main'),
]


def _controls():
    rng = random.Random(7)
    controls = list(CONTROLS)
    while len(controls) < 20:
        frame = random_frame(rng)
        controls.append((print_symbols(flatten_frame(frame)), print_type(frame.goal_type)))
    return controls


def _validate(sequence: str, goal: str, monkeypatch) -> int:
    monkeypatch.setattr(sys, 'stdin', io.StringIO(sequence))
    return cli_main(['validate-seq', '--goal', goal], io.StringIO(), io.StringIO())


def test_7_filtering(monkeypatch):
    wrong = [i for i, (seq, goal, code) in enumerate(CORRUPTED) if _validate(seq, goal, monkeypatch) != code]
    rejected = [i for i, (seq, goal) in enumerate(_controls()) if _validate(seq, goal, monkeypatch) != 0]
    record(7, not wrong and not rejected and len(CORRUPTED) == 20,
           f'{20 - len(wrong)}/20 corrupted sequences rejected with the designated code, '
           f'{20 - len(rejected)}/20 controls accepted; corpus accuracy figures are not targets'
           + (f'; wrong code for {wrong}, rejected controls {rejected}' if wrong or rejected else ''))


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-q', '-p', 'no:cacheprovider']))
