"""Compare traversal-verified nets with natural-deduction derivations on random frames.

    python scripts/oracle_agreement.py --frames 2000 --seeds 0 1 2
"""
from __future__ import annotations

import argparse
import random
import sys
import time
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from proofnets.frame import dump_frame
from proofnets.generate import random_frame
from proofnets.search import enumerate_structures
from proofnets.verification import verify_and_extract

# the prover is test-only code
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / 'tests'))
from nd_prover import derivations  # noqa: E402


@dataclass(frozen=True)
class AgreementConfig:
    frames: int = 1000
    max_premises: int = 6
    max_per_type: int = 4
    p_derivable: float = 0.6


def run(cfg: AgreementConfig, seed: int) -> tuple[Counter, list[str]]:
    rng = random.Random(seed)
    stats: Counter = Counter()
    disagreements = []
    for _ in range(cfg.frames):
        frame = random_frame(rng, cfg.max_premises, cfg.max_per_type, cfg.p_derivable)
        nets = set()
        for structure in enumerate_structures(frame):
            verdict, _ = verify_and_extract(structure)
            stats['structures'] += 1
            stats[verdict.failure.value if verdict.failure else 'valid'] += 1
            if verdict.valid:
                nets.add(structure.links)
        stats['derivable'] += bool(nets)
        stats['several nets'] += len(nets) > 1
        if nets != derivations(frame.premise_types, frame.goal_type):
            disagreements.append(dump_frame(frame))
    return stats, disagreements


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument('--frames', type=int, default=AgreementConfig.frames)
    parser.add_argument('--seeds', type=int, nargs='+', default=[0])
    args = parser.parse_args()
    cfg = AgreementConfig(frames=args.frames)
    failed = False
    for seed in args.seeds:
        start = time.perf_counter()
        stats, bad = run(cfg, seed)
        print(f'seed {seed}: {cfg.frames} frames, {len(bad)} disagreements, {time.perf_counter() - start:.1f} s; '
              + ', '.join(f'{k} {v}' for k, v in sorted(stats.items())))
        for text in bad[:3]:
            print(text)
        failed |= bool(bad)
    sys.exit(1 if failed else 0)


if __name__ == '__main__':
    main()
