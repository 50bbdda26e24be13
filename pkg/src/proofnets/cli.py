"""Command-line front end.

Exit codes: 0 ok, 2 syntax / ill-formed input, 3 count invariance fails,
4 score or table shape mismatch, 5 structure is not a proof net, 6 search
budget exhausted. Errors are also reported as one JSON object on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .depgraph import HeadlessTerm, depgraph_to_json, extract_depgraph, to_conll
from .formulas import (IllFormedSequence, TypeSyntaxError, Vocabulary, WellFormednessError, parse_symbols,
                       parse_type, print_symbols)
from .frame import ProofFrame, count_invariance, flatten_frame, frame_to_json, load_frame, parse_frame_sequence
from .linking import (DEFAULT_ITERATIONS, InvarianceViolated, LinkingError, RandomScorer, ProofStructure,
                      check_invariance, link_frame, load_scores, structure_from_json, structure_to_json)
from .search import Exhausted, SearchBudget, enumerate_structures
from .verification import print_term, term_to_json, verify_and_extract

EXIT_OK, EXIT_SYNTAX, EXIT_INVARIANCE, EXIT_SHAPE, EXIT_INVALID, EXIT_EXHAUSTED = 0, 2, 3, 4, 5, 6


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str, **details):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.details = details


@dataclass(frozen=True)
class PipelineConfig:
    iterations: int = DEFAULT_ITERATIONS
    budget: SearchBudget = SearchBudget()
    vocab: Vocabulary = Vocabulary()
    seed: int | None = None
    format: str = 'text'

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError('iterations must be positive')


def _read(path: str) -> str:
    return sys.stdin.read() if path == '-' else Path(path).read_text()


def _load_frame(path: str, cfg: PipelineConfig) -> ProofFrame:
    try:
        return load_frame(_read(path), cfg.vocab)
    except TypeSyntaxError as e:
        raise CliError(EXIT_SYNTAX, 'syntax', str(e), position=e.position, file=path) from None
    except (WellFormednessError, IllFormedSequence) as e:
        raise CliError(EXIT_SYNTAX, 'syntax', str(e), file=path) from None


def _load_structure(path: str, cfg: PipelineConfig) -> ProofStructure:
    try:
        return structure_from_json(json.loads(_read(path)), cfg.vocab)
    except (ValueError, KeyError, TypeError) as e:
        raise CliError(EXIT_SYNTAX, 'syntax', f'bad structure file: {e}', file=path) from None


def _invariance_report(frame: ProofFrame) -> dict:
    counts, ok = count_invariance(frame)
    return {'ok': ok, 'counts': {str(a): {'negative': n, 'positive': p} for a, (n, p) in counts.items()}}


def _link(frame: ProofFrame, scores_path: str | None, cfg: PipelineConfig) -> ProofStructure:
    try:
        check_invariance(frame)
        scorer = load_scores(_read(scores_path)) if scores_path else RandomScorer(cfg.seed)
        return link_frame(frame, scorer, cfg.iterations)
    except InvarianceViolated as e:
        raise CliError(EXIT_INVARIANCE, 'invariance', str(e)) from None
    except LinkingError as e:
        raise CliError(EXIT_SHAPE, 'shape', str(e)) from None
    except (ValueError, KeyError, TypeError) as e:
        raise CliError(EXIT_SYNTAX, 'syntax', f'bad scores file: {e}', file=scores_path) from None


def _emit(out, obj) -> None:
    print(json.dumps(obj, ensure_ascii=False), file=out)


########################################################################################################################
# Subcommands
########################################################################################################################

def cmd_frame(args, cfg: PipelineConfig, out) -> int:
    frame = _load_frame(args.sequent, cfg)
    report = _invariance_report(frame)
    flat = print_symbols(flatten_frame(frame))
    if cfg.format == 'json':
        _emit(out, {'frame': frame_to_json(frame), 'flattened': flat, 'invariance': report})
    else:
        for i, atom, polarity in frame.atoms():
            print(f'{i}\t{atom}\t{polarity}', file=out)
        print(flat, file=out)
        for atom, c in report['counts'].items():
            print(f'{atom}\t{c["negative"]}-\t{c["positive"]}+', file=out)
        print('invariance: ' + ('ok' if report['ok'] else 'FAILED'), file=out)
    if not report['ok']:
        raise CliError(EXIT_INVARIANCE, 'invariance', 'count invariance fails', report=report)
    return EXIT_OK


def cmd_flatten(args, cfg: PipelineConfig, out) -> int:
    print(print_symbols(flatten_frame(_load_frame(args.sequent, cfg))), file=out)
    return EXIT_OK


def cmd_validate_seq(args, cfg: PipelineConfig, out) -> int:
    try:
        goal = parse_type(args.goal, cfg.vocab)
        frame = parse_frame_sequence(parse_symbols(_read(args.sequence), cfg.vocab), goal)
    except TypeSyntaxError as e:
        raise CliError(EXIT_SYNTAX, 'syntax', str(e), position=e.position) from None
    except WellFormednessError as e:
        raise CliError(EXIT_SYNTAX, 'syntax', str(e)) from None
    except IllFormedSequence as e:
        raise CliError(EXIT_SYNTAX, 'ill-formed-sequence', str(e), segment=e.segment) from None
    report = _invariance_report(frame)
    if cfg.format == 'json':
        _emit(out, {'frame': frame_to_json(frame), 'invariance': report})
    else:
        print('well-formed; invariance: ' + ('ok' if report['ok'] else 'FAILED'), file=out)
    if not report['ok']:
        raise CliError(EXIT_INVARIANCE, 'invariance', 'count invariance fails', report=report)
    return EXIT_OK


def cmd_link(args, cfg: PipelineConfig, out) -> int:
    frame = _load_frame(args.frame, cfg)
    if args.scores is None and not args.random:
        raise CliError(EXIT_SYNTAX, 'usage', 'one of --scores or --random is required')
    _emit(out, structure_to_json(_link(frame, args.scores, cfg)))
    return EXIT_OK


def _verified(structure: ProofStructure):
    verdict, term = verify_and_extract(structure)
    if not verdict.valid:
        raise CliError(EXIT_INVALID, 'invalid-net', f'not a proof net: {verdict.failure.value}',
                       verdict=verdict.to_json())
    return term


def cmd_verify(args, cfg: PipelineConfig, out) -> int:
    verdict, _ = verify_and_extract(_load_structure(args.structure, cfg))
    _emit(out, verdict.to_json())
    if not verdict.valid:
        raise CliError(EXIT_INVALID, 'invalid-net', f'not a proof net: {verdict.failure.value}',
                       verdict=verdict.to_json())
    return EXIT_OK


def cmd_term(args, cfg: PipelineConfig, out) -> int:
    structure = _load_structure(args.structure, cfg)
    term = _verified(structure)
    if cfg.format == 'json':
        _emit(out, term_to_json(term))
    else:
        print(print_term(term, args.types, structure.frame.premise_types), file=out)
    return EXIT_OK


def _graph(term):
    try:
        return extract_depgraph(term)
    except HeadlessTerm as e:
        raise CliError(EXIT_INVALID, 'headless-term', str(e)) from None


def cmd_depgraph(args, cfg: PipelineConfig, out) -> int:
    graph = _graph(_verified(_load_structure(args.structure, cfg)))
    if cfg.format == 'json':
        _emit(out, depgraph_to_json(graph))
    else:
        out.write(to_conll(graph))
    return EXIT_OK


def cmd_enumerate(args, cfg: PipelineConfig, out) -> int:
    frame = _load_frame(args.frame, cfg)
    budget = SearchBudget(args.max, cfg.budget.max_atoms_per_type)
    try:
        for structure in enumerate_structures(frame, budget):
            verdict, term = verify_and_extract(structure)
            if args.nets_only and not verdict.valid:
                continue
            record = structure_to_json(structure)
            record['verdict'] = verdict.to_json()
            if term is not None:
                record['term'] = print_term(term)
            _emit(out, record)
    except InvarianceViolated as e:
        raise CliError(EXIT_INVARIANCE, 'invariance', str(e)) from None
    except Exhausted as e:
        raise CliError(EXIT_EXHAUSTED, 'exhausted', str(e)) from None
    return EXIT_OK


def parse_one(frame: ProofFrame, scores_path: str | None, cfg: PipelineConfig):
    """Link, verify and read back one frame; returns the JSON record and the term (None if invalid)."""
    structure = _link(frame, scores_path, cfg)
    verdict, term = verify_and_extract(structure)
    result = {'structure': structure_to_json(structure), 'verdict': verdict.to_json()}
    if term is not None:
        result['term'] = print_term(term)
        result['depgraph'] = depgraph_to_json(_graph(term))
    return result, term


def cmd_parse(args, cfg: PipelineConfig, out) -> int:
    frame = _load_frame(args.sequent, cfg)
    result, term = parse_one(frame, args.scores, cfg)
    if cfg.format == 'json':
        _emit(out, result)
    else:
        verdict = result['verdict']
        if not verdict['valid']:
            print(f'invalid: {verdict["failure"]} (witness {verdict["witness"]})', file=out)
        else:
            print(result['term'], file=out)
            out.write(to_conll(_graph(term)))
    if not result['verdict']['valid']:
        raise CliError(EXIT_INVALID, 'invalid-net', 'not a proof net', verdict=result['verdict'])
    return EXIT_OK


def _batch_item(path: Path, index: int, cfg: PipelineConfig) -> dict:
    scores = path.with_suffix('.scores.json')
    # batch output must be reproducible, so an absent seed means 0
    item_cfg = PipelineConfig(cfg.iterations, cfg.budget, cfg.vocab, (cfg.seed or 0) + index, cfg.format)
    record = {'file': path.name}
    try:
        frame = _load_frame(str(path), item_cfg)
        record.update(parse_one(frame, str(scores) if scores.exists() else None, item_cfg)[0])
        record['exit_code'] = EXIT_OK if record['verdict']['valid'] else EXIT_INVALID
    except CliError as e:
        record.update({'error': e.kind, 'message': str(e), 'exit_code': e.code})
    return record


def cmd_batch(args, cfg: PipelineConfig, out) -> int:
    paths = sorted(Path(args.directory).glob('*.seq'))
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        records = list(pool.map(lambda ip: _batch_item(ip[1], ip[0], cfg), enumerate(paths)))
    for record in records:
        _emit(out, record)
    return max((r['exit_code'] for r in records), default=EXIT_OK)


########################################################################################################################
# Entry point
########################################################################################################################

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=('text', 'json', 'tsv'), default='text')
    common.add_argument('--seed', type=int, default=None)
    common.add_argument('--iterations', type=int, default=DEFAULT_ITERATIONS, help='Sinkhorn iterations')
    common.add_argument('--budget', type=int, default=SearchBudget().max_structures,
                        help='maximum number of structures to enumerate')
    common.add_argument('--vocab', default=None, help='vocabulary JSON (default: $PROOFNETS_VOCAB)')

    parser = argparse.ArgumentParser(prog='proofnets', description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('frame', parents=[common], help='build a proof frame from a sequent file')
    p.add_argument('sequent')
    p.set_defaults(func=cmd_frame)

    p = sub.add_parser('flatten', parents=[common], help='print the flattened symbol sequence')
    p.add_argument('sequent')
    p.set_defaults(func=cmd_flatten)

    p = sub.add_parser('validate-seq', parents=[common], help='parse a flattened symbol sequence')
    p.add_argument('sequence', nargs='?', default='-')
    p.add_argument('--goal', required=True)
    p.set_defaults(func=cmd_validate_seq)

    p = sub.add_parser('link', parents=[common], help='link a frame from scores')
    p.add_argument('--frame', required=True)
    p.add_argument('--scores')
    p.add_argument('--random', action='store_true')
    p.set_defaults(func=cmd_link)

    for name, func, help_ in (('verify', cmd_verify, 'check a proof structure'),
                              ('term', cmd_term, 'print the term of a proof net'),
                              ('depgraph', cmd_depgraph, 'print the dependency graph of a proof net')):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument('structure')
        if name == 'term':
            p.add_argument('--types', action='store_true')
        p.set_defaults(func=func)

    p = sub.add_parser('enumerate', parents=[common], help='enumerate proof structures of a frame')
    p.add_argument('--frame', required=True)
    p.add_argument('--max', type=int, default=SearchBudget().max_structures)
    p.add_argument('--nets-only', action='store_true')
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser('parse', parents=[common], help='frame, link, verify and read back')
    p.add_argument('sequent')
    p.add_argument('--scores')
    p.add_argument('--random', action='store_true')
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser('batch', parents=[common], help='parse every *.seq file in a directory')
    p.add_argument('directory')
    p.add_argument('--workers', type=int, default=4)
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        vocab = Vocabulary.load(args.vocab) if args.vocab else Vocabulary.from_env()
        cfg = PipelineConfig(args.iterations, SearchBudget(args.budget), vocab, args.seed, args.format)
    except (OSError, ValueError, json.JSONDecodeError) as e:
        _emit(err, {'error': 'config', 'message': str(e), 'exit_code': EXIT_SYNTAX})
        return EXIT_SYNTAX
    try:
        return args.func(args, cfg, out)
    except CliError as e:
        _emit(err, {'error': e.kind, 'message': str(e), 'exit_code': e.code, **e.details})
        return e.code
    except OSError as e:
        _emit(err, {'error': 'io', 'message': str(e), 'exit_code': EXIT_SYNTAX})
        return EXIT_SYNTAX


def main_exit() -> None:
    sys.exit(main())


if __name__ == '__main__':
    main_exit()
