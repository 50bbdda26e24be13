import pytest

from proofnets.formulas import Atom, adjunct, complement, parse_type
from proofnets.frame import build_frame, load_frame
from proofnets.verification import Abs, AdjunctApp, App, Lex, Var

EXAMPLE_SEQUENT = """goal: s_main
De\t[det](n -o np)
strategie\tn
die\t<body>(<obj> pron -o s_sub) -o [mod](np -o np)
ze\tpron
volgen\t<obj> pron -o <su> pron -o s_sub
is\t<predc> adj -o <su> np -o s_main
eeuwenoud\tadj
"""

EXAMPLE_POLARITIES = [
    ('n', '-'), ('np', '+'), ('n', '+'), ('pron', '+'), ('s_sub', '-'), ('np', '-'), ('np', '+'), ('pron', '+'),
    ('pron', '-'), ('pron', '-'), ('s_sub', '+'), ('adj', '-'), ('np', '-'), ('s_main', '+'), ('adj', '+'),
    ('s_main', '-'),
]

EXAMPLE_LINKS = frozenset({(0, 2), (11, 14), (15, 13), (4, 10), (8, 3), (9, 7), (5, 1), (12, 6)})

# permutation tables of the worked example as (atom, column of each row)
EXAMPLE_PERMUTATIONS = {'adj': [0], 'n': [0], 'np': [0, 1], 'pron': [0, 1], 's_main': [0], 's_sub': [0]}

EXAMPLE_TERM = App(
    App(Lex('is', 5), Lex('eeuwenoud', 6), complement('predc')),
    AdjunctApp(
        App(Lex('die', 2),
            Abs('x', complement('obj'), App(App(Lex('volgen', 4), Var('x')), Lex('ze', 3), complement('su'))),
            complement('body')),
        adjunct('mod'),
        AdjunctApp(Lex('De', 0), adjunct('det'), Lex('strategie', 1))),
    complement('su'))

EXAMPLE_TERM_TEXT = '((is (eeuwenoud)^predc) ((die (λx0^obj.((volgen x0) (ze)^su))^body)_mod ((De)_det strategie))^su)'

# (head, dependent, label) over 1-based word positions
EXAMPLE_EDGES = frozenset({(6, 7, 'predc'), (6, 2, 'su'), (2, 1, 'det'), (2, 3, 'mod'), (3, 5, 'body'),
                              (5, 4, 'su')})


@pytest.fixture
def example_text():
    return EXAMPLE_SEQUENT


@pytest.fixture
def example_frame():
    return load_frame(EXAMPLE_SEQUENT)


@pytest.fixture
def axiom_frame():
    return build_frame([('x', parse_type('np'))], parse_type('np'))


def atom(name: str) -> Atom:
    return Atom.parse(name)


def pytest_terminal_summary(terminalreporter):
    module = __import__('sys').modules.get('test_acceptance')
    if module is None or not module.RESULTS:
        return
    terminalreporter.section('acceptance criteria')
    for n in sorted(module.NAMES):
        if n in module.RESULTS:
            ok, detail = module.RESULTS[n]
            terminalreporter.write_line(f'criterion {n} ({module.NAMES[n]}): {"PASS" if ok else "FAIL"} - {detail}')
        else:
            terminalreporter.write_line(f'criterion {n} ({module.NAMES[n]}): FAIL - did not run')
