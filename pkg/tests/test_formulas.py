import pytest
from hypothesis import given, settings

from proofnets.formulas import (BARE, SEP, SOS, Arrow, Atom, Atomic, AtomSym, Box, BoxImpl, Diamond, DiamondImpl,
                                IllFormedSequence, TypeSyntaxError, Vocabulary, WellFormednessError, adjunct,
                                arrow_count, atomic, atoms_of, check_wellformed, complement, from_polish, order,
                                parse_symbols, parse_type, print_symbols, print_type, to_polish)
from strategies import types

np_, n, pron, s_sub, s_main = (atomic(a) for a in ('np', 'n', 'pron', 's_sub', 's_main'))
DE = Box(adjunct('det'), Arrow(n, np_))
VOLGEN = Arrow(Diamond(complement('obj'), pron), Arrow(Diamond(complement('su'), pron), s_sub))
DIE = Arrow(Diamond(complement('body'), Arrow(Diamond(complement('obj'), pron), s_sub)),
            Box(adjunct('mod'), Arrow(np_, np_)))


def test_atom_split_on_first_underscore():
    assert Atom.parse('s_main') == Atom('s', 'main')
    assert str(Atom.parse('s_main')) == 's_main'
    assert Atom.parse('np') == Atom('np', None)


class TestParse:
    def test_single_atom(self):
        assert parse_type('np') == Atomic(Atom('np'))

    def test_determiner(self):
        assert parse_type('[det](n -o np)') == DE

    def test_relative_pronoun(self):
        assert parse_type('<body>(<obj> pron -o s_sub) -o [mod](np -o np)') == DIE

    def test_right_associative(self):
        assert parse_type('np -o np -o s_main') == Arrow(np_, Arrow(np_, s_main))
        assert parse_type('(np -o np) -o s_main') == Arrow(Arrow(np_, np_), s_main)

    @pytest.mark.parametrize('text, position', [('np -o', 5), ('np )', 3), ('(np', 3), ('np $ np', 3), ('', 0)])
    def test_syntax_error_has_position(self, text, position):
        with pytest.raises(TypeSyntaxError) as info:
            parse_type(text)
        assert info.value.position == position

    @pytest.mark.parametrize('text', [
        '<su> np',                 # diamond outside an argument
        '[mod] np',                # boxed atom
        '[mod](<su> np -o np)',    # box over decorated argument
        '<su>[mod](np -o np) -o s_main',
        '<mod> np -o s_main',      # adjunct label on a diamond
        '[su](np -o np)',          # complement label on a box
        '<nosuchlabel> np -o s_main',
    ])
    def test_wellformedness_errors(self, text):
        with pytest.raises(WellFormednessError):
            parse_type(text)

    def test_custom_vocabulary(self):
        vocab = Vocabulary(complements=('arg',), adjuncts=('adj',))
        assert parse_type('<arg> np -o [adj](np -o np)', vocab) == \
            Arrow(Diamond(complement('arg'), np_), Box(adjunct('adj'), Arrow(np_, np_)))
        with pytest.raises(WellFormednessError):
            parse_type('<su> np -o np', vocab)


class TestPrint:
    def test_atom(self):
        assert print_type(np_) == 'np'

    def test_volgen(self):
        assert print_type(VOLGEN) == '<obj> pron -o <su> pron -o s_sub'

    def test_box(self):
        assert print_type(Box(adjunct('mod'), Arrow(np_, np_))) == '[mod](np -o np)'

    def test_die(self):
        assert print_type(DIE) == '<body>(<obj> pron -o s_sub) -o [mod](np -o np)'


class TestOrder:
    def test_atom(self):
        assert order(np_) == 0

    def test_first_order(self):
        assert order(VOLGEN) == 1

    def test_higher_order(self):
        assert order(DIE) == 2


class TestPolish:
    def test_determiner(self):
        assert to_polish(DE) == [BoxImpl(adjunct('det')), AtomSym(Atom('n')), AtomSym(Atom('np'))]

    def test_noun(self):
        assert to_polish(n) == [AtomSym(Atom('n'))]

    def test_volgen(self):
        assert print_symbols(to_polish(VOLGEN)) == '<obj> pron <su> pron s_sub'

    def test_bare(self):
        assert to_polish(Arrow(np_, s_main)) == [BARE, AtomSym(Atom('np')), AtomSym(Atom('s', 'main'))]

    def test_from_polish(self):
        assert from_polish([AtomSym(Atom('n'))]) == n
        assert from_polish(parse_symbols('[det] n np')) == DE

    @pytest.mark.parametrize('text', ['<obj> pron', '', 'np np', '-o np', '[SOS] np', 'np [SEP]'])
    def test_ill_formed(self, text):
        with pytest.raises(IllFormedSequence):
            from_polish(parse_symbols(text))

    def test_token_rendering(self):
        assert print_symbols([SOS, DiamondImpl(complement('su')), BoxImpl(adjunct('mod')), BARE, SEP]) == \
            '[SOS] <su> [mod] -o [SEP]'

    def test_unknown_token(self):
        with pytest.raises((IllFormedSequence, WellFormednessError)):
            parse_symbols('<nosuch> np np')


@settings(max_examples=300)
@given(types)
def test_generated_types_are_wellformed(t):
    check_wellformed(t)


@settings(max_examples=300)
@given(types)
def test_text_roundtrip(t):
    assert parse_type(print_type(t)) == t


@settings(max_examples=300)
@given(types)
def test_polish_roundtrip(t):
    assert from_polish(to_polish(t)) == t
    assert from_polish(parse_symbols(print_symbols(to_polish(t)))) == t


@settings(max_examples=300)
@given(types)
def test_symbol_count(t):
    assert len(to_polish(t)) == len(atoms_of(t)) + arrow_count(t)


@given(types, types)
def test_order_monotone_under_argument_nesting(a, r):
    assert order(Arrow(a, r)) >= order(a) + 1
