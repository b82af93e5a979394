from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from autocat.diagram import SignedObject, identity_diagram
from autocat.errors import ParseError, ShapeMismatch, Uninterpretable
from autocat.functors import value
from autocat.models import Mat, MatTensor
from autocat.pregroup import (Order, Reduction, all_reductions, find_reduction, format_type,
                              parse_type, reduction_to_diagram, sentence_meaning,
                              sentence_types, validate_reduction)
from autocat.rewrite import count_nodes
from autocat.textio import load_lexicon, load_signature, parse_lexicon

from conftest import FIXTURES, mat
from oracles import (ALPHABETS, ORDER, TARGETS, contractible, planar_reductions,
                     sentence_oracle)

SENTENCE = "Clouzot directed an Italian movie".split()
S = (SignedObject("s", 0),)


@pytest.fixture(scope="module")
def lexicon():
    return load_lexicon(FIXTURES / "sentence.lex")


@pytest.fixture(scope="module")
def signature():
    return load_signature(FIXTURES / "sentence.sig")


def test_parse_type_examples():
    assert parse_type("n_s^r s n^l") == (SignedObject("n_s", 1), SignedObject("s", 0),
                                         SignedObject("n", -1))
    assert parse_type("d^r d") == (SignedObject("d", 1), SignedObject("d", 0))
    assert parse_type("n^rl") == (SignedObject("n", 0),)
    assert format_type(parse_type("n^rl")) == "n"
    assert format_type(parse_type("n^ll s^rr")) == "n^ll s^rr"
    assert parse_type("") == ()


def test_parse_type_errors():
    with pytest.raises(ParseError):
        parse_type("n^x")
    with pytest.raises(ParseError):
        parse_type("3n")
    with pytest.raises(ParseError):
        parse_type("q", basics={"n", "s"})


def test_sentence_reduction_links(lexicon, signature):
    types = sentence_types(SENTENCE, lexicon, signature.objects)
    r = find_reduction(types, S, signature)
    assert r is not None
    assert sorted(r.one_based()) == [(1, 2), (4, 9), (5, 6), (7, 8)]
    assert r.survivors == (2,)
    assert len(all_reductions(types, S, signature)) == 1
    # without n_s <= n the sentence does not parse
    assert find_reduction(types, S, Order()) is None


def test_trivial_reductions():
    assert find_reduction([S], S) == Reduction((), (0,))
    n = (SignedObject("n", 0),)
    assert find_reduction([n, n], S) is None


def test_validator_flags_problems():
    atoms = parse_type("n n^r s")
    order = Order()
    assert validate_reduction(Reduction(((0, 1),), (2,)), atoms, S, order) == []
    assert validate_reduction(Reduction(((0, 2),), (1,)), atoms, S, order)
    crossing = parse_type("n m n^r m^r")
    probs = validate_reduction(Reduction(((0, 2), (1, 3)), ()), crossing, (), order)
    assert any("cross" in p for p in probs)


@pytest.mark.parametrize("alphabet", ALPHABETS)
@pytest.mark.parametrize("target", TARGETS)
def test_reductions_match_brute_force_up_to_eight_atoms(alphabet, target):
    order = Order(ORDER)
    for n in range(0, 9):
        for word in itertools.product(alphabet, repeat=n):
            got = {(r.links, r.survivors) for r in all_reductions([word], target, order)}
            assert got == planar_reductions(word, target), word
            first = find_reduction([word], target, order)
            assert (first is None) == (not got)
            if first is not None:
                assert validate_reduction(first, word, target, order) == []


def test_library_contraction_agrees_with_oracle_rule():
    from autocat.pregroup import contracts

    order = Order(ORDER)
    atoms = [SignedObject(b, w) for b in "ab" for w in range(-3, 4)]
    for x, y in itertools.product(atoms, repeat=2):
        assert contracts(x, y, order) == contractible(x, y)


def test_reduction_diagrams(lexicon, signature):
    assert reduction_to_diagram(Reduction((), (0,)), [S]) == identity_diagram(S)
    nested = parse_type("n m m^r n^r")
    d = reduction_to_diagram(Reduction(((0, 3), (1, 2)), ()), [nested])
    assert len(d.slices) == 2 and count_nodes(d) == (0, 2, 0)
    assert d.slices[0][1].base == "m" and d.slices[1][0].base == "n"
    types = sentence_types(SENTENCE, lexicon, signature.objects)
    r = find_reduction(types, S, signature)
    sent = reduction_to_diagram(r, types, signature)
    assert sent.cod == S
    assert count_nodes(sent) == (1, 4, 0)
    with pytest.raises(ShapeMismatch):
        reduction_to_diagram(Reduction(((0, 1),), (2,)), [parse_type("n s n^r")])


def test_strict_lexicon_reduction_has_no_order_box():
    lex = load_lexicon(FIXTURES / "sentence_strict.lex")
    sig = load_signature(FIXTURES / "sentence_strict.sig")
    types = sentence_types(SENTENCE, lex, sig.objects)
    r = find_reduction(types, S, sig)
    assert sorted(r.one_based()) == [(1, 2), (4, 9), (5, 6), (7, 8)]
    assert count_nodes(reduction_to_diagram(r, types, sig)) == (0, 4, 0)


def _entries(lex):
    return [lex[w].meaning for w in SENTENCE]


@pytest.mark.parametrize("lexfile,sigfile", [("sentence.lex", "sentence.sig"),
                                             ("sentence_strict.lex", "sentence_strict.sig")])
def test_sentence_meaning_matches_index_contraction(lexfile, sigfile):
    lex = load_lexicon(FIXTURES / lexfile)
    sig = load_signature(FIXTURES / sigfile)
    dims = {k: v for k, v in sig.objects.items()}
    got = sentence_meaning(SENTENCE, lex, dims, target=S, order=sig)
    expected = sentence_oracle(*_entries(lex))
    assert [r[0] for r in got.rows] == expected
    assert expected == [Fraction(259, 18), Fraction(1, 4)]


def test_sentence_meaning_single_word_and_ungrammatical(lexicon, signature):
    dims = dict(signature.objects)
    assert sentence_meaning(["rains"], lexicon, dims, order=signature) == lexicon["rains"].meaning
    assert sentence_meaning(["movie", "an"], lexicon, dims, order=signature) is None


def test_sentence_meaning_errors(signature):
    dims = dict(signature.objects)
    lex = parse_lexicon('word "x" : s = matrix lexicon/clouzot.mat\nword "y" : s\n',
                        FIXTURES)
    assert sentence_meaning(["x"], lex, dims) == lex["x"].meaning
    with pytest.raises(Uninterpretable):
        sentence_meaning(["y"], lex, dims)
    with pytest.raises(Uninterpretable):
        sentence_meaning(["z"], lex, dims)
    bad = parse_lexicon('word "x" : s = matrix lexicon/directed.mat\n', FIXTURES)
    with pytest.raises(ShapeMismatch):
        sentence_meaning(["x"], bad, dims)


def test_order_box_needs_matrix_when_dims_differ(lexicon, signature):
    dims = dict(signature.objects)
    dims["n"] = 3
    with pytest.raises(Uninterpretable):
        sentence_meaning(SENTENCE, lexicon, dims, order=signature)


def test_mapped_reduction_diagram_is_evaluable(lexicon, signature):
    from autocat.functors import map_diagram
    from autocat.pregroup import interpretation_functor

    types = sentence_types(SENTENCE, lexicon, signature.objects)
    red = reduction_to_diagram(find_reduction(types, S, signature), types, signature)
    dims = dict(signature.objects)
    mapped = map_diagram(interpretation_functor(dims, {}, red), red)
    by_contraction = value(mapped, MatTensor(), route="contract")
    assert by_contraction == value(mapped, MatTensor(), route="slices")
    assert by_contraction.shape == (2, 2 ** 9)
    states = Mat.identity(1)
    for w in SENTENCE:
        states = MatTensor().tensor(states, lexicon[w].meaning)
    assert by_contraction @ states == mat([[Fraction(259, 18)], [Fraction(1, 4)]])
