from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autocat.diagram import SignedObject, interface
from autocat.errors import ParseError
from autocat.harness import fixture_diagrams, random_diagram, random_mat
from autocat.models import Gen, IdTerm
from autocat.textio import (format_diagram, format_matrix, format_signature, load_diagram,
                            load_interpretation, load_lexicon, load_signature, parse_diagram,
                            parse_interpretation, parse_lexicon, parse_matrix, parse_signature,
                            parse_signed, parse_term)

from conftest import DIAGRAMS, FIXTURES


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(["mat", "free"]))
def test_diagram_round_trip(seed, kind):
    d = random_diagram(random.Random(seed), kind, steps=5)
    assert parse_diagram(format_diagram(d)) == d


def test_fixture_corpus_round_trips():
    for d in fixture_diagrams():
        assert parse_diagram(format_diagram(d)) == d


def test_matrix_round_trip():
    rng = random.Random(0)
    for _ in range(20):
        m = random_mat(rng, rng.randint(1, 4), rng.randint(1, 4))
        assert parse_matrix(format_matrix(m)) == m
    assert parse_matrix("2 1\n1/2\n-3\n").rows == ((Fraction(1, 2),), (Fraction(-3),))


def test_signature_round_trip():
    sig = load_signature(DIAGRAMS / "free.sig")
    assert set(sig.objects) == {"A", "B", "C"}
    assert sig.generators["k"].dom == ("A", "B")
    again = parse_signature(format_signature(sig))
    assert again.objects == sig.objects and again.generators == sig.generators
    ordered = load_signature(FIXTURES / "sentence.sig")
    assert ordered.objects["n"] == 2 and ("n_s", "n") in ordered.order


def test_signed_objects_and_terms():
    assert parse_signed("A^-2") == SignedObject("A", -2)
    assert parse_signed("3") == SignedObject(3, 0)
    assert parse_signed("A*B^1") == SignedObject(("A", "B"), 1)
    sig = load_signature(DIAGRAMS / "free.sig")
    t = parse_term("((f ; g) @ id(A))", sig)
    assert t.dom == ("A", "A") and t.cod == ("C", "A")
    assert parse_term("id(A*B)", sig) == IdTerm(("A", "B"))
    assert parse_term("f", sig) == Gen("f", ("A",), ("B",))


def test_lexicon_and_interpretation_files():
    lex = load_lexicon(FIXTURES / "sentence.lex")
    assert lex["directed"].type_text == "n_s^r s n^l"
    assert lex["directed"].meaning.shape == (8, 1)
    interp = load_interpretation(FIXTURES / "free.model")
    assert interp.dims == {"A": 2, "B": 2, "C": 1}
    assert interp.mats["g"].shape == (1, 2)


def test_fixture_diagrams_load():
    sig = load_signature(DIAGRAMS / "free.sig")
    zig = load_diagram(DIAGRAMS / "zigzag.diag", sig)
    assert zig.dom == zig.cod == interface("A")


@pytest.mark.parametrize("text,line", [
    ("dom: A\nwire A\nwire B\n", 3),
    ("dom: A\n\n# comment\nfrob A\n", 4),
    ("dom: A\nbox mat(1x1; x) [1] -> [1]\n", 2),
    ("dom: A\nbox g [B] -> [C]\n", 2),
    ("dom: A\nbox q [A] -> [B]\n", 2),
    ("wire A\n", 1),
    ("dom: 2\nbox mat(2x2; 1 0 0 1) [3] -> [3]\n", 2),
])
def test_diagram_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse_diagram(text, load_signature(DIAGRAMS / "free.sig") if "box g" in text
                      or "box q" in text else None)
    assert err.value.line == line
    assert str(err.value).startswith(f"line {line}:")


@pytest.mark.parametrize("parser,text,line", [
    (parse_signature, "object A\nobject B\nfoo C\n", 3),
    (parse_signature, "object A\norder A <= Z\n", 2),
    (parse_signature, "object A\ngen f : A -> Q\n", 2),
    (parse_lexicon, 'word "x" : s\nword y : s\n', 2),
    (parse_interpretation, "map object A -> dim=2\nmap thing\n", 2),
    (parse_matrix, "2 2\n1 2\n3 x\n", 3),
])
def test_other_parse_errors_carry_line_numbers(parser, text, line):
    with pytest.raises(ParseError) as err:
        parser(text)
    assert err.value.line == line


def test_matrix_entry_count_checked():
    with pytest.raises(ParseError):
        parse_matrix("2 2\n1 2 3\n")
