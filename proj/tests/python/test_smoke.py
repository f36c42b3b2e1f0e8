"""Smoke tests for the python bindings."""

import pytest

import gramtrans as gx


TINY = "start S ;\nS -> 'a' S ;\nS -> 'b' ;\n"


def test_parse_and_repr():
    g = gx.parse_grammar(TINY, name="tiny")
    assert g.name == "tiny"
    assert g.production_count == 2
    assert "tiny" in repr(g)


def test_serialize_round_trip():
    g = gx.parse_grammar(TINY, name="tiny")
    again = gx.parse_grammar(g.serialize(), name="tiny")
    assert again.serialize() == g.serialize()


def test_bad_grammar_raises():
    with pytest.raises(gx.GrammarError):
        gx.parse_grammar("start S\n")


def test_classify_mathqa():
    report = gx.classify(gx.mathqa_grammar())
    assert report["ll1"] is False
    assert report["ll2"] is False
    assert report["lr1"] is True
    assert report["lr1_states"] == 97
    assert "LR(1): yes" in gx.report_text(gx.mathqa_grammar())


def test_transform_reaches_ll1():
    base = gx.mathqa_grammar()
    result = gx.transform(base)
    assert gx.is_ll_k(result.grammar, 1)
    assert result.introduced_before_reorder == 12
    assert result.introduced_after_reorder == 5
    assert result.mode == "full"


def test_layered_transform():
    result = gx.transform(gx.mathqa_grammar(), mode="layers", layers=1)
    assert result.mode == "layers=1"
    assert not gx.is_ll_k(result.grammar, 1)


def test_translate_round_trip():
    base = gx.mathqa_grammar()
    result = gx.transform(base)
    map_json = gx.rule_map_json(result, base)

    program = "n0 = 2 + 3\nn1 = n0 * n0\n"
    there = gx.translate_program(program, base, result.grammar, map_json)
    assert there != program
    back = gx.translate_program(there, base, result.grammar, map_json, backward=True)
    assert back == program


def test_translate_with_result_shortcut():
    base = gx.mathqa_grammar()
    result = gx.transform(base)
    assert "+ 1 2" in gx.translate_with_result("x = 1 + 2\n", base, result)


def test_parse_to_sexpr_both_engines():
    base = gx.mathqa_grammar()
    result = gx.transform(base)
    program = gx.translate_with_result("x = 1 + 2\n", base, result)
    earley = gx.parse_to_sexpr(result.grammar, program)
    predictive = gx.parse_to_sexpr(result.grammar, program, ll1=True)
    assert earley == predictive
    assert earley.startswith("(p")


def test_sample_is_deterministic():
    base = gx.mathqa_grammar()
    a = gx.sample_program(base, max_depth=14, seed=7)
    b = gx.sample_program(base, max_depth=14, seed=7)
    assert a == b
    assert gx.parse_to_sexpr(base, a)


def test_ncfg_codec():
    encoded = gx.ncfg_encode("x = a + b\n")
    assert encoded == "x = a + b x\n"
    assert gx.ncfg_decode(encoded) == "x = a + b\n"
    with pytest.raises(gx.NcfgError):
        gx.ncfg_decode("x = a + b y\n")
