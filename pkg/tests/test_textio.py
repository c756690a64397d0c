import json

import pytest
from hypothesis import given

from conftest import CORPUS, opetopes
from opetopic.errors import ParseError, ScriptError
from opetopic.named import Var
from opetopic.preopetope import ARROW, POINT, Degenerate, Nodes, corolla, integer
from opetopic.textio import (
    dumps, load_script, parse_address as A, parse_ocmt, parse_preopetope, parse_script,
    parse_term, parse_type, preopetope_from_json, preopetope_to_json, run_script,
    serialize_named_sequent, serialize_preopetope, tokenize,
)
from opetopic.unnamed import derive


def test_literals():
    assert parse_preopetope("point") == POINT
    assert parse_preopetope("degen{ point }") == Degenerate(POINT)
    assert parse_preopetope("{{ point }}") == Degenerate(POINT)
    assert parse_preopetope("arrow") == ARROW
    assert parse_preopetope("{ * <- point }") == ARROW


def test_macro_expansion():
    text = "let arrow = { * <- point }\n{ [] <- arrow; [*] <- arrow }"
    assert parse_preopetope(text) == integer(2)


def test_unicode_aliases():
    assert parse_preopetope("{ ∗ ← ♦ }") == ARROW
    assert parse_preopetope("{ []:1 ← ■; [∗] ← ■ }") == integer(2)


def test_trailing_semicolon_and_comments():
    assert parse_preopetope("{ []:1 <- arrow; # root\n [*] <- arrow; }") == integer(2)


def test_duplicate_key():
    with pytest.raises(ParseError, match="duplicate"):
        parse_preopetope("{ [*] <- arrow; [*] <- arrow }")


def test_dimension_mismatch():
    with pytest.raises(ParseError):
        parse_preopetope("{ [*] <- arrow; [**] <- point }")
    with pytest.raises(ParseError):
        parse_preopetope("{ [[*]] <- arrow }")


def test_unknown_name():
    with pytest.raises(ParseError) as e:
        parse_preopetope("{ []:1 <- nope }")
    assert (e.value.line, e.value.col) == (1, 11)


def test_tokenizer_positions():
    toks = tokenize("a\n  b <- c")
    assert [(t.text, t.line, t.col) for t in toks[:4]] == [("a", 1, 1), ("b", 2, 3), ("<-", 2, 5), ("c", 2, 8)]


@given(opetopes(max_dim=5))
def test_preopetope_roundtrip(p):
    assert parse_preopetope(serialize_preopetope(p)) == p


@given(opetopes(max_dim=5))
def test_json_roundtrip(p):
    obj = json.loads(json.dumps(preopetope_to_json(p)))
    assert preopetope_from_json(obj) == p


def test_serialization_is_canonical():
    a = parse_preopetope("{ [*] <- arrow; []:1 <- arrow }")
    b = parse_preopetope("{ []:1 <- arrow; [*] <- arrow }")
    assert serialize_preopetope(a) == serialize_preopetope(b)


def test_unnamed_script_for_classic_shape():
    s = load_script(CORPUS / "classic_unnamed.drv")
    two = integer(2)
    assert s.src == Nodes({A("[]:2"): two, A("[[*]]"): two})
    assert s.tgt == integer(3)


def test_named_script_for_classic():
    s = load_script(CORPUS / "classic_named.drv")
    assert str(s.term) == "A"
    assert str(s.type[0]) == "beta(i <- alpha)"


def test_unnamed_set_script():
    ctx = load_script(CORPUS / "folded_classic.drv")
    assert [c.name for c in ctx.cells] == ["a", "f", "alpha", "beta", "A"]
    assert ctx["beta"].shape == integer(3)


def test_script_equals_programmatic():
    from opetopic.named_derivation import n_graft, n_point, n_shift
    g = n_shift(n_point("b"), "g")
    f = n_shift(n_point("a"), "f")
    expected = n_shift(n_graft(g, "b", f), "n_2")
    assert load_script(CORPUS / "integers_named.drv") == expected


def test_explicit_dialect_overrides_header():
    assert run_script("opt?", "shift(point)").src == ARROW
    assert parse_script("opt!", "point(a)").dialect == "opt!"


def test_unknown_dialect():
    with pytest.raises(ParseError, match="dialect"):
        run_script(None, "shift(point)")


def test_function_from_another_dialect():
    with pytest.raises(ParseError, match="unknown function"):
        run_script("opt?", "repr(point)")


def test_rule_error_position():
    text = "#dialect opt!\nlet f = shift(point(a), f)\nshift(f, f)\n"
    with pytest.raises(ScriptError) as e:
        run_script(None, text)
    assert (e.value.line, e.value.col) == (3, 1)


def test_term_and_type_parsing():
    s = load_script(CORPUS / "classic_named.drv")
    t = parse_term("h(c <- g(b <- f))", s.ctx)
    assert t == s.type[1]
    assert parse_type("beta(i <- alpha) ~> h(c <- g(b <- f)) ~> a ~> 0", s.ctx) == s.type
    with pytest.raises(ParseError):
        parse_term("h(c <- q)", s.ctx)


def test_degenerate_term():
    s = load_script(CORPUS / "degenerate_graft_named.drv")
    alpha = next(v for v in s.ctx if v.name == "alpha")
    assert str(parse_term("_a", s.ctx)) == str(s.ctx[alpha][0])


def test_ocmt_literal_tags():
    o = parse_ocmt("ocmt { a : 0; t^1:f : 0; f : a ~> 0 } eq { }")
    assert {v.display for v in o.ctx} == {"a", "tf", "f"}
    assert Var("f", 0, 1) in o.ctx


def test_named_sequent_text():
    s = load_script(CORPUS / "degenerate_graft_named.drv")
    text = serialize_named_sequent(s)
    assert text.startswith("eq { a = b }")
    assert text.endswith("|- D : beta(f <- alpha) ~> g ~> a ~> 0")


def test_dumps_is_json():
    for obj in (integer(2), derive(integer(2)), load_script(CORPUS / "classic_named.drv")):
        json.loads(dumps(obj))
