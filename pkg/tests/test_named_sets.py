import pytest

from conftest import CORPUS
from opetopic.coding import to_named
from opetopic.counting import count
from opetopic.errors import RuleViolation
from opetopic.named_derivation import n_point, n_shift
from opetopic.named_sets import (
    m_pd, m_point, m_shift, ocmt_isomorphic, os_glue, os_materialize, os_repr, os_sum, os_zero,
)
from opetopic.preopetope import ARROW, integer
from opetopic.textio import load_script, parse_ocmt, parse_preopetope, serialize_ocmt


def _load(name):
    return load_script(CORPUS / f"{name}.drv")


def test_repr_of_arrow():
    o = os_repr(n_shift(n_point("a"), "f"))
    cx = os_materialize(o)
    assert len(cx) == 3
    assert sorted(cx.by_dim()[0]) == ["a", "tf"]
    assert cx.violations() == []


def test_zero_is_empty():
    assert len(os_materialize(os_zero())) == 0


def test_sum_needs_disjoint_names():
    o = os_repr(n_shift(n_point("a"), "f"))
    with pytest.raises(RuleViolation):
        os_sum(o, o)


def test_glue_needs_parallel_cells():
    o = os_sum(os_repr(n_shift(n_point("a"), "f")), os_repr(n_shift(n_point("b"), "g")))
    with pytest.raises(RuleViolation):
        os_glue(o, "f", "g")
    glued = os_glue(os_glue(os_glue(o, "a", "b"), "tf", "tg"), "f", "g")
    assert len(os_materialize(glued)) == 3


def test_glue_needs_same_dim():
    o = os_repr(n_shift(n_point("a"), "f"))
    with pytest.raises(RuleViolation):
        os_glue(o, "a", "f")


def test_textual_derivation_matches_hand_written():
    derived = _load("glued_pair_of_cells")
    hand = _load("hand_written_pair_of_cells")
    assert len(os_materialize(derived)) == 7
    assert ocmt_isomorphic(derived, hand)


def test_scripted_representables_match_mixed_system():
    assert ocmt_isomorphic(_load("glued_representables"), _load("mixed_system_set"))


def test_mixed_derivation_matches_hand_written():
    # Expected by the acceptance criteria; the two derivations describe sets
    # with 6 and 7 cells, so this stays red (see the decision ledger).
    assert ocmt_isomorphic(_load("mixed_system_set"), _load("hand_written_pair_of_cells"))


def test_isomorphism_is_not_trivial():
    assert not ocmt_isomorphic(_load("glued_pair_of_cells"), _load("glued_representables"))


@pytest.mark.parametrize("name", ["glued_pair_of_cells", "hand_written_pair_of_cells",
                                  "glued_representables", "mixed_system_set"])
def test_identities_hold(name):
    assert os_materialize(_load(name)).violations() == []


def test_mixed_shift_introduces_targets():
    o = m_shift(m_pd(m_point("a"), "a"), "f")
    assert {v.display for v in o.ctx} == {"a", "f", "tf"}
    o2 = m_shift(m_pd(o, "f"), "alpha")
    assert len(os_materialize(o2)) == count(integer(1)) == 5
    assert os_materialize(o2).violations() == []


def test_materialized_repr_counts(gen_corpus):
    for p in gen_corpus:
        assert len(os_materialize(os_repr(to_named(p)))) == count(p)


@pytest.mark.parametrize("name", ["arrow_named", "integers_named", "classic_named",
                                  "degenerate_graft_named"])
def test_corpus_repr_counts(name):
    from opetopic.coding import to_preopetope
    s = _load(name)
    cx = os_materialize(os_repr(s))
    assert len(cx) == count(to_preopetope(s))
    assert cx.violations() == []


def test_ocmt_text_roundtrip():
    for name in ("glued_pair_of_cells", "mixed_system_set"):
        o = _load(name)
        back = parse_ocmt(serialize_ocmt(o))
        assert back.ctx == o.ctx
        assert back.theory.classes(o.ctx) == o.theory.classes(o.ctx)
