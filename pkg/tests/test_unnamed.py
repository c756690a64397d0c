import random

import pytest
from hypothesis import given

from conftest import CORPUS, opetopes
from opetopic.address import STAR, empty, extend, wrap
from opetopic.errors import RuleViolation
from opetopic.preopetope import (
    ARROW, EMPTY, POINT, Degenerate, Nodes, corolla, integer, leaves, nodes, source,
)
from opetopic.textio import parse_address as A, parse_preopetope
from opetopic.unnamed import (
    corpus, derive, explain, is_opetope, legal_orders, rule_degen, rule_graft, rule_point,
    rule_shift, target_of,
)


def test_point_rule():
    s = rule_point()
    assert s.src == POINT and s.tgt == EMPTY and not s.ctx


def test_arrow_sequent():
    s = rule_shift(rule_point())
    assert s.src == ARROW and s.tgt == POINT and not s.ctx


def test_degen_rule():
    s = rule_degen(rule_point())
    assert s.src == Degenerate(POINT)
    assert s.tgt == ARROW
    assert dict(s.ctx) == {empty(1): STAR}


def test_integer_targets():
    for n in range(6):
        t, ctx = target_of(integer(n))
        assert t == ARROW
        assert dict(ctx) == {A("[" + "*" * n + "]") if n else empty(1): STAR}


def test_shift_context():
    two = derive(integer(2))
    s = rule_shift(two)
    assert s.src == corolla(integer(2))
    assert dict(s.ctx) == {wrap(a): a for a in nodes(integer(2))}


def test_classic_target():
    # shift 2, then graft 2 at [[*]]; the target is 3 [DERIVED: by hand substitution]
    two = derive(integer(2))
    s = rule_graft(rule_shift(two), A("[[*]]"), two)
    assert s.tgt == integer(3)
    assert dict(s.ctx) == {A("[[]]:2"): A("[]:1"), A("[[*][]]"): A("[*]"), A("[[*][*]]"): A("[**]")}


def test_graft_rejects_non_leaf():
    two = derive(integer(2))
    with pytest.raises(RuleViolation):
        rule_graft(rule_shift(two), A("[]:2"), two)


def test_graft_rejects_wrong_edge():
    two = derive(integer(2))
    omega = rule_graft(rule_shift(two), A("[[*]]"), two)
    # the edge at [[[*]]] is 2, but the grafted cell has target 3
    with pytest.raises(RuleViolation):
        rule_graft(rule_shift(omega), A("[[[*]]]"), derive(corolla(integer(3))))


def test_non_examples_rejected():
    gap = parse_preopetope((CORPUS / "not_an_opetope_gap.popt").read_text())
    rootless = parse_preopetope((CORPUS / "not_an_opetope_rootless.popt").read_text())
    assert not is_opetope(gap)
    assert not is_opetope(rootless)
    assert "root" in explain(rootless)


def test_doubly_degenerate_accepted():
    assert is_opetope(Degenerate(Degenerate(POINT)))


def test_generator_accepted(gen_corpus):
    big = list(corpus(500, 5, 8, seed=1))
    assert all(is_opetope(p) for p in big)
    assert {p.dim for p in big} == set(range(6))


def _independent_invariants(s) -> list[str]:
    bad = []
    if s.src.dim != s.tgt.dim + 1:
        bad.append("dim")
    if s.src.dim >= 2:
        keys, vals = list(s.ctx.keys()), list(s.ctx.values())
        if set(keys) != set(leaves(s.src)):
            bad.append("leaves")
        if set(vals) != set(nodes(s.tgt)) or len(set(vals)) != len(vals):
            bad.append("nodes")
    elif s.ctx:
        bad.append("ctx")
    if s.tgt != EMPTY and not is_opetope(s.tgt):
        bad.append("target")
    return bad


def test_structural_invariants(gen_corpus):
    for p in gen_corpus:
        assert _independent_invariants(derive(p)) == []


@given(opetopes(max_dim=5))
def test_structural_invariants_property(p):
    assert _independent_invariants(derive(p)) == []


def test_order_independence(gen_corpus):
    rng = random.Random(5)
    for p in gen_corpus[:200]:
        if not isinstance(p, Nodes) or p.dim < 2:
            continue
        ref = derive(p)
        for _ in range(3):
            s = derive(p, order=legal_orders(p, rng))
            assert (s.tgt, s.ctx) == (ref.tgt, ref.ctx)


# -- mutations that must be rejected --------------------------------------------

def _mutants(p: Nodes, rng: random.Random):
    root = empty(p.dim - 1)
    if len(p) > 1:
        yield Nodes([(k, v) for k, v in p.entries if k != root])
    for k, v in p.entries:
        if v.dim >= 1 and isinstance(v, Nodes):
            missing = [q for q in _candidate_children(v) if q not in nodes(v)]
            for q in missing[:1]:
                bad = extend(k, q)
                if bad not in p:
                    yield Nodes(list(p.entries) + [(bad, v)])
    for k, v in p.entries:
        if k != root and v.dim == 3:
            # every 2-opetope is an integer; swap in a corolla over a longer one
            n = len(nodes(target_of(v)[0]))
            yield Nodes([(kk, corolla(integer(n + 1)) if kk == k else vv) for kk, vv in p.entries])


def _candidate_children(v):
    if v.dim == 0:
        return []
    if v.dim == 1:
        return [STAR]
    return [A("[" + "*" * 7 + "]")] if v.dim == 2 else []


def test_mutations_rejected(gen_corpus):
    rng = random.Random(2)
    seen = 0
    for p in gen_corpus:
        if isinstance(p, Nodes) and p.dim >= 2:
            for m in _mutants(p, rng):
                seen += 1
                assert not is_opetope(m), m
    assert seen > 50
