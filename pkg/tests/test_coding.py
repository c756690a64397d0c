import pytest
from hypothesis import given

from conftest import CORPUS, opetopes
from opetopic.coding import (
    Namer, code_term, readdressing_holds, target_consistency, to_named, to_named_with_proof,
    to_preopetope,
)
from opetopic.errors import NotAnOpetope
from opetopic.named import alpha_equivalent, coherence_violations
from opetopic.preopetope import ARROW, POINT, Degenerate, integer
from opetopic.textio import load_script, parse_preopetope, run_script
from opetopic.unnamed import derive, target_of


def test_point_and_arrow():
    assert to_preopetope(to_named(POINT)) == POINT
    assert to_preopetope(to_named(ARROW)) == ARROW


def test_integers_code():
    for n in range(6):
        assert to_preopetope(to_named(integer(n))) == integer(n)


def test_named_corpus_codes_to_unnamed_corpus():
    named = load_script(CORPUS / "classic_named.drv")
    unnamed = load_script(CORPUS / "classic_unnamed.drv")
    assert to_preopetope(named) == unnamed.src
    degen = load_script(CORPUS / "degenerate_graft_named.drv")
    shape = parse_preopetope((CORPUS / "degenerate_graft_shape.popt").read_text())
    assert to_preopetope(degen) == shape


def test_target_of_named_matches():
    s = load_script(CORPUS / "classic_named.drv")
    assert code_term(s.type[0], s.ctx, s.theory) == to_preopetope(s)
    assert target_consistency(s)


def test_rejects_non_opetopes():
    bad = parse_preopetope((CORPUS / "not_an_opetope_rootless.popt").read_text())
    with pytest.raises(NotAnOpetope):
        to_named(bad)


def test_roundtrip_unnamed(gen_corpus):
    for p in gen_corpus:
        assert to_preopetope(to_named(p)) == p


def test_roundtrip_named(gen_corpus):
    for p in gen_corpus:
        s = to_named(p)
        other = to_named(to_preopetope(s), Namer("w"))
        assert alpha_equivalent(s, other)


@given(opetopes(max_dim=5))
def test_roundtrip_property(p):
    assert to_preopetope(to_named(p)) == p


def test_readdressing_identity(gen_corpus):
    for p in gen_corpus:
        s = to_named(p)
        assert readdressing_holds(s)
        if s.dim >= 2:
            assert target_consistency(s)


def test_generated_scripts_replay(gen_corpus):
    checked = 0
    for p in gen_corpus:
        s, proof = to_named_with_proof(p)
        replayed = run_script("opt!", proof.script())
        assert replayed == s
        assert coherence_violations(replayed) == []
        checked += 1
    assert checked >= 200


def test_renamed_scripts_are_alpha_equivalent(gen_corpus):
    for p in gen_corpus[:80]:
        s, proof = to_named_with_proof(p)
        names = {v.name for v in s.ctx}
        renamed = proof.rename({n: f"r_{n}" for n in names})
        assert alpha_equivalent(run_script("opt!", renamed.script()), s)
