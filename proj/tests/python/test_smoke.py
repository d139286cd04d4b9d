import pytest

import freecat as fc


def test_parse_roundtrip():
    t = fc.parse_arrow("p1{p,q} . w{p /\\ q}")
    assert fc.parse_arrow(str(t)) == t
    s = fc.parse_sequent("p, q |- p")
    assert str(s) == "p, q |- p"
    assert [str(p) for p in s.premises] == ["p", "q"]


def test_typecheck_and_leaves():
    sig = fc.Signature(letters=["p", "q"])
    src, tgt = fc.typecheck(fc.parse_arrow("w{p}"), sig)
    assert (str(src), str(tgt)) == ("p", "p /\\ p")
    assert fc.leaves(fc.parse_formula("p /\\ (q /\\ p)")) == [
        ("L", "p"),
        ("RL", "q"),
        ("RR", "p"),
    ]


def test_parse_errors_are_exceptions():
    with pytest.raises(fc.FreecatError):
        fc.parse_formula("p /\\")
    with pytest.raises(fc.FreecatError):
        fc.decide_equal_cartesian(fc.parse_arrow("p1{p,q}"), fc.parse_arrow("p2{q,p}"))


def test_projections_are_distinct_deductions():
    k1 = fc.parse_arrow("p1{p,p}")
    k2 = fc.parse_arrow("p2{p,p}")
    assert not fc.decide_equal_cartesian(k1, k2)
    assert fc.interpret_cartesian(k1) == {"": "L"}
    assert fc.interpret_cartesian(k2) == {"": "R"}
    assert fc.decide_equal_cartesian(fc.parse_arrow("p1{p,p} . w{p}"), fc.parse_arrow("id{p}"))


def test_finite_model_tables():
    table = fc.eval_finite_model(fc.parse_arrow("w{p}"), {"p": 2})
    assert table == [0, 3]
    k1 = fc.eval_finite_model(fc.parse_arrow("p1{p,p}"), {"p": 2})
    k2 = fc.eval_finite_model(fc.parse_arrow("p2{p,p}"), {"p": 2})
    assert k1 != k2 and k1[1] == 0 and k2[1] == 1


def test_policies_and_thinning():
    s = fc.parse_sequent("p, q |- p")
    sig = fc.Signature(letters=["p", "q"])
    sub = fc.substitute_letter(s, "q", "p", sig)
    assert str(fc.apply_policy(sub, "set")) == "p |- p"
    base = fc.parse_sequent("p |- p")
    _, invisible = fc.apply_thinning(base, fc.parse_formula("p"), "set")
    assert invisible
    _, visible = fc.apply_thinning(base, fc.parse_formula("q"), "set")
    assert not visible
    src, _ = fc.sequent_to_arrow_type(fc.parse_sequent("|- p"), "sequence")
    assert str(src) == "T"


def test_collapse_with_contraction_iso():
    cfg = fc.TheoryConfig(preset="cartesian", sig=fc.Signature(letters=["p"]),
                          assume=["iso w{p}"])
    report = fc.detect_collapse(cfg, size=7, depth=2)
    assert report["structural_preorder_at_bound"]
    assert fc.w_iso_criterion(cfg, fc.parse_formula("p"), size=7, depth=2)

    plain = fc.TheoryConfig(preset="cartesian", sig=fc.Signature(letters=["p"]))
    assert not fc.closure_equal(plain, fc.parse_arrow("p1{p,p}"), fc.parse_arrow("p2{p,p}"))
    assert fc.preorder_and_fullness(plain) == (False, False)
    assert fc.preorder_and_fullness(cfg) == (True, True)


def test_symmetric_collapse_keeps_generators():
    cfg = fc.TheoryConfig(
        preset="sym",
        sig=fc.Signature(letters=["p"], arrows=["f:p->p", "g:p->p"]),
        assume=["c{p,p} = id{p*p}"],
    )
    report = fc.detect_collapse(cfg, size=7, depth=2)
    assert report["structural_preorder_at_bound"]
    assert not report["preorder_at_bound"]
    assert report["balance_ok"]
    assert not fc.closure_equal(cfg, fc.parse_arrow("f{p->p}"), fc.parse_arrow("g{p->p}"))


def test_bundled_proofs_check():
    results = fc.check_scripts(fc.bundled_script_text())
    assert len(results) == 12
    assert all(r["accepted"] for r in results)
