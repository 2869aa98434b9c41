"""Symbolic engine: parser, bracket rules, normalization, signatures, closure."""

from fractions import Fraction

import numpy as np
import pytest

from goldmankit import symbolic as sym
from goldmankit.observables import ObservableSpec
from goldmankit.symbolic.core import CoeffAtom, Composite, Loop, Monomial, TraceAtom


# ---------------------------------------------------------------- parser ----

def test_parse_single_atom():
    e = sym.parse_expr("tr(a)")
    assert len(e.monomials) == 1
    (m,) = e.monomials
    assert m.coeff == 1 and m.traces == (TraceAtom(Loop("a")),)


def test_parse_first_observable():
    e = sym.parse_expr("sum i: tr(a; O i) * tr(b; O i)")
    (m,) = e.monomials
    assert len(m.traces) == 2
    assert m.traces[0].word == m.traces[1].word


def test_parse_composites():
    e = sym.parse_expr("tr(a.~b)")
    (m,) = e.monomials
    loop = m.traces[0].loop
    assert isinstance(loop, Composite) and loop.invert_right
    nested = sym.parse_expr("tr((a.b).c)").monomials[0].traces[0].loop
    assert str(nested) == "((a.b).c)"


def test_parse_rationals_and_sums():
    e = sym.normalize(sym.parse_expr("1/2 tr(a) + 1/2 tr(a)"))
    (m,) = e.monomials
    assert m.coeff == 1


def test_parse_multi_letter_word():
    e = sym.parse_expr("sum i j: tr(a; O i O j)")
    assert e.monomials[0].traces[0].word == (0, 1)


def test_parse_unbound_index_positioned():
    with pytest.raises(sym.ParseError, match="unbound index 'k'") as err:
        sym.parse_expr("sum i: tr(a; O i) * tr(b; O k)")
    assert "offset" in str(err.value)


def test_parse_malformed_rational():
    with pytest.raises(sym.ParseError, match="zero denominator"):
        sym.parse_expr("1/0 tr(a)")


def test_parse_trailing_garbage():
    with pytest.raises(sym.ParseError, match="trailing"):
        sym.parse_expr("tr(a) tr(b)")


# ------------------------------------------------------------- normalize ----

def test_normalize_merges_up_to_renaming():
    a = sym.parse_expr("1/2 sum i: tr(a; O i) * tr(b; O i)")
    b = sym.parse_expr("1/2 sum j: tr(b; O j) * tr(a; O j)")
    merged = sym.normalize(a + b)
    assert len(merged.monomials) == 1
    assert merged.monomials[0].coeff == 1


def test_normalize_drops_zero():
    e = sym.parse_expr("1/2 tr(a) - 1/2 tr(a)")
    assert sym.normalize(e).monomials == ()


def test_fresh_index_hygiene():
    expr = sym.bracket(
        sym.parse_expr("sum i: tr(a; O i) * tr(b; O i)"),
        sym.parse_expr("sum j: tr(c; O j) * tr(d; O j)"),
    )
    seen = set()
    for m in expr.monomials:
        ids = m.indices()
        assert not (ids & seen)
        seen |= ids


# ----------------------------------------------------------------- rules ----

def test_plain_bracket_three_terms():
    e = sym.bracket(sym.parse_expr("tr(a)"), sym.parse_expr("tr(b)"))
    assert len(e.monomials) == 3
    coeffs = sorted(m.coeff for m in e.monomials)
    assert coeffs == [Fraction(-1, 2), Fraction(1, 6), Fraction(1, 2)]
    loops = {str(m.traces[0].loop) for m in e.monomials if len(m.traces) == 1}
    assert loops == {"(a.b)", "(a.~b)"}


def test_bracket_antisymmetry_on_equal_arguments():
    x = sym.parse_expr("sum i: tr(a; O i) * tr(b; O i)")
    assert sym.bracket(x, x).monomials == ()


def test_bracket_bilinear():
    x = sym.parse_expr("tr(a)")
    y = sym.parse_expr("tr(b)")
    z = sym.parse_expr("tr(c)")
    both = sym.bracket(x + y, z)
    split = sym.normalize(sym.bracket(x, z) + sym.bracket(y, z))
    assert sym.expressions_equal(both, split)


def test_bracket_leibniz_over_products():
    # {x*y, z} = {x,z}*y + x*{y,z} for trace monomials on distinct loops
    x = sym.parse_expr("tr(a)")
    y = sym.parse_expr("tr(b)")
    z = sym.parse_expr("tr(c)")
    lhs = sym.bracket(x * y, z)
    rhs = sym.normalize(
        sym.disjoint_product(sym.bracket(x, z), y)
        + sym.disjoint_product(x, sym.bracket(y, z))
    )
    assert sym.expressions_equal(lhs, rhs)


def test_bracket_rejects_shared_base_loops():
    with pytest.raises(sym.BracketError, match="share base loops"):
        sym.bracket(sym.parse_expr("tr(a)"), sym.parse_expr("tr(a.b)"))


def test_plain_by_decorated_keeps_word_and_flips_no_sign():
    f = sym.parse_expr("sum i: tr(a; O i) * tr(b; O i)")
    e = sym.bracket(sym.parse_expr("tr(c)"), f)
    resolved = [m for m in e.monomials if len(m.traces) == 2]
    assert all(m.coeff == Fraction(1, 2) for m in resolved)
    assert len(resolved) == 4
    third = [m for m in e.monomials if len(m.traces) == 3]
    assert all(m.coeff == Fraction(1, 6) for m in third)
    for m in third:
        words = sorted(len(t.word) for t in m.traces)
        assert words == [1, 1, 2]
        assert len(m.coeffs) == 1


def test_extended_rule_flagged():
    lhs = sym.parse_expr("sum i j: tr(a; O i O j)")
    rhs = sym.parse_expr("sum k l: tr(b; O k O l)")
    e = sym.bracket(lhs, rhs)
    flags = sorted(m.extended for m in e.monomials)
    assert flags == [False, True, True]


# ------------------------------------------------------------ signatures ----

def test_signature_of_plain_bracket_third_term():
    e = sym.bracket(sym.parse_expr("tr(a)"), sym.parse_expr("tr(b)"))
    third = next(m for m in e.monomials if len(m.traces) == 2)
    sig = sym.recognize(third)
    assert sig.valid
    f = sig.fspec
    assert (f.r, f.n1, f.s, f.n2, f.t) == (1, 1, 0, 0, 1)
    assert f.K == ((1,),)


def test_signature_canonical_terms():
    e = sym.bracket(sym.parse_expr("tr(a)"), sym.parse_expr("tr(b)"))
    for m in e.monomials:
        if len(m.traces) == 1:
            sig = sym.recognize(m)
            assert sig.valid and sig.fspec is None
            assert sig.canonical_loops in (["(a.b)"], ["(a.~b)"])


def test_signature_worked_example_third_type():
    expr = sym.worked_example_bracket()
    quads = [m for m in expr.monomials if len(m.traces) == 4]
    assert len(quads) == 4
    for m in quads:
        sig = sym.recognize(m)
        assert sig.valid
        f = sig.fspec
        assert (f.r, f.n1, f.s, f.n2, f.t) == (2, 2, 0, 1, 2)
        assert f.K == ((1, 0), (0, 1))
        assert f.Q == ((1, 0), (0, 1))


def test_signature_first_summand_bookkeeping_reachable():
    spec = ObservableSpec.make(1, 1, 0, 0, 1, [[1]], [])
    f = sym.build_f_expression(spec, ["g1", "g2"])
    e = sym.bracket(sym.parse_expr("tr(c)"), f)
    thirds = [m for m in e.monomials if len(m.traces) == 3]
    assert len(thirds) == 2
    for m in thirds:
        sig = sym.recognize(m)
        assert sig.valid
        # the bookkeeping a bracket derivation produces for this term,
        # (r-1, n1, s+1, n2+1, t+1), is among the legal parameterizations
        assert (0, 1, 1, 1, 2) in sig.alternatives


def test_signature_rejects_dangling_index():
    dangling = Monomial(
        Fraction(1),
        (TraceAtom(Loop("a"), (0,)), TraceAtom(Loop("b"), (1,))),
        (),
    )
    sig = sym.recognize(dangling)
    assert not sig.valid
    assert "occurs 1 time" in sig.reason


def test_signature_rejects_coeff_only():
    m = Monomial(Fraction(1), (TraceAtom(Loop("a")),), (CoeffAtom("x", 0, 1),))
    assert not sym.recognize(m).valid


# ---------------------------------------------------------------- closure ----

def test_closure_plain_bracket():
    e = sym.bracket(sym.parse_expr("tr(a)"), sym.parse_expr("tr(b)"))
    result = sym.closure_check(e, seed=2)
    assert result.report.passed
    assert len(result.signatures) == 3
    assert all(s.valid for s in result.signatures)


def test_closure_fails_on_dangling_monomial():
    bad = sym.Expression((Monomial(
        Fraction(1), (TraceAtom(Loop("a"), (0,)), TraceAtom(Loop("b"), (1,))), ()
    ),))
    result = sym.closure_check(bad, seed=0)
    assert not result.report.passed
    assert result.failures and "unrecognized" in result.failures[0][1]


def test_closure_canonical_times_first_observable():
    spec = ObservableSpec.make(1, 1, 0, 0, 1, [[1]], [])
    f = sym.build_f_expression(spec, ["g1", "g2"])
    e = sym.bracket(sym.parse_expr("tr(c)"), f)
    result = sym.closure_check(e, seed=5)
    assert result.report.passed
    assert result.report.max_rel_err < 1e-7


def test_symbolic_bracket_matches_numeric_identity():
    # evaluate {tr a, tr b} symbolically, then instantiate: the total must
    # match the closed-form right side computed directly from the matrices
    e = sym.bracket(sym.parse_expr("tr(a)"), sym.parse_expr("tr(b)"))
    env = sym.instantiate(e, seed=8)
    total = sym.evaluate_expression(e, env)
    ma = env[("loop", "a")]
    mb = env[("loop", "b")]
    from goldmankit.octonions import unit_matrices

    o = unit_matrices()
    rhs = 0.5 * (
        np.trace(ma @ mb) - np.trace(ma @ np.linalg.inv(mb))
        + sum(np.trace(ma @ o[i]) * np.trace(mb @ o[i]) for i in range(7)) / 3.0
    )
    assert abs(total - rhs) < 1e-10


def test_worked_example_reproduction():
    diff = sym.reproduce_examples()
    assert diff.passed
    assert diff.term_count == 12
    assert diff.coeff_multiset == {"1/6": 4, "1/2": 8}


def test_build_f_expression_roundtrip():
    for spec in (
        ObservableSpec.make(1, 1, 0, 0, 1, [[1]], []),
        ObservableSpec.make(1, 2, 0, 0, 1, [[1, 1]], []),
        ObservableSpec.make(2, 2, 0, 1, 2, [[1, 0], [0, 1]], [[1, 0], [0, 1]]),
    ):
        f = sym.build_f_expression(spec)
        (m,) = f.monomials
        sig = sym.recognize(m)
        assert sig.valid
        tup = (sig.fspec.r, sig.fspec.n1, sig.fspec.s, sig.fspec.n2, sig.fspec.t)
        assert tup == (spec.r, spec.n1, spec.s, spec.n2, spec.t)


def test_expression_json():
    e = sym.bracket(sym.parse_expr("tr(a)"), sym.parse_expr("tr(b)"))
    sigs = [sym.recognize(m).as_dict() for m in e.monomials]
    text = sym.to_json(e, sigs)
    assert '"coeff"' in text and '"signature"' in text


def test_normalize_and_recognize_pairs_signatures():
    raw = sym.parse_expr("1/2 tr(a) + 1/2 tr(a) + sum i: tr(b; O i) * tr(c; O i)")
    normalized, sigs = sym.normalize_and_recognize(raw)
    assert len(normalized.monomials) == len(sigs) == 2
    kinds = sorted(
        "canonical" if s.fspec is None else "exotic" for s in sigs
    )
    assert kinds == ["canonical", "exotic"]
    assert all(s.valid for s in sigs)
