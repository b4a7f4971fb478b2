import random

import pytest
from hypothesis import given, settings, strategies as st

from jelogic.generate import (
    axp,
    axbot,
    impr,
    orr,
    random_sequent_theorem,
    re,
    rm,
    wl,
    wr,
)
from jelogic.sequent import (
    Proof,
    Sequent,
    SequentProofError,
    check_sequent_proof,
    compute_families,
    parse_sequent_line,
    premises_of,
    prove_bounded,
)
from jelogic.syntax import And, Atom, BOT, Box, ProofVar, ProofOf

A, B, C = Atom("A"), Atom("B"), Atom("C")


def _count(p: Proof, rule: str) -> int:
    return (p.rule == rule) + sum(_count(c, rule) for c in p.children)


def _weakening_proof() -> Proof:
    """A hand proof of => []A -> ([]B -> []A) with a single congruence step."""
    leaf = axp("A")
    ren = re(leaf, leaf)            # []A => []A
    w = wl(ren, Box(B), 0)          # []B, []A => []A
    return impr(impr(w, 0), 0)      # => []A -> ([]B -> []A)


def _nested_boxes_proof() -> Proof:
    """A hand proof of [][]A => [][]A with one outer and two inner steps."""
    leaf = axp("A")
    inner = re(leaf, leaf)          # []A => []A
    return re(inner, inner)         # [][]A => [][]A


class TestCheck:
    def test_atomic_axiom(self):
        assert check_sequent_proof(axp("A"), "GE") == Sequent((A,), (A,))
        assert check_sequent_proof(axp("A"), "GM") == Sequent((A,), (A,))

    def test_falsum_axiom(self):
        assert check_sequent_proof(axbot(), "GE") == Sequent((BOT,), ())

    def test_atomic_axiom_requires_atom(self):
        bogus = Proof(Sequent((And(A, B),), (And(A, B),)), "AxP", (("L", 0), ("R", 0)), ())
        with pytest.raises(SequentProofError) as e:
            check_sequent_proof(bogus, "GE")
        assert e.value.kind == "bad-rule"

    def test_congruence_rule_belongs_to_ge(self):
        p = re(axp("A"), axp("A"))
        assert check_sequent_proof(p, "GE") == Sequent((Box(A),), (Box(A),))
        with pytest.raises(SequentProofError) as e:
            check_sequent_proof(p, "GM")
        assert e.value.kind == "wrong-calculus"

    def test_monotonicity_rule_belongs_to_gm(self):
        p = rm(axp("A"))
        assert check_sequent_proof(p, "GM") == Sequent((Box(A),), (Box(A),))
        with pytest.raises(SequentProofError) as e:
            check_sequent_proof(p, "GE")
        assert e.value.kind == "wrong-calculus"

    def test_unknown_calculus(self):
        with pytest.raises(SequentProofError):
            check_sequent_proof(axp("A"), "S4")

    def test_premise_mismatch(self):
        bogus = Proof(Sequent((B, A), (A,)), "WL", (("L", 0),), (axp("B"),))
        with pytest.raises(SequentProofError) as e:
            check_sequent_proof(bogus, "GE")
        assert e.value.kind == "premise-mismatch"

    def test_modal_dialect_enforced(self):
        alien = ProofOf(ProofVar(0), A)
        bogus = Proof(Sequent((alien,), (alien,)), "AxP", (("L", 0), ("R", 0)), ())
        with pytest.raises(Exception):
            check_sequent_proof(bogus, "GE")

    def test_weakening_proof_checks(self):
        root = check_sequent_proof(_weakening_proof(), "GE")
        assert root == parse_sequent_line("=> []A -> ([]B -> []A)")

    def test_modal_rules_need_boxed_singletons(self):
        with pytest.raises(SequentProofError):
            premises_of("RE", (("L", 0), ("R", 0)), Sequent((A,), (Box(A),)))


class TestSearch:
    def test_boxed_weakening_theorem(self):
        s = parse_sequent_line("=> []A -> ([]B -> []A)")
        p = prove_bounded(s, "GE", 8)
        assert p is not None and p.sequent == s
        check_sequent_proof(p, "GE")
        assert _count(p, "RE") == 1

    def test_boxed_disjunction_in_gm(self):
        s = parse_sequent_line("[]A | []B => [](A | B)")
        p = prove_bounded(s, "GM", 8)
        assert p is not None and p.sequent == s
        check_sequent_proof(p, "GM")
        assert _count(p, "RM") == 2

    def test_monotonicity_escapes_congruence_search(self):
        s = parse_sequent_line("=> []A -> [](A | B)")
        assert prove_bounded(s, "GE", 12) is None

    def test_projection_escapes_congruence_search(self):
        s = parse_sequent_line("=> [](A & B) -> []A")
        assert prove_bounded(s, "GE", 10) is None
        p = prove_bounded(s, "GM", 10)
        assert p is not None
        check_sequent_proof(p, "GM")

    def test_congruence_theorem(self):
        s = parse_sequent_line("=> [](A & B) -> [](B & A)")
        p = prove_bounded(s, "GE", 10)
        assert p is not None
        check_sequent_proof(p, "GE")
        assert _count(p, "RE") == 1

    def test_strengthening_escapes_monotone_search(self):
        s = parse_sequent_line("=> [](A | B) -> []A")
        assert prove_bounded(s, "GM", 10) is None

    def test_depth_must_be_positive(self):
        with pytest.raises(ValueError):
            prove_bounded(parse_sequent_line("=> A"), "GE", 0)

    def test_unknown_calculus(self):
        with pytest.raises(SequentProofError):
            prove_bounded(parse_sequent_line("A => A"), "K", 5)


class TestFamilies:
    def test_weakening_proof_families(self):
        fa = compute_families(_weakening_proof())
        assert fa.modal_rule == "RE"
        assert len(fa.families) == 3
        assert sorted(f.essential for f in fa.families) == [False, True, True]
        spare = next(f for f in fa.families if not f.essential)
        assert spare.polarity == "negative" and spare.instances == ()
        assert len(fa.classes) == 1
        cls = fa.classes[0]
        assert len(cls.families) == 2 and len(cls.instances) == 1

    def test_nested_boxes_two_classes(self):
        fa = compute_families(_nested_boxes_proof())
        assert fa.modal_rule == "RE"
        assert len(fa.families) == 4
        assert all(f.essential for f in fa.families)
        assert sorted(len(c.instances) for c in fa.classes) == [1, 2]

    def test_propositional_proof_has_no_families(self):
        fa = compute_families(axp("A"))
        assert fa.families == () and fa.classes == () and fa.modal_rule is None

    def test_monotone_proof_polarities(self):
        leaf = axp("A")                     # A => A
        widened = orr(wr(leaf, B, 1), 0)    # A => A | B
        fa = compute_families(rm(widened))  # []A => [](A | B)
        assert fa.modal_rule == "RM"
        assert fa.classes == ()
        essentials = [f for f in fa.families if f.essential]
        assert len(essentials) == 1 and essentials[0].polarity == "positive"
        assert {f.polarity for f in fa.families} == {"positive", "negative"}

    def test_mixed_modal_rules_rejected(self):
        mixed = re(rm(axp("A")), rm(axp("A")))
        with pytest.raises(SequentProofError) as e:
            compute_families(mixed)
        assert e.value.kind == "wrong-calculus"
        for calculus in ("GE", "GM"):
            with pytest.raises(SequentProofError):
                check_sequent_proof(mixed, calculus)


@given(st.integers(0, 10**9), st.sampled_from(["GE", "GM"]))
@settings(max_examples=100, deadline=None)
def test_forward_generated_proofs_check_and_analyze(seed, calculus):
    p = random_sequent_theorem(random.Random(seed), calculus, depth=5)
    check_sequent_proof(p, calculus)
    fa = compute_families(p)

    # Families partition the box occurrences of the whole proof.
    all_tokens = set(fa.family_of)
    assert set().union(*(f.tokens for f in fa.families)) == all_tokens if fa.families else not all_tokens
    assert sum(len(f.tokens) for f in fa.families) == len(all_tokens)

    for f in fa.families:
        assert f.essential == bool(f.instances)
        if fa.modal_rule == "RM":
            assert f.polarity in ("positive", "negative")

    if fa.modal_rule == "RE":
        covered = [i for c in fa.classes for i in c.families]
        assert sorted(covered) == [i for i, f in enumerate(fa.families) if f.essential]


@given(st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_congruence_theorems_are_monotone_theorems(seed):
    from jelogic.generate import random_formula
    from jelogic.syntax import Dialect

    f = random_formula(random.Random(seed), Dialect.MODAL, depth=3)
    s = Sequent((), (f,))
    p = prove_bounded(s, "GE", 6)
    if p is not None:
        check_sequent_proof(p, "GE")
        q = prove_bounded(s, "GM", 7)
        assert q is not None
        check_sequent_proof(q, "GM")
