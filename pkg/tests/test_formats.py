import random

import pytest

from jelogic.axioms import ConstantSpecification, cs_total
from jelogic.formats import (
    FormatError,
    parse_cs,
    parse_derivation,
    parse_model,
    parse_sequent_proof,
    write_cs,
    write_derivation,
    write_model,
    write_sequent_proof,
)
from jelogic.generate import random_sequent_theorem, random_theorem
from jelogic.hilbert import prove_id
from jelogic.semantics import FiniteBasicEvaluation, QuasiModel, saturate
from jelogic.sequent import check_sequent_proof
from jelogic.syntax import (
    Atom,
    Dialect,
    Evidence,
    JustOf,
    JustVar,
    MApply,
    ProofVar,
    parse_formula,
)

from _helpers import proof_of

A, B = Atom("A"), Atom("B")


class TestDerivationFormat:
    def test_roundtrip(self):
        d = prove_id(Dialect.JE, parse_formula("[e(p0)]A", Dialect.JE))
        text = write_derivation(d)
        assert parse_derivation(text) == d
        assert write_derivation(parse_derivation(text)) == text

    def test_random_roundtrips(self):
        for seed in range(25):
            dialect = Dialect.JE if seed % 2 else Dialect.JEM
            d = random_theorem(random.Random(seed), dialect, steps=6)
            assert parse_derivation(write_derivation(d)) == d

    def test_bad_header(self):
        with pytest.raises(FormatError):
            parse_derivation("# something else\ndialect JE\nconclusion 0\n")

    def test_missing_dialect(self):
        with pytest.raises(FormatError):
            parse_derivation("# jelogic derivation v1\n0 hyp A\nconclusion 0\n")

    def test_unknown_scheme(self):
        text = "# jelogic derivation v1\ndialect JE\n0 axiom zz A -> A\nconclusion 0\n"
        with pytest.raises(FormatError):
            parse_derivation(text)

    def test_axiom_line_must_be_instance(self):
        text = "# jelogic derivation v1\ndialect JE\n0 axiom pl_k A -> A\nconclusion 0\n"
        with pytest.raises(FormatError):
            parse_derivation(text)

    def test_steps_must_be_numbered_in_order(self):
        text = "# jelogic derivation v1\ndialect JE\n1 hyp A\nconclusion 0\n"
        with pytest.raises(FormatError):
            parse_derivation(text)

    def test_no_steps_after_conclusion(self):
        text = "# jelogic derivation v1\ndialect JE\n0 hyp A\nconclusion 0\n1 hyp B\n"
        with pytest.raises(FormatError):
            parse_derivation(text)

    def test_conclusion_required(self):
        with pytest.raises(FormatError):
            parse_derivation("# jelogic derivation v1\ndialect JE\n0 hyp A\n")


class TestCsFormat:
    def test_roundtrip_total(self):
        for dialect in (Dialect.JE, Dialect.JEM):
            cs = cs_total(dialect)
            text = write_cs(cs)
            assert parse_cs(text) == cs
            assert write_cs(parse_cs(text)) == text

    def test_roundtrip_partial(self):
        cs = ConstantSpecification(Dialect.JE, {"c0": frozenset({"jt", "j4"})})
        assert parse_cs(write_cs(cs)) == cs

    def test_duplicate_constant(self):
        text = "# jelogic cs v1\ndialect JE\nc0: jt\nc0: j4\n"
        with pytest.raises(FormatError):
            parse_cs(text)

    def test_unknown_scheme(self):
        with pytest.raises(FormatError):
            parse_cs("# jelogic cs v1\ndialect JE\nc0: zz\n")

    def test_scheme_must_fit_dialect(self):
        with pytest.raises(FormatError):
            parse_cs("# jelogic cs v1\ndialect JE\nc0: jm\n")

    def test_malformed_line(self):
        with pytest.raises(FormatError):
            parse_cs("# jelogic cs v1\ndialect JE\nc0 jt\n")


class TestSequentProofFormat:
    def test_roundtrip(self):
        p = proof_of("[]A -> ([]B -> []A)", "GE")
        text = write_sequent_proof(p, "GE")
        back, calculus = parse_sequent_proof(text)
        assert back == p and calculus == "GE"
        assert write_sequent_proof(back, calculus) == text
        check_sequent_proof(back, calculus)

    def test_random_roundtrips(self):
        for seed in range(25):
            calculus = "GE" if seed % 2 else "GM"
            p = random_sequent_theorem(random.Random(seed), calculus, depth=4)
            back, got = parse_sequent_proof(write_sequent_proof(p, calculus))
            assert back == p and got == calculus

    def test_unknown_calculus(self):
        with pytest.raises(FormatError):
            parse_sequent_proof("# jelogic sequent-proof v1\ncalculus GK\nAxP L0 R0 | A => A\n")

    def test_odd_indentation(self):
        text = "# jelogic sequent-proof v1\ncalculus GE\nWL L0 | A, B => A\n AxP L0 R0 | A => A\n"
        with pytest.raises(FormatError):
            parse_sequent_proof(text)

    def test_indentation_jump(self):
        text = (
            "# jelogic sequent-proof v1\ncalculus GE\n"
            "WL L0 | B, A => A\n    AxP L0 R0 | A => A\n"
        )
        with pytest.raises(FormatError):
            parse_sequent_proof(text)

    def test_missing_separator(self):
        with pytest.raises(FormatError):
            parse_sequent_proof("# jelogic sequent-proof v1\ncalculus GE\nAxP L0 R0 A => A\n")

    def test_multiple_roots(self):
        text = "# jelogic sequent-proof v1\ncalculus GE\nAxP L0 R0 | A => A\nAxP L0 R0 | B => B\n"
        with pytest.raises(FormatError):
            parse_sequent_proof(text)

    def test_empty_proof(self):
        with pytest.raises(FormatError):
            parse_sequent_proof("# jelogic sequent-proof v1\ncalculus GE\n")


def _sample_model() -> QuasiModel:
    u = saturate(FiniteBasicEvaluation(
        Dialect.JE, {"A": True},
        {ProofVar(0): frozenset({A}), Evidence(ProofVar(0)): frozenset({A})},
    ))
    v = FiniteBasicEvaluation(Dialect.JE, {"A": False, "B": True}, {})
    return QuasiModel(
        worlds=("u", "v"),
        neighborhoods={"u": frozenset({frozenset({"u"})}), "v": frozenset()},
        evaluations={"u": u, "v": v},
    )


class TestModelFormat:
    def test_roundtrip(self):
        m = _sample_model()
        text = write_model(m)
        back = parse_model(text)
        assert back.worlds == m.worlds
        assert back.neighborhoods == m.neighborhoods
        assert back.evaluations == m.evaluations
        assert write_model(back) == text

    def test_empty_neighborhood_set_roundtrips(self):
        m = _sample_model()
        m.neighborhoods["v"] = frozenset({frozenset()})
        back = parse_model(write_model(m))
        assert back.neighborhoods["v"] == frozenset({frozenset()})

    def test_no_trailing_whitespace(self):
        for line in write_model(_sample_model()).splitlines():
            assert line == line.rstrip()

    def test_entry_formulas_with_nested_commas_roundtrip(self):
        stored = frozenset({JustOf(MApply(ProofVar(0), JustVar(0)), A), Atom("B")})
        eps = FiniteBasicEvaluation(Dialect.JEM, {"A": True}, {JustVar(0): stored})
        m = QuasiModel(("u",), {"u": frozenset()}, {"u": eps})
        back = parse_model(write_model(m))
        assert back.evaluations["u"].table[JustVar(0)] == stored

    def test_unknown_world_in_entry(self):
        text = (
            "# jelogic model v1\ndialect JE\nbound 3\nworlds u\n"
            "neighborhood u :\natom w A true\n"
        )
        with pytest.raises(FormatError):
            parse_model(text)

    def test_malformed_world_set(self):
        text = (
            "# jelogic model v1\ndialect JE\nbound 3\nworlds u\n"
            "neighborhood u : u\n"
        )
        with pytest.raises(FormatError):
            parse_model(text)

    def test_bad_atom_value(self):
        text = (
            "# jelogic model v1\ndialect JE\nbound 3\nworlds u\n"
            "atom u A yes\n"
        )
        with pytest.raises(FormatError):
            parse_model(text)

    def test_duplicate_worlds(self):
        text = "# jelogic model v1\ndialect JE\nbound 3\nworlds u u\n"
        with pytest.raises(FormatError):
            parse_model(text)

    def test_write_rejects_mixed_dialects(self):
        m = _sample_model()
        m.evaluations["v"] = FiniteBasicEvaluation(Dialect.JEM, {}, {})
        with pytest.raises(FormatError):
            write_model(m)
