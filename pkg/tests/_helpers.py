"""Shared test utilities: proof search shortcuts and shape matching with
named holes for internalized witness terms."""

from __future__ import annotations

from jelogic import (
    Dialect,
    Sequent,
    cs_total,
    parse_formula,
    parse_sequent_line,
    prove_bounded,
    realize,
)
from jelogic.syntax import (
    Apply,
    And,
    Atom,
    Bang,
    Bottom,
    Box,
    Evidence,
    Formula,
    Implies,
    JustOf,
    JustSum,
    JustVar,
    MApply,
    Not,
    Or,
    ProofConst,
    ProofOf,
    ProofVar,
    Sum,
    Term,
)

CS_JE = cs_total(Dialect.JE)
CS_JEM = cs_total(Dialect.JEM)


def proof_of(text: str, calculus: str, depth: int = 10):
    if "=>" in text:
        s = parse_sequent_line(text)
    else:
        s = Sequent((), (parse_formula(text, Dialect.MODAL),))
    p = prove_bounded(s, calculus, depth)
    assert p is not None, f"no {calculus} proof of {text}"
    return p


def realize_text(text: str, calculus: str, depth: int = 10):
    cs = CS_JE if calculus == "GE" else CS_JEM
    return realize(proof_of(text, calculus, depth), calculus, cs)


def _is_hole(t) -> bool:
    return isinstance(t, ProofConst) and t.name.startswith("c_H")


def _ground_proof_term(t: Term) -> bool:
    match t:
        case ProofConst():
            return True
        case Apply(l, r) | Sum(l, r):
            return _ground_proof_term(l) and _ground_proof_term(r)
        case Bang(inner):
            return _ground_proof_term(inner)
    return False


def holes_match(pattern: Formula, actual: Formula) -> dict:
    """Structural match where proof constants named ``c_H*`` in the pattern
    are holes binding ground proof terms (same hole, same term) and pattern
    justification variables map bijectively onto actual ones.  Returns the
    hole environment, or raises AssertionError with the mismatch."""
    env: dict[str, Term] = {}
    jmap: dict[int, int] = {}
    jused: set[int] = set()

    def terms(p, a) -> bool:
        if _is_hole(p):
            if not _ground_proof_term(a):
                return False
            if p.name in env:
                return env[p.name] == a
            env[p.name] = a
            return True
        match (p, a):
            case (ProofConst(n1), ProofConst(n2)):
                return n1 == n2
            case (ProofVar(i), ProofVar(j)):
                return i == j
            case (JustVar(i), JustVar(j)):
                if i in jmap:
                    return jmap[i] == j
                if j in jused:
                    return False
                jmap[i] = j
                jused.add(j)
                return True
            case (Apply(l1, r1), Apply(l2, r2)) | (Sum(l1, r1), Sum(l2, r2)) | (
                JustSum(l1, r1),
                JustSum(l2, r2),
            ):
                return terms(l1, l2) and terms(r1, r2)
            case (Bang(i1), Bang(i2)):
                return terms(i1, i2)
            case (Evidence(p1), Evidence(p2)):
                return terms(p1, p2)
            case (MApply(p1, j1), MApply(p2, j2)):
                return terms(p1, p2) and terms(j1, j2)
        return False

    def formulas(p, a) -> bool:
        match (p, a):
            case (Atom(n1), Atom(n2)):
                return n1 == n2
            case (Bottom(), Bottom()):
                return True
            case (Implies(l1, r1), Implies(l2, r2)) | (And(l1, r1), And(l2, r2)) | (
                Or(l1, r1),
                Or(l2, r2),
            ):
                return formulas(l1, l2) and formulas(r1, r2)
            case (Not(i1), Not(i2)):
                return formulas(i1, i2)
            case (Box(b1), Box(b2)):
                return formulas(b1, b2)
            case (ProofOf(t1, b1), ProofOf(t2, b2)) | (JustOf(t1, b1), JustOf(t2, b2)):
                return terms(t1, t2) and formulas(b1, b2)
        return False

    assert formulas(pattern, actual), (
        f"shape mismatch:\n  pattern: {pattern!r}\n  actual:  {actual!r}"
    )
    return env
