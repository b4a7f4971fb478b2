"""Constructive realization: sequent proofs into justified Hilbert derivations.

A checked modal sequent proof is walked bottom-up.  Box occurrences were
grouped into families beforehand; every family gets a candidate term, and each
node of the proof receives a Hilbert derivation of its realized reading --
the realized antecedent formulas as hypotheses, deriving the right-nested
disjunction of the realized succedent formulas.

Families never introduced by a modal rule are realized by fresh variables.
Families introduced by a modal rule start out as sums of provisional
variables, one summand per introducing rule instance.  When the walk reaches
such an instance it internalizes the derivations built for the premises,
resolves that instance's provisional summand to the resulting ground terms,
and pushes the substitution through every derivation, candidate, and log
entry produced so far; the assembled justified implication is then weakened
into the full sum.  After the root is processed no provisional variables
remain and the root derivation witnesses the realized sequent outright.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .axioms import ConstantSpecification, check_axiomatically_appropriate
from .hilbert import (
    Builder,
    Derivation,
    DerivationError,
    NotAppropriate,
    check_derivation,
    compose,
    by_contradiction,
    deduction_transform,
    efq_to,
    internalize,
    prove_id,
    prune,
    step_formulas,
    substitute_derivation,
)
from .sequent import (
    FamilyAnalysis,
    Proof,
    SequentProofError,
    check_sequent_proof,
    compute_families,
)
from .syntax import (
    And,
    BOT,
    Box,
    Dialect,
    DialectError,
    Evidence,
    Formula,
    Implies,
    JustOf,
    JustSum,
    JustVar,
    MApply,
    Not,
    Or,
    ProofOf,
    ProofVar,
    Substitution,
    Sum,
    Term,
    apply_substitution,
    apply_to_term,
    forgetful,
    polarity_at,
    print_formula,
    subformula_at,
    subterms,
    terms_in,
)

PROVISIONAL_BASE = 10**6


class UncheckedProof(Exception):
    """Realization was handed a sequent proof that does not check."""


class VerificationError(Exception):
    pass


class RoundtripMismatch(VerificationError):
    pass


class DerivationFails(VerificationError):
    pass


class ProvisionalLeak(VerificationError):
    pass


class NotNormal(VerificationError):
    pass


@dataclass(frozen=True)
class LogEntry:
    """One internalization performed along the way: ``derivation`` concludes
    ``term : formula`` from no hypotheses."""

    term: Term
    formula: Formula
    derivation: Derivation


@dataclass(frozen=True)
class RealizationResult:
    calculus: str
    dialect: Dialect
    antecedent: tuple[Formula, ...]
    succedent: tuple[Formula, ...]
    derivation: Derivation
    log: tuple[LogEntry, ...]
    mode: str
    source: Proof = field(repr=False)
    cs: ConstantSpecification = field(repr=False)

    @property
    def realized(self) -> Formula:
        """The realized sequent as one formula: antecedents curried onto the
        disjunction of the succedents."""
        out = _disj(self.succedent)
        for f in reversed(self.antecedent):
            out = Implies(f, out)
        return out


# ---------------------------------------------------------------------------
# Disjunction plumbing


def _disj(fs) -> Formula:
    fs = tuple(fs)
    if not fs:
        return BOT
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


def _inject(dialect: Dialect, fs: tuple, j: int) -> Derivation:
    """``|- fs[j] -> d(fs)`` for the right-nested disjunction d."""
    if len(fs) == 1:
        return prove_id(dialect, fs[0])
    rest = _disj(fs[1:])
    if j == 0:
        b = Builder(dialect)
        return b.derivation(b.axiom("pl_or_intro_l", {"F": fs[0], "G": rest}))
    inner = _inject(dialect, fs[1:], j - 1)
    b = Builder(dialect)
    step = b.derivation(b.axiom("pl_or_intro_r", {"F": fs[0], "G": rest}))
    return compose(inner, step)


def _fold(dialect: Dialect, fs: tuple, arrows: list[Derivation], target: Formula) -> Derivation:
    """From ``|- fs[j] -> target`` for each j, ``|- d(fs) -> target``."""
    if not fs:
        return efq_to(dialect, target)
    if len(fs) == 1:
        return arrows[0]
    tail = _fold(dialect, fs[1:], arrows[1:], target)
    b = Builder(dialect)
    oe = b.axiom("pl_or_elim", {"F": fs[0], "G": _disj(fs[1:]), "H": target})
    out = b.mp(b.mp(oe, b.embed(arrows[0])), b.embed(tail))
    return b.derivation(out)


def _remap_disj(d: Derivation, src: tuple, dst: tuple, mapping) -> Derivation:
    """From a derivation of d(src), one of d(dst), sending src[j] to
    dst[mapping[j]]."""
    if src == dst:
        return d
    dialect = d.dialect
    target = _disj(dst)
    b = Builder(dialect)
    i = b.embed(d)
    if not src:
        return b.derivation(b.mp(b.embed(efq_to(dialect, target)), i))
    arrows = [_inject(dialect, dst, mapping[j]) for j in range(len(src))]
    fold = _fold(dialect, src, arrows, target)
    return b.derivation(b.mp(b.embed(fold), i))


# ---------------------------------------------------------------------------
# Small classical lemmas


def _neg_arrow(dialect: Dialect, g: Formula) -> Derivation:
    """``~g |- g -> _|_``."""
    b = Builder(dialect)
    h = b.hyp(Not(g))
    return b.derivation(b.mp(b.axiom("pl_neg_elim", {"F": g}), h))


def _contrapose(d: Derivation) -> Derivation:
    """From ``|- X -> Y`` (hypotheses carried) build ``|- ~Y -> ~X``."""
    f = step_formulas(d)[d.conclusion]
    if not isinstance(f, Implies):
        raise ValueError("contraposition expects an implication")
    x, y = f.left, f.right
    b = Builder(d.dialect)
    hny = b.hyp(Not(y))
    hx = b.hyp(x)
    yy = b.mp(b.embed(d), hx)
    bot = b.mp(b.mp(b.axiom("pl_neg_elim", {"F": y}), hny), yy)
    d2 = deduction_transform(b.derivation(bot), x)
    b2 = Builder(d.dialect)
    nx = b2.mp(b2.axiom("pl_neg_intro", {"F": x}), b2.embed(d2))
    return deduction_transform(b2.derivation(nx), Not(y))


def _neg_imp_gives_left(dialect: Dialect, a: Formula, bb: Formula) -> Derivation:
    """``|- ~(a -> bb) -> a``."""
    neg = Not(Implies(a, bb))
    b = Builder(dialect)
    hna = b.hyp(Not(a))
    ha = b.hyp(a)
    bot = b.mp(b.mp(b.axiom("pl_neg_elim", {"F": a}), hna), ha)
    bidx = b.mp(b.embed(efq_to(dialect, bb)), bot)
    d_ab = deduction_transform(b.derivation(bidx), a)
    b2 = Builder(dialect)
    hni = b2.hyp(neg)
    iab = b2.embed(d_ab)
    bot2 = b2.mp(b2.mp(b2.axiom("pl_neg_elim", {"F": Implies(a, bb)}), hni), iab)
    da = by_contradiction(b2.derivation(bot2), a)
    return deduction_transform(da, neg)


def _neg_imp_gives_negright(dialect: Dialect, a: Formula, bb: Formula) -> Derivation:
    """``|- ~(a -> bb) -> ~bb``."""
    neg = Not(Implies(a, bb))
    b = Builder(dialect)
    hb = b.hyp(bb)
    iab = b.mp(b.axiom("pl_k", {"F": bb, "G": a}), hb)
    hni = b.hyp(neg)
    bot = b.mp(b.mp(b.axiom("pl_neg_elim", {"F": Implies(a, bb)}), hni), iab)
    d = deduction_transform(b.derivation(bot), bb)
    b2 = Builder(dialect)
    nb = b2.mp(b2.axiom("pl_neg_intro", {"F": bb}), b2.embed(d))
    return deduction_transform(b2.derivation(nb), neg)


# ---------------------------------------------------------------------------
# Sum lifting


def _sum_path(u: Term, target: Term, node):
    """Leftmost path to ``target`` descending only through ``node`` sums."""
    if u == target:
        return ()
    if isinstance(u, node):
        left = _sum_path(u.left, target, node)
        if left is not None:
            return (0,) + left
        right = _sum_path(u.right, target, node)
        if right is not None:
            return (1,) + right
    return None


def _term_at(u: Term, path) -> Term:
    for step in path:
        u = u.left if step == 0 else u.right
    return u


def _lift_sum(d: Derivation, u: Term, path, node, wrap, plus_scheme: str, keys) -> Derivation:
    """Weaken ``|- w:F`` (w at ``path`` inside the sum tree ``u``) to ``|- u:F``."""
    f = step_formulas(d)[d.conclusion].body
    while path:
        parent = _term_at(u, path[:-1])
        pf, pg = wrap(parent.left, f), wrap(parent.right, f)
        b = Builder(d.dialect)
        i = b.embed(d)
        if path[-1] == 0:
            oi = b.axiom("pl_or_intro_l", {"F": pf, "G": pg})
        else:
            oi = b.axiom("pl_or_intro_r", {"F": pf, "G": pg})
        jp = b.axiom(plus_scheme, {keys[0]: parent.left, keys[1]: parent.right, "F": f})
        d = b.derivation(b.mp(jp, b.mp(oi, i)))
        path = path[:-1]
    return d


def _lift_proof_sum(d: Derivation, u: Term, path) -> Derivation:
    return _lift_sum(d, u, path, Sum, ProofOf, "jplus1", ("L", "K"))


def _lift_just_sum(d: Derivation, u: Term, path) -> Derivation:
    return _lift_sum(d, u, path, JustSum, JustOf, "jplus2", ("T", "S"))


# ---------------------------------------------------------------------------
# The realization engine


def _has_provisional(t: Term) -> bool:
    return any(
        isinstance(s, (ProofVar, JustVar)) and s.index >= PROVISIONAL_BASE for s in subterms(t)
    )


class _Engine:
    def __init__(self, proof: Proof, calculus: str, cs: ConstantSpecification, mode: str):
        self.calculus = calculus
        self.dialect = Dialect.JE if calculus == "GE" else Dialect.JEM
        self.cs = cs
        self.mode = mode
        self.analysis: FamilyAnalysis = compute_families(proof)
        self.index = self.analysis.index
        self.cands: dict[int, Term] = {}
        self.prov_of: dict[int, Term] = {}
        self.derivs: dict[int, Derivation] = {}
        self.log: list[LogEntry] = []
        self._assign_candidates()

    # -- candidate terms -------------------------------------------------

    def _assign_candidates(self):
        counter = 0
        fresh = 0
        analysis = self.analysis
        if self.calculus == "GE":
            for cls in analysis.classes:
                provs = []
                for nid in cls.instances:
                    v = ProofVar(PROVISIONAL_BASE + counter)
                    counter += 1
                    self.prov_of[nid] = v
                    provs.append(v)
                summed = provs[0]
                for v in provs[1:]:
                    summed = Sum(summed, v)
                cand = Evidence(summed)
                for fid in cls.families:
                    self.cands[fid] = cand
        else:
            for fid, fam in enumerate(analysis.families):
                if not fam.essential:
                    continue
                provs = []
                for nid in fam.instances:
                    v = JustVar(PROVISIONAL_BASE + counter)
                    counter += 1
                    self.prov_of[nid] = v
                    provs.append(v)
                summed = provs[0]
                for v in provs[1:]:
                    summed = JustSum(summed, v)
                self.cands[fid] = summed
        for fid, fam in enumerate(analysis.families):
            if fid in self.cands:
                continue
            self.cands[fid] = Evidence(ProofVar(fresh)) if self.calculus == "GE" else JustVar(fresh)
            fresh += 1

    # -- annotation ------------------------------------------------------

    def _annotate_formula(self, nid: int, side: str, fidx: int, f: Formula) -> Formula:
        def go(g: Formula, path):
            if isinstance(g, Box):
                fam = self.analysis.family_of[(nid, side, fidx, path)]
                return JustOf(self.cands[fam], go(g.body, path + (0,)))
            if isinstance(g, Implies):
                return Implies(go(g.left, path + (0,)), go(g.right, path + (1,)))
            if isinstance(g, And):
                return And(go(g.left, path + (0,)), go(g.right, path + (1,)))
            if isinstance(g, Or):
                return Or(go(g.left, path + (0,)), go(g.right, path + (1,)))
            if isinstance(g, Not):
                return Not(go(g.inner, path + (0,)))
            return g

        return go(f, ())

    def _annotate(self, nid: int):
        s = self.index.nodes[nid].sequent
        ante = tuple(self._annotate_formula(nid, "L", i, f) for i, f in enumerate(s.ante))
        succ = tuple(self._annotate_formula(nid, "R", i, f) for i, f in enumerate(s.succ))
        return ante, succ

    # -- substitution of resolved provisionals ---------------------------

    def _resolve(self, provisional: Term, value: Term):
        if isinstance(provisional, ProofVar):
            s = Substitution(proof_vars={provisional.index: value})
        else:
            s = Substitution(just_vars={provisional.index: value})
        self.cands = {fid: apply_to_term(t, s) for fid, t in self.cands.items()}
        self.derivs = {nid: substitute_derivation(d, s) for nid, d in self.derivs.items()}
        self.log = [
            LogEntry(
                apply_to_term(e.term, s),
                apply_substitution(e.formula, s),
                substitute_derivation(e.derivation, s),
            )
            for e in self.log
        ]
        self._recheck_all()

    def _recheck_all(self):
        for nid, d in self.derivs.items():
            ante, succ = self._annotate(nid)
            self._require(d, ante, succ, nid)
        for e in self.log:
            j = check_derivation(e.derivation, self.cs)
            if j.hypotheses or j.conclusion != ProofOf(e.term, e.formula):
                raise DerivationError(
                    "realization-lost-internalization", detail=print_formula(j.conclusion)
                )

    def _require(self, d: Derivation, ante, succ, nid: int):
        j = check_derivation(d, self.cs)
        if j.conclusion != _disj(succ) or not j.hypotheses <= set(ante):
            raise DerivationError(
                "realization-unstable",
                detail=f"node {nid} expected {print_formula(_disj(succ))}, "
                f"got {print_formula(j.conclusion)}",
            )

    # -- per-rule constructions ------------------------------------------

    def run(self) -> Derivation:
        order = sorted(range(len(self.index.nodes)), key=lambda n: self.analysis.index.postorder[n])
        for nid in order:
            node = self.index.nodes[nid]
            handler = getattr(self, "_rule_" + node.rule.lower().replace("axbot", "ax_bot").replace("axp", "ax_p"))
            self.derivs[nid] = prune(handler(nid, node))
            ante, succ = self._annotate(nid)
            self._require(self.derivs[nid], ante, succ, nid)
        return self.derivs[0]

    def _child_ids(self, nid: int):
        return self.index.children[nid]

    def _rule_ax_p(self, nid: int, node: Proof) -> Derivation:
        ante, _ = self._annotate(nid)
        b = Builder(self.dialect)
        return b.derivation(b.hyp(ante[0]))

    def _rule_ax_bot(self, nid: int, node: Proof) -> Derivation:
        b = Builder(self.dialect)
        return b.derivation(b.hyp(BOT))

    def _rule_wl(self, nid: int, node: Proof) -> Derivation:
        return self.derivs[self._child_ids(nid)[0]]

    def _rule_cl(self, nid: int, node: Proof) -> Derivation:
        return self.derivs[self._child_ids(nid)[0]]

    def _rule_wr(self, nid: int, node: Proof) -> Derivation:
        (c,) = self._child_ids(nid)
        k = node.principal[0][1]
        _, src = self._annotate(c)
        _, dst = self._annotate(nid)
        mapping = {j: (j if j < k else j + 1) for j in range(len(src))}
        return _remap_disj(self.derivs[c], src, dst, mapping)

    def _rule_cr(self, nid: int, node: Proof) -> Derivation:
        (c,) = self._child_ids(nid)
        k = node.principal[0][1]
        _, src = self._annotate(c)
        _, dst = self._annotate(nid)
        mapping = {j: (j if j <= k else j - 1) for j in range(len(src))}
        return _remap_disj(self.derivs[c], src, dst, mapping)

    def _rule_impl(self, nid: int, node: Proof) -> Derivation:
        c1, c2 = self._child_ids(nid)
        k = node.principal[0][1]
        ante, succ = self._annotate(nid)
        a, bb = ante[k].left, ante[k].right
        _, src1 = self._annotate(c1)
        db = deduction_transform(self.derivs[c2], bb)
        b = Builder(self.dialect)
        himp = b.hyp(ante[k])
        d_imp = b.derivation(himp)
        arrow_a = compose(d_imp, db)
        target = _disj(succ)
        arrows = [_inject(self.dialect, succ, j) for j in range(len(succ))] + [arrow_a]
        fold = _fold(self.dialect, src1, arrows, target)
        b2 = Builder(self.dialect)
        return b2.derivation(b2.mp(b2.embed(fold), b2.embed(self.derivs[c1])))

    def _rule_impr(self, nid: int, node: Proof) -> Derivation:
        (c,) = self._child_ids(nid)
        k = node.principal[0][1]
        ante, succ = self._annotate(nid)
        a, bb = succ[k].left, succ[k].right
        _, src = self._annotate(c)
        dd = deduction_transform(self.derivs[c], a)
        goal = _disj(succ)
        neg_goal = Not(goal)
        arr_contra = _contrapose(_inject(self.dialect, succ, k))
        arr_a = _neg_imp_gives_left(self.dialect, a, bb)
        arr_nb = _neg_imp_gives_negright(self.dialect, a, bb)
        goal_bot = _neg_arrow(self.dialect, goal)
        arrows = []
        for j, f in enumerate(src):
            if j == len(src) - 1:
                b = Builder(self.dialect)
                hng = b.hyp(neg_goal)
                nimp = b.mp(b.embed(arr_contra), hng)
                nb = b.mp(b.embed(arr_nb), nimp)
                arrows.append(b.derivation(b.mp(b.axiom("pl_neg_elim", {"F": bb}), nb)))
            else:
                parent_j = j if j < k else j + 1
                arrows.append(compose(_inject(self.dialect, succ, parent_j), goal_bot))
        fold = _fold(self.dialect, src, arrows, BOT)
        b = Builder(self.dialect)
        i_dd = b.embed(dd)
        hng = b.hyp(neg_goal)
        nimp = b.mp(b.embed(arr_contra), hng)
        a_idx = b.mp(b.embed(arr_a), nimp)
        r_idx = b.mp(i_dd, a_idx)
        bot = b.mp(b.embed(fold), r_idx)
        return by_contradiction(b.derivation(bot), goal)

    def _rule_andl(self, nid: int, node: Proof) -> Derivation:
        (c,) = self._child_ids(nid)
        k = node.principal[0][1]
        ante, _ = self._annotate(nid)
        a, bb = ante[k].left, ante[k].right
        dd = deduction_transform(deduction_transform(self.derivs[c], bb), a)
        b = Builder(self.dialect)
        h = b.hyp(ante[k])
        ea = b.mp(b.axiom("pl_and_elim_l", {"F": a, "G": bb}), h)
        eb = b.mp(b.axiom("pl_and_elim_r", {"F": a, "G": bb}), h)
        return b.derivation(b.mp(b.mp(b.embed(dd), ea), eb))

    def _rule_andr(self, nid: int, node: Proof) -> Derivation:
        c1, c2 = self._child_ids(nid)
        k = node.principal[0][1]
        _, succ = self._annotate(nid)
        a, bb = succ[k].left, succ[k].right
        _, src1 = self._annotate(c1)
        _, src2 = self._annotate(c2)
        target = _disj(succ)
        b = Builder(self.dialect)
        ha = b.hyp(a)
        pair_arrow = b.derivation(b.mp(b.axiom("pl_and_intro", {"F": a, "G": bb}), ha))
        arr_b = compose(pair_arrow, _inject(self.dialect, succ, k))
        arrows2 = [
            arr_b if j == len(src2) - 1 else _inject(self.dialect, succ, j if j < k else j + 1)
            for j in range(len(src2))
        ]
        fold2 = _fold(self.dialect, src2, arrows2, target)
        b2 = Builder(self.dialect)
        got = b2.mp(b2.embed(fold2), b2.embed(self.derivs[c2]))
        d_a_target = deduction_transform(b2.derivation(got), a)
        arrows1 = [
            d_a_target if j == len(src1) - 1 else _inject(self.dialect, succ, j if j < k else j + 1)
            for j in range(len(src1))
        ]
        fold1 = _fold(self.dialect, src1, arrows1, target)
        b3 = Builder(self.dialect)
        return b3.derivation(b3.mp(b3.embed(fold1), b3.embed(self.derivs[c1])))

    def _rule_orl(self, nid: int, node: Proof) -> Derivation:
        c1, c2 = self._child_ids(nid)
        k = node.principal[0][1]
        ante, succ = self._annotate(nid)
        a, bb = ante[k].left, ante[k].right
        target = _disj(succ)
        dd1 = deduction_transform(self.derivs[c1], a)
        dd2 = deduction_transform(self.derivs[c2], bb)
        b = Builder(self.dialect)
        oe = b.axiom("pl_or_elim", {"F": a, "G": bb, "H": target})
        h = b.hyp(ante[k])
        return b.derivation(b.mp(b.mp(b.mp(oe, b.embed(dd1)), b.embed(dd2)), h))

    def _rule_orr(self, nid: int, node: Proof) -> Derivation:
        (c,) = self._child_ids(nid)
        k = node.principal[0][1]
        _, succ = self._annotate(nid)
        a, bb = succ[k].left, succ[k].right
        _, src = self._annotate(c)
        target = _disj(succ)
        arrows = []
        for j in range(len(src)):
            if j == len(src) - 2:
                b = Builder(self.dialect)
                d = b.derivation(b.axiom("pl_or_intro_l", {"F": a, "G": bb}))
                arrows.append(compose(d, _inject(self.dialect, succ, k)))
            elif j == len(src) - 1:
                b = Builder(self.dialect)
                d = b.derivation(b.axiom("pl_or_intro_r", {"F": a, "G": bb}))
                arrows.append(compose(d, _inject(self.dialect, succ, k)))
            else:
                arrows.append(_inject(self.dialect, succ, j if j < k else j + 1))
        fold = _fold(self.dialect, src, arrows, target)
        b2 = Builder(self.dialect)
        return b2.derivation(b2.mp(b2.embed(fold), b2.embed(self.derivs[c])))

    def _rule_notl(self, nid: int, node: Proof) -> Derivation:
        (c,) = self._child_ids(nid)
        k = node.principal[0][1]
        ante, succ = self._annotate(nid)
        a = ante[k].inner
        _, src = self._annotate(c)
        target = _disj(succ)
        b = Builder(self.dialect)
        hna = b.hyp(ante[k])
        a_bot = b.derivation(b.mp(b.axiom("pl_neg_elim", {"F": a}), hna))
        arr_a = compose(a_bot, efq_to(self.dialect, target))
        arrows = [
            arr_a if j == len(src) - 1 else _inject(self.dialect, succ, j)
            for j in range(len(src))
        ]
        fold = _fold(self.dialect, src, arrows, target)
        b2 = Builder(self.dialect)
        return b2.derivation(b2.mp(b2.embed(fold), b2.embed(self.derivs[c])))

    def _rule_notr(self, nid: int, node: Proof) -> Derivation:
        (c,) = self._child_ids(nid)
        k = node.principal[0][1]
        _, succ = self._annotate(nid)
        a = succ[k].inner
        _, src = self._annotate(c)
        dd = deduction_transform(self.derivs[c], a)
        goal = _disj(succ)
        neg_goal = Not(goal)
        goal_bot = _neg_arrow(self.dialect, goal)
        arrows = [
            compose(_inject(self.dialect, succ, j if j < k else j + 1), goal_bot)
            for j in range(len(src))
        ]
        fold = _fold(self.dialect, src, arrows, BOT)
        arr_nna = _contrapose(_inject(self.dialect, succ, k))
        b = Builder(self.dialect)
        hng = b.hyp(neg_goal)
        nna = b.mp(b.embed(arr_nna), hng)
        a_idx = b.mp(b.axiom("pl_dne", {"F": a}), nna)
        r_idx = b.mp(b.embed(dd), a_idx)
        bot = b.mp(b.embed(fold), r_idx)
        return by_contradiction(b.derivation(bot), goal)

    def _rule_re(self, nid: int, node: Proof) -> Derivation:
        c1, c2 = self._child_ids(nid)
        ante1, succ1 = self._annotate(c1)
        ann_a, ann_b = ante1[0], succ1[0]
        dd1 = deduction_transform(self.derivs[c1], ann_a)
        dd2 = deduction_transform(self.derivs[c2], ann_b)
        lam1, p1 = internalize(dd1, self.cs)
        lam2, p2 = internalize(dd2, self.cs)
        self.log.append(LogEntry(lam1, Implies(ann_a, ann_b), p1))
        self.log.append(LogEntry(lam2, Implies(ann_b, ann_a), p2))
        if self.mode == "simplify" and lam1 == lam2:
            value = lam1
        else:
            value = Sum(lam1, lam2)
        self._resolve(self.prov_of[nid], value)
        ante, succ = self._annotate(nid)
        t = ante[0].term
        u = t.proof
        ann_a, ann_b = ante[0].body, succ[0].body
        entry1 = self.log[-2]
        entry2 = self.log[-1]
        l1 = _lift_proof_sum(entry1.derivation, u, _sum_path(u, entry1.term, Sum))
        l2 = _lift_proof_sum(entry2.derivation, u, _sum_path(u, entry2.term, Sum))
        fwd = ProofOf(u, Implies(ann_a, ann_b))
        bwd = ProofOf(u, Implies(ann_b, ann_a))
        b = Builder(self.dialect)
        conj = b.mp(b.mp(b.axiom("pl_and_intro", {"F": fwd, "G": bwd}), b.embed(l1)), b.embed(l2))
        arrow = b.mp(b.axiom("je", {"L": u, "F": ann_a, "G": ann_b}), conj)
        h = b.hyp(ante[0])
        return b.derivation(b.mp(arrow, h))

    def _rule_rm(self, nid: int, node: Proof) -> Derivation:
        (c,) = self._child_ids(nid)
        ante1, succ1 = self._annotate(c)
        ann_a, ann_b = ante1[0], succ1[0]
        dd = deduction_transform(self.derivs[c], ann_a)
        lam, p = internalize(dd, self.cs)
        self.log.append(LogEntry(lam, Implies(ann_a, ann_b), p))
        ante, _ = self._annotate(nid)
        t_left = ante[0].term
        self._resolve(self.prov_of[nid], MApply(lam, t_left))
        ante, succ = self._annotate(nid)
        t_left = ante[0].term
        u = succ[0].term
        ann_a, ann_b = ante[0].body, succ[0].body
        entry = self.log[-1]
        b = Builder(self.dialect)
        jm = b.axiom("jm", {"L": entry.term, "T": t_left, "F": ann_a, "G": ann_b})
        arr = b.mp(jm, b.embed(entry.derivation))
        h = b.hyp(ante[0])
        small = b.derivation(b.mp(arr, h))
        value = MApply(entry.term, t_left)
        return _lift_just_sum(small, u, _sum_path(u, value, JustSum))


def realize(
    proof: Proof, calculus: str, cs: ConstantSpecification, mode: str = "strict"
) -> RealizationResult:
    """Realize a checked sequent proof into the matching justification dialect.

    ``mode`` is "strict" (every modal-rule instance contributes the full sum
    of its two internalized witnesses) or "simplify" (syntactically equal
    witness pairs collapse to one)."""
    if mode not in ("strict", "simplify"):
        raise ValueError(f"unknown mode {mode!r}")
    try:
        check_sequent_proof(proof, calculus)
    except SequentProofError as e:
        raise UncheckedProof(str(e)) from e
    dialect = Dialect.JE if calculus == "GE" else Dialect.JEM
    if cs.dialect is not dialect:
        raise DialectError(f"specification is for {cs.dialect.name}, calculus {calculus} needs {dialect.name}")
    missing = check_axiomatically_appropriate(cs)
    if missing:
        raise NotAppropriate(missing)
    engine = _Engine(proof, calculus, cs, mode)
    final = prune(engine.run())
    ante, succ = engine._annotate(0)
    for f in ante + succ:
        for t in terms_in(f):
            if _has_provisional(t):
                raise DerivationError("realization-unresolved", detail=print_formula(f))
    return RealizationResult(
        calculus=calculus,
        dialect=dialect,
        antecedent=ante,
        succedent=succ,
        derivation=final,
        log=tuple(engine.log),
        mode=mode,
        source=proof,
        cs=cs,
    )


def simplify(result: RealizationResult) -> RealizationResult:
    """Re-run the realization collapsing syntactically equal witness pairs;
    falls back to the given result if the collapsed run fails to check."""
    if result.mode == "simplify":
        return result
    try:
        out = realize(result.source, result.calculus, result.cs, mode="simplify")
        verify_realization(out)
        return out
    except (DerivationError, VerificationError):
        return result


def _token_polarity(root_formula: Formula, side: str, path) -> str:
    pol = polarity_at(root_formula, path)
    if side == "L":
        pol = "negative" if pol == "positive" else "positive"
    return pol


def verify_realization(
    result: RealizationResult,
    proof: Proof | None = None,
    cs: ConstantSpecification | None = None,
) -> None:
    """Independently re-check a realization: the realized sequent forgets back
    to the source, the derivation and every logged internalization check, no
    provisional variable survived, and (for the monotonic calculus) negative
    boxes are realized by pairwise distinct variables."""
    if proof is None:
        proof = result.source
    if cs is None:
        cs = result.cs
    try:
        root = check_sequent_proof(proof, result.calculus)
    except SequentProofError as e:
        raise UncheckedProof(str(e)) from e
    if (
        tuple(forgetful(f) for f in result.antecedent) != root.ante
        or tuple(forgetful(f) for f in result.succedent) != root.succ
    ):
        raise RoundtripMismatch("realized sequent does not forget back to the source sequent")
    for f in result.antecedent + result.succedent:
        for t in terms_in(f):
            if _has_provisional(t):
                raise ProvisionalLeak(print_formula(f))
    try:
        j = check_derivation(result.derivation, cs)
    except DerivationError as e:
        raise DerivationFails(str(e)) from e
    if j.conclusion != _disj(result.succedent):
        raise DerivationFails(
            f"derivation concludes {print_formula(j.conclusion)}, "
            f"expected {print_formula(_disj(result.succedent))}"
        )
    if not j.hypotheses <= set(result.antecedent):
        extra = j.hypotheses - set(result.antecedent)
        raise DerivationFails(
            "derivation uses hypotheses outside the realized antecedent: "
            + ", ".join(sorted(print_formula(f) for f in extra))
        )
    for entry in result.log:
        try:
            je = check_derivation(entry.derivation, cs)
        except DerivationError as e:
            raise DerivationFails(f"logged internalization: {e}") from e
        if je.hypotheses or je.conclusion != ProofOf(entry.term, entry.formula):
            raise DerivationFails("logged internalization does not conclude its recorded judgment")
    if result.calculus == "GM":
        analysis = compute_families(proof)
        fam_terms: dict[int, Term] = {}
        fam_negative: dict[int, bool] = {}
        realized_root = {"L": result.antecedent, "R": result.succedent}
        source_root = {"L": root.ante, "R": root.succ}
        for token, fid in analysis.family_of.items():
            nid, side, fidx, path = token
            if nid != 0:
                continue
            node = subformula_at(realized_root[side][fidx], path)
            fam_terms[fid] = node.term
            if _token_polarity(source_root[side][fidx], side, path) == "negative":
                fam_negative[fid] = True
        seen: dict[Term, int] = {}
        for fid, negative in fam_negative.items():
            term = fam_terms[fid]
            if not isinstance(term, JustVar):
                raise NotNormal(f"negative box realized by a non-variable term {term!r}")
            if term in seen and seen[term] != fid:
                raise NotNormal("two negative box families share one variable")
            seen[term] = fid
