"""Object language shared by every other module: terms, formulas, parsing, printing.

The toolkit works with three dialects of one formula language:

* ``MODAL``   -- propositional logic plus an unlabelled box ``[]F``.
* ``JE``      -- proof terms (constants ``c0``/``c_name``, variables ``p0``,
  application ``*``, sum ``+``, positive introspection ``!``) assert formulas
  with ``:``, and justification terms are always of the shape ``e(proof term)``,
  written ``[e(t)]F``.
* ``JEM``     -- proof terms lose ``+``; justification terms are variables
  ``x0``, binary sums ``t + s`` and applications ``m(proof term, just term)``.

Formula trees are plain frozen dataclasses and carry no dialect tag of their
own; ``check_formula`` validates a tree against a dialect.  Occurrences of
subformulas are addressed by paths (tuples of child indices), which is what the
sequent machinery uses to track box occurrences across rule applications.

Concrete syntax notes (the full grammar lives in docs/grammar.md):

* ``:`` binds tighter than ``->`` and its body must be an atom, ``_|_`` or a
  parenthesised formula: ``p0:A -> A`` is ``(p0:A) -> A``.
* ``[t]`` and ``~`` take a unary body, so ``[x0][x1]A`` and ``~~A`` parse
  without parentheses.
* ``A <-> B`` is accepted as input sugar for ``(A -> B) & (B -> A)``; the
  printer never emits it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Iterator, Mapping


class Dialect(Enum):
    JE = "JE"
    JEM = "JEM"
    MODAL = "MODAL"


class ParseError(Exception):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class DialectError(Exception):
    """A term or formula uses a constructor the dialect does not have."""


class BadPath(Exception):
    """An occurrence path does not point into the formula."""


class ProofOfPresent(Exception):
    """The forgetful translation is undefined on ``t:F`` subformulas."""


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class ProofConst:
    name: str
    __match_args__ = ("name",)


@dataclass(frozen=True)
class ProofVar:
    index: int
    __match_args__ = ("index",)


@dataclass(frozen=True)
class Apply:
    left: "ProofTerm"
    right: "ProofTerm"
    __match_args__ = ("left", "right")


@dataclass(frozen=True)
class Sum:
    left: "ProofTerm"
    right: "ProofTerm"
    __match_args__ = ("left", "right")


@dataclass(frozen=True)
class Bang:
    inner: "ProofTerm"
    __match_args__ = ("inner",)


@dataclass(frozen=True)
class Evidence:
    """JE justification term ``e(t)`` wrapping a proof term."""

    proof: "ProofTerm"
    __match_args__ = ("proof",)


@dataclass(frozen=True)
class JustVar:
    index: int
    __match_args__ = ("index",)


@dataclass(frozen=True)
class JustSum:
    left: "JustTerm"
    right: "JustTerm"
    __match_args__ = ("left", "right")


@dataclass(frozen=True)
class MApply:
    """JEM justification term ``m(t, s)``: a proof term applied to evidence."""

    proof: "ProofTerm"
    just: "JustTerm"
    __match_args__ = ("proof", "just")


ProofTerm = ProofConst | ProofVar | Apply | Sum | Bang
JustTerm = Evidence | JustVar | JustSum | MApply
Term = ProofTerm | JustTerm


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Atom:
    name: str
    __match_args__ = ("name",)


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"
    __match_args__ = ("left", "right")


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"
    __match_args__ = ("left", "right")


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"
    __match_args__ = ("left", "right")


@dataclass(frozen=True)
class Not:
    inner: "Formula"
    __match_args__ = ("inner",)


@dataclass(frozen=True)
class ProofOf:
    """``t:F`` -- a proof term asserting a formula."""

    term: ProofTerm
    body: "Formula"
    __match_args__ = ("term", "body")


@dataclass(frozen=True)
class JustOf:
    """``[t]F`` -- a justification term asserting a formula."""

    term: JustTerm
    body: "Formula"
    __match_args__ = ("term", "body")


@dataclass(frozen=True)
class Box:
    body: "Formula"
    __match_args__ = ("body",)


Formula = Atom | Bottom | Implies | And | Or | Not | ProofOf | JustOf | Box

BOT = Bottom()


def _memoized_hash(cls):
    """Hash computed once per instance and stashed on it.

    Internalized proof terms are DAGs with heavy structural sharing; the
    default dataclass hash re-walks the full unfolded tree on every call,
    which is exponential in the worst case.  Caching makes each node cost
    O(1) after its first hash."""

    names = tuple(f.name for f in fields(cls))
    tag = hash(cls.__qualname__)

    def __hash__(self, _names=names, _tag=tag):
        d = self.__dict__
        h = d.get("_hash_memo")
        if h is None:
            h = hash((_tag,) + tuple(d[n] for n in _names))
            object.__setattr__(self, "_hash_memo", h)
        return h

    return __hash__


for _node_cls in (
    ProofConst, ProofVar, Apply, Sum, Bang, Evidence, JustVar, JustSum, MApply,
    Atom, Bottom, Implies, And, Or, Not, ProofOf, JustOf, Box,
):
    _node_cls.__hash__ = _memoized_hash(_node_cls)
del _node_cls


# ---------------------------------------------------------------------------
# Structure helpers


def formula_children(f: Formula) -> tuple[Formula, ...]:
    match f:
        case Implies(l, r) | And(l, r) | Or(l, r):
            return (l, r)
        case Not(inner):
            return (inner,)
        case ProofOf(_, body) | JustOf(_, body):
            return (body,)
        case Box(body):
            return (body,)
        case _:
            return ()


def subformula_at(f: Formula, path: tuple[int, ...]) -> Formula:
    node = f
    for i, step in enumerate(path):
        kids = formula_children(node)
        if step >= len(kids):
            raise BadPath(f"no child {step} at {path[:i]}")
        node = kids[step]
    return node


def subformulas(f: Formula) -> Iterator[tuple[tuple[int, ...], Formula]]:
    """Preorder walk yielding (path, subformula) pairs."""
    stack = [((), f)]
    while stack:
        path, node = stack.pop(0)
        yield path, node
        stack[0:0] = [(path + (i,), kid) for i, kid in enumerate(formula_children(node))]


def box_occurrences(f: Formula) -> tuple[tuple[int, ...], ...]:
    """Paths to every ``Box`` node, in preorder."""
    return tuple(path for path, node in subformulas(f) if isinstance(node, Box))


def polarity_at(f: Formula, path: tuple[int, ...]) -> str:
    """Polarity of the subformula at ``path``: the whole formula is positive,
    implication flips its left side, negation flips, everything else keeps."""
    node = f
    flips = 0
    for i, step in enumerate(path):
        kids = formula_children(node)
        if step >= len(kids):
            raise BadPath(f"no child {step} at {path[:i]}")
        if isinstance(node, Implies) and step == 0:
            flips += 1
        elif isinstance(node, Not):
            flips += 1
        node = kids[step]
    return "positive" if flips % 2 == 0 else "negative"


def term_depth(t: Term) -> int:
    match t:
        case ProofConst() | ProofVar() | JustVar():
            return 1
        case Apply(l, r) | Sum(l, r) | JustSum(l, r):
            return 1 + max(term_depth(l), term_depth(r))
        case Bang(inner) | Evidence(inner):
            return 1 + term_depth(inner)
        case MApply(l, r):
            return 1 + max(term_depth(l), term_depth(r))
    raise TypeError(f"not a term: {t!r}")


def subterms(t: Term) -> Iterator[Term]:
    yield t
    match t:
        case Apply(l, r) | Sum(l, r) | JustSum(l, r) | MApply(l, r):
            yield from subterms(l)
            yield from subterms(r)
        case Bang(inner) | Evidence(inner):
            yield from subterms(inner)


def terms_in(f: Formula) -> Iterator[Term]:
    """All terms asserting something in ``f``, outermost first."""
    for _, node in subformulas(f):
        if isinstance(node, (ProofOf, JustOf)):
            yield node.term


# ---------------------------------------------------------------------------
# Dialect validation


def check_proof_term(t: ProofTerm, dialect: Dialect, _seen: set[int] | None = None) -> None:
    # ``_seen`` holds ids of nodes already validated during this call, so a
    # term DAG with heavy sharing is walked once per node, not once per path.
    if _seen is None:
        _seen = set()
    elif id(t) in _seen:
        return
    _seen.add(id(t))
    match t:
        case ProofConst() | ProofVar():
            pass
        case Apply(l, r):
            check_proof_term(l, dialect, _seen)
            check_proof_term(r, dialect, _seen)
        case Sum(l, r):
            if dialect is Dialect.JEM:
                raise DialectError("proof-term sum is not available in JEM")
            check_proof_term(l, dialect, _seen)
            check_proof_term(r, dialect, _seen)
        case Bang(inner):
            check_proof_term(inner, dialect, _seen)
        case _:
            raise DialectError(f"not a proof term: {t!r}")


def check_just_term(t: JustTerm, dialect: Dialect, _seen: set[int] | None = None) -> None:
    if _seen is None:
        _seen = set()
    elif id(t) in _seen:
        return
    _seen.add(id(t))
    match t:
        case Evidence(p):
            if dialect is not Dialect.JE:
                raise DialectError("e(.) terms belong to JE only")
            check_proof_term(p, dialect, _seen)
        case JustVar():
            if dialect is not Dialect.JEM:
                raise DialectError("justification variables belong to JEM only")
        case JustSum(l, r):
            if dialect is not Dialect.JEM:
                raise DialectError("justification-term sum belongs to JEM only")
            check_just_term(l, dialect, _seen)
            check_just_term(r, dialect, _seen)
        case MApply(p, j):
            if dialect is not Dialect.JEM:
                raise DialectError("m(.,.) terms belong to JEM only")
            check_proof_term(p, dialect, _seen)
            check_just_term(j, dialect, _seen)
        case _:
            raise DialectError(f"not a justification term: {t!r}")


def check_formula(f: Formula, dialect: Dialect, _seen: set[int] | None = None) -> None:
    if _seen is None:
        _seen = set()
    elif id(f) in _seen:
        return
    _seen.add(id(f))
    match f:
        case Atom() | Bottom():
            pass
        case Implies(l, r) | And(l, r) | Or(l, r):
            check_formula(l, dialect, _seen)
            check_formula(r, dialect, _seen)
        case Not(inner):
            check_formula(inner, dialect, _seen)
        case Box(body):
            if dialect is not Dialect.MODAL:
                raise DialectError("[] belongs to the modal dialect only")
            check_formula(body, dialect, _seen)
        case ProofOf(t, body):
            if dialect is Dialect.MODAL:
                raise DialectError("proof assertions do not exist in the modal dialect")
            check_proof_term(t, dialect, _seen)
            check_formula(body, dialect, _seen)
        case JustOf(t, body):
            if dialect is Dialect.MODAL:
                raise DialectError("justification assertions do not exist in the modal dialect")
            check_just_term(t, dialect, _seen)
            check_formula(body, dialect, _seen)
        case _:
            raise DialectError(f"not a formula: {f!r}")


def forgetful(f: Formula) -> Formula:
    """Erase justification terms: ``[t]F`` becomes ``[]F``.

    Undefined on formulas containing a proof assertion ``t:F`` (there is no
    modal counterpart for those), in which case ProofOfPresent is raised.
    """
    match f:
        case Atom() | Bottom():
            return f
        case Implies(l, r):
            return Implies(forgetful(l), forgetful(r))
        case And(l, r):
            return And(forgetful(l), forgetful(r))
        case Or(l, r):
            return Or(forgetful(l), forgetful(r))
        case Not(inner):
            return Not(forgetful(inner))
        case JustOf(_, body):
            return Box(forgetful(body))
        case ProofOf(t, _):
            raise ProofOfPresent(f"cannot erase proof assertion {print_term(t)}:...")
        case Box():
            raise DialectError("input to the forgetful translation is already modal")
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Substitution


@dataclass(frozen=True)
class Substitution:
    """Simultaneous replacement of atoms, proof variables and justification
    variables.  Replacement values are not themselves rescanned."""

    atoms: Mapping[str, Formula] = field(default_factory=dict)
    proof_vars: Mapping[int, ProofTerm] = field(default_factory=dict)
    just_vars: Mapping[int, JustTerm] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return not (self.atoms or self.proof_vars or self.just_vars)


def apply_to_term(t: Term, s: Substitution) -> Term:
    # Returning ``t`` itself when nothing changed preserves sharing inside
    # large term DAGs, which keeps later equality checks and hashing cheap.
    match t:
        case ProofConst():
            return t
        case ProofVar(i):
            return s.proof_vars.get(i, t)
        case Apply(l, r):
            nl, nr = apply_to_term(l, s), apply_to_term(r, s)
            return t if nl is l and nr is r else Apply(nl, nr)
        case Sum(l, r):
            nl, nr = apply_to_term(l, s), apply_to_term(r, s)
            return t if nl is l and nr is r else Sum(nl, nr)
        case Bang(inner):
            ni = apply_to_term(inner, s)
            return t if ni is inner else Bang(ni)
        case Evidence(p):
            np = apply_to_term(p, s)
            return t if np is p else Evidence(np)
        case JustVar(i):
            return s.just_vars.get(i, t)
        case JustSum(l, r):
            nl, nr = apply_to_term(l, s), apply_to_term(r, s)
            return t if nl is l and nr is r else JustSum(nl, nr)
        case MApply(p, j):
            np, nj = apply_to_term(p, s), apply_to_term(j, s)
            return t if np is p and nj is j else MApply(np, nj)
    raise TypeError(f"not a term: {t!r}")


def apply_substitution(f: Formula, s: Substitution) -> Formula:
    match f:
        case Atom(name):
            return s.atoms.get(name, f)
        case Bottom():
            return f
        case Implies(l, r):
            nl, nr = apply_substitution(l, s), apply_substitution(r, s)
            return f if nl is l and nr is r else Implies(nl, nr)
        case And(l, r):
            nl, nr = apply_substitution(l, s), apply_substitution(r, s)
            return f if nl is l and nr is r else And(nl, nr)
        case Or(l, r):
            nl, nr = apply_substitution(l, s), apply_substitution(r, s)
            return f if nl is l and nr is r else Or(nl, nr)
        case Not(inner):
            ni = apply_substitution(inner, s)
            return f if ni is inner else Not(ni)
        case ProofOf(t, body):
            nt, nb = apply_to_term(t, s), apply_substitution(body, s)
            return f if nt is t and nb is body else ProofOf(nt, nb)
        case JustOf(t, body):
            nt, nb = apply_to_term(t, s), apply_substitution(body, s)
            return f if nt is t and nb is body else JustOf(nt, nb)
        case Box(body):
            nb = apply_substitution(body, s)
            return f if nb is body else Box(nb)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Printing

_PREC_IMP, _PREC_OR, _PREC_AND, _PREC_UNARY, _PREC_ATOM = 1, 2, 3, 4, 5


def print_term(t: Term) -> str:
    return _pt(t, 0)


def _pt(t: Term, prec: int) -> str:
    match t:
        case ProofConst(name):
            return name
        case ProofVar(i):
            return f"p{i}"
        case JustVar(i):
            return f"x{i}"
        case Sum(l, r) | JustSum(l, r):
            s = f"{_pt(l, 1)} + {_pt(r, 2)}"
            return f"({s})" if prec > 1 else s
        case Apply(l, r):
            s = f"{_pt(l, 2)} * {_pt(r, 3)}"
            return f"({s})" if prec > 2 else s
        case Bang(inner):
            return f"!{_pt(inner, 3)}"
        case Evidence(p):
            return f"e({_pt(p, 0)})"
        case MApply(p, j):
            return f"m({_pt(p, 0)}, {_pt(j, 0)})"
    raise TypeError(f"not a term: {t!r}")


def print_formula(f: Formula) -> str:
    return _pf(f, 0)


def _pf(f: Formula, prec: int) -> str:
    match f:
        case Atom(name):
            return name
        case Bottom():
            return "_|_"
        case Implies(l, r):
            s = f"{_pf(l, _PREC_IMP + 1)} -> {_pf(r, _PREC_IMP)}"
            return f"({s})" if prec > _PREC_IMP else s
        case Or(l, r):
            s = f"{_pf(l, _PREC_OR)} | {_pf(r, _PREC_OR + 1)}"
            return f"({s})" if prec > _PREC_OR else s
        case And(l, r):
            s = f"{_pf(l, _PREC_AND)} & {_pf(r, _PREC_AND + 1)}"
            return f"({s})" if prec > _PREC_AND else s
        case Not(inner):
            return f"~{_pf(inner, _PREC_UNARY)}"
        case Box(body):
            return f"[]{_pf(body, _PREC_UNARY)}"
        case JustOf(t, body):
            return f"[{print_term(t)}]{_pf(body, _PREC_UNARY)}"
        case ProofOf(t, body):
            if isinstance(body, (Atom, Bottom)):
                return f"{print_term(t)}:{_pf(body, _PREC_ATOM)}"
            return f"{print_term(t)}:({_pf(body, 0)})"
    raise TypeError(f"not a formula: {f!r}")


def print_sequent(antecedent: tuple[Formula, ...], succedent: tuple[Formula, ...]) -> str:
    left = ", ".join(print_formula(f) for f in antecedent)
    right = ", ".join(print_formula(f) for f in succedent)
    return f"{left} => {right}".strip()


# ---------------------------------------------------------------------------
# Lexing

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<bot>_\|_)
      | (?P<iff><->)
      | (?P<imp>->)
      | (?P<seq>=>)
      | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
      | (?P<punct>[()\[\]:~&|+*!,])
    """,
    re.VERBOSE,
)

_ATOM_RE = re.compile(r"[A-Z][A-Za-z0-9_]*$")
_PCONST_RE = re.compile(r"c(?:[0-9]+|_[A-Za-z0-9_]+)$")
_PVAR_RE = re.compile(r"p([0-9]+)$")
_JVAR_RE = re.compile(r"x([0-9]+)$")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# Parsing


class _Parser:
    def __init__(self, text: str, dialect: Dialect):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.dialect = dialect

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.pos)
        return tok

    def at_end(self) -> bool:
        return self.peek().kind == "eof"

    # -- formulas

    def formula(self) -> Formula:
        left = self.imp()
        if self.peek().text == "<->":
            self.next()
            right = self.imp()
            return And(Implies(left, right), Implies(right, left))
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek().text == "->":
            self.next()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek().text == "|":
            self.next()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek().text == "&":
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.text == "~":
            self.next()
            return Not(self.unary())
        if tok.text == "[":
            self.next()
            if self.peek().text == "]":
                if self.dialect is not Dialect.MODAL:
                    raise DialectError("[] is only available in the modal dialect")
                self.next()
                return Box(self.unary())
            if self.dialect is Dialect.MODAL:
                raise DialectError("justification terms are not available in the modal dialect")
            term = self.just_term()
            self.expect("]")
            return JustOf(term, self.unary())
        if tok.kind == "bot":
            self.next()
            return BOT
        if tok.kind == "ident" and _ATOM_RE.match(tok.text):
            self.next()
            return Atom(tok.text)
        if tok.text == "(":
            if self.dialect is not Dialect.MODAL:
                saved = self.pos
                try:
                    term = self.proof_term()
                    self.expect(":")
                    return ProofOf(term, self.colon_body())
                except ParseError:
                    self.pos = saved
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        if tok.text == "!" or (tok.kind == "ident" and (_PCONST_RE.match(tok.text) or _PVAR_RE.match(tok.text))):
            if self.dialect is Dialect.MODAL:
                raise DialectError("proof terms are not available in the modal dialect")
            term = self.proof_term()
            self.expect(":")
            return ProofOf(term, self.colon_body())
        if tok.kind == "ident":
            raise DialectError(f"name {tok.text!r} does not start a {self.dialect.value} formula")
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)

    def colon_body(self) -> Formula:
        tok = self.peek()
        if tok.kind == "bot":
            self.next()
            return BOT
        if tok.kind == "ident" and _ATOM_RE.match(tok.text):
            self.next()
            return Atom(tok.text)
        if tok.text == "(":
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        raise ParseError("the body of ':' must be an atom, _|_ or parenthesised", tok.pos)

    # -- proof terms

    def proof_term(self) -> ProofTerm:
        if self.dialect is Dialect.MODAL:
            raise DialectError("proof terms are not available in the modal dialect")
        left = self.proof_prod()
        while self.peek().text == "+":
            if self.dialect is Dialect.JEM:
                raise DialectError("proof-term sum is not available in JEM")
            self.next()
            left = Sum(left, self.proof_prod())
        return left

    def proof_prod(self) -> ProofTerm:
        left = self.proof_atom()
        while self.peek().text == "*":
            self.next()
            left = Apply(left, self.proof_atom())
        return left

    def proof_atom(self) -> ProofTerm:
        tok = self.peek()
        if tok.text == "!":
            self.next()
            return Bang(self.proof_atom())
        if tok.text == "(":
            self.next()
            inner = self.proof_term()
            self.expect(")")
            return inner
        if tok.kind == "ident":
            if _PCONST_RE.match(tok.text):
                self.next()
                return ProofConst(tok.text)
            m = _PVAR_RE.match(tok.text)
            if m:
                self.next()
                return ProofVar(int(m.group(1)))
            if tok.text in ("e", "m") or _JVAR_RE.match(tok.text):
                raise ParseError(f"justification term {tok.text!r} where a proof term is needed", tok.pos)
        raise ParseError(f"expected a proof term, found {tok.text or 'end of input'!r}", tok.pos)

    # -- justification terms

    def just_term(self) -> JustTerm:
        if self.dialect is Dialect.JE:
            tok = self.peek()
            if tok.text in ("m",) or (tok.kind == "ident" and _JVAR_RE.match(tok.text)):
                raise DialectError(f"{tok.text!r} belongs to JEM, not JE")
            self.expect("e")
            self.expect("(")
            inner = self.proof_term()
            self.expect(")")
            return Evidence(inner)
        return self.just_sum()

    def just_sum(self) -> JustTerm:
        left = self.just_atom()
        while self.peek().text == "+":
            self.next()
            left = JustSum(left, self.just_atom())
        return left

    def just_atom(self) -> JustTerm:
        tok = self.peek()
        if tok.text == "(":
            self.next()
            inner = self.just_sum()
            self.expect(")")
            return inner
        if tok.kind == "ident":
            if tok.text == "e":
                raise DialectError("e(.) belongs to JE, not JEM")
            if tok.text == "m":
                self.next()
                self.expect("(")
                p = self.proof_term()
                self.expect(",")
                j = self.just_sum()
                self.expect(")")
                return MApply(p, j)
            m = _JVAR_RE.match(tok.text)
            if m:
                self.next()
                return JustVar(int(m.group(1)))
        raise ParseError(f"expected a justification term, found {tok.text or 'end of input'!r}", tok.pos)


def parse_formula(text: str, dialect: Dialect) -> Formula:
    p = _Parser(text, dialect)
    f = p.formula()
    if not p.at_end():
        tok = p.peek()
        raise ParseError(f"trailing input {tok.text!r}", tok.pos)
    return f


def parse_proof_term(text: str, dialect: Dialect) -> ProofTerm:
    p = _Parser(text, dialect)
    t = p.proof_term()
    if not p.at_end():
        tok = p.peek()
        raise ParseError(f"trailing input {tok.text!r}", tok.pos)
    return t


def parse_just_term(text: str, dialect: Dialect) -> JustTerm:
    p = _Parser(text, dialect)
    t = p.just_term()
    if not p.at_end():
        tok = p.peek()
        raise ParseError(f"trailing input {tok.text!r}", tok.pos)
    return t


def parse_sequent(text: str, dialect: Dialect) -> tuple[tuple[Formula, ...], tuple[Formula, ...]]:
    """Parse ``F1, F2 => G1, G2``; either side may be empty."""
    p = _Parser(text, dialect)

    def side(closer: str) -> tuple[Formula, ...]:
        if p.peek().text == closer or (closer == "" and p.at_end()):
            return ()
        out = [p.formula()]
        while p.peek().text == ",":
            p.next()
            out.append(p.formula())
        return tuple(out)

    ante = side("=>")
    p.expect("=>")
    succ = side("")
    if not p.at_end():
        tok = p.peek()
        raise ParseError(f"trailing input {tok.text!r}", tok.pos)
    return ante, succ
