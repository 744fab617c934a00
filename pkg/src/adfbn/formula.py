"""Propositional formulas: AST, grammar, evaluation and polarity analysis.

Truth values are plain ints: ``0`` (false), ``1`` (true) and ``U`` (undecided,
printed ``u``).  Formulas are immutable and hashable.

Grammar (ASCII, whitespace-insensitive)::

    formula := or ('->' formula)?          # right-associative
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '!' unary | primary
    primary := ATOM | '0' | '1' | '(' formula ')'
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import ModelMismatchError, ParseError

U = 2
ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not ATOM_RE.match(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("And needs at least two operands; use conj()")


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("Or needs at least two operands; use disj()")


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Const, Not, And, Or, Implies]

TRUE = Const(True)
FALSE = Const(False)


def conj(*args: Formula) -> Formula:
    """n-ary conjunction that degrades gracefully to TRUE / the single operand."""
    if not args:
        return TRUE
    if len(args) == 1:
        return args[0]
    return And(tuple(args))


def disj(*args: Formula) -> Formula:
    if not args:
        return FALSE
    if len(args) == 1:
        return args[0]
    return Or(tuple(args))


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, Not):
        return (phi.arg,)
    if isinstance(phi, (And, Or)):
        return phi.args
    if isinstance(phi, Implies):
        return (phi.left, phi.right)
    return ()


def iter_atoms(phi: Formula) -> Iterator[str]:
    """Atom names in left-to-right occurrence order, with repetitions."""
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            yield node.name
        else:
            stack.extend(reversed(children(node)))


def atoms(phi: Formula) -> list[str]:
    """Free atoms of ``phi`` in order of first occurrence."""
    return list(dict.fromkeys(iter_atoms(phi)))


def size(phi: Formula) -> int:
    return 1 + sum(size(c) for c in children(phi))


def depth(phi: Formula) -> int:
    kids = children(phi)
    return 1 + max((depth(c) for c in kids), default=0)


# --------------------------------------------------------------------------
# evaluation


def _lookup(omega: Mapping[str, int], name: str) -> int:
    try:
        return omega[name]
    except KeyError:
        raise ModelMismatchError(f"atom {name!r} is not assigned") from None


def eval2(phi: Formula, omega: Mapping[str, int]) -> int:
    """Classical truth value of ``phi`` under the total assignment ``omega``."""
    if isinstance(phi, Atom):
        value = _lookup(omega, phi.name)
        if value not in (0, 1):
            raise ValueError(f"atom {phi.name!r} is not two-valued: {value!r}")
        return int(value)
    if isinstance(phi, Const):
        return int(phi.value)
    if isinstance(phi, Not):
        return 1 - eval2(phi.arg, omega)
    if isinstance(phi, And):
        return int(all(eval2(a, omega) for a in phi.args))
    if isinstance(phi, Or):
        return int(any(eval2(a, omega) for a in phi.args))
    if isinstance(phi, Implies):
        return int(not eval2(phi.left, omega) or eval2(phi.right, omega))
    raise TypeError(f"not a formula: {phi!r}")


def eval3(phi: Formula, nu: Mapping[str, int]) -> int:
    """Consensus value of ``phi`` over all two-valued completions of ``nu``.

    Only the atoms of ``phi`` that are undecided in ``nu`` are enumerated.
    """
    free = atoms(phi)
    undecided = [a for a in free if _lookup(nu, a) == U]
    if not undecided:
        return eval2(phi, nu)
    omega = {a: nu[a] for a in free}
    seen = None
    for bits in itertools.product((0, 1), repeat=len(undecided)):
        omega.update(zip(undecided, bits))
        value = eval2(phi, omega)
        if seen is None:
            seen = value
        elif value != seen:
            return U
    return seen


def truth_table(phi: Formula, parents: Sequence[str]) -> np.ndarray:
    """Vector of ``phi``'s values indexed by parent bits, first parent as MSB."""
    k = len(parents)
    index = np.arange(1 << k)
    columns = {p: ((index >> (k - 1 - j)) & 1).astype(bool) for j, p in enumerate(parents)}
    return _eval_vec(phi, columns, 1 << k).astype(np.uint8)


def _eval_vec(phi: Formula, columns: Mapping[str, np.ndarray], n: int) -> np.ndarray:
    if isinstance(phi, Atom):
        try:
            return columns[phi.name]
        except KeyError:
            raise ModelMismatchError(f"atom {phi.name!r} is not a parent") from None
    if isinstance(phi, Const):
        return np.full(n, phi.value, dtype=bool)
    if isinstance(phi, Not):
        return ~_eval_vec(phi.arg, columns, n)
    if isinstance(phi, And):
        out = _eval_vec(phi.args[0], columns, n)
        for a in phi.args[1:]:
            out = out & _eval_vec(a, columns, n)
        return out
    if isinstance(phi, Or):
        out = _eval_vec(phi.args[0], columns, n)
        for a in phi.args[1:]:
            out = out | _eval_vec(a, columns, n)
        return out
    if isinstance(phi, Implies):
        return ~_eval_vec(phi.left, columns, n) | _eval_vec(phi.right, columns, n)
    raise TypeError(f"not a formula: {phi!r}")


def consensus_table(table: np.ndarray, k: int) -> np.ndarray:
    """Lift a 2-valued truth table over ``k`` inputs to base-3 codes (digit 2 = u).

    Entry ``c`` is the consensus of ``table`` over all completions of the
    three-valued input encoded by ``c``, first input as the most significant
    digit.
    """
    t = np.asarray(table, dtype=np.uint8).reshape((2,) * k) if k else np.asarray(table, dtype=np.uint8).reshape(())
    for axis in range(k):
        lo = np.take(t, 0, axis=axis)
        hi = np.take(t, 1, axis=axis)
        und = np.where(lo == hi, lo, U).astype(np.uint8)
        t = np.concatenate([t, np.expand_dims(und, axis)], axis=axis)
    return t.reshape(-1)


# --------------------------------------------------------------------------
# transformations


def to_nnf(phi: Formula) -> Formula:
    """Equivalent formula with negation only on atoms and no implications."""
    return _nnf(phi, False)


def _nnf(phi: Formula, negate: bool) -> Formula:
    if isinstance(phi, Atom):
        return Not(phi) if negate else phi
    if isinstance(phi, Const):
        return Const(phi.value != negate)
    if isinstance(phi, Not):
        return _nnf(phi.arg, not negate)
    if isinstance(phi, And):
        args = tuple(_nnf(a, negate) for a in phi.args)
        return Or(args) if negate else And(args)
    if isinstance(phi, Or):
        args = tuple(_nnf(a, negate) for a in phi.args)
        return And(args) if negate else Or(args)
    if isinstance(phi, Implies):
        # a -> b  ==  !a | b ;  !(a -> b)  ==  a & !b
        if negate:
            return And((_nnf(phi.left, False), _nnf(phi.right, True)))
        return Or((_nnf(phi.left, True), _nnf(phi.right, False)))
    raise TypeError(f"not a formula: {phi!r}")


def is_nnf(phi: Formula) -> bool:
    if isinstance(phi, Implies):
        return False
    if isinstance(phi, Not):
        return isinstance(phi.arg, Atom)
    return all(is_nnf(c) for c in children(phi))


def substitute(phi: Formula, bindings: Mapping[str, Union[int, bool, Formula]]) -> Formula:
    """Replace bound atoms by constants (or formulas). No simplification."""
    if not bindings:
        return phi
    return _subst(phi, {k: _as_formula(v) for k, v in bindings.items()})


def _as_formula(value) -> Formula:
    if isinstance(value, (Atom, Const, Not, And, Or, Implies)):
        return value
    if value in (0, 1):
        return Const(bool(value))
    raise ValueError(f"cannot bind to {value!r}")


def _subst(phi: Formula, bindings: Mapping[str, Formula]) -> Formula:
    if isinstance(phi, Atom):
        return bindings.get(phi.name, phi)
    if isinstance(phi, Const):
        return phi
    if isinstance(phi, Not):
        return Not(_subst(phi.arg, bindings))
    if isinstance(phi, And):
        return And(tuple(_subst(a, bindings) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(_subst(a, bindings) for a in phi.args))
    return Implies(_subst(phi.left, bindings), _subst(phi.right, bindings))


def simplify(phi: Formula) -> Formula:
    """Constant folding only; never rewrites atom-only structure."""
    if isinstance(phi, (Atom, Const)):
        return phi
    if isinstance(phi, Not):
        arg = simplify(phi.arg)
        if isinstance(arg, Const):
            return Const(not arg.value)
        return Not(arg)
    if isinstance(phi, (And, Or)):
        absorbing = isinstance(phi, Or)
        kept = []
        for a in phi.args:
            a = simplify(a)
            if isinstance(a, Const):
                if a.value == absorbing:
                    return a
                continue
            kept.append(a)
        return conj(*kept) if isinstance(phi, And) else disj(*kept)
    left, right = simplify(phi.left), simplify(phi.right)
    if isinstance(left, Const):
        return right if left.value else TRUE
    if isinstance(right, Const):
        return TRUE if right.value else Not(left)
    return Implies(left, right)


def constant_value(phi: Formula) -> int | None:
    """0 or 1 if ``phi`` denotes a constant Boolean function, else None.

    Constant folding decides most cases; the remainder (e.g. ``b | !b``) is
    settled by enumerating the residual atoms.
    """
    folded = simplify(phi)
    if isinstance(folded, Const):
        return int(folded.value)
    free = atoms(folded)
    values = set()
    for bits in itertools.product((0, 1), repeat=len(free)):
        values.add(eval2(folded, dict(zip(free, bits))))
        if len(values) > 1:
            return None
    return values.pop()


# --------------------------------------------------------------------------
# polarity


class Polarity(enum.Enum):
    """Syntactic occurrence polarity of an atom."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    BOTH = "both"
    ABSENT = "absent"


class LinkType(enum.Enum):
    """Semantic role of an argument, decided by flipping it under every assignment of the others."""

    SUPPORTING = "supporting"
    ATTACKING = "attacking"
    BOTH = "both"
    NEITHER = "neither"


def syntactic_polarity(phi: Formula) -> dict[str, Polarity]:
    """Polarity of every atom occurring in ``phi``.

    Negations and implication antecedents each flip the polarity.  Atoms not
    occurring in ``phi`` are omitted (their polarity is ``ABSENT``).
    """
    seen: dict[str, set[bool]] = {}
    stack: list[tuple[Formula, bool]] = [(phi, True)]
    while stack:
        node, positive = stack.pop()
        if isinstance(node, Atom):
            seen.setdefault(node.name, set()).add(positive)
        elif isinstance(node, Not):
            stack.append((node.arg, not positive))
        elif isinstance(node, Implies):
            stack.append((node.left, not positive))
            stack.append((node.right, positive))
        else:
            stack.extend((c, positive) for c in children(node))
    result = {}
    for name in atoms(phi):
        signs = seen[name]
        if len(signs) == 2:
            result[name] = Polarity.BOTH
        else:
            result[name] = Polarity.POSITIVE if True in signs else Polarity.NEGATIVE
    return result


def is_syntactically_bipolar(phi: Formula) -> bool:
    return Polarity.BOTH not in syntactic_polarity(phi).values()


def semantic_polarity(phi: Formula, a: str) -> LinkType:
    """Classify ``a`` in ``phi`` by brute force over the other free atoms."""
    others = [x for x in atoms(phi) if x != a]
    raises = lowers = False
    for bits in itertools.product((0, 1), repeat=len(others)):
        omega = dict(zip(others, bits))
        omega[a] = 0
        low = eval2(phi, omega)
        omega[a] = 1
        high = eval2(phi, omega)
        raises |= low < high
        lowers |= low > high
        if raises and lowers:
            return LinkType.NEITHER
    if raises:
        return LinkType.SUPPORTING
    if lowers:
        return LinkType.ATTACKING
    return LinkType.BOTH


# --------------------------------------------------------------------------
# grammar

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op>->|[!&|()])|(?P<atom>[A-Za-z_][A-Za-z0-9_]*)|(?P<const>[01])(?![A-Za-z0-9_]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", column=pos + 1)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, tok, what: str) -> ParseError:
        shown = repr(tok[1]) if tok[0] != "end" else "end of formula"
        return ParseError(f"expected {what}, found {shown}", column=tok[2] + 1)

    def parse(self) -> Formula:
        phi = self.implication()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(tok, "an operator")
        return phi

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.peek()[1] == "|":
            self.take()
            args.append(self.conjunction())
        return disj(*args)

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.peek()[1] == "&":
            self.take()
            args.append(self.unary())
        return conj(*args)

    def unary(self) -> Formula:
        if self.peek()[1] == "!":
            self.take()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.take()
        kind, value, _ = tok
        if kind == "atom":
            return Atom(value)
        if kind == "const":
            return TRUE if value == "1" else FALSE
        if value == "(":
            inner = self.implication()
            close = self.take()
            if close[1] != ")":
                raise self.error(close, "')'")
            return inner
        raise self.error(tok, "an atom, constant or '('")


def parse_formula(text: str) -> Formula:
    """Parse the shared formula grammar; errors carry a 1-based column."""
    return _Parser(text).parse()


_PREC = {Implies: 1, Or: 2, And: 3, Not: 4, Atom: 5, Const: 5}


def format_formula(phi: Formula) -> str:
    """Render ``phi`` so that ``parse_formula`` rebuilds the identical AST."""
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Const):
        return "1" if phi.value else "0"
    if isinstance(phi, Not):
        return "!" + _wrap(phi.arg, _PREC[type(phi.arg)] < 4)
    if isinstance(phi, And):
        return " & ".join(_wrap(a, _PREC[type(a)] <= 3) for a in phi.args)
    if isinstance(phi, Or):
        return " | ".join(_wrap(a, _PREC[type(a)] <= 2) for a in phi.args)
    if isinstance(phi, Implies):
        return f"{_wrap(phi.left, _PREC[type(phi.left)] <= 1)} -> {format_formula(phi.right)}"
    raise TypeError(f"not a formula: {phi!r}")


def _wrap(phi: Formula, parens: bool) -> str:
    text = format_formula(phi)
    return f"({text})" if parens else text
