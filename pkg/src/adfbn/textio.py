"""Readers and writers for ``.adf`` and ``.bnet`` files, plus JSON and DOT exports.

ADF files hold statements terminated by ``.``::

    s(a).            # declares atom a
    ac(a, !b & c).   # acceptance condition of a

BNet files start with a ``targets, factors`` header followed by one
``<var>, <formula>`` line per target.  Variables that only appear as factors
become input nodes (``f_v = v``).  ``#`` starts a comment in both formats.
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from .dynamics import Scheme, Stg, TrapReport, attractor_indices, trap_spaces
from .errors import ParseError, PreconditionError
from .formula import ATOM_RE, Atom, Formula, atoms as free_atoms, format_formula, parse_formula
from .model import Adf, BooleanNetwork, Classification, adf_to_bn, bn_to_adf, classify
from .semantics import DEFAULT_BUDGET, Budget, all_semantics, render
from .structure import existence_report

_HEADER_RE = re.compile(r"\s*targets\s*,\s*factors\s*\Z", re.IGNORECASE)


def _blank_comments(text: str) -> str:
    """Replace comments by spaces so that character offsets survive."""
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


class _AdfScanner:
    def __init__(self, text: str):
        self.raw = text
        self.text = _blank_comments(text)
        self.pos = 0

    def error(self, message: str, offset: int | None = None) -> ParseError:
        line, col = _position(self.text, self.pos if offset is None else offset)
        return ParseError(message, line, col)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if not self.text.startswith(ch, self.pos):
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += len(ch)

    def name(self) -> tuple[str, int]:
        self.skip_ws()
        m = re.compile(r"[A-Za-z_][A-Za-z0-9_]*").match(self.text, self.pos)
        if not m:
            raise self.error("expected an atom name")
        self.pos = m.end()
        return m.group(), m.start()

    def formula_text(self) -> tuple[str, int]:
        """Text up to the ')' closing the enclosing statement."""
        self.skip_ws()
        depth = 0
        start = self.pos
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    return self.text[start:self.pos], start
                depth -= 1
            self.pos += 1
        raise self.error("unterminated ac(...) statement", start)


def parse_adf(text: str) -> Adf:
    sc = _AdfScanner(text)
    declared: dict[str, int] = {}
    conditions: dict[str, tuple[Formula, int]] = {}
    while True:
        sc.skip_ws()
        if sc.pos >= len(sc.text):
            break
        keyword, at = sc.name()
        if keyword == "s":
            sc.expect("(")
            atom, atom_at = sc.name()
            sc.expect(")")
            sc.expect(".")
            if atom in declared:
                raise sc.error(f"atom {atom!r} declared twice", atom_at)
            declared[atom] = atom_at
        elif keyword == "ac":
            sc.expect("(")
            atom, atom_at = sc.name()
            sc.expect(",")
            body, body_at = sc.formula_text()
            sc.expect(")")
            sc.expect(".")
            if atom in conditions:
                raise sc.error(f"duplicate acceptance condition for {atom!r}", atom_at)
            try:
                phi = parse_formula(body)
            except ParseError as exc:
                raise sc.error(exc.message, body_at + (exc.column or 1) - 1) from None
            conditions[atom] = (phi, atom_at)
        else:
            raise sc.error(f"unknown statement {keyword!r}; expected s(...) or ac(...)", at)

    for atom, (phi, at) in conditions.items():
        if atom not in declared:
            raise sc.error(f"acceptance condition for undeclared atom {atom!r}", at)
        for p in free_atoms(phi):
            if p not in declared:
                raise sc.error(f"condition of {atom!r} mentions undeclared atom {p!r}", at)
    for atom, at in declared.items():
        if atom not in conditions:
            raise sc.error(f"atom {atom!r} has no acceptance condition", at)
    names = tuple(declared)
    return Adf.from_conditions({a: conditions[a][0] for a in names}, names)


def parse_bnet(text: str) -> BooleanNetwork:
    functions: dict[str, Formula] = {}
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if not header_seen:
            if not _HEADER_RE.match(line):
                raise ParseError("expected header 'targets, factors'", lineno, 1)
            header_seen = True
            continue
        if "," not in line:
            raise ParseError("expected '<target>, <formula>'", lineno, 1)
        target, body = line.split(",", 1)
        name = target.strip()
        if not ATOM_RE.match(name):
            raise ParseError(f"invalid target name {name!r}", lineno, 1)
        if name in functions:
            raise ParseError(f"duplicate target {name!r}", lineno, 1)
        try:
            functions[name] = parse_formula(body)
        except ParseError as exc:
            raise ParseError(exc.message, lineno, len(target) + 1 + (exc.column or 1)) from None
    if not header_seen:
        raise ParseError("empty file: expected header 'targets, factors'", 1, 1)
    names = list(functions)
    for v in list(functions):
        for p in free_atoms(functions[v]):
            if p not in functions:
                functions[p] = Atom(p)
                names.append(p)
    return BooleanNetwork.from_functions(functions, names)


def format_adf(D: Adf) -> str:
    lines = [f"s({a})." for a in D.atoms]
    lines += [f"ac({a}, {format_formula(D.conditions[a])})." for a in D.atoms]
    return "\n".join(lines) + "\n"


def format_bnet(M: BooleanNetwork) -> str:
    lines = ["targets, factors"]
    lines += [f"{v}, {format_formula(M.functions[v])}" for v in M.variables]
    return "\n".join(lines) + "\n"


def detect_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".adf", ".bnet"):
        return suffix[1:]
    raise ValueError(f"cannot tell the format of {str(path)!r}; use --format adf|bnet")


def load(path: str | Path, fmt: str | None = None) -> Adf | BooleanNetwork:
    fmt = fmt or detect_format(path)
    text = Path(path).read_text(encoding="utf-8")
    return parse_adf(text) if fmt == "adf" else parse_bnet(text)


# --------------------------------------------------------------------------
# exports


def stg_to_dot(G: Stg) -> str:
    """DOT digraph; attractor states are drawn with a double border."""
    in_attractor = {i for comp in attractor_indices(G) for i in comp}

    def node(i: int) -> str:
        label = G.label(i)
        return label if label else '""'

    lines = ["digraph stg {", f'  label="{G.scheme.value} {",".join(G.variables)}";']
    for i in range(len(G)):
        attr = " [peripheries=2]" if i in in_attractor else ""
        lines.append(f"  {node(i)}{attr};")
    for i, j in sorted(G.edges()):
        lines.append(f"  {node(i)} -> {node(j)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def classification_dict(c: Classification) -> dict[str, Any]:
    return {
        "bipolar": c.bipolar,
        "links": [{"source": u, "target": v, "type": t.value} for (u, v), t in c.per_link.items()],
    }


def analysis_report(
    model: Adf | BooleanNetwork, scheme: Scheme | str = Scheme.SYNC, budget: Budget = DEFAULT_BUDGET
) -> dict[str, Any]:
    """Semantics sets, trap report, existence report and classification in one document."""
    D = model if isinstance(model, Adf) else bn_to_adf(model)
    M = model if isinstance(model, BooleanNetwork) else adf_to_bn(model)
    try:
        existence: dict[str, Any] | None = existence_report(M, budget).as_dict()
    except PreconditionError:
        existence = None  # not sign-definite: cycle signs are undefined
    return {
        "atoms": list(D.atoms),
        "semantics": {sigma.value: [render(v) for v in models] for sigma, models in all_semantics(D, budget).items()},
        "trap_report": trap_spaces(M, scheme, budget).as_dict(),
        "existence": existence,
        "classification": classification_dict(classify(D)),
    }


def to_json(doc: Any) -> str:
    if isinstance(doc, TrapReport) or hasattr(doc, "as_dict"):
        doc = doc.as_dict()
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
