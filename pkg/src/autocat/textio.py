"""Line-oriented text formats: signatures, matrices, diagrams, lexicons, models.

Diagram format::

    dom: A, B^-1
    wire A, box f [A] -> [C], cup B^-1
    id

The header lists the domain interface (``^0`` omitted; ``dom:`` alone is the
empty interface).  Each further line is one slice of comma-separated items.
A slice without items is written ``id``.  Box values are free terms
(``f``, ``id(A*B)``, ``(f ; g)``, ``(f @ g)``) or matrices, either inline as
``mat(2x2; 1 0 0 1)`` or by file as ``mat(path)``.
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

from .diagram import (Box, Cap, Cup, Diagram, SignedObject, Wire, format_base,
                      format_interface, slice_cod, slice_dom)
from .errors import AutocatError, ParseError
from .models import Gen, IdTerm, Mat, Par, Seq, Signature, Term

NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_NAME_RE = re.compile(rf"^{NAME}$")


def _clean(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _lines(text: str) -> Iterable[tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), start=1):
        line = _clean(raw)
        if line:
            yield no, line


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------


def _obj_list(text: str, line: int) -> tuple[str, ...]:
    text = text.strip()
    if text in ("", "I"):
        return ()
    names = tuple(n.strip() for n in text.split(","))
    for n in names:
        if not _NAME_RE.match(n):
            raise ParseError(f"bad object name {n!r}", line)
    return names


def parse_signature(text: str) -> Signature:
    sig = Signature()
    for no, line in _lines(text):
        words = line.split()
        if words[0] == "object":
            m = re.match(rf"^object\s+({NAME})(?:\s+dim=(\d+))?$", line)
            if not m:
                raise ParseError(f"malformed object line: {line!r}", no)
            sig.add_object(m.group(1), int(m.group(2)) if m.group(2) else None)
        elif words[0] == "gen":
            m = re.match(rf"^gen\s+(\S+)\s*:\s*(.*?)\s*->\s*(.*)$", line)
            if not m:
                raise ParseError(f"malformed gen line: {line!r}", no)
            name = m.group(1)
            gen = Gen(name, _obj_list(m.group(2), no), _obj_list(m.group(3), no))
            try:
                sig.add_generator(gen)
            except AutocatError as exc:
                raise ParseError(str(exc), no) from None
        elif words[0] == "order":
            m = re.match(rf"^order\s+({NAME})\s*<=\s*({NAME})$", line)
            if not m:
                raise ParseError(f"malformed order line: {line!r}", no)
            for name in m.groups():
                if name not in sig.objects:
                    raise ParseError(f"order uses undeclared object {name}", no)
            sig.order.add((m.group(1), m.group(2)))
        else:
            raise ParseError(f"unknown declaration {words[0]!r}", no)
    return sig


def format_signature(sig: Signature) -> str:
    lines = []
    for name, dim in sig.objects.items():
        lines.append(f"object {name}" + (f" dim={dim}" if dim is not None else ""))
    for gen in sig.generators.values():
        lines.append(f"gen {gen.name} : {', '.join(gen.dom)} -> {', '.join(gen.cod)}")
    for lo, hi in sorted(sig.order):
        lines.append(f"order {lo} <= {hi}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


def _rational(tok: str, line: int | None = None) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {tok!r}", line) from None


def parse_matrix(text: str) -> Mat:
    tokens = []
    header = None
    for no, line in _lines(text):
        if header is None:
            parts = line.split()
            if len(parts) < 2 or not all(p.isdigit() for p in parts[:2]):
                raise ParseError("matrix header must be '<rows> <cols>'", no)
            header = (int(parts[0]), int(parts[1]))
            tokens.extend((t, no) for t in parts[2:])
        else:
            tokens.extend((t, no) for t in line.split())
    if header is None:
        raise ParseError("empty matrix file")
    rows, cols = header
    if len(tokens) != rows * cols:
        raise ParseError(f"expected {rows * cols} entries, found {len(tokens)}")
    vals = [_rational(t, no) for t, no in tokens]
    return Mat([vals[r * cols:(r + 1) * cols] for r in range(rows)], dom=cols, cod=rows)


def _entry(x: Any) -> str:
    return str(Fraction(x))


def format_matrix(m: Mat) -> str:
    lines = [f"{m.cod} {m.dom}"]
    for row in m.rows:
        lines.append(" ".join(_entry(x) for x in row))
    return "\n".join(lines) + "\n"


def load_matrix(path: str | Path) -> Mat:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read matrix file {path}: {exc.strerror}") from None
    return parse_matrix(text)


# ---------------------------------------------------------------------------
# Objects and terms
# ---------------------------------------------------------------------------


def parse_base(text: str, line: int | None = None) -> Any:
    text = text.strip()
    if text == "I":
        return ()
    if re.fullmatch(r"\d+", text):
        return int(text)
    names = tuple(p.strip() for p in text.split("*"))
    for n in names:
        if not _NAME_RE.match(n):
            raise ParseError(f"bad object {text!r}", line)
    return names[0] if len(names) == 1 else names


def parse_signed(text: str, line: int | None = None) -> SignedObject:
    text = text.strip()
    m = re.fullmatch(r"(.+?)\^(-?\d+)", text)
    if m:
        return SignedObject(parse_base(m.group(1), line), int(m.group(2)))
    return SignedObject(parse_base(text, line), 0)


def split_top(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside brackets and parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


class _TermParser:
    def __init__(self, text: str, sig: Signature | None, line: int | None):
        self.text = text
        self.pos = 0
        self.sig = sig
        self.line = line

    def error(self, msg: str) -> ParseError:
        return ParseError(f"{msg} in term {self.text!r}", self.line)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] == " ":
            self.pos += 1

    def parse(self) -> Term:
        term = self.term()
        self.skip()
        if self.pos != len(self.text):
            raise self.error("trailing input")
        return term

    def term(self) -> Term:
        self.skip()
        if self.text.startswith("id(", self.pos):
            end = self.text.index(")", self.pos)
            inner = self.text[self.pos + 3:end].strip()
            self.pos = end + 1
            base = parse_base(inner, self.line)
            return IdTerm(base if isinstance(base, tuple) else (base,))
        if self.pos < len(self.text) and self.text[self.pos] == "(":
            self.pos += 1
            left = self.term()
            self.skip()
            op = self.text[self.pos:self.pos + 1]
            if op not in (";", "@"):
                raise self.error("expected ';' or '@'")
            self.pos += 1
            right = self.term()
            self.skip()
            if self.text[self.pos:self.pos + 1] != ")":
                raise self.error("expected ')'")
            self.pos += 1
            if op == ";":
                if left.cod != right.dom:
                    raise self.error("composite does not type-check")
                return Seq(left, right)
            return Par(left, right)
        m = re.compile(r"[^\s();@,\[\]]+").match(self.text, self.pos)
        if not m:
            raise self.error("expected a generator")
        name = m.group(0)
        self.pos = m.end()
        if self.sig is None or name not in self.sig.generators:
            raise self.error(f"unknown generator {name!r}")
        return self.sig.generators[name]


def parse_term(text: str, sig: Signature | None, line: int | None = None) -> Term:
    return _TermParser(text.strip(), sig, line).parse()


def format_value(value: Any) -> str:
    if isinstance(value, Term):
        return str(value)
    if isinstance(value, Mat):
        body = " ".join(_entry(x) for row in value.rows for x in row)
        return f"mat({value.cod}x{value.dom}; {body})" if body else \
            f"mat({value.cod}x{value.dom};)"
    raise ValueError(f"no text form for box value of type {type(value).__name__}")


def parse_value(text: str, sig: Signature | None, base_dir: Path | None,
                line: int | None) -> Any:
    text = text.strip()
    m = re.fullmatch(r"mat\((\d+)x(\d+);(.*)\)", text)
    if m:
        rows, cols = int(m.group(1)), int(m.group(2))
        vals = [_rational(t, line) for t in m.group(3).split()]
        if len(vals) != rows * cols:
            raise ParseError(f"inline matrix needs {rows * cols} entries", line)
        return Mat([vals[r * cols:(r + 1) * cols] for r in range(rows)], dom=cols, cod=rows)
    m = re.fullmatch(r"mat\((.+)\)", text)
    if m:
        path = Path(m.group(1).strip())
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return load_matrix(path)
    return parse_term(text, sig, line)


# ---------------------------------------------------------------------------
# Diagrams
# ---------------------------------------------------------------------------


def format_item(item: Any) -> str:
    if isinstance(item, Box):
        dom = ", ".join(format_base(b) for b in item.dom_factors)
        cod = ", ".join(format_base(b) for b in item.cod_factors)
        return f"box {format_value(item.value)} [{dom}] -> [{cod}]"
    return str(item)


def format_diagram(d: Diagram) -> str:
    lines = ["dom: " + ", ".join(map(str, d.dom)) if d.dom else "dom:"]
    for items in d.slices:
        lines.append(", ".join(format_item(i) for i in items) if items else "id")
    return "\n".join(lines) + "\n"


_BOX_RE = re.compile(r"^box\s+(.*?)\s*\[(.*?)\]\s*->\s*\[(.*?)\]$")


def _factors(text: str, line: int) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(parse_base(p, line) for p in text.split(","))


def _flat_names(factors: tuple) -> tuple[str, ...]:
    return tuple(n for b in factors for n in ((b,) if isinstance(b, str) else b))


def _check_base(base: Any, sig: Signature | None, line: int) -> None:
    if sig is None or isinstance(base, int):
        return
    names = (base,) if isinstance(base, str) else base
    for n in names:
        if n not in sig.objects:
            raise ParseError(f"undeclared object {n!r}", line)


def parse_item(text: str, sig: Signature | None, base_dir: Path | None, line: int) -> Any:
    kind = text.split(None, 1)[0] if text else ""
    rest = text[len(kind):].strip()
    if kind == "wire":
        obj = parse_signed(rest, line)
        _check_base(obj.base, sig, line)
        return Wire(obj)
    if kind in ("cup", "cap"):
        obj = parse_signed(rest, line)
        _check_base(obj.base, sig, line)
        return (Cup if kind == "cup" else Cap)(obj.base, obj.winding)
    if kind == "box":
        m = _BOX_RE.match(text)
        if not m:
            raise ParseError(f"malformed box item: {text!r}", line)
        dom, cod = _factors(m.group(2), line), _factors(m.group(3), line)
        name = m.group(1).strip()
        if sig is None and _NAME_RE.match(name) and name not in ("mat", "id") \
                and all(isinstance(b, (str, tuple)) for b in dom + cod):
            # without a signature a bare generator is typed by its factors
            val = Gen(name, _flat_names(dom), _flat_names(cod))
        else:
            val = parse_value(m.group(1), sig, base_dir, line)
        for b in dom + cod:
            _check_base(b, sig, line)
        try:
            return Box(val, dom, cod)
        except AutocatError as exc:
            raise ParseError(str(exc), line) from None
    raise ParseError(f"unknown item {text!r}", line)


def parse_diagram(text: str, sig: Signature | None = None,
                  base_dir: str | Path | None = None) -> Diagram:
    base_dir = Path(base_dir) if base_dir is not None else None
    lines = list(_lines(text))
    if not lines or not lines[0][1].startswith("dom:"):
        raise ParseError("diagram must start with a 'dom:' header", lines[0][0] if lines else 1)
    no, header = lines[0]
    body = header[4:].strip()
    dom = tuple(parse_signed(p, no) for p in split_top(body)) if body else ()
    for o in dom:
        _check_base(o.base, sig, no)
    slices = []
    current = dom
    for no, line in lines[1:]:
        items = () if line == "id" else \
            tuple(parse_item(p, sig, base_dir, no) for p in split_top(line))
        upper = slice_dom(items)
        if upper != current:
            raise ParseError(f"slice expects {format_interface(upper)} but receives "
                             f"{format_interface(current)}", no)
        slices.append(items)
        current = slice_cod(items)
    try:
        return Diagram(dom, slices)
    except AutocatError as exc:
        raise ParseError(str(exc)) from None


def load_diagram(path: str | Path, sig: Signature | None = None) -> Diagram:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_diagram(text, sig, path.parent)


# ---------------------------------------------------------------------------
# Lexicons and interpretations
# ---------------------------------------------------------------------------


@dataclass
class LexiconEntry:
    word: str
    type_text: str
    meaning: Mat | None = None


@dataclass
class Interpretation:
    """Dimensions for basic objects and matrices for generators."""

    dims: dict[str, int] = field(default_factory=dict)
    mats: dict[str, Mat] = field(default_factory=dict)


_WORD_RE = re.compile(r'^word\s+"([^"]*)"\s*:\s*(.*?)(?:\s*=\s*matrix\s+(.+))?$')


def parse_lexicon(text: str, base_dir: str | Path | None = None) -> dict[str, LexiconEntry]:
    base_dir = Path(base_dir) if base_dir is not None else None
    out: dict[str, LexiconEntry] = {}
    for no, line in _lines(text):
        m = _WORD_RE.match(line)
        if not m:
            raise ParseError(f"malformed lexicon line: {line!r}", no)
        word, type_text, mpath = m.groups()
        meaning = None
        if mpath:
            path = Path(shlex.split(mpath)[0])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            meaning = load_matrix(path)
        out[word] = LexiconEntry(word, type_text.strip(), meaning)
    return out


def load_lexicon(path: str | Path) -> dict[str, LexiconEntry]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_lexicon(text, path.parent)


def parse_interpretation(text: str, base_dir: str | Path | None = None) -> Interpretation:
    base_dir = Path(base_dir) if base_dir is not None else None
    interp = Interpretation()
    for no, line in _lines(text):
        m = re.match(rf"^map\s+object\s+({NAME})\s*->\s*dim=(\d+)$", line)
        if m:
            interp.dims[m.group(1)] = int(m.group(2))
            continue
        m = re.match(r"^map\s+gen\s+(\S+)\s*->\s*matrix\s+(.+)$", line)
        if m:
            path = Path(m.group(2).strip())
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            interp.mats[m.group(1)] = load_matrix(path)
            continue
        raise ParseError(f"malformed interpretation line: {line!r}", no)
    return interp


def load_interpretation(path: str | Path) -> Interpretation:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_interpretation(text, path.parent)


def load_signature(path: str | Path) -> Signature:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_signature(text)
