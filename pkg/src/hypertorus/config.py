"""Line-oriented ``.action`` files describing a group action on a torus.

Example::

    torus g=3 periods=tau,tau,tau2
    extend 1/2,0,1/2,0,0,0
    gen r linear=[[0,1,0],[-1,0,0],[0,0,1]] trans=0,0,0,0,1/4,0
    relation r^4
    expect order=8 free=true

Directives:

``torus g=<int> periods=<name>,...``
    must come first.
``extend <2g rationals>``
    add a vector to the lattice (translations are in (u, v) pairs per
    complex coordinate).
``module multiplier=[rows] [real] gens=<vec>;<vec> [plain=<vec>;...]``
    replace the base lattice by the Z[x]/(x^2+1)-module generated by
    ``gens`` (x acting as the multiplier) plus the plain vectors.
``gen <name> [real] [basis=module] linear=[rows] trans=<2g rationals>``
    a generator; ``linear`` is g x g in complex coordinates unless ``real``
    is given (then 2g x 2g).  With ``basis=module`` the matrix and
    translation are written in the module basis ``(g1, x g1, ..., plain)``.
``relation <word>``
    a word such as ``(r*s)^2`` expected to be trivial.
``expect key=value ...``
    expected outcomes, see :data:`EXPECT_KEYS`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError, SemanticError
from .exactmath import Mat
from .group import parse_word

__all__ = ["ActionConfig", "EXPECT_KEYS", "GeneratorSpec", "ModuleSpec", "format_config", "parse"]

_INT_KEYS = ("order", "deform_dim", "hodge_family_dim", "lattice_index", "classes")
_BOOL_KEYS = ("free", "no_translations", "relations")
EXPECT_KEYS = _INT_KEYS + _BOOL_KEYS + ("eigen_dims",)

_RAT = re.compile(r"^[+-]?\d+(?:/\d+)?$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")
_GEN_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class ModuleSpec:
    multiplier: Mat
    real: bool
    generators: tuple[tuple[Fraction, ...], ...]
    plain: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    linear: Mat
    translation: tuple[Fraction, ...]
    real: bool = False
    basis: str = "ambient"
    line: int = 0

    def key(self):
        return (self.name, self.linear, self.translation, self.real, self.basis)


@dataclass
class ActionConfig:
    g: int
    periods: tuple[str, ...]
    extensions: list[tuple[Fraction, ...]] = field(default_factory=list)
    module: ModuleSpec | None = None
    generators: list[GeneratorSpec] = field(default_factory=list)
    relations: list[str] = field(default_factory=list)
    expectations: dict = field(default_factory=dict)

    def structure(self) -> tuple:
        """Comparable summary ignoring source line numbers."""
        return (
            self.g,
            self.periods,
            tuple(self.extensions),
            self.module,
            tuple(gen.key() for gen in self.generators),
            tuple(self.relations),
            tuple(self.expectations.items()),
        )


# --------------------------------------------------------------------------
# low-level scanning


def _tokens(line: str, lineno: int) -> list[tuple[str, int]]:
    """Whitespace-separated tokens; whitespace inside brackets is kept."""
    out = []
    depth = 0
    start = None
    for pos, ch in enumerate(line + " "):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ']'", lineno, pos + 1)
        if ch.isspace() and depth == 0:
            if start is not None:
                out.append((line[start:pos], start + 1))
                start = None
        elif start is None:
            start = pos
    if depth:
        raise ParseError("unclosed '['", lineno, len(line) + 1)
    return out


def _rational(text: str, lineno: int, col: int) -> Fraction:
    text = text.strip().replace("−", "-")
    if not _RAT.match(text):
        raise ParseError(f"expected a rational number, got {text!r}", lineno, col)
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ParseError("zero denominator", lineno, col)
    return Fraction(int(num), int(den) if den else 1)


def _vector(text: str, lineno: int, col: int) -> tuple[Fraction, ...]:
    out = []
    offset = 0
    for part in text.split(","):
        out.append(_rational(part, lineno, col + offset))
        offset += len(part) + 1
    return tuple(out)


def _matrix(text: str, lineno: int, col: int) -> Mat:
    body = text.replace(" ", "")
    if not (body.startswith("[[") and body.endswith("]]")):
        raise ParseError("matrix must look like [[a,b],[c,d]]", lineno, col)
    rows = []
    pos = 1
    inner = body[1:-1]
    for m in re.finditer(r"\[([^\[\]]*)\]|(,)|([^,\[\]]+)", inner):
        if m.group(3) is not None:
            raise ParseError(f"unexpected {m.group(3)!r} in matrix", lineno, col + pos + m.start())
        if m.group(1) is not None:
            if not m.group(1):
                raise ParseError("empty matrix row", lineno, col + pos + m.start())
            rows.append(_vector(m.group(1), lineno, col + pos + m.start() + 1))
    if any(len(r) != len(rows[0]) for r in rows):
        raise SemanticError("matrix rows have different lengths", lineno)
    return Mat(rows)


def _options(tokens, lineno, allowed_flags=(), allowed_keys=()):
    flags, kv = set(), {}
    for tok, col in tokens:
        if "=" in tok:
            key, _, value = tok.partition("=")
            if key not in allowed_keys:
                raise ParseError(f"unknown option {key!r}", lineno, col)
            if key in kv:
                raise ParseError(f"duplicate option {key!r}", lineno, col)
            kv[key] = (value, col + len(key) + 1)
        elif tok in allowed_flags:
            flags.add(tok)
        else:
            raise ParseError(f"unexpected token {tok!r}", lineno, col)
    return flags, kv


def _require(kv, key, lineno, col):
    if key not in kv:
        raise ParseError(f"missing {key}=...", lineno, col)
    return kv[key]


# --------------------------------------------------------------------------


def parse(text: str) -> ActionConfig:
    cfg: ActionConfig | None = None
    relation_lines: list[tuple[str, int, int]] = []
    names: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        toks = _tokens(line, lineno)
        if not toks:
            continue
        head, hcol = toks[0]
        rest = toks[1:]

        if head != "torus" and cfg is None:
            raise ParseError("the first directive must be 'torus'", lineno, hcol)

        if head == "torus":
            if cfg is not None:
                raise ParseError("duplicate 'torus' directive", lineno, hcol)
            _, kv = _options(rest, lineno, allowed_keys=("g", "periods"))
            gval, gcol = _require(kv, "g", lineno, hcol)
            if not gval.isdigit() or int(gval) < 1:
                raise ParseError(f"g must be a positive integer, got {gval!r}", lineno, gcol)
            pval, pcol = _require(kv, "periods", lineno, hcol)
            periods = tuple(p.strip() for p in pval.split(","))
            for p in periods:
                if not _NAME.match(p):
                    raise ParseError(f"bad period name {p!r}", lineno, pcol)
            g = int(gval)
            if len(periods) != g:
                raise SemanticError(f"{len(periods)} period names given for g={g}", lineno)
            cfg = ActionConfig(g, periods)

        elif head == "extend":
            if len(rest) != 1:
                raise ParseError("extend takes one comma-separated vector", lineno, hcol)
            v = _vector(rest[0][0], lineno, rest[0][1])
            if len(v) != 2 * cfg.g:
                raise SemanticError(f"extension vector has length {len(v)}, expected {2 * cfg.g}", lineno)
            cfg.extensions.append(v)

        elif head == "module":
            if cfg.module is not None:
                raise ParseError("duplicate 'module' directive", lineno, hcol)
            flags, kv = _options(rest, lineno, ("real",), ("multiplier", "gens", "plain"))
            mval, mcol = _require(kv, "multiplier", lineno, hcol)
            M = _matrix(mval, lineno, mcol)
            size = 2 * cfg.g if "real" in flags else cfg.g
            if M.shape != (size, size):
                raise SemanticError(f"multiplier must be {size}x{size}, got {M.rows}x{M.cols}", lineno)
            gval, gcol = _require(kv, "gens", lineno, hcol)
            gens = tuple(_vector(part, lineno, gcol) for part in gval.split(";"))
            plain = ()
            if "plain" in kv:
                pval, pcol = kv["plain"]
                plain = tuple(_vector(part, lineno, pcol) for part in pval.split(";"))
            for v in gens + plain:
                if len(v) != 2 * cfg.g:
                    raise SemanticError(f"module vector has length {len(v)}, expected {2 * cfg.g}", lineno)
            cfg.module = ModuleSpec(M, "real" in flags, gens, plain)

        elif head == "gen":
            if not rest:
                raise ParseError("gen needs a name", lineno, hcol)
            name, ncol = rest[0]
            if not _GEN_NAME.match(name):
                raise ParseError(f"bad generator name {name!r}", lineno, ncol)
            if name in names:
                raise SemanticError(f"duplicate generator name {name!r}", lineno)
            names.add(name)
            flags, kv = _options(rest[1:], lineno, ("real",), ("linear", "trans", "basis"))
            basis = "ambient"
            if "basis" in kv:
                basis, bcol = kv["basis"]
                if basis not in ("ambient", "module"):
                    raise ParseError(f"basis must be 'ambient' or 'module', got {basis!r}", lineno, bcol)
                if basis == "module" and cfg.module is None:
                    raise SemanticError("basis=module needs a preceding 'module' directive", lineno)
                if basis == "module" and "real" not in flags:
                    raise SemanticError("basis=module requires the 'real' keyword", lineno)
            lval, lcol = _require(kv, "linear", lineno, hcol)
            M = _matrix(lval, lineno, lcol)
            real = "real" in flags
            size = 2 * cfg.g if real else cfg.g
            if M.shape != (size, size):
                kind = "real" if real else "complex"
                raise SemanticError(
                    f"{kind} linear part of {name!r} must be {size}x{size}, got {M.rows}x{M.cols}", lineno
                )
            tval, tcol = _require(kv, "trans", lineno, hcol)
            t = _vector(tval, lineno, tcol)
            if len(t) != 2 * cfg.g:
                raise SemanticError(f"translation of {name!r} has length {len(t)}, expected {2 * cfg.g}", lineno)
            cfg.generators.append(GeneratorSpec(name, M, t, real, basis, lineno))

        elif head == "relation":
            if not rest:
                raise ParseError("relation needs a word", lineno, hcol)
            wcol = rest[0][1]
            word = line[wcol - 1 :].strip()
            try:
                parse_word(word)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, wcol) from None
            relation_lines.append((word, lineno, wcol))
            cfg.relations.append(word)

        elif head == "expect":
            for tok, col in rest:
                key, eq, value = tok.partition("=")
                if not eq:
                    raise ParseError(f"expected key=value, got {tok!r}", lineno, col)
                if key not in EXPECT_KEYS:
                    raise ParseError(f"unknown expectation {key!r}", lineno, col)
                vcol = col + len(key) + 1
                cfg.expectations[key] = _expect_value(key, value, lineno, vcol)

        else:
            raise ParseError(f"unknown directive {head!r}", lineno, hcol)

    if cfg is None:
        raise ParseError("missing 'torus' directive", 1, 1)
    if not cfg.generators:
        raise SemanticError("no generators defined")
    for word, lineno, col in relation_lines:
        for sym, _ in parse_word(word):
            if sym not in names:
                raise SemanticError(f"relation uses unknown generator {sym!r}", lineno)
    return cfg


def _expect_value(key, value, lineno, col):
    if key in _INT_KEYS:
        if not value.isdigit():
            raise ParseError(f"{key} expects a non-negative integer", lineno, col)
        return int(value)
    if key in _BOOL_KEYS:
        if value not in ("true", "false"):
            raise ParseError(f"{key} expects true or false", lineno, col)
        return value == "true"
    parts = value.split(",")
    if len(parts) != 4 or not all(p.isdigit() for p in parts):
        raise ParseError("eigen_dims expects four integers (i,-i,1,-1)", lineno, col)
    return tuple(int(p) for p in parts)


# --------------------------------------------------------------------------


def _fmt_vec(v) -> str:
    return ",".join(str(x) for x in v)


def _fmt_mat(M: Mat) -> str:
    return "[" + ",".join("[" + _fmt_vec(M.row(i)) + "]" for i in range(M.rows)) + "]"


def _fmt_expect(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return _fmt_vec(value)
    return str(value)


def format_config(cfg: ActionConfig) -> str:
    """Serialize a config back to the ``.action`` grammar."""
    lines = [f"torus g={cfg.g} periods={','.join(cfg.periods)}"]
    if cfg.module is not None:
        m = cfg.module
        parts = [f"module multiplier={_fmt_mat(m.multiplier)}"]
        if m.real:
            parts.append("real")
        parts.append("gens=" + ";".join(_fmt_vec(v) for v in m.generators))
        if m.plain:
            parts.append("plain=" + ";".join(_fmt_vec(v) for v in m.plain))
        lines.append(" ".join(parts))
    for v in cfg.extensions:
        lines.append(f"extend {_fmt_vec(v)}")
    for gen in cfg.generators:
        parts = ["gen", gen.name]
        if gen.real:
            parts.append("real")
        if gen.basis != "ambient":
            parts.append(f"basis={gen.basis}")
        parts.append(f"linear={_fmt_mat(gen.linear)}")
        parts.append(f"trans={_fmt_vec(gen.translation)}")
        lines.append(" ".join(parts))
    for word in cfg.relations:
        lines.append(f"relation {word}")
    if cfg.expectations:
        lines.append("expect " + " ".join(f"{k}={_fmt_expect(v)}" for k, v in cfg.expectations.items()))
    return "\n".join(lines) + "\n"
