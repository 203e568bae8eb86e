"""Binding signatures over a base-plus-arrow sort grammar.

A signature declares, for a type system, a family of constructor schemas.
Each schema input carries the list of sorts it binds, so the signature
fully determines the well-scoped syntax built in :mod:`bindsig.term`.
Infinite constructor families (type-indexed application, numerals) are
finitely many *parameterized* schemas whose arity is a sort/nat template;
a concrete arity is produced by :func:`instantiate`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import (
    DuplicateName,
    MalformedSort,
    ParamArityMismatch,
    ParamKindMismatch,
    ParseError,
    TypeSystemMismatch,
    UnknownBuiltin,
    UnknownOp,
)

__all__ = [
    "TypeSystem",
    "BaseSort",
    "ArrowSort",
    "SortRef",
    "Sort",
    "Param",
    "Input",
    "Arity",
    "ConstructorSchema",
    "Signature",
    "UNTYPED",
    "STAR",
    "make_signature",
    "sum_signatures",
    "instantiate",
    "builtin",
    "parse_signature",
    "print_signature",
    "parse_sort",
    "print_sort",
    "sorts_up_to_depth",
    "sort_depth",
]


# ---------------------------------------------------------------------------
# Sorts


@dataclass(frozen=True, slots=True)
class TypeSystem:
    """Finite base sorts, optionally closed under a binary arrow."""

    base_sorts: tuple[str, ...]
    arrow_enabled: bool = False

    def __post_init__(self):
        seen = set()
        for name in self.base_sorts:
            if not name:
                raise MalformedSort("empty base sort name")
            if name in seen:
                raise DuplicateName(f"base sort {name!r} declared twice")
            seen.add(name)

    @property
    def untyped(self) -> bool:
        return len(self.base_sorts) == 1 and not self.arrow_enabled

    def single_sort(self) -> "BaseSort":
        if not self.untyped:
            raise TypeSystemMismatch("type system is not single-sorted")
        return BaseSort(self.base_sorts[0])


@dataclass(frozen=True, slots=True)
class BaseSort:
    name: str


@dataclass(frozen=True, slots=True)
class ArrowSort:
    domain: "Sort"
    codomain: "Sort"


@dataclass(frozen=True, slots=True)
class SortRef:
    """Occurrence of a schema sort parameter inside an arity template."""

    index: int


Sort = Union[BaseSort, ArrowSort]
# Templates additionally admit SortRef leaves, also under arrows.
SortTemplate = Union[BaseSort, ArrowSort, SortRef]

UNTYPED = TypeSystem(("*",))
STAR = BaseSort("*")


def check_sort(types: TypeSystem, sort: SortTemplate) -> None:
    """Raise MalformedSort unless ``sort`` is well-formed in ``types``."""
    if isinstance(sort, BaseSort):
        if sort.name not in types.base_sorts:
            raise MalformedSort(f"unknown base sort {sort.name!r}")
    elif isinstance(sort, ArrowSort):
        if not types.arrow_enabled:
            raise MalformedSort("arrow sort in a type system without arrows")
        check_sort(types, sort.domain)
        check_sort(types, sort.codomain)
    elif isinstance(sort, SortRef):
        pass
    else:
        raise MalformedSort(f"not a sort: {sort!r}")


def sort_depth(sort: Sort) -> int:
    if isinstance(sort, BaseSort):
        return 0
    return 1 + max(sort_depth(sort.domain), sort_depth(sort.codomain))


def sorts_up_to_depth(types: TypeSystem, depth: int) -> list[Sort]:
    """All sorts of arrow-nesting depth <= depth, in a fixed order.

    Depth 0 lists base sorts in declaration order; each further level
    appends the new arrows ordered by (domain position, codomain position)
    in the list built so far.  The order is part of the enumeration
    contract, so golden outputs stay stable.
    """
    out: list[Sort] = [BaseSort(n) for n in types.base_sorts]
    if not types.arrow_enabled:
        return out
    for level in range(1, depth + 1):
        prev = list(out)
        for a in prev:
            for b in prev:
                if max(sort_depth(a), sort_depth(b)) == level - 1:
                    out.append(ArrowSort(a, b))
    return out


# ---------------------------------------------------------------------------
# Schemas and signatures


@dataclass(frozen=True, slots=True)
class Param:
    """Schema parameter declaration; kind is ``"sort"`` or ``"nat"``."""

    name: str
    kind: str

    def __post_init__(self):
        if self.kind not in ("sort", "nat"):
            raise ParamKindMismatch(f"unknown parameter kind {self.kind!r}")


@dataclass(frozen=True, slots=True)
class Input:
    """One constructor input: the sorts it binds and the sort it expects."""

    bound: tuple[SortTemplate, ...]
    sort: SortTemplate


@dataclass(frozen=True, slots=True)
class Arity:
    inputs: tuple[Input, ...]
    output: Sort


@dataclass(frozen=True, slots=True)
class ConstructorSchema:
    """Named constructor with a (possibly parameterized) arity template."""

    name: str
    params: tuple[Param, ...]
    inputs: tuple[Input, ...]
    output: SortTemplate

    def __post_init__(self):
        seen = set()
        for p in self.params:
            if p.name in seen:
                raise DuplicateName(f"parameter {p.name!r} declared twice in {self.name}")
            seen.add(p.name)


def _subst_template(tpl: SortTemplate, args: tuple) -> Sort:
    if isinstance(tpl, SortRef):
        return args[tpl.index]
    if isinstance(tpl, ArrowSort):
        return ArrowSort(_subst_template(tpl.domain, args), _subst_template(tpl.codomain, args))
    return tpl


def instantiate(schema: ConstructorSchema, args: Sequence, types: TypeSystem | None = None) -> Arity:
    """Concrete arity of ``schema`` at the parameter instantiation ``args``.

    Sort parameters take a Sort, nat parameters a non-negative int.  When
    ``types`` is given the resulting sorts are checked against it.
    """
    args = tuple(args)
    if len(args) != len(schema.params):
        raise ParamArityMismatch(
            f"{schema.name} expects {len(schema.params)} parameter(s), got {len(args)}"
        )
    for p, a in zip(schema.params, args):
        if p.kind == "sort" and not isinstance(a, (BaseSort, ArrowSort)):
            raise ParamKindMismatch(f"parameter {p.name} of {schema.name} expects a sort")
        if p.kind == "nat" and not (isinstance(a, int) and a >= 0):
            raise ParamKindMismatch(f"parameter {p.name} of {schema.name} expects a natural")
    inputs = tuple(
        Input(tuple(_subst_template(b, args) for b in inp.bound), _subst_template(inp.sort, args))
        for inp in schema.inputs
    )
    output = _subst_template(schema.output, args)
    arity = Arity(inputs, output)
    if types is not None:
        for inp in arity.inputs:
            for b in inp.bound:
                check_sort(types, b)
            check_sort(types, inp.sort)
        check_sort(types, arity.output)
    return arity


@dataclass(frozen=True, slots=True)
class Signature:
    """A type system plus constructor schemas with pairwise-distinct names.

    Immutable after construction; the private cache only memoizes pure
    lookups and is excluded from equality and hashing.
    """

    types: TypeSystem
    schemas: tuple[ConstructorSchema, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def schema(self, name: str) -> ConstructorSchema:
        table = self._cache.get("by_name")
        if table is None:
            table = {s.name: s for s in self.schemas}
            self._cache["by_name"] = table
        try:
            return table[name]
        except KeyError:
            raise UnknownOp(f"unknown operator {name!r}") from None

    def arity(self, name: str, params: tuple) -> Arity:
        key = ("arity", name, params)
        hit = self._cache.get(key)
        if hit is None:
            hit = instantiate(self.schema(name), params, self.types)
            self._cache[key] = hit
        return hit

    @property
    def parameterized(self) -> bool:
        return any(s.params for s in self.schemas)


def make_signature(types: TypeSystem, schemas: Iterable[ConstructorSchema]) -> Signature:
    """Validate and assemble a signature.

    Schema arity templates are checked structurally against ``types``;
    parameter-free schemas are additionally spot-instantiated.
    """
    schemas = tuple(schemas)
    seen = set()
    for s in schemas:
        if s.name in seen:
            raise DuplicateName(f"operator {s.name!r} declared twice")
        seen.add(s.name)
        for i, p in enumerate(s.params):
            if p.kind not in ("sort", "nat"):
                raise ParamKindMismatch(f"{s.name}: bad parameter kind {p.kind!r}")
        for inp in s.inputs:
            for b in inp.bound:
                _check_template(types, s, b)
            _check_template(types, s, inp.sort)
        _check_template(types, s, s.output)
        if not s.params:
            instantiate(s, (), types)
    return Signature(types, schemas)


def _check_template(types: TypeSystem, schema: ConstructorSchema, tpl: SortTemplate) -> None:
    if isinstance(tpl, SortRef):
        if not (0 <= tpl.index < len(schema.params)):
            raise MalformedSort(f"{schema.name}: parameter reference out of range")
        if schema.params[tpl.index].kind != "sort":
            raise ParamKindMismatch(
                f"{schema.name}: parameter {schema.params[tpl.index].name} used as a sort"
            )
        return
    if isinstance(tpl, ArrowSort):
        if not types.arrow_enabled:
            raise MalformedSort(f"{schema.name}: arrow sort but arrows are disabled")
        _check_template(types, schema, tpl.domain)
        _check_template(types, schema, tpl.codomain)
        return
    check_sort(types, tpl)


def sum_signatures(a: Signature, b: Signature) -> Signature:
    """Coproduct of two signatures over the same type system."""
    if a.types != b.types:
        raise TypeSystemMismatch("summed signatures must share their type system")
    names_a = {s.name for s in a.schemas}
    for s in b.schemas:
        if s.name in names_a:
            raise DuplicateName(f"operator {s.name!r} occurs in both summands")
    return Signature(a.types, a.schemas + b.schemas)


def normalize(sig: Signature) -> Signature:
    """Schemas re-ordered by name; used to compare sums up to ordering."""
    return Signature(sig.types, tuple(sorted(sig.schemas, key=lambda s: s.name)))


# ---------------------------------------------------------------------------
# Builtin signatures


def _schema(name, inputs, output, params=()):
    return ConstructorSchema(
        name,
        tuple(params),
        tuple(Input(tuple(b), s) for b, s in inputs),
        output,
    )


def _untyped_schema(name, binder_counts):
    return _schema(name, [((STAR,) * n, STAR) for n in binder_counts], STAR)


def builtin(name: str) -> Signature:
    """One of the stock signatures: ulc, fol, ll, stlc, pcf, nat."""
    if name == "ulc":
        return make_signature(
            UNTYPED,
            [_untyped_schema("app", [0, 0]), _untyped_schema("abs", [1])],
        )
    if name == "nat":
        return make_signature(
            UNTYPED,
            [_untyped_schema("zero", []), _untyped_schema("succ", [0])],
        )
    if name == "fol":
        return make_signature(
            UNTYPED,
            [
                _untyped_schema("top", []),
                _untyped_schema("bot", []),
                _untyped_schema("neg", [0]),
                _untyped_schema("and", [0, 0]),
                _untyped_schema("or", [0, 0]),
                _untyped_schema("imp", [0, 0]),
                _untyped_schema("forall", [1]),
                _untyped_schema("exists", [1]),
            ],
        )
    if name == "ll":
        return make_signature(
            UNTYPED,
            [
                _untyped_schema("top", []),
                _untyped_schema("bot", []),
                _untyped_schema("zero", []),
                _untyped_schema("one", []),
                _untyped_schema("bang", [0]),
                _untyped_schema("whynot", [0]),
                _untyped_schema("with", [0, 0]),
                _untyped_schema("parr", [0, 0]),
                _untyped_schema("tensor", [0, 0]),
                _untyped_schema("oplus", [0, 0]),
                _untyped_schema("lolli", [0, 0]),
                _untyped_schema("forall", [1]),
                _untyped_schema("exists", [1]),
            ],
        )
    if name == "stlc":
        types = TypeSystem(("iota",), arrow_enabled=True)
        s, t = SortRef(0), SortRef(1)
        return make_signature(
            types,
            [
                _schema(
                    "app",
                    [((), ArrowSort(s, t)), ((), s)],
                    t,
                    [Param("s", "sort"), Param("t", "sort")],
                ),
                _schema(
                    "abs",
                    [((s,), t)],
                    ArrowSort(s, t),
                    [Param("s", "sort"), Param("t", "sort")],
                ),
            ],
        )
    if name == "pcf":
        types = TypeSystem(("nat", "bool"), arrow_enabled=True)
        nat, boolean = BaseSort("nat"), BaseSort("bool")
        s, t = SortRef(0), SortRef(1)
        return make_signature(
            types,
            [
                _schema("true", [], boolean),
                _schema("false", [], boolean),
                _schema(
                    "if_bool",
                    [((), ArrowSort(boolean, ArrowSort(boolean, boolean)))],
                    boolean,
                ),
                _schema(
                    "if_nat",
                    [((), ArrowSort(boolean, ArrowSort(nat, nat)))],
                    nat,
                ),
                _schema("k", [], nat, [Param("n", "nat")]),
                _schema("succ", [((), nat)], nat),
                _schema("pred", [((), nat)], nat),
                _schema("zero_test", [((), nat)], boolean),
                _schema(
                    "app",
                    [((), ArrowSort(s, t)), ((), s)],
                    t,
                    [Param("s", "sort"), Param("t", "sort")],
                ),
                _schema(
                    "abs",
                    [((s,), t)],
                    ArrowSort(s, t),
                    [Param("s", "sort"), Param("t", "sort")],
                ),
                _schema("fix", [((), ArrowSort(s, s))], s, [Param("s", "sort")]),
            ],
        )
    raise UnknownBuiltin(f"no builtin signature {name!r}")


# ---------------------------------------------------------------------------
# Tokenizer shared by the signature, term, and table grammars


_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r]+)
      | (?P<comment>\#[^\n]*)
      | (?P<nl>\n)
      | (?P<arrowsym>->|=>)
      | (?P<nat>\d+)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_?]*|\*)
      | (?P<punct>[()<>\[\],:|=-])
    """,
    re.VERBOSE,
)


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.col})"


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(value)
        else:
            tokens.append(Token(kind, value, line, col))
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok

    def expect_kind(self, kind: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text

    def expect_eof(self) -> None:
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)


# ---------------------------------------------------------------------------
# Sort and signature concrete syntax


def _parse_sort_expr(ts: TokenStream, param_index: dict | None = None) -> SortTemplate:
    tok = ts.next()
    if tok.text == "arrow":
        ts.expect("(")
        dom = _parse_sort_expr(ts, param_index)
        ts.expect(",")
        cod = _parse_sort_expr(ts, param_index)
        ts.expect(")")
        return ArrowSort(dom, cod)
    if tok.kind == "ident":
        if param_index and tok.text in param_index:
            return SortRef(param_index[tok.text])
        return BaseSort(tok.text)
    raise ParseError(f"expected a sort, found {tok.text or 'end of input'!r}", tok.line, tok.col)


def parse_sort(text: str) -> Sort:
    ts = TokenStream(tokenize(text))
    sort = _parse_sort_expr(ts)
    ts.expect_eof()
    if isinstance(sort, SortRef):  # unreachable without params, kept for clarity
        raise ParseError("parameter reference outside a schema")
    return sort


def print_sort(sort: Sort) -> str:
    if isinstance(sort, BaseSort):
        return sort.name
    if isinstance(sort, ArrowSort):
        return f"arrow({print_sort(sort.domain)},{print_sort(sort.codomain)})"
    raise MalformedSort(f"not a printable sort: {sort!r}")


def _print_template(tpl: SortTemplate, params: tuple[Param, ...]) -> str:
    if isinstance(tpl, SortRef):
        return params[tpl.index].name
    if isinstance(tpl, ArrowSort):
        return f"arrow({_print_template(tpl.domain, params)},{_print_template(tpl.codomain, params)})"
    return tpl.name


def _parse_op_decl(ts: TokenStream) -> ConstructorSchema:
    name = ts.expect_kind("ident").text
    params: list[Param] = []
    if ts.at("<"):
        ts.next()
        while True:
            pname = ts.expect_kind("ident").text
            ts.expect(":")
            kind_tok = ts.next()
            if kind_tok.text not in ("sort", "nat"):
                raise ParseError("parameter kind must be 'sort' or 'nat'", kind_tok.line, kind_tok.col)
            params.append(Param(pname, kind_tok.text))
            if ts.at(","):
                ts.next()
                continue
            ts.expect(">")
            break
    param_index = {p.name: i for i, p in enumerate(params)}
    ts.expect(":")
    ts.expect("(")
    inputs: list[Input] = []
    if not ts.at(")"):
        while True:
            bound: list[SortTemplate] = []
            if ts.at("["):
                ts.next()
                while True:
                    bound.append(_parse_sort_expr(ts, param_index))
                    if ts.at(","):
                        ts.next()
                        continue
                    ts.expect("]")
                    break
            sort = _parse_sort_expr(ts, param_index)
            inputs.append(Input(tuple(bound), sort))
            if ts.at(","):
                ts.next()
                continue
            break
    ts.expect(")")
    ts.expect("->")
    output = _parse_sort_expr(ts, param_index)
    return ConstructorSchema(name, tuple(params), tuple(inputs), output)


def parse_signature_source(text: str) -> tuple[Signature, tuple[ConstructorSchema, ...]]:
    """Parse a signature file, returning the signature and any operator
    declarations from a trailing ``operators`` section.

    Operator declarations reuse the ``op`` syntax but may not bind
    variables or take parameters; :mod:`bindsig.freemodel` turns them
    into an operator family.
    """
    ts = TokenStream(tokenize(text))
    ts.expect("signature")
    ts.expect_kind("ident")
    types: TypeSystem | None = None
    schemas: list[ConstructorSchema] = []
    operators: list[ConstructorSchema] = []
    in_operators = False
    while ts.peek().kind != "eof":
        tok = ts.next()
        if tok.text == "sorts":
            if types is not None:
                raise ParseError("duplicate sorts declaration", tok.line, tok.col)
            if schemas or in_operators:
                raise ParseError("sorts must be declared before any op", tok.line, tok.col)
            names = [ts.expect_kind("ident").text]
            while ts.at("|"):
                ts.next()
                names.append(ts.expect_kind("ident").text)
            arrow = False
            if ts.at("with"):
                ts.next()
                ts.expect("arrow")
                arrow = True
            types = TypeSystem(tuple(names), arrow)
        elif tok.text == "operators":
            if in_operators:
                raise ParseError("duplicate operators section", tok.line, tok.col)
            in_operators = True
        elif tok.text == "op":
            decl = _parse_op_decl(ts)
            if in_operators:
                if decl.params:
                    raise ParseError(
                        f"operator label {decl.name} cannot take parameters",
                        tok.line,
                        tok.col,
                    )
                if any(inp.bound for inp in decl.inputs):
                    raise ParseError(
                        f"operator label {decl.name} cannot bind variables",
                        tok.line,
                        tok.col,
                    )
                operators.append(decl)
            else:
                schemas.append(decl)
        else:
            raise ParseError(
                f"expected 'sorts', 'op' or 'operators', found {tok.text!r}", tok.line, tok.col
            )
    sig = make_signature(types if types is not None else UNTYPED, schemas)
    seen = {s.name for s in schemas}
    for decl in operators:
        if decl.name in seen:
            raise DuplicateName(f"operator label {decl.name!r} clashes with a schema")
        seen.add(decl.name)
        for inp in decl.inputs:
            check_sort(sig.types, inp.sort)
        check_sort(sig.types, decl.output)
    return sig, tuple(operators)


def parse_signature(text: str) -> Signature:
    """Parse the signature file grammar (see the README for the grammar)."""
    return parse_signature_source(text)[0]


def print_signature(sig: Signature, name: str = "sig") -> str:
    """Render in the signature file grammar; parse(print(s)) equals s."""
    lines = [f"signature {name}"]
    if sig.types != UNTYPED:
        decl = " | ".join(sig.types.base_sorts)
        if sig.types.arrow_enabled:
            decl += " with arrow"
        lines.append(f"sorts {decl}")
    for s in sig.schemas:
        head = s.name
        if s.params:
            head += "<" + ", ".join(f"{p.name}: {p.kind}" for p in s.params) + ">"
        parts = []
        for inp in s.inputs:
            txt = _print_template(inp.sort, s.params)
            if inp.bound:
                txt = "[" + ", ".join(_print_template(b, s.params) for b in inp.bound) + "] " + txt
            parts.append(txt)
        lines.append(f"op {head} : ({', '.join(parts)}) -> {_print_template(s.output, s.params)}")
    return "\n".join(lines) + "\n"
