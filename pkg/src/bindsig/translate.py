"""Language-to-language translation tables over a type-system morphism.

A table gives, per source schema, a target term template whose leaves
are placeholders for the translated arguments.  Templates are
offset-exact and graft-only: each placeholder occurs under precisely the
image of its input's bound list, so substituting the translated argument
needs no shifting and capture-avoidance is automatic.  Variables
translate to themselves because the context image is pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .errors import (
    MissingClause,
    OffsetMismatch,
    ParseError,
    ScopeError,
    SortMismatch,
    TypeSystemMismatch,
    UnknownBuiltin,
)
from .sigdef import (
    ArrowSort,
    BaseSort,
    Signature,
    Sort,
    TokenStream,
    TypeSystem,
    builtin,
    print_sort,
    tokenize,
)
from .term import Context, Op, Term, Var, _parse_sort_token

__all__ = [
    "TypeMorphism",
    "Placeholder",
    "ParamRef",
    "TranslationTable",
    "map_context",
    "make_table",
    "translate_term",
    "builtin_table",
    "identity_table",
    "parse_table",
]


@dataclass(frozen=True)
class TypeMorphism:
    """Map of sort grammars: per-base images plus an arrow policy.

    mode "homomorphic" sends arrow(a, b) to arrow(g a, g b) and needs
    arrows in the target; mode "collapse" sends every sort to the single
    base sort of an untyped target.
    """

    source: TypeSystem
    target: TypeSystem
    base_map: Mapping[str, Sort]
    mode: str = "homomorphic"

    def __post_init__(self):
        if self.mode not in ("homomorphic", "collapse"):
            raise TypeSystemMismatch(f"unknown arrow mode {self.mode!r}")
        if self.mode == "collapse" and not self.target.untyped:
            raise TypeSystemMismatch("collapse mode needs an untyped target")
        for name in self.source.base_sorts:
            if name not in self.base_map:
                raise TypeSystemMismatch(f"base sort {name!r} has no image")
        if self.mode == "homomorphic" and self.source.arrow_enabled and not self.target.arrow_enabled:
            raise TypeSystemMismatch("homomorphic mode needs arrows in the target")

    def apply(self, sort: Sort) -> Sort:
        if self.mode == "collapse":
            return self.target.single_sort()
        if isinstance(sort, BaseSort):
            return self.base_map[sort.name]
        return ArrowSort(self.apply(sort.domain), self.apply(sort.codomain))

    @staticmethod
    def identity(types: TypeSystem) -> "TypeMorphism":
        return TypeMorphism(types, types, {n: BaseSort(n) for n in types.base_sorts})

    @staticmethod
    def collapse(source: TypeSystem, target: TypeSystem) -> "TypeMorphism":
        single = target.single_sort()
        return TypeMorphism(source, target, {n: single for n in source.base_sorts}, "collapse")


def map_context(morphism: TypeMorphism, ctx: Sequence[Sort]) -> Context:
    """Pointwise image; positions and length are preserved."""
    return tuple(morphism.apply(s) for s in ctx)


class Placeholder:
    """Template leaf standing for the translated j-th argument."""

    __slots__ = ("index", "_hash")
    __match_args__ = ("index",)

    def __init__(self, index: int):
        self.index = index
        self._hash = hash((Placeholder, index))

    def __eq__(self, other):
        return type(other) is Placeholder and other.index == self.index

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Placeholder({self.index})"


@dataclass(frozen=True, slots=True)
class ParamRef:
    """Template parameter slot resolved from the source instantiation.

    Sort-valued parameters pass through the type morphism; nat-valued
    parameters are carried unchanged.
    """

    index: int


Template = Union[Term, Placeholder]


@dataclass(frozen=True)
class TranslationTable:
    source: Signature
    target: Signature
    morphism: TypeMorphism
    clauses: Mapping[str, Template]


def _resolve_params(table: TranslationTable, params: tuple, source_params: tuple) -> tuple:
    out = []
    for p in params:
        if isinstance(p, ParamRef):
            value = source_params[p.index]
            out.append(table.morphism.apply(value) if not isinstance(value, int) else value)
        else:
            out.append(p)
    return tuple(out)


def _check_template(
    table: TranslationTable,
    schema_name: str,
    template: Template,
    expected: Sort,
    accum: tuple[Sort, ...],
    placeholder_specs: dict,
    source_params: tuple,
) -> None:
    if isinstance(template, Placeholder):
        exp_bound, exp_sort = placeholder_specs.get(template.index, (None, None))
        if exp_bound is None:
            raise OffsetMismatch(f"{schema_name}: placeholder {template.index} out of range")
        if accum != exp_bound:
            raise OffsetMismatch(
                f"{schema_name}: placeholder {template.index} sits under binder extension "
                f"{[print_sort(s) for s in accum]}, expected {[print_sort(s) for s in exp_bound]}"
            )
        if expected != exp_sort:
            raise SortMismatch(
                f"{schema_name}: placeholder {template.index} used at sort "
                f"{print_sort(expected)}, carries {print_sort(exp_sort)}"
            )
        return
    if type(template) is Var:
        if not (0 <= template.index < len(accum)):
            raise ScopeError(
                f"{schema_name}: template variable {template.index} escapes the "
                "template's own binders"
            )
        if accum[template.index] != expected:
            raise SortMismatch(
                f"{schema_name}: template variable {template.index} has sort "
                f"{print_sort(accum[template.index])}, expected {print_sort(expected)}"
            )
        return
    if type(template) is Op:
        params = _resolve_params(table, template.params, source_params)
        arity = table.target.arity(template.name, params)
        if arity.output != expected:
            raise SortMismatch(
                f"{schema_name}: template node {template.name} returns "
                f"{print_sort(arity.output)}, expected {print_sort(expected)}"
            )
        if len(arity.inputs) != len(template.args):
            raise SortMismatch(
                f"{schema_name}: template node {template.name} applied to "
                f"{len(template.args)} argument(s), needs {len(arity.inputs)}"
            )
        for inp, arg in zip(arity.inputs, template.args):
            _check_template(
                table,
                schema_name,
                arg,
                inp.sort,
                inp.bound + accum,
                placeholder_specs,
                source_params,
            )
        return
    raise SortMismatch(f"{schema_name}: not a template node: {template!r}")


def _spot_params(sig: Signature, schema) -> tuple:
    """A sample instantiation used to validate parameterized clauses."""
    from .sigdef import sorts_up_to_depth

    sorts = sorts_up_to_depth(sig.types, 0)
    out = []
    for p in schema.params:
        out.append(sorts[0] if p.kind == "sort" else 0)
    return tuple(out)


def _validate_clause(table: TranslationTable, schema_name: str, source_params: tuple) -> None:
    schema = table.source.schema(schema_name)
    arity = table.source.arity(schema_name, source_params)
    g = table.morphism
    placeholder_specs = {
        j: (map_context(g, inp.bound), g.apply(inp.sort))
        for j, inp in enumerate(arity.inputs)
    }
    template = table.clauses[schema_name]
    _check_template(
        table,
        schema_name,
        template,
        g.apply(arity.output),
        (),
        placeholder_specs,
        source_params,
    )


def make_table(
    source: Signature,
    target: Signature,
    morphism: TypeMorphism,
    clauses: Mapping[str, Template],
) -> TranslationTable:
    """Validated table: one clause per source schema, placeholders at
    exactly the image of their input's binder extension, output sorts
    coherent with the type morphism.  Parameterized schemas are
    spot-checked at a sample instantiation and re-checked per use."""
    for schema in source.schemas:
        if schema.name not in clauses:
            raise MissingClause(f"no clause for source operator {schema.name!r}")
    for name in clauses:
        source.schema(name)  # raises UnknownOp on junk clauses
    table = TranslationTable(source, target, morphism, dict(clauses))
    for schema in source.schemas:
        _validate_clause(table, schema.name, _spot_params(source, schema))
    return table


def _graft(template: Template, args: Sequence[Term], source_params: tuple, table) -> Term:
    if isinstance(template, Placeholder):
        return args[template.index]
    if type(template) is Var:
        return template
    params = _resolve_params(table, template.params, source_params)
    return Op(
        template.name,
        params,
        tuple(_graft(a, args, source_params, table) for a in template.args),
    )


def translate_term(table: TranslationTable, ctx: Sequence[Sort], t: Term) -> Term:
    """Apply the table; the result is well-formed over the image context
    at the image sort.  Variables keep their indices."""
    src = table.source
    ctx = tuple(ctx)

    def go(c: Context, t: Term) -> Term:
        if type(t) is Var:
            return Var(t.index)
        arity = src.arity(t.name, t.params)
        translated = tuple(
            go(inp.bound + c, arg) for inp, arg in zip(arity.inputs, t.args)
        )
        try:
            template = table.clauses[t.name]
        except KeyError:
            raise MissingClause(f"no clause for source operator {t.name!r}") from None
        return _graft(template, translated, t.params, table)

    return go(ctx, t)


# ---------------------------------------------------------------------------
# Stock tables


def identity_table(sig: Signature) -> TranslationTable:
    """Every schema maps to itself applied to its placeholders."""
    clauses = {}
    for schema in sig.schemas:
        params = tuple(ParamRef(i) for i in range(len(schema.params)))
        args = tuple(Placeholder(j) for j in range(len(schema.inputs)))
        clauses[schema.name] = Op(schema.name, params, args)
    return make_table(sig, sig, TypeMorphism.identity(sig.types), clauses)


def builtin_table(name: str) -> TranslationTable:
    if name == "fol2ll":
        fol, ll = builtin("fol"), builtin("ll")
        p0, p1 = Placeholder(0), Placeholder(1)
        clauses = {
            "top": Op("top"),
            "bot": Op("bot"),
            "neg": Op("lolli", (), (Op("bang", (), (p0,)), Op("zero"))),
            "and": Op("with", (), (p0, p1)),
            "or": Op("oplus", (), (Op("bang", (), (p0,)), Op("bang", (), (p1,)))),
            "imp": Op("lolli", (), (Op("bang", (), (p0,)), p1)),
            "forall": Op("forall", (), (p0,)),
            "exists": Op("exists", (), (Op("bang", (), (p0,)),)),
        }
        return make_table(fol, ll, TypeMorphism.collapse(fol.types, ll.types), clauses)
    if name == "stlc2ulc":
        stlc, ulc = builtin("stlc"), builtin("ulc")
        clauses = {
            "app": Op("app", (), (Placeholder(0), Placeholder(1))),
            "abs": Op("abs", (), (Placeholder(0),)),
        }
        return make_table(stlc, ulc, TypeMorphism.collapse(stlc.types, ulc.types), clauses)
    raise UnknownBuiltin(f"no builtin table {name!r}")


# ---------------------------------------------------------------------------
# Table files


def _parse_template(ts: TokenStream, param_index: dict) -> Template:
    ts.expect("(")
    head = ts.next()
    if head.text == "ph":
        idx = ts.expect_kind("nat")
        ts.expect(")")
        return Placeholder(int(idx.text))
    if head.text == "var":
        idx = ts.expect_kind("nat")
        ts.expect(")")
        return Var(int(idx.text))
    if head.text == "op":
        name = ts.expect_kind("ident").text
        params: list = []
        if ts.at("<"):
            ts.next()
            while True:
                tok = ts.peek()
                if tok.kind == "nat":
                    ts.next()
                    params.append(int(tok.text))
                elif tok.kind == "ident" and tok.text in param_index:
                    ts.next()
                    params.append(ParamRef(param_index[tok.text]))
                else:
                    params.append(_parse_sort_token(ts))
                if ts.at(","):
                    ts.next()
                    continue
                ts.expect(">")
                break
        args: list[Template] = []
        while ts.at("("):
            args.append(_parse_template(ts, param_index))
        ts.expect(")")
        return Op(name, tuple(params), tuple(args))
    raise ParseError(f"expected 'op', 'var' or 'ph', found {head.text!r}", head.line, head.col)


def _load_signature(name: str) -> Signature:
    try:
        return builtin(name)
    except UnknownBuiltin:
        from .sigdef import parse_signature

        with open(name, "r", encoding="utf-8") as fh:
            return parse_signature(fh.read())


def parse_table(text: str) -> TranslationTable:
    """Table file grammar::

        translate <src> -> <tgt> [erase-types | map <base> => <sort> ...]
        clause <op>[<params>] = <target term with (ph j) leaves>

    <src> and <tgt> are builtin signature names or signature file paths.
    Without an arrow policy the morphism is the identity on base names.
    """
    ts = TokenStream(tokenize(text))
    ts.expect("translate")
    src_name = ts.expect_kind("ident").text
    ts.expect("->")
    tgt_name = ts.expect_kind("ident").text
    source = _load_signature(src_name)
    target = _load_signature(tgt_name)
    base_map: dict[str, Sort] = {}
    mode = None
    while True:
        tok = ts.peek()
        if tok.text == "erase":
            ts.next()
            ts.expect("-")
            ts.expect("types")
            mode = "collapse"
        elif tok.text == "map":
            ts.next()
            base = ts.expect_kind("ident").text
            ts.expect("=>")
            base_map[base] = _parse_sort_token(ts)
            mode = mode or "homomorphic"
        else:
            break
    if mode == "collapse":
        morphism = TypeMorphism.collapse(source.types, target.types)
    elif base_map:
        morphism = TypeMorphism(source.types, target.types, base_map, "homomorphic")
    else:
        if source.types != target.types:
            raise TypeSystemMismatch(
                "differing type systems need an explicit 'erase-types' or 'map' policy"
            )
        morphism = TypeMorphism.identity(source.types)
    clauses: dict[str, Template] = {}
    while ts.peek().kind != "eof":
        ts.expect("clause")
        op_name = ts.expect_kind("ident").text
        schema = source.schema(op_name)
        param_index: dict[str, int] = {}
        if ts.at("<"):
            ts.next()
            names = []
            while True:
                names.append(ts.expect_kind("ident").text)
                if ts.at(","):
                    ts.next()
                    continue
                ts.expect(">")
                break
            if len(names) != len(schema.params):
                raise ParseError(
                    f"clause for {op_name} binds {len(names)} parameter(s), "
                    f"schema has {len(schema.params)}"
                )
            param_index = {n: i for i, n in enumerate(names)}
        ts.expect("=")
        if op_name in clauses:
            raise ParseError(f"duplicate clause for {op_name}")
        clauses[op_name] = _parse_template(ts, param_index)
    return make_table(source, target, morphism, clauses)
