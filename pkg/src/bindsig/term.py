"""Well-scoped, well-sorted de Bruijn term trees.

Index 0 is the innermost binder and context extension prepends, so a
term over ``bound ++ ctx`` sees the freshly bound variables at indices
``0 .. len(bound)-1``.  Terms store only (schema, params, args);
well-formedness is a judgment checked against a signature, a context and
an expected sort, which keeps structural sharing and equality cheap.

``Var`` and ``Op`` are hand-rolled slotted classes with precomputed
hashes: the law suites compare and hash millions of terms.  Instances
are immutable by contract; nothing in the library mutates them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence, Union

from .errors import (
    ArityMismatch,
    IllFormed,
    ParseError,
    ScopeError,
    SortMismatch,
    Unbounded,
)
from .sigdef import (
    ArrowSort,
    BaseSort,
    Signature,
    Sort,
    TokenStream,
    TypeSystem,
    check_sort,
    print_sort,
    sorts_up_to_depth,
    tokenize,
)

__all__ = [
    "Context",
    "Term",
    "Var",
    "Op",
    "ctx_extend",
    "check_context",
    "mk_var",
    "mk_op",
    "sort_of",
    "enumerate_terms",
    "chain_count",
    "instantiations",
    "VarCase",
    "OpCase",
    "lambek_decompose",
    "lambek_compose",
    "parse_term",
    "print_term",
    "parse_context",
    "print_context",
    "random_term",
    "term_depth",
]

Context = tuple  # tuple[Sort, ...]


class Term:
    """Abstract term node; concrete nodes are Var and Op."""

    __slots__ = ()


class Var(Term):
    __slots__ = ("index", "_hash")
    __match_args__ = ("index",)

    def __init__(self, index: int):
        self.index = index
        self._hash = hash((Var, index))

    def __eq__(self, other):
        if self is other:
            return True
        return type(other) is Var and other.index == self.index

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Var({self.index})"


class Op(Term):
    __slots__ = ("name", "params", "args", "_hash")
    __match_args__ = ("name", "params", "args")

    def __init__(self, name: str, params: tuple = (), args: tuple = ()):
        self.name = name
        self.params = params
        self.args = args
        self._hash = hash((Op, name, params, args))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Op
            and other._hash == self._hash
            and other.name == self.name
            and other.params == self.params
            and other.args == self.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        bits = [repr(self.name)]
        if self.params:
            bits.append(f"params={self.params!r}")
        if self.args:
            bits.append(f"args={self.args!r}")
        return f"Op({', '.join(bits)})"


# ---------------------------------------------------------------------------
# Contexts and checked construction


def check_context(types: TypeSystem, ctx: Sequence[Sort]) -> Context:
    ctx = tuple(ctx)
    for s in ctx:
        check_sort(types, s)
    return ctx


def ctx_extend(ctx: Sequence[Sort], bound: Sequence[Sort], types: TypeSystem | None = None) -> Context:
    """``bound ++ ctx``: the freshly bound sorts take the low indices.

    Pass ``types`` to have the bound sorts validated.
    """
    if types is not None:
        for s in bound:
            check_sort(types, s)
    return tuple(bound) + tuple(ctx)


def mk_var(ctx: Sequence[Sort], index: int) -> tuple[Term, Sort]:
    ctx = tuple(ctx)
    if not (0 <= index < len(ctx)):
        raise ScopeError(f"variable {index} out of scope in a context of size {len(ctx)}")
    return Var(index), ctx[index]


def mk_op(
    sig: Signature,
    ctx: Sequence[Sort],
    name: str,
    params: Sequence = (),
    args: Sequence[Term] = (),
) -> tuple[Term, Sort]:
    """Checked construction of an operator node; returns it with its sort."""
    ctx = tuple(ctx)
    params = tuple(params)
    args = tuple(args)
    arity = sig.arity(name, params)
    if len(args) != len(arity.inputs):
        raise ArityMismatch(f"{name} expects {len(arity.inputs)} argument(s), got {len(args)}")
    for j, (inp, arg) in enumerate(zip(arity.inputs, args)):
        found = _infer(sig, inp.bound + ctx, arg)
        if found != inp.sort:
            raise SortMismatch(
                f"argument {j} of {name}: expected {print_sort(inp.sort)}, found {print_sort(found)}"
            )
    return Op(name, params, args), arity.output


def _infer(sig: Signature, ctx: Context, t: Term) -> Sort:
    if type(t) is Var:
        if not (0 <= t.index < len(ctx)):
            raise ScopeError(f"variable {t.index} out of scope in a context of size {len(ctx)}")
        return ctx[t.index]
    if type(t) is Op:
        arity = sig.arity(t.name, t.params)
        if len(t.args) != len(arity.inputs):
            raise ArityMismatch(
                f"{t.name} expects {len(arity.inputs)} argument(s), got {len(t.args)}"
            )
        for j, (inp, arg) in enumerate(zip(arity.inputs, t.args)):
            found = _infer(sig, inp.bound + ctx, arg)
            if found != inp.sort:
                raise SortMismatch(
                    f"argument {j} of {t.name}: expected {print_sort(inp.sort)}, "
                    f"found {print_sort(found)}"
                )
        return arity.output
    raise IllFormed(f"not a term: {t!r}")


def sort_of(sig: Signature, ctx: Sequence[Sort], t: Term) -> Sort:
    """The unique sort at which ``t`` checks; IllFormed otherwise."""
    try:
        return _infer(sig, tuple(ctx), t)
    except (ScopeError, SortMismatch, ArityMismatch, IllFormed) as e:
        raise IllFormed(str(e)) from e
    except Exception as e:  # unknown op, bad params
        raise IllFormed(str(e)) from e


def term_depth(t: Term) -> int:
    """Constructor depth: variables and constants count 1."""
    if type(t) is Var:
        return 1
    return 1 + max((term_depth(a) for a in t.args), default=0)


# ---------------------------------------------------------------------------
# Parameter instantiations reachable under a sort-depth bound


def instantiations(sig: Signature, schema_name: str, max_sort_depth: int | None):
    """All parameter tuples of a schema, paired with their arities.

    Sort parameters range over all sorts of depth <= max_sort_depth in
    canonical order; nat parameters over 0 .. max_sort_depth.  Schemas
    with parameters require the bound; without it they raise Unbounded
    (unless the sort grammar itself is finite and no nat parameter occurs).
    """
    schema = sig.schema(schema_name)
    key = ("insts", schema_name, max_sort_depth)
    hit = sig._cache.get(key)
    if hit is not None:
        return hit
    if not schema.params:
        out = [((), sig.arity(schema_name, ()))]
        sig._cache[key] = out
        return out
    pools = []
    for p in schema.params:
        if p.kind == "sort":
            if sig.types.arrow_enabled and max_sort_depth is None:
                raise Unbounded(
                    f"schema {schema_name} has sort parameters; pass a sort-depth bound"
                )
            pools.append(sorts_up_to_depth(sig.types, max_sort_depth or 0))
        else:
            if max_sort_depth is None:
                raise Unbounded(
                    f"schema {schema_name} has a nat parameter; pass a sort-depth bound"
                )
            pools.append(list(range(max_sort_depth + 1)))
    out = [(args, sig.arity(schema_name, args)) for args in product(*pools)]
    sig._cache[key] = out
    return out


# ---------------------------------------------------------------------------
# Depth-stratified enumeration: A_0 = empty, A_{k+1} = vars + one schema layer


def _chain_cells(sig, max_sort_depth):
    cells = sig._cache.get(("cells", max_sort_depth))
    if cells is None:
        cells = {}
        sig._cache[("cells", max_sort_depth)] = cells
    return cells


def enumerate_terms(
    sig: Signature,
    ctx: Sequence[Sort],
    sort: Sort,
    depth: int,
    max_sort_depth: int | None = None,
) -> list[Term]:
    """The chain stage A_depth at the (ctx, sort) cell, in canonical order.

    Order: variables ascending, then schemas in declaration order (their
    instantiations in canonical parameter order), arguments lexicographic
    in the order of the previous stage.  Stage 0 is empty.
    """
    ctx = tuple(ctx)
    cells = _chain_cells(sig, max_sort_depth)

    def cell(c: Context, s: Sort, k: int) -> list[Term]:
        if k <= 0:
            return []
        key = (c, s, k)
        hit = cells.get(key)
        if hit is not None:
            return hit
        out: list[Term] = [Var(i) for i, entry in enumerate(c) if entry == s]
        for schema in sig.schemas:
            for params, arity in instantiations(sig, schema.name, max_sort_depth):
                if arity.output != s:
                    continue
                pools = [cell(inp.bound + c, inp.sort, k - 1) for inp in arity.inputs]
                if any(not p for p in pools):
                    continue
                for args in product(*pools):
                    out.append(Op(schema.name, params, args))
        cells[key] = out
        return out

    return cell(ctx, sort, depth)


def chain_count(
    sig: Signature,
    ctx: Sequence[Sort],
    sort: Sort,
    depth: int,
    max_sort_depth: int | None = None,
) -> int:
    """|A_depth| at the cell, via the arity recurrence (exact integers)."""
    ctx = tuple(ctx)
    counts = sig._cache.setdefault(("counts", max_sort_depth), {})

    def count(c: Context, s: Sort, k: int) -> int:
        if k <= 0:
            return 0
        key = (c, s, k)
        hit = counts.get(key)
        if hit is not None:
            return hit
        n = sum(1 for entry in c if entry == s)
        for schema in sig.schemas:
            for _params, arity in instantiations(sig, schema.name, max_sort_depth):
                if arity.output != s:
                    continue
                prod = 1
                for inp in arity.inputs:
                    prod *= count(inp.bound + c, inp.sort, k - 1)
                    if prod == 0:
                        break
                n += prod
        counts[key] = n
        return n

    return count(ctx, sort, depth)


def random_term(sig, ctx, sort, depth, rng, max_sort_depth=None) -> Term:
    """Seeded random well-formed term of constructor depth <= depth.

    Picks uniformly among the productions that stay inhabited at the
    remaining depth, so the draw always succeeds when the cell itself is
    inhabited; raises ValueError otherwise.
    """
    ctx = tuple(ctx)
    if chain_count(sig, ctx, sort, depth, max_sort_depth) == 0:
        raise ValueError("empty cell: no term to draw")
    choices = [("var", i) for i, entry in enumerate(ctx) if entry == sort]
    for schema in sig.schemas:
        for params, arity in instantiations(sig, schema.name, max_sort_depth):
            if arity.output != sort:
                continue
            if all(
                chain_count(sig, inp.bound + ctx, inp.sort, depth - 1, max_sort_depth)
                for inp in arity.inputs
            ):
                choices.append(("op", schema.name, params, arity))
    pick = choices[rng.below(len(choices))]
    if pick[0] == "var":
        return Var(pick[1])
    _tag, name, params, arity = pick
    args = tuple(
        random_term(sig, inp.bound + ctx, inp.sort, depth - 1, rng, max_sort_depth)
        for inp in arity.inputs
    )
    return Op(name, params, args)


# ---------------------------------------------------------------------------
# Lambek decomposition: a term is a variable or a top constructor layer


@dataclass(frozen=True, slots=True)
class VarCase:
    index: int


@dataclass(frozen=True, slots=True)
class OpCase:
    name: str
    params: tuple
    args: tuple


def lambek_decompose(t: Term) -> Union[VarCase, OpCase]:
    if type(t) is Var:
        return VarCase(t.index)
    return OpCase(t.name, t.params, t.args)


def lambek_compose(case: Union[VarCase, OpCase]) -> Term:
    if isinstance(case, VarCase):
        return Var(case.index)
    return Op(case.name, case.params, case.args)


# ---------------------------------------------------------------------------
# Concrete syntax: s-expressions


def _parse_param(ts: TokenStream):
    tok = ts.peek()
    if tok.kind == "nat":
        ts.next()
        return int(tok.text)
    return _parse_sort_token(ts)


def _parse_sort_token(ts: TokenStream) -> Sort:
    tok = ts.next()
    if tok.text == "arrow":
        ts.expect("(")
        dom = _parse_sort_token(ts)
        ts.expect(",")
        cod = _parse_sort_token(ts)
        ts.expect(")")
        return ArrowSort(dom, cod)
    if tok.kind == "ident":
        return BaseSort(tok.text)
    raise ParseError(f"expected a sort or a natural, found {tok.text!r}", tok.line, tok.col)


def _parse_term_expr(ts: TokenStream) -> Term:
    ts.expect("(")
    head = ts.next()
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
                params.append(_parse_param(ts))
                if ts.at(","):
                    ts.next()
                    continue
                ts.expect(">")
                break
        args: list[Term] = []
        while ts.at("("):
            args.append(_parse_term_expr(ts))
        ts.expect(")")
        return Op(name, tuple(params), tuple(args))
    raise ParseError(f"expected 'var' or 'op', found {head.text!r}", head.line, head.col)


def parse_term(text: str) -> Term:
    ts = TokenStream(tokenize(text))
    t = _parse_term_expr(ts)
    ts.expect_eof()
    return t


def _print_param(p) -> str:
    if isinstance(p, int):
        return str(p)
    return print_sort(p)


def print_term(t: Term) -> str:
    if type(t) is Var:
        return f"(var {t.index})"
    head = t.name
    if t.params:
        head += "<" + ",".join(_print_param(p) for p in t.params) + ">"
    if not t.args:
        return f"(op {head})"
    return f"(op {head} " + " ".join(print_term(a) for a in t.args) + ")"


def parse_context(types: TypeSystem, text: str) -> Context:
    """``(ctx s0 s1 ...)`` or, for a single-sorted system, a bare size."""
    text = text.strip()
    if text.isdigit():
        n = int(text)
        if n == 0:
            return ()
        return (types.single_sort(),) * n
    ts = TokenStream(tokenize(text))
    ts.expect("(")
    ts.expect("ctx")
    entries: list[Sort] = []
    while not ts.at(")"):
        entries.append(_parse_sort_token(ts))
    ts.expect(")")
    ts.expect_eof()
    return check_context(types, entries)


def print_context(ctx: Context) -> str:
    return "(ctx" + "".join(" " + print_sort(s) for s in ctx) + ")"
