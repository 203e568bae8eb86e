"""Independent oracles the tests check the library against.

Everything here deliberately avoids the library's substitution,
enumeration, and fold code paths:

- a named-variable mirror with Barendregt-style fresh binder names,
  giving an independent capture-avoiding renamer and substitutor;
- the hand-derived ULC stage recurrence a(k+1, n) = n + a(k,n)^2 + a(k,n+1);
- a generate-then-filter enumerator: all unchecked trees up to a depth,
  kept only when the well-formedness judgment accepts them;
- a direct free-variable recursion with no model machinery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from itertools import product

from bindsig import Op, Var, sort_of
from bindsig.errors import BindsigError
from bindsig.term import instantiations, term_depth


# ---------------------------------------------------------------------------
# Named-variable mirror


@dataclass(frozen=True)
class NVar:
    name: str


@dataclass(frozen=True)
class NOp:
    name: str
    params: tuple
    args: tuple  # of (bound_names: tuple[str, ...], body)


def to_named(sig, names, t, fresh):
    """Convert de Bruijn to named form; ``names[i]`` names index i.

    Binder names are drawn from ``fresh`` (a shared counter), so every
    binder in a comparison gets a globally unique name.
    """
    if type(t) is Var:
        return NVar(names[t.index])
    arity = sig.arity(t.name, t.params)
    args = []
    for inp, arg in zip(arity.inputs, t.args):
        bound_names = tuple(f"b{next(fresh)}" for _ in inp.bound)
        args.append((bound_names, to_named(sig, list(bound_names) + names, arg, fresh)))
    return NOp(t.name, t.params, tuple(args))


def from_named(sig, names, t):
    if isinstance(t, NVar):
        return Var(names.index(t.name))
    args = []
    for bound_names, body in t.args:
        args.append(from_named(sig, list(bound_names) + names, body))
    return Op(t.name, t.params, tuple(args))


def named_rename(t, mapping):
    """Replace free names; binder names are globally fresh, so no capture."""
    if isinstance(t, NVar):
        return NVar(mapping.get(t.name, t.name))
    return NOp(
        t.name,
        t.params,
        tuple((bound, named_rename(body, mapping)) for bound, body in t.args),
    )


def named_subst(t, env):
    """Replace free names by named terms; fresh binder names rule out capture."""
    if isinstance(t, NVar):
        return env.get(t.name, t)
    return NOp(
        t.name,
        t.params,
        tuple((bound, named_subst(body, env)) for bound, body in t.args),
    )


def mirror_subst(sig, ctx, target, t, images):
    """Independent route for subst: through the named mirror and back."""
    fresh = itertools.count()
    xs = [f"c{i}" for i in range(len(ctx))]
    ys = [f"d{i}" for i in range(len(target))]
    named_t = to_named(sig, xs, t, fresh)
    env = {xs[i]: to_named(sig, ys, img, fresh) for i, img in enumerate(images)}
    return from_named(sig, ys, named_subst(named_t, env))


def mirror_rename(sig, ctx, target, t, mapping):
    """Independent route for rename: through the named mirror and back."""
    fresh = itertools.count()
    xs = [f"c{i}" for i in range(len(ctx))]
    ys = [f"d{i}" for i in range(len(target))]
    named_t = to_named(sig, xs, t, fresh)
    renamed = named_rename(named_t, {xs[i]: ys[j] for i, j in enumerate(mapping)})
    return from_named(sig, ys, renamed)


# ---------------------------------------------------------------------------
# Counting


def ulc_stage_count(k: int, n: int) -> int:
    """|A_k(n)| for the untyped lambda calculus, from the arity recurrence."""
    if k <= 0:
        return 0
    prev = ulc_stage_count(k - 1, n)
    return n + prev * prev + ulc_stage_count(k - 1, n + 1)


# ---------------------------------------------------------------------------
# Generate-then-filter enumeration


def unchecked_trees(sig, depth, max_var, max_sort_depth=None):
    """All term trees of constructor depth <= depth, ignoring scoping and
    sorting entirely; variables range over 0 .. max_var - 1."""
    if depth <= 0:
        return []
    smaller = unchecked_trees(sig, depth - 1, max_var, max_sort_depth)
    out = [Var(i) for i in range(max_var)]
    for schema in sig.schemas:
        for params, arity in instantiations(sig, schema.name, max_sort_depth):
            for args in product(smaller, repeat=len(arity.inputs)):
                out.append(Op(schema.name, params, tuple(args)))
    return out


def well_formed_terms(sig, ctx, sort, depth, max_sort_depth=None):
    """Every well-formed term of depth <= depth at (ctx, sort), found by
    filtering raw trees through the well-formedness judgment."""
    max_binders = depth  # a tree of depth d sits under < d binders
    max_var = len(ctx) + max_binders
    seen = set()
    keep = []
    for t in unchecked_trees(sig, depth, max_var, max_sort_depth):
        if t in seen:
            continue
        seen.add(t)
        try:
            if sort_of(sig, ctx, t) == sort:
                keep.append(t)
        except BindsigError:
            pass
    return keep


# ---------------------------------------------------------------------------
# Free variables, directly


def direct_free_vars(sig, t):
    if type(t) is Var:
        return {t.index}
    arity = sig.arity(t.name, t.params)
    out = set()
    for inp, arg in zip(arity.inputs, t.args):
        k = len(inp.bound)
        out.update(i - k for i in direct_free_vars(sig, arg) if i >= k)
    return out


__all__ = [
    "NVar",
    "NOp",
    "mirror_subst",
    "mirror_rename",
    "ulc_stage_count",
    "well_formed_terms",
    "direct_free_vars",
    "term_depth",
]
