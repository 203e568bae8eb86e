"""Renaming, binder lifting, and capture-avoiding simultaneous substitution.

Substitution is direct structural recursion with an assignment that gets
lifted at every binder: under a binder for ``bound``, position i < |bound|
maps to Var(i) and position i >= |bound| maps to the image of i - |bound|
weakened by |bound|.  Together with variable lookup this is exactly the
Kleisli presentation of the initial model's monoid multiplication, and the
law suites in :mod:`bindsig.model` check it as such.

Lifted renamings and assignments are memoized on the signature: the law
suites re-lift the same few hundred assignments millions of times.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ContextMismatch, ScopeError, SortMismatch
from .sigdef import Signature, Sort, print_sort
from .term import Context, Op, Term, Var, sort_of

__all__ = [
    "Renaming",
    "Assignment",
    "rename",
    "weaken",
    "lift_renaming",
    "lift_assignment",
    "subst",
    "subst1",
    "kleisli_compose",
    "id_assignment",
    "assignment_of_renaming",
    "make_assignment",
    "identity_renaming",
]


@dataclass(frozen=True, slots=True)
class Renaming:
    """Sort-preserving map of positions from source to target context."""

    source: Context
    target: Context
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != len(self.source):
            raise ContextMismatch(
                f"renaming maps {len(self.mapping)} positions, source has {len(self.source)}"
            )
        for i, j in enumerate(self.mapping):
            if not (0 <= j < len(self.target)):
                raise ScopeError(f"renaming sends {i} to {j}, outside the target context")
            if self.target[j] != self.source[i]:
                raise SortMismatch(
                    f"renaming sends a {print_sort(self.source[i])} position "
                    f"to a {print_sort(self.target[j])} position"
                )

    def __call__(self, i: int) -> int:
        return self.mapping[i]


@dataclass(frozen=True, slots=True)
class Assignment:
    """Per-position map from a source context to terms over a target context.

    Construction does not validate the images (hot paths build assignments
    that are correct by construction); use :func:`make_assignment` for
    checked construction.
    """

    source: Context
    target: Context
    images: tuple[Term, ...]

    def __call__(self, i: int) -> Term:
        return self.images[i]


def make_assignment(sig: Signature, source, target, images: Sequence[Term]) -> Assignment:
    source = tuple(source)
    target = tuple(target)
    images = tuple(images)
    if len(images) != len(source):
        raise ContextMismatch(
            f"assignment has {len(images)} images, source context has {len(source)}"
        )
    for i, (s, img) in enumerate(zip(source, images)):
        found = sort_of(sig, target, img)
        if found != s:
            raise SortMismatch(
                f"image of position {i} has sort {print_sort(found)}, expected {print_sort(s)}"
            )
    return Assignment(source, target, images)


def identity_renaming(ctx: Context) -> Renaming:
    return Renaming(ctx, ctx, tuple(range(len(ctx))))


def lift_renaming(ren: Renaming, bound: tuple[Sort, ...]) -> Renaming:
    """Identity on the |bound| fresh positions, ren shifted above them."""
    if not bound:
        return ren
    n = len(bound)
    mapping = tuple(range(n)) + tuple(j + n for j in ren.mapping)
    return Renaming(bound + ren.source, bound + ren.target, mapping)


def rename(sig: Signature, t: Term, ren: Renaming) -> Term:
    """Functorial action: reindex free variables, lifting under binders."""
    cache = sig._cache
    mapping = ren.mapping

    def go(t: Term, ren: Renaming, mapping) -> Term:
        if type(t) is Var:
            return Var(mapping[t.index])
        arity = sig.arity(t.name, t.params)
        args = []
        for inp, arg in zip(arity.inputs, t.args):
            if inp.bound:
                key = ("rlift", ren, inp.bound)
                lifted = cache.get(key)
                if lifted is None:
                    lifted = lift_renaming(ren, inp.bound)
                    cache[key] = lifted
                args.append(go(arg, lifted, lifted.mapping))
            else:
                args.append(go(arg, ren, mapping))
        return Op(t.name, t.params, tuple(args))

    return go(t, ren, mapping)


def weaken(sig: Signature, ctx: Context, t: Term, bound: Sequence[Sort]) -> Term:
    """Shift ``t`` from ctx into bound ++ ctx (rename by i -> i + |bound|)."""
    bound = tuple(bound)
    if not bound:
        return t
    ctx = tuple(ctx)
    n = len(bound)
    ren = Renaming(ctx, bound + ctx, tuple(i + n for i in range(len(ctx))))
    return rename(sig, t, ren)


def id_assignment(ctx: Context) -> Assignment:
    ctx = tuple(ctx)
    return Assignment(ctx, ctx, tuple(Var(i) for i in range(len(ctx))))


def assignment_of_renaming(ren: Renaming) -> Assignment:
    return Assignment(ren.source, ren.target, tuple(Var(j) for j in ren.mapping))


def lift_assignment(sig: Signature, a: Assignment, bound: Sequence[Sort]) -> Assignment:
    """The binder lift: fresh positions map to themselves, the rest weaken."""
    bound = tuple(bound)
    if not bound:
        return a
    key = ("alift", a, bound)
    hit = sig._cache.get(key)
    if hit is not None:
        return hit
    fresh = tuple(Var(i) for i in range(len(bound)))
    shifted = tuple(weaken(sig, a.target, img, bound) for img in a.images)
    lifted = Assignment(bound + a.source, bound + a.target, fresh + shifted)
    sig._cache[key] = lifted
    return lifted


def subst(sig: Signature, t: Term, a: Assignment) -> Term:
    """Capture-avoiding simultaneous substitution of ``a`` into ``t``."""
    cache = sig._cache

    def go(t: Term, a: Assignment) -> Term:
        if type(t) is Var:
            return a.images[t.index]
        arity = sig.arity(t.name, t.params)
        args = []
        for inp, arg in zip(arity.inputs, t.args):
            if inp.bound:
                key = ("alift", a, inp.bound)
                lifted = cache.get(key)
                if lifted is None:
                    lifted = lift_assignment(sig, a, inp.bound)
                args.append(go(arg, lifted))
            else:
                args.append(go(arg, a))
        return Op(t.name, t.params, tuple(args))

    return go(t, a)


def subst1(sig: Signature, ctx, sort: Sort, t: Term, u: Term) -> Term:
    """Unary substitution: ``t`` over [sort] ++ ctx, ``u`` for index 0.

    A special case of simultaneous substitution: 0 maps to u and i+1 to
    Var(i), which lowers the remaining free indices by one.
    """
    ctx = tuple(ctx)
    found = sort_of(sig, ctx, u)
    if found != sort:
        raise SortMismatch(
            f"substituted term has sort {print_sort(found)}, expected {print_sort(sort)}"
        )
    a = Assignment((sort,) + ctx, ctx, (u,) + tuple(Var(i) for i in range(len(ctx))))
    return subst(sig, t, a)


def kleisli_compose(sig: Signature, a: Assignment, b: Assignment) -> Assignment:
    """Sequential composition: position i maps to subst(a(i), b)."""
    if a.target != b.source:
        raise ContextMismatch("assignments do not compose: target of first != source of second")
    return Assignment(a.source, b.target, tuple(subst(sig, img, b) for img in a.images))
