"""The recursion principle: user models, folds, and the law harness.

A model supplies, for every context, a carrier of values together with a
variable operation, an interpretation of every constructor, and a
value-level simultaneous substitution (the Kleisli form).  The fold maps
every well-formed term into the model; the three law suites check that
the model is a lawful substitution monoid, that constructors commute
with substitution (the module squares), and that the fold itself is a
morphism of models.  Suites report every failure with a witness; they
never throw on a failed law.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .errors import TypedSignature
from .rng import XorShift64Star
from .sigdef import Signature
from .subst import Assignment, Renaming, rename, subst
from .term import (
    Context,
    Op,
    Term,
    Var,
    chain_count,
    enumerate_terms,
    mk_op,
    print_context,
    print_term,
    random_term,
)

__all__ = [
    "ModelSpec",
    "LawFailure",
    "LawReport",
    "fold",
    "term_model",
    "fv_model",
    "check_monoid_laws",
    "check_module_laws",
    "check_morphism",
    "Sample",
    "sample_suite",
    "run_law_suites",
    "lift_value_assignment",
]


@dataclass(frozen=True)
class ModelSpec:
    """Carrier operations of a model.

    var_op(ctx, i)                      -- value of variable i over ctx
    op_interp(ctx, name, params, vals)  -- constructor applied to argument
                                           values, each over its extended
                                           context
    msubst(src, dst, value, images)     -- value-level substitution: value
                                           over src, one image per position
                                           of src, each over dst
    show(value)                         -- rendering used in law reports

    All operations must be pure; values must support ``==``.
    """

    name: str
    var_op: Callable[[Context, int], Any]
    op_interp: Callable[[Context, str, tuple, tuple], Any]
    msubst: Callable[[Context, Context, Any, tuple], Any]
    show: Callable[[Any], str] = repr


def fold(model: ModelSpec, sig: Signature, ctx: Context, t: Term) -> Any:
    """The unique structure map: variables to var_op, nodes to op_interp."""
    ctx = tuple(ctx)
    if type(t) is Var:
        return model.var_op(ctx, t.index)
    arity = sig.arity(t.name, t.params)
    vals = tuple(
        fold(model, sig, inp.bound + ctx, arg) for inp, arg in zip(arity.inputs, t.args)
    )
    return model.op_interp(ctx, t.name, t.params, vals)


def term_model(sig: Signature) -> ModelSpec:
    """The initial model: terms with mk_op and subst as the structure."""

    def var_op(ctx, i):
        return Var(i)

    def op_interp(ctx, name, params, vals):
        term, _sort = mk_op(sig, ctx, name, params, vals)
        return term

    def msubst(src, dst, value, images):
        return subst(sig, value, Assignment(src, dst, tuple(images)))

    return ModelSpec("term", var_op, op_interp, msubst, print_term)


def fv_model(sig: Signature) -> ModelSpec:
    """Free-variable sets over an untyped signature.

    The named-set description (keep the variables of the ambient context)
    becomes drop-and-shift under de Bruijn: an input under k binders
    contributes { i - k : i in U, i >= k }.
    """
    if not sig.types.untyped:
        raise TypedSignature("the free-variables model needs a single-sorted signature")

    def var_op(ctx, i):
        return frozenset((i,))

    def op_interp(ctx, name, params, vals):
        arity = sig.arity(name, params)
        out = set()
        for inp, val in zip(arity.inputs, vals):
            k = len(inp.bound)
            out.update(i - k for i in val if i >= k)
        return frozenset(out)

    def msubst(src, dst, value, images):
        out = set()
        for i in value:
            out.update(images[i])
        return frozenset(out)

    def show(value):
        return "{" + ", ".join(str(i) for i in sorted(value)) + "}"

    return ModelSpec("fv", var_op, op_interp, msubst, show)


def lift_value_assignment(model: ModelSpec, src, dst, images, bound):
    """The model-level binder lift.

    Fresh positions map to their own variables; the remaining images are
    weakened by substituting shifted variables, which is how renaming is
    expressed inside a Kleisli model.
    """
    bound = tuple(bound)
    if not bound:
        return src, dst, tuple(images)
    n = len(bound)
    new_src = bound + tuple(src)
    new_dst = bound + tuple(dst)
    shift = tuple(model.var_op(new_dst, i + n) for i in range(len(dst)))
    lifted = tuple(model.var_op(new_dst, i) for i in range(n)) + tuple(
        model.msubst(dst, new_dst, img, shift) for img in images
    )
    return new_src, new_dst, lifted


# ---------------------------------------------------------------------------
# Law reports


@dataclass(frozen=True)
class LawFailure:
    law: str
    witness: str
    lhs: str
    rhs: str


@dataclass
class LawReport:
    suite: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_lines(self) -> list[str]:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"[{self.suite}] cases={self.cases} failures={len(self.failures)} {status}"]
        for f in self.failures:
            lines.append(
                f"[{self.suite}] FAIL law={f.law} witness={f.witness} lhs={f.lhs} rhs={f.rhs}"
            )
        return lines

    def to_records(self) -> list[str]:
        recs = [
            json.dumps(
                {
                    "suite": self.suite,
                    "cases": self.cases,
                    "failures": len(self.failures),
                    "status": "pass" if self.passed else "fail",
                },
                sort_keys=True,
            )
        ]
        for f in self.failures:
            recs.append(
                json.dumps(
                    {
                        "suite": self.suite,
                        "law": f.law,
                        "status": "fail",
                        "witness": f.witness,
                        "lhs": f.lhs,
                        "rhs": f.rhs,
                    },
                    sort_keys=True,
                )
            )
        return recs


# ---------------------------------------------------------------------------
# Samples: term-level cases folded into the model on demand


@dataclass(frozen=True)
class Sample:
    """One law-check case: a term with two composable assignments.

    sigma : src => mid and tau : mid => dst; ren, when present, is a
    renaming src => mid used by the renaming squares.
    """

    src: Context
    mid: Context
    dst: Context
    term: Term
    sigma: Assignment
    tau: Assignment
    ren: Optional[Renaming] = None


def _contexts_for(sig: Signature, sizes: Sequence[int], max_sort_depth) -> list[Context]:
    if sig.types.untyped:
        star = sig.types.single_sort()
        return [(star,) * n for n in sizes]
    # Typed signatures: repeat the first base sort; enough for a
    # deterministic representative suite.
    from .sigdef import BaseSort

    base = BaseSort(sig.types.base_sorts[0])
    return [(base,) * n for n in sizes]


def _sort_pool(sig: Signature, max_sort_depth):
    from .sigdef import sorts_up_to_depth

    if sig.types.untyped:
        return [sig.types.single_sort()]
    return sorts_up_to_depth(sig.types, min(max_sort_depth or 1, 1))


def sample_suite(
    sig: Signature,
    depth: int = 3,
    ctx_sizes: Sequence[int] = (0, 1, 2),
    assign_depth: int = 2,
    seed: int = 0,
    random_cases: int = 0,
    random_depth: int = 6,
    max_sort_depth: int | None = None,
    assignment_cap: int = 8,
) -> list[Sample]:
    """Deterministic law-suite samples.

    Exhaustive part: every enumerated term at ``depth`` over the given
    contexts, paired with assignments whose images are enumerated at
    ``assign_depth`` (capped at ``assignment_cap`` per context pair, in
    enumeration order).  Random part: ``random_cases`` seeded draws of
    terms at ``random_depth`` with random assignment images.
    """
    from itertools import product as iproduct

    rng = XorShift64Star(seed)
    contexts = _contexts_for(sig, ctx_sizes, max_sort_depth)
    sorts = _sort_pool(sig, max_sort_depth)
    samples: list[Sample] = []

    def assignments(src: Context, dst: Context, cap: int) -> list[Assignment]:
        pools = [
            enumerate_terms(sig, dst, s, assign_depth, max_sort_depth) for s in src
        ]
        if any(not p for p in pools):
            return []
        out = []
        for images in iproduct(*pools):
            out.append(Assignment(src, dst, images))
            if len(out) >= cap:
                break
        return out

    def renamings(src: Context, dst: Context) -> list[Renaming]:
        if len(src) > len(dst):
            return []
        out = []
        candidates = [
            [j for j, s in enumerate(dst) if s == entry] for entry in src
        ]
        if any(not c for c in candidates):
            return []
        for mapping in iproduct(*candidates):
            out.append(Renaming(src, dst, mapping))
        return out

    for src in contexts:
        for mid in contexts:
            sigmas = assignments(src, mid, assignment_cap)
            rens = renamings(src, mid)
            for dst in contexts:
                taus = assignments(mid, dst, max(1, assignment_cap // 2))
                if not sigmas or not taus:
                    continue
                for sort in sorts:
                    terms = enumerate_terms(sig, src, sort, depth, max_sort_depth)
                    for i, t in enumerate(terms):
                        sigma = sigmas[i % len(sigmas)]
                        tau = taus[i % len(taus)]
                        ren = rens[i % len(rens)] if rens else None
                        samples.append(Sample(src, mid, dst, t, sigma, tau, ren))

    for _ in range(random_cases):
        src = rng.choice(contexts)
        mid = rng.choice(contexts)
        dst = rng.choice(contexts)
        sort = rng.choice(sorts)
        if chain_count(sig, src, sort, random_depth, max_sort_depth) == 0:
            continue
        t = random_term(sig, src, sort, random_depth, rng, max_sort_depth)
        try:
            sigma = Assignment(
                src,
                mid,
                tuple(random_term(sig, mid, s, 3, rng, max_sort_depth) for s in src),
            )
            tau = Assignment(
                mid,
                dst,
                tuple(random_term(sig, dst, s, 3, rng, max_sort_depth) for s in mid),
            )
        except ValueError:
            continue
        samples.append(Sample(src, mid, dst, t, sigma, tau, None))
    return samples


# ---------------------------------------------------------------------------
# Law suites


def _witness(sample: Sample) -> str:
    return (
        f"ctx={print_context(sample.src)} term={print_term(sample.term)} "
        f"sigma=(assign {' '.join(print_term(x) for x in sample.sigma.images)}) "
        f"tau=(assign {' '.join(print_term(x) for x in sample.tau.images)})"
    )


def _law(report, show, law, sample, lhs_fn, rhs_fn, note=""):
    """Evaluate one law instance; failures (including raised exceptions,
    which broken models are free to produce) are recorded, never thrown."""
    report.cases += 1
    witness = None
    try:
        lhs = lhs_fn()
        rhs = rhs_fn()
        if lhs != rhs:
            witness = _witness(sample) + note
            report.failures.append(LawFailure(law, witness, show(lhs), show(rhs)))
    except Exception as e:  # noqa: BLE001 - model code is arbitrary
        witness = _witness(sample) + note
        report.failures.append(LawFailure(law, witness, f"<error: {e}>", ""))


def check_monoid_laws(model: ModelSpec, sig: Signature, samples: Sequence[Sample]) -> LawReport:
    """Kleisli-triple laws on the model carrier: variable lookup, identity
    substitution, and associativity of composed assignments."""
    report = LawReport(f"monoid:{model.name}")
    show = model.show
    for sample in samples:
        src, mid, dst = sample.src, sample.mid, sample.dst
        try:
            sigma_v = tuple(fold(model, sig, mid, img) for img in sample.sigma.images)
            tau_v = tuple(fold(model, sig, dst, img) for img in sample.tau.images)
            v = fold(model, sig, src, sample.term)
        except Exception as e:  # noqa: BLE001
            report.cases += 1
            report.failures.append(
                LawFailure("fold", _witness(sample), f"<error: {e}>", "")
            )
            continue

        for i in range(len(src)):
            _law(
                report,
                show,
                "unit-var",
                sample,
                lambda i=i: model.msubst(src, mid, model.var_op(src, i), sigma_v),
                lambda i=i: sigma_v[i],
                note=f" position={i}",
            )

        identity = tuple(model.var_op(src, i) for i in range(len(src)))
        _law(
            report,
            show,
            "unit-id",
            sample,
            lambda: model.msubst(src, src, v, identity),
            lambda: v,
        )

        _law(
            report,
            show,
            "assoc",
            sample,
            lambda: model.msubst(mid, dst, model.msubst(src, mid, v, sigma_v), tau_v),
            lambda: model.msubst(
                src, dst, v, tuple(model.msubst(mid, dst, x, tau_v) for x in sigma_v)
            ),
        )
    return report


def check_module_laws(model: ModelSpec, sig: Signature, samples: Sequence[Sample]) -> LawReport:
    """Substitution/constructor squares: substituting into a constructor
    equals the constructor applied to substitutions under lifted
    assignments."""
    report = LawReport(f"module:{model.name}")
    show = model.show
    for sample in samples:
        t = sample.term
        if type(t) is not Op:
            continue
        src, mid = sample.src, sample.mid
        arity = sig.arity(t.name, t.params)

        def lhs_fn(t=t, src=src, mid=mid, arity=arity, sample=sample):
            sigma_v = tuple(fold(model, sig, mid, img) for img in sample.sigma.images)
            vals = tuple(
                fold(model, sig, inp.bound + src, arg)
                for inp, arg in zip(arity.inputs, t.args)
            )
            return model.msubst(
                src, mid, model.op_interp(src, t.name, t.params, vals), sigma_v
            )

        def rhs_fn(t=t, src=src, mid=mid, arity=arity, sample=sample):
            sigma_v = tuple(fold(model, sig, mid, img) for img in sample.sigma.images)
            vals = tuple(
                fold(model, sig, inp.bound + src, arg)
                for inp, arg in zip(arity.inputs, t.args)
            )
            sub_vals = []
            for inp, val in zip(arity.inputs, vals):
                lsrc, ldst, lparts = lift_value_assignment(model, src, mid, sigma_v, inp.bound)
                sub_vals.append(model.msubst(lsrc, ldst, val, lparts))
            return model.op_interp(mid, t.name, t.params, tuple(sub_vals))

        _law(report, show, f"module:{t.name}", sample, lhs_fn, rhs_fn)
    return report


def check_morphism(
    model: ModelSpec,
    sig: Signature,
    samples: Sequence[Sample],
    fold_fn: Callable = fold,
) -> LawReport:
    """The fold respects constructors, substitution, and renaming.

    ``fold_fn`` defaults to the library fold; the mutation tests pass a
    deliberately corrupted fold and expect reported failures.
    """
    report = LawReport(f"morphism:{model.name}")
    show = model.show
    for sample in samples:
        t = sample.term
        src, mid = sample.src, sample.mid

        _law(
            report,
            show,
            "fold-subst",
            sample,
            lambda t=t, sample=sample, mid=mid: fold_fn(
                model, sig, mid, subst(sig, t, sample.sigma)
            ),
            lambda t=t, sample=sample, src=src, mid=mid: model.msubst(
                src,
                mid,
                fold_fn(model, sig, src, t),
                tuple(fold_fn(model, sig, mid, img) for img in sample.sigma.images),
            ),
        )

        if type(t) is Var:
            _law(
                report,
                show,
                "fold-var",
                sample,
                lambda t=t, src=src: fold_fn(model, sig, src, t),
                lambda t=t, src=src: model.var_op(src, t.index),
            )
        else:
            arity = sig.arity(t.name, t.params)
            _law(
                report,
                show,
                f"fold-op:{t.name}",
                sample,
                lambda t=t, src=src: fold_fn(model, sig, src, t),
                lambda t=t, src=src, arity=arity: model.op_interp(
                    src,
                    t.name,
                    t.params,
                    tuple(
                        fold_fn(model, sig, inp.bound + src, arg)
                        for inp, arg in zip(arity.inputs, t.args)
                    ),
                ),
            )

        if sample.ren is not None:
            ren = sample.ren
            _law(
                report,
                show,
                "fold-rename",
                sample,
                lambda t=t, ren=ren: fold_fn(model, sig, ren.target, rename(sig, t, ren)),
                lambda t=t, ren=ren, src=src: model.msubst(
                    src,
                    ren.target,
                    fold_fn(model, sig, src, t),
                    tuple(model.var_op(ren.target, j) for j in ren.mapping),
                ),
            )
    return report


def run_law_suites(
    sig: Signature,
    model_name: str = "term",
    depth: int = 3,
    seed: int = 0,
    cases: int = 0,
    max_sort_depth: int | None = None,
) -> list[LawReport]:
    """The three suites over a deterministic sample set; used by the CLI."""
    if model_name == "term":
        model = term_model(sig)
    elif model_name == "fv":
        model = fv_model(sig)
    else:
        raise ValueError(f"unknown model {model_name!r}")
    samples = sample_suite(
        sig,
        depth=depth,
        seed=seed,
        random_cases=cases,
        max_sort_depth=max_sort_depth,
    )
    return [
        check_monoid_laws(model, sig, samples),
        check_module_laws(model, sig, samples),
        check_morphism(model, sig, samples),
    ]
