from itertools import product

import pytest

from bindsig import (
    ArrowSort,
    Assignment,
    BaseSort,
    Op,
    Placeholder,
    Renaming,
    TypeMorphism,
    Var,
    builtin,
    builtin_table,
    enumerate_terms,
    identity_table,
    make_table,
    map_context,
    mk_op,
    parse_table,
    rename,
    sort_of,
    subst,
    translate_term,
)
from bindsig.errors import (
    MissingClause,
    OffsetMismatch,
    SortMismatch,
    TypeSystemMismatch,
    UnknownBuiltin,
)

STAR = BaseSort("*")
IOTA = BaseSort("iota")
ARR = ArrowSort(IOTA, IOTA)


@pytest.fixture(scope="module")
def fol2ll():
    return builtin_table("fol2ll")


@pytest.fixture(scope="module")
def stlc2ulc():
    return builtin_table("stlc2ulc")


def erase_morphism(stlc, ulc):
    return TypeMorphism.collapse(stlc.types, ulc.types)


# ---------------------------------------------------------------------------
# type morphisms and context images


def test_map_context_collapse(stlc, ulc):
    g = erase_morphism(stlc, ulc)
    assert map_context(g, (ARR, IOTA)) == (STAR, STAR)


def test_map_context_empty(stlc, ulc):
    assert map_context(erase_morphism(stlc, ulc), ()) == ()


def test_map_context_homomorphic_base_swap():
    from bindsig import TypeSystem

    two = TypeSystem(("a", "b"), arrow_enabled=True)
    g = TypeMorphism(two, two, {"a": BaseSort("b"), "b": BaseSort("a")})
    got = map_context(g, (ArrowSort(BaseSort("a"), BaseSort("b")),))
    assert got == (ArrowSort(BaseSort("b"), BaseSort("a")),)


def test_map_context_commutes_with_extension(stlc, ulc):
    g = erase_morphism(stlc, ulc)
    ctx = (IOTA,)
    bound = (ARR, IOTA)
    assert map_context(g, bound + ctx) == map_context(g, bound) + map_context(g, ctx)


def test_homomorphic_needs_target_arrows(stlc, ulc):
    with pytest.raises(TypeSystemMismatch):
        TypeMorphism(stlc.types, ulc.types, {"iota": STAR}, "homomorphic")


def test_collapse_needs_untyped_target(stlc):
    with pytest.raises(TypeSystemMismatch):
        TypeMorphism.collapse(stlc.types, stlc.types)


# ---------------------------------------------------------------------------
# table validation


def test_fol2ll_is_valid(fol2ll):
    assert set(fol2ll.clauses) == {s.name for s in fol2ll.source.schemas}


def test_missing_clause_rejected(fol, ll):
    clauses = dict(builtin_table("fol2ll").clauses)
    del clauses["imp"]
    with pytest.raises(MissingClause):
        make_table(fol, ll, TypeMorphism.collapse(fol.types, ll.types), clauses)


def test_offset_mismatch_rejected(fol, ll):
    clauses = dict(builtin_table("fol2ll").clauses)
    # forall's argument binds one variable; using it at offset 0 must fail
    clauses["forall"] = Placeholder(0)
    with pytest.raises(OffsetMismatch):
        make_table(fol, ll, TypeMorphism.collapse(fol.types, ll.types), clauses)


def test_placeholder_out_of_range_rejected(fol, ll):
    clauses = dict(builtin_table("fol2ll").clauses)
    clauses["neg"] = Op("bang", (), (Placeholder(1),))
    with pytest.raises(OffsetMismatch):
        make_table(fol, ll, TypeMorphism.collapse(fol.types, ll.types), clauses)


def test_identity_table_is_valid(ulc, fol, stlc):
    for sig in (ulc, fol, stlc):
        table = identity_table(sig)
        assert set(table.clauses) == {s.name for s in sig.schemas}


def test_unknown_builtin_table():
    with pytest.raises(UnknownBuiltin):
        builtin_table("ulc2fol")


def test_placeholder_duplication_at_same_offset_allowed(fol, ll):
    clauses = dict(builtin_table("fol2ll").clauses)
    clauses["neg"] = Op("with", (), (Placeholder(0), Placeholder(0)))
    table = make_table(fol, ll, TypeMorphism.collapse(fol.types, ll.types), clauses)
    got = translate_term(table, (STAR,), Op("neg", (), (Var(0),)))
    assert got == Op("with", (), (Var(0), Var(0)))


# ---------------------------------------------------------------------------
# the paper's first-order-to-linear clauses, one constructor at a time


def check_clause(table, src_term, expected, n_vars=0):
    ctx = (STAR,) * n_vars
    got = translate_term(table, ctx, src_term)
    assert got == expected
    assert sort_of(table.target, map_context(table.morphism, ctx), got) == STAR


def test_clause_top(fol2ll):
    check_clause(fol2ll, Op("top"), Op("top"))


def test_clause_bot(fol2ll):
    check_clause(fol2ll, Op("bot"), Op("bot"))


def test_clause_neg(fol2ll):
    # (not A)° = !A° -o 0
    check_clause(
        fol2ll,
        Op("neg", (), (Var(0),)),
        Op("lolli", (), (Op("bang", (), (Var(0),)), Op("zero"))),
        n_vars=1,
    )


def test_clause_and(fol2ll):
    # (A and B)° = A° & B°
    check_clause(
        fol2ll,
        Op("and", (), (Var(0), Var(1))),
        Op("with", (), (Var(0), Var(1))),
        n_vars=2,
    )


def test_clause_or(fol2ll):
    # (A or B)° = !A° (+) !B°
    check_clause(
        fol2ll,
        Op("or", (), (Var(0), Var(1))),
        Op("oplus", (), (Op("bang", (), (Var(0),)), Op("bang", (), (Var(1),)))),
        n_vars=2,
    )


def test_clause_imp(fol2ll):
    # (A => B)° = !A° -o B°
    check_clause(
        fol2ll,
        Op("imp", (), (Op("top"), Op("bot"))),
        Op("lolli", (), (Op("bang", (), (Op("top"),)), Op("bot"))),
    )


def test_clause_exists(fol2ll):
    # (exists x. A)° = exists x. !A° with the binder preserved
    check_clause(
        fol2ll,
        Op("exists", (), (Var(0),)),
        Op("exists", (), (Op("bang", (), (Var(0),)),)),
    )


def test_clause_forall(fol2ll):
    # (forall x. A)° = forall x. A°
    check_clause(
        fol2ll,
        Op("forall", (), (Var(0),)),
        Op("forall", (), (Var(0),)),
    )


# ---------------------------------------------------------------------------
# erasure


def test_erasure_abs(stlc2ulc, stlc):
    t, _ = mk_op(stlc, (), "abs", (IOTA, IOTA), (Var(0),))
    assert translate_term(stlc2ulc, (), t) == Op("abs", (), (Var(0),))


def test_erasure_app_collapses_all_instances(stlc2ulc, stlc):
    for s, t in ((IOTA, IOTA), (ARR, IOTA), (IOTA, ARR)):
        ctx = (ArrowSort(s, t), s)
        node, _ = mk_op(stlc, ctx, "app", (s, t), (Var(0), Var(1)))
        assert translate_term(stlc2ulc, ctx, node) == Op("app", (), (Var(0), Var(1)))


def test_erased_terms_are_well_formed_untyped(stlc2ulc, stlc, ulc):
    for ctx in ((), (IOTA,), (ARR, IOTA)):
        for sort in (IOTA, ARR):
            for t in enumerate_terms(stlc, ctx, sort, 3, max_sort_depth=1):
                erased = translate_term(stlc2ulc, ctx, t)
                assert sort_of(ulc, map_context(stlc2ulc.morphism, ctx), erased) == STAR


# ---------------------------------------------------------------------------
# properties


def test_identity_table_is_identity_translation(ulc, stlc):
    table = identity_table(ulc)
    for t in enumerate_terms(ulc, (STAR,), STAR, 3):
        assert translate_term(table, (STAR,), t) == t
    typed = identity_table(stlc)
    for t in enumerate_terms(stlc, (IOTA,), IOTA, 3, max_sort_depth=1):
        assert translate_term(typed, (IOTA,), t) == t


def test_translation_substitution_square_sampled(fol2ll, fol, ll):
    src, dst = (STAR, STAR), (STAR,)
    pools = [enumerate_terms(fol, dst, STAR, 1) for _ in src]
    for images in product(*pools):
        sigma = Assignment(src, dst, images)
        translated_sigma = Assignment(
            map_context(fol2ll.morphism, src),
            map_context(fol2ll.morphism, dst),
            tuple(translate_term(fol2ll, dst, img) for img in images),
        )
        for t in enumerate_terms(fol, src, STAR, 3):
            lhs = translate_term(fol2ll, dst, subst(fol, t, sigma))
            rhs = subst(ll, translate_term(fol2ll, src, t), translated_sigma)
            assert lhs == rhs


def test_translation_renaming_square(fol2ll, fol, ll):
    src, dst = (STAR, STAR), (STAR, STAR, STAR)
    rho = Renaming(src, dst, (2, 0))
    image_rho = Renaming(
        map_context(fol2ll.morphism, src), map_context(fol2ll.morphism, dst), (2, 0)
    )
    for t in enumerate_terms(fol, src, STAR, 3):
        lhs = translate_term(fol2ll, dst, rename(fol, t, rho))
        rhs = rename(ll, translate_term(fol2ll, src, t), image_rho)
        assert lhs == rhs


def test_sort_coherence_erasure(stlc2ulc, stlc, ulc):
    g = stlc2ulc.morphism
    for ctx in ((), (IOTA,), (IOTA, ARR)):
        for sort in (IOTA, ARR):
            for t in enumerate_terms(stlc, ctx, sort, 3, max_sort_depth=1):
                out = translate_term(stlc2ulc, ctx, t)
                assert sort_of(ulc, map_context(g, ctx), out) == g.apply(sort)


# ---------------------------------------------------------------------------
# table files


FOL2LL_FILE = """
translate fol -> ll erase-types
clause top = (op top)
clause bot = (op bot)
clause neg = (op lolli (op bang (ph 0)) (op zero))
clause and = (op with (ph 0) (ph 1))
clause or = (op oplus (op bang (ph 0)) (op bang (ph 1)))
clause imp = (op lolli (op bang (ph 0)) (ph 1))
clause forall = (op forall (ph 0))
clause exists = (op exists (op bang (ph 0)))
"""


def test_parse_table_matches_builtin(fol2ll):
    parsed = parse_table(FOL2LL_FILE)
    assert parsed.clauses == dict(fol2ll.clauses)
    assert parsed.morphism.mode == "collapse"


def test_parse_table_parameterized_identity(stlc):
    text = (
        "translate stlc -> stlc\n"
        "clause app<s,t> = (op app<s,t> (ph 0) (ph 1))\n"
        "clause abs<s,t> = (op abs<s,t> (ph 0))\n"
    )
    table = parse_table(text)
    t, _ = mk_op(stlc, (), "abs", (IOTA, IOTA), (Var(0),))
    assert translate_term(table, (), t) == t


def test_parse_table_missing_clause():
    with pytest.raises(MissingClause):
        parse_table("translate fol -> ll erase-types\nclause top = (op top)\n")


def test_parse_table_sort_error():
    bad = FOL2LL_FILE.replace("clause top = (op top)", "clause top = (op bang (ph 0))")
    with pytest.raises((SortMismatch, OffsetMismatch)):
        parse_table(bad)
