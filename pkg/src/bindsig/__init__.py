"""Well-scoped de Bruijn syntax with derived substitution for declared
binding signatures, plus the substitution-safe recursion principle:
folds into user models, translation tables, and free models.
"""

from .errors import (
    ArityMismatch,
    BindsigError,
    ContextMismatch,
    DuplicateName,
    IllFormed,
    MalformedSort,
    MissingClause,
    OffsetMismatch,
    ParamArityMismatch,
    ParamKindMismatch,
    ParseError,
    ScopeError,
    SortMismatch,
    TypedSignature,
    TypeSystemMismatch,
    Unbounded,
    UnknownBuiltin,
    UnknownLabel,
    UnknownOp,
)
from .freemodel import (
    OperatorFamily,
    OpLabel,
    extend_signature,
    free_extend,
    parse_signature_with_operators,
    unit,
)
from .model import (
    LawFailure,
    LawReport,
    ModelSpec,
    check_module_laws,
    check_monoid_laws,
    check_morphism,
    fold,
    fv_model,
    run_law_suites,
    sample_suite,
    term_model,
)
from .rng import XorShift64Star
from .sigdef import (
    Arity,
    ArrowSort,
    BaseSort,
    ConstructorSchema,
    Input,
    Param,
    Signature,
    Sort,
    SortRef,
    TypeSystem,
    UNTYPED,
    builtin,
    instantiate,
    make_signature,
    parse_signature,
    parse_sort,
    print_signature,
    print_sort,
    sum_signatures,
)
from .subst import (
    Assignment,
    Renaming,
    assignment_of_renaming,
    id_assignment,
    identity_renaming,
    kleisli_compose,
    lift_assignment,
    lift_renaming,
    make_assignment,
    rename,
    subst,
    subst1,
    weaken,
)
from .term import (
    Context,
    Op,
    OpCase,
    Term,
    Var,
    VarCase,
    chain_count,
    ctx_extend,
    enumerate_terms,
    lambek_compose,
    lambek_decompose,
    mk_op,
    mk_var,
    parse_context,
    parse_term,
    print_context,
    print_term,
    random_term,
    sort_of,
    term_depth,
)
from .translate import (
    ParamRef,
    Placeholder,
    TranslationTable,
    TypeMorphism,
    builtin_table,
    identity_table,
    make_table,
    map_context,
    parse_table,
    translate_term,
)

__version__ = "0.1.0"
