"""Decision procedures for constraint problems over ordered and
homogeneous base structures.

The package covers four layers: finite relational structures and
homomorphism search (`relstruct`), local-consistency derivation over
pluggable pattern spaces (`consistency`), polymorphism and identity
machinery for finite templates (`polyengine`), and two infinite-domain
front ends — expansions of the rational order (`temporal`) and reducts
of the generic tournament and random graph (`homog`) — with a common
command line in `cli`.
"""

from .consistency import (
    EMPTY_DERIVED,
    ConsistencyState,
    FinitePatterns,
    PatternSpace,
    establish_kl,
)
from .errors import (
    ArityError,
    ArityMismatch,
    BudgetExceeded,
    ClassMismatch,
    DomainMismatch,
    MalformedPattern,
    NotFree,
    OrbitCspError,
    ParameterError,
    ParseError,
    PreconditionFailed,
    ShapeUnsupported,
    SignatureMismatch,
    UnknownVariable,
    UnsupportedBase,
)
from .homog import (
    G2_BEHAVIOR,
    GRAPH,
    TOURNAMENT,
    Base,
    HomogPatterns,
    HomogTemplate,
    Label,
    LabeledType,
    PairBehavior,
    Shape,
    TypeSetRelation,
    Verdict,
    VerdictKind,
    behavior_image,
    behavior_preserves,
    classify_reduct,
    confirm_no_behavior,
    enumerate_types,
    homog_template,
    kfree,
    search_behavior,
    solve_instance_brute,
    type_set_relation,
)
from .polyengine import (
    AND2,
    CONST0,
    CONST1,
    IDEMPOTENT,
    MAJ3,
    MAJORITY,
    MINORITY,
    OR2,
    SEMILATTICE,
    SIGGERS,
    XOR3,
    BooleanClass,
    IdentitySystem,
    OpTable,
    boolean_classify,
    cyclic,
    find_polymorphism,
    preserves_op,
    satisfies_identities,
    schaefer_solve,
    wnu,
)
from .relstruct import (
    FiniteStructure,
    Instance,
    Relation,
    hom_search,
    make_instance,
    power_structure,
    structure_as_instance,
)
from .temporal import (
    LT,
    LT_TYPE,
    SignedWeakOrderType,
    TemporalCounterexample,
    TemporalOp,
    TemporalPatterns,
    TemporalRelation,
    TemporalTemplate,
    TemporalVerdict,
    WeakOrderType,
    apply_temporal_op,
    brute_oracle,
    build_afin,
    classify_temporal,
    enumerate_weak_orders,
    free_set_containing,
    is_free_set,
    minimal_free_set,
    preserves_temporal,
    solve_master,
    temporal_relation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
