"""Expansions of reals in non-integer bases beta in (1, 2).

Exact-arithmetic toolkit for greedy/lazy digit expansions, Parry
admissibility, normalization and anti-normalization, universal expansions,
branching trees of all expansions of a point, and sequence statistics.
"""

from .branching import (
    BranchTree,
    DimensionEstimate,
    GammaReport,
    UniquenessVerdict,
    branching_compactum_prefix,
    count_expansions,
    digit_options,
    estimate_unique_dim,
    expand_tree,
    in_U_beta,
    is_full_branching,
    is_unique_expansion,
    komornik_loreti,
    thue_morse,
    tm_word,
    unique_value_from_sequence,
)
from .errors import (
    BackendUnsupportedError,
    BetaExpError,
    BudgetExhaustedError,
    DomainError,
    HorizonExhaustedError,
    LengthCapExceededError,
    MixedBaseError,
    NoRootInIntervalError,
    NodeBudgetExceededError,
    NotAdmissibleError,
    NotFinitaryError,
    OccurrenceNotFoundError,
    OutOfDomainError,
    ParseError,
    PrecisionCapExceededError,
    QuasiGreedyUnavailableError,
    ResolutionError,
    RootOutsideUnitRangeError,
    UndecidedError,
    UndeterminedWithinHorizonError,
    ValueExceedsOneError,
)
from .expansion import (
    DigitStream,
    GreedyDigitStream,
    QuasiGreedyResult,
    beta_power,
    greedy_expansion,
    is_admissible,
    lazy_expansion,
    quasi_greedy_exact,
    quasi_greedy_of_one,
    quasi_greedy_prefix,
    stream_truncation_bound,
    t_beta,
    val_beta,
    val_beta_eps,
)
from .normalize import (
    AntiNormalizeStep,
    CoverWord,
    FinitaryResult,
    NormalizeResult,
    SpliceRecord,
    UniversalExpansionResult,
    anti_normalize_step,
    enumerate_equivalent_words,
    find_cover_word,
    finitary_universalize,
    max_admissible_extension,
    normalize,
    universal_expansion,
)
from .numeric import (
    UNDECIDED,
    AlgebraicBeta,
    Beta,
    DecimalBeta,
    FieldValue,
    fv_arith,
    fv_sign,
    fv_to_decimal,
    make_beta,
)
from .stats import (
    BlockFrequencyTable,
    ComplexityProfile,
    NormalityReport,
    SampleResult,
    block_frequencies,
    complexity,
    fair_coin_word,
    is_universal_prefix,
    normality_deviation,
    random_branch_expansion,
    sample_bernoulli_expansion,
)
from .words import EventuallyPeriodicSeq, all_words, invert_word, words_up_to

__version__ = "0.1.0"
