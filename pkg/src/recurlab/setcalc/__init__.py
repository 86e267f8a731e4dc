"""Set expressions, exact and windowed classification, densities and witness constructors."""

from .classify import (
    INCONCLUSIVE, NO, YES, Verdict, classify, classify_infinite, classify_pws, classify_syndetic,
    classify_thick, default_level, recheck, syndetic_cap,
)
from .density import (
    DensityReport, FolnerSeq, GrowthError, banach_density, check_growth, folner_disjointify,
    folner_quotient, upper_density,
)
from .sets import (
    Complement, Contraction, Dilation, EventuallyPeriodic, Finite, FPGen, FSGen, Full, GreedySeparated,
    Inflation, Intersection, IntervalUnion, Neighborhood, Observed, Predicate, SetExpr, Translate, Union,
    chain_blocks, even_words, fs_generate, materialize, member, multiples, positive_integers, pow2_blocks,
    symmetric_intersection,
)
from .witness import (
    Block, BlockInterior, block_sequence, iter_blocks, dilation_split, find_separator, p1_witness_thick,
    separated_subset,
)
