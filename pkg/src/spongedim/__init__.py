"""Mean dimensions of Bedford-McMullen sponge systems over subshifts."""

from .dimension import (
    DimensionReport,
    analyze,
    classical_sponge_dimensions,
    mean_hausdorff_dimension,
    metric_mean_dimension,
    uniform_fibre_check,
)
from .entropy import determinize_projection, entropies, perron_root, topological_entropy
from .errors import (
    ConvergenceError,
    DeterminizationError,
    IllegalWordError,
    LevelError,
    ResourceLimitError,
    SpecError,
    SpongeError,
    VerificationError,
)
from .geometry import (
    cover_count,
    cube_cover,
    finite_scale_mdim_ratio,
    level_depths,
    metric_comparison_check,
    separated_set,
    verify_sandwich,
)
from .measures import CylinderSpec, build_fN, log_mu_cylinder
from .subshift import SpongeSpec, count_words, enumerate_words, fiber, project_word, word_table
from .variational import (
    BernoulliModel,
    MarkovModel,
    markov_lower_bound,
    optimize_bernoulli,
    parry_measure,
    weighted_value_bernoulli,
)
from .weighted import exponents_and_weights, weighted_entropy_estimate, z_value

__version__ = "0.1.0"
