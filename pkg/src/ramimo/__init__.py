"""Reconfigurable-antenna mmWave MIMO link toolkit.

Builds line-of-sight/Rician channel matrices for uniform linear arrays,
reshapes them entrywise with per-link antenna states, evaluates log-det
capacity (single-shot and Monte Carlo), models a multi-beam lens antenna,
searches quantized phase states exhaustively, and runs reproducible
capacity sweeps from declarative configs.
"""

from .antenna import (
    AntennaModel,
    BeamSelection,
    composite_gain,
    default_model,
    feed_gain,
    pattern_cut,
    select_feeds,
    state_entry,
)
from .backend import active_backend
from .capacity import (
    CapacityParams,
    CapacityResult,
    capacity,
    effective_rank,
    ergodic_capacity,
)
from .channel import (
    PURE_LOS,
    ChannelSpec,
    LosGeometry,
    RandomStream,
    RicianSpec,
    as_complex_matrix,
    los_channel,
    make_los_geometry,
    nlos_sample,
    rician_compose,
    spacing_for_eta,
)
from .errors import (
    ConfigError,
    CoverageError,
    FeedConflictError,
    ModelValidityError,
    RamimoError,
    SearchSpaceError,
    ValidationError,
)
from .harness import (
    ExperimentConfig,
    SweepRecord,
    parse_config,
    read_records,
    run_optimize,
    run_pattern,
    run_sweep,
    write_records,
)
from .optimizer import (
    PhaseAlphabet,
    SearchResult,
    exhaustive_state_search,
    optimal_separation_product,
)
from .reconfig import (
    StateMatrix,
    StateValidation,
    apply_state,
    canonical_state_2x2,
    validate_state,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "active_backend",
    # channel
    "PURE_LOS",
    "LosGeometry",
    "RicianSpec",
    "RandomStream",
    "ChannelSpec",
    "as_complex_matrix",
    "make_los_geometry",
    "spacing_for_eta",
    "los_channel",
    "nlos_sample",
    "rician_compose",
    # reconfig
    "StateMatrix",
    "StateValidation",
    "validate_state",
    "apply_state",
    "canonical_state_2x2",
    # capacity
    "CapacityParams",
    "CapacityResult",
    "capacity",
    "effective_rank",
    "ergodic_capacity",
    # antenna
    "AntennaModel",
    "BeamSelection",
    "default_model",
    "feed_gain",
    "composite_gain",
    "select_feeds",
    "state_entry",
    "pattern_cut",
    # optimizer
    "PhaseAlphabet",
    "SearchResult",
    "exhaustive_state_search",
    "optimal_separation_product",
    # harness
    "ExperimentConfig",
    "SweepRecord",
    "parse_config",
    "run_sweep",
    "run_pattern",
    "run_optimize",
    "write_records",
    "read_records",
    # errors
    "RamimoError",
    "ValidationError",
    "ModelValidityError",
    "CoverageError",
    "FeedConflictError",
    "SearchSpaceError",
    "ConfigError",
]
