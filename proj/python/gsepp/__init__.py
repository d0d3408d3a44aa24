"""Graph-state entanglement purification and measurement-based error correction."""

from ._core import (  # noqa: F401
    Code,
    ConfigError,
    Graph,
    __version__,
    benefit_threshold,
    decode_only_fidelity,
    fit_local,
    fixed_point,
    localize,
    parse_code,
    patterns,
    prep_threshold,
    run_criterion,
    run_experiment,
    scaling_threshold,
    validate_config,
)
