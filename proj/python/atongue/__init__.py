"""Arnold tongues of the drifted standard map and the twisted sine-Gordon chain."""

from ._core import (
    AttractorOptions,
    AttractorReport,
    ChainParams,
    ChainState,
    ContinuationError,
    ImplicitSolution,
    MapParams,
    PeriodicOrbit,
    PhaseState,
    ScalingFit,
    SeriesSolution,
    TongueSample,
    TrigPoly,
    __version__,
    classify_attractor,
    continue_in_x,
    critical_torque,
    expand,
    find_orbits,
    fit_exponent,
    integrate,
    iterate,
    monodromy,
    parse_trigpoly,
    remainders,
    remainders_by_definition,
    saddle_node_locus,
    solve_delta_y,
    step,
    sweep,
    twist_state,
    width_at,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
