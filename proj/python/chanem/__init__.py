from ._core import (
    ChanemError,
    ChannelParams,
    EmConfig,
    EmStep,
    EstimateReport,
    MultiStartResult,
    ObservedDataset,
    SufficientStats,
    __version__,
    brute_force_likelihood,
    complete_log_likelihood,
    count_statistics,
    e_step,
    heuristic_starts,
    incomplete_log_likelihood,
    m_step,
    mle_complete,
    multi_start,
    n_step_matrix,
    observe,
    rank_channels,
    relative_error,
    run_em,
    simulate_chain,
    squared_error_db,
    transition_matrix,
    utilization,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
