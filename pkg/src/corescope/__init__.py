"""Network resilience analysis via (generalized) k-core decomposition."""

from .graph import (
    Graph,
    degree_histogram,
    from_edges,
    ingest_edge_list,
    load_binary,
    save_binary,
)
from .kcore import (
    CorenessCCDF,
    CorenessVector,
    PropertyFunction,
    catastrophic_K,
    ccdf,
    coreness_by_degree,
    decompose,
    decompose_generalized,
    degree_property,
    generalized_coreness,
)
from .equilibrium import (
    Environment,
    EquilibriumResult,
    UnravelSchedule,
    calibrate_schedule,
    equilibrium_network,
    fit_quality,
    unravel,
    verify_equilibrium,
)
from .powerlaw import (
    DegreeSample,
    PowerLawFit,
    bootstrap_pvalue,
    fit_alpha,
    fit_power_law,
    ks_statistic,
    select_deg_min,
    tail_coverage,
)
from .temporal import (
    AtRiskSeries,
    SliceSpec,
    SliceStats,
    at_risk_series,
    edge_distance,
    random_baseline,
    slice_stats,
    wilson_interval,
)

__version__ = "0.1.0"
