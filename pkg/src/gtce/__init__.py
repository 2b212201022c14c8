"""Offshore wind park and HVDC grid capacity expansion planning toolkit.

Plans cost-optimal offshore wind capacities and the HVDC grid connecting
them to a multi-zone electricity market, then evaluates the market effects
(prices, surplus shifts, trade) of the resulting topologies.  Works on
spatially clustered converter sites and temporally clustered representative
weeks so the expansion problem stays tractable.
"""

__version__ = "0.1.0"

from .scenario import (
    Scenario,
    Zone,
    ThermalUnit,
    CostTable,
    CandidateSite,
    load_scenario,
    validate,
    crf,
    annualize,
    co2_price,
    marginal_cost,
)
from .errors import ValidationError, InfeasibleError, SolverLimitError
from .geo import haversine_km, superimpose_grid, cluster_sites, ConverterCluster, GridNode
from .timeclust import (
    wind_capacity_factor,
    slice_weeks,
    cluster_weeks,
    nrmse,
    WeekMatrix,
    RepresentativeWeeks,
)
from .expansion import (
    build_model,
    cost_breakdown,
    solve_mip,
    extract_topology,
    export_lp,
    cable_cost_varL,
    cable_cost_varLP,
    ArcGeometry,
    ExpansionModel,
    Solution,
    FixedTopology,
)
from .solve import solve_lp, LpResult
from .bnb import branch_and_bound
from .market import (
    fixed_topology_dispatch,
    consumer_surplus_delta,
    producer_surplus_delta,
    duration_curve,
    trade_balance,
    congestion_rent,
    owp_margin,
    reference_topology,
    scenario_fingerprint,
    MarketOutcome,
)
from .topo import TopologyConfig, topology_distance, cluster_topologies
from .pipeline import (
    run_solve,
    run_sweep,
    run_single_year_study,
    run_evaluate,
    run_cluster_sites,
    run_cluster_weeks,
)
