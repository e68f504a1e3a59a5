"""Nash equilibrium seeking with deceptive players.

Game definitions, deception analysis, averaged and oscillatory
simulation, linear stability tools, and a scenario-driven CLI.
"""

from .aggregative import (AggDeception, benefit_condition, delta_bounds,
                          dne_agg, g_prime, gamma, monotone_tuning_hint,
                          xi_matrix)
from .deception import (DeceptionError, DeceptionStructure,
                        MutualReport, RcClassification, SdsoAnalysis,
                        benevolence, build_deceptive_matrices, delta_interval,
                        dne, immunity_check, in_delta_set,
                        mutual_attainability, omega_set, perceived_cost,
                        q_delta, rc_classify, sdso_analyze,
                        solve_delta_for_ref, xi_jacobian)
from .games import (AggregativeGame, Game, GameError, QuadraticGame, cost,
                    cost_gradient, is_hurwitz, monotonicity_margins,
                    nash_equilibrium, pseudogradient)
from .intervals import IntervalSet
from .scenarios import (Scenario, ScenarioError, bundled_names,
                        load_bundled, parse_scenario, serialize_scenario)
from .simulator import (FixedDelta, IntegralDelta, Oblivious, PhaseLead,
                        PriceRef, ProbeConfig, Trajectory, average_rhs,
                        averaging_gap, moving_average, period_average,
                        simulate, simulate_averaged)
from .stability import (InterconnectionJacobian, build_jacobian, charpoly,
                        epsilon_star, equal_marginal_matrix, routh_hurwitz_3)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "1.0.0"
