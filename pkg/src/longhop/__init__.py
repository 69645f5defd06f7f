"""Probabilistic long-hop routing on a line: one-pass and multi-pass
distance-biased leader election, with exact analytics, Monte Carlo
simulation, a path-loss radio model and a relay experiment harness."""

from .core import (Collision, Constant, Custom, DecisionFunction, HopResult, Hybrid,
                   LinearScaled, Placement, PowerLaw, Scenario, Silence, Winner,
                   decision_family, eval_decision, scenario_positions)
from .analytics import (NonTerminating, Truncated, WinDistribution, hybrid_term_integrals,
                        closed_form_multipass, closed_form_one_pass, expected_hop_multipass,
                        expected_hop_multipass_random, expected_hop_one_pass_fixed,
                        expected_hop_one_pass_random, win_prob_multipass_series,
                        win_prob_multipass_stationary, win_prob_one_pass_fixed)
from .quadrature import QuadratureError, QuadratureSpec
from .montecarlo import (EstimateWithError, FixedPlacement, RandomPlacement, SimConfig,
                         estimate_expected_hop, run_trials, sample_positions, simulate_multi_pass,
                         simulate_one_pass, simulate_slot)

__version__ = "0.1.0"
