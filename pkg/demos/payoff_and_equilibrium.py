"""Walk through the basic pipeline on the baseline scenario: estimate the
four ergodic secrecy rates, inspect the power split the transmitter picks,
and solve the simultaneous-move game.

Run with: python demos/payoff_and_equilibrium.py
"""
import numpy as np

from wiretapgame import (
    Payoffs,
    ScenarioConfig,
    mixed_ne,
    payoff_matrix,
    saddle_oracle,
    solve_strategic,
)

cfg = ScenarioConfig(Na=5, Nb=3, Ne=4, Pa=100.0, Pe=100.0, g1=1.1, g2=0.9,
                     d=2, trials=1500, seed=7)

# the A row searches rho in {0.05..1} and d in {1,2,3} against a listener
pm = payoff_matrix(cfg, d_candidates=(1, 2, 3))
print(f"chosen power split: rho* = {pm.rho_star}, d* = {pm.d_star}")
for name, est in (("R_FE", pm.R_FE), ("R_FJ", pm.R_FJ),
                  ("R_AE", pm.R_AE), ("R_AJ", pm.R_AJ)):
    print(f"  {name} = {est.mean:6.3f} +/- {est.std_err:.3f}  ({est.trials} draws)")

R = Payoffs.from_matrix(pm)
eq = solve_strategic(R, tol=pm.ordering_tolerance())
print(f"\nequilibrium: {eq.kind.value}")
print(f"  Alice plays F with p* = {eq.p_star:.3f}")
print(f"  Eve   plays E with q* = {eq.q_star:.3f}")
print(f"  game value v = {eq.value:.3f} bits/channel use")

# sanity: a brute-force maximin grid lands on the same value
p, q, v = saddle_oracle(R, grid_step=0.001)
print(f"\ngrid-search check: v = {v:.3f} at (p, q) = ({p:.3f}, {q:.3f})")

# the mixture really is an equilibrium: neither player gains by deviating
if eq.kind.value == "Mixed":
    closed = mixed_ne(R, tol=pm.ordering_tolerance())
    payoff_if_F = closed.q_star * R.R_FE + (1 - closed.q_star) * R.R_FJ
    payoff_if_A = closed.q_star * R.R_AE + (1 - closed.q_star) * R.R_AJ
    print(f"Alice's payoff against q*: F -> {payoff_if_F:.4f}, "
          f"A -> {payoff_if_A:.4f} (indifferent at the equilibrium)")
