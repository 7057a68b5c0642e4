"""Show how the equilibrium regime shifts with the scenario parameters.

Raising Alice's budget (with the jammer's budget held at 4x hers) moves the
game from a pure saddle point to mixed play; so does shrinking the
adversary's antenna array below the transmitter's.

Run with: python demos/regime_transitions.py
"""
import numpy as np

from wiretapgame import Payoffs, ScenarioConfig, payoff_matrix, solve_strategic

TRIALS = 400

print("power sweep: Na=Ne=8, Nb=6, d=4, Pe = 4 Pa, g1=1.2, g2=0.75")
print(" Pa[dB]  kind     R_AE    R_AJ    p*     q*")
for pa_db in range(0, 22, 3):
    pa = 10 ** (pa_db / 10)
    cfg = ScenarioConfig(Na=8, Nb=6, Ne=8, Pa=pa, Pe=4 * pa, g1=1.2, g2=0.75,
                         d=4, trials=TRIALS, seed=31)
    pm = payoff_matrix(cfg)
    eq = solve_strategic(Payoffs.from_matrix(pm), tol=pm.ordering_tolerance())
    print(f"  {pa_db:4d}   {eq.kind.value:7s} {pm.R_AE.mean:6.3f}  "
          f"{pm.R_AJ.mean:6.3f}  {eq.p_star:.3f}  {eq.q_star:.3f}")
print("the pure region ends once R_AE outgrows R_AJ: eavesdropping stops"
      "\nbeing the adversary's dominant choice and both sides must randomize\n")

print("antenna-ratio sweep: Na=6, Nb=3, d=2, Pa=Pe=100, g1=1.1, g2=0.9")
print(" Ne/Na   kind     R_AE    R_AJ")
for ne in (3, 4, 5, 6, 7, 8, 10, 12):
    cfg = ScenarioConfig(Na=6, Nb=3, Ne=ne, Pa=100.0, Pe=100.0, g1=1.1,
                         g2=0.9, d=2, trials=TRIALS, seed=32)
    pm = payoff_matrix(cfg)
    eq = solve_strategic(Payoffs.from_matrix(pm), tol=pm.ordering_tolerance())
    print(f"  {ne / 6:.2f}   {eq.kind.value:7s} {pm.R_AE.mean:6.3f}  {pm.R_AJ.mean:6.3f}")
print("once the adversary matches the transmitter's array (ratio ~1) her"
      "\neavesdropping is weak enough that jamming dominates -> pure play")
