# Random bounded harmonic functions never leave the rotated region: sample a
# few hundred, evaluate on the sphere of radius r and report the worst margin.
from schwarzpick.oracle import claim_checks, random_harmonic, run_trials

s = random_harmonic(3, seed=1, complexity=3)
print("F(0) =", s.F0)

for n in (2, 3):
    rep = run_trials(n, 0.5, 200, seed=1)
    print(f"n={n}: {rep.trials} functions, {len(rep.failures)} failures, "
          f"worst margin {rep.worst_margin:.3e}")

# %% structural checks of the multiplier map
for c in claim_checks(3, 0.5):
    print(f"{'ok  ' if c.passed else 'FAIL'} {c.name}: {c.detail}")
