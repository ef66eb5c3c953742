"""How far down can the tangent-line step be pushed?

For each k the step needs the average of f1 over the per-color statistics to
stay below its value at k - 1, given only the floor on those statistics and
their mean. Two-point profiles are the extreme case.
"""

# %%
from palette_turan import refined_threshold

res = refined_threshold(31, 48)
print("least k:", res.least)
for v in res.verdicts:
    print(v.k, v.verdict, float(v.excess))

# %% the worst profile at k = 40 puts almost all weight near the floor
w = res.by_k(40).witness
print([float(x) for x in w])
