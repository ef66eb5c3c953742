"""Replaying the upper-bound argument on the construction, exactly."""

# %%
from palette_turan import chain_verify, minimality_reduce, star_palette, thresholds

print(thresholds())   # where the tangent-line ranges kick in

# %%
rep = chain_verify(minimality_reduce(star_palette(48)), 48)
for s in rep.steps:
    print(f"{s.name:14s} {s.status}")
print("final bound equals the density:", rep.equality)

# %% below the range the tangent steps are marked inapplicable rather than failed
rep = chain_verify(star_palette(5), 5)
print([(s.name, s.status) for s in rep.steps if s.status != "pass"])
