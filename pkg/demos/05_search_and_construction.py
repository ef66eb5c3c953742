"""Searching for dense refused palettes, then blowing one up into a 3-graph."""

# %%
from palette_turan import contains_copy, exhaustive_best, local_search, rodl_construct, star

best = exhaustive_best(star(3), 2)    # all 2^8 palettes on two colors
print(best.density, best.witness.triples)

# %% heuristic search on more colors, re-checked exactly at the end
res = local_search(star(4), 3, iterations=600, seed=1)
print(res.density, len(res.trace))

# %% random pair coloring keeps only admissible triples, so no 3-star can appear
c = rodl_construct(best.witness, 25, seed=1)
print(len(c.graph.edges), contains_copy(c.graph, star(3)))
