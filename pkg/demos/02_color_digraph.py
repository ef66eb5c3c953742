"""Looking inside the color digraph."""

# %%
import numpy as np

from palette_turan import build_digraph, max_transitive_tournament, star_palette
from palette_turan.digraph import max_tt_bruteforce, random_digraph
from palette_turan.palette import Palette

d = build_digraph(star_palette(3))
print(d.arcs)        # side 1 holds colors 0..n-1, side 2 holds n..2n-1
print(d.to_dot())

# %% a triple like (b, a, a) gives a loop, and then every star admits the palette
print(build_digraph(Palette(2, [(1, 0, 0)])))

# %% the branch and bound agrees with the subset dynamic program
rng = np.random.default_rng(0)
for _ in range(5):
    g = random_digraph(10, rng)
    size, w = max_transitive_tournament(g)
    print(size, max_tt_bruteforce(g), w.vertices)
