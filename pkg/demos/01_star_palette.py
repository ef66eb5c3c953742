"""The lower-bound palette for stars, and why the k-star cannot use it."""

# %%
from palette_turan import density, star, star_admission, star_palette, check_certificate

p = star_palette(4)           # 3 colors
print(p)
print("density", density(p))  # (k^2 - 5k + 7) / (k - 1)^2 = 1/3

# %% the 4-star refuses it: the color digraph has no transitive tournament on 4 vertices
v = star_admission(p, 4)
print(v.admits, v.max_tt)

# %% one leaf fewer and it fits; the certificate is an explicit order and pair coloring
v = star_admission(p, 3)
print(v.admits, v.certificate.order)
print(check_certificate(star(3), p, v.certificate))

# %% density climbs toward 1 as k grows
for k in (3, 5, 10, 48, 100):
    print(k, density(star_palette(k)), float(density(star_palette(k))))
