"""
One scattering event, up close
==============================

Two neighbouring necklaces hold their single up spin at positions
x = -2 (site 2) and y = -3 (site 3) on rings of 7 spins.
"""
import numpy as np

from necklace_ca import LatticeGeometry, NecklaceState, dirac

g = LatticeGeometry(pairs=3, transverse=7)
state = NecklaceState(g, [0, -2, -3, 0, 0, 0])
print("start     ", state.positions)

# the even necklace is shifted by y, the odd one by -x, both at once
mid = dirac.scatter(state)
print("scattered ", mid.positions)   # site 2 now holds +2 (-5 wrapped)

# same thing done with the spins themselves, one transposition at a time
print("via spins ", dirac.scatter(state, method="spins").positions)

# then the kinematic shift carries the +2 two sites to the right
after = dirac.step(state)
print("one step  ", after.positions)

# and it all runs backwards
print("inverted  ", dirac.step_inverse(after).positions)

# the spin plane of the starting state: one up spin (1) per row
print((state.spin_plane() + 1) // 2)
