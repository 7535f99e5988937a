"""
Massless chain, movers and block variables
==========================================
"""
import numpy as np

from necklace_ca import weyl

chain = weyl.SpinChain.from_string("+-+---+---")
print("S =", chain.half_size)

# odd sites drift left, even sites drift right
c = chain
for n in range(chain.half_size + 1):
    print(n, c)
    c = weyl.chain_step(c)

# the same thing in mover coordinates
sL, sR = weyl.movers(chain)
print("left movers ", sL, " right movers", sR)
Sp, Sm = weyl.spinor_components(chain)
print("S+", Sp, " S-", Sm)

# occupation numbers, then two levels of block variables
f = weyl.occupation(chain)
levels = [f]
for _ in range(2):
    levels.append(weyl.block_transform(levels[-1]))
for lv in levels:
    print("level", lv.level, lv.values)

# S = 5 is odd, so every level can be undone exactly
print("back down:", weyl.block_inverse(levels[-1]).values)

# with an even S the transform loses information
try:
    weyl.block_inverse(weyl.block_transform(weyl.occupation(weyl.SpinChain.from_string("+-+-+---"))))
except weyl.NoninvertibleError as exc:
    print("S = 4:", exc)
