"""
Cogwheels: a Hamiltonian for a permutation
==========================================
"""
import numpy as np

from necklace_ca import cogwheel, weyl
from necklace_ca.cogwheel import CogwheelSpec

np.set_printoptions(precision=3, suppress=True, linewidth=120)

# N states visited in turn, one per unit of time
spec = CogwheelSpec(N=6, T=1.0)
H = cogwheel.hamiltonian_standard(spec)
print(H.real)
print(np.linalg.eigvalsh(H))              # 0, pi/3, 2pi/3, ...
print(cogwheel.hamiltonian_diagonal(spec))
print("max |expm(-iHT) - U| =", cogwheel.verify_exponential(spec))

# any permutation: one cogwheel per cycle
perm = weyl.chain_permutation(2)          # the S = 2 chain as a 16-state permutation
cycles = cogwheel.cycle_decomposition(perm)
print("cycle lengths:", sorted(len(c) for c in cycles))
Hc = cogwheel.cycle_hamiltonian(perm)
P = cogwheel.permutation_matrix(perm)
print("deviation:", cogwheel.max_deviation(cogwheel.matrix_exponential(Hc), P))

# exchange of two spins from Pauli matrices
print(cogwheel.exchange_pauli_check())
