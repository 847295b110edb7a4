"""A short tour of the package: membership, mu, symmetries and separation.

Run with ``python3 demos/tour.py``.  Takes a few seconds.
"""

import numpy as np

from mudomains.core_types import derive_seed, random_contraction
from mudomains.domain312 import in_Gamma_312, pi312
from mudomains.domain333 import (
    PERMUTATIONS, in_G_333, in_G_333_fiberwise, in_Gamma_333, mu_E333, permute, pi333,
)
from mudomains.geometry import nonconvexity_witness, separate
from mudomains.realization import conjugate_by

# %% a random contraction lands in G; the oracles agree
A = random_contraction(derive_seed(7, 0), 0.9)
x = pi333(A)
print("pi(A) =", np.round(x, 4))
print("G via Psi^(1):     ", in_G_333(x).state.value)
for key in ("X", "Y", "Z"):
    print(f"G via {key} fibers:    ", in_G_333_fiberwise(x, key).state.value)

# %% mu and its invariances
m = mu_E333(A).mu
print("mu(A)             =", m)
print("mu(J1 A J1)       =", mu_E333(conjugate_by(A, "J1J1")).mu)
print("mu((1+2i) A)/|c|  =", mu_E333((1 + 2j) * A).mu / abs(1 + 2j))
print("mu(I), mu(diag(2,0,0)) =", mu_E333(np.eye(3)).mu, mu_E333(np.diag([2.0, 0, 0])).mu)

# %% coordinate permutations preserve G
for name in PERMUTATIONS:
    print(f"{name}: {in_G_333(permute(x, name)).state.value}")

# %% the non-convexity pair.  The second point fails the Gamma test (see README)
p, q, mid, verdicts = nonconvexity_witness()
for label, v in zip(("x", "y", "(x+y)/2"), verdicts):
    print(f"{label:8s} {v.state.value:13s} margin {v.margin:+.3e}")

# %% a polynomial certificate that the midpoint is outside the hull
cert = separate(mid, n_samples=300)
print(cert.kind, cert.data, "value", round(cert.value_at_target, 4),
      "sup on samples", round(cert.sup_on_sample, 4))

# %% the C^5 domain
C = random_contraction(derive_seed(7, 1), 1.0)
print("Gamma_312 at pi312(C):", in_Gamma_312(pi312(C)).state.value)
print("(1,2,2,1,1):", in_Gamma_312([1, 2, 2, 1, 1]).state.value)
