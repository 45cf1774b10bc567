"""Indefinite pairing of eigenvectors and the sign-correcting charge.

Eigenvectors of a Hermitian matrix are orthogonal under the usual inner
product.  The eigenvectors of this non-Hermitian model are instead
orthogonal under a conjugation-free bilinear built from the antilinear
symmetry, and their self-pairings carry signs (-1)^(n1+n2): the pairing
is indefinite.  Weighting each state by its own sign (a spectral charge)
turns the table into an ordinary identity matrix.
"""

import numpy as np

from etapt import (
    OscillatorParams,
    eta_tilde,
    gram,
    matched_eigenpairs,
    metric,
    theta_of,
)

params = OscillatorParams(2.0, 1.0, 0.5)
dims = (20, 20)
k = 6

vectors, labels, values = matched_eigenpairs(params, dims, k)
et = eta_tilde(metric(theta_of(params), dims))

plain = gram(vectors, et, labels=labels)
print("self-pairing signs of the", k, "lowest states:")
for (n1, n2), sign in zip(labels, plain.signs):
    print(f"  (n1,n2)=({n1},{n2})   sign {sign:+.0f}   predicted {(-1.0) ** (n1 + n2):+.0f}")

print()
print("pairing table (real parts; the imaginary parts are at roundoff):")
with np.printoptions(precision=3, suppress=True, linewidth=120):
    print(np.asarray(plain.matrix).real)
print(f"off-diagonal magnitude: {plain.max_deviation:.3e}  "
      f"({'pass' if plain.passed else 'FAIL'} at {plain.tolerance:g})")

corrected = gram(vectors, et, form="c-eta-tilde")
print()
print("after weighting rows by the measured signs:")
with np.printoptions(precision=3, suppress=True, linewidth=120):
    print(np.asarray(corrected.matrix).real)
print(f"deviation from the identity: {corrected.max_deviation:.3e}  "
      f"({'pass' if corrected.passed else 'FAIL'})")
