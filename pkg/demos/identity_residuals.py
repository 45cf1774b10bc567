"""Every identity the metric construction promises, measured.

A positive operator exp(theta * G), with G the occupation-conserving
boost generator, intertwines the non-Hermitian Hamiltonian with its
adjoint.  Composing it with the parity-conjugation map gives an
antilinear symmetry that commutes with H and squares to one, and its
positive square root similarity-transforms H into a pair of independent
oscillators.  None of these statements are taken on faith here; each is
a residual.

Residuals are measured on the "bulk", the states with low total
occupation, because the truncation edge cannot represent operators that
move quanta past the cap.  On the bulk every identity is exact shell by
shell, so what remains is eigensolver roundoff.  The table below shows
the floor: residuals do not improve with size, they sit at machine
precision from the start (and grow slowly with the metric's norm).
"""

from etapt import OscillatorParams, identity_suite

params = OscillatorParams(2.0, 1.0, 0.5)

sizes = [(12, 12), (16, 16), (20, 20), (24, 24)]
suites = {dims: identity_suite(params, dims, bulk=0.5) for dims in sizes}
names = [r.name for r in suites[sizes[0]]]

width = max(len(n) for n in names)
header = "  ".join(f"({a},{b})" for a, b in sizes)
print(f"{'check'.ljust(width)}  {header}")
for i, name in enumerate(names):
    row = "  ".join(f"{suites[dims][i].residual:9.2e}" for dims in sizes)
    print(f"{name.ljust(width)}  {row}")

print()
print("all ten checks pass their tolerances at every size:")
for dims in sizes:
    ok = all(r.passed for r in suites[dims])
    print(f"  dims {dims}: {'pass' if ok else 'FAIL'}")

print()
print("negative control, deliberately wrong mixing angle:")
wrong = identity_suite(params, (16, 16), theta_override=0.1)
for r in wrong:
    flag = "pass" if r.passed else "FAIL"
    print(f"  {r.name.ljust(width)}  {r.residual:9.2e}  {flag}")
print()
print("the checks that tie H to the metric (pseudo-Hermiticity, the")
print("antilinear commutator, the decoupling) break by twelve orders of")
print("magnitude; the identities internal to the metric family hold at")
print("any angle and keep passing, which is exactly what they should do")
