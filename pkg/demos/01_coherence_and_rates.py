"""Coherence factor and time-local rate across the three dynamical regimes.

The dephasing family is parametrized by the rate sum s and rate product p.
Below the boundary p = s^2/8 the coherence factor q(t) decays monotonically
and the rate gamma(t) stays non-negative; above it q oscillates through
zeros where gamma diverges and turns negative in between.
"""

import numpy as np

from qsemimarkov import (
    DephasingSemiMarkov,
    NonUnitalSemiMarkov,
    coherence_zeros,
    gamma_dephasing,
    gamma_nonunital,
    q_of_t,
)


def main() -> None:
    ts = np.linspace(0.0, 6.0, 7)
    for p in (0.0, 0.1, 0.125, 3.0):
        proc = DephasingSemiMarkov(s=1.0, p=p)
        qs = np.asarray(q_of_t(proc, ts))
        print(f"s=1, p={p:g}  [{proc.regime()}]")
        print("  t :", "  ".join(f"{t:5.2f}" for t in ts))
        print("  q :", "  ".join(f"{q:5.2f}" for q in qs))

    proc = DephasingSemiMarkov(s=1.0, p=3.0)
    zeros = coherence_zeros(proc, 6.0)
    print(f"\nzeros of q on (0, 6] for p=3: {np.array2string(zeros, precision=4)}")
    t_star = float(zeros[0])
    for dt in (1e-2, 1e-4, 1e-6):
        print(f"  gamma(t1 - {dt:g}) = {gamma_dephasing(proc, t_star - dt):.4g}")

    nonu = NonUnitalSemiMarkov(rate=1.0)
    print("\nnon-unital family (rate 1): gamma(t) = tanh(t) saturates at 1")
    print("  gamma:", "  ".join(
        f"{float(gamma_nonunital(nonu, t)):.3f}" for t in ts))


if __name__ == "__main__":
    main()
