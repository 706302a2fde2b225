"""Evolve a random Toda chain and report how well the Lax traces and transfer trace are kept."""
import argparse

import numpy as np

from solitonlab import lattice


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=8)
    ap.add_argument("--T", type=float, default=10.0)
    ap.add_argument("--dt", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()

    rng = np.random.default_rng(a.seed)
    q, p = 0.5 * rng.normal(size=a.N), 0.5 * rng.normal(size=a.N)
    steps = int(round(a.T / a.dt))
    every = max(steps // 10, 1)

    open_run = lattice.evolve(lattice.TodaState(q, p, "open"), a.dt, steps, sample_every=every)
    per_run = lattice.evolve(lattice.TodaState(q, p, "periodic"), a.dt, steps, sample_every=every)

    print(f"{'t':>6} {'tr L':>12} {'tr L^2':>12} {'t2':>12} {'I2':>12} {'tr T(2)':>14}")
    for t, so, sp in zip(open_run.t, open_run.states, per_run.states):
        tr = lattice.toda_trace_charges(so, 2)
        _, t2, _, I2 = lattice.toda_monodromy_charges(sp)
        T2 = lattice.transfer_trace(sp, 2.0).real
        print(f"{t:6.2f} {tr[0]:12.8f} {tr[1]:12.8f} {t2:12.8f} {I2:12.8f} {T2:14.8f}")


if __name__ == "__main__":
    main()
