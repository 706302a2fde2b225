"""Potential generated by the Airy kernel, solved by the Nystrom method."""
import argparse

import numpy as np

from solitonlab import glm


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", type=float, default=0.5)
    ap.add_argument("--h", type=float, default=0.025)
    a = ap.parse_args()

    ker = glm.airy_kernel(a.t)
    print(f"nu = {ker.meta['nu']:.6f}, ray cut at s = {ker.L_cut:.4f}")
    print(f"Airy ODE residual: {glm.airy_ode_residual(ker, np.linspace(-10, 20, 301)):.2e}")
    xs = np.linspace(-4.0, 4.0, 9)
    K, u, cond = glm.glm_nystrom(ker, xs, h=a.h)
    print(f"{'x':>6} {'K(x,x)':>14} {'u(x)':>14}")
    for x, k, v in zip(xs, K, u):
        print(f"{x:6.2f} {k:14.8f} {v:14.8f}")
    print(f"largest condition number {cond:.3e}")


if __name__ == "__main__":
    main()
