"""Print the first conserved densities from the three recursions side by side."""
import argparse

from solitonlab import charges


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5, help="highest order")
    n = ap.parse_args().n

    print("Gardner densities for KdV")
    for k, w in enumerate(charges.gardner_densities(n).densities):
        print(f"  w{k} = {w.to_ascii()}")

    print("\nRiccati series Gamma(k)")
    gam = charges.riccati_gamma(n)
    for k in gam.indices():
        print(f"  Gamma{k} = {gam[k].to_ascii()}")

    print("\nAKNS matrices W(k) (off-diagonal entries) and Z(k) integrands")
    W, Z = charges.akns_wz(n)
    for k, m in enumerate(W, start=1):
        print(f"  W{k}: (1,2) {m.coeff(0, 1).to_ascii()}   (2,1) {m.coeff(1, 0).to_ascii()}")
    for k in Z.indices():
        print(f"  Z{k} = {Z[k].to_ascii()}")


if __name__ == "__main__":
    main()
