"""H1 and the t-certificate for G(p, q, m)."""

import argparse
import math

from gtcert import abelian
from gtcert.certificates import build_rss_certificate, verify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-p", type=int, default=9)
    ap.add_argument("--m", type=int, nargs="*", default=list(range(-5, 6)))
    args = ap.parse_args()

    print("p q  m   H1                   order(t)  mult  steps  verdict")
    for p in range(2, args.max_p + 1):
        for q in range(1, p // 2 + 1):
            if math.gcd(p, q) != 1:
                continue
            for m in args.m:
                cert = build_rss_certificate(p, q, m)
                P = cert.presentation
                order = abelian.torsion_order(P, cert.base)
                rep = verify(cert, max_cosets=2000)
                print(
                    f"{p} {q} {m:>2}   {abelian.abelianize(P).describe():<20} {order:>8} "
                    f"{cert.total_multiplicity:>5} {len(cert.proof.steps):>6}  {rep.overall.value}"
                )


if __name__ == "__main__":
    main()
