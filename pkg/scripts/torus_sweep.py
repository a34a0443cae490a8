"""Sweep SL2(Z) monodromies with negative trace.

For every matrix in a box: case shape, certificate factors, normal-form
check of the product, and (for small entries) the size of the full proof.
Also cross-checks the classifier against the trace rule on GL2(Z).
"""

import argparse
import itertools
import time
from collections import Counter

from gtcert.certificates import CertificateError, build_torus_bundle_certificate, torus_case
from gtcert.classify import Status, classify_torus_bundle
from gtcert.word_problem import TB_ALPHABET, check_proof, tb_eval


def unimodular(bound):
    r = range(-bound, bound + 1)
    for a, b, c, d in itertools.product(r, r, r, r):
        if a * d - b * c in (1, -1):
            yield (a, b), (c, d)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=8, help="entries in [-bound, bound]")
    ap.add_argument("--proof-bound", type=int, default=5, help="build full proofs when max |entry| <= this")
    args = ap.parse_args()

    l = TB_ALPHABET.gen("l")
    cases = Counter()
    steps_by_size: dict[int, int] = {}
    disagreements = 0
    t0 = time.perf_counter()
    for A in unimodular(args.bound):
        (a, b), (c, d) = A
        det, tr = a * d - b * c, a + d
        v = classify_torus_bundle(A)
        if (v.status is Status.BI_ORDERABLE) != (det == -1 or tr >= 2):
            disagreements += 1
        if det != 1 or tr >= 0:
            continue
        try:
            case = torus_case(a, b, c, d)
        except CertificateError:
            cases["no shape"] += 1
            continue
        cases[f"case {case}"] += 1
        cert = build_torus_bundle_certificate(a, b, c, d)
        assert tb_eval(A, cert.product_word).is_identity() and not tb_eval(A, l).is_identity(), A
        size = max(abs(x) for x in (a, b, c, d))
        if size <= args.proof_bound:
            assert check_proof(cert.presentation, cert.proof), A
            steps_by_size[size] = max(steps_by_size.get(size, 0), len(cert.proof.steps))

    print(f"entries in [-{args.bound}, {args.bound}], {time.perf_counter() - t0:.1f} s")
    for k in sorted(cases):
        print(f"  {k}: {cases[k]}")
    print(f"  classifier disagreements with trace rule: {disagreements}")
    print("largest proof by max |entry|:")
    for size in sorted(steps_by_size):
        print(f"  {size}: {steps_by_size[size]} steps")


if __name__ == "__main__":
    main()
