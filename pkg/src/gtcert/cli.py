"""``gtcert`` command line.

Machine-readable output is ``key=value`` lines.  Exit codes: 0 success,
1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from . import abelian
from .certificates import (
    CertificateError,
    Method,
    Overall,
    build_certificate,
    read_certificate,
    render_certificate,
    verify,
    write_certificate,
)
from .classify import (
    DescriptorError,
    SolDescriptor,
    classify_circle_bundle,
    classify_sol,
    classify_torus_bundle,
    parse_bool,
    parse_surface,
)
from .coset_enum import default_max_cosets, enumerate_cosets
from .presentations import load_presentation, parse_params
from .words import WordSyntaxError, parse_word

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load(ref: str):
    try:
        return load_presentation(ref)
    except OSError as exc:
        raise UsageError(f"cannot read presentation {ref!r}: {exc.strerror or exc}") from None
    except ValueError as exc:
        raise UsageError(f"{ref}: {exc}") from None


def _words(text: str | None, P) -> list:
    if not text:
        return []
    try:
        return [parse_word(w, P.alphabet) for w in text.split(",") if w.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- subcommands -------------------------------------------------------------------


def cmd_info(args, out):
    P = _load(args.presentation)
    out(f"label={P.label}")
    out(f"generators={' '.join(P.gens)}")
    out(f"relators={len(P.relators)}")
    for i, r in enumerate(P.relators):
        out(f"relator[{i}]={r}")
    return EXIT_OK


def cmd_abelianize(args, out):
    P = _load(args.presentation)
    inv = abelian.abelianize(P)
    out(inv.describe())
    for w in P.alphabet.gens() + _words(args.word, P):
        coords = abelian.image(P, w)
        order = abelian.torsion_order(P, w)
        out(f"image[{w}]={','.join(map(str, coords)) or '-'}")
        out(f"order[{w}]={'inf' if order == abelian.INFINITE else order}")
    return EXIT_OK


def cmd_enumerate(args, out):
    P = _load(args.presentation)
    sub = _words(args.subgroup, P)
    limit = args.max_cosets if args.max_cosets is not None else default_max_cosets()
    if limit < 1:
        raise UsageError("--max-cosets must be >= 1")
    T = enumerate_cosets(P, sub, limit)
    out(f"status={T.status.value}")
    if not T.complete:
        out(f"limit={limit}")
        return EXIT_OK
    out(f"{'index' if sub else 'order'}={T.n_cosets}")
    if args.perms:
        for g, name in enumerate(P.gens):
            out(f"perm[{name}]={' '.join(str(x + 1) for x in T.action[g])}")
    return EXIT_OK


def _params(items: Sequence[str] | None) -> dict[str, int]:
    out: dict[str, int] = {}
    for item in items or []:
        try:
            out.update(parse_params(item))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return out


def cmd_certify(args, out):
    try:
        cert = build_certificate(args.family, _params(args.param))
        text = render_certificate(cert)
    except (CertificateError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        out(f"wrote={args.out}")
        out(f"base={cert.base}")
        out(f"factors={len(cert.factors)}")
        out(f"total_multiplicity={cert.total_multiplicity}")
        out(f"steps={len(cert.proof.steps)}")
    else:
        for line in text.splitlines():
            out(line)
    return EXIT_OK


METHOD_NAMES = {"proof": Method.PROOF, "coset": Method.COSET, "normal-form": Method.NORMAL_FORM,
                "normalform": Method.NORMAL_FORM, "abelian": Method.ABELIAN}


def _methods(text: str | None) -> set[Method]:
    if not text:
        return set(Method)
    out = set()
    for name in filter(None, (s.strip() for s in text.split(","))):
        if name not in METHOD_NAMES:
            raise UsageError(f"unknown method {name!r}; choose from proof, coset, normal-form, abelian")
        out.add(METHOD_NAMES[name])
    return out


@dataclass(frozen=True)
class BatchEntry:
    path: str
    line: str
    ok: bool


def _verify_one(job) -> BatchEntry:
    path, methods, max_cosets = job
    try:
        cert = read_certificate(path)
    except OSError as exc:
        return BatchEntry(path, f"{path}: error=unreadable ({exc.strerror or exc})", False)
    except (ValueError, IndexError) as exc:
        return BatchEntry(path, f"{path}: error=parse ({exc})", False)
    rep = verify(cert, methods, max_cosets)
    fields = [f"overall={rep.overall.value}"]
    fields += [f"{m.value}={rep.methods[m].result.value}" for m in Method if m in rep.methods]
    fields.append(f"evidence={rep.evidence.result.value}")
    return BatchEntry(path, f"{path}: " + " ".join(fields), rep.overall is not Overall.FAILED)


def batch_verify(paths: Sequence[str], methods=None, max_cosets: int | None = None, jobs: int = 1) -> list[BatchEntry]:
    """One entry per path, in input order."""
    methods = set(Method) if methods is None else set(methods)
    work = [(p, methods, max_cosets) for p in paths]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_verify_one, work))
    return [_verify_one(w) for w in work]


def cmd_verify(args, out):
    methods = _methods(args.method)
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    entries = batch_verify(args.paths, methods, args.max_cosets, args.jobs)
    for e in entries:
        out(e.line)
    failed = [e.path for e in entries if not e.ok]
    n = len(entries)
    out(f"{n} certificate{'' if n == 1 else 's'}, {len(failed)} failed")
    return EXIT_FAIL if failed else EXIT_OK


def _ints(text: str, n: int, what: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} needs {n} comma-separated integers") from None
    if len(vals) != n:
        raise UsageError(f"{what} needs {n} comma-separated integers")
    return vals


def _circle_args(text: str):
    opts = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        k, sep, v = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {item!r}")
        opts[k.strip()] = v.strip()
    known = {"base", "orientable", "special", "exceptional", "genus", "base_orientable", "boundary"}
    unknown = set(opts) - known
    if unknown:
        raise UsageError(f"unknown circle-bundle option(s): {', '.join(sorted(unknown))}")
    special = opts.get("special")
    base = None
    if "base" in opts:
        b = opts["base"]
        if b.lower() == "other":
            bo = opts.get("base_orientable", "true")
            b = f"other:genus={opts.get('genus', '0')},orientable={bo},boundary={opts.get('boundary', '0')}"
        base = parse_surface(b)
    orientable = parse_bool(opts.get("orientable", "true"))
    try:
        exceptional = int(opts.get("exceptional", "0"))
    except ValueError:
        raise UsageError("exceptional must be an integer") from None
    return base, orientable, special, exceptional


def cmd_classify(args, out):
    try:
        if args.torus_bundle:
            a, b, c, d = _ints(args.torus_bundle, 4, "--torus-bundle")
            v = classify_torus_bundle(((a, b), (c, d)))
        elif args.sol:
            mat = None
            if args.matrix:
                a, b, c, d = _ints(args.matrix, 4, "--matrix")
                mat = ((a, b), (c, d))
            v = classify_sol(SolDescriptor(args.sol, mat))
        else:
            base, orientable, special, exc = _circle_args(args.circle_bundle)
            v = classify_circle_bundle(base, orientable, special, exc)
    except (DescriptorError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    out(f"status={v.status.value}")
    out(f"reason={v.reason}")
    if v.certificate is None:
        out("certificate=none")
        return EXIT_OK
    rep = verify(v.certificate, {Method.PROOF, Method.NORMAL_FORM, Method.ABELIAN})
    if args.out:
        write_certificate(v.certificate, args.out)
        out(f"certificate={args.out}")
    else:
        out("certificate=attached")
    out(f"certificate_status={rep.overall.value}")
    return EXIT_OK if rep.ok else EXIT_FAIL


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gtcert", description="Generalized torsion certificates for finitely presented groups.")
    p.add_argument("--timings", action="store_true", help="report wall time on stderr")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("info", help="show a presentation")
    s.add_argument("presentation", help="family shorthand (e.g. fibonacci:m=4) or file path")
    s.set_defaults(fn=cmd_info)

    s = sub.add_parser("abelianize", help="abelian invariants via Smith normal form")
    s.add_argument("presentation")
    s.add_argument("--word", help="comma-separated words to project")
    s.set_defaults(fn=cmd_abelianize)

    s = sub.add_parser("enumerate", help="Todd-Coxeter coset enumeration")
    s.add_argument("presentation")
    s.add_argument("--max-cosets", type=int)
    s.add_argument("--subgroup", help="comma-separated subgroup generators")
    s.add_argument("--perms", action="store_true", help="print the permutation action")
    s.set_defaults(fn=cmd_enumerate)

    s = sub.add_parser("certify", help="build a certificate for a named family")
    s.add_argument("--family", required=True, choices=["klein", "kbcircle", "fibonacci", "torusbundle", "rss"])
    s.add_argument("--param", action="append", help="k=v[,k=v...]; repeatable")
    s.add_argument("--out", help="write the certificate here instead of stdout")
    s.set_defaults(fn=cmd_certify)

    s = sub.add_parser("verify", help="verify certificate files")
    s.add_argument("paths", nargs="*")
    s.add_argument("--method", help="comma list of proof, coset, normal-form, abelian (default: all)")
    s.add_argument("--max-cosets", type=int)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("classify", help="bi-orderability verdicts")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--torus-bundle", metavar="a,b,c,d")
    g.add_argument("--sol", choices=["torus-bundle", "twisted-i-bundle", "semibundle"])
    g.add_argument("--circle-bundle", metavar="base=...,orientable=...")
    s.add_argument("--matrix", metavar="a,b,c,d", help="monodromy for --sol torus-bundle")
    s.add_argument("--out", help="write an emitted certificate here")
    s.set_defaults(fn=cmd_classify)
    return p


_MATRIX_FLAGS = ("--torus-bundle", "--matrix")


def _glue_negative(argv: Sequence[str]) -> list[str]:
    # "--torus-bundle -1,0,0,-1" would otherwise read the matrix as a flag
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _MATRIX_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    argv = _glue_negative(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def out(line: str):
        stdout.write(line + "\n")

    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        code = args.fn(args, out)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except WordSyntaxError as exc:
        stderr.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if getattr(args, "timings", False):
        stderr.write(f"time={time.perf_counter() - t0:.3f}s\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
