"""Bi-orderability verdicts for torus bundles, circle bundles and Sol descriptors.

Eigenvalue questions for 2x2 integer matrices are settled by sign analysis
of trace, determinant and discriminant.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

from .certificates import (
    CertificateError,
    GtCertificate,
    NontrivialityEvidence,
    build_klein_certificate,
    build_torus_bundle_certificate,
    torus_case,
)


class Status(Enum):
    BI_ORDERABLE = "BiOrderable"
    NOT_BI_ORDERABLE = "NotBiOrderable"
    OUT_OF_SCOPE = "OutOfScope"


@dataclass(frozen=True)
class Verdict:
    status: Status
    reason: str
    certificate: GtCertificate | None = None


class DescriptorError(ValueError):
    pass


def has_positive_eigenvalue(A: Sequence[Sequence[int]]) -> bool:
    """Does ``x^2 - tr x + det`` have a positive real root?"""
    (a, b), (c, d) = A
    tr, det = a + d, a * d - b * c
    if tr * tr - 4 * det < 0:
        return False
    # real roots with product det and sum tr
    return det < 0 or tr > 0


def _matrix(A) -> tuple[tuple[int, int], tuple[int, int]]:
    try:
        (a, b), (c, d) = A
        return (int(a), int(b)), (int(c), int(d))
    except (TypeError, ValueError):
        raise DescriptorError(f"expected a 2x2 integer matrix, got {A!r}") from None


def classify_torus_bundle(A: Sequence[Sequence[int]]) -> Verdict:
    """``A = [[a, b], [c, d]]`` as passed to ``torus_bundle(a, b, c, d)``."""
    (a, b), (c, d) = _matrix(A)
    det = a * d - b * c
    if det not in (1, -1):
        raise DescriptorError(f"monodromy determinant is {det}, expected +-1")
    if has_positive_eigenvalue(((a, b), (c, d))):
        return Verdict(Status.BI_ORDERABLE, "monodromy has a positive real eigenvalue")
    reason = "monodromy has no positive real eigenvalue"
    cert = None
    if det == 1 and a + d < 0:
        try:
            torus_case(a, b, c, d)
            cert = build_torus_bundle_certificate(a, b, c, d)
            reason += "; negative trace gives a generalized torsion certificate for l"
        except CertificateError:
            reason += "; matrix outside the supported certificate shapes"
    return Verdict(Status.NOT_BI_ORDERABLE, reason, cert)


# -- circle bundles ----------------------------------------------------------------

SURFACE_KINDS = ("S2", "P2", "Klein", "Other")
SPECIALS = {
    "S3": "trivial group",
    "S1xS2": "infinite cyclic group",
    "TwistedS1S2": "infinite cyclic group",
    "SolidKlein": "infinite cyclic group",
}


@dataclass(frozen=True)
class Surface:
    kind: str
    genus: int = 0
    orientable: bool = True
    n_boundary: int = 0

    def normalized(self) -> "Surface":
        if self.kind not in SURFACE_KINDS:
            raise DescriptorError(f"surface kind must be one of {SURFACE_KINDS}, got {self.kind!r}")
        if self.kind != "Other":
            return Surface(self.kind)
        if self.genus < 0 or self.n_boundary < 0:
            raise DescriptorError("genus and boundary count must be nonnegative")
        if not self.orientable and self.genus < 1:
            raise DescriptorError("a non-orientable surface has at least one crosscap")
        if self.n_boundary == 0:
            # closed surfaces with a named kind
            if self.orientable and self.genus == 0:
                return Surface("S2")
            if not self.orientable and self.genus == 1:
                return Surface("P2")
            if not self.orientable and self.genus == 2:
                return Surface("Klein")
        return self


def parse_surface(text: str) -> Surface:
    """``s2``, ``p2``, ``klein``, or ``other:genus=g,orientable=true,boundary=n``."""
    name, _, rest = text.strip().partition(":")
    aliases = {"s2": "S2", "p2": "P2", "klein": "Klein", "other": "Other"}
    kind = aliases.get(name.lower())
    if kind is None:
        raise DescriptorError(f"unknown surface {name!r}")
    opts = _kv(rest)
    if kind != "Other":
        if opts:
            raise DescriptorError(f"surface {name} takes no options")
        return Surface(kind)
    unknown = set(opts) - {"genus", "orientable", "boundary"}
    if unknown:
        raise DescriptorError(f"unknown surface option(s): {', '.join(sorted(unknown))}")
    return Surface(
        "Other",
        int(opts.get("genus", "0")),
        parse_bool(opts.get("orientable", "true")),
        int(opts.get("boundary", "0")),
    )


def _kv(text: str) -> dict[str, str]:
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        k, sep, v = item.partition("=")
        if not sep:
            raise DescriptorError(f"expected key=value, got {item!r}")
        out[k.strip()] = v.strip()
    return out


def parse_bool(v: str) -> bool:
    if v.lower() in ("true", "yes", "1"):
        return True
    if v.lower() in ("false", "no", "0"):
        return False
    raise DescriptorError(f"expected true/false, got {v!r}")


def classify_circle_bundle(
    base: Surface | None,
    bundle_orientable: bool = True,
    special: str | None = None,
    exceptional_fibers: int = 0,
) -> Verdict:
    """Seifert fibered manifolds without exceptional fibers."""
    if special is not None:
        if special not in SPECIALS:
            raise DescriptorError(f"special must be one of {sorted(SPECIALS)}, got {special!r}")
        return Verdict(Status.BI_ORDERABLE, f"{special}: {SPECIALS[special]}")
    if base is None:
        raise DescriptorError("need a base surface or a special manifold")
    if exceptional_fibers < 0:
        raise DescriptorError("exceptional fiber count must be nonnegative")
    if exceptional_fibers:
        return Verdict(Status.OUT_OF_SCOPE, "exceptional fibers are not modeled")
    s = base.normalized()
    if s.kind == "S2":
        return Verdict(Status.NOT_BI_ORDERABLE, "bundle over S2 other than S1xS2 has finite nontrivial group")
    if s.kind == "P2":
        return Verdict(Status.NOT_BI_ORDERABLE, "base P2 is excluded from the bi-orderable bundles")
    if s.kind == "Klein":
        return Verdict(
            Status.NOT_BI_ORDERABLE,
            "base Klein bottle: x^2 y^2 central forces [x^2, y] = [x,y]^(x^-1) [x,y] = 1",
        )
    if bundle_orientable:
        return Verdict(Status.BI_ORDERABLE, "orientable circle bundle over a surface other than S2, P2, Klein")
    return Verdict(Status.NOT_BI_ORDERABLE, "non-orientable circle bundle (not one of the special cases)")


# -- Sol -----------------------------------------------------------------------------

SOL_KINDS = ("torus-bundle", "twisted-i-bundle", "semibundle")


@dataclass(frozen=True)
class SolDescriptor:
    kind: str
    matrix: tuple[tuple[int, int], tuple[int, int]] | None = None


def classify_sol(desc: SolDescriptor) -> Verdict:
    if desc.kind == "torus-bundle":
        if desc.matrix is None:
            raise DescriptorError("torus-bundle descriptor needs a matrix")
        return classify_torus_bundle(desc.matrix)
    if desc.kind == "twisted-i-bundle":
        return Verdict(
            Status.NOT_BI_ORDERABLE,
            "twisted I-bundle over the Klein bottle has the Klein bottle group: x x^y = 1",
            build_klein_certificate(),
        )
    if desc.kind == "semibundle":
        cert = build_klein_certificate()
        cert = replace(
            cert, evidence=NontrivialityEvidence.cited("pi1-injective Klein bottle in the semibundle")
        )
        return Verdict(Status.NOT_BI_ORDERABLE, "contains a pi1-injective Klein bottle", cert)
    raise DescriptorError(f"Sol descriptor kind must be one of {SOL_KINDS}, got {desc.kind!r}")
