"""Aut-splitting certificates for standard parabolic subgroups.

For a candidate ``H = W_T`` the certifier runs, in order, the checks
SPHERICAL, MAXIMALITY, UNIQUE_FIXED_POINT, SELF_NORMALIZED, BP1, BP2 and
BP3, and stops at the first failure.  Checks settled by a theorem are
recorded as ``theorem_cited`` together with the computed premises the
theorem consumes; nothing about ``Aut(G)`` or ``Out(G)`` is computed.

Certificates serialise to canonical JSON (sorted keys, no whitespace) and
are re-checked from scratch by :func:`verify_certificate`.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Iterable

from .coxeter import (CoxeterSystem, check_subset, classify_finite_type,
                      format_coxeter_system, maximal_spherical_subsets, order_of)
from .cyclotomic import gram_matrix, is_positive_definite, nullity
from .quotients import PermQuotient, iter_quotients, normalizer_evidence, verify_quotient
from .words import is_w0_central

SCHEMA_VERSION = "1"

PASS, FAIL = "pass", "fail"
COMPUTED, THEOREM_CITED = "computed", "theorem_cited"
CERTIFIED, REJECTED = "certified", "rejected"

CHECK_ORDER = ("SPHERICAL", "MAXIMALITY", "UNIQUE_FIXED_POINT", "SELF_NORMALIZED", "BP1", "BP2", "BP3")

#: Closed set of citation anchors understood by the verifier.
CITATIONS = {
    "davis-cell-unique-fixed-point":
        "A maximal finite subgroup fixes only the centre of its maximal Davis cell; "
        "fixed sets are convex, so that centre is its unique fixed point in the complex.",
    "maximal-elliptic-self-normalizing":
        "A maximal elliptic subgroup with bounded fixed set is its own normalizer.",
    "cocompact-finitely-many-maximal-finite-classes":
        "Under a proper cocompact CAT(0) action finite and elliptic subgroups coincide and "
        "fall into finitely many conjugacy classes, so a finite-index subgroup of Aut(G) "
        "preserves the conjugacy class of each maximal finite subgroup.",
    "finite-out-rigidity":
        "The index of the pointwise stabilizer in the setwise stabilizer is bounded by |Out(H)|, "
        "which is finite for finite H.",
}


class ConsistencyFault(RuntimeError):
    """Two independent routes disagreed.  Carries a dump of both."""

    def __init__(self, message: str, dump: dict):
        self.dump = dump
        super().__init__(f"{message}: {json.dumps(dump, sort_keys=True)}")


class PreconditionError(ValueError):
    pass


class CertificateError(ValueError):
    pass


class FingerprintMismatchError(CertificateError):
    pass


class UnknownCitationError(CertificateError):
    pass


class CertificateFormatError(CertificateError):
    pass


@dataclass(frozen=True)
class CheckResult:
    condition_id: str
    verdict: str
    justification: str
    citation: str | None = None
    evidence: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> dict:
        return {
            "condition_id": self.condition_id,
            "verdict": self.verdict,
            "justification": self.justification,
            "citation": self.citation,
            "evidence": self.evidence,
        }

    @classmethod
    def from_json(cls, data: dict) -> CheckResult:
        try:
            return cls(data["condition_id"], data["verdict"], data["justification"],
                       data.get("citation"), data.get("evidence") or {})
        except (KeyError, TypeError) as exc:
            raise CertificateFormatError(f"malformed check record: {exc}") from None


@dataclass(frozen=True)
class BPCertificate:
    fingerprint: str
    witness: tuple[int, ...]
    checks: tuple[CheckResult, ...]
    overall: str
    schema_version: str = SCHEMA_VERSION
    witness_labels: tuple[str, ...] = ()

    @property
    def first_failure(self) -> CheckResult | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "fingerprint": self.fingerprint,
            "witness": list(self.witness),
            "witness_labels": list(self.witness_labels),
            "checks": [c.to_json() for c in self.checks],
            "overall": self.overall,
        }

    @classmethod
    def from_json(cls, data: dict) -> BPCertificate:
        try:
            return cls(
                fingerprint=data["fingerprint"],
                witness=tuple(data["witness"]),
                checks=tuple(CheckResult.from_json(c) for c in data["checks"]),
                overall=data["overall"],
                schema_version=data["schema_version"],
                witness_labels=tuple(data.get("witness_labels", ())),
            )
        except (KeyError, TypeError) as exc:
            raise CertificateFormatError(f"malformed certificate: {exc}") from None

    def dumps(self) -> str:
        return canonical_json(self.to_json())

    @classmethod
    def loads(cls, text: str) -> BPCertificate:
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(f"certificate is not JSON: {exc}") from None


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True, allow_nan=False)


def fingerprint(system: CoxeterSystem) -> str:
    return hashlib.sha256(format_coxeter_system(system).encode()).hexdigest()


# --------------------------------------------------------------------------
# individual checks

def _components_json(decomp):
    return [{"type": name, "nodes": list(nodes)} for name, nodes in decomp.components]


def check_spherical(system: CoxeterSystem, subset: Iterable[int]) -> CheckResult:
    """Finite-type recognition and exact positive definiteness must agree."""
    t = check_subset(system, subset)
    decomp = classify_finite_type(system, t)
    pd = is_positive_definite(gram_matrix(system, t))
    if decomp.is_spherical != pd:
        raise ConsistencyFault("diagram classification and Gram definiteness disagree", {
            "orders": [[0 if m == float("inf") else int(m) for m in row] for row in system.orders],
            "subset": list(t),
            "classification": _components_json(decomp),
            "positive_definite": pd,
        })
    evidence = {"components": _components_json(decomp), "positive_definite": pd}
    if pd:
        evidence["order"] = order_of(decomp)
    return CheckResult("SPHERICAL", PASS if pd else FAIL, COMPUTED, None, evidence)


def check_maximality(system: CoxeterSystem, subset: Iterable[int]) -> CheckResult:
    t = check_subset(system, subset)
    if not classify_finite_type(system, t).is_spherical:
        raise PreconditionError(f"subset {list(t)} is not spherical")
    outside = [s for s in range(system.rank) if s not in t]
    extensions = [s for s in outside if classify_finite_type(system, t + (s,)).is_spherical]
    return CheckResult("MAXIMALITY", FAIL if extensions else PASS, COMPUTED, None,
                       {"checked": outside, "spherical_extensions": extensions})


def check_unique_fixed_point(system: CoxeterSystem, subset: Iterable[int]) -> CheckResult:
    """Nullity of the restricted form; zero means the origin is the only
    fixed vector in the span of the roots of ``T``."""
    t = check_subset(system, subset)
    k = nullity(gram_matrix(system, t))
    return CheckResult("UNIQUE_FIXED_POINT", PASS if k == 0 else FAIL, COMPUTED,
                       "davis-cell-unique-fixed-point", {"nullity": k, "dimension": len(t)})


def check_bp1(system: CoxeterSystem, subset: Iterable[int]) -> CheckResult:
    t = check_subset(system, subset)
    decomp = classify_finite_type(system, t)
    if not decomp.is_spherical:
        raise PreconditionError(f"subset {list(t)} is not spherical")
    center = 1
    central = []
    for name, nodes in decomp.components:
        c = is_w0_central(system, nodes)
        central.append({"type": name, "w0_central": c})
        center *= 2 if c else 1
    return CheckResult("BP1", PASS, COMPUTED, None,
                       {"order": order_of(decomp), "center_order": center, "components": central})


def check_bp2(system: CoxeterSystem, subset: Iterable[int]) -> CheckResult:
    t = check_subset(system, subset)
    maximal = maximal_spherical_subsets(system)
    if t not in maximal:
        raise PreconditionError(f"subset {list(t)} is not a maximal spherical subset")
    return CheckResult("BP2", PASS, THEOREM_CITED, "cocompact-finitely-many-maximal-finite-classes",
                       {"maximal_subsets": [list(m) for m in maximal],
                        "conjugacy_class_bound": len(maximal), "witness_listed": True})


def check_bp3(system: CoxeterSystem, subset: Iterable[int]) -> CheckResult:
    t = check_subset(system, subset)
    decomp = classify_finite_type(system, t)
    if not decomp.is_spherical:
        raise PreconditionError(f"subset {list(t)} is not spherical")
    return CheckResult("BP3", PASS, THEOREM_CITED, "finite-out-rigidity", {"order": order_of(decomp)})


def advisory_normalizer_evidence(system: CoxeterSystem, subset: Iterable[int], max_degree: int,
                                 max_tries: int = 200):
    """First tight normalizer evidence among the first ``max_tries`` quotients
    (or the last one tried); None if there are no quotients at all."""
    t = check_subset(system, subset)
    last = None
    for k, q in enumerate(iter_quotients(system, max_degree)):
        if k >= max_tries:
            break
        last = normalizer_evidence(system, t, q)
        if last.tight:
            break
    return last


def check_self_normalized(system: CoxeterSystem, subset: Iterable[int],
                          advisory_degree: int | None = None) -> CheckResult:
    t = check_subset(system, subset)
    if not classify_finite_type(system, t).is_spherical:
        raise PreconditionError(f"subset {list(t)} is not spherical")
    if t not in maximal_spherical_subsets(system):
        raise PreconditionError(f"subset {list(t)} is not a maximal spherical subset")
    k = nullity(gram_matrix(system, t))
    if k != 0:
        raise PreconditionError(f"subset {list(t)} has nullity {k}; fixed point not unique")
    evidence: dict[str, Any] = {"maximal": True, "nullity": 0}
    if advisory_degree:
        ev = advisory_normalizer_evidence(system, t, advisory_degree)
        if ev is not None:
            evidence["advisory"] = ev.to_json()
    return CheckResult("SELF_NORMALIZED", PASS, THEOREM_CITED, "maximal-elliptic-self-normalizing", evidence)


# --------------------------------------------------------------------------
# assembly

def default_witness(system: CoxeterSystem) -> tuple[int, ...]:
    """Lexicographically least maximal spherical subset."""
    return maximal_spherical_subsets(system)[0]


def certify_bp(system: CoxeterSystem, subset: Iterable[int] | None = None,
               advisory_degree: int | None = None) -> BPCertificate:
    t = default_witness(system) if subset is None else check_subset(system, subset)
    steps = (
        lambda: check_spherical(system, t),
        lambda: check_maximality(system, t),
        lambda: check_unique_fixed_point(system, t),
        lambda: check_self_normalized(system, t, advisory_degree),
        lambda: check_bp1(system, t),
        lambda: check_bp2(system, t),
        lambda: check_bp3(system, t),
    )
    checks = []
    for step in steps:
        result = step()
        checks.append(result)
        if not result.passed:
            break
    overall = CERTIFIED if len(checks) == len(steps) and all(c.passed for c in checks) else REJECTED
    return BPCertificate(fingerprint(system), t, tuple(checks), overall,
                         witness_labels=tuple(system.labels[i] for i in t))


# --------------------------------------------------------------------------
# verification

def _expected_checks(system: CoxeterSystem, t: tuple[int, ...]) -> list[tuple[str, str, str, str | None, dict]]:
    """Recompute the check sequence from the primitives, without the
    ``check_*`` functions above."""
    out = []
    decomp = classify_finite_type(system, t)
    pd = is_positive_definite(gram_matrix(system, t))
    if decomp.is_spherical != pd:
        raise ConsistencyFault("diagram classification and Gram definiteness disagree",
                               {"subset": list(t), "positive_definite": pd})
    ev = {"components": _components_json(decomp), "positive_definite": pd}
    if pd:
        ev["order"] = order_of(decomp)
    out.append(("SPHERICAL", PASS if pd else FAIL, COMPUTED, None, ev))
    if not pd:
        return out

    maximal = maximal_spherical_subsets(system)
    outside = [s for s in range(system.rank) if s not in t]
    ext = [s for s in outside if classify_finite_type(system, tuple(sorted(t + (s,)))).is_spherical]
    out.append(("MAXIMALITY", FAIL if ext else PASS, COMPUTED, None,
                {"checked": outside, "spherical_extensions": ext}))
    if ext:
        return out
    if t not in maximal:
        raise ConsistencyFault("maximality check disagrees with maximal subset list", {"subset": list(t)})

    k = nullity(gram_matrix(system, t))
    out.append(("UNIQUE_FIXED_POINT", PASS if k == 0 else FAIL, COMPUTED, "davis-cell-unique-fixed-point",
                {"nullity": k, "dimension": len(t)}))
    if k:
        return out

    out.append(("SELF_NORMALIZED", PASS, THEOREM_CITED, "maximal-elliptic-self-normalizing",
                {"maximal": True, "nullity": 0}))
    comps = [{"type": name, "w0_central": is_w0_central(system, nodes)} for name, nodes in decomp.components]
    center = 2 ** sum(c["w0_central"] for c in comps)
    out.append(("BP1", PASS, COMPUTED, None,
                {"order": order_of(decomp), "center_order": center, "components": comps}))
    out.append(("BP2", PASS, THEOREM_CITED, "cocompact-finitely-many-maximal-finite-classes",
                {"maximal_subsets": [list(m) for m in maximal], "conjugacy_class_bound": len(maximal),
                 "witness_listed": True}))
    out.append(("BP3", PASS, THEOREM_CITED, "finite-out-rigidity", {"order": order_of(decomp)}))
    return out


def _check_advisory(system: CoxeterSystem, t, data: dict) -> bool:
    try:
        q = PermQuotient.from_json(data["quotient"])
    except (KeyError, TypeError, ValueError):
        return False
    if not verify_quotient(system, q):
        return False
    return normalizer_evidence(system, t, q).to_json() == data


def certificate_problems(system: CoxeterSystem, cert: BPCertificate | dict | str) -> list[str]:
    """Discrepancies between ``cert`` and a from-scratch recomputation.

    Raises on a format error, a fingerprint mismatch or an unknown citation
    anchor; verdict and evidence mismatches are returned as messages.
    """
    if isinstance(cert, str):
        cert = BPCertificate.loads(cert)
    elif isinstance(cert, dict):
        cert = BPCertificate.from_json(cert)
    if cert.schema_version != SCHEMA_VERSION:
        raise CertificateFormatError(f"unsupported schema_version {cert.schema_version!r}")
    if cert.fingerprint != fingerprint(system):
        raise FingerprintMismatchError("certificate was issued for a different system")
    for c in cert.checks:
        if c.citation is not None and c.citation not in CITATIONS:
            raise UnknownCitationError(f"unknown citation anchor {c.citation!r}")
        if c.justification == THEOREM_CITED and not c.citation:
            raise UnknownCitationError(f"{c.condition_id} is theorem_cited without a citation")
    try:
        t = check_subset(system, cert.witness)
    except IndexError as exc:
        return [f"witness invalid: {exc}"]
    if list(t) != list(cert.witness):
        return ["witness is not a sorted list of distinct indices"]

    problems = []
    expected = _expected_checks(system, t)
    if len(expected) != len(cert.checks):
        problems.append(f"expected {len(expected)} checks, certificate has {len(cert.checks)}")
    for (cid, verdict, just, cite, ev), got in zip(expected, cert.checks):
        if got.condition_id != cid:
            problems.append(f"check order: expected {cid}, found {got.condition_id}")
            continue
        if got.verdict != verdict:
            problems.append(f"{cid}: verdict {got.verdict}, recomputed {verdict}")
        if got.justification != just or got.citation != cite:
            problems.append(f"{cid}: justification/citation do not match")
        got_ev = dict(got.evidence)
        advisory = got_ev.pop("advisory", None)
        if got_ev != ev:
            problems.append(f"{cid}: evidence {got_ev} does not reproduce {ev}")
        if advisory is not None and (cid != "SELF_NORMALIZED" or not _check_advisory(system, t, advisory)):
            problems.append(f"{cid}: advisory quotient evidence does not reproduce")
    overall = CERTIFIED if not problems and len(expected) == len(CHECK_ORDER) \
        and all(v == PASS for _, v, *_ in expected) else REJECTED
    if not problems and cert.overall != overall:
        problems.append(f"overall {cert.overall}, recomputed {overall}")
    return problems


def verify_certificate(system: CoxeterSystem, cert: BPCertificate | dict | str) -> bool:
    return not certificate_problems(system, cert)
