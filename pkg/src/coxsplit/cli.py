"""Command-line front end.

    coxsplit analyze SYSTEM.cox
    coxsplit certify SYSTEM.cox [--subset 0,1] [--max-degree D]
    coxsplit verify SYSTEM.cox CERT.json
    coxsplit reduce SYSTEM.cox --word "s1 s2 s1"
    coxsplit quotients SYSTEM.cox [--max-degree D] [--max-count K]
    coxsplit separate SYSTEM.cox --word "s1 s2" [--max-degree D]

Every command takes ``--json`` (canonical JSON instead of the table view)
and ``--output PATH``.  Exit codes: 0 success (a rejected certificate is a
success), 2 usage error, 3 input-format error, 4 internal consistency fault.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .certificate import (SCHEMA_VERSION, CertificateError, ConsistencyFault,
                          PreconditionError, canonical_json, certificate_problems, certify_bp,
                          fingerprint)
from .coxeter import (CoxeterFormatError, EnumerationCapError, classify_finite_type,
                      enumerate_spherical_subsets, maximal_spherical_subsets, order_of,
                      parse_coxeter_system)
from .quotients import (IdentityWordError, search_quotients, separate_element, separation_evidence,
                         to_cycles)
from .words import format_word, parse_word, shortlex_normal_form

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_FAULT = 0, 2, 3, 4


class InputError(Exception):
    pass


@dataclass(frozen=True)
class Report:
    command: str
    system_fingerprint: str
    payload: dict
    tool_version: str = __version__
    schema_version: str = SCHEMA_VERSION

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "system_fingerprint": self.system_fingerprint,
            "payload": self.payload,
            "tool_version": self.tool_version,
            "schema_version": self.schema_version,
        }

    @classmethod
    def from_json(cls, data: dict) -> Report:
        return cls(data["command"], data["system_fingerprint"], data["payload"],
                   data["tool_version"], data["schema_version"])


def emit_report(report: Report, mode: str = "human") -> str:
    if mode == "json":
        return canonical_json(report.to_json()) + "\n"
    if mode != "human":
        raise ValueError(f"unknown mode {mode!r}")
    lines = [f"{report.command}  (system {report.system_fingerprint[:12]}, schema {report.schema_version})"]
    lines.extend(_RENDER[report.command](report.payload))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# human rendering

def _fmt_subset(labels) -> str:
    return "{" + ", ".join(labels) + "}"


def _render_analyze(p):
    out = [f"rank {p['rank']}  labels {' '.join(p['labels'])}", "", "spherical subsets:"]
    width = max((len(_fmt_subset(r["labels"])) for r in p["spherical"]), default=2)
    for r in p["spherical"]:
        mark = "*" if r["maximal"] else " "
        out.append(f"  {mark} {_fmt_subset(r['labels']):<{width}}  {r['type']:<16} order {r['order']}")
    out.append("")
    out.append("maximal: " + "  ".join(_fmt_subset(m["labels"]) for m in p["maximal"]))
    return out


def _render_certificate(p):
    cert = p["certificate"]
    out = [f"witness {_fmt_subset(cert['witness_labels'])}: {cert['overall'].upper()}"]
    for c in cert["checks"]:
        cite = f"  [{c['citation']}]" if c["citation"] else ""
        out.append(f"  {c['condition_id']:<20} {c['verdict']:<5} {c['justification']:<14}{cite}")
    failing = next((c for c in cert["checks"] if c["verdict"] != "pass"), None)
    if failing:
        out.append(f"first failing condition: {failing['condition_id']}")
    return out


def _render_verify(p):
    out = [f"certificate {'VALID' if p['valid'] else 'INVALID'}"]
    out.extend(f"  - {msg}" for msg in p["problems"])
    return out


def _render_reduce(p):
    return [f"input        {p['word'] or '(empty)'}",
            f"normal form  {p['normal_form'] or '(empty)'}",
            f"length       {p['length']}"]


def _render_quotient(q, labels):
    return f"degree {q['degree']}, image order {q['image_order']}: " + \
        ", ".join(f"{lab} -> {img}" for lab, img in zip(labels, q["images"]))


def _render_quotients(p):
    out = [f"{len(p['quotients'])} quotient(s) up to degree {p['max_degree']}"]
    out.extend("  " + _render_quotient(q, p["labels"]) for q in p["quotients"])
    return out


def _render_separate(p):
    if p["quotient"] is None:
        return [f"no separating quotient up to degree {p['max_degree']} (inconclusive)"]
    return [f"word {p['word']} separated", "  " + _render_quotient(p["quotient"], p["labels"]),
            f"  image {p['image']} of order {p['image_order']}"]


_RENDER = {
    "analyze": _render_analyze,
    "certify": _render_certificate,
    "verify": _render_verify,
    "reduce": _render_reduce,
    "quotients": _render_quotients,
    "separate": _render_separate,
}


# --------------------------------------------------------------------------
# commands

def _load_system(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_coxeter_system(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _parse_subset(system, text: str | None):
    if text is None:
        return None
    try:
        idx = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--subset expects comma-separated indices, got {text!r}") from None
    for i in idx:
        if not 0 <= i < system.rank:
            raise InputError(f"subset index {i} out of range for rank {system.rank}")
    return idx


def _parse_word(system, text: str):
    try:
        return parse_word(system, text)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None


def cmd_analyze(system, args):
    maximal = maximal_spherical_subsets(system)
    rows = []
    for t in enumerate_spherical_subsets(system):
        decomp = classify_finite_type(system, t)
        rows.append({
            "subset": list(t),
            "labels": [system.labels[i] for i in t],
            "type": str(decomp),
            "components": [{"type": n, "nodes": list(v)} for n, v in decomp.components],
            "order": order_of(decomp),
            "maximal": t in maximal,
        })
    return {
        "rank": system.rank,
        "labels": list(system.labels),
        "spherical": rows,
        "maximal": [{"subset": list(t), "labels": [system.labels[i] for i in t]} for t in maximal],
    }


def cmd_certify(system, args):
    cert = certify_bp(system, _parse_subset(system, args.subset), advisory_degree=args.max_degree)
    return {"certificate": cert.to_json()}


def cmd_verify(system, args):
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.certificate}: {exc.strerror}") from None
    data = json.loads(text) if text.strip() else {}
    # accept a bare certificate or a certify report wrapping one
    if isinstance(data, dict) and "payload" in data and "certificate" in data.get("payload", {}):
        data = data["payload"]["certificate"]
    problems = certificate_problems(system, data)
    return {"valid": not problems, "problems": problems}


def cmd_reduce(system, args):
    w = _parse_word(system, args.word)
    nf = shortlex_normal_form(system, w)
    return {"word": format_word(system, w), "normal_form": format_word(system, nf.letters),
            "letters": list(nf.letters), "length": nf.length}


def cmd_quotients(system, args):
    qs = search_quotients(system, args.max_degree, args.max_count, workers=args.workers)
    return {"max_degree": args.max_degree, "max_count": args.max_count, "labels": list(system.labels),
            "quotients": [q.to_json() for q in qs]}


def cmd_separate(system, args):
    w = _parse_word(system, args.word)
    try:
        q = separate_element(system, w, args.max_degree)
    except IdentityWordError as exc:
        raise InputError(str(exc)) from None
    payload = {"word": format_word(system, w), "max_degree": args.max_degree,
               "labels": list(system.labels), "quotient": None}
    if q is not None:
        ev = separation_evidence(system, w, q)
        payload.update(quotient=q.to_json(), image=to_cycles(q.image(w)), image_order=ev.result_order)
    return payload


COMMANDS = {
    "analyze": cmd_analyze,
    "certify": cmd_certify,
    "verify": cmd_verify,
    "reduce": cmd_reduce,
    "quotients": cmd_quotients,
    "separate": cmd_separate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coxsplit", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("system", help="Coxeter system file (.cox)")
        p.add_argument("--json", action="store_true", help="emit canonical JSON")
        p.add_argument("--output", metavar="PATH", help="write the report to PATH instead of stdout")
        return p

    add("analyze", "spherical and maximal spherical subsets with types and orders")
    p = add("certify", "Aut-splitting certificate for a standard parabolic subgroup")
    p.add_argument("--subset", help="comma-separated generator indices (default: least maximal subset)")
    p.add_argument("--max-degree", type=int, default=None,
                   help="attach advisory normalizer evidence from quotients up to this degree")
    p = add("verify", "re-check a certificate file")
    p.add_argument("certificate", help="certificate JSON (bare or a certify --json report)")
    p = add("reduce", "ShortLex normal form of a word")
    p.add_argument("--word", required=True, help='whitespace-separated labels, e.g. "s1 s2 s1"')
    p = add("quotients", "search finite permutation quotients")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--max-count", type=int, default=10)
    p.add_argument("--workers", type=int, default=1, help=argparse.SUPPRESS)
    p = add("separate", "find a finite quotient in which a word is nontrivial")
    p.add_argument("--word", required=True)
    p.add_argument("--max-degree", type=int, default=6)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    for flag in ("max_degree", "max_count"):
        v = getattr(args, flag, None)
        if v is not None and v < 1:
            print(f"coxsplit: --{flag.replace('_', '-')} must be >= 1", file=sys.stderr)
            return EXIT_USAGE
    try:
        system = _load_system(args.system)
        payload = COMMANDS[args.command](system, args)
    except ConsistencyFault as exc:
        print(f"coxsplit: internal consistency fault: {exc}", file=sys.stderr)
        return EXIT_FAULT
    except (InputError, CoxeterFormatError, CertificateError, EnumerationCapError,
            PreconditionError, json.JSONDecodeError) as exc:
        print(f"coxsplit: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = Report(args.command, fingerprint(system), payload)
    text = emit_report(report, "json" if args.json else "human")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
