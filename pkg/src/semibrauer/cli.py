"""Command line front end.

Exit codes: 0 all checks pass, 1 verification failure, 2 usage or parse
error, 3 a resource bound was exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .algebra import (
    DEFAULT_MAX_ORDER,
    FiniteGroup,
    enumerate_modifications,
    modification_from_zero_set,
    parse_group_spec,
)
from .cohomology import brute_force_cohomology, cohomology
from .errors import AlgebraError, BudgetExceeded, GroupTooLarge, ParseError, TooLarge
from .fields import DEFAULT_MAX_Q, galois_module, parse_extension
from .monoid import build_monoid
from .verify import verify_corollary

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3
DEFAULT_BUDGET = 10**5


@dataclass
class RunConfig:
    command: str
    spec: str
    output_format: str
    out: str | None = None
    cache_dir: str | None = None
    bounds: dict = field(default_factory=dict)
    zeros: str | None = None

    def cache_key(self) -> str:
        blob = json.dumps(
            {
                "command": self.command,
                "spec": self.spec,
                "zeros": self.zeros,
                "bounds": self.bounds,
                "version": __version__,
            },
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:24]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_group(spec: str) -> FiniteGroup:
    path = Path(spec)
    if path.suffix == ".json" or path.is_file():
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read group file {spec!r}: {exc}") from exc
        return FiniteGroup.from_json(data)
    try:
        return parse_group_spec(spec)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


# -- payload builders (pure, cacheable) --------------------------------------


def modifications_payload(cfg: RunConfig) -> dict:
    G = _load_group(cfg.spec)
    mods = enumerate_modifications(G, cfg.bounds["max_order"])
    return {
        "group": G.to_json(),
        "count": len(mods),
        "modifications": [{"id": i, "zero_pairs": [list(p) for p in S.zero_pairs]} for i, S in enumerate(mods)],
    }


def component_payload(cfg: RunConfig) -> dict:
    e = parse_extension(cfg.spec, cfg.bounds["max_q"])
    gm = galois_module(e)
    try:
        zeros = json.loads(cfg.zeros or "[]")
    except json.JSONDecodeError as exc:
        raise ParseError(f"--zeros is not a JSON array: {exc}") from exc
    if not isinstance(zeros, list) or not all(isinstance(p, list) and len(p) == 2 for p in zeros):
        raise ParseError("--zeros must be a JSON array of [i, j] pairs")
    S = modification_from_zero_set(gm.group, [tuple(p) for p in zeros])
    M = gm.module_for(S)
    sl = cohomology(M, 2)
    out = {
        "extension": e.to_json(),
        "zero_pairs": [list(p) for p in S.zero_pairs],
        "component": sl.to_json(),
    }
    try:
        bf = brute_force_cohomology(M, 2, cfg.bounds["budget"])
        out["oracle"] = {"order": bf.order, "agrees": bf.matches(sl)}
    except BudgetExceeded:
        out["oracle"] = None
    return out


def monoid_payload(cfg: RunConfig) -> dict:
    e = parse_extension(cfg.spec, cfg.bounds["max_q"])
    gm = galois_module(e)
    M = build_monoid(gm.group, gm, cfg.bounds["max_order"])
    return M.to_json(module_info=gm.to_json())


def verify_payload(cfg: RunConfig) -> dict:
    e = parse_extension(cfg.spec, cfg.bounds["max_q"])
    gm = galois_module(e)
    mods = enumerate_modifications(gm.group, cfg.bounds["max_order"])
    reports = [verify_corollary(e, S, i, rotate_check=True) for i, S in enumerate(mods)]
    summary = {
        "tested": len(reports),
        "passed": sum(1 for r in reports if r.ok),
        "hypothesis_not_met": sum(1 for r in reports if r.exactness.verdict == "hypothesis-not-met"),
        "failed": sum(1 for r in reports if not r.ok),
    }
    return {
        "meta": {"tool": "semibrauer", "version": __version__},
        "extension": e.to_json(),
        "reports": [r.to_json() for r in reports],
        "summary": summary,
    }


PAYLOADS = {
    "modifications": modifications_payload,
    "component": component_payload,
    "monoid": monoid_payload,
    "verify": verify_payload,
}


# -- rendering -----------------------------------------------------------------


def _pairs_text(pairs) -> str:
    return "{" + ", ".join(f"({a},{b})" for a, b in pairs) + "}"


def render_text(command: str, payload: dict) -> str:
    lines = []
    if command == "modifications":
        n = payload["count"]
        lines.append(f"{n} modification" + ("" if n == 1 else "s"))
        for m in payload["modifications"]:
            lines.append(f"  [{m['id']}] {_pairs_text(m['zero_pairs'])}")
    elif command == "component":
        factors = payload["component"]["invariant_factors"]
        group = " + ".join(f"Z/{d}" for d in factors) or "trivial group"
        lines.append(f"H^2_0 over {_pairs_text(payload['zero_pairs'])}: {group}")
        lines.append(f"invariant factors: {factors}")
        for k, rep in enumerate(payload["component"]["representatives"]):
            vals = ", ".join(
                f"({','.join(map(str, t))})->{v[0] if len(v) == 1 else v}"
                for t, v in zip(rep["tuples"], rep["values"])
            )
            lines.append(f"  generator {k}: {vals}")
        if payload.get("oracle") is not None:
            lines.append(f"brute-force oracle agrees: {payload['oracle']['agrees']}")
    elif command == "monoid":
        comps = payload["components"]
        lines.append(f"{len(comps)} components, {len(payload['eps'])} restriction maps")
        for c, m in zip(comps, payload["modifications"]):
            factors = c["invariant_factors"]
            lines.append(f"  [{c['id']}] {_pairs_text(m['zero_pairs'])}: " + (" + ".join(f"Z/{d}" for d in factors) or "0"))
    elif command == "verify":
        for r in payload["reports"]:
            ex = r["exactness"]
            status = "pass" if _report_ok(r) else "FAIL"
            lines.append(
                f"  [{ex['modification_id']}] {_pairs_text(r['zero_pairs'])} |U|={len(ex['units'])} "
                f"H2_0(S)={r['component_invariants']} H2_0(S/U)={r['quotient_component_invariants']} {status}"
            )
        s = payload["summary"]
        lines.append(f"{s['passed']}/{s['tested']} pass")
    return "\n".join(lines) + "\n"


def _report_ok(r: dict) -> bool:
    ex = r["exactness"]
    extras = (ex["descent_round_trip"], ex["psi_paths_agree"], ex["transversal_independent"])
    return (
        r["factors_equal"]
        and r["psi_isomorphism"]
        and r["h2_of_units_trivial"]
        and r["fixed_submodule_agrees"]
        and ex["verdict"] == "pass"
        and all(v is not False for v in extras)
    )


def _status(command: str, payload: dict) -> int:
    if command == "verify":
        return EXIT_OK if payload["summary"]["failed"] == 0 else EXIT_FAIL
    if command == "component" and payload.get("oracle") and not payload["oracle"]["agrees"]:
        return EXIT_FAIL
    return EXIT_OK


def compute(cfg: RunConfig) -> dict:
    """Build the payload, consulting the cache directory when configured."""
    if cfg.cache_dir:
        path = Path(cfg.cache_dir) / f"{cfg.command}-{cfg.cache_key()}.json"
        if path.is_file():
            return json.loads(path.read_text())
        payload = PAYLOADS[cfg.command](cfg)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(dumps(payload))
        os.replace(tmp, path)
        return payload
    return PAYLOADS[cfg.command](cfg)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=None)
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--cache-dir", metavar="PATH")
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    common.add_argument("--max-q", type=int, default=DEFAULT_MAX_Q)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    parser = argparse.ArgumentParser(
        prog="semibrauer",
        description="Modifications, 0-cohomology and Brauer monoids of finite field extensions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("modifications", parents=[common], help="enumerate modifications of a group")
    p.add_argument("spec", help="C<n>, D<n>, S3, V4, or a group JSON file")
    p = sub.add_parser("component", parents=[common], help="one component H^2_0(S, L^x)")
    p.add_argument("spec", help="extension, e.g. 2:16 or p=2,m=1,n=4")
    p.add_argument("--zeros", default="[]", help="zero pairs as a JSON array, e.g. '[[1,1]]'")
    p = sub.add_parser("monoid", parents=[common], help="the Brauer monoid M(G, L) as JSON")
    p.add_argument("spec")
    p = sub.add_parser("verify", parents=[common], help="check the exact sequence and the finite-field isomorphism")
    p.add_argument("spec")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("max_order", "max_q", "budget"):
        if getattr(args, name) < 1:
            parser.error(f"--{name.replace('_', '-')} must be positive")
    fmt = args.format or ("json" if args.command == "monoid" else "text")
    cfg = RunConfig(
        command=args.command,
        spec=args.spec,
        output_format=fmt,
        out=args.out,
        cache_dir=args.cache_dir,
        bounds={"max_order": args.max_order, "max_q": args.max_q, "budget": args.budget},
        zeros=getattr(args, "zeros", None),
    )
    try:
        payload = compute(cfg)
    except (GroupTooLarge, TooLarge, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (AlgebraError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps(payload) if fmt == "json" else render_text(cfg.command, payload)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return _status(cfg.command, payload)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
