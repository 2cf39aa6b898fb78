"""Command-line front end: ``schmidt3q {gate,rank,decompose,verify,eval}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import gates as g
from .als import AlsConfig, Verdict, als_fit, rank_search
from .circuit import CircuitError, evaluate, parse
from .claims import CLAIM_IDS, Status, verify_claim
from .schmidt import bipartite_schmidt, operator_tensor3
from .tensor import IDENTITY_TOL, unitarity_defect


class UsageError(Exception):
    """Bad name, missing file or similar; exit code 2."""


def jsonable(obj):
    """Recursively convert numpy values; complex numbers become ``[re, im]``."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = sorted(obj) if isinstance(obj, (frozenset, set)) else obj
        return [jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(float(obj.real)), jsonable(float(obj.imag))]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if np.isfinite(x) else None
    if isinstance(obj, (Verdict, Status)):
        return obj.value
    return obj


def fmt_number(z) -> str:
    z = complex(z)
    z = complex(0.0 if abs(z.real) < 1e-12 else z.real, 0.0 if abs(z.imag) < 1e-12 else z.imag)
    if z.imag == 0:
        return f"{z.real:.6g}"
    if z.real == 0:
        return f"{z.imag:.6g}j"
    return f"{z.real:.6g}{z.imag:+.6g}j"


def fmt_matrix(m) -> str:
    cells = [[fmt_number(v) for v in row] for row in np.asarray(m)]
    width = max(len(c) for row in cells for c in row)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)


# ---------------------------------------------------------------- targets


def _lookup_gate(name: str):
    """Return ``(matrix, systems, entry_or_None)`` for a catalog or elementary name."""
    if name in g.PAPER_GATE_NAMES:
        e = g.paper_gate(name)
        return e.matrix, e.systems, e
    try:
        m = g.elementary(name)
    except KeyError:
        known = ", ".join(g.PAPER_GATE_NAMES + g.ELEMENTARY_NAMES + ("matmul",))
        raise UsageError(f"unknown gate {name!r} (known: {known})") from None
    return m, (2,) * int(round(np.log2(m.shape[0]))), None


def _read_circuit(path: str):
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"file not found: {path}")
    try:
        return parse(p.read_text())
    except CircuitError as exc:
        raise UsageError(f"{path}: {exc}") from None


# ---------------------------------------------------------------- commands


def cmd_gate(args):
    m, systems, e = _lookup_gate(args.name)
    defect = unitarity_defect(m)
    claimed_unitary = e.claimed_unitary if e else True
    if claimed_unitary:
        verdict = "PASS" if defect <= IDENTITY_TOL else "FAIL"
    else:
        verdict = "NOT-CLAIMED"
    result = {
        "name": args.name,
        "systems": list(systems),
        "matrix": m,
        "unitarity_defect": defect,
        "claimed_unitary": claimed_unitary,
        "claimed_rank": e.claimed_rank if e else None,
        "certificate_terms": len(e.certificate) if e and e.certificate is not None else None,
        "anchor": e.anchor if e else None,
    }
    if e and e.notes:
        result["notes"] = e.notes
    lines = [f"gate {args.name} on systems {tuple(systems)}", fmt_matrix(m),
             f"unitarity defect {defect:.3g} ({verdict})",
             f"claimed rank: {_fmt_claim(result['claimed_rank'])}",
             f"certificate terms: {result['certificate_terms']}"]
    return args.name, [result], {"unitarity": verdict}, lines, verdict == "FAIL"


def _fmt_claim(c):
    if c is None:
        return "none"
    if isinstance(c, frozenset):
        return " or ".join(str(v) for v in sorted(c))
    return str(c)


def _report_lines(rep) -> list[str]:
    d = rep.to_dict()
    lines = [f"mode ranks {tuple(d['mode_ranks'])}, proved lower bound {d['proved_lower']}",
             f"certified upper bound {d['certified_upper']}"]
    for f in d["als_failures"]:
        lines.append(f"ALS rank {f['rank']}: no fit (best residual {f['best_residual']:.3g}, "
                     f"{f['restarts']} restarts)")
    lines.append(f"ALS upper bound {d['als_upper']}")
    lo, hi = d["evidence_interval"]
    lines.append(f"evidence interval [{lo}, {hi}], claimed {d['claimed']}, verdict {d['verdict']}")
    return lines


def _tripartite(target, tensor, hints, claimed, cfg):
    rep = rank_search(tensor, hints, cfg, claimed=claimed, target=target)
    failed = rep.verdict is Verdict.INCONSISTENT
    return rep.to_dict(), {target: rep.verdict.value}, _report_lines(rep), failed


def _rank_target(args):
    if args.circuit:
        circ = _read_circuit(args.circuit)
        return args.circuit, evaluate(circ), (2,) * circ.n_qubits, None
    if args.name is None:
        raise UsageError("rank needs a gate name or --circuit FILE")
    if args.name == "matmul":
        return "matmul", None, None, None
    m, systems, e = _lookup_gate(args.name)
    return args.name, m, systems, e


def cmd_rank(args):
    cfg = AlsConfig(seed=args.seed)
    target, m, systems, e = _rank_target(args)
    if args.cut:
        if m is None:
            raise UsageError("matmul is a tensor, not an operator; drop --cut")
        try:
            bs = bipartite_schmidt(m, args.cut, systems)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        result = {"cut": [list(s) for s in bs.cut], "rank": bs.rank, "weights": bs.weights}
        lines = [f"{target} across {args.cut}: Schmidt rank {bs.rank}",
                 "weights " + " ".join(f"{w:.6g}" for w in bs.weights)]
        return target, [result], {}, lines, False
    if m is None:
        res, verdicts, lines, failed = _tripartite("matmul", g.matmul_tensor(),
                                                   g.strassen_certificate(), 7, cfg)
        return target, [res], verdicts, lines, failed
    if tuple(systems) != (2, 2, 2):
        raise UsageError(f"{target} acts on {len(systems)} systems; tripartite rank needs "
                         "three qubits, pass --cut")
    hints = e.certificate if e else None
    claimed = e.claimed_rank if e else None
    res, verdicts, lines, failed = _tripartite(target, operator_tensor3(m), hints, claimed, cfg)
    return target, [res], verdicts, lines, failed


def cmd_decompose(args):
    cfg = AlsConfig(seed=args.seed)
    if args.rank < 1:
        raise UsageError("--rank must be at least 1")
    if args.name == "matmul":
        t = g.matmul_tensor()
    else:
        m, systems, _ = _lookup_gate(args.name)
        if tuple(systems) != (2, 2, 2):
            raise UsageError(f"{args.name} is not a three-qubit gate")
        t = operator_tensor3(m)
    res = als_fit(t, args.rank, cfg)
    d = res.to_dict()
    f = res.factors
    d["factors"] = {"a": f.a, "b": f.b, "c": f.c}
    lines = [f"rank {res.rank_tried}: best residual {res.best_residual:.3g}, "
             f"converged {res.converged}, restarts used {res.restarts_used}, "
             f"best restart {res.best_restart}, iterations {res.iterations_of_best}"]
    for i, (a, b, c) in enumerate(f.triples()):
        lines.append(f"term {i}:")
        for label, v in (("A", a), ("B", b), ("C", c)):
            lines.append(f"  {label} " + fmt_matrix(v.reshape(2, 2)).replace("\n", "\n    "))
    verdict = "CONVERGED" if res.converged else "NOT-CONVERGED"
    return args.name, [d], {args.name: verdict}, lines, False


def cmd_verify(args):
    cfg = AlsConfig(seed=args.seed)
    ids = CLAIM_IDS if args.claim == "all" else (args.claim,)
    if args.claim != "all" and args.claim not in CLAIM_IDS:
        raise UsageError(f"unknown claim {args.claim!r} (known: {', '.join(CLAIM_IDS)}, all)")
    reports = [verify_claim(cid, cfg) for cid in ids]
    lines = []
    for r in reports:
        lines.append(f"{r.id:<4} {r.overall.value:<14} {r.statement}")
        for c in r.checks:
            lines.append(f"       {c.status.value:<14} {c.description}")
    failed = any(r.overall is Status.FAIL for r in reports)
    return (args.claim, [r.to_dict() for r in reports], {r.id: r.overall.value for r in reports},
            lines, failed)


def cmd_eval(args):
    cfg = AlsConfig(seed=args.seed)
    circ = _read_circuit(args.file)
    m = evaluate(circ)
    result = {"n_qubits": circ.n_qubits, "matrix": m, "unitarity_defect": unitarity_defect(m)}
    lines = [f"{args.file}: {circ.n_qubits} qubits, {len(circ.steps)} steps", fmt_matrix(m)]
    verdicts = {}
    failed = False
    if circ.n_qubits == 3:
        rep, verdicts, rl, failed = _tripartite(args.file, operator_tensor3(m), None, None, cfg)
        result["rank_report"] = rep
        lines += rl
    elif circ.n_qubits > 1:
        letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"[:circ.n_qubits]
        cuts = {f"{letters[k]}|{letters[:k]}{letters[k + 1:]}": None for k in range(circ.n_qubits)}
        for cut in cuts:
            cuts[cut] = bipartite_schmidt(m, cut, (2,) * circ.n_qubits).rank
            lines.append(f"Schmidt rank across {cut}: {cuts[cut]}")
        result["bipartite_ranks"] = cuts
    return args.file, [result], verdicts, lines, failed


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schmidt3q",
                                     description="Schmidt rank tools for three-qubit gates.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="ALS seed (default 0)")

    p = sub.add_parser("gate", help="show a catalog gate")
    p.add_argument("name")
    common(p, seed=False)
    p.set_defaults(func=cmd_gate, seed=0)

    p = sub.add_parser("rank", help="Schmidt rank of a gate or circuit")
    p.add_argument("name", nargs="?")
    p.add_argument("--circuit", metavar="FILE")
    p.add_argument("--cut", help="bipartite cut such as A|BC")
    common(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("decompose", help="ALS fit at a fixed rank")
    p.add_argument("name")
    p.add_argument("--rank", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="check registered claims")
    p.add_argument("claim", nargs="?", default="all")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", help="evaluate a circuit file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_eval)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed < 0:
        parser.error("--seed must be non-negative")
    try:
        target, results, verdicts, lines, failed = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        doc = {"command": args.command, "target": target, "results": results,
               "verdicts": verdicts, "seed": args.seed, "tool_version": __version__}
        print(json.dumps(jsonable(doc), sort_keys=True, indent=2))
    else:
        print("\n".join(lines))
    return 1 if failed else 0


def main() -> None:
    sys.exit(run())
