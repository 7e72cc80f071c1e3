"""Command-line interface: ``hopfbundle <subcommand> [options]``.

Exit codes: 0 ok, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import geometry as geo
from .algebra import ParseError, parse, render

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FORMATS = ("text", "json", "csv")
_RANGE_FLAGS = ("--mu-range", "--t-range")


class UsageError(Exception):
    pass


def parse_range(text: str, kind=int) -> tuple:
    """'a..b' -> (a, b)."""
    parts = text.split("..")
    if len(parts) != 2:
        raise UsageError(f"expected a range 'a..b', got {text!r}")
    try:
        lo, hi = kind(parts[0]), kind(parts[1])
    except ValueError:
        raise UsageError(f"bad range bounds in {text!r}") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def parse_nodes(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        nt, np_ = int(a), int(b)
    except ValueError:
        raise UsageError(f"--nodes expects NthetaxNphi, e.g. 64x128, got {text!r}") from None
    if nt < 16 or np_ < 16:
        raise UsageError("--nodes sizes must be >= 16")
    return nt, np_


def _seed(text: str) -> int:
    return int(text, 0)


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=FORMATS, default=d("text"), help="output format")
    parser.add_argument("--out", default=d(None), help="write output to PATH instead of stdout")
    parser.add_argument("--nodes", default=d("64x128"), help="quadrature size NthetaxNphi")
    parser.add_argument("--seed", type=_seed, default=d(0x4E434731), help="seed for randomized suites")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopfbundle", description=__doc__.splitlines()[0])
    _globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        _globals(sp, suppress=True)
        return sp

    sp = add("idempotent", "print the idempotent of L_mu")
    sp.add_argument("--mu", type=int, required=True)
    sp.add_argument("--kind", choices=("etilde", "p"), default="etilde")

    sp = add("pairing", "Chern numbers for a range of mu")
    sp.add_argument("--mu-range", default="-3..3")
    sp.add_argument("--source", choices=("etilde", "p", "E"), default="etilde")

    sp = add("chern", "Chern number of L_mu; csv format emits the density field")
    sp.add_argument("--mu", type=int, required=True)
    sp.add_argument("--source", choices=("etilde", "p", "E"), default="etilde")

    sp = add("verify", "run verification suites")
    sp.add_argument("--suite", choices=("hopf", "projectors", "connection", "topology", "all"), default="all")

    sp = add("action-demo", "sample orbits of the plane flow")
    sp.add_argument("--orbits", type=int, default=12)
    sp.add_argument("--t-range", default="-3..3")
    sp.add_argument("--steps", type=int, default=200)
    sp.add_argument("--emit", choices=FORMATS, default=None, help="alias for --format")

    sp = add("witness", "non-properness witness report")
    sp.add_argument("--n-max", type=int, default=20)

    sp = add("hopf-check", "Hopf axioms on PBW monomials")
    sp.add_argument("--max-degree", type=int, default=5)

    sp = add("decompose", "coefficients of a section of L_mu in the module generators")
    sp.add_argument("--mu", type=int, required=True)
    sp.add_argument("--poly", required=True, help="polynomial, e.g. 'a^2*c - c^3'")
    return p


def _normalise_argv(argv: Sequence[str]) -> list[str]:
    # allow '--mu-range -3..3' although the value starts with '-'
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a in _RANGE_FLAGS:
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


# --- commands ------------------------------------------------------------------

def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def cmd_idempotent(args) -> tuple[str, int]:
    from .projectors import MAX_ABS_MU, build_E_tilde, build_p

    if abs(args.mu) > MAX_ABS_MU:
        raise UsageError(f"|mu| must be <= {MAX_ABS_MU}")
    if args.kind == "etilde":
        M = build_E_tilde(args.mu)
        if args.format == "json":
            return _json(M.to_json()), EXIT_OK
        if args.format == "csv":
            return _csv([[render(x) for x in row] for row in M.entries], [f"c{j}" for j in range(M.cols)]), EXIT_OK
        return M.render() + "\n", EXIT_OK
    P = build_p(args.mu)
    if args.format == "json":
        return _json(P.to_json()), EXIT_OK
    if args.format == "csv":
        rows = [[f"({render(x)})/({render(P.den)})" for x in row] for row in P.num.entries]
        return _csv(rows, [f"c{j}" for j in range(P.num.cols)]), EXIT_OK
    if P.den == parse("1"):
        return P.num.render() + "\n", EXIT_OK
    return P.render() + "\n", EXIT_OK


def cmd_pairing(args) -> tuple[str, int]:
    from .chern import INTEGRALITY_TOL, pairing_table

    lo, hi = parse_range(args.mu_range)
    nt, nph = parse_nodes(args.nodes)
    rows = pairing_table(range(lo, hi + 1), nt, nph, args.source)
    ok = all(abs(r["residual_to_integer"]) < INTEGRALITY_TOL and round(r["integral"]) == -r["mu"] for r in rows)
    code = EXIT_OK if ok else EXIT_FAIL
    if args.format == "json":
        return _json({"nodes": [nt, nph], "source": args.source, "rows": rows, "passed": ok}), code
    if args.format == "csv":
        return _csv([[r["mu"], _fmt(r["integral"]), _fmt(r["residual_to_integer"])] for r in rows],
                    ["mu", "integral", "residual_to_integer"]), code
    lines = [f"{'mu':>4}  {'integral':>22}  {'residual':>10}"]
    for r in rows:
        lines.append(f"{r['mu']:>4}  {r['integral']:>22.15f}  {r['residual_to_integer']:>10.2e}")
    return "\n".join(lines) + "\n", code


def cmd_chern(args) -> tuple[str, int]:
    from .chern import chern_density, chern_number

    nt, nph = parse_nodes(args.nodes)
    if args.format == "csv":
        theta, phi, _ = geo.quadrature_grid(nt, nph)
        vals = chern_density(args.mu, args.source)(theta, phi)
        return geo.write_field_csv(theta, phi, vals), EXIT_OK
    value = chern_number(args.mu, nt, nph, args.source)
    ok = abs(value + args.mu) < 1e-6
    if args.format == "json":
        return _json({"mu": args.mu, "source": args.source, "nodes": [nt, nph], "chern_number": value,
                      "expected": -args.mu, "passed": ok}), EXIT_OK if ok else EXIT_FAIL
    return f"{_fmt(value)}\n", EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> tuple[str, int]:
    from .verify import run_suite

    reports = run_suite(args.suite, args.seed)
    ok = all(r.passed for r in reports)
    code = EXIT_OK if ok else EXIT_FAIL
    if args.format == "json":
        return _json({"seed": args.seed, "passed": ok, "suites": [r.to_json() for r in reports]}), code
    if args.format == "csv":
        rows = [[r.suite, c.name, "pass" if c.passed else "FAIL", c.detail] for r in reports for c in r.checks]
        return _csv(rows, ["suite", "check", "status", "detail"]), code
    lines = []
    for r in reports:
        lines.append(f"[{r.suite}] {'PASS' if r.passed else 'FAIL'}")
        for c in r.checks:
            lines.append(f"  {'ok  ' if c.passed else 'FAIL'} {c.name}: {c.detail}")
    if not ok:
        first = next(c for r in reports for c in r.checks if not c.passed)
        lines.append(f"first failure: {first.name} ({first.detail}); reproduce with --seed {args.seed}")
    return "\n".join(lines) + "\n", code


def cmd_action_demo(args) -> tuple[str, int]:
    from .topology import orbit_samples

    lo, hi = parse_range(args.t_range, float)
    if max(abs(lo), abs(hi)) > 50:
        raise UsageError("|t| must be <= 50")
    if args.orbits < 1 or args.steps < 2:
        raise UsageError("--orbits must be >= 1 and --steps >= 2")
    rows = orbit_samples(args.orbits, lo, hi, args.steps)
    fmt = args.emit or args.format
    if fmt == "json":
        return _json([{"orbit_id": i, "x": x, "y": y} for i, x, y in rows]), EXIT_OK
    return _csv([[i, _fmt(x), _fmt(y)] for i, x, y in rows], ["orbit_id", "x", "y"]), EXIT_OK


def cmd_witness(args) -> tuple[str, int]:
    from .topology import nonproperness_witness

    if args.n_max < 3:
        raise UsageError("--n-max must be >= 3")
    r = nonproperness_witness(args.n_max)
    code = EXIT_OK if r.passed else EXIT_FAIL
    if args.format == "csv":
        rows = [[p["n"], _fmt(p["x"]), _fmt(p["x_prime"]), p["same_orbit"],
                 "" if p["time"] is None else _fmt(p["time"])] for p in r.pairs]
        return _csv(rows, ["n", "x", "x_prime", "same_orbit", "time"]), code
    return _json(r.to_json()), code


def cmd_hopf_check(args) -> tuple[str, int]:
    from .hopf import verify_hopf_axioms

    if not 1 <= args.max_degree <= 8:
        raise UsageError("--max-degree must be in 1..8")
    rep = verify_hopf_axioms(args.max_degree)
    code = EXIT_OK if rep.passed else EXIT_FAIL
    if args.format == "json":
        return _json(rep.to_json()), code
    if args.format == "csv":
        rows = [[r.name, r.passed, r.checked, r.first_failure or ""] for r in rep.results]
        return _csv(rows, ["axiom", "passed", "checked", "first_failure"]), code
    lines = [f"{'ok  ' if r.passed else 'FAIL'} {r.name} ({r.checked} monomials)" for r in rep.results]
    return "\n".join(lines) + "\n", code


def cmd_decompose(args) -> tuple[str, int]:
    from .projectors import NotHomogeneousError, build_vw, decompose_section, reconstruct_section

    try:
        f = parse(args.poly)
    except ParseError as exc:
        raise UsageError(f"cannot parse polynomial at position {exc.position}: {exc}") from None
    try:
        coeffs = decompose_section(f, args.mu)
    except NotHomogeneousError as exc:
        raise UsageError(str(exc)) from None
    gens = build_vw(args.mu)[1]
    ok = reconstruct_section(coeffs, args.mu) == f
    code = EXIT_OK if ok else EXIT_FAIL
    if args.format == "json":
        return _json({"mu": args.mu, "section": render(f),
                      "terms": [{"k": k, "generator": render(g), "coefficient": render(c)}
                                for k, (g, c) in enumerate(zip(gens, coeffs))],
                      "reconstructs": ok}), code
    if args.format == "csv":
        return _csv([[k, render(g), render(c)] for k, (g, c) in enumerate(zip(gens, coeffs))],
                    ["k", "generator", "coefficient"]), code
    lines = [f"k={k}  g={render(g)}  f_k={render(c)}" for k, (g, c) in enumerate(zip(gens, coeffs))]
    lines.append(f"reconstructs: {ok}")
    return "\n".join(lines) + "\n", code


COMMANDS = {
    "idempotent": cmd_idempotent,
    "pairing": cmd_pairing,
    "chern": cmd_chern,
    "verify": cmd_verify,
    "action-demo": cmd_action_demo,
    "witness": cmd_witness,
    "hopf-check": cmd_hopf_check,
    "decompose": cmd_decompose,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_normalise_argv(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        parse_nodes(args.nodes)
        text, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hopfbundle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
