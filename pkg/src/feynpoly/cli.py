"""Command-line interface.

Every command writes a human-readable report and finishes with one machine
line ``COUNTS <json>`` (sorted keys).  Exit codes: 0 when all checks pass,
1 on a verification failure (first counterexample printed), 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from . import gpoly, partition, qed
from .chords import ChordDiagram, ChordError, colour_cycle_counts, double_factorial, enumerate_completions
from .graph import Graph, GraphError, random_connected_graph
from .graphio import DocumentError, load_graph
from .poly import MultiPoly, NotDivisible

OK, FAIL, USAGE = 0, 1, 2

DEFAULT_SUM_GRAPHS = ("one_loop", "two_loop", "graph_h")
DEFAULT_MINOR_GRAPHS = ("ws3", "graph_h")

# column (h) of the published term-count tables, and the census multiset
REFERENCE_COUNTS = {
    "graph_h": {"z0": 437, "z0_compact": 38, "numerator": 25575, "numerator_compact": 2439,
                "s1": 92, "z1_level3_numerator": 1551},
}
REFERENCE_CENSUS = {3: [9, 9, 44, 84, 231, 348, 437, 448]}


class UsageError(Exception):
    """Bad arguments that argparse cannot catch on its own."""


@dataclass
class Report:
    lines: list[str] = field(default_factory=list)
    counts: dict[str, Any] = field(default_factory=dict)
    status: int = OK

    def say(self, text: str = "") -> None:
        self.lines.append(text)

    def fail(self, text: str) -> None:
        if self.status == OK:
            self.lines.append(f"FAIL: {text}")
        self.status = FAIL

    def render(self) -> str:
        body = "\n".join(self.lines)
        machine = "COUNTS " + json.dumps(self.counts, sort_keys=True, separators=(",", ":"))
        return (body + "\n" if body else "") + machine + "\n"


def digest(p: MultiPoly) -> str:
    return hashlib.sha256(p.to_text().encode()).hexdigest()[:16]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _index_list(text: str) -> list[gpoly.Index]:
    out: list[gpoly.Index] = []
    for t in text.split(","):
        t = t.strip()
        if not t:
            continue
        try:
            out.append(("v", int(t[1:])) if t.startswith("v") else int(t))
        except ValueError:
            raise UsageError(f"bad matrix index {t!r} (edge id or v<vertex>)") from None
    return out


def _poly_block(rep: Report, name: str, p: MultiPoly) -> None:
    rep.say(f"{name} = {p.to_text()}")
    rep.counts[f"{name}_terms"] = len(p)
    rep.counts[f"{name}_sha"] = digest(p)


# poly -------------------------------------------------------------------------


def cmd_poly(args: argparse.Namespace, rep: Report) -> None:
    G = load_graph(args.graph)
    what = args.which
    if what == "kirchhoff":
        p = gpoly.kirchhoff(G)
    elif what == "phihat":
        p = gpoly.phi_hat(G)
    elif what in ("cycle", "bond"):
        if len(args.args) != 2:
            raise UsageError(f"{what} needs two edge ids")
        i, j = (int(a) for a in args.args)
        p = (gpoly.cycle_poly if what == "cycle" else gpoly.bond_poly)(G, i, j)
    elif what == "x":
        if len(args.args) != 1:
            raise UsageError("x needs one edge id")
        p = gpoly.x_poly(G, int(args.args[0]))
    elif what == "dodgson":
        if args.rows is None or args.cols is None:
            raise UsageError("dodgson needs --rows and --cols")
        p = gpoly.dodgson_det(G, _index_list(args.rows), _index_list(args.cols))
    elif what == "forest":
        if not args.parts:
            raise UsageError("forest needs --parts, e.g. '1,2|3'")
        parts = [_int_list(chunk) for chunk in args.parts.split("|")]
        p = gpoly.spanning_forest_poly(G, parts)
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(what)
    rep.say(f"graph {G.name or args.graph}: {what}")
    _poly_block(rep, what, p)


# chords -----------------------------------------------------------------------


def _parse_diagram(cycles: str, chords: str) -> ChordDiagram:
    cyc = [_int_list(c) for c in cycles.split(";") if c.strip()]
    ch = []
    for tok in chords.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            a, b = (int(t) for t in tok.split("-"))
        except ValueError:
            raise UsageError(f"bad chord {tok!r}, expected a-b") from None
        ch.append((a, b))
    return ChordDiagram._coloured(cyc, ch)


def cmd_chords(args: argparse.Namespace, rep: Report) -> None:
    if args.which == "enumerate":
        n = _int_list(args.n)
        D0 = ChordDiagram.chordless(n)
        Ds = enumerate_completions(D0, args.k)
        N = D0.N
        rep.say(f"n = {tuple(n)}, k = {args.k}: {len(Ds)} diagrams")
        if args.list:
            for D in Ds:
                c = colour_cycle_counts(D)
                rep.say(f"  {D.chords}  c2={c.c2} c3={c.c3}")
        rep.counts.update({"diagrams": len(Ds), "N": N, "k": args.k})
        if args.k == 0:
            expected = double_factorial(2 * N - 1)
        elif args.k == 1:
            expected = N * double_factorial(2 * N - 1)
        else:
            expected = None
        if expected is not None and expected != len(Ds):
            rep.fail(f"expected {expected} diagrams")
    else:
        D = _parse_diagram(args.cycles, args.chords)
        c = colour_cycle_counts(D)
        rep.say(f"diagram {D.base} chords {D.chords}")
        rep.say(f"c2 = {c.c2} (colour 1: {c.c2_1}, colour 2: {c.c2_2}), c3 = {c.c3}, c~ = {c.c_tilde}")
        rep.counts.update({"c2": c.c2, "c2_1": c.c2_1, "c2_2": c.c2_2, "c3": c.c3, "c_tilde": c.c_tilde})


# zpoly ------------------------------------------------------------------------


def cmd_zpoly(args: argparse.Namespace, rep: Report) -> None:
    G = load_graph(args.graph)
    ctx = qed.make_context(G, args.colour)
    if args.level is not None:
        fn = partition.z0_level if args.which == "z0" else partition.z1_level
        name = f"{args.which}_level{args.level}" if args.which == "z0" else f"s_level{args.level}"
        p = fn(ctx, args.level)
    else:
        p = partition.z0(ctx) if args.which == "z0" else partition.z1(ctx)
        name = args.which
    rep.say(f"graph {G.name or args.graph}, N = {ctx.N}, word colour {args.colour}")
    _poly_block(rep, name, p)


# verify -----------------------------------------------------------------------


def _graphs(names: Sequence[str], default: Sequence[str]) -> list[Graph]:
    return [load_graph(n) for n in (names or default)]


def verify_chord_sum(rep: Report, graphs: list[Graph], k: int) -> None:
    for G in graphs:
        ctx = qed.make_context(G)
        lhs = partition.z0(ctx) if k == 0 else partition.z1(ctx)
        rhs = partition.brute_force_rhs(ctx, k)
        ok = lhs == rhs
        rep.say(f"{G.name}: Z{k} ({len(lhs)} terms) {'==' if ok else '!='} chord-diagram sum ({len(rhs)} terms)")
        rep.counts[f"{G.name}_z{k}_terms"] = len(lhs)
        rep.counts[f"{G.name}_z{k}_sha"] = digest(lhs)
        if not ok:
            rep.fail(f"{G.name}: difference {(lhs - rhs).to_text()[:200]}")


def verify_chi_minor(rep: Report, graphs: list[Graph]) -> None:
    for G in graphs:
        pairs = 0
        for i in G.edge_ids:
            for j in G.edge_ids:
                chi = gpoly.cycle_poly(G, i, j)
                det = gpoly.dodgson_det(G, [i], [j])
                if chi != det and chi != -det:
                    rep.fail(f"{G.name}: chi^({i},{j}) = {chi.to_text()} but minor = {det.to_text()}")
                    return
                pairs += 1
        rep.say(f"{G.name}: chi = +-psi^(i,j) on all {pairs} edge pairs")
        rep.counts[f"{G.name}_pairs"] = pairs


def random_instances(seed: int, count: int, min_edges: int = 4, external: bool = False):
    rng = random.Random(seed)
    for _ in range(count):
        nv = rng.randint(2, 5)
        ne = rng.randint(max(min_edges, nv - 1), 8)
        yield rng, random_connected_graph(rng, nv, ne, external=external)


def verify_dodgson_identity(rep: Report, samples: int, seed: int) -> None:
    n = 0
    for rng, G in random_instances(seed, samples):
        a, b, c, d = rng.sample(G.edge_ids, 4)
        lhs = gpoly.cycle_poly(G, a, c) * gpoly.cycle_poly(G, b, d) - gpoly.cycle_poly(G, a, d) * gpoly.cycle_poly(G, b, c)
        try:
            rhs = gpoly.kirchhoff(G) * gpoly.dodgson_cycle(G, (a, b), (c, d))
        except NotDivisible:
            rep.fail(f"{G.edges} edges {(a, b, c, d)}: not divisible by psi")
            return
        if lhs != rhs:
            rep.fail(f"{G.edges} edges {(a, b, c, d)}: {lhs.to_text()} != {rhs.to_text()}")
            return
        n += 1
    rep.say(f"Dodgson identity holds on {n} random instances (seed {seed})")
    rep.counts["instances"] = n


def verify_identities(rep: Report, samples: int, seed: int) -> None:
    n = 0
    for _, G in random_instances(seed, samples, min_edges=1):
        psi = gpoly.kirchhoff(G)
        for e in G.edge_ids:
            v = G.var(e)
            ae = gpoly.alpha(G, e)
            if gpoly.cycle_poly(G, e, e) != psi.derivative(v):
                rep.fail(f"{G.edges}: chi^({e},{e}) != d psi / d alpha_{e}")
                return
            if gpoly.bond_poly(G, e, e) != ae * psi.set_zero(v):
                rep.fail(f"{G.edges}: beta^({e},{e}) != alpha_{e} psi|alpha_{e}=0")
                return
            for f in G.edge_ids:
                if f == e:
                    continue
                if gpoly.bond_poly(G, e, f) != -(ae * gpoly.alpha(G, f) * gpoly.cycle_poly(G, e, f)):
                    rep.fail(f"{G.edges}: beta^({e},{f}) != -alpha_{e} alpha_{f} chi^({e},{f})")
                    return
        n += 1
    rep.say(f"cycle/bond identities hold on {n} random graphs (seed {seed})")
    rep.counts["graphs"] = n


def verify_stirling(rep: Report, kmax: int) -> None:
    for row in partition.stirling_check(kmax):
        rep.say(f"k = {row.k}: {row.lhs} vs {row.rhs}")
        if not row.ok:
            rep.fail(f"k = {row.k}: {row.lhs} != {row.rhs}")
            return
    rep.counts["kmax"] = kmax


def verify_partial_sums(rep: Report, graphs: list[Graph]) -> None:
    for G in graphs:
        ctx = qed.make_context(G)
        Z0, Z1 = partition.z0(ctx), partition.z1(ctx)
        p0, o0, m0 = partition.partial_sums(ctx, 0)
        if not (p0 == Z0 and o0.is_zero() and m0.is_zero()):
            rep.fail(f"{G.name}: k = 0 diagrams are not all in the + bucket")
            return
        p1, o1, m1 = partition.partial_sums(ctx, 1)
        if p1 + o1 + m1 != Z1:
            rep.fail(f"{G.name}: k = 1 buckets do not sum to Z1")
            return
        rep.say(f"{G.name}: Z0 all in +; Z1 buckets (+, 0, -) = ({len(p1)}, {len(o1)}, {len(m1)}) terms")
        rep.counts[f"{G.name}_buckets"] = [len(p1), len(o1), len(m1)]


def cmd_verify(args: argparse.Namespace, rep: Report) -> None:
    w = args.which
    if w == "z0-sum":
        verify_chord_sum(rep, _graphs(args.graphs, DEFAULT_SUM_GRAPHS), 0)
    elif w == "z1-sum":
        verify_chord_sum(rep, _graphs(args.graphs, DEFAULT_SUM_GRAPHS), 1)
    elif w == "chi-minor":
        verify_chi_minor(rep, _graphs(args.graphs, DEFAULT_MINOR_GRAPHS))
    elif w == "dodgson-identity":
        verify_dodgson_identity(rep, args.samples or 200, args.seed)
    elif w == "identities":
        verify_identities(rep, args.samples or 100, args.seed)
    elif w == "stirling":
        verify_stirling(rep, args.max_k)
    elif w == "partial-sums":
        verify_partial_sums(rep, _graphs(args.graphs, DEFAULT_SUM_GRAPHS))
    rep.say("all checks passed" if rep.status == OK else "verification failed")


# integrand and census ---------------------------------------------------------


def cmd_integrand(args: argparse.Namespace, rep: Report) -> None:
    G = load_graph(args.graph)
    r = qed.renormalised_integrand(G, with_levels=args.counts)
    rep.say(f"graph {r.graph_name}: h1 = {r.h1}")
    rep.say(f"integrand = {r.tensor} * {r.prefactor} * N / psi^{r.denominator_power},  L = log(q^2/mu^2)")
    rep.say(f"numerator degree {r.counts['numerator_degree']}, removed psi power {r.removed_psi_power}")
    if len(r.reduced_numerator) <= 40:
        rep.say(f"N = {r.reduced_numerator.to_text()}")
    c = r.counts
    rep.counts.update({
        "h1": r.h1,
        "kirchhoff_power": r.kirchhoff_power,
        "removed_psi_power": r.removed_psi_power,
        "prefactor": str(r.prefactor),
        "numerator_terms": c["numerator"],
        "reduced_numerator_terms": c["reduced_numerator"],
        "numerator_sha": digest(r.reduced_numerator),
        "z0_terms": c["z0"],
        "z1_terms": c["z1"],
    })
    if args.counts:
        rep.say(f"#Z0 = {c['z0']}; Z0 reduced by psi^{c['z0_removed_psi_power']}: {c['z0_reduced']} terms")
        rep.say(f"#Z0|_l = {c['z0_levels']} (sum {c['z0_levels_total']})")
        rep.say(f"#S_l = {c['s_levels']}")
        rep.say(f"#(phi_hat Z0 + Z1) = {c['numerator']}; after psi removal {c['reduced_numerator']}")
        rep.say(f"#level numerators ((l+2) phi_hat Z0|_l - psi S_l) = {c['level_numerators']} "
                f"(sum {sum(c['level_numerators'])})")
        rep.counts.update({k: c[k] for k in ("z0_levels", "z0_levels_total", "s_levels", "level_numerators",
                                             "z0_reduced", "z0_removed_psi_power")})
        ref = REFERENCE_COUNTS.get(G.name)
        if ref:
            ours = qed.table_column_counts(G, r)
            rep.say("published column comparison (ours vs published):")
            for key, want in ref.items():
                got = ours[key]
                tag = "match" if got == want else "DISCREPANCY"
                rep.say(f"  {key}: {got} vs {want}  {tag}")
            rep.counts["reference_comparison"] = {k: [ours[k], v] for k, v in ref.items()}
    if args.export:
        with open(args.export, "w") as fh:
            fh.write(qed.export_integrand(r))
        rep.say(f"wrote {args.export}")


def cmd_census(args: argparse.Namespace, rep: Report) -> None:
    entries = qed.topology_census(args.loops)
    for e in entries:
        G = e.graph
        photons = [(x.src, x.dst) for x in G.edges if x.kind == "photon"]
        rep.say(f"{G.name}: external {G.external}, photons {photons}, #Z0 = {e.z0_terms}")
    ms = qed.census_multiset(entries)
    rep.say(f"{len(entries)} topologies, #Z0 multiset {ms}")
    rep.counts.update({"topologies": len(entries), "z0_multiset": ms})
    ref = REFERENCE_CENSUS.get(args.loops)
    if ref is not None and ref != ms:
        rep.fail(f"multiset differs from {ref}")


# driver -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="feynpoly", description="Graph and partition polynomials for quenched QED.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("poly", help="graph polynomials")
    sp.add_argument("which", choices=["kirchhoff", "phihat", "cycle", "bond", "dodgson", "forest", "x"])
    sp.add_argument("graph", help="fixture name or graph document path")
    sp.add_argument("args", nargs="*", help="edge ids (cycle, bond: two; x: one)")
    sp.add_argument("--rows", help="deleted rows, e.g. 1,2 or v3")
    sp.add_argument("--cols", help="deleted columns")
    sp.add_argument("--parts", help="vertex partition, e.g. '1,2|3'")
    sp.set_defaults(func=cmd_poly)

    sp = sub.add_parser("chords", help="chord diagrams")
    sp.add_argument("which", choices=["enumerate", "counts"])
    sp.add_argument("--n", default="2", help="base cycle half sizes, e.g. 2,1")
    sp.add_argument("--k", type=int, default=0, help="number of free vertex pairs")
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--cycles", default="1,2,3,4", help="base cycles 'a,b,c,d;e,f', first edge colour 2")
    sp.add_argument("--chords", default="", help="chords 'a-b,c-d'")
    sp.set_defaults(func=cmd_chords)

    sp = sub.add_parser("zpoly", help="partition polynomials")
    sp.add_argument("which", choices=["z0", "z1"])
    sp.add_argument("graph")
    sp.add_argument("--level", type=int)
    sp.add_argument("--colour", type=int, choices=[1, 2], default=2, help="colour of the word base edges")
    sp.set_defaults(func=cmd_zpoly)

    sp = sub.add_parser("verify", help="identity checks")
    sp.add_argument("which", choices=["z0-sum", "z1-sum", "chi-minor", "dodgson-identity", "identities",
                                      "stirling", "partial-sums"])
    sp.add_argument("graphs", nargs="*")
    sp.add_argument("--max-k", type=int, default=12)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int, default=1)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("integrand", help="renormalised integrand report")
    sp.add_argument("graph")
    sp.add_argument("--export", metavar="FILE")
    sp.add_argument("--counts", action="store_true", help="term-count breakdown")
    sp.set_defaults(func=cmd_integrand)

    sp = sub.add_parser("census", help="one-fermion-cycle propagator topologies")
    sp.add_argument("--loops", type=int, default=3)
    sp.set_defaults(func=cmd_census)
    return p


def run_command(argv: Sequence[str] | None = None, out: Callable[[str], Any] | None = None) -> int:
    write = out or sys.stdout.write
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    rep = Report()
    try:
        args.func(args, rep)
    except (UsageError, DocumentError, GraphError, ChordError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"error: {msg}\n")
        return USAGE
    write(rep.render())
    return rep.status


def main(argv: Sequence[str] | None = None) -> int:
    return run_command(argv)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
