"""Command-line front end: ``gaussnet <verb> ...``.

Exit status is 0 on success, 1 on domain errors (and for ``verify`` when
the polynomial does not vanish) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import hidden, markov, polytope, tetrad, trees, treks
from .errors import GaussnetError, ParseError
from .graph import Dag, parse_dag
from .linalg import RationalMatrix
from .polynomial import Poly, format_poly, parse_poly

SCHEMA = 1


class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []
        self.data: dict[str, Any] = {"schema": SCHEMA}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def emit(self) -> None:
        if self.as_json:
            sys.stdout.write(json.dumps(self.data, indent=2) + "\n")
        elif self.lines:
            sys.stdout.write("\n".join(self.lines) + "\n")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise GaussnetError(f"cannot read {path}: {exc.strerror}") from None


def _load_dag(path: str) -> Dag:
    return parse_dag(_read_text(path))


def _load_poly(path: str | None) -> Poly:
    text = _read_text(path if path else "-")
    return parse_poly(" ".join(line.split("#", 1)[0] for line in text.splitlines()))


def _vertex_list(g: Dag, csv: str) -> list[int]:
    if not csv.strip():
        return []
    return [g.index_of(tok.strip()) for tok in csv.split(",")]


def _int_list(csv: str) -> list[int]:
    try:
        return [int(tok) for tok in csv.split(",") if tok.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {csv!r}") from None


def _legend(g: Dag, out: Output) -> None:
    if g.label_map is None:
        return
    pairs = [f"{v}={g.label(v)}" for v in g.vertices]
    out.data["labels"] = {str(v): g.label(v) for v in g.vertices}
    out.line("# vertices renumbered: " + " ".join(pairs))


def _fmt_set(vs) -> str:
    return "{" + ",".join(str(v) for v in sorted(vs)) + "}"


# -- verbs --------------------------------------------------------------------------


def cmd_treks(args, out: Output) -> int:
    g = _load_dag(args.dag)
    i, j = g.index_of(args.i), g.index_of(args.j)
    ts = treks.enumerate_treks(g, i, j)
    _legend(g, out)
    out.data["treks"] = [
        {"top": t.top, "vertices": list(t.vertices()), "monomial": format_poly(t.monomial())} for t in ts
    ]
    for t in ts:
        out.line(f"{t}    {format_poly(t.monomial())}")
    if not ts:
        out.line("no treks")
    return 0


def cmd_param(args, out: Output) -> int:
    g = _load_dag(args.dag)
    _legend(g, out)
    entries = []
    for i in g.vertices:
        for j in range(i, g.n + 1):
            p = treks.trek_rule_sigma(g, i, j)
            entries.append({"i": i, "j": j, "polynomial": format_poly(p)})
            out.line(f"s({i},{j}) = {format_poly(p)}")
    out.data["parametrization"] = entries
    return 0


def _fr(x: Fraction) -> str:
    return str(x)


def _assignment_json(g: Dag, theta: treks.ParameterAssignment) -> dict:
    return {
        "a": {str(v): _fr(theta.a[v]) for v in g.vertices},
        "lambda": {f"{i},{j}": _fr(theta.lam[(i, j)]) for i, j in g.sorted_edges},
        "psi": {str(v): _fr(theta.psi[v]) for v in g.vertices} if theta.psi else {},
    }


def _assignment_lines(g: Dag, theta: treks.ParameterAssignment, out: Output) -> None:
    for i, j in g.sorted_edges:
        out.line(f"l({i},{j}) = {theta.lam[(i, j)]}")
    for v in g.vertices:
        out.line(f"a{v} = {theta.a[v]}")
    if theta.psi:
        for v in g.vertices:
            out.line(f"psi{v} = {theta.psi[v]}")


def cmd_sample(args, out: Output) -> int:
    g = _load_dag(args.dag)
    theta = treks.sample_omega(g, args.seed)
    cov = treks.model_covariance(g, theta)
    _legend(g, out)
    out.data["parameters"] = _assignment_json(g, theta)
    out.data["covariance"] = cov.to_strings()
    _assignment_lines(g, theta, out)
    out.line("covariance:")
    for row in cov.to_strings():
        out.line("  " + " ".join(row))
    return 0


def cmd_identify(args, out: Output) -> int:
    g = _load_dag(args.dag)
    try:
        raw = json.loads(_read_text(args.cov))
    except json.JSONDecodeError as exc:
        raise ParseError(f"covariance file is not JSON: {exc.msg}", exc.lineno) from None
    if isinstance(raw, dict):
        raw = raw.get("covariance")
    if not isinstance(raw, list):
        raise ParseError("expected a matrix or an object with a 'covariance' matrix")
    cov = RationalMatrix.from_strings(raw)
    theta = treks.recover_parameters(g, cov)
    _legend(g, out)
    out.data["parameters"] = _assignment_json(g, theta)
    _assignment_lines(g, theta, out)
    return 0


def cmd_dsep(args, out: Output) -> int:
    g = _load_dag(args.dag)
    A, B, C = (_vertex_list(g, s) for s in (args.A, args.B, args.C))
    result = markov.d_separated(g, A, B, C)
    out.data["d_separated"] = result
    out.line("true" if result else "false")
    return 0


def _stmt_json(s: markov.CiStatement) -> dict:
    return {"A": sorted(s.A), "B": sorted(s.B), "C": sorted(s.C)}


def cmd_ci_ideal(args, out: Output) -> int:
    g = _load_dag(args.dag)
    stmts = markov.enumerate_ci_statements(g, args.amax, args.cmax)
    _legend(g, out)
    rows = []
    for s in stmts:
        polys = [format_poly(p) for p in markov.ci_minor_polynomials(s)]
        rows.append({"statement": _stmt_json(s), "minors": polys})
        out.line(str(s))
        for p in polys:
            out.line(f"  {p}")
    out.data["statements"] = rows
    return 0


def cmd_choke(args, out: Output) -> int:
    g = _load_dag(args.dag)
    I, J = _vertex_list(g, args.I), _vertex_list(g, args.J)
    report = tetrad.choke_points(g, I, J)
    _legend(g, out)
    out.data["points"] = [{"vertex": v, "side": side} for v, side in report.points]
    out.data["trivially_vanishing"] = report.trivially_vanishing
    if report.trivially_vanishing:
        out.line("no treks between the sets")
    elif not report.points:
        out.line("no choke points")
    for v, side in report.points:
        out.line(f"{v} {side}")
    return 0


def _poly_list(key: str, polys: Sequence[Poly], out: Output) -> None:
    out.data[key] = [format_poly(p) for p in polys]
    out.lines.extend(format_poly(p) for p in polys)


def cmd_tetrads(args, out: Output) -> int:
    g = _load_dag(args.dag)
    _legend(g, out)
    _poly_list("tetrads", tetrad.all_vanishing_tetrads(g, skip_trivial=args.skip_trivial), out)
    return 0


def cmd_verify(args, out: Output) -> int:
    g = _load_dag(args.dag)
    p = _load_poly(args.poly)
    ok = tetrad.verify_vanishing(g, p)
    out.data["vanishes"] = ok
    out.line("vanishes" if ok else "does not vanish")
    return 0 if ok else 1


def cmd_tree_gens(args, out: Output) -> int:
    g = _load_dag(args.dag)
    gens = trees.tree_ideal_generators(g)
    _legend(g, out)
    out.data["linear"] = [format_poly(p) for p in gens.linear]
    out.data["quadratic"] = [format_poly(p) for p in gens.quadratic]
    out.line(f"linear ({len(gens.linear)}):")
    out.lines.extend(f"  {format_poly(p)}" for p in gens.linear)
    out.line(f"quadratic ({len(gens.quadratic)}):")
    out.lines.extend(f"  {format_poly(p)}" for p in gens.quadratic)
    return 0


def cmd_facets(args, out: Output) -> int:
    g = _load_dag(args.dag)
    system = trees.polytope_system(g)
    _legend(g, out)
    out.data.update(system.to_json())
    out.lines.extend(system.lines())
    return 0


def cmd_tree_degree(args, out: Output) -> int:
    g = _load_dag(args.dag)
    d = trees.tree_degree(g)
    out.data["degree"] = d
    out.line(str(d))
    return 0


def cmd_polytope_oracle(args, out: Output) -> int:
    g = _load_dag(args.dag)
    res = polytope.polytope_vertex_oracle(g, args.max_n)
    names = trees.coordinate_names(g)
    _legend(g, out)
    out.data["coordinates"] = names
    out.data["vertices"] = [[str(c) for c in v] for v in res.vertices]
    out.data["normalized_volume"] = res.normalized_volume
    out.line("coordinates: " + " ".join(names))
    for v in res.vertices:
        out.line(" ".join(str(c) for c in v))
    vol = "undefined (non-lattice vertex)" if res.normalized_volume is None else res.normalized_volume
    out.line(f"normalized volume: {vol}")
    return 0


def cmd_grade(args, out: Output) -> int:
    g = _load_dag(args.dag)
    grading = hidden.UpstreamGrading.for_graph(g, _vertex_list(g, args.hidden))
    p = _load_poly(args.poly)
    d = hidden.upstream_degree(grading, p)
    if isinstance(d, hidden.NonHomogeneous):
        out.data["homogeneous"] = False
        out.data["detail"] = d.describe()
        out.line(d.describe())
    else:
        out.data["homogeneous"] = True
        out.data["degree"] = list(d)
        out.line(f"({d[0]},{d[1]})")
    return 0


def cmd_hidden_tree_gens(args, out: Output) -> int:
    g = _load_dag(args.dag)
    _legend(g, out)
    _poly_list("tetrads", hidden.hidden_tree_generators(g), out)
    return 0


def cmd_schubert(args, out: Output) -> int:
    w = hidden.parse_w(args.w, args.n)
    sg = hidden.build_schubert_graph(w)
    gens = hidden.schubert_generators(w)
    g = sg.dag
    legend = " ".join(f"{v}={g.label(v)}" for v in g.vertices)
    out.data["labels"] = {str(v): g.label(v) for v in g.vertices}
    out.data["hidden"] = sorted(sg.partition.hidden)
    out.data["generators"] = [format_poly(p) for p in gens]
    out.line(f"# w = {w} (n = {w.n}); vertices: {legend}")
    out.lines.extend(format_poly(p) for p in gens)
    return 0


def cmd_classical(args, out: Output) -> int:
    model = hidden.construct_classical_graph(args.kind, args.p, args.m)
    g = model.dag
    out.data["kind"] = model.kind
    out.data["n"] = g.n
    out.data["edges"] = [list(e) for e in g.sorted_edges]
    out.data["labels"] = {str(v): g.label(v) for v in g.vertices}
    out.data["hidden"] = sorted(model.partition.hidden)
    out.data["observed"] = list(model.observed)
    out.line(f"# {model.kind}: hidden {_fmt_set(model.partition.hidden)}, "
             f"observed variables 1..{len(model.observed)} are vertices {','.join(map(str, model.observed))}")
    out.line(f"# labels: " + " ".join(f"{v}={g.label(v)}" for v in g.vertices))
    out.lines.extend(str(g).rstrip("\n").splitlines())
    if args.poly is not None:
        p = model.to_internal(_load_poly(args.poly))
        ok = tetrad.verify_vanishing(g, p)
        out.data["vanishes"] = ok
        out.line("vanishes" if ok else "does not vanish")
        return 0 if ok else 1
    return 0


# -- parser ----------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    ap = argparse.ArgumentParser(prog="gaussnet", description="Exact algebra of Gaussian Bayesian networks.")
    sub = ap.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name: str, fn: Callable, help_: str, dag: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        if dag:
            p.add_argument("dag", help="DAG file ('-' for stdin)")
        p.set_defaults(fn=fn)
        return p

    p = verb("treks", cmd_treks, "list the treks between two vertices")
    p.add_argument("i")
    p.add_argument("j")
    verb("param", cmd_param, "trek-rule image of every covariance entry")
    p = verb("sample", cmd_sample, "draw admissible parameters and their covariance matrix")
    p.add_argument("--seed", type=int, required=True)
    p = verb("identify", cmd_identify, "recover parameters from a covariance matrix")
    p.add_argument("cov", help="JSON file: a matrix or {\"covariance\": matrix}")
    p = verb("dsep", cmd_dsep, "d-separation test")
    p.add_argument("A", help="comma-separated vertices")
    p.add_argument("B", help="comma-separated vertices")
    p.add_argument("C", nargs="?", default="", help="comma-separated conditioning set")
    p = verb("ci-ideal", cmd_ci_ideal, "d-separation statements and their minors")
    p.add_argument("--amax", type=int, default=2)
    p.add_argument("--cmax", type=int, default=3)
    p = verb("choke", cmd_choke, "choke points between two vertex sets")
    p.add_argument("I")
    p.add_argument("J")
    p = verb("tetrads", cmd_tetrads, "vanishing tetrads over all quadruples")
    p.add_argument("--skip-trivial", action="store_true",
                   help="drop tetrads containing an identically zero entry")
    p = verb("verify", cmd_verify, "exit 0 iff the polynomial vanishes on the model")
    p.add_argument("--poly", help="polynomial file (default: stdin)")
    verb("tree-gens", cmd_tree_gens, "linear and quadratic generators of a tree ideal")
    verb("facets", cmd_facets, "inequality description of the tree polytope")
    verb("tree-degree", cmd_tree_degree, "degree of a downward directed forest")
    p = verb("polytope-oracle", cmd_polytope_oracle, "brute-force vertices and volume of the tree polytope")
    p.add_argument("--max-n", type=int, default=5)
    p = verb("grade", cmd_grade, "upstream bidegree of a polynomial")
    p.add_argument("--hidden", required=True, help="comma-separated hidden vertices")
    p.add_argument("--poly", help="polynomial file (default: stdin)")
    verb("hidden-tree-gens", cmd_hidden_tree_gens, "tetrads among the leaves of a rooted tree")
    p = verb("schubert", cmd_schubert, "constraints of the matrix Schubert graph G(w)", dag=False)
    p.add_argument("--w", required=True, help='positions of the ones, e.g. "(1,1),(2,2)"')
    p.add_argument("--n", type=int, default=None, help="matrix size (default: largest index)")
    p = verb("classical", cmd_classical, "factor analysis and doubled-tree graphs", dag=False)
    p.add_argument("--kind", required=True, choices=hidden.CLASSICAL_KINDS)
    p.add_argument("--p", type=int, default=None, help="hidden factors (factor_analysis)")
    p.add_argument("--m", type=int, default=None, help="observed variables (factor_analysis)")
    p.add_argument("--poly", default=None,
                   help="verify a polynomial in observed variables 1..m; exit 0 iff it vanishes")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    out = Output(args.json)
    try:
        status = args.fn(args, out)
    except GaussnetError as exc:
        sys.stderr.write(f"gaussnet: error: {exc}\n")
        return 1
    out.data = {"schema": SCHEMA, "command": args.verb, **{k: v for k, v in out.data.items() if k != "schema"}}
    out.emit()
    return status


if __name__ == "__main__":
    sys.exit(main())
