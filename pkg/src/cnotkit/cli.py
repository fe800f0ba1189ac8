"""Command-line driver: ``cnotkit optimize|stats|route|classify|synth|state|reach``.

Exit codes are 0 on success, 1 for usage errors, 2 for unparsable input,
3 when routing is infeasible and 4 when a result fails its self-check.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import click

from . import exact
from .circuit import (
    Circuit,
    CircuitParseError,
    NonCnotGateError,
    circuit_of,
    matrix_of,
    parse_circuit,
    peephole_reduce,
    write_circuit,
)
from .gf2core import BitMatrix, SingularMatrixError, TransvectionSeq, permutation_of_matrix
from .router import RoutingError, bundled_graph, collapse_h_wraps, load_graph, route_circuit
from .structural import (
    DispatchOptions,
    SelfCheckError,
    block_optimize,
    circuit_graph,
    components,
    detect_bit_reversed,
    dispatch_optimize,
    dispatch_with_method,
    gauss_canonical,
    gauss_utd,
    ibar_decompose,
    lu_triangular_decompose,
    permutation_decompose,
    sigmabar_decompose,
)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_SELF_CHECK = 0, 1, 2, 3, 4
METHODS = ("auto", "exact", "gauss", "utd", "peephole", "structural")
BUNDLED_GRAPHS = ("melbourne", "rome")


@dataclass
class RunReport:
    command: str
    input_count: int
    output_count: int
    method: str
    seconds: float
    verified: bool
    extra: dict = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = [f"{k}: {v}" for k, v in asdict(self).items() if k != "extra"]
        return out + [f"{k}: {v}" for k, v in self.extra.items()]


def _command_echo() -> str:
    ctx = click.get_current_context()
    obj = ctx.find_object(dict) or {}
    if "argv" in obj:
        return " ".join(["cnotkit", *obj["argv"]])
    return f"cnotkit {ctx.info_name}"


def _read_circuit(path: str) -> Circuit:
    return parse_circuit(Path(path).read_text())


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


def _emit_report(report: RunReport, circuit: Circuit, output: str | None, as_json: bool) -> None:
    if as_json:
        if output:
            Path(output).write_text(write_circuit(circuit))
        payload = asdict(report)
        payload["circuit"] = write_circuit(circuit)
        click.echo(json.dumps(payload, indent=2))
        return
    # comment lines keep stdout a valid circuit file
    body = "\n".join("# " + line for line in report.lines()) + "\n"
    if output:
        Path(output).write_text(write_circuit(circuit))
        click.echo(body, nl=False)
    else:
        click.echo(body + write_circuit(circuit), nl=False)


def _verify(seq: TransvectionSeq, M: BitMatrix, what: str) -> Circuit:
    out = circuit_of(seq)
    if matrix_of(out) != M:
        raise SelfCheckError(f"{what}: output circuit does not implement the input matrix")
    if parse_circuit(write_circuit(out)) != out:
        raise SelfCheckError(f"{what}: output does not survive a write/parse round trip")
    return out


def _structural(M: BitMatrix, opts: DispatchOptions) -> tuple[TransvectionSeq, str]:
    found: dict[str, TransvectionSeq] = {}
    perm = permutation_of_matrix(M)
    if perm is not None:
        found["permutation"] = permutation_decompose(perm)
    rev = detect_bit_reversed(M)
    if rev is not None:
        found["bit-reversed"] = ibar_decompose(M.n) if rev.is_identity() else sigmabar_decompose(rev)
    if len(components(circuit_graph(M))) > 1:
        found["block"] = block_optimize(M, lambda A: dispatch_optimize(A, opts) if A.n > 1 else TransvectionSeq(1))
    if not found:
        return gauss_canonical(M), "gauss"
    name = min(found, key=lambda k: len(found[k]))
    return found[name], name


def _utd(M: BitMatrix) -> tuple[TransvectionSeq, str]:
    best, name = gauss_utd(M), "utd"
    lu = lu_triangular_decompose(M)
    if lu is not None and len(lu) <= len(best):
        best, name = lu, "lu"
    return best, name


def optimize_circuit(c: Circuit, method: str = "auto", max_exact: int = exact.MAX_N) -> tuple[Circuit, str]:
    """Equivalent circuit with no more CNOTs than ``c`` and the method that produced it."""
    M = matrix_of(c)
    if M.is_identity():
        return Circuit(c.n), "trivial"
    opts = DispatchOptions(max_exact=max_exact)
    if method == "auto":
        seq, name = dispatch_with_method(M, opts)
    elif method == "exact":
        if not exact.MIN_N <= c.n <= min(max_exact, exact.MAX_N):
            raise click.UsageError(
                f"exact search covers {exact.MIN_N} <= n <= {min(max_exact, exact.MAX_N)}, circuit has {c.n} qubits")
        seq, name = exact.optimal_decompose(exact.build_table(c.n), M), "exact"
    elif method == "gauss":
        seq, name = gauss_canonical(M), "gauss"
    elif method == "utd":
        seq, name = _utd(M)
    elif method == "peephole":
        seq, name = peephole_reduce(c).transvections(), "peephole"
    elif method == "structural":
        seq, name = _structural(M, opts)
    else:
        raise click.UsageError(f"unknown method {method!r}")
    out = _verify(seq, M, name)
    if len(out) > len(c):
        return c, f"input ({name} was longer)"
    return out, name


def _json_option(f: Callable) -> Callable:
    return click.option("--json", "as_json", is_flag=True, help="Print a JSON report.")(f)


def _output_option(f: Callable) -> Callable:
    return click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write the circuit here.")(f)


@click.group()
def cli() -> None:
    """Optimize, route and classify CNOT-based circuits."""


@cli.command()
@click.option("--input", "-i", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(METHODS), default="auto", show_default=True)
@click.option("--max-exact", type=click.IntRange(0, exact.MAX_N), default=exact.MAX_N, show_default=True,
              help="Largest width solved by exhaustive search.")
@_output_option
@_json_option
def optimize(input_path: str, method: str, max_exact: int, output: str | None, as_json: bool) -> None:
    """Rewrite a CNOT circuit with fewer gates."""
    start = time.perf_counter()
    c = _read_circuit(input_path)
    if not c.is_cnot_only():
        raise NonCnotGateError("optimize accepts CNOT-only circuits")
    out, name = optimize_circuit(c, method, max_exact)
    report = RunReport(_command_echo(), len(c), len(out), name, round(time.perf_counter() - start, 6), True)
    _emit_report(report, out, output, as_json)


@cli.command()
@click.option("--qubits", "-n", type=int, required=True)
@_json_option
def stats(qubits: int, as_json: bool) -> None:
    """Histogram of optimal lengths over all invertible n x n matrices."""
    if not exact.MIN_N <= qubits <= exact.MAX_N:
        raise click.UsageError(f"--qubits must lie in [{exact.MIN_N}, {exact.MAX_N}]")
    start = time.perf_counter()
    table = exact.build_table(qubits)
    hist = exact.length_histogram(table)
    conj = exact.check_conjecture(table)
    payload = {
        "qubits": qubits,
        "histogram": hist,
        "total": sum(hist.values()),
        "max_length": conj.max_length,
        "maximizers": conj.maximizers,
        "maximizers_are_full_cycles": conj.all_full_cycles,
        "conjecture_holds": conj.holds,
        "seconds": round(time.perf_counter() - start, 3),
    }
    if as_json:
        click.echo(json.dumps(payload, indent=2))
        return
    click.echo("length  count")
    for length, count in hist.items():
        click.echo(f"{length:6d}  {count}")
    click.echo(f"total: {payload['total']}")
    click.echo(f"max length {conj.max_length} (expected {conj.expected_max}), "
               f"{conj.maximizers} maximizers (expected {conj.expected_maximizers}), "
               f"all n-cycles: {conj.all_full_cycles}")
    click.echo(f"conjecture: {'holds' if conj.holds else 'fails'}")


def _graph(spec: str):
    if spec in BUNDLED_GRAPHS:
        return bundled_graph(spec)
    path = Path(spec)
    if not path.exists() and path.suffix == ".json" and path.stem in BUNDLED_GRAPHS:
        return bundled_graph(path.stem)
    if not path.exists():
        raise click.UsageError(f"no graph named {spec!r} and no such file")
    return load_graph(path)


def _widen(c: Circuit, n: int) -> Circuit:
    return Circuit(n, c.gates)


@cli.command()
@click.option("--input", "-i", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--graph", "-g", "graph_spec", default="melbourne", show_default=True,
              help="Bundled graph name or a graph JSON file.")
@click.option("--weighted", is_flag=True, help="Rank paths by error rates instead of length.")
@click.option("--then-optimize", is_flag=True, help="Optimize the logical circuit before routing it.")
@_output_option
@_json_option
def route(input_path: str, graph_spec: str, weighted: bool, then_optimize: bool, output: str | None,
          as_json: bool) -> None:
    """Map a CNOT circuit onto a coupling graph."""
    start = time.perf_counter()
    c = _read_circuit(input_path)
    if not c.is_cnot_only():
        raise NonCnotGateError("route accepts CNOT-only circuits")
    g = _graph(graph_spec)
    logical, method = c, "none"
    if then_optimize:
        logical, method = optimize_circuit(c)
    routed, rep = route_circuit(g, logical, weighted)
    wide = _widen(c, g.n)
    collapsed = collapse_h_wraps(routed)
    if not collapsed.is_cnot_only() or matrix_of(collapsed) != matrix_of(wide):
        raise SelfCheckError("routed circuit does not implement the input")
    report = RunReport(_command_echo(), len(c), len(routed), method, round(time.perf_counter() - start, 6), True, {
        "graph": g.name,
        "weighted": weighted,
        "cnot_count": rep.cnot_count,
        "h_count": rep.h_count,
        "success_probability": rep.success_probability,
        "error_sum": rep.error_sum,
        "paths": rep.paths,
    })
    _emit_report(report, routed, output, as_json)


def _state_report(state, tower: bool) -> dict:
    from .entangle.covariants import cov3, cov4, w3_verdict

    if state.n == 3:
        rep = cov3(state)
        out = rep.to_dict()
        out["verdict"] = w3_verdict(rep)
        return out
    if state.n == 4:
        return cov4(state, tower=tower).to_dict()
    raise click.UsageError(f"classification covers 3 and 4 qubits, got {state.n}")


def _echo_mapping(d: dict) -> None:
    for k, v in d.items():
        click.echo(f"{k}: {v}")


@cli.command()
@click.option("--qubits", "-n", type=click.Choice(["3", "4"]), required=True)
@click.option("--circuit", "circuit_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--tower", is_flag=True, help="Also evaluate the 4-qubit null-cone covariants.")
@_json_option
def classify(qubits: str, circuit_path: str, tower: bool, as_json: bool) -> None:
    """Run a {CNOT, H, S, T} circuit on |0...0> and classify the resulting state."""
    from .entangle.states import run_circuit

    c = _read_circuit(circuit_path)
    if c.n != int(qubits):
        raise click.UsageError(f"circuit has {c.n} qubits, --qubits says {qubits}")
    payload = {"circuit": circuit_path, **_state_report(run_circuit(c), tower)}
    click.echo(json.dumps(payload, indent=2)) if as_json else _echo_mapping(payload)


@cli.command()
@click.option("--name", required=True, help="GHZ:n, W:n, BL, L, HD or M2222.")
@click.option("--tower", is_flag=True, help="Also evaluate the 4-qubit null-cone covariants.")
@_json_option
def state(name: str, tower: bool, as_json: bool) -> None:
    """Classify a named state."""
    from .entangle.states import named_state

    try:
        st = named_state(name)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    payload = {"state": name, **_state_report(st, tower)}
    click.echo(json.dumps(payload, indent=2)) if as_json else _echo_mapping(payload)


@cli.group()
def synth() -> None:
    """Emit state-preparation circuits."""


@synth.command("ghz")
@click.option("--qubits", "-n", type=click.IntRange(2, None), required=True)
@_output_option
def synth_ghz(qubits: int, output: str | None) -> None:
    """H on qubit 0 followed by a CNOT ladder."""
    from .entangle.states import ghz_circuit

    _emit(write_circuit(ghz_circuit(qubits)), output)


@synth.command("w3")
@click.option("--triple", default="021", show_default=True, help="Permutation ijk of 012.")
@_output_option
def synth_w3(triple: str, output: str | None) -> None:
    """Phase preparation then the CNOT triple X_[ijk]; the result is W-class for most triples."""
    from .entangle.states import w3_circuit

    if len(triple) != 3:
        raise click.UsageError("--triple takes three digits")
    try:
        c = w3_circuit(triple)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    _emit(write_circuit(c), output)


@cli.command()
@click.option("--trials", type=click.IntRange(1, None), default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_json_option
def reach(trials: int, seed: int, as_json: bool) -> None:
    """Apply all 4-qubit CNOT circuits to random product states and look for W-orbit images."""
    from .entangle.reachability import sampled_reachability_check

    rep = sampled_reachability_check(trials, seed)
    payload = {"seed": seed, **rep.to_dict(), "passed": rep.passed}
    click.echo(json.dumps(payload, indent=2)) if as_json else _echo_mapping(payload)


_ERRORS: tuple[tuple[type[BaseException], int], ...] = (
    (CircuitParseError, EXIT_PARSE),
    (NonCnotGateError, EXIT_PARSE),
    (RoutingError, EXIT_INFEASIBLE),
    (SelfCheckError, EXIT_SELF_CHECK),
    (SingularMatrixError, EXIT_SELF_CHECK),
)


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit code instead of raising."""
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        cli.main(args, prog_name="cnotkit", standalone_mode=False, obj={"argv": args})
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except Exception as exc:
        for kind, code in _ERRORS:
            if isinstance(exc, kind):
                click.echo(f"error: {exc}", err=True)
                return code
        raise
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
