"""Execute a parsed program and render its report."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from densig import entanglement_signature as es
from densig import quantum_states as qs
from densig import tensor_core as tc
from densig import teleportation_sim as tp
from densig.cli import parser as ast
from densig.errors import DensigError, StateError


@dataclass(frozen=True, eq=False)
class StateSummary:
    name: str
    kind: str  # "ket" | "rho"
    dims: tuple
    norm_or_trace: float
    purity: float | None = None


@dataclass(frozen=True, eq=False)
class AnalysisResult:
    line: int
    name: str
    blocks: es.ExpansionBlocks
    x: es.XMatrix
    signature: es.Signature
    product_test: tuple


@dataclass(frozen=True, eq=False)
class TeleportResult:
    line: int
    name: str
    c1: complex
    c2: complex
    outcomes: list


@dataclass(frozen=True, eq=False)
class ComparisonResult:
    line: int
    comparison: tp.ChannelComparison


@dataclass(eq=False)
class Report:
    validation: list = field(default_factory=list)
    actions: list = field(default_factory=list)


class _Env:
    def __init__(self):
        self.kets: dict[str, qs.PureState] = {}
        self.rhos: dict[str, qs.DensityMatrix] = {}

    def ket(self, s: ast.KetDef) -> qs.PureState:
        amps = np.zeros(int(np.prod(s.dims)), dtype=np.complex128)
        for amp, labels in s.terms:
            amps[np.ravel_multi_index(labels, s.dims)] += amp
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise StateError(f"ket {s.name!r} is the zero vector")
        return qs.PureState(s.dims, amps / norm)

    def eval(self, e, full_dims) -> qs.DensityMatrix:
        if isinstance(e, ast.Ref):
            return self.rhos[e.name]
        if isinstance(e, ast.Proj):
            return qs.density_from_pure(self.kets[e.ket])
        if isinstance(e, ast.Kron):
            return qs.product_state(self.eval(e.left, full_dims), self.eval(e.right, full_dims))
        if isinstance(e, ast.Mix):
            weights = [w for w, _ in e.terms]
            return qs.mixture(weights, [self.eval(x, full_dims) for _, x in e.terms])
        if isinstance(e, ast.MatrixLit):
            mat = np.array(e.rows, dtype=np.complex128)
            k = mat.shape[0]
            dims = full_dims if k == full_dims[0] * full_dims[1] else (k,)
            if len(dims) == 2:
                return qs.BipartiteDensityMatrix(dims, mat)
            return qs.DensityMatrix(dims, mat)
        if isinstance(e, ast.Builtin):
            if e.name == "classical_corr":
                return qs.classical_corr_channel()
            return qs.density_from_pure(qs.bell_channel())
        if isinstance(e, ast.Tripartite):
            n, m = full_dims
            psi = qs.tripartite_pure(e.weights, (n, m, m))
            return qs.reduce_tripartite(psi, e.keep)
        raise TypeError(f"unknown expression {e!r}")


def run(program: ast.StateProgram, rank_tol: float = tc.RANK_TOL) -> Report:
    """Execute statements in order; errors are tagged with the statement's line."""
    env = _Env()
    report = Report()
    dims = (2, 2)
    for s in program.statements:
        try:
            if isinstance(s, ast.DimsStmt):
                dims = (s.n, s.m)
            elif isinstance(s, ast.KetDef):
                psi = env.ket(s)
                env.kets[s.name] = psi
                report.validation.append(StateSummary(s.name, "ket", psi.dims, float(np.linalg.norm(psi.amplitudes))))
            elif isinstance(s, ast.RhoDef):
                rho = env.eval(s.expr, dims)
                env.rhos[s.name] = rho
                tr = float(np.trace(rho.mat).real)
                report.validation.append(StateSummary(s.name, "rho", rho.dims, tr, rho.purity()))
            elif isinstance(s, ast.Analyze):
                rho = qs.as_bipartite(env.rhos[s.name])
                blocks = es.expand(rho)
                report.actions.append(
                    AnalysisResult(
                        s.line,
                        s.name,
                        blocks,
                        es.x_matrix(blocks),
                        es.signature(rho, rel_tol=rank_tol),
                        es.product_test(rho),
                    )
                )
            elif isinstance(s, ast.Teleport):
                outcomes = tp.teleport(env.rhos[s.name], (s.c1, s.c2))
                report.actions.append(TeleportResult(s.line, s.name, s.c1, s.c2, outcomes))
            elif isinstance(s, ast.Compare):
                report.actions.append(ComparisonResult(s.line, tp.channel_comparison((s.c1, s.c2))))
        except DensigError as exc:
            raise exc.at(s.line)
    return report


# --- rendering --------------------------------------------------------------


def _clean(x: float) -> float:
    return 0.0 if abs(x) < 5e-7 else float(x)


def fmt_real(x: float) -> str:
    return "%.6f" % _clean(x)


def fmt_entry(z: complex) -> str:
    return "%.6f%+.6fi" % (_clean(z.real), _clean(z.imag))


def _matrix_lines(mat, indent: str = "    ") -> list[str]:
    return [indent + "  ".join(fmt_entry(z) for z in row) for row in np.asarray(mat)]


def _dims(d: tuple) -> str:
    return "x".join(str(k) for k in d)


def _render_analysis(r: AnalysisResult) -> list[str]:
    sig = r.signature
    n = r.blocks.n
    out = [f"== analyze {r.name} (line {r.line}) ==", f"blocks (A basis: {sig.basis_label}, n={n}, m={r.blocks.m})"]
    for i in range(n):
        for ip in range(n):
            out.append(f"  block[{i},{ip}]:")
            out.extend(_matrix_lines(r.blocks.block(i, ip)))
    out.append(f"X matrix ({n * n}x{n * n}, index i*n+i'):")
    out.extend(_matrix_lines(r.x.mat))
    out.append("eigenvalues: " + " ".join(fmt_real(v) for v in sig.eigenvalues))
    out.append(f"product: {'yes' if sig.is_product else 'no'} (rank={sig.rank}, purity={fmt_real(sig.purity)})")
    is_prod, dev = r.product_test
    out.append(f"product_test: {'yes' if is_prod else 'no'} (deviation={fmt_real(dev)})")
    return out


def _outcome_lines(outcomes) -> list[str]:
    out = []
    for o in outcomes:
        if o.post_state_b is None:
            out.append(f"  outcome {o.outcome_index}: p={fmt_real(o.probability)} (no post state)")
            continue
        coh = tp.coherence_info(o.post_state_b)
        out.append(f"  outcome {o.outcome_index}: p={fmt_real(o.probability)} coherence={fmt_real(coh)}")
        out.extend(_matrix_lines(o.post_state_b.mat))
    return out


def _render_teleport(r: TeleportResult) -> list[str]:
    head = f"== teleport {r.name} with {fmt_entry(r.c1)} {fmt_entry(r.c2)} (line {r.line}) =="
    return [head] + _outcome_lines(r.outcomes)


def _render_comparison(r: ComparisonResult) -> list[str]:
    c = r.comparison
    out = [f"== compare {fmt_entry(c.input.c1)} {fmt_entry(c.input.c2)} (line {r.line}) =="]
    out.append("classical_corr channel:")
    out.extend(_outcome_lines(c.classical))
    out.append("bell channel:")
    out.extend(_outcome_lines(c.bell))
    out.append(f"coherence classical={fmt_real(c.classical_coherence)} bell={fmt_real(c.bell_coherence)}")
    return out


def render_report(report: Report) -> str:
    lines = ["== validation =="]
    if not report.validation:
        lines.append("(no states defined)")
    for s in report.validation:
        if s.kind == "ket":
            lines.append(f"ket {s.name}: dims {_dims(s.dims)}, norm {fmt_real(s.norm_or_trace)}, ok")
        else:
            lines.append(
                f"rho {s.name}: dims {_dims(s.dims)}, trace {fmt_real(s.norm_or_trace)}, "
                f"purity {fmt_real(s.purity)}, ok"
            )
    for a in report.actions:
        lines.append("")
        if isinstance(a, AnalysisResult):
            lines.extend(_render_analysis(a))
        elif isinstance(a, TeleportResult):
            lines.extend(_render_teleport(a))
        else:
            lines.extend(_render_comparison(a))
    return "\n".join(lines) + "\n"
