import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densig.cli import parser as ast
from densig.cli.main import main
from densig.cli.parser import parse_state_spec
from densig.cli.runner import render_report, run
from densig.errors import DimsError, NumericalError, ParseError, StateError, UndefinedNameError, WeightError


def report_for(src: str, **kw) -> str:
    return render_report(run(parse_state_spec(src), **kw))


# --- parsing ----------------------------------------------------------------


def test_parse_minimal_program():
    prog = parse_state_spec("dims 2 2\nrho R = classical_corr\nanalyze R")
    assert [type(s) for s in prog.statements] == [ast.DimsStmt, ast.RhoDef, ast.Analyze]


def test_parse_bell_ket_program():
    prog = parse_state_spec("ket k = (0.7071+0i)|0,0> + (0.7071+0i)|1,1>\nrho R = proj(k)\nanalyze R")
    ket = prog.statements[0]
    assert ket.terms == ((0.7071 + 0j, (0, 0)), (0.7071 + 0j, (1, 1)))
    assert ket.dims == (2, 2)
    assert "rank=4" in render_report(run(prog))


def test_undefined_name_points_at_reference():
    src = "rho R = mix 0.5 kron(A,B)"
    with pytest.raises(UndefinedNameError) as err:
        parse_state_spec(src)
    assert err.value.line == 1
    assert src[err.value.col - 1] == "A"


@pytest.mark.parametrize(
    "src,cls,bad",
    [
        ("dims 2 x", ParseError, "x"),
        ("rho R = proj(k)", UndefinedNameError, "k"),
        ("analyze Q", UndefinedNameError, "Q"),
        ("rho R = classical_corr\nrho R = bell", ParseError, "R"),
        ("ket k = 1|0,2>", DimsError, "2"),
        ("ket k = 1|0,1,1>", DimsError, "1"),
        ("rho R = tripartite(0.5, 0.5).AD", ParseError, "AD"),
        ("rho R = matrix [1, 0; 0]", DimsError, "["),
        ("frobnicate R", ParseError, "frobnicate"),
        ("rho R = classical_corr extra", ParseError, "extra"),
        ("rho R = bell\nteleport R with 0.6 $", ParseError, "$"),
        ("ket k = 1|0>\nanalyze k", ParseError, "k"),
        ("ket k = 1|0>\nrho P = proj(k)\nanalyze P", DimsError, "P"),
        ("dims 3 3\nrho R = matrix [1,0,0;0,0,0;0,0,0]\nrho S = kron(R, R)\nteleport S with 1 0", DimsError, "S"),
        ("rho mix = bell", ParseError, "mix"),
    ],
)
def test_parse_errors_locate_token(src, cls, bad):
    with pytest.raises(cls) as err:
        parse_state_spec(src)
    e = err.value
    line = src.splitlines()[e.line - 1]
    assert line[e.col - 1 : e.col - 1 + len(bad)] == bad


def test_comments_and_blank_lines():
    prog = parse_state_spec("# header\n\n  dims 2 2   # trailing\nrho R = bell\n")
    assert len(prog.statements) == 2
    assert prog.statements[1].line == 4


def test_complex_literals():
    prog = parse_state_spec("compare (0.6-0.8i) (-1e-3+2.5e0i)")
    c = prog.statements[0]
    assert c.c1 == 0.6 - 0.8j and c.c2 == -1e-3 + 2.5j


def test_matrix_literal_dims():
    prog = parse_state_spec("rho A = matrix [0.5, 0; 0, 0.5]\nrho B = matrix [0.25,0,0,0;0,0.25,0,0;0,0,0.25,0;0,0,0,0.25]")
    assert prog.statements[0].dims == (2,)
    assert prog.statements[1].dims == (2, 2)


# --- canonical round trip ---------------------------------------------------

FULL = """\
dims 2 2
ket k = (0.6+0i)|0> + (0-0.8i)|1>
ket b = 0.5|0,0> + (0.5+0.5i)|1,1> + 0.5|0,1>
rho P = proj(k)
rho Q = matrix [0.5, (0.1+0.2i); (0.1-0.2i), 0.5]
rho K = kron(P, Q)
rho M = mix 0.25 K 0.5 classical_corr 0.25 proj(b)
rho T = tripartite(0.25, 0.75).AC
analyze M
teleport T with (0.6+0i) (0+0.8i)
compare 0.6 0.8
"""


def _state_mats(prog):
    from densig.cli.runner import _Env

    env = _Env()
    mats = {}
    for s in prog.statements:
        if isinstance(s, ast.KetDef):
            env.kets[s.name] = env.ket(s)
        elif isinstance(s, ast.RhoDef):
            env.rhos[s.name] = env.eval(s.expr, (2, 2))
            mats[s.name] = env.rhos[s.name].mat
    return mats


def test_round_trip_full_program():
    prog = parse_state_spec(FULL)
    again = parse_state_spec(prog.source())
    assert again.source() == prog.source()
    m1, m2 = _state_mats(prog), _state_mats(again)
    assert m1.keys() == m2.keys()
    for k in m1:
        np.testing.assert_allclose(m1[k], m2[k], atol=1e-12)


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False), st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=6))
def test_round_trip_kets(terms):
    body = " + ".join(f"{ast.format_complex(a)}|{i},{j}>" for a, i, j in terms)
    prog = parse_state_spec(f"ket k = {body}")
    parsed = prog.statements[0].terms
    assert [a for a, _ in parsed] == [complex(a) for a, _, _ in terms]
    assert parse_state_spec(prog.source()) == prog


# --- run / render -----------------------------------------------------------


def test_run_classical_corr():
    text = report_for("dims 2 2\nrho R = classical_corr\nanalyze R")
    assert "eigenvalues: 0.250000 0.250000 0.000000 0.000000" in text
    assert "product: no (rank=2, purity=0.500000)" in text


def test_run_kron_is_product():
    text = report_for("ket a = 1|0> + (0+1i)|1>\nrho A = proj(a)\nrho B = matrix [0.7, 0.1; 0.1, 0.3]\nrho R = kron(A, B)\nanalyze R")
    assert "product: yes (rank=1," in text
    assert "product_test: yes" in text


def test_run_teleport_classical():
    text = report_for("rho R = classical_corr\nteleport R with 0.6 0.8")
    rows = [l for l in text.splitlines() if l.strip().startswith("outcome")]
    assert len(rows) == 4 and all("p=0.250000" in r for r in rows)
    assert "0.360000+0.000000i  0.000000+0.000000i" in text
    assert "0.000000+0.000000i  0.360000+0.000000i" in text


def test_render_bell_verdict_line():
    assert "product: no (rank=4, purity=1.000000)" in report_for("rho R = bell\nanalyze R")


def test_render_empty_program():
    assert report_for("") == "== validation ==\n(no states defined)\n"


def test_render_states_only():
    text = report_for("rho R = bell")
    assert text == "== validation ==\nrho R: dims 2x2, trace 1.000000, purity 1.000000, ok\n"


def test_render_comparison_line():
    assert "coherence classical=0.000000 bell=0.960000" in report_for("compare 0.6 0.8")


def test_rank_tol_override():
    text = report_for("rho R = classical_corr\nanalyze R", rank_tol=1.5)
    assert "rank=0" in text


def test_runtime_errors_carry_line():
    with pytest.raises(WeightError) as err:
        run(parse_state_spec("dims 2 2\nrho R = mix 0.3 classical_corr 0.8 bell"))
    assert err.value.line == 2
    with pytest.raises(StateError) as err:
        run(parse_state_spec("\nrho R = matrix [0.5, 0; 0, 0.6]"))
    assert err.value.line == 2


def test_ket_normalized_on_definition():
    prog = parse_state_spec("ket k = 3|0> + 4|1>\nrho R = proj(k)")
    text = render_report(run(prog))
    assert "ket k: dims 2, norm 1.000000, ok" in text


def test_zero_ket_is_invalid():
    with pytest.raises(StateError):
        run(parse_state_spec("ket k = 0|0>"))


# --- command line -----------------------------------------------------------


def test_main_demos(capsys):
    for name, needle in (("eq4", "rank=2"), ("eq7", "rank=4"), ("ghz", "rank=2")):
        assert main(["demo", name]) == 0
        assert needle in capsys.readouterr().out


def test_main_exit_codes(tmp_path, capsys):
    cases = {
        "parse": ("rho R = (", 1),
        "name": ("analyze X", 1),
        "weights": ("rho R = mix 0.3 bell 0.8 bell", 2),
        "state": ("rho R = matrix [2, 0; 0, -1]", 2),
        "ok": ("rho R = bell\nanalyze R", 0),
    }
    for name, (src, code) in cases.items():
        f = tmp_path / f"{name}.dsl"
        f.write_text(src, encoding="utf-8")
        assert main(["analyze", str(f)]) == code, name
    err = capsys.readouterr().err
    assert "line 1" in err


def test_main_missing_file(tmp_path):
    assert main(["analyze", str(tmp_path / "nope.dsl")]) == 1


def test_main_numeric_failure_code(monkeypatch, tmp_path):
    from densig.cli import main as cli_main

    def boom(*a, **k):
        raise NumericalError("solver failed")

    monkeypatch.setattr(cli_main, "run", boom)
    f = tmp_path / "x.dsl"
    f.write_text("rho R = bell\n", encoding="utf-8")
    assert cli_main.main(["analyze", str(f)]) == 3


def test_main_rank_tol_flag(capsys):
    assert main(["--rank-tol", "1.5", "demo", "eq4"]) == 0
    assert "rank=0" in capsys.readouterr().out
    assert main(["--rank-tol", "-1", "demo", "eq4"]) == 2


def test_console_script_determinism():
    runs = [
        subprocess.run([sys.executable, "-m", "densig.cli.main", "demo", "eq7"], capture_output=True, check=True).stdout
        for _ in range(2)
    ]
    assert runs[0] == runs[1] and runs[0]
