import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import gamma

from abeltau.config import FunctionSpec, load_config, parse_config, safe_eval, serialize_config
from abeltau.errors import ConfigError
from abeltau.fracpoly import FracPoly
from abeltau.operator import Forcing
from abeltau.problems import EXAMPLE_CONFIGS, example, example_config

MINIMAL = """\
[problem]
name = tiny
alphas = 2/4

[kernel 1 1]
terms = (0, 0, 1), (1, 0, -0.5)

[forcing 1]
terms = (0, 1)
"""


def test_safe_eval_whitelist():
    assert safe_eval("Gamma(1/4)") == pytest.approx(gamma(0.25))
    assert safe_eval("5*sqrt(2)*pi/(16*Gamma(3/4))") == pytest.approx(5 * math.sqrt(2) * math.pi / (16 * gamma(0.75)))
    assert safe_eval("Beta(1/2, 7/4)") == pytest.approx(gamma(0.5) * gamma(1.75) / gamma(2.25))
    assert safe_eval("-2**3") == -8
    for bad in ("__import__('os')", "open('x')", "x", "[1, 2]", "(1).real", "lambda: 1", "exp(1)"):
        with pytest.raises(ValueError):
            safe_eval(bad)


def test_minimal_config():
    cfg = parse_config(MINIMAL)
    assert cfg.alphas == [[Fraction(1, 2)]]  # reduced to lowest terms
    p = cfg.to_problem()
    assert p.n == 1 and p.sigma == Fraction(1, 2)
    assert p.kernels[0][0].coeffs[1, 0] == -0.5
    assert p.forcing[0].to_map() == {0: 1.0}
    assert p.exact is None


@pytest.mark.parametrize("k", sorted(EXAMPLE_CONFIGS))
def test_examples_round_trip(k):
    cfg = example_config(k)
    text = serialize_config(cfg)
    again = parse_config(text)
    assert serialize_config(again) == text
    assert again.alphas == cfg.alphas and again.kernels == cfg.kernels


def test_example_configs_build_expected_problems():
    p1 = example(1)
    c = 5 * math.sqrt(2) * math.pi / (16 * gamma(0.75))
    assert p1.forcing[1].to_map()[4] == pytest.approx(c)
    assert p1.forcing[1].to_map()[6] == pytest.approx(5 * math.sqrt(2 * math.pi) / (12 * gamma(0.75)))
    p3 = example(3)
    assert isinstance(p3.forcing[0], Forcing)
    t = np.linspace(0, 1, 5)
    np.testing.assert_allclose(p3.exact[0](t), np.arctan(np.sqrt(t)))
    with pytest.raises(ValueError):
        example(7)


def test_forcing_series_from_builtins():
    f = FunctionSpec(terms=[(0, "1")], builtins=[("erfc_comb", "-1")]).materialize(Fraction(1, 2))
    s = f.series(6, Fraction(1, 2))
    assert s[0] == pytest.approx(0.0)
    assert s[1] == pytest.approx(2.0)
    assert isinstance(FunctionSpec(terms=[(1, "2")]).materialize(Fraction(1, 2)), FracPoly)


def error_for(text):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    return exc.value


def test_alpha_out_of_range():
    err = error_for(MINIMAL.replace("alphas = 2/4", "alphas = 5/4"))
    assert "0 < alpha <= 1" in str(err)
    assert err.line == 3 and err.field == "problem.alphas"
    assert str(err).startswith("[line 3, field 'problem.alphas']")


@pytest.mark.parametrize(
    "old,new,line,field",
    [
        ("alphas = 2/4", "alphas = 0.5", 3, "problem.alphas"),
        ("terms = (0, 0, 1), (1, 0, -0.5)", "terms = (0, 0, os.system)", 6, "kernel 1 1.terms"),
        ("terms = (0, 0, 1), (1, 0, -0.5)", "terms = (0, 0)", 6, "kernel 1 1.terms"),
        ("terms = (0, 1)", "terms = (-1, 1)", 9, "forcing 1.terms"),
        ("[forcing 1]", "[forcing 3]", 8, "forcing 3"),
        ("[forcing 1]", "[weird 1]", 8, "weird 1"),
        ("terms = (0, 1)", "builtins = nosuch: 1", 9, "forcing 1.builtins"),
    ],
)
def test_errors_carry_location(old, new, line, field):
    err = error_for(MINIMAL.replace(old, new))
    assert err.line == line
    assert err.field == field


def test_structural_errors():
    assert "missing [problem]" in str(error_for("[kernel 1 1]\nterms = (0, 0, 1)\n"))
    assert "n x n" in str(error_for("[problem]\nalphas = 1/2, 1/2; 1/2\n"))
    assert error_for("[problem]\nn = 3\nalphas = 1/2\n").field == "problem.n"
    error_for("[problem\nalphas = 1/2\n")


def test_exact_needs_every_component():
    text = "[problem]\nalphas = 1/2, 1/2; 1/2, 1/2\n[exact 1]\nterms = (1, 1)\n"
    assert error_for(text).field == "exact"


def test_load_from_file(tmp_path):
    path = tmp_path / "p.ini"
    path.write_text(MINIMAL, encoding="utf-8")
    assert load_config(path).name == "tiny"
