import math

import numpy as np
import pytest
from scipy import integrate, special

from sharpsmooth.problem import (
    DispersionSpec,
    ProblemSpec,
    SmoothingSpec,
    WeightSpec,
    format_config,
    fourier_radial,
    fw_eval,
    fw_numeric,
    load_config,
    parse_config,
    reduce_to_schrodinger,
    type_b_kappa,
    weight_profile,
)


def test_weight_ranges():
    with pytest.raises(ValueError):
        ProblemSpec.schrodinger(3, "B", 3.0)
    with pytest.raises(ValueError):
        ProblemSpec.schrodinger(3, "A", 1.5)
    with pytest.raises(ValueError):
        ProblemSpec.schrodinger(3, "C", 1.0)
    with pytest.raises(ValueError):
        WeightSpec("Z")
    with pytest.raises(ValueError):
        DispersionSpec("relativistic", -1.0)
    with pytest.raises(ValueError):
        ProblemSpec.schrodinger(7, "A", 2.0)


def test_dispersions():
    r = np.array([0.5, 2.0])
    rel = DispersionSpec("relativistic", 1.0)
    np.testing.assert_allclose(rel.phi(r), np.sqrt(r * r + 1))
    np.testing.assert_allclose(rel.dphi(r), r / np.sqrt(r * r + 1))
    sch = DispersionSpec()
    np.testing.assert_allclose(sch.phi(r), r * r)
    np.testing.assert_allclose(sch.dphi(r), 2 * r)


def test_standard_smoothing_functions():
    r = np.array([0.3, 1.0, 4.0])
    sp = ProblemSpec.schrodinger(3, "A", 2.0)
    np.testing.assert_allclose(sp.smoothing.psi_squared(r, sp.weight, 0.0), np.sqrt(1 + r * r))
    sp = ProblemSpec.schrodinger(3, "B", 1.5)
    np.testing.assert_allclose(sp.smoothing.psi_squared(r, sp.weight, 0.0), r**0.5)
    sp = ProblemSpec.dirac(3, "C", 2.0, 1.0)
    np.testing.assert_allclose(sp.smoothing.psi_squared(r, sp.weight, 1.0), r / np.sqrt(r * r + 1))


def test_prefactor():
    r = np.array([0.5, 2.0])
    sp = ProblemSpec.dirac(3, "B", 2.0, 1.0)
    phi = np.sqrt(r * r + 1)
    # r^2 * (1/phi) / (r/phi) = r
    np.testing.assert_allclose(sp.prefactor(r), r)


def test_reduction_halves_curves():
    from sharpsmooth.curves import lambda_k

    sp = ProblemSpec.dirac(3, "A", 2.0, 1.0)
    red = reduce_to_schrodinger(sp)
    assert red.reduced and red.dispersion.kind == "schrodinger"
    for k in (0, 2):
        for r in (0.3, 2.0):
            assert math.isclose(lambda_k(sp, k, r), 2 * lambda_k(red, k, r), rel_tol=1e-10)
    with pytest.raises(ValueError):
        reduce_to_schrodinger(red)


def test_type_b_kappa_matches_gaussian_pairing():
    # int |x|^{-s} e^{-|x|^2/2} dx = (2pi)^{-d} int kappa |xi|^{s-d} (2pi)^{d/2} e^{-|xi|^2/2} dxi
    for d, s in [(3, 2.0), (2, 1.5), (4, 2.5)]:
        area = 2 * math.pi ** (d / 2) / math.gamma(d / 2)
        lhs = area * integrate.quad(lambda r: r ** (d - 1 - s) * math.exp(-r * r / 2), 0, np.inf)[0]
        rhs_int = area * integrate.quad(lambda r: r ** (d - 1 + s - d) * math.exp(-r * r / 2), 0, np.inf)[0]
        rhs = type_b_kappa(d, s) * (2 * math.pi) ** (d / 2) * rhs_int / (2 * math.pi) ** d
        assert math.isclose(lhs, rhs, rel_tol=1e-10)


@pytest.mark.parametrize("fam,s,d", [("A", 2.0, 3), ("C", 2.0, 3), ("A", 3.0, 2), ("C", 1.5, 4), ("gaussian", 2.0, 3)])
def test_fourier_closed_form_vs_numeric(fam, s, d):
    w = WeightSpec(fam, s)
    u = np.array([0.05, 0.5, 2.0, 8.0])
    np.testing.assert_allclose(fw_numeric(w, d, u), fw_eval(w, d, u), rtol=1e-7)


def test_fourier_sine_route():
    w = WeightSpec("A", 2.0)
    u = np.array([0.1, 1.0, 5.0])
    np.testing.assert_allclose(fw_numeric(w, 3, u, method="sine"), fw_eval(w, 3, u), rtol=1e-8)
    with pytest.raises(ValueError):
        fw_numeric(w, 2, u, method="sine")


def test_fourier_known_values():
    # (1+|x|^2)^{-1} on R^3 has transform 2 pi^2 e^{-rho} / rho
    rho = np.array([0.5, 1.0, 3.0])
    np.testing.assert_allclose(fourier_radial(WeightSpec("A", 2.0), 3, rho), 2 * math.pi**2 * np.exp(-rho) / rho, rtol=1e-13)
    with pytest.raises(ValueError):
        fw_eval(WeightSpec("A", 2.0), 3, 0.0)


def test_weight_profiles():
    r = np.array([0.5, 2.0])
    np.testing.assert_allclose(weight_profile(WeightSpec("B", 1.5), r), r**-1.5)
    np.testing.assert_allclose(weight_profile(WeightSpec("C", 3.0), r), (1 + r * r) ** -1.5)
    np.testing.assert_allclose(weight_profile(WeightSpec("gaussian"), r), np.exp(-r * r / 2))


def test_custom_weight_uses_hankel():
    w = WeightSpec("custom", func=lambda r: np.exp(-0.5 * np.asarray(r) ** 2))
    rho = np.array([0.4, 1.7])
    np.testing.assert_allclose(fourier_radial(w, 3, rho), (2 * math.pi) ** 1.5 * np.exp(-rho * rho / 2), rtol=1e-8)


def test_config_roundtrip(tmp_path):
    sp = ProblemSpec(3, WeightSpec("A", 2.5), SmoothingSpec("dirac"), DispersionSpec("relativistic", 0.75))
    text = format_config(sp)
    assert parse_config(text) == sp
    path = tmp_path / "p.cfg"
    path.write_text("# comment\n" + text)
    assert load_config(path) == sp


@pytest.mark.parametrize(
    "text,msg",
    [("d = 3\nfamily = A\nbogus = 1\n", "line 3"), ("d = 3\nfamily\n", "line 2"), ("family = A\n", "needs")],
)
def test_config_errors(text, msg):
    with pytest.raises(ValueError, match=msg):
        parse_config(text)


def test_format_refuses_custom():
    sp = ProblemSpec(3, WeightSpec("custom", func=lambda r: r), SmoothingSpec("one"))
    with pytest.raises(ValueError):
        format_config(sp)
