import math
import os

import pytest

import circlepat as cp

DATA = os.environ["CIRCLEPAT_DATA_DIR"]


def bundled(name):
    return cp.load_surface(os.path.join(DATA, name + ".surf"))


def test_triangulation_solve_and_layout():
    f = bundled("genus2_tri12")
    assert f.surface.genus() == 2
    assert f.surface.is_triangulation()
    sol = cp.solve(f.surface, f.weights)
    assert sol.residual <= 1e-10
    c = math.cos(2 * math.pi / 7)
    r = math.acosh(c / (1 - c)) / 2
    assert all(abs(x - r) < 1e-12 for x in sol.radii)
    lay = cp.develop(f.surface, f.weights, sol)
    assert lay.holonomy_residual <= 1e-7
    assert cp.emit_svg(lay, f.surface, True, False).startswith("<")


def test_ideal_pattern():
    f = bundled("genus2_quads8_ideal")
    assert cp.check_ideal(f.surface, f.weights).passed
    sol = cp.solve_ideal(f.surface, f.weights)
    r = math.acosh(1 / math.tan(math.pi / 5))
    assert all(abs(x - r) < 1e-12 for x in sol.radii)
    lay = cp.develop(f.surface, f.weights, sol)
    assert cp.ideal_incidence_spread(lay) <= 1e-6


def test_errors_map_to_python_exceptions():
    f = bundled("genus2_quads8")
    with pytest.raises(cp.ConditionNotMet):
        cp.solve_ideal(f.surface, f.weights)
    with pytest.raises(cp.ParseError):
        cp.parse_surface("vertex 0\n")
    assert issubclass(cp.ParseError, cp.Error)


def test_automorphism_and_angles():
    m = cp.DiskAutomorphism(0.3 + 0.1j, 0.7)
    z = 0.2 - 0.4j
    w = 0.5j
    assert abs(cp.hyp_distance(m(z), m(w)) - cp.hyp_distance(z, w)) < 1e-12
    assert abs(cp.schwarz_quotient(m, z) - 1) < 1e-10
    angles = cp.three_circle_angles([0.5, 0.7, 0.9], [0.0, 0.0, 0.0])
    assert all(a > 0 for a in angles) and sum(angles) < math.pi


def test_refinement_and_verify():
    f = bundled("genus2_one_quad")
    square = [-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j]
    rep = cp.refinement_experiment(f.surface, f.weights, {0: square}, [4, 8])
    assert "n" in str(rep)
    tri = bundled("genus2_tri12")
    q = bundled("genus2_quads8_ideal")
    ok, text = cp.run_verify("config", 10, 1, tri.surface, q.surface, q.weights)
    assert ok and text.rstrip().endswith("PASS")
