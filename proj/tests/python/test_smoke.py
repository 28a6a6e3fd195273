import pytest

import emlab


def approx_matrix(got, want, tol=1e-12):
    return all(
        abs(g - w) <= tol * (1.0 + abs(w)) for grow, wrow in zip(got, want) for g, w in zip(grow, wrow)
    )


def test_density_values():
    assert emlab.eval_w("dirichlet:p=2,n=2", [[1.0, 0.0], [0.0, 2.0]]) == pytest.approx(5.0)
    dw = emlab.eval_dw("dirichlet:p=2,n=2", [[1.0, 0.0], [0.0, 1.0]])
    assert approx_matrix(dw, [[2.0, 0.0], [0.0, 2.0]])


def test_tensor_values():
    t = emlab.em_tensor("dirichlet:p=2,n=2", [[1.0, 0.0], [0.0, 2.0]])
    assert approx_matrix(t, [[-3.0, 0.0], [0.0, 3.0]])
    r = emlab.reduced_em("qmean:n=2,q=1", [[1.0, 0.0], [0.0, 1.0]])
    assert approx_matrix(r, [[-2.0, 0.0], [0.0, -2.0]])


def test_matrix_utilities():
    s = emlab.singular_values([[0.0, -2.0], [1.0, 0.0]])
    assert s == pytest.approx([2.0, 1.0])
    assert approx_matrix(emlab.grad_det([[1.0, 2.0], [3.0, 4.0]]), [[4.0, -3.0], [-2.0, 1.0]])
    r, _ = emlab.polar_factor([[2.0, 0.0], [0.0, 3.0]])
    assert approx_matrix(r, [[1.0, 0.0], [0.0, 1.0]])


def test_hull_operations():
    refl = emlab.rank_one_reflection([0.0, 1.0])
    assert approx_matrix(refl, [[1.0, 0.0], [0.0, -1.0]])
    assert emlab.hull_membership([[0.5, 0.0], [0.0, 0.25]]) == "interior"
    assert emlab.hull_membership([[2.0, 0.0], [0.0, 0.0]]) == "outside"
    atoms = emlab.hull_decompose([[0.0, 0.0], [0.0, 0.0]])
    assert sum(w for w, _ in atoms) == pytest.approx(1.0)
    recon = [[0.0, 0.0], [0.0, 0.0]]
    for w, m in atoms:
        for i in range(2):
            for j in range(2):
                recon[i][j] += w * m[i][j]
    assert approx_matrix(recon, [[0.0, 0.0], [0.0, 0.0]])


def test_obstruction():
    rep = emlab.obstruction("qmean:n=2,q=1")
    assert rep["verdict"] == "EL_compatible_all_xi"
    assert rep["trace_cond"] == pytest.approx(0.0, abs=1e-12)
    rep = emlab.obstruction("dirichlet:p=2,n=2")
    assert rep["verdict"] == "EL_incompatible_all_xi"
    assert rep["trace_cond"] == pytest.approx(4.0)


def test_laminate_residuals():
    wells = ([[1.0, 0.0], [0.0, 1.0]], [[1.0, 0.0], [0.0, -1.0]])
    rep = emlab.laminate_residuals("qmean:n=2,q=1", *wells, layers=8, fraction=0.5)
    assert rep["energy"] == pytest.approx(2.0)
    assert rep["max_em_residual"] <= 1e-12 * rep["energy"]
    assert rep["max_el_residual"] <= 1e-12 * rep["energy"]
    rep = emlab.laminate_residuals("dirichlet:p=2,n=2", *wells, layers=8, fraction=0.5)
    assert rep["max_em_residual"] <= 1e-12 * rep["energy"]
    assert rep["max_el_residual"] >= 1e-3 * rep["energy"]


def test_staircase_trace():
    trace = emlab.staircase_trace([[0.5, 0.0], [0.0, 0.25]], stages=2)
    assert [row["stage"] for row in trace] == [0, 1, 2]
    bad = [row["bad_measure"] for row in trace]
    assert bad[0] == pytest.approx(1.0)
    assert bad[2] < bad[1] < bad[0]
    assert all(row["boundary_error"] == 0.0 for row in trace)


def test_errors_surface():
    with pytest.raises(Exception) as exc:
        emlab.eval_w("qmean:n=2,q=1", [[1.0, 0.0], [0.0, 0.0]])
    assert "singular" in str(exc.value).lower() or exc.type.__name__ == "EmlabError"
