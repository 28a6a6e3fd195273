// Python bindings for the main operations: energy densities and their
// gradients, the energy-momentum tensor, hull geometry, laminates, and the
// staircase refinement. Matrices cross the boundary as nested lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "emlab/emtensor.hpp"
#include "emlab/inclusions.hpp"
#include "emlab/staircase.hpp"
#include "emlab/weakform.hpp"

namespace py = pybind11;
using emlab::Matrix;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix to_matrix(const Rows& rows) {
  const int n = static_cast<int>(rows.size());
  Matrix m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
      throw emlab::BadShape("matrix rows must be square");
    for (int j = 0; j < n; ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

Rows from_matrix(const Matrix& m) {
  Rows rows(static_cast<std::size_t>(m.dim()));
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) rows[static_cast<std::size_t>(i)].push_back(m(i, j));
  return rows;
}

}  // namespace

PYBIND11_MODULE(_emlab, mod) {
  mod.doc() = "energy-momentum tensors, O(2) differential inclusions, weak residuals";

  mod.def("eval_w", [](const std::string& id, const Rows& x) {
    return emlab::lagrangian_from_id(id).eval_W(to_matrix(x));
  });
  mod.def("eval_dw", [](const std::string& id, const Rows& x) {
    return from_matrix(emlab::lagrangian_from_id(id).eval_DW(to_matrix(x)));
  });
  mod.def("em_tensor", [](const std::string& id, const Rows& x) {
    return from_matrix(emlab::em_tensor(emlab::lagrangian_from_id(id), to_matrix(x)));
  });
  mod.def("reduced_em", [](const std::string& id, const Rows& y) {
    return from_matrix(
        emlab::reduced_em(emlab::lagrangian_from_id(id), emlab::SymPsdMatrix(to_matrix(y))));
  });
  mod.def("grad_det", [](const Rows& x) { return from_matrix(emlab::grad_det(to_matrix(x))); });
  mod.def("grad_inv_norm", [](const Rows& x, double p) {
    return from_matrix(emlab::grad_inv_norm(to_matrix(x), p));
  });
  mod.def("grad_adj_norm_sq",
          [](const Rows& x) { return from_matrix(emlab::grad_adj_norm_sq(to_matrix(x))); });
  mod.def("singular_values", [](const Rows& x) {
    const Matrix m = to_matrix(x);
    const auto s = emlab::singular_values(m);
    return std::vector<double>(s.begin(), s.begin() + m.dim());
  });
  mod.def("polar_factor", [](const Rows& x) {
    const auto f = emlab::polar_factor(to_matrix(x));
    return py::make_tuple(from_matrix(f.r), from_matrix(f.s.to_matrix()));
  });
  mod.def("rank_one_reflection", [](const std::vector<double>& xi) {
    return from_matrix(emlab::rank_one_reflection(xi));
  });
  mod.def("hull_membership", [](const Rows& x) {
    switch (emlab::hull_membership(to_matrix(x))) {
      case emlab::HullPosition::Interior: return std::string("interior");
      case emlab::HullPosition::Boundary: return std::string("boundary");
      default: return std::string("outside");
    }
  });
  mod.def("hull_decompose", [](const Rows& m) {
    const auto dec = emlab::hull_decompose(to_matrix(m));
    std::vector<std::pair<double, Rows>> out;
    for (const auto& [w, r] : dec.atoms) out.emplace_back(w, from_matrix(r));
    return out;
  });
  mod.def("obstruction", [](const std::string& id) {
    const auto rep = emlab::el_obstruction(emlab::lagrangian_from_id(id));
    py::dict d;
    d["q_min"] = rep.q_min;
    d["q_max"] = rep.q_max;
    d["trace_cond"] = rep.trace_cond;
    d["dw_identity"] = from_matrix(rep.dw_identity);
    d["verdict"] = emlab::to_string(rep.verdict);
    return d;
  });
  mod.def(
      "laminate_residuals",
      [](const std::string& id, const Rows& well_a, const Rows& well_b, int layers,
         double fraction) {
        const auto conn = emlab::find_rank_one_connection(to_matrix(well_a), to_matrix(well_b));
        if (!conn) throw emlab::InvalidConnection();
        emlab::LaminateSpec spec{*conn, fraction, layers, emlab::Rect{0.0, 0.0, 1.0, 1.0}};
        const auto map = emlab::laminate_build(spec);
        const auto L = emlab::lagrangian_from_id(id);
        const auto rep =
            emlab::residual_battery(map, L, emlab::default_battery(map.domain), "laminate");
        double max_em = 0.0, max_el = 0.0;
        for (const auto& f : rep.fields) {
          max_em = std::max(max_em, std::abs(f.em_residual));
          max_el = std::max(max_el, std::abs(f.el_residual));
        }
        py::dict d;
        d["energy"] = rep.energy;
        d["max_em_residual"] = max_em;
        d["max_el_residual"] = max_el;
        d["cells"] = map.cell_count();
        return d;
      },
      py::arg("lagrangian"), py::arg("well_a"), py::arg("well_b"), py::arg("layers") = 8,
      py::arg("fraction") = 0.5);
  mod.def(
      "staircase_trace",
      [](const Rows& m, int stages) {
        const auto res = emlab::staircase_refine(to_matrix(m), stages);
        std::vector<py::dict> rows;
        for (const auto& r : res.trace) {
          py::dict d;
          d["stage"] = r.stage;
          d["bad_measure"] = r.bad_measure;
          d["linf_defect"] = r.linf_defect;
          d["boundary_error"] = r.boundary_error;
          rows.push_back(d);
        }
        return rows;
      },
      py::arg("m"), py::arg("stages") = 3);

  py::register_exception<emlab::Error>(mod, "EmlabError");
}
