// Command-line surface: wires the library into reproducible experiments and
// emits JSON reports plus CSV meshes/traces. Exit codes: 0 all checks pass,
// 1 a mathematical check failed, 2 configuration or usage error.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "emlab/emtensor.hpp"
#include "emlab/inclusions.hpp"
#include "emlab/staircase.hpp"
#include "emlab/weakform.hpp"

namespace {

using emlab::Matrix;
using nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

void emit(const ordered_json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    f << text;
  }
}

Matrix parse_matrix2(const std::string& csv) {
  std::stringstream ss(csv);
  std::string item;
  std::vector<double> vals;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  if (vals.size() != 4) throw emlab::ConfigError("expected 4 comma-separated reals, got '" + csv + "'");
  return Matrix::from_rows2(vals[0], vals[1], vals[2], vals[3]);
}

// Well mnemonics: "I", "reflect:e1", "reflect:e2", "rot:<radians>",
// "diag:<a>;<b>".
Matrix parse_well(const std::string& token) {
  if (token == "I") return Matrix::identity(2);
  const auto colon = token.find(':');
  const std::string head = token.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : token.substr(colon + 1);
  if (head == "reflect") {
    if (arg == "e1") return emlab::rank_one_reflection({1.0, 0.0});
    if (arg == "e2") return emlab::rank_one_reflection({0.0, 1.0});
    throw emlab::ConfigError("reflect takes e1 or e2, got '" + arg + "'");
  }
  if (head == "rot") {
    const double t = std::stod(arg);
    return Matrix::from_rows2(std::cos(t), -std::sin(t), std::sin(t), std::cos(t));
  }
  if (head == "diag") {
    const auto semi = arg.find(';');
    if (semi == std::string::npos) throw emlab::ConfigError("diag takes a;b");
    return Matrix::diag(std::stod(arg.substr(0, semi)), std::stod(arg.substr(semi + 1)));
  }
  throw emlab::ConfigError("unknown well '" + token + "'");
}

std::pair<Matrix, Matrix> parse_wells(const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos) throw emlab::ConfigError("--wells needs two comma-separated wells");
  return {parse_well(spec.substr(0, comma)), parse_well(spec.substr(comma + 1))};
}

Matrix random_sample(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (;;) {
    Matrix x(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x(i, j) = dist(rng);
    if (std::abs(emlab::det(x)) >= 0.2 && emlab::frob(x) <= 3.0) return x;
  }
}

Matrix random_orthogonal(std::mt19937_64& rng, int n, bool flip) {
  // Gram-Schmidt of a random matrix; optionally negate the last column
  std::normal_distribution<double> dist(0.0, 1.0);
  for (;;) {
    Matrix a(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
    Matrix q(n);
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      std::vector<double> col(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = a(i, j);
      for (int k = 0; k < j; ++k) {
        double proj = 0.0;
        for (int i = 0; i < n; ++i) proj += q(i, k) * col[static_cast<std::size_t>(i)];
        for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] -= proj * q(i, k);
      }
      double nrm = 0.0;
      for (double c : col) nrm += c * c;
      nrm = std::sqrt(nrm);
      if (nrm < 1e-6) {
        ok = false;
        break;
      }
      for (int i = 0; i < n; ++i) q(i, j) = col[static_cast<std::size_t>(i)] / nrm;
    }
    if (!ok) continue;
    if (flip)
      for (int i = 0; i < n; ++i) q(i, n - 1) = -q(i, n - 1);
    return q;
  }
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.dim(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

int run_gradcheck(const std::string& lag_id, unsigned seed, const std::string& out) {
  const emlab::Lagrangian L = emlab::lagrangian_from_id(lag_id);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  const int samples = 100;
  for (int s = 0; s < samples; ++s) {
    const Matrix x = random_sample(rng, L.dim);
    if (!L.in_domain(x)) continue;
    const Matrix analytic = L.eval_DW(x);
    const Matrix fd = emlab::fd_gradient(L.eval_W, x);
    worst = std::max(worst, emlab::frob(analytic - fd) / (1.0 + emlab::frob(analytic)));
  }
  const bool pass = worst <= 1e-6;
  ordered_json j{{"command", "gradcheck"},
                 {"lagrangian", L.id()},
                 {"samples", samples},
                 {"seed", seed},
                 {"max_rel_defect", worst},
                 {"pass", pass}};
  emit(j, out);
  return pass ? kExitPass : kExitFail;
}

int run_invariance(const std::string& lag_id, unsigned seed, const std::string& out) {
  const emlab::Lagrangian L = emlab::lagrangian_from_id(lag_id);
  std::mt19937_64 rng(seed);
  double worst_t = 0.0, worst_equi = 0.0;
  bool pass = true;
  for (int s = 0; s < 20; ++s) {
    const Matrix x = random_sample(rng, L.dim);
    const Matrix r = random_orthogonal(rng, L.dim, s % 2 == 1);
    const auto defect = emlab::check_invariance(L, x, r);
    const double scale = 1e-12 * (1.0 + emlab::frob(emlab::em_tensor(L, x)));
    worst_t = std::max(worst_t, defect.tensor_defect);
    worst_equi = std::max(worst_equi, defect.equivariance_defect);
    if (defect.tensor_defect > scale || defect.equivariance_defect > scale) pass = false;
  }
  ordered_json j{{"command", "invariance"}, {"lagrangian", L.id()}, {"seed", seed},
                 {"pairs", 20},             {"max_tensor_defect", worst_t},
                 {"max_equivariance_defect", worst_equi}, {"pass", pass}};
  emit(j, out);
  return pass ? kExitPass : kExitFail;
}

int run_obstruction(const std::string& lag_id, const std::string& out) {
  const emlab::Lagrangian L = emlab::lagrangian_from_id(lag_id);
  const emlab::ObstructionReport rep = emlab::el_obstruction(L);
  ordered_json j{{"command", "obstruction"},
                 {"lagrangian", L.id()},
                 {"q_min", rep.q_min},
                 {"q_max", rep.q_max},
                 {"trace_cond", rep.trace_cond},
                 {"dw_identity", matrix_json(rep.dw_identity)},
                 {"verdict", emlab::to_string(rep.verdict)}};
  emit(j, out);
  return kExitPass;
}

int run_invert(const std::string& family, const std::string& z_csv, double p, int n, double t,
               const std::string& out) {
  const Matrix z = parse_matrix2(z_csv);
  emlab::SymPsdMatrix y = emlab::SymPsdMatrix::diag(0.0, 0.0);
  emlab::Lagrangian L = emlab::make_dirichlet(2.0, 2);
  if (family == "dirichlet") {
    L = emlab::make_dirichlet(p, n);
    y = emlab::invert_reduced_dirichlet(z, p, n);
  } else if (family == "qmean") {
    L = emlab::make_qmean(2, 1.0);
    y = emlab::invert_reduced_qmean2d(z, t);
  } else {
    throw emlab::ConfigError("invert supports dirichlet or qmean, got '" + family + "'");
  }
  const Matrix back = emlab::reduced_em(L, y);
  const double defect = emlab::frob(back - z) / (1.0 + emlab::frob(z));
  const bool pass = defect <= 1e-10;
  ordered_json j{{"command", "invert"},   {"family", family},
                 {"Z", matrix_json(z)},   {"Y", matrix_json(y.to_matrix())},
                 {"round_trip_defect", defect}, {"pass", pass}};
  emit(j, out);
  return pass ? kExitPass : kExitFail;
}

int run_families(const std::string& family, double c, const std::string& z_csv,
                 const std::string& out) {
  emlab::ScanViolations bad;
  if (family == "dirichlet-conformal") {
    bad = emlab::scan_dirichlet_conformal(c, emlab::default_scan_grid(std::max(1.0, c), 3.0, 0.1));
  } else if (family == "qmean") {
    const Matrix z = z_csv.empty() ? Matrix::diag(-2.0, -2.0) : parse_matrix2(z_csv);
    bad = emlab::scan_qmean_inverse(z, emlab::default_scan_grid(0.5, 4.0, 0.25));
  } else if (family == "inv-power") {
    bad = emlab::scan_inv_power_scalar(emlab::default_scan_grid(0.5, 4.0, 0.25));
  } else {
    throw emlab::ConfigError("unknown family '" + family + "'");
  }
  ordered_json viol = ordered_json::array();
  for (const auto& [t1, t2] : bad) viol.push_back({t1, t2});
  ordered_json j{{"command", "families"},
                 {"family", family},
                 {"violations", viol},
                 {"pass", bad.empty()}};
  emit(j, out);
  return bad.empty() ? kExitPass : kExitFail;
}

int run_laminate(const std::string& wells, int layers, double fraction,
                 const std::string& lag_id, const std::string& out) {
  const auto [a, b] = parse_wells(wells);
  const auto conn = emlab::find_rank_one_connection(a, b);
  if (!conn) throw emlab::InvalidConnection();
  emlab::LaminateSpec spec{*conn, fraction, layers, emlab::Rect{0.0, 0.0, 1.0, 1.0}};
  const emlab::PiecewiseAffineMap map = emlab::laminate_build(spec);
  const emlab::Lagrangian L = emlab::lagrangian_from_id(lag_id);
  std::ostringstream map_id;
  map_id << "laminate:wells=" << wells << ",layers=" << layers << ",fraction=" << fraction;
  const emlab::ResidualReport rep =
      emlab::residual_battery(map, L, emlab::default_battery(map.domain), map_id.str());
  double max_em = 0.0, max_el = 0.0;
  for (const auto& f : rep.fields) {
    max_em = std::max(max_em, std::abs(f.em_residual));
    max_el = std::max(max_el, std::abs(f.el_residual));
  }
  const bool pass = max_em <= 1e-12 * rep.energy;
  if (!out.empty()) {
    emlab::write_mesh_csv(map, out + ".mesh.csv");
    std::ofstream f(out + ".report.json");
    f << emlab::residual_report_json(rep);
  }
  ordered_json j{{"command", "laminate"}, {"lagrangian", L.id()},
                 {"map", map_id.str()},   {"energy", rep.energy},
                 {"max_em_residual", max_em}, {"max_el_residual", max_el},
                 {"pass", pass}};
  std::cout << j.dump(2) << "\n";
  return pass ? kExitPass : kExitFail;
}

int run_staircase(const std::string& m_csv, int stages, const std::string& out) {
  const Matrix m = parse_matrix2(m_csv);
  const emlab::StaircaseResult res = emlab::staircase_refine(m, stages);
  bool pass = true;
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    if (res.trace[i].bad_measure > res.trace[i - 1].bad_measure + 1e-15) pass = false;
    if (res.trace[i].boundary_error != 0.0) pass = false;
  }
  if (!out.empty()) {
    emlab::write_mesh_csv(res.map, out + ".mesh.csv");
    std::ofstream f(out + ".trace.csv");
    f.precision(17);
    f << "stage,bad_measure,linf_defect,boundary_error\n";
    for (const auto& row : res.trace)
      f << row.stage << "," << row.bad_measure << "," << row.linf_defect << ","
        << row.boundary_error << "\n";
  }
  ordered_json trace = ordered_json::array();
  for (const auto& row : res.trace)
    trace.push_back({{"stage", row.stage},
                     {"bad_measure", row.bad_measure},
                     {"linf_defect", row.linf_defect},
                     {"boundary_error", row.boundary_error}});
  ordered_json j{{"command", "staircase"}, {"M", matrix_json(m)}, {"trace", trace}, {"pass", pass}};
  std::cout << j.dump(2) << "\n";
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for energy-momentum tensors and O(2) inclusions"};
  app.require_subcommand(1);

  std::string lag_id = "dirichlet:p=2,n=2";
  std::string out;
  unsigned seed = 42;
  std::string family, wells = "I,reflect:e2", z_csv, m_csv = "0.5,0,0,0.25";
  double p = 4.0, c = 1.0, t = 1.0, fraction = 0.5;
  int n = 2, layers = 8, stages = 3;
  std::string format = "json";

  auto* gradcheck = app.add_subcommand("gradcheck", "analytic vs finite-difference gradients");
  gradcheck->add_option("--lagrangian", lag_id);
  gradcheck->add_option("--seed", seed);
  gradcheck->add_option("--out", out);

  auto* invariance = app.add_subcommand("invariance", "tensor invariance under left rotations");
  invariance->add_option("--lagrangian", lag_id);
  invariance->add_option("--seed", seed);
  invariance->add_option("--out", out);

  auto* obstruction = app.add_subcommand("obstruction", "first-variation obstruction at X = I");
  obstruction->add_option("--lagrangian", lag_id);
  obstruction->add_option("--out", out);

  auto* invert = app.add_subcommand("invert", "level-set inversion of the reduced tensor");
  invert->add_option("family", family)->required();
  invert->add_option("--Z", z_csv)->required();
  invert->add_option("--p", p);
  invert->add_option("--n", n);
  invert->add_option("--t", t);
  invert->add_option("--out", out);

  auto* families = app.add_subcommand("families", "well-ordering scan over parameter families");
  families->add_option("family", family)->required();
  families->add_option("--c", c);
  families->add_option("--Z", z_csv);
  families->add_option("--out", out);

  auto* laminate = app.add_subcommand("laminate", "build a two-well laminate and run residuals");
  laminate->add_option("--wells", wells);
  laminate->add_option("--layers", layers);
  laminate->add_option("--fraction", fraction);
  laminate->add_option("--lagrangian", lag_id);
  laminate->add_option("--out", out);
  laminate->add_option("--format", format);

  auto* staircase = app.add_subcommand("staircase", "finite-stage inclusion refinement");
  staircase->add_option("--M", m_csv);
  staircase->add_option("--stages", stages);
  staircase->add_option("--out", out);
  staircase->add_option("--format", format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (gradcheck->parsed()) return run_gradcheck(lag_id, seed, out);
    if (invariance->parsed()) return run_invariance(lag_id, seed, out);
    if (obstruction->parsed()) return run_obstruction(lag_id, out);
    if (invert->parsed()) return run_invert(family, z_csv, p, n, t, out);
    if (families->parsed()) return run_families(family, c, z_csv, out);
    if (laminate->parsed()) return run_laminate(wells, layers, fraction, lag_id, out);
    if (staircase->parsed()) return run_staircase(m_csv, stages, out);
  } catch (const emlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const emlab::Error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitConfig;
}
