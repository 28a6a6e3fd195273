#include "emlab/lagrangian.hpp"

#include <cmath>
#include <sstream>

namespace emlab {

bool Lagrangian::in_domain(const Matrix& x) const {
  switch (domain) {
    case Domain::All:
      return true;
    case Domain::Nonsingular:
      return std::abs(det(x)) > kTolSing;
    case Domain::PositiveDet:
      return det(x) > kTolSing;
  }
  return false;
}

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void require_nonsingular(const Matrix& x, const char* who) {
  if (std::abs(det(x)) <= kTolSing) throw SingularMatrix(std::string(who) + ": |det X| <= tol_sing");
}

}  // namespace

std::string Lagrangian::id() const {
  std::ostringstream os;
  os << name;
  if (!params.empty()) {
    os << ":";
    bool first = true;
    for (const auto& [k, v] : params) {
      if (!first) os << ",";
      first = false;
      os << k << "=" << fmt_num(v);
    }
  }
  return os.str();
}

Lagrangian make_dirichlet(double p, int n) {
  if (p <= 1.0) throw BadParam("dirichlet needs p > 1");
  Lagrangian L;
  L.name = "dirichlet";
  L.params = {{"n", static_cast<double>(n)}, {"p", p}};
  L.dim = n;
  L.domain = Domain::All;
  L.eval_W = [p](const Matrix& x) { return std::pow(frob(x), p); };
  L.eval_DW = [p](const Matrix& x) { return p * std::pow(frob(x), p - 2.0) * x; };
  return L;
}

Lagrangian make_qmean(int n, double q) {
  if (q < 1.0) throw BadParam("qmean needs q >= 1");
  Lagrangian L;
  L.name = "qmean";
  L.params = {{"n", static_cast<double>(n)}, {"q", q}};
  L.dim = n;
  L.domain = Domain::Nonsingular;
  L.eval_W = [n, q](const Matrix& x) {
    require_nonsingular(x, "qmean W");
    return std::pow(std::pow(frob(x), n) / std::abs(det(x)), q);
  };
  L.eval_DW = [n, q](const Matrix& x) {
    require_nonsingular(x, "qmean DW");
    const double d = det(x);
    const double ad = std::abs(d);
    const double nrm = frob(x);
    const double dist = std::pow(nrm, n) / ad;  // |X|^n / |det X|
    const Matrix term = (static_cast<double>(n) * std::pow(nrm, n - 2.0) / ad) * x -
                        (sgn(d) * std::pow(nrm, n) / (ad * ad)) * transpose(adjugate(x));
    return q * std::pow(dist, q - 1.0) * term;
  };
  return L;
}

Lagrangian make_inv_power(double p, int n) {
  if (p < 1.0) throw BadParam("inv_power needs p >= 1");
  Lagrangian L;
  L.name = "inv_power";
  L.params = {{"n", static_cast<double>(n)}, {"p", p}};
  L.dim = n;
  L.domain = Domain::Nonsingular;
  L.eval_W = [p](const Matrix& x) {
    require_nonsingular(x, "inv_power W");
    return std::pow(frob(x), p) + std::pow(frob(inverse(x)), p) * std::abs(det(x));
  };
  L.eval_DW = [p](const Matrix& x) {
    require_nonsingular(x, "inv_power DW");
    const double d = det(x);
    const Matrix xt = transpose(x);
    const Matrix xi = inverse(x);
    const double inrm = frob(xi);
    return p * std::pow(frob(x), p - 2.0) * x -
           (p * std::abs(d) * std::pow(inrm, p - 2.0)) * inverse(xt * x * xt) +
           (sgn(d) * std::pow(inrm, p)) * transpose(adjugate(x));
  };
  return L;
}

Lagrangian make_ball(double p, double q, int n) {
  if (p < n - 1) throw BadParam("ball class needs p >= n-1");
  if (q < p / (p - 1.0)) throw BadParam("ball class needs q >= p/(p-1)");
  Lagrangian L;
  L.name = "ball";
  L.params = {{"n", static_cast<double>(n)}, {"p", p}, {"q", q}};
  L.dim = n;
  L.domain = Domain::Nonsingular;  // the DW formula needs det != 0
  L.eval_W = [p, q](const Matrix& x) {
    return std::pow(frob(x), p) + std::pow(frob(adjugate(x)), q);
  };
  L.eval_DW = [p, q](const Matrix& x) {
    require_nonsingular(x, "ball DW");
    const double d = det(x);
    const Matrix xt = transpose(x);
    const Matrix a = adjugate(x);
    const double a2 = inner(a, a);
    return p * std::pow(frob(x), p - 2.0) * x +
           q * std::pow(std::sqrt(a2), q - 2.0) *
               ((-1.0 / d) * adjugate(xt * x * xt) + (a2 / d) * transpose(a));
  };
  return L;
}

Lagrangian make_quartic_shell(int n) {
  Lagrangian L;
  L.name = "quartic_shell";
  L.params = {{"n", static_cast<double>(n)}};
  L.dim = n;
  L.domain = Domain::All;
  L.eval_W = [](const Matrix& x) {
    const double t = inner(x, x) - 4.0;
    return t * t;
  };
  L.eval_DW = [](const Matrix& x) { return 4.0 * (inner(x, x) - 4.0) * x; };
  return L;
}

Lagrangian make_sigma_2d(const std::string& name,
                         const std::function<double(double, double)>& sigma,
                         const std::function<double(double, double)>& d1_sigma,
                         const std::function<double(double, double)>& d2_sigma) {
  Lagrangian L;
  L.name = name;
  L.dim = 2;
  L.domain = Domain::All;
  L.eval_W = [sigma](const Matrix& x) {
    const Matrix y = transpose(x) * x;
    return sigma(trace(y), det(y));
  };
  L.eval_DW = [d1_sigma, d2_sigma](const Matrix& x) {
    const Matrix y = transpose(x) * x;
    const double t = trace(y), d = det(y);
    return 2.0 * d1_sigma(t, d) * x + 2.0 * d2_sigma(t, d) * (x * adjugate(y));
  };
  return L;
}

Lagrangian lagrangian_from_id(const std::string& id) {
  const auto colon = id.find(':');
  const std::string name = id.substr(0, colon);
  std::map<std::string, double> params;
  if (colon != std::string::npos) {
    std::stringstream ss(id.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("bad parameter '" + item + "' in '" + id + "'");
      try {
        params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw ConfigError("bad parameter value in '" + id + "'");
      }
    }
  }
  auto get = [&](const std::string& key, double fallback, bool required = false) {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (required) throw ConfigError("missing parameter '" + key + "' in '" + id + "'");
    return fallback;
  };
  try {
    if (name == "dirichlet") return make_dirichlet(get("p", 2.0), static_cast<int>(get("n", 2.0)));
    if (name == "qmean") return make_qmean(static_cast<int>(get("n", 2.0)), get("q", 1.0));
    if (name == "inv_power") return make_inv_power(get("p", 2.0), static_cast<int>(get("n", 2.0)));
    if (name == "ball")
      return make_ball(get("p", 2.0), get("q", 2.0), static_cast<int>(get("n", 2.0)));
    if (name == "quartic_shell") return make_quartic_shell(static_cast<int>(get("n", 2.0)));
  } catch (const BadParam& e) {
    throw ConfigError(std::string(e.what()) + " in '" + id + "'");
  }
  throw ConfigError("unknown lagrangian '" + name + "'");
}

}  // namespace emlab
