#include "gci/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace gci {

// --------------------------------------------------------- FloatCovariance

FloatCovariance::FloatCovariance(GroundSet g, Eigen::MatrixXd m) : ground(std::move(g)), matrix(std::move(m)) {
  const auto n = static_cast<Eigen::Index>(ground.size());
  if (matrix.rows() != n || matrix.cols() != n) throw DomainError("matrix size does not match ground set");
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = r + 1; c < n; ++c) {
      if (matrix(r, c) != matrix(c, r)) throw DomainError("matrix is not symmetric");
    }
  }
}

bool FloatCovariance::cholesky_ok() const {
  if (ground.size() == 0) return true;
  Eigen::LLT<Eigen::MatrixXd> llt(matrix);
  return llt.info() == Eigen::Success;
}

namespace {

double scaled_minor(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows,
                    const std::vector<Eigen::Index>& cols) {
  const auto k = static_cast<Eigen::Index>(rows.size());
  if (k == 0) return 1.0;
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      const double scale = std::sqrt(m(rows[r], rows[r]) * m(cols[c], cols[c]));
      sub(r, c) = m(rows[r], cols[c]) / scale;
    }
  }
  if (k == 1) return sub(0, 0);
  return sub.partialPivLu().determinant();
}

std::vector<Eigen::Index> indices(const GroundSet& g, const LabelSet& labels) {
  std::vector<Eigen::Index> out;
  for (const auto& l : labels) out.push_back(static_cast<Eigen::Index>(g.index(l)));
  return out;
}

struct MinorIndex {
  std::vector<Eigen::Index> rows, cols;
};

MinorIndex apm_index(const GroundSet& g, const CIStatement& s) {
  LabelSet K = g.canonical(s.K);
  LabelSet rows{s.i}, cols{s.j};
  rows.insert(rows.end(), K.begin(), K.end());
  cols.insert(cols.end(), K.begin(), K.end());
  return {indices(g, rows), indices(g, cols)};
}

}  // namespace

double FloatCovariance::normalized_apm(const CIStatement& s) const {
  validate(s, ground);
  const MinorIndex idx = apm_index(ground, s);
  return scaled_minor(matrix, idx.rows, idx.cols);
}

double FloatCovariance::normalized_principal(const LabelSet& K) const {
  const auto idx = indices(ground, ground.canonical(K));
  return scaled_minor(matrix, idx, idx);
}

// ------------------------------------------------------------------ config

void SamplerConfig::validate() const {
  if (!(eps_eq > 0 && eps_eq < eps_dep)) throw DomainError("sampler tolerances need 0 < eps_eq < eps_dep");
  if (max_iterations == 0 || budget == 0 || samples == 0) throw DomainError("sampler budgets must be positive");
  if (!(min_step > 0) || !(ridge > 0)) throw DomainError("sampler step parameters must be positive");
}

nlohmann::json to_json(const SamplerConfig& c) {
  return {{"seed", c.seed},         {"eps_eq", c.eps_eq},   {"eps_dep", c.eps_dep}, {"max_iterations", c.max_iterations},
          {"min_step", c.min_step}, {"ridge", c.ridge},     {"budget", c.budget},   {"samples", c.samples}};
}

SamplerConfig sampler_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("sampler config must be a JSON object");
  SamplerConfig c;
  try {
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("eps_eq")) c.eps_eq = j["eps_eq"].get<double>();
    if (j.contains("eps_dep")) c.eps_dep = j["eps_dep"].get<double>();
    if (j.contains("max_iterations")) c.max_iterations = j["max_iterations"].get<std::size_t>();
    if (j.contains("min_step")) c.min_step = j["min_step"].get<double>();
    if (j.contains("ridge")) c.ridge = j["ridge"].get<double>();
    if (j.contains("budget")) c.budget = j["budget"].get<std::size_t>();
    if (j.contains("samples")) c.samples = j["samples"].get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("sampler config: ") + e.what());
  }
  return c;
}

// ---------------------------------------------------------------- sampling

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

FloatCovariance sample_pd(const GroundSet& ground, std::mt19937_64& rng, double ridge) {
  const auto n = static_cast<Eigen::Index>(ground.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) G(r, c) = normal(rng);
  }
  Eigen::MatrixXd S = G * G.transpose() + ridge * Eigen::MatrixXd::Identity(n, n);
  S = (0.5 * (S + S.transpose())).eval();
  return FloatCovariance(ground, std::move(S));
}

FloatCovariance sample_pd(std::size_t n, const SamplerConfig& config) {
  auto rng = trial_rng(config.seed, 0);
  return sample_pd(GroundSet::standard(n), rng, config.ridge);
}

namespace {

// Sigma = L L^T with L lower triangular, diag(L) = exp(theta).
class CholeskyParam {
 public:
  explicit CholeskyParam(Eigen::Index n) : n_(n) {}

  Eigen::Index size() const { return n_ * (n_ + 1) / 2; }

  Eigen::VectorXd from_matrix(const Eigen::MatrixXd& S) const {
    Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(S).matrixL();
    Eigen::VectorXd theta(size());
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < n_; ++r) {
      for (Eigen::Index c = 0; c <= r; ++c) theta(k++) = r == c ? std::log(L(r, r)) : L(r, c);
    }
    return theta;
  }

  Eigen::MatrixXd to_matrix(const Eigen::VectorXd& theta) const {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n_, n_);
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < n_; ++r) {
      for (Eigen::Index c = 0; c <= r; ++c) L(r, c) = r == c ? std::exp(theta(k++)) : theta(k++);
    }
    Eigen::MatrixXd S = L * L.transpose();
    return 0.5 * (S + S.transpose());
  }

 private:
  Eigen::Index n_;
};

Eigen::VectorXd residuals(const Eigen::MatrixXd& S, const std::vector<MinorIndex>& eqs) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(eqs.size()));
  for (std::size_t e = 0; e < eqs.size(); ++e) r(static_cast<Eigen::Index>(e)) = scaled_minor(S, eqs[e].rows, eqs[e].cols);
  return r;
}

struct SolveResult {
  Eigen::MatrixXd sigma;
  std::size_t iterations = 0;
  bool converged = false;
};

SolveResult gauss_newton(Eigen::VectorXd theta, const CholeskyParam& param, const std::vector<MinorIndex>& eqs,
                         const SamplerConfig& config) {
  SolveResult out;
  const double target = config.eps_eq / 10;
  Eigen::VectorXd r = residuals(param.to_matrix(theta), eqs);
  for (; out.iterations < config.max_iterations; ++out.iterations) {
    if (r.size() == 0 || r.lpNorm<Eigen::Infinity>() <= target) {
      out.converged = true;
      break;
    }
    Eigen::MatrixXd J(r.size(), param.size());
    for (Eigen::Index p = 0; p < param.size(); ++p) {
      const double h = 1e-7 * std::max(1.0, std::abs(theta(p)));
      Eigen::VectorXd shifted = theta;
      shifted(p) += h;
      J.col(p) = (residuals(param.to_matrix(shifted), eqs) - r) / h;
    }
    const Eigen::VectorXd delta = J.completeOrthogonalDecomposition().solve(-r);
    const double f0 = r.squaredNorm();
    double t = 1.0;
    bool improved = false;
    while (t >= config.min_step) {
      const Eigen::VectorXd candidate = theta + t * delta;
      const Eigen::VectorXd rc = residuals(param.to_matrix(candidate), eqs);
      if (rc.allFinite() && rc.squaredNorm() < f0) {
        theta = candidate;
        r = rc;
        improved = true;
        break;
      }
      t /= 2;
    }
    if (!improved) break;
  }
  if (!out.converged && (r.size() == 0 || r.lpNorm<Eigen::Infinity>() <= target)) out.converged = true;
  out.sigma = param.to_matrix(theta);
  return out;
}

}  // namespace

SampleReport sample_model(const CIModelSpec& spec, const SamplerConfig& config) {
  spec.validate();
  config.validate();
  SampleReport rep;
  rep.spec = spec;
  rep.config = config;
  const GroundSet& g = spec.ground;
  const CholeskyParam param(static_cast<Eigen::Index>(g.size()));
  std::vector<MinorIndex> eqs;
  for (const auto& s : spec.independences) eqs.push_back(apm_index(g, s));

  for (std::size_t trial = 0; trial < config.budget && rep.accepted.size() < config.samples; ++trial) {
    ++rep.attempts;
    auto rng = trial_rng(config.seed, trial);
    const FloatCovariance start = sample_pd(g, rng, config.ridge);
    SolveResult solved = g.size() == 0 ? SolveResult{start.matrix, 0, true}
                                       : gauss_newton(param.from_matrix(start.matrix), param, eqs, config);
    if (!solved.converged) {
      ++rep.not_converged;
      continue;
    }
    // Independent re-check on the final matrix.
    FloatCovariance sigma(g, std::move(solved.sigma));
    if (!sigma.cholesky_ok()) {
      ++rep.not_pd;
      continue;
    }
    // Strict positivity gets the same numeric margin as a dependence.
    double min_principal = INFINITY;
    for (const auto& K : g.subsets(g.labels())) {
      if (!K.empty()) min_principal = std::min(min_principal, sigma.normalized_principal(K));
    }
    if (g.size() > 0 && !(min_principal >= config.eps_dep)) {
      ++rep.not_pd;
      continue;
    }
    AcceptedSample s{sigma, trial, solved.iterations, min_principal, {}, {}};
    bool ok = true;
    for (const auto& st : spec.independences) {
      const double v = sigma.normalized_apm(st);
      s.independence_residuals.push_back(v);
      if (!(std::abs(v) <= config.eps_eq)) ok = false;
    }
    if (!ok) {
      ++rep.not_converged;
      continue;
    }
    for (const auto& st : spec.dependences) {
      const double v = sigma.normalized_apm(st);
      s.dependence_values.push_back(v);
      if (!(std::abs(v) >= config.eps_dep)) ok = false;
    }
    if (!ok) {
      ++rep.dependence_failed;
      continue;
    }
    rep.accepted.push_back(std::move(s));
  }
  rep.budget_exhausted = rep.accepted.size() < config.samples;
  if (rep.accepted.empty()) {
    rep.diagnostics = "no sample accepted in " + std::to_string(rep.attempts) + " attempts (" +
                      std::to_string(rep.not_converged) + " not converged, " + std::to_string(rep.dependence_failed) +
                      " violated a dependence, " + std::to_string(rep.not_pd) + " not positive definite)";
  }
  return rep;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

nlohmann::json to_json(const SampleReport& report) {
  nlohmann::json j;
  j["spec"] = to_json(report.spec);
  j["config"] = to_json(report.config);
  auto acc = nlohmann::json::array();
  for (const auto& s : report.accepted) {
    acc.push_back({{"trial", s.trial},
                   {"iterations", s.iterations},
                   {"min_normalized_principal_minor", s.min_principal},
                   {"matrix", matrix_json(s.sigma.matrix)},
                   {"independence_residuals", s.independence_residuals},
                   {"dependence_values", s.dependence_values}});
  }
  j["accepted"] = acc;
  j["attempts"] = report.attempts;
  j["rejected"] = {{"not_converged", report.not_converged},
                   {"dependence_failed", report.dependence_failed},
                   {"not_positive_definite", report.not_pd}};
  j["budget_exhausted"] = report.budget_exhausted;
  if (!report.diagnostics.empty()) j["diagnostics"] = report.diagnostics;
  return j;
}

std::optional<AcceptedSample> search_counterexample(const InferenceFormula& phi, const GroundSet& ground,
                                                    SamplerConfig config) {
  config.samples = 1;
  SampleReport rep = sample_model(counterexample_model(phi, ground), config);
  if (rep.accepted.empty()) return std::nullopt;
  return std::move(rep.accepted.front());
}

ScreenStatistics screen_candidate(const Polynomial& f, const CIModelSpec& spec, const SamplerConfig& config) {
  validate_bracket_polynomial(f, spec.ground);
  const Polynomial sigma_poly = bracket_eval(f, spec.ground);
  const SampleReport rep = sample_model(spec, config);
  ScreenStatistics st;
  if (rep.accepted.empty()) return st;
  st.available = true;
  st.samples = rep.accepted.size();
  st.min_relative = INFINITY;
  const GroundSet& g = spec.ground;
  for (const auto& s : rep.accepted) {
    std::map<std::string, double> values;
    for (std::size_t a = 0; a < g.size(); ++a) {
      for (std::size_t b = a; b < g.size(); ++b) {
        values[sigma_name(g, g[a], g[b])] =
            s.sigma.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
    }
    std::map<std::string, double> bounds;
    for (std::size_t a = 0; a < g.size(); ++a) {
      for (std::size_t b = a; b < g.size(); ++b) {
        bounds[sigma_name(g, g[a], g[b])] = std::sqrt(values.at(sigma_name(g, g[a], g[a])) *
                                                      values.at(sigma_name(g, g[b], g[b])));
      }
    }
    auto lookup = [&](const std::string& v) { return values.at(v); };
    auto bound = [&](const std::string& v) { return bounds.at(v); };
    const double value = std::abs(sigma_poly.evaluate(lookup));
    const double scale = sigma_poly.term_magnitude(bound);
    const double rel = scale > 0 ? value / scale : 0.0;
    st.max_abs = std::max(st.max_abs, value);
    st.mean_abs += value;
    st.max_relative = std::max(st.max_relative, rel);
    st.min_relative = std::min(st.min_relative, rel);
    st.mean_relative += rel;
  }
  st.mean_abs /= static_cast<double>(st.samples);
  st.mean_relative /= static_cast<double>(st.samples);
  return st;
}

nlohmann::json to_json(const ScreenStatistics& s) {
  if (!s.available) return {{"available", false}};
  return {{"available", true},         {"samples", s.samples},          {"max_abs", s.max_abs},
          {"mean_abs", s.mean_abs},    {"max_relative", s.max_relative}, {"mean_relative", s.mean_relative},
          {"min_relative", s.min_relative}};
}

// ------------------------------------------------------------------- Pappus

double normalized_bracket(const Point3& p, const Point3& q, const Point3& r) {
  const double scale = p.norm() * q.norm() * r.norm();
  if (scale == 0) return 0;
  Eigen::Matrix3d m;
  m << p, q, r;
  return std::abs(m.determinant()) / scale;
}

PappusConfiguration pappus_construct(const Point3& a, const Point3& b, const Point3& c, const Point3& d,
                                     const Point3& e, const Point3& f) {
  auto meet = [](const Point3& p, const Point3& q, const Point3& r, const Point3& s) {
    Point3 x = p.cross(q).cross(r.cross(s));
    const double n = x.norm();
    return n > 0 ? Point3(x / n) : x;
  };
  return {{a, b, c, d, e, f, meet(a, e, b, d), meet(a, f, c, d), meet(b, f, c, e)}};
}

PappusTrial evaluate_pappus(const PappusConfiguration& cfg, double degeneracy_threshold) {
  const auto& P = cfg.points;
  enum { a, b, c, d, e, f, g, h, i };
  static constexpr int kNondegenerate[19][3] = {
      {a, d, i}, {a, b, d}, {a, c, i}, {a, d, e}, {a, g, i}, {a, d, h}, {a, f, i}, {d, e, i}, {a, d, f}, {d, e, i},
      {a, d, f}, {d, h, i}, {a, c, d}, {b, d, i}, {a, d, g}, {a, b, i}, {d, f, i}, {a, e, i}, {c, d, i}};
  PappusTrial t;
  t.min_nondegeneracy = INFINITY;
  for (const auto& br : kNondegenerate) {
    t.min_nondegeneracy = std::min(t.min_nondegeneracy, normalized_bracket(P[br[0]], P[br[1]], P[br[2]]));
  }
  t.degenerate = !(t.min_nondegeneracy > degeneracy_threshold);
  t.ghi = normalized_bracket(P[g], P[h], P[i]);
  return t;
}

PappusStatistics pappus_check(std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw DomainError("pappus_check needs at least one trial");
  PappusStatistics st;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, t);
    auto point = [&]() { return Point3(normal(rng), normal(rng), normal(rng)); };
    const Point3 p1 = point(), q1 = point(), p2 = point(), q2 = point();
    const double s = normal(rng), u = normal(rng);
    const PappusConfiguration cfg = pappus_construct(p1, q1, s * p1 + (1 - s) * q1, p2, q2, u * p2 + (1 - u) * q2);
    ++st.trials;
    st.max_input_collinearity = std::max({st.max_input_collinearity,
                                          normalized_bracket(cfg.points[0], cfg.points[1], cfg.points[2]),
                                          normalized_bracket(cfg.points[3], cfg.points[4], cfg.points[5])});
    const PappusTrial r = evaluate_pappus(cfg);
    if (r.degenerate) {
      ++st.degenerate;
      continue;
    }
    st.max_ghi = std::max(st.max_ghi, r.ghi);
  }
  return st;
}

nlohmann::json to_json(const PappusStatistics& s) {
  return {{"trials", s.trials},
          {"degenerate", s.degenerate},
          {"max_normalized_ghi", s.max_ghi},
          {"max_input_collinearity", s.max_input_collinearity}};
}

}  // namespace gci
