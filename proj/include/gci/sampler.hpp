#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gci/ci.hpp"

namespace gci {

struct FloatCovariance {
  GroundSet ground;
  Eigen::MatrixXd matrix;

  // Throws DomainError unless square, matching and symmetric.
  FloatCovariance(GroundSet g, Eigen::MatrixXd m);

  bool cholesky_ok() const;
  // Minors of the correlation matrix, i.e. divided by the diagonal scales.
  double normalized_apm(const CIStatement& s) const;
  double normalized_principal(const LabelSet& K) const;
};

struct SamplerConfig {
  std::uint64_t seed = 1;
  double eps_eq = 1e-10;    // |normalized apm| of an independence
  double eps_dep = 1e-4;    // |normalized apm| of a dependence
  std::size_t max_iterations = 60;  // Gauss-Newton steps per attempt
  double min_step = 1e-10;          // line-search floor
  double ridge = 1e-3;              // delta in G G^T + delta I
  std::size_t budget = 10000;       // attempts
  std::size_t samples = 1;          // stop after this many accepted

  // Throws DomainError unless 0 < eps_eq < eps_dep and budgets are positive.
  void validate() const;
};

nlohmann::json to_json(const SamplerConfig& c);
// Missing keys keep their defaults. Throws FormatError.
SamplerConfig sampler_config_from_json(const nlohmann::json& j);

// Generator for attempt `trial`, derived from (seed, trial) only.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

// G G^T + ridge*I with standard normal G.
FloatCovariance sample_pd(const GroundSet& ground, std::mt19937_64& rng, double ridge);
FloatCovariance sample_pd(std::size_t n, const SamplerConfig& config);

struct AcceptedSample {
  FloatCovariance sigma;
  std::size_t trial = 0;
  std::size_t iterations = 0;
  double min_principal = 0;                    // smallest normalized principal minor
  std::vector<double> independence_residuals;  // normalized, per independence
  std::vector<double> dependence_values;       // normalized, per dependence
};

struct SampleReport {
  CIModelSpec spec;
  SamplerConfig config;
  std::vector<AcceptedSample> accepted;
  std::size_t attempts = 0;
  std::size_t not_converged = 0;
  std::size_t dependence_failed = 0;
  std::size_t not_pd = 0;
  bool budget_exhausted = false;
  std::string diagnostics;
};

// Minimizes the squared independence minors over the Cholesky factor (with
// log-diagonal, so every iterate is PD) from sample_pd starts, then re-checks
// every contract on the resulting matrix. The distribution of accepted
// samples is whatever the optimizer induces; it is not uniform. Positive
// definiteness is accepted only with every normalized principal minor at
// least eps_dep.
SampleReport sample_model(const CIModelSpec& spec, const SamplerConfig& config);

nlohmann::json to_json(const SampleReport& report);

// Numerical evidence only: the first accepted sample of M(phi), if any.
std::optional<AcceptedSample> search_counterexample(const InferenceFormula& phi, const GroundSet& ground,
                                                    SamplerConfig config);

struct ScreenStatistics {
  bool available = false;
  std::size_t samples = 0;
  double max_abs = 0, mean_abs = 0;
  // |f| / sum |terms|, each |sigma_ab| in the terms bounded by sqrt(sigma_aa sigma_bb)
  double max_relative = 0, mean_relative = 0, min_relative = 0;
};

// Evaluates the bracket polynomial f on samples of the model.
ScreenStatistics screen_candidate(const Polynomial& f, const CIModelSpec& spec, const SamplerConfig& config);
nlohmann::json to_json(const ScreenStatistics& s);

// --------------------------------------------------------------- Pappus

using Point3 = Eigen::Vector3d;

// a..i as homogeneous coordinates.
struct PappusConfiguration {
  std::array<Point3, 9> points;
};

// |det(p q r)| / (|p| |q| |r|)
double normalized_bracket(const Point3& p, const Point3& q, const Point3& r);

// g = ae.bd, h = af.cd, i = bf.ce for a,b,c and d,e,f on two lines.
PappusConfiguration pappus_construct(const Point3& a, const Point3& b, const Point3& c, const Point3& d,
                                     const Point3& e, const Point3& f);

struct PappusTrial {
  bool degenerate = false;
  double ghi = 0;                  // normalized [ghi]
  double min_nondegeneracy = 0;    // smallest of the 19 normalized brackets
};

PappusTrial evaluate_pappus(const PappusConfiguration& cfg, double degeneracy_threshold = 1e-8);

struct PappusStatistics {
  std::size_t trials = 0;
  std::size_t degenerate = 0;
  double max_ghi = 0;           // over non-degenerate trials
  double max_input_collinearity = 0;  // normalized [abc] and [def]
};

PappusStatistics pappus_check(std::size_t trials, std::uint64_t seed);
nlohmann::json to_json(const PappusStatistics& s);

}  // namespace gci
