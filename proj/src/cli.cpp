#include "gci/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "gci/algnum.hpp"
#include "gci/axioms.hpp"
#include "gci/certify.hpp"
#include "gci/ci.hpp"
#include "gci/sampler.hpp"

#ifndef GCI_DEFAULT_DATA_DIR
#define GCI_DEFAULT_DATA_DIR "data"
#endif

namespace gci::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// "", "∅", "k,l", "kl" (single-character labels) or a single label.
LabelSet parse_labels(std::string_view text, const GroundSet& g) {
  const std::string t = trim(text);
  if (t.empty() || t == "∅") return {};
  LabelSet out;
  if (t.find(',') != std::string::npos) {
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
  } else if (g.contains(t)) {
    out.push_back(t);
  } else {
    for (char c : t) out.emplace_back(1, c);
  }
  for (const auto& l : out) {
    if (!g.contains(l)) throw FormatError("unknown label '" + l + "'");
  }
  return out;
}

std::optional<std::size_t> env_budget() {
  const char* v = std::getenv("GCI_BUDGET");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) throw UsageError("GCI_BUDGET must be a positive integer");
  return static_cast<std::size_t>(n);
}

fs::path data_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* v = std::getenv("GCI_DATA_DIR"); v != nullptr && *v != '\0') return v;
  return GCI_DEFAULT_DATA_DIR;
}

// A formula given inline or as a file holding one formula.
std::string formula_text(const std::string& arg) {
  std::error_code ec;
  if (!fs::is_regular_file(arg, ec)) return arg;
  std::stringstream ss(read_file(arg));
  std::string line;
  while (std::getline(ss, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!trim(line).empty()) return line;
  }
  throw FormatError(arg + ": no formula found");
}

nlohmann::json float_matrix_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

void print_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << "\n"; }

// ------------------------------------------------------------------ minor

struct MinorArgs {
  std::string matrix;
  std::size_t symbolic = 0;
  std::optional<std::string> principal;
  std::vector<std::string> apm;
};

int cmd_minor(const MinorArgs& a, bool json, std::ostream& out) {
  if (a.matrix.empty() == (a.symbolic == 0)) throw UsageError("give exactly one of a matrix file or --symbolic n");
  if (a.principal.has_value() == !a.apm.empty()) throw UsageError("give exactly one of --principal or --apm");
  if (!a.apm.empty() && (a.apm.size() < 2 || a.apm.size() > 3)) throw UsageError("--apm takes i j [K]");

  auto compute = [&](const auto& sigma, auto render) {
    const GroundSet& g = sigma.ground_set();
    std::string name;
    std::string value;
    nlohmann::json extra;
    if (a.principal) {
      const LabelSet K = g.canonical(parse_labels(*a.principal, g));
      name = "[" + concat_labels(K) + "]";
      std::tie(value, extra) = render(principal_minor(sigma, K));
    } else {
      const LabelSet K = parse_labels(a.apm.size() == 3 ? a.apm[2] : "", g);
      if (!g.contains(a.apm[0]) || !g.contains(a.apm[1])) throw FormatError("unknown label in --apm");
      const CIStatement s = CIStatement::make(a.apm[0], a.apm[1], K);
      name = to_string(s, g);
      std::tie(value, extra) = render(almost_principal_minor(sigma, a.apm[0], a.apm[1], s.K));
    }
    if (json) {
      nlohmann::json j{{"minor", name}, {"value", value}};
      if (!extra.is_null()) j["polynomial"] = extra;
      print_json(out, j);
    } else {
      out << value << "\n";
    }
  };

  if (a.symbolic > 0) {
    if (a.symbolic > 26) throw UsageError("--symbolic supports at most 26 labels");
    compute(symbolic_covariance(GroundSet::standard(a.symbolic)), [](const Polynomial& p) {
      return std::make_pair(to_string(p), to_json(p));
    });
  } else {
    const FieldCovariance sigma = any_covariance_from_json(read_json(a.matrix));
    compute(sigma, [](const FieldElement& v) { return std::make_pair(to_string(v), nlohmann::json()); });
  }
  return kValid;
}

// ------------------------------------------------------------------ check

struct CheckArgs {
  std::string formula;
  std::string ground;
  std::string rules;
  std::optional<std::size_t> budget;
  std::uint64_t seed = 1;
  std::string data_dir;
};

FieldCovariance relabel(const FieldCovariance& w, const GroundSet& target, const std::vector<std::size_t>& perm) {
  // Witness label a becomes target label perm[a].
  const std::size_t n = w.size();
  std::vector<FieldElement> e(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) e[perm[r] * n + perm[c]] = w(r, c);
  }
  return FieldCovariance(target, std::move(e));
}

struct ExactWitness {
  std::string file;
  Permutation relabeling;
  CounterexampleReport report;
};

std::optional<ExactWitness> find_exact_witness(const InferenceFormula& phi, const GroundSet& ground,
                                               const fs::path& dir) {
  std::error_code ec;
  const fs::path wdir = dir / "witnesses";
  if (!fs::is_directory(wdir, ec) || ground.size() > 6) return std::nullopt;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(wdir, ec)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    FieldCovariance w;
    try {
      w = any_covariance_from_json(read_json(f.string()));
    } catch (const std::exception&) {
      continue;
    }
    if (w.size() != ground.size()) continue;
    std::vector<std::size_t> perm(ground.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      const FieldCovariance sigma = relabel(w, ground, perm);
      CounterexampleReport rep = verify_counterexample(sigma, phi);
      if (rep.confirmed) {
        Permutation pi;
        for (std::size_t a = 0; a < perm.size(); ++a) pi[w.ground_set()[a]] = ground[perm[a]];
        return ExactWitness{f.filename().string(), std::move(pi), std::move(rep)};
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return std::nullopt;
}


// Labels from "--ground i,j,k" (or "ijk" for single-character labels).
GroundSet ground_from_flag(const std::string& text) {
  const std::string t = trim(text);
  std::vector<Label> labels;
  if (t.find(',') != std::string::npos) {
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) labels.push_back(trim(item));
  } else {
    for (char c : t) labels.emplace_back(1, c);
  }
  try {
    return GroundSet(std::move(labels));
  } catch (const DomainError& e) {
    throw FormatError(std::string("--ground: ") + e.what());
  }
}

nlohmann::json sample_json(const AcceptedSample& s) {
  return {{"trial", s.trial},
          {"matrix", float_matrix_json(s.sigma.matrix)},
          {"independence_residuals", s.independence_residuals},
          {"dependence_values", s.dependence_values},
          {"min_normalized_principal_minor", s.min_principal}};
}

int cmd_check(const CheckArgs& a, bool json, std::ostream& out) {
  const std::string text = formula_text(a.formula);
  const GroundSet ground = a.ground.empty() ? infer_ground_set(text) : ground_from_flag(a.ground);
  const InferenceFormula phi = parse_formula(text, ground);

  RuleSet rules = RuleSet::builtins();
  if (!a.rules.empty()) rules.extend(RuleSet::parse(read_file(a.rules), fs::path(a.rules).filename().string()));

  SamplerConfig config;
  config.seed = a.seed;
  if (auto b = env_budget()) config.budget = *b;
  if (a.budget) config.budget = *a.budget;

  nlohmann::json j;
  j["formula"] = to_string(phi, ground);
  j["ground_set"] = ground.labels();
  nlohmann::json evidence;
  std::string status;

  const ProofResult proof = prove_by_rules(phi, ground, rules);
  if (proof.verdict == ProofResult::Verdict::proved) {
    status = "valid-by-rules";
    evidence["rules"] = proof.trace;
  } else if (auto cert = certify_with_builtins(phi, ground)) {
    status = "valid-certified";
    evidence["certificate"] = cert->certificate.name;
    evidence["certified_instance"] = to_string(cert->certified, ground);
  } else {
    if (proof.budget_exhausted) evidence["rules_budget_exhausted"] = true;
    const auto exact = find_exact_witness(phi, ground, data_dir(a.data_dir));
    if (exact) {
      nlohmann::json w;
      w["file"] = exact->file;
      w["relabeling"] = exact->relabeling;
      w["report"] = to_json(exact->report, ground);
      evidence["exact_witness"] = w;
    }
    const auto hit = search_counterexample(phi, ground, config);
    evidence["search"] = {{"seed", config.seed}, {"budget", config.budget}};
    if (hit) evidence["numeric_counterexample"] = sample_json(*hit);
    status = exact ? "falsified-exact" : hit ? "falsified-numeric" : "inconclusive";
  }
  j["status"] = status;
  j["evidence"] = evidence;

  if (json) {
    print_json(out, j);
  } else {
    out << "status: " << status << "\n";
    out << "formula: " << j["formula"].get<std::string>() << "\n";
    if (evidence.contains("rules")) {
      for (const auto& line : proof.trace) out << "  " << line << "\n";
    }
    if (evidence.contains("certificate")) {
      out << "certificate: " << evidence["certificate"].get<std::string>() << " for "
          << evidence["certified_instance"].get<std::string>() << "\n";
    }
    if (evidence.contains("exact_witness")) {
      out << "exact witness: " << evidence["exact_witness"]["file"].get<std::string>() << "\n";
    }
    if (evidence.contains("numeric_counterexample")) {
      out << "numeric counterexample (trial " << evidence["numeric_counterexample"]["trial"].get<std::size_t>()
          << "):\n";
      for (const auto& row : evidence["numeric_counterexample"]["matrix"]) out << "  " << row.dump() << "\n";
    }
    if (status == "inconclusive") {
      out << "no proof and no counterexample within budget " << config.budget << "\n";
    }
  }
  if (status.rfind("valid", 0) == 0) return kValid;
  if (status.rfind("falsified", 0) == 0) return kFalsified;
  return kInconclusive;
}

// ------------------------------------------------------------ verify-cert

int cmd_verify_cert(const std::string& file, bool json, std::ostream& out) {
  const FinalPolynomialCertificate cert = certificate_from_json(read_json(file));
  const CertificateVerdict v = verify_final_polynomial(cert);
  if (json) {
    nlohmann::json j{{"valid", v.valid}};
    if (!cert.name.empty()) j["name"] = cert.name;
    if (!v.valid) j["reason"] = v.reason;
    print_json(out, j);
  } else {
    out << (v.valid ? "valid" : "invalid: " + v.reason) << "\n";
  }
  return v.valid ? kValid : kFalsified;
}

// -------------------------------------------------------------- verify-cx

int cmd_verify_cx(const std::string& matrix, const std::string& formula, bool json, std::ostream& out) {
  const FieldCovariance sigma = any_covariance_from_json(read_json(matrix));
  const GroundSet& g = sigma.ground_set();
  const InferenceFormula phi = parse_formula(formula_text(formula), g);
  const CounterexampleReport rep = verify_counterexample(sigma, phi);
  if (json) {
    nlohmann::json j = to_json(rep, g);
    j["formula"] = to_string(phi, g);
    print_json(out, j);
  } else {
    out << (rep.confirmed ? "confirmed" : "refuted: " + rep.reason) << "\n";
    out << "positive definite: " << (rep.positive_definite ? "yes" : "no") << "\n";
    out << "principally regular: " << (rep.principally_regular ? "yes" : "no") << "\n";
    for (const auto& m : rep.principal_minors) out << "  " << m.what << " = " << to_string(m.value) << "\n";
    for (const auto& s : rep.statements) {
      out << "  " << (s.antecedent ? "antecedent " : "consequent ") << to_string(s.statement, g) << " = "
          << to_string(s.value) << (s.ok ? "" : "  (fails)") << "\n";
    }
    if (!rep.confirmed && rep.confirmed_principally_regular) {
      out << "counterexample under principal regularity only\n";
    }
  }
  return rep.confirmed ? kValid : kFalsified;
}

// ----------------------------------------------------------------- sample

struct SampleArgs {
  std::string spec;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget, samples;
  std::optional<double> eps_eq, eps_dep;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  const CIModelSpec spec = model_spec_from_json(read_json(a.spec));
  SamplerConfig config = a.config.empty() ? SamplerConfig{} : sampler_config_from_json(read_json(a.config));
  if (auto b = env_budget(); b && a.config.empty()) config.budget = *b;
  if (a.seed) config.seed = *a.seed;
  if (a.budget) config.budget = *a.budget;
  if (a.samples) config.samples = *a.samples;
  if (a.eps_eq) config.eps_eq = *a.eps_eq;
  if (a.eps_dep) config.eps_dep = *a.eps_dep;
  try {
    config.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  print_json(out, to_json(sample_model(spec, config)));
  return kValid;
}

// ---------------------------------------------------------------- closure

int cmd_closure(const std::string& file, const std::string& rules_file, bool json, std::ostream& out) {
  const CIStructure g = structure_from_json(read_json(file));
  RuleSet rules;
  rules.add(semigraphoid_half_rule());
  if (!rules_file.empty()) rules.extend(RuleSet::parse(read_file(rules_file), fs::path(rules_file).filename().string()));
  const CIStructure c = closure(g, rules);
  if (json) {
    print_json(out, to_json(c));
  } else {
    for (const auto& s : all_statements(c.ground)) {
      if (c.contains(s)) out << to_string(s, c.ground) << "\n";
    }
  }
  return kValid;
}

// ------------------------------------------------------------ export-cert

int cmd_export_cert(const std::string& name, const std::string& ground_flag, const std::string& output,
                    std::ostream& out) {
  const GroundSet ground = ground_flag.empty() ? GroundSet::standard(4) : ground_from_flag(ground_flag);
  const auto cert = find_builtin_certificate(name, ground);
  if (!cert) throw SemanticError("no built-in certificate named '" + name + "'");
  const std::string text = to_json(*cert).dump(1) + "\n";
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) throw FormatError("cannot write '" + output + "'");
    f << text;
  }
  return kValid;
}

// ----------------------------------------------------------------- pappus

int cmd_pappus(std::size_t trials, std::uint64_t seed, bool json, std::ostream& out) {
  if (trials == 0) throw UsageError("--trials must be positive");
  const PappusStatistics st = pappus_check(trials, seed);
  if (json) {
    print_json(out, to_json(st));
  } else {
    out << "trials: " << st.trials << "\ndegenerate: " << st.degenerate
        << "\nmax normalized [ghi]: " << st.max_ghi << "\n";
  }
  return kValid;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian conditional independence inference toolkit"};
  app.require_subcommand(1);
  bool json = false;
  std::string data_dir_flag;
  app.add_flag("--json", json, "Machine-readable output");

  MinorArgs minor;
  auto* m = app.add_subcommand("minor", "Print a principal or almost-principal minor");
  m->add_option("matrix", minor.matrix, "Matrix JSON file (rational or field)");
  m->add_option("--symbolic", minor.symbolic, "Symbolic n x n covariance matrix");
  m->add_option("--principal", minor.principal, "Labels K of [K]");
  m->add_option("--apm", minor.apm, "i j [K] of [ij|K]")->expected(2, 3);
  m->add_flag("--json", json);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Decide an inference formula: prove, certify or falsify");
  c->add_option("formula", check.formula, "Formula text or a file holding it")->required();
  c->add_option("--ground", check.ground, "Ground set labels, e.g. i,j,k,l");
  c->add_option("--rules", check.rules, "Extra inference rules, one per line");
  c->add_option("--budget", check.budget, "Counterexample search attempts");
  c->add_option("--seed", check.seed, "Random seed");
  c->add_option("--data-dir", data_dir_flag, "Directory with shipped witnesses");
  c->add_flag("--json", json);

  std::string cert_file;
  auto* vc = app.add_subcommand("verify-cert", "Verify a final-polynomial certificate");
  vc->add_option("certificate", cert_file)->required();
  vc->add_flag("--json", json);

  std::string cx_matrix, cx_formula;
  auto* vx = app.add_subcommand("verify-cx", "Verify an exact counterexample matrix");
  vx->add_option("matrix", cx_matrix)->required();
  vx->add_option("formula", cx_formula)->required();
  vx->add_flag("--json", json);

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "Sample positive definite points of a CI model");
  s->add_option("spec", sample.spec, "Model spec JSON file")->required();
  s->add_option("--config", sample.config, "Sampler config JSON file");
  s->add_option("--seed", sample.seed);
  s->add_option("--budget", sample.budget);
  s->add_option("--samples", sample.samples);
  s->add_option("--eps-eq", sample.eps_eq);
  s->add_option("--eps-dep", sample.eps_dep);
  s->add_flag("--json", json);

  std::string structure_file, closure_rules;
  auto* cl = app.add_subcommand("closure", "Close a CI structure under single-consequent rules");
  cl->add_option("structure", structure_file)->required();
  cl->add_option("--rules", closure_rules, "Extra inference rules, one per line");
  cl->add_flag("--json", json);

  std::string export_name, export_ground, export_output;
  auto* ex = app.add_subcommand("export-cert", "Write a built-in certificate as JSON");
  ex->add_option("name", export_name, "e.g. lm20, weak-transitivity(i,j,k,∅)")->required();
  ex->add_option("--ground", export_ground, "Ground set labels (default i,j,k,l)");
  ex->add_option("-o,--output", export_output);
  ex->add_flag("--json", json);

  std::size_t pappus_trials = 1000;
  std::uint64_t pappus_seed = 1;
  auto* pp = app.add_subcommand("pappus", "Constructive numeric check of Pappus's theorem");
  pp->add_option("--trials", pappus_trials);
  pp->add_option("--seed", pappus_seed);
  pp->add_flag("--json", json);

  std::vector<const char*> argv{"gci"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kValid : kUsage;
  }

  try {
    if (m->parsed()) return cmd_minor(minor, json, out);
    if (c->parsed()) {
      check.data_dir = data_dir_flag;
      return cmd_check(check, json, out);
    }
    if (vc->parsed()) return cmd_verify_cert(cert_file, json, out);
    if (vx->parsed()) return cmd_verify_cx(cx_matrix, cx_formula, json, out);
    if (s->parsed()) return cmd_sample(sample, out);
    if (cl->parsed()) return cmd_closure(structure_file, closure_rules, json, out);
    if (ex->parsed()) return cmd_export_cert(export_name, export_ground, export_output, out);
    if (pp->parsed()) return cmd_pappus(pappus_trials, pappus_seed, json, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const SemanticError& e) {
    err << "error: " << e.what() << "\n";
    return kSemantic;
  } catch (const FormatError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const DomainError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const nlohmann::json::exception& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kInconclusive;
  }
  return kUsage;
}

}  // namespace gci::cli
