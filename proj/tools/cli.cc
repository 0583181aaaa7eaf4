#include "cli.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "optele/bell.h"
#include "optele/kerr.h"
#include "optele/teleport.h"

namespace optele::cli {

using Json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kScenarios = {"bp-table", "balpha-table", "teleport", "sweep", "gen-hybrid", "gen-ecs"};

class ConfigFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// TOML by default; a file starting with '{' is read as JSON, either a flat
// object of option values or an emitted result whose "config" block is reused.
class TomlOrJsonConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
    const size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream ss(text);
      return CLI::ConfigTOML::from_config(ss);
    }
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::exception& e) {
      throw ConfigFileError(std::string("invalid JSON config: ") + e.what());
    }
    if (doc.contains("schema") && doc.contains("config")) doc = doc["config"];
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_null()) continue;
      if (value.is_object()) throw ConfigFileError("nested config key '" + key + "'");
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(key, v));
      } else {
        item.inputs.push_back(scalar(key, value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  static std::string scalar(const std::string& key, const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw ConfigFileError("unsupported value for config key '" + key + "'");
  }
};

struct Options {
  std::string scenario;
  uint64_t seed = 0;
  double tail_epsilon = 1e-12;
  std::string out;
  std::string format = "csv";
  uint64_t trials = 0;
  bool exact = false;
  bool ideal_z = false;
  std::string encoding = "hybrid";
  double alpha = 1.0;
  std::vector<double> alphas = {0.5, 1.0, 1.4, 2.0};
  double a = 1.0, a_im = 0.0, b = 0.0, b_im = 0.0;
  double gamma = 6.0;
  double beta = 1.0;
  std::string parity = "even";
  bool no_compensate = false;
  bool no_plate = false;
  bool diagonal = false;
};

Json resolved_config(const Options& o) {
  Json c;
  c["scenario"] = o.scenario;
  c["seed"] = o.seed;
  c["tail-epsilon"] = o.tail_epsilon;
  c["format"] = o.format;
  c["trials"] = o.trials;
  c["ideal-z"] = o.ideal_z;
  c["encoding"] = o.encoding;
  c["alpha"] = o.alpha;
  c["alphas"] = o.alphas;
  c["a"] = o.a;
  c["a-im"] = o.a_im;
  c["b"] = o.b;
  c["b-im"] = o.b_im;
  c["gamma"] = o.gamma;
  c["beta"] = o.beta;
  c["parity"] = o.parity;
  c["no-compensate"] = o.no_compensate;
  c["no-plate"] = o.no_plate;
  c["diagonal"] = o.diagonal;
  return c;
}

struct Result {
  Table table;
  Json summary = Json::object();
  std::vector<std::string> human;
};

CutoffPolicy policy_of(const Options& o) {
  CutoffPolicy p;
  p.tail_epsilon = o.tail_epsilon;
  return p;
}

bool sampled(const Options& o) { return o.trials > 0 && !o.exact; }

std::string fmt(double x) { return format_number(x); }

std::string ff_string(const std::optional<FeedForward>& ff) {
  if (!ff) return "none";
  return "X^" + std::to_string(ff->j) + " Z^" + std::to_string(ff->k);
}

// Sampled frequencies of the records of `dist` with a per-group seed.
std::vector<double> sample_frequencies(const OutcomeDistribution& dist, uint64_t seed, uint64_t trials) {
  std::vector<double> counts(dist.records.size(), 0.0);
  for (uint64_t t = 0; t < trials; ++t) counts[sample_index(dist, derive_seed(seed, t))] += 1.0;
  for (auto& c : counts) c /= double(trials);
  return counts;
}

Result bp_table(const Options& o) {
  Result r;
  const BpConfig config{!o.no_plate};
  r.table.columns = {"input", "outcome", "classification", "probability"};
  if (sampled(o)) r.table.columns.push_back("sampled_frequency");
  double uniform_success = 0.0;
  Json per_input = Json::object();
  for (size_t i = 0; i < 4; ++i) {
    const BellIndex input = kAllBell[i];
    auto branches = run_b_p(make_polarization_bell(input), {"p1"}, {"p2"}, config);
    OutcomeDistribution dist;
    for (const auto& b : branches) dist.records.push_back({{}, b.probability, {}});
    std::vector<double> freq;
    if (sampled(o)) freq = sample_frequencies(dist, derive_seed(o.seed, i), o.trials);
    double success = 0.0, total = 0.0;
    for (size_t k = 0; k < branches.size(); ++k) {
      const auto& b = branches[k];
      std::vector<Cell> row = {to_string(input), to_string(b.label), to_string(b.classification), b.probability};
      if (sampled(o)) row.push_back(freq[k]);
      r.table.rows.push_back(std::move(row));
      total += b.probability;
      if (b.classification != BellClass::kFail) success += b.probability;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvariantViolation("B_P branch probabilities do not sum to 1");
    per_input[to_string(input)] = success;
    uniform_success += success / 4;
  }
  r.summary["plate_90"] = config.plate_90;
  r.summary["success_by_input"] = per_input;
  r.summary["uniform_prior_success"] = uniform_success;
  r.summary["uniform_prior_success_analytic"] = 0.5;
  r.human.push_back(std::string("B_P ") + (config.plate_90 ? "with" : "without") + " 90-degree plate");
  for (const auto& [name, p] : per_input.items()) r.human.push_back("  " + name + ": success " + fmt(p.get<double>()));
  r.human.push_back("  uniform-prior success " + fmt(uniform_success) + " (analytic 0.5)");
  return r;
}

Result balpha_table(const Options& o) {
  Result r;
  EncodingParams params{Encoding::kCoherent, o.alpha, policy_of(o)};
  r.table.columns = {"input", "outcome", "classification", "probability"};
  if (sampled(o)) r.table.columns.push_back("sampled_frequency");
  Json fail = Json::object();
  for (size_t i = 0; i < 4; ++i) {
    const BellIndex input = kAllBell[i];
    auto branches = run_b_alpha(make_coherent_bell(input, params), "f1", "f2");
    OutcomeDistribution dist;
    for (const auto& b : branches) dist.records.push_back({{}, b.probability, {}});
    std::vector<double> freq;
    if (sampled(o)) freq = sample_frequencies(dist, derive_seed(o.seed, i), o.trials);
    double p_fail = 0.0, total = 0.0;
    for (size_t k = 0; k < branches.size(); ++k) {
      const auto& b = branches[k];
      std::vector<Cell> row = {to_string(input), to_string(b.pattern), to_string(b.classification), b.probability};
      if (sampled(o)) row.push_back(freq[k]);
      r.table.rows.push_back(std::move(row));
      total += b.probability;
      if (b.classification == BellClass::kFail) p_fail += b.probability;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvariantViolation("B_alpha branch probabilities do not sum to 1");
    fail[to_string(input)] = p_fail;
  }
  const double e2 = std::exp(-2 * o.alpha * o.alpha);
  const double analytic = 2 * e2 / (1 + e2 * e2);
  r.summary["alpha"] = o.alpha;
  r.summary["cutoff_used"] = params.field_cutoff();
  r.summary["fail_by_input"] = fail;
  r.summary["fail_phi_plus_analytic"] = analytic;
  r.human.push_back("B_alpha at alpha = " + fmt(o.alpha));
  for (const auto& [name, p] : fail.items()) r.human.push_back("  " + name + ": fail " + fmt(p.get<double>()));
  r.human.push_back("  analytic P(fail | Phi+) = Psi+ = 2e^{-2a^2}/(1+e^{-4a^2}) = " + fmt(analytic));
  return r;
}

TeleportConfig teleport_config(const Options& o, double alpha, uint64_t seed) {
  TeleportConfig c;
  c.encoding = encoding_from_string(o.encoding);
  c.alpha = alpha;
  c.amps = LogicalAmplitudes::normalized({o.a, o.a_im}, {o.b, o.b_im});
  c.ideal_z = o.ideal_z;
  c.policy = policy_of(o);
  if (sampled(o)) c.sampled = SamplingMode{seed, o.trials};
  return c;
}

Result teleport_scenario(const Options& o) {
  Result r;
  const TeleportConfig config = teleport_config(o, o.alpha, o.seed);
  const Metrics m = teleport(config);
  r.table.columns = {"outcome", "classification", "feedforward", "status", "probability", "fidelity"};
  double total = 0.0;
  for (const auto& b : m.branches) {
    Cell f;
    if (b.fidelity_to_input) f = *b.fidelity_to_input;
    r.table.rows.push_back({b.outcome, b.classification, ff_string(b.feedforward), to_string(b.status), b.probability, f});
    total += b.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvariantViolation("teleportation branch probabilities do not sum to 1");
  const double dev = std::abs(m.success_probability - m.analytic_success_probability);
  Json& s = r.summary;
  s["encoding"] = to_string(m.encoding);
  s["alpha"] = m.alpha;
  s["a"] = {config.amps.a.real(), config.amps.a.imag()};
  s["b"] = {config.amps.b.real(), config.amps.b.imag()};
  s["p_success_sim"] = m.success_probability;
  s["p_success_exact"] = m.exact_success_probability;
  s["p_success_analytic"] = m.analytic_success_probability;
  s["abs_dev"] = dev;
  s["p_bsm_success"] = m.bsm_success_probability;
  s["mean_fidelity_success"] = m.mean_fidelity_on_success;
  s["min_fidelity_success"] = m.min_fidelity_on_success;
  s["cutoff_used"] = m.cutoff_used;
  s["discarded_weight"] = m.discarded_weight;
  s["trials"] = m.trials;
  r.human.push_back("teleport " + to_string(m.encoding) + " alpha = " + fmt(m.alpha) +
                    (m.trials ? " (sampled, " + std::to_string(m.trials) + " trials)" : " (exact)"));
  r.human.push_back("  P_s simulated " + fmt(m.success_probability) + ", analytic " +
                    fmt(m.analytic_success_probability) + ", |dev| " + fmt(dev));
  if (m.encoding == Encoding::kCoherent) r.human.push_back("  BSM success " + fmt(m.bsm_success_probability));
  r.human.push_back("  mean fidelity on success " + fmt(m.mean_fidelity_on_success) + ", min " +
                    fmt(m.min_fidelity_on_success));
  return r;
}

Result sweep_scenario(const Options& o) {
  Result r;
  TeleportConfig base = teleport_config(o, o.alphas.empty() ? 0.0 : o.alphas.front(), o.seed);
  // Rows get distinct sampling seeds.
  std::vector<SweepRow> rows;
  if (sampled(o)) {
    for (size_t i = 0; i < o.alphas.size(); ++i) {
      if (i > 0 && !(o.alphas[i] > o.alphas[i - 1])) throw std::invalid_argument("alpha grid must be strictly ascending");
      TeleportConfig c = teleport_config(o, o.alphas[i], derive_seed(o.seed, i));
      SweepResult one = sweep_alpha(c, {o.alphas[i]});
      rows.push_back(std::move(one.rows.front()));
    }
  } else {
    rows = sweep_alpha(base, o.alphas).rows;
  }
  r.table.columns = {"alpha", "p_success_sim", "p_success_analytic", "abs_dev", "mean_fidelity_success", "cutoff_used"};
  double max_dev = 0.0;
  r.human.push_back("sweep " + o.encoding + (sampled(o) ? " (sampled)" : " (exact)"));
  r.human.push_back("  alpha         simulated        analytic         |dev|");
  for (const auto& row : rows) {
    r.table.rows.push_back({row.alpha, row.metrics.success_probability, row.analytic, row.abs_dev,
                            row.metrics.mean_fidelity_on_success, int64_t(row.metrics.cutoff_used)});
    max_dev = std::max(max_dev, row.abs_dev);
    char line[160];
    std::snprintf(line, sizeof line, "  %-12s  %-15s  %-15s  %s", fmt(row.alpha).c_str(),
                  fmt(row.metrics.success_probability).c_str(), fmt(row.analytic).c_str(), fmt(row.abs_dev).c_str());
    r.human.push_back(line);
  }
  r.summary["encoding"] = o.encoding;
  r.summary["max_abs_dev"] = max_dev;
  if (o.encoding == "hybrid") r.human.push_back("  analytic curve: P_s = 1 - e^{-2 alpha^2}/2");
  if (o.encoding == "polarization") r.human.push_back("  analytic curve: P_s = 1/2");
  r.human.push_back("  max |dev| " + fmt(max_dev));
  return r;
}

Result gen_hybrid(const Options& o) {
  Result r;
  const KerrGenParams params = KerrGenParams::from_constraint(o.alpha, o.gamma);
  const HybridPairOptions opts{!o.no_compensate, o.diagonal};
  const PureState s = generate_hybrid_pair(params, policy_of(o), opts);
  const unsigned cutoff = s.layout()[2].cutoff;
  const double f = fidelity(s.normalized(), canonical_hybrid_pair(o.alpha, cutoff, o.diagonal));
  const double c = std::cos(o.gamma * o.alpha);
  const double oracle = opts.compensate ? 1.0 : c * c;
  r.table.columns = {"alpha", "gamma", "theta", "rotation_mismatch", "cutoff_used", "norm", "fidelity",
                     "fidelity_oracle"};
  r.table.rows.push_back({o.alpha, o.gamma, params.theta, rotation_exactness_check(params), int64_t(cutoff),
                          s.norm(), f, oracle});
  r.summary["compensate"] = opts.compensate;
  r.summary["diagonal_basis"] = opts.diagonal_basis;
  r.summary["abs_dev"] = std::abs(f - oracle);
  r.human.push_back("hybrid pair via cross-Kerr: alpha = " + fmt(o.alpha) + ", gamma = " + fmt(o.gamma) +
                    ", theta = " + fmt(params.theta));
  r.human.push_back("  fidelity to (|H>|a> + |V>|-a>)/sqrt2: " + fmt(f) + " (expected " + fmt(oracle) + ")");
  return r;
}

Result gen_ecs(const Options& o) {
  Result r;
  const Parity parity = o.parity == "odd" ? Parity::kOdd : Parity::kEven;
  const PureState s = generate_ecs_via_bs(o.beta, parity, policy_of(o));
  r.table.columns = {"beta", "parity", "cutoff_used", "norm", "fidelity"};
  Cell f;
  if (o.beta > 0) {
    EncodingParams params{Encoding::kCoherent, o.beta, policy_of(o)};
    f = fidelity(s.normalized(), make_coherent_bell(parity == Parity::kEven ? kPhiPlus : kPhiMinus, params));
  }
  r.table.rows.push_back({o.beta, o.parity, int64_t(s.layout()[0].cutoff), s.norm(), f});
  r.human.push_back("ECS from splitting an SCS: beta = " + fmt(o.beta) + ", parity " + o.parity);
  if (o.beta > 0) r.human.push_back("  fidelity to the coherent Bell state: " + fmt(std::get<double>(f)));
  return r;
}

bool bounded_column(const std::string& name) {
  return name.find("probability") != std::string::npos || name.rfind("p_", 0) == 0 ||
         name.find("fidelity") != std::string::npos || name.find("frequency") != std::string::npos;
}

void check_table(const Table& t) {
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw InvariantViolation("row width does not match the header");
    for (size_t i = 0; i < row.size(); ++i) {
      const double* x = std::get_if<double>(&row[i]);
      if (!x) continue;
      if (!std::isfinite(*x)) throw InvariantViolation("non-finite value in column '" + t.columns[i] + "'");
      if (bounded_column(t.columns[i]) && (*x < -1e-12 || *x > 1 + 1e-12)) {
        throw InvariantViolation("column '" + t.columns[i] + "' out of [0, 1]: " + format_number(*x));
      }
    }
  }
}

Json cell_json(const Cell& c) {
  if (const double* x = std::get_if<double>(&c)) return std::strtod(format_number(*x).c_str(), nullptr);
  if (const int64_t* n = std::get_if<int64_t>(&c)) return *n;
  if (const std::string* s = std::get_if<std::string>(&c)) return *s;
  return nullptr;
}

// Summary numbers are rounded like the table cells.
Json rounded(const Json& j) {
  if (j.is_number_float()) return std::strtod(format_number(j.get<double>()).c_str(), nullptr);
  if (j.is_structured()) {
    Json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = rounded(*it);
    return out;
  }
  return j;
}

void write_json(std::ostream& os, const Options& o, const Result& r) {
  Json doc;
  doc["schema"] = 1;
  doc["scenario"] = o.scenario;
  doc["seed"] = o.seed;
  doc["tail_epsilon"] = o.tail_epsilon;
  doc["config"] = resolved_config(o);
  doc["columns"] = r.table.columns;
  Json rows = Json::array();
  for (const auto& row : r.table.rows) {
    Json obj;
    for (size_t i = 0; i < row.size(); ++i) obj[r.table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  doc["summary"] = rounded(r.summary);
  os << doc.dump(2) << '\n';
}

std::string csv_field(const Cell& c) {
  if (const double* x = std::get_if<double>(&c)) return format_number(*x);
  if (const int64_t* n = std::get_if<int64_t>(&c)) return std::to_string(*n);
  if (const std::string* s = std::get_if<std::string>(&c)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string q = "\"";
    for (char ch : *s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return "";
}

void add_options(CLI::App& app, Options& o) {
  app.add_option("--scenario", o.scenario, "Scenario (alternative to the subcommand, for config files)")
      ->check(CLI::IsMember(kScenarios));
  app.add_option("--seed", o.seed, "Base seed for sampled mode");
  app.add_option("--tail-epsilon", o.tail_epsilon, "Neglected coherent-state tail mass per mode")
      ->check(CLI::Range(1e-300, 1e-2));
  app.add_option("--out", o.out, "Write the payload to this path instead of stdout");
  app.add_option("--format", o.format, "Payload format")->check(CLI::IsMember({"csv", "json"}));
  auto* trials = app.add_option("--trials", o.trials, "Sampled mode with this many trials");
  app.add_flag("--exact", o.exact, "Exact enumeration (default)")->excludes(trials);
  app.add_flag("--ideal-z", o.ideal_z, "Allow the non-physical Z on coherent-state qubits");
  app.add_option("--encoding", o.encoding, "Qubit encoding")->check(CLI::IsMember({"hybrid", "polarization", "coherent"}));
  app.add_option("--alpha", o.alpha, "Coherent amplitude")->check(CLI::NonNegativeNumber);
  app.add_option("--alphas", o.alphas, "Ascending alpha grid for sweep")->delimiter(',')->check(CLI::NonNegativeNumber);
  app.add_option("--a", o.a, "Input amplitude a (real part)");
  app.add_option("--a-im", o.a_im, "Input amplitude a (imaginary part)");
  app.add_option("--b", o.b, "Input amplitude b (real part)");
  app.add_option("--b-im", o.b_im, "Input amplitude b (imaginary part)");
  app.add_option("--gamma", o.gamma, "Auxiliary amplitude of the Kerr probe")->check(CLI::PositiveNumber);
  app.add_option("--beta", o.beta, "ECS amplitude")->check(CLI::NonNegativeNumber);
  app.add_option("--parity", o.parity, "SCS parity")->check(CLI::IsMember({"even", "odd"}));
  app.add_flag("--no-compensate", o.no_compensate, "Skip the relative-phase compensation");
  app.add_flag("--no-plate", o.no_plate, "Remove the 90-degree plate from B_P");
  app.add_flag("--diagonal", o.diagonal, "Finish the hybrid pair with a diagonal plate");
}

void validate(const Options& o) {
  if (o.scenario.empty()) throw ConfigFileError("no scenario given (subcommand or 'scenario' config key)");
  if (o.scenario == "sweep" && o.alphas.empty()) throw ConfigFileError("--alphas must not be empty");
  for (size_t i = 1; i < o.alphas.size(); ++i) {
    if (!(o.alphas[i] > o.alphas[i - 1])) throw ConfigFileError("--alphas must be strictly ascending");
  }
  if (o.a == 0 && o.a_im == 0 && o.b == 0 && o.b_im == 0) throw ConfigFileError("input amplitudes are both zero");
  if ((o.scenario == "balpha-table" || ((o.scenario == "teleport") && o.encoding != "polarization")) && !(o.alpha > 0)) {
    throw ConfigFileError("--alpha must be > 0 for this scenario");
  }
  if (o.scenario == "sweep" && o.encoding != "polarization" && !(o.alphas.front() > 0)) {
    throw ConfigFileError("--alphas must be > 0 for this encoding");
  }
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv(std::ostream& os, const Table& table) {
  for (size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& summary) {
  CLI::App app{"Exact linear-optics teleportation experiments", "optele"};
  app.fallthrough();
  app.config_formatter(std::make_shared<TomlOrJsonConfig>());
  app.set_config("--config", "", "TOML config file, or a JSON result to re-run");
  app.allow_config_extras(CLI::config_extras_mode::error);
  Options o;
  add_options(app, o);
  app.require_subcommand(0, 1);
  app.add_subcommand("bp-table", "Polarization Bell analyzer outcome table");
  app.add_subcommand("balpha-table", "Coherent-state Bell analyzer outcome table");
  app.add_subcommand("teleport", "One teleportation run with its branch table");
  app.add_subcommand("sweep", "Success probability over an alpha grid");
  app.add_subcommand("gen-hybrid", "Hybrid pair from a weak cross-Kerr interaction");
  app.add_subcommand("gen-ecs", "Entangled coherent state from splitting an SCS");

  try {
    app.parse(argc, argv);
    if (!app.get_subcommands().empty()) o.scenario = app.get_subcommands().front()->get_name();
    validate(o);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, summary);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, summary);
  } catch (const CLI::ParseError& e) {
    summary << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConfigFileError& e) {
    summary << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    Result r;
    if (o.scenario == "bp-table") r = bp_table(o);
    else if (o.scenario == "balpha-table") r = balpha_table(o);
    else if (o.scenario == "teleport") r = teleport_scenario(o);
    else if (o.scenario == "sweep") r = sweep_scenario(o);
    else if (o.scenario == "gen-hybrid") r = gen_hybrid(o);
    else r = gen_ecs(o);
    check_table(r.table);

    std::ostringstream payload;
    if (o.format == "json") write_json(payload, o, r);
    else write_csv(payload, r.table);
    if (o.out.empty()) {
      out << payload.str();
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file || !(file << payload.str()) || !file.flush()) {
        summary << "error: cannot write '" << o.out << "'\n";
        return kConfigError;
      }
    }
    for (const auto& line : r.human) summary << line << '\n';
    return kOk;
  } catch (const CutoffSaturation& e) {
    summary << "cutoff saturation: " << e.what() << '\n';
    return kCutoffSaturation;
  } catch (const InvariantViolation& e) {
    summary << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const std::invalid_argument& e) {
    summary << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    summary << "internal error: " << e.what() << '\n';
    return kInvariantViolation;
  }
}

}  // namespace optele::cli
