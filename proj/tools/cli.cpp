#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "trigene/distribution.hpp"
#include "trigene/error.hpp"
#include "trigene/hypergeom.hpp"
#include "trigene/oracle.hpp"

namespace trigene::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kMasterThreshold = 1e-6;
constexpr double kSsaTvThreshold = 0.02;
constexpr double kOccupancySigmas = 4.0;
constexpr double kReductionThreshold = 1e-10;

// Thrown by subcommands that ran fine but found a threshold violated.
struct ThresholdViolation {};

struct RateArgs {
  double k1m = 0.13;
  double k1p = 1.3;
  double k2m = 2.3;
  double k2p = 4.2;
  double nu = 3.0;
  double delta = 1.0;

  RateSet raw() const {
    RateSet r;
    r.k1_minus = k1m;
    r.k1_plus = k1p;
    r.k2_minus = k2m;
    r.k2_plus = k2p;
    r.nu = nu;
    r.delta = delta;
    return r;
  }
  RateSet rescaled() const { return rescale(raw()); }
};

void add_rate_options(CLI::App* app, RateArgs& r) {
  app->add_option("--k1m", r.k1m, "poised -> inactive rate")->capture_default_str();
  app->add_option("--k1p", r.k1p, "inactive -> poised rate")->capture_default_str();
  app->add_option("--k2m", r.k2m, "active -> poised rate")->capture_default_str();
  app->add_option("--k2p", r.k2p, "poised -> active rate")->capture_default_str();
  app->add_option("--nu", r.nu, "production rate in the active state")->capture_default_str();
  app->add_option("--delta", r.delta, "mRNA degradation rate; all rates are divided by it")
      ->capture_default_str();
}

struct TwoStateArgs {
  double kp = 4.2;
  double km = 2.3;
};

TwoStateParams two_state_params(const TwoStateArgs& t, const RateArgs& r) {
  // Push the raw numbers through the same validation and rescaling.
  RateSet raw;
  raw.k2_plus = t.kp;
  raw.k2_minus = t.km;
  raw.nu = r.nu;
  raw.delta = r.delta;
  const RateSet s = rescale(raw);
  return {s.k2_plus, s.k2_minus, s.nu};
}

std::string default_out_dir() {
  if (const char* env = std::getenv("TRIGENE_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

void add_format_option(CLI::App* app, std::string& format) {
  app->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_atomically(path, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---- dist ----------------------------------------------------------------

struct DistArgs {
  RateArgs rates;
  TwoStateArgs two;
  bool two_state = false;
  double tail_bound = 1e-10;
  std::size_t hard_cap = 100000;
  std::string format = "csv";
  std::string out;
};

void cmd_dist(const DistArgs& a, std::ostream& out) {
  const TruncationOptions opts{a.tail_bound, a.hard_cap};
  const Distribution d = a.two_state ? distribution(two_state_params(a.two, a.rates), opts)
                                     : distribution(a.rates.rescaled(), opts);
  const std::string text = a.format == "json" ? dump(distribution_json(d, a.rates.delta))
                                              : distribution_csv(d, a.rates.delta);
  emit(text, a.out, out);
}

// ---- fig1 ----------------------------------------------------------------

struct Fig1Args {
  std::string variant;
  std::string out_dir;
  std::string format = "csv";
  double tail_bound = 1e-10;
};

const RateArgs kFig1aRates{};

void cmd_fig1a(const Fig1Args& a, std::ostream& out) {
  const TruncationOptions opts{a.tail_bound, 100000};
  const Distribution three = distribution(kFig1aRates.rescaled(), opts);
  const Distribution two = distribution(TwoStateParams{kFig1aRates.k2p, kFig1aRates.k2m, kFig1aRates.nu}, opts);
  const double tv = tv_distance(three, two);
  const double maxabs = max_abs_difference(three.probs, two.probs);
  std::size_t worst_n = 0;
  for (std::size_t n = 0; n < std::max(three.probs.size(), two.probs.size()); ++n) {
    if (std::abs(three.at(n) - two.at(n)) == maxabs) {
      worst_n = n;
      break;
    }
  }

  const fs::path dir = a.out_dir;
  if (a.format == "json") {
    Json j;
    j["three_state"] = distribution_json(three, 1.0);
    j["two_state"] = distribution_json(two, 1.0);
    j["tv_distance"] = tv;
    j["max_abs_difference"] = maxabs;
    j["max_abs_difference_at"] = worst_n;
    write_atomically(dir / "fig1a.json", dump(j));
  } else {
    write_atomically(dir / "fig1a_three_state.csv", distribution_csv(three, 1.0));
    write_atomically(dir / "fig1a_two_state.csv", distribution_csv(two, 1.0));
    std::string s = "tv_distance,max_abs_difference,max_abs_difference_at\n";
    s += format_double(tv) + "," + format_double(maxabs) + "," + std::to_string(worst_n) + "\n";
    write_atomically(dir / "fig1a_summary.csv", s);
  }
  out << "tv_distance " << format_double(tv) << "\n";
  out << "max_abs_difference " << format_double(maxabs) << " at n=" << worst_n << "\n";
}

constexpr std::array<double, 3> kFig1bK1Minus{0.13, 1.3, 13.0};

void cmd_fig1b(const Fig1Args& a, std::ostream& out) {
  const TruncationOptions opts{a.tail_bound, 100000};
  const fs::path dir = a.out_dir;
  Json curves = Json::array();
  std::string summary = "k1_minus,mean_summed,mean_closed_form\n";
  for (double k1m : kFig1bK1Minus) {
    RateArgs r = kFig1aRates;
    r.k1m = k1m;
    const RateSet rates = r.rescaled();
    const Distribution d = distribution(rates, opts);
    const double closed = rates.nu * occupancies(rates).gamma2;
    summary += format_double(k1m) + "," + format_double(d.mean()) + "," + format_double(closed) + "\n";
    if (a.format == "json") {
      curves.push_back(distribution_json(d, 1.0));
    } else {
      write_atomically(dir / ("fig1b_k1m_" + format_double(k1m) + ".csv"), distribution_csv(d, 1.0));
    }
    out << "k1_minus " << format_double(k1m) << " mean " << format_double(d.mean()) << "\n";
  }
  if (a.format == "json") {
    Json j;
    j["curves"] = curves;
    write_atomically(dir / "fig1b.json", dump(j));
  } else {
    write_atomically(dir / "fig1b_summary.csv", summary);
  }
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
  RateArgs rates;
  VerifyOptions options;
};

// ---- asympt --------------------------------------------------------------

struct AsymptArgs {
  std::string kind;
  double a = 1.0;
  double b = 2.0;
  double a1 = 1.0;
  double a2 = 1.5;
  double b1 = 2.0;
  double b2 = 3.5;
  RateArgs rates;
  bool from_rates = false;
  std::vector<double> z;
  std::vector<double> z_range;
  std::size_t terms = kDefaultAsymptoticTerms;
  bool no_timing = false;
  std::string format = "csv";
  std::string out;
};

struct Timed {
  EvalReport report;
  bool ok = false;
  std::string error;
  double micros = 0.0;
};

Timed timed(const std::function<EvalReport()>& f) {
  Timed t;
  const auto start = std::chrono::steady_clock::now();
  try {
    t.report = f();
    t.ok = true;
  } catch (const Error& e) {
    t.error = std::string(to_string(e.code()));
  }
  t.micros = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
  return t;
}

std::vector<double> z_grid(const AsymptArgs& a, double nu) {
  if (!a.z.empty()) return a.z;
  if (!a.z_range.empty()) {
    if (a.z_range.size() != 3 || a.z_range[2] < 1.0) {
      throw Error(Errc::InvalidArgument, "--z-range takes FROM TO COUNT with COUNT >= 1");
    }
    const auto count = static_cast<std::size_t>(a.z_range[2]);
    std::vector<double> zs;
    for (std::size_t i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      zs.push_back(a.z_range[0] + t * (a.z_range[1] - a.z_range[0]));
    }
    return zs;
  }
  std::vector<double> zs;
  if (a.from_rates) {
    for (int k = 1; k <= 30; ++k) zs.push_back(-nu * k);
  } else {
    for (int k = 10; k >= 1; --k) zs.push_back(-10.0 * k);
  }
  return zs;
}

double rel_diff(const Timed& x, const Timed& ref) {
  if (!x.ok || !ref.ok) return std::nan("");
  if (ref.report.value == 0.0) return std::abs(x.report.value);
  return std::abs(x.report.value - ref.report.value) / std::abs(ref.report.value);
}

void cmd_asympt(const AsymptArgs& a, std::ostream& out) {
  const bool is_1f1 = a.kind == "1f1";
  std::vector<double> params;
  double nu = 0.0;
  if (is_1f1) {
    params = {a.a, a.b};
  } else if (a.from_rates) {
    const RateSet r = a.rates.rescaled();
    const DerivedConstants c = derived_constants(r);
    params = {c.K2_minus, c.K2_plus, c.K1_minus, c.K1_plus};
    nu = r.nu;
  } else {
    params = {a.a1, a.a2, a.b1, a.b2};
  }
  for (double p : params) {
    if (!std::isfinite(p)) throw Error(Errc::InvalidArgument, "parameters must be finite");
  }

  Json rows = Json::array();
  for (double z : z_grid(a, nu)) {
    if (!std::isfinite(z) || z == 0.0) throw Error(Errc::InvalidArgument, "z must be finite and nonzero");
    HypergeomSpec spec;
    if (is_1f1) {
      spec = {{params[0]}, {params[1]}, z};
    } else {
      spec = {{params[0], params[1]}, {params[2], params[3]}, z};
    }
    validate(spec);
    const Timed series = timed([&] { return pfq_series_extended(spec); });
    const Timed asym = timed([&] {
      return is_1f1 ? f11_asymptotic(params[0], params[1], z, a.terms)
                    : f22_asymptotic(params[0], params[1], params[2], params[3], z, a.terms);
    });
    // Series-first dispatch: the positive Kummer or Beta-integral forms take
    // over when the plain series cancels, so this stays a usable reference
    // well past the point where the series column turns to noise.
    EvalPolicy series_first;
    series_first.series_threshold = std::numeric_limits<double>::infinity();
    const Timed reference = timed([&] {
      return is_1f1 ? f11(params[0], params[1], z, series_first)
                    : f22(params[0], params[1], params[2], params[3], z, series_first);
    });
    const Timed dispatch = timed([&] {
      return is_1f1 ? f11(params[0], params[1], z)
                    : f22(params[0], params[1], params[2], params[3], z);
    });

    Json row;
    row["z"] = z;
    row["series"] = series.ok ? Json(series.report.value) : Json(nullptr);
    row["series_error_estimate"] = series.ok ? Json(series.report.error_estimate) : Json(nullptr);
    row["series_terms"] = series.ok ? Json(series.report.terms_used) : Json(nullptr);
    row["reference"] = reference.ok ? Json(reference.report.value) : Json(nullptr);
    row["reference_branch"] = reference.ok ? Json(std::string(to_string(reference.report.branch))) : Json(reference.error);
    row["reference_error_estimate"] = reference.ok ? Json(reference.report.error_estimate) : Json(nullptr);
    row["asymptotic"] = asym.ok ? Json(asym.report.value) : Json(nullptr);
    row["asymptotic_branch"] = asym.ok ? Json(std::string(to_string(asym.report.branch))) : Json(asym.error);
    row["asymptotic_terms"] = asym.ok ? Json(asym.report.terms_used) : Json(nullptr);
    row["asymptotic_error_estimate"] = asym.ok ? Json(asym.report.error_estimate) : Json(nullptr);
    row["rel_diff_asymptotic"] = rel_diff(asym, reference);
    row["dispatch"] = dispatch.ok ? Json(dispatch.report.value) : Json(nullptr);
    row["dispatch_branch"] = dispatch.ok ? Json(std::string(to_string(dispatch.report.branch))) : Json(dispatch.error);
    row["rel_diff_dispatch"] = rel_diff(dispatch, reference);
    if (!a.no_timing) {
      row["series_us"] = series.micros;
      row["asymptotic_us"] = asym.micros;
      row["dispatch_us"] = dispatch.micros;
    }
    rows.push_back(row);
  }

  if (a.format == "json") {
    Json j;
    j["kind"] = a.kind;
    j["parameters"] = params;
    j["rows"] = rows;
    emit(dump(j), a.out, out);
    return;
  }
  CsvHeader h;
  h.add("kind", a.kind);
  std::string plist;
  for (double p : params) plist += (plist.empty() ? "" : " ") + format_double(p);
  h.add("parameters", plist);
  std::string text = h.str();
  bool first = true;
  for (const Json& row : rows) {
    if (first) {
      std::string head;
      for (const auto& [k, v] : row.items()) head += (head.empty() ? "" : ",") + k;
      text += head + "\n";
      first = false;
    }
    std::string line;
    bool lead = true;
    for (const auto& [k, v] : row.items()) {
      if (!lead) line += ",";
      lead = false;
      if (v.is_number_float()) {
        line += format_double(v.get<double>());
      } else if (v.is_number()) {
        line += std::to_string(v.get<std::size_t>());
      } else if (v.is_string()) {
        line += v.get<std::string>();
      } else {
        line += "nan";
      }
    }
    text += line + "\n";
  }
  emit(text, a.out, out);
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
  RateArgs rates;
  std::vector<double> values;
  std::vector<double> range;
  bool log_spaced = false;
  double tail_bound = 1e-10;
  bool curves = false;
  std::string out_dir;
  std::string format = "csv";
  std::string out;
};

std::vector<double> sweep_values(const SweepArgs& a) {
  if (!a.values.empty()) return a.values;
  if (a.range.empty()) return {kFig1bK1Minus.begin(), kFig1bK1Minus.end()};
  if (a.range.size() != 3 || a.range[2] < 1.0) {
    throw Error(Errc::InvalidArgument, "--k1m-range takes FROM TO COUNT with COUNT >= 1");
  }
  if (a.log_spaced && !(a.range[0] > 0.0 && a.range[1] > 0.0)) {
    throw Error(Errc::InvalidArgument, "log-spaced sweep needs positive endpoints");
  }
  const auto count = static_cast<std::size_t>(a.range[2]);
  std::vector<double> v;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    if (i + 1 == count && count > 1) {
      v.push_back(a.range[1]);  // exact endpoint
    } else if (a.log_spaced) {
      v.push_back(i == 0 ? a.range[0] : a.range[0] * std::pow(a.range[1] / a.range[0], t));
    } else {
      v.push_back(a.range[0] + t * (a.range[1] - a.range[0]));
    }
  }
  return v;
}

void cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const TruncationOptions opts{a.tail_bound, 100000};
  Json rows = Json::array();
  for (double k1m : sweep_values(a)) {
    RateArgs r = a.rates;
    r.k1m = k1m;
    const RateSet rates = r.rescaled();
    const Distribution d = distribution(rates, opts);
    const Occupancies o = occupancies(rates);
    const double m1 = d.rates.nu * o.gamma2;
    const double variance = rates.nu == 0.0 || o.gamma2 == 0.0
                                ? 0.0
                                : factorial_moment(rates, 2) + m1 - m1 * m1;
    Json row;
    row["k1_minus"] = k1m;
    row["gamma0"] = o.gamma0;
    row["gamma1"] = o.gamma1;
    row["gamma2"] = o.gamma2;
    row["mean_closed_form"] = m1;
    row["mean_summed"] = d.mean();
    row["variance"] = variance;
    row["fano"] = m1 > 0.0 ? variance / m1 : 1.0;
    row["p0"] = d.at(0);
    row["n_max"] = d.n_max;
    row["tail_mass_bound"] = d.tail_mass_bound;
    if (a.curves) {
      const fs::path dir = a.out_dir;
      if (a.format == "json") {
        write_atomically(dir / ("sweep_k1m_" + format_double(k1m) + ".json"), dump(distribution_json(d, r.delta)));
      } else {
        write_atomically(dir / ("sweep_k1m_" + format_double(k1m) + ".csv"), distribution_csv(d, r.delta));
      }
    }
    rows.push_back(row);
  }

  if (a.format == "json") {
    Json j;
    j["rows"] = rows;
    emit(dump(j), a.out, out);
    return;
  }
  std::string text = "k1_minus,gamma0,gamma1,gamma2,mean_closed_form,mean_summed,variance,fano,p0,n_max,tail_mass_bound\n";
  for (const Json& row : rows) {
    std::string line;
    for (const auto& [k, v] : row.items()) {
      if (!line.empty()) line += ",";
      line += k == "n_max" ? std::to_string(v.get<std::size_t>()) : format_double(v.get<double>());
    }
    text += line + "\n";
  }
  emit(text, a.out, out);
}

int exit_code_for(const Error& e) {
  if (is_validation_error(e.code()) || e.code() == Errc::DegenerateOccupancy) return kExitValidation;
  return kExitNumerical;
}

}  // namespace

RateSet VerifyOptions::fig1a_raw() { return RateArgs{}.raw(); }

Json verify_report(const VerifyOptions& o) {
  const RateSet rates = rescale(o.raw);
  const Distribution closed = distribution(rates);
  const Occupancies occ = occupancies(rates);

  Json report;
  Json input;
  input["k1_minus"] = o.raw.k1_minus;
  input["k1_plus"] = o.raw.k1_plus;
  input["k2_minus"] = o.raw.k2_minus;
  input["k2_plus"] = o.raw.k2_plus;
  input["nu"] = o.raw.nu;
  input["delta"] = o.raw.delta;
  report["input_rates"] = input;
  report["closed_form"] = {{"n_max", closed.n_max},
                           {"tail_mass_bound", closed.tail_mass_bound},
                           {"total", closed.total()},
                           {"mean_summed", closed.mean()},
                           {"mean_closed_form", rates.nu * occ.gamma2}};
  bool pass = true;

  const std::size_t n_max = o.n_max != 0 ? o.n_max : std::max<std::size_t>(200, suggest_n_max(rates));
  const MasterSolution master = master_steady_state(rates, n_max);
  const double master_err = max_abs_difference(master.marginal.probs, closed.probs);
  const bool master_ok = master_err < kMasterThreshold;
  pass = pass && master_ok;
  report["master"] = {{"n_max", n_max},
                      {"residual", master.residual},
                      {"max_abs_difference", master_err},
                      {"threshold", kMasterThreshold},
                      {"pass", master_ok}};

  SsaConfig sc;
  sc.rates = rates;
  sc.n_samples = o.samples;
  sc.seed = o.seed;
  sc.replicas = o.replicas;
  sc.workers = o.workers;
  const EmpiricalDistribution e = ssa_run(sc);
  const double tv = tv_distance(closed, e);
  const bool ssa_ok = tv < kSsaTvThreshold;
  pass = pass && ssa_ok;
  report["ssa"] = {{"samples", e.total},
                   {"seed", o.seed},
                   {"replicas", o.replicas},
                   {"mean", e.mean()},
                   {"tv_distance", tv},
                   {"threshold", kSsaTvThreshold},
                   {"pass", ssa_ok}};

  Json states = Json::array();
  const auto expected = occ.as_array();
  const auto observed = e.gene_fractions();
  bool occ_ok = true;
  for (std::size_t g = 0; g < 3; ++g) {
    const double sigma = std::sqrt(expected[g] * (1.0 - expected[g]) / static_cast<double>(e.total));
    const double dev = std::abs(observed[g] - expected[g]);
    const bool ok = dev <= kOccupancySigmas * sigma;
    occ_ok = occ_ok && ok;
    states.push_back({{"state", g},
                      {"expected", expected[g]},
                      {"observed", observed[g]},
                      {"sigma", sigma},
                      {"master", master.gene_marginals[g]},
                      {"pass", ok}});
  }
  pass = pass && occ_ok;
  report["occupancy"] = {{"sigmas", kOccupancySigmas}, {"states", states}, {"pass", occ_ok}};

  if (rates.k1_minus == 0.0) {
    // The inactive state is never entered: exactly the on/off model.
    double worst = 0.0;
    for (std::size_t n = 0; n <= closed.n_max; ++n) {
      worst = std::max(worst, std::abs(closed.at(n) -
                                       pn_two_state(rates.k2_plus, rates.k2_minus, rates.nu, n)));
    }
    const bool ok = worst < kReductionThreshold;
    pass = pass && ok;
    report["two_state_reduction"] = {{"n_max", closed.n_max},
                                     {"max_abs_difference", worst},
                                     {"threshold", kReductionThreshold},
                                     {"pass", ok}};
  }
  report["pass"] = pass;
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady-state mRNA distributions of the three-state gene model", "trigene"};
  app.require_subcommand(1);

  DistArgs dist;
  CLI::App* dist_cmd = app.add_subcommand("dist", "p_n table from the closed form");
  add_rate_options(dist_cmd, dist.rates);
  auto* three_flag = dist_cmd->add_flag("--three-state", "three-state model (default)");
  dist_cmd->add_flag("--two-state", dist.two_state, "classical on/off model")->excludes(three_flag);
  dist_cmd->add_option("--kp", dist.two.kp, "two-state activation rate")->capture_default_str();
  dist_cmd->add_option("--km", dist.two.km, "two-state deactivation rate")->capture_default_str();
  dist_cmd->add_option("--tail-bound", dist.tail_bound, "stop once the remaining mass is below this")
      ->capture_default_str();
  dist_cmd->add_option("--hard-cap", dist.hard_cap, "largest n tried")->capture_default_str();
  add_format_option(dist_cmd, dist.format);
  dist_cmd->add_option("--out", dist.out, "output file (default: stdout)");

  Fig1Args fig1;
  fig1.out_dir = default_out_dir();
  CLI::App* fig1_cmd = app.add_subcommand("fig1", "curves of the inactive-state comparison figure");
  fig1_cmd->add_option("variant", fig1.variant, "a or b")->required()->check(CLI::IsMember({"a", "b"}));
  fig1_cmd->add_option("--out-dir", fig1.out_dir, "directory for the output files (env TRIGENE_OUT_DIR)")
      ->capture_default_str();
  add_format_option(fig1_cmd, fig1.format);
  fig1_cmd->add_option("--tail-bound", fig1.tail_bound)->capture_default_str();

  VerifyArgs verify;
  verify.options.workers = std::max(1u, std::thread::hardware_concurrency());
  CLI::App* verify_cmd = app.add_subcommand("verify", "closed form against master equation and SSA");
  add_rate_options(verify_cmd, verify.rates);
  verify_cmd->add_option("--samples", verify.options.samples)->capture_default_str();
  verify_cmd->add_option("--seed", verify.options.seed)->capture_default_str();
  verify_cmd->add_option("--replicas", verify.options.replicas, "independent SSA trajectories")
      ->capture_default_str();
  verify_cmd->add_option("--n-max", verify.options.n_max, "master-equation truncation (0: automatic)")
      ->capture_default_str();
  verify_cmd->add_option("--workers", verify.options.workers, "threads for SSA; does not change the report");
  std::string verify_out;
  verify_cmd->add_option("--out", verify_out, "report file (default: stdout)");

  AsymptArgs asympt;
  CLI::App* asympt_cmd = app.add_subcommand("asympt", "series vs asymptotic expansion table");
  asympt_cmd->add_option("kind", asympt.kind, "1f1 or 2f2")->required()->check(CLI::IsMember({"1f1", "2f2"}));
  asympt_cmd->add_option("--a", asympt.a, "1f1 numerator")->capture_default_str();
  asympt_cmd->add_option("--b", asympt.b, "1f1 denominator")->capture_default_str();
  asympt_cmd->add_option("--a1", asympt.a1)->capture_default_str();
  asympt_cmd->add_option("--a2", asympt.a2)->capture_default_str();
  asympt_cmd->add_option("--b1", asympt.b1)->capture_default_str();
  asympt_cmd->add_option("--b2", asympt.b2)->capture_default_str();
  asympt_cmd->add_flag("--from-rates", asympt.from_rates,
                       "2f2 parameters from the rate flags; z defaults to -nu*{1..30}");
  add_rate_options(asympt_cmd, asympt.rates);
  asympt_cmd->add_option("--z", asympt.z, "explicit z values")->delimiter(',');
  asympt_cmd->add_option("--z-range", asympt.z_range, "FROM TO COUNT")->expected(3);
  asympt_cmd->add_option("--terms", asympt.terms, "asymptotic terms")->capture_default_str();
  asympt_cmd->add_flag("--no-timing", asympt.no_timing, "omit timing columns");
  add_format_option(asympt_cmd, asympt.format);
  asympt_cmd->add_option("--out", asympt.out, "output file (default: stdout)");

  SweepArgs sweep;
  sweep.out_dir = default_out_dir();
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "summary statistics over a range of k1m");
  add_rate_options(sweep_cmd, sweep.rates);
  sweep_cmd->add_option("--k1m-values", sweep.values, "explicit k1m values")->delimiter(',');
  sweep_cmd->add_option("--k1m-range", sweep.range, "FROM TO COUNT")->expected(3);
  sweep_cmd->add_flag("--log", sweep.log_spaced, "log-spaced range");
  sweep_cmd->add_option("--tail-bound", sweep.tail_bound)->capture_default_str();
  sweep_cmd->add_flag("--curves", sweep.curves, "also write each distribution into --out-dir");
  sweep_cmd->add_option("--out-dir", sweep.out_dir, "directory for curves (env TRIGENE_OUT_DIR)")
      ->capture_default_str();
  add_format_option(sweep_cmd, sweep.format);
  sweep_cmd->add_option("--out", sweep.out, "summary file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (dist_cmd->parsed()) {
      cmd_dist(dist, out);
    } else if (fig1_cmd->parsed()) {
      if (fig1.variant == "a") {
        cmd_fig1a(fig1, out);
      } else {
        cmd_fig1b(fig1, out);
      }
    } else if (verify_cmd->parsed()) {
      verify.options.raw = verify.rates.raw();
      if (verify.options.workers == 0) throw Error(Errc::InvalidArgument, "--workers must be at least 1");
      const Json report = verify_report(verify.options);
      emit(dump(report), verify_out, out);
      if (!report["pass"].get<bool>()) throw ThresholdViolation{};
    } else if (asympt_cmd->parsed()) {
      cmd_asympt(asympt, out);
    } else if (sweep_cmd->parsed()) {
      cmd_sweep(sweep, out);
    }
  } catch (const ThresholdViolation&) {
    err << "trigene: verification thresholds violated\n";
    return kExitThreshold;
  } catch (const Error& e) {
    err << "trigene: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "trigene: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace trigene::cli
