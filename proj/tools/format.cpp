#include "format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>
#include <unistd.h>

#include "trigene/compensated.hpp"
#include "trigene/error.hpp"

namespace trigene::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(parent, ec);
  const fs::path tmp = parent / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
    f.flush();
    if (!f) {
      fs::remove(tmp, ec);
      throw std::runtime_error("cannot write " + path.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at " + path.string());
  }
}

void CsvHeader::add(const std::string& key, const std::string& value) {
  text_ += "# " + key + ": " + value + "\n";
}

Json describe(const Distribution& d, double input_delta) {
  Json j;
  j["model"] = std::string(to_string(d.model));
  Json rates;
  if (d.model == ModelKind::ThreeState) {
    rates["k1_minus"] = d.rates.k1_minus;
    rates["k1_plus"] = d.rates.k1_plus;
    rates["k2_minus"] = d.rates.k2_minus;
    rates["k2_plus"] = d.rates.k2_plus;
  } else {
    rates["k_plus"] = d.rates.k2_plus;
    rates["k_minus"] = d.rates.k2_minus;
  }
  rates["nu"] = d.rates.nu;
  j["rescaled_rates"] = rates;
  j["input_delta"] = input_delta;
  if (d.model == ModelKind::ThreeState) {
    const Occupancies o = occupancies(d.rates);
    j["occupancies"] = {{"gamma0", o.gamma0}, {"gamma1", o.gamma1}, {"gamma2", o.gamma2}};
    j["mean_closed_form"] = d.rates.nu * o.gamma2;
  } else {
    const double on = d.rates.k2_plus + d.rates.k2_minus > 0.0
                          ? d.rates.k2_plus / (d.rates.k2_plus + d.rates.k2_minus)
                          : 1.0;
    j["occupancies"] = {{"off", 1.0 - on}, {"on", on}};
    j["mean_closed_form"] = d.rates.nu * on;
  }
  j["mean_summed"] = d.mean();
  j["n_max"] = d.n_max;
  j["tail_mass_bound"] = d.tail_mass_bound;
  return j;
}

CsvHeader csv_header(const Distribution& d, double input_delta) {
  CsvHeader h;
  const Json j = describe(d, input_delta);
  h.add("model", j["model"].get<std::string>());
  for (const auto& [k, v] : j["rescaled_rates"].items()) h.add(k, v.get<double>());
  h.add("input_delta", input_delta);
  for (const auto& [k, v] : j["occupancies"].items()) h.add(k, v.get<double>());
  h.add("mean_closed_form", j["mean_closed_form"].get<double>());
  h.add("mean_summed", j["mean_summed"].get<double>());
  h.add("n_max", std::to_string(d.n_max));
  h.add("tail_mass_bound", d.tail_mass_bound);
  return h;
}

namespace {

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  NeumaierSum<double> s;
  for (std::size_t n = 0; n < p.size(); ++n) {
    s += p[n];
    c[n] = s.value();
  }
  return c;
}

}  // namespace

std::string distribution_csv(const Distribution& d, double input_delta) {
  std::string out = csv_header(d, input_delta).str();
  out += "n,p_n,cumulative\n";
  const std::vector<double> c = cumulative(d.probs);
  for (std::size_t n = 0; n < d.probs.size(); ++n) {
    out += std::to_string(n) + "," + format_double(d.probs[n]) + "," + format_double(c[n]) + "\n";
  }
  return out;
}

Json distribution_json(const Distribution& d, double input_delta) {
  Json j = describe(d, input_delta);
  j["p"] = d.probs;
  j["cumulative"] = cumulative(d.probs);
  return j;
}

}  // namespace trigene::cli
