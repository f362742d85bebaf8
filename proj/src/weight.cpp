#include "cdeform/weight.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "cdeform/types.hpp"

namespace cdeform {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::string number(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

}  // namespace

WeightFunction WeightFunction::power(double beta) {
  if (!(beta > 1.0) || !std::isfinite(beta))
    throw InputError("power weight needs beta > 1 (got " + number(beta) + "): the tail sum diverges");
  WeightFunction w;
  w.family_ = WeightFamily::power;
  w.beta_ = beta;
  w.finish();
  return w;
}

WeightFunction WeightFunction::power_log(double beta, double kappa) {
  if (!(beta > 1.0) || !std::isfinite(beta))
    throw InputError("powerlog weight needs beta > 1 (got " + number(beta) + ")");
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw InputError("powerlog weight needs kappa >= 0 (got " + number(kappa) + ")");
  WeightFunction w;
  w.family_ = WeightFamily::power_log;
  w.beta_ = beta;
  w.kappa_ = kappa;
  w.finish();
  return w;
}

WeightFunction WeightFunction::table(std::vector<std::pair<double, double>> samples,
                                     std::string source) {
  if (samples.empty()) throw InputError("weight table is empty");
  WeightFunction w;
  w.family_ = WeightFamily::table;
  w.source_ = std::move(source);
  w.knots_.emplace_back(0.0, 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [t, phi] = samples[i];
    const std::string at = "weight table entry " + std::to_string(i);
    if (!(t > 1.0) || !std::isfinite(t)) throw InputError(at + ": t must exceed 1");
    if (!(phi > 0.0) || !(phi <= 1.0)) throw InputError(at + ": phi must lie in (0, 1]");
    const double s = std::log(t), lp = std::log(phi);
    if (s <= w.knots_.back().first) throw InputError(at + ": t must be strictly increasing");
    if (lp > w.knots_.back().second) throw InputError(at + ": phi must be non-increasing");
    w.knots_.emplace_back(s, lp);
  }
  const auto& a = w.knots_[w.knots_.size() - 2];
  const auto& b = w.knots_.back();
  w.tail_slope_ = (b.second - a.second) / (b.first - a.first);
  if (!(w.tail_slope_ < -1.0))
    throw InputError("weight table must end with a log-log slope below -1 (got " +
                     number(w.tail_slope_) + "); the tail sum would diverge");
  w.finish();
  return w;
}

void WeightFunction::finish() {
  if (family_ == WeightFamily::power) {
    c_phi_ = std::exp2(beta_);
    return;
  }
  double sup = 1.0;
  for (int k = -40; k <= 400; ++k) {
    const double s = k / 8.0 * kLn2;
    sup = std::max(sup, std::exp(log_phi(s) - log_phi(s + kLn2)));
  }
  c_phi_ = sup * 1.01;
}

double WeightFunction::log_phi(double s) const {
  if (s <= 0.0) return 0.0;
  switch (family_) {
    case WeightFamily::power:
      return -beta_ * s;
    case WeightFamily::power_log:
      return -beta_ * s - kappa_ * std::log1p(s);
    case WeightFamily::table: {
      const auto& last = knots_.back();
      if (s >= last.first) return last.second + tail_slope_ * (s - last.first);
      std::size_t i = 1;
      while (knots_[i].first < s) ++i;
      const auto& a = knots_[i - 1];
      const auto& b = knots_[i];
      const double f = (s - a.first) / (b.first - a.first);
      return a.second + f * (b.second - a.second);
    }
  }
  return 0.0;
}

double WeightFunction::eval(double t) const {
  if (!(t > 0.0)) throw InputError("weight evaluated at non-positive t = " + number(t));
  if (t <= 1.0) return 1.0;
  switch (family_) {
    case WeightFamily::power:
      return std::pow(t, -beta_);
    case WeightFamily::power_log:
      return std::pow(t, -beta_) / std::pow(1.0 + std::log(t), kappa_);
    case WeightFamily::table:
      break;
  }
  return std::exp(log_phi(std::log(t)));
}

double WeightFunction::tail_sum_by_summation(int m) const {
  if (m < 0) throw InputError("tail sum index must be non-negative");
  long double total = 0.0L;
  for (long n = m; n < static_cast<long>(m) + 1000000; ++n) {
    const double s = static_cast<double>(n) * kLn2;
    const long double term = std::exp(static_cast<long double>(s) + log_phi(s));
    total += term;
    if (term == 0.0L || term < 1e-14L * total) return static_cast<double>(total);
  }
  throw NumericalError("tail sum did not converge within 10^6 terms");
}

double WeightFunction::tail_sum(int m) const {
  if (m < 0) throw InputError("tail sum index must be non-negative");
  if (family_ == WeightFamily::power) {
    const long double r = std::exp2(1.0L - beta_);
    return static_cast<double>(std::exp2((1.0L - beta_) * m) / (1.0L - r));
  }
  return tail_sum_by_summation(m);
}

double WeightFunction::head_sum(int m) const {
  long double total = 0.0L;
  for (int n = 0; n <= m; ++n) {
    const double s = n * kLn2;
    total += std::exp(static_cast<long double>(s) + log_phi(s));
  }
  return static_cast<double>(total);
}

std::string WeightFunction::spec() const {
  switch (family_) {
    case WeightFamily::power:
      return "power:beta=" + number(beta_);
    case WeightFamily::power_log:
      return "powerlog:beta=" + number(beta_) + ",kappa=" + number(kappa_);
    case WeightFamily::table:
      return "table:@" + source_;
  }
  return {};
}

namespace {

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("weight parameter without value: " + item);
    const auto key = item.substr(0, eq), val = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      out[key] = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw InputError("bad numeric value for weight parameter " + key + ": " + val);
    }
  }
  return out;
}

WeightFunction load_table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open weight table " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("parse error in weight table " + path + ": " + e.what());
  }
  std::vector<std::pair<double, double>> samples;
  try {
    if (j.is_object()) {
      const auto t = j.at("t").get<std::vector<double>>();
      const auto phi = j.at("phi").get<std::vector<double>>();
      if (t.size() != phi.size()) throw InputError("weight table: t and phi differ in length");
      for (std::size_t i = 0; i < t.size(); ++i) samples.emplace_back(t[i], phi[i]);
    } else {
      for (const auto& row : j) samples.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed weight table " + path + ": " + e.what());
  }
  return WeightFunction::table(std::move(samples), path);
}

}  // namespace

WeightFunction parse_weight(const std::string& spec) {
  const auto colon = spec.find(':');
  const auto family = spec.substr(0, colon);
  const auto rest = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  if (family == "table") {
    if (rest.size() < 2 || rest[0] != '@') throw InputError("table weight needs table:@file.json");
    return load_table(rest.substr(1));
  }
  const auto params = parse_params(rest);
  auto get = [&](const char* key, std::optional<double> fallback = std::nullopt) {
    if (auto it = params.find(key); it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw InputError("weight " + family + " needs parameter " + key);
  };
  auto only = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, _] : params) {
      bool ok = false;
      for (auto key : keys) ok = ok || k == key;
      if (!ok) throw InputError("unknown weight parameter " + k);
    }
  };
  if (family == "power") {
    only({"beta"});
    return WeightFunction::power(get("beta"));
  }
  if (family == "powerlog") {
    only({"beta", "kappa"});
    return WeightFunction::power_log(get("beta"), get("kappa", 0.0));
  }
  throw InputError("unknown weight family " + family);
}

}  // namespace cdeform
