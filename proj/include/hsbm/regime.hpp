#pragma once

// Recovery-regime conditions for a configuration: convex recovery (two
// variants), the combinatorial estimator, information-theoretic
// impossibility, and the counting algorithm. Every condition is reported
// with its two sides and a margin so borderline cases stay visible.

#include "hsbm/model.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hsbm {

enum class Sense { at_least, at_most };

struct ConditionReport {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  /// Multiplier applied to rhs for `at_least` conditions stated up to a
  /// constant; 1 for conditions with explicit constants.
  double constant = 1.0;
  Sense sense = Sense::at_least;
  bool applicable = true;
  bool satisfied = false;
  /// > 1 means satisfied: lhs/(C rhs) for at_least, rhs/lhs for at_most.
  /// Only meaningful when both sides are positive; `satisfied` is
  /// authoritative.
  double margin = 0.0;
  std::string note;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline ConditionReport at_least(std::string id, double lhs, double rhs, double c) {
  ConditionReport r;
  r.id = std::move(id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.constant = c;
  r.sense = Sense::at_least;
  r.satisfied = lhs >= c * rhs;
  const double scaled = c * rhs;
  if (scaled > 0.0)
    r.margin = lhs / scaled;
  else
    r.margin = lhs >= scaled ? kInf : 0.0;
  return r;
}

inline ConditionReport at_most(std::string id, double lhs, double rhs) {
  ConditionReport r;
  r.id = std::move(id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.sense = Sense::at_most;
  r.satisfied = lhs <= rhs;
  if (lhs > 0.0)
    r.margin = rhs / lhs;
  else
    r.margin = lhs <= rhs ? kInf : 0.0;
  return r;
}

inline ConditionReport not_applicable(std::string id, Sense sense, std::string why) {
  ConditionReport r;
  r.id = std::move(id);
  r.sense = sense;
  r.applicable = false;
  r.satisfied = false;
  r.margin = std::numeric_limits<double>::quiet_NaN();
  r.note = std::move(why);
  return r;
}

/// Sum of the two largest entries; v.size() >= 2.
inline double top_two_sum(const std::vector<double>& v) {
  double a = -kInf, b = -kInf;
  for (double x : v) {
    if (x > a) {
      b = a;
      a = x;
    } else if (x > b) {
      b = x;
    }
  }
  return a + b;
}

/// D̃(p,q) extended to the boundary: +inf when the denominator vanishes
/// and the numerator does not.
inline double chi_square_or_inf(double p, double q) {
  if (q > 0.0 && q < 1.0) return chi_square_div(p, q);
  return p == q ? 0.0 : kInf;
}

/// Per-cluster condition ρ_k² ≥ C σ_k² L_k; reports the binding cluster.
template <class LogFn>
ConditionReport per_cluster_density(std::string id, const ModelConfig& config,
                                    const DerivedStats& s, double c, LogFn log_term) {
  ConditionReport worst;
  bool first = true;
  for (std::size_t k = 0; k < config.num_clusters(); ++k) {
    auto r = at_least(id, s.rho[k] * s.rho[k], s.sigma_sq[k] * log_term(k), c);
    r.note = "binding cluster " + std::to_string(k + 1);
    const bool worse = (!r.satisfied && worst.satisfied) ||
                       (r.satisfied == worst.satisfied && r.margin < worst.margin);
    if (first || worse) worst = r;
    first = false;
  }
  return worst;
}

}  // namespace detail

inline const std::vector<double>& default_alpha_grid() {
  static const std::vector<double> grid{0.25, 0.5, 1.0, 2.0};
  return grid;
}

inline constexpr double kDefaultSummabilityThreshold = 0.1;

/// Convex recovery conditions with log n_k and log n_min. The returned list
/// holds (i), (ii), (iii) followed by one (iv) entry per alpha.
inline std::vector<ConditionReport> check_thm_convex1(
    const ModelConfig& config, double C, const std::vector<double>& alpha_grid = default_alpha_grid(),
    double summability_threshold = kDefaultSummabilityThreshold) {
  const auto s = derived_stats(config);
  const double n = double(config.n());
  std::vector<ConditionReport> out;
  out.push_back(detail::per_cluster_density("thm1.i", config, s, C, [&](std::size_t k) {
    return std::log(double(config.clusters()[k].size));
  }));
  const double nmin = double(s.n_min);
  out.push_back(detail::at_least("thm1.ii", detail::chi_square_or_inf(s.p_min, config.q()),
                                 std::log(nmin) / nmin, C));
  out.push_back(detail::at_least("thm1.iii", s.rho_min * s.rho_min,
                                 std::max({s.sigma_max_sq, s.sigma0_sq, std::log(n)}), C));
  for (double alpha : alpha_grid) {
    double sum = 0.0;
    for (const auto& c : config.clusters()) sum += std::pow(double(c.size), -alpha);
    std::ostringstream id;
    id << "thm1.iv[alpha=" << alpha << "]";
    out.push_back(detail::at_most(id.str(), sum, summability_threshold));
  }
  return out;
}

/// Convex recovery conditions with log n in place of log n_k.
inline std::vector<ConditionReport> check_thm_convex2(const ModelConfig& config, double C) {
  const auto s = derived_stats(config);
  const double logn = std::log(double(config.n()));
  std::vector<ConditionReport> out;
  out.push_back(detail::per_cluster_density("thm2.i", config, s, C,
                                            [&](std::size_t) { return logn; }));
  out.push_back(detail::at_least("thm2.ii", detail::chi_square_or_inf(s.p_min, config.q()),
                                 logn / double(s.n_min), C));
  out.push_back(detail::at_least("thm2.iii", s.rho_min * s.rho_min,
                                 std::max(s.sigma_max_sq, s.sigma0_sq), C));
  return out;
}

struct HardReport {
  ConditionReport condition;
  /// 5 (p_max − q)/(p_min − q) n^(2−η); may exceed 1.
  double failure_bound = std::numeric_limits<double>::quiet_NaN();
};

/// Combinatorial-estimator condition with its explicit constants.
inline HardReport check_thm_hard(const ModelConfig& config, double eta) {
  HardReport out;
  const auto s = derived_stats(config);
  if (s.n_min < 2 || config.n() < 8) {
    out.condition = detail::not_applicable("thm3", Sense::at_least, "requires n_min >= 2 and n >= 8");
    return out;
  }
  const double q = config.q();
  const double n = double(config.n());
  const double ratio = (s.p_min * (1.0 - s.p_min) + q * (1.0 - q)) / (s.p_min - q);
  const double rhs = 4.0 * (17.0 + eta) * (1.0 / 3.0 + ratio) * std::log(n);
  out.condition = detail::at_least("thm3", s.rho_min, rhs, 1.0);
  out.failure_bound = 5.0 * (s.p_max - q) / (s.p_min - q) * std::pow(n, 2.0 - eta);
  return out;
}

/// Impossibility conditions (1), (2), (3). Any one satisfied means no
/// estimator recovers exactly with probability above 1/2.
inline std::vector<ConditionReport> check_impossible(const ModelConfig& config) {
  const auto s = derived_stats(config);
  const double n = double(config.n());
  const double r = double(config.num_clusters());
  const double q = config.q();
  std::vector<ConditionReport> out;

  bool sizes_ok = true;
  for (const auto& c : config.clusters())
    if (c.size < 2 || double(c.size) > n / std::exp(1.0)) sizes_ok = false;

  if (!sizes_ok) {
    out.push_back(detail::not_applicable("thm4.1", Sense::at_most, "requires 2 <= n_k <= n/e"));
    out.push_back(detail::not_applicable("thm4.2", Sense::at_most, "requires 2 <= n_k <= n/e"));
  } else {
    double lhs1 = 0.0;
    double rhs1 = 0.0;
    double sq_p = 0.0;
    double tail = 0.0;
    for (const auto& c : config.clusters()) {
      const double nk = double(c.size);
      lhs1 += nk * nk * detail::chi_square_or_inf(c.p, q);
      rhs1 += nk * std::log(n / nk);
      sq_p += nk * nk * c.p;
      tail += (nk * c.p - 0.25) * nk * std::log(nk);
    }
    out.push_back(detail::at_most("thm4.1", 4.0 * lhs1, 0.5 * rhs1 - r - 2.0));
    // log((1-p_min)/(1-p_max)) is +inf when p_max = 1.
    const double log_ratio = s.p_max < 1.0 ? std::log((1.0 - s.p_min) / (1.0 - s.p_max))
                                           : detail::kInf;
    const double lhs2 = 0.5 * r + log_ratio + 1.0 + sq_p;
    const double rhs2 = (0.25 * n - sq_p) * std::log(n) + tail;
    out.push_back(detail::at_most("thm4.2", lhs2, rhs2));
  }

  if (config.n() < 128 || config.num_clusters() < 2) {
    out.push_back(detail::not_applicable("thm4.3", Sense::at_most, "requires n >= 128 and r >= 2"));
  } else {
    double lhs3 = 0.0;
    for (const auto& c : config.clusters()) {
      const double d = detail::chi_square_or_inf(c.p, q) + detail::chi_square_or_inf(q, c.p);
      lhs3 = std::max(lhs3, double(c.size) * d);
    }
    out.push_back(detail::at_most("thm4.3", lhs3, std::log(n - double(s.n_min)) / 12.0));
  }
  return out;
}

/// Bracket of the counting algorithm's pair condition:
/// min_k{(n_k−2)p_k² + (n−n_k)q²} − q max_{k≠l}{(n_k−1)p_k + (n_l−1)p_l + (n−n_k−n_l)q}.
/// Empty when r < 2.
inline std::optional<double> simple_pair_bracket(const ModelConfig& config) {
  if (config.num_clusters() < 2) return std::nullopt;
  const double n = double(config.n());
  const double q = config.q();
  const auto& cl = config.clusters();
  double lo = detail::kInf;
  for (const auto& c : cl) {
    const double nk = double(c.size);
    lo = std::min(lo, (nk - 2.0) * c.p * c.p + (n - nk) * q * q);
  }
  // (n_k−1)p_k + (n_l−1)p_l + (n−n_k−n_l)q = f_k + f_l + nq with
  // f_k = (n_k−1)p_k − n_k q, so the max over k≠l is the sum of the two
  // largest f_k.
  std::vector<double> f;
  f.reserve(cl.size());
  for (const auto& c : cl) f.push_back((double(c.size) - 1.0) * c.p - double(c.size) * q);
  const double hi = detail::top_two_sum(f) + n * q;
  return lo - q * hi;
}

/// Counting-algorithm conditions: "iso" (isolated nodes found) and "pair"
/// (clusters found).
inline std::vector<ConditionReport> check_simple(const ModelConfig& config) {
  const double n = double(config.n());
  const double q = config.q();
  const double logn = std::log(n);
  std::vector<ConditionReport> out;

  double lhs_iso = detail::kInf;
  double max_np = 0.0;
  double max_np2 = 0.0;
  for (const auto& c : config.clusters()) {
    const double nk = double(c.size);
    const double t = (nk - 1.0) * (c.p - q);
    lhs_iso = std::min(lhs_iso, t * t);
    max_np = std::max(max_np, nk * c.p);
    max_np2 = std::max(max_np2, nk * c.p * c.p);
  }
  out.push_back(
      detail::at_least("thm5.iso", lhs_iso, 19.0 * (1.0 - q) * (max_np + n * q) * logn, 1.0));

  const auto bracket = simple_pair_bracket(config);
  if (!bracket) {
    out.push_back(detail::not_applicable("thm5.pair", Sense::at_least, "requires r >= 2"));
  } else {
    auto r = detail::at_least("thm5.pair", (*bracket) * (*bracket),
                              26.0 * (1.0 - q * q) * (max_np2 + n * q * q) * logn, 1.0);
    if (*bracket < 0.0) {
      r.satisfied = false;
      r.margin = 0.0;
      r.note = "bracket is negative";
    }
    out.push_back(r);
  }
  return out;
}

enum class Regime { impossible, hard, easy, simple, unknown, contradiction };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::impossible: return "impossible";
    case Regime::hard: return "hard";
    case Regime::easy: return "easy";
    case Regime::simple: return "simple";
    case Regime::unknown: return "unknown";
    case Regime::contradiction: return "contradiction";
  }
  return "unknown";
}

struct ClassifyOptions {
  double C = 1.0;
  double eta = 2.0;
  std::vector<double> alpha_grid = default_alpha_grid();
  double summability_threshold = kDefaultSummabilityThreshold;
};

struct RegimeReport {
  std::vector<ConditionReport> thm1;
  std::vector<ConditionReport> thm2;
  HardReport thm3;
  std::vector<ConditionReport> thm4;
  std::vector<ConditionReport> thm5;
  bool thm1_holds = false;
  bool thm2_holds = false;
  bool thm3_holds = false;
  bool thm4_holds = false;
  bool thm5_holds = false;
  Regime regime = Regime::unknown;
  ClassifyOptions options;
};

namespace detail {

inline bool all_satisfied(const std::vector<ConditionReport>& v) {
  for (const auto& r : v)
    if (!r.satisfied) return false;
  return !v.empty();
}

inline bool any_satisfied(const std::vector<ConditionReport>& v) {
  for (const auto& r : v)
    if (r.satisfied) return true;
  return false;
}

inline bool is_summability(const ConditionReport& r) { return r.id.rfind("thm1.iv", 0) == 0; }

}  // namespace detail

/// Theorem-1 verdict: (i)-(iii) hold and (iv) holds for at least one alpha.
inline bool thm1_holds(const std::vector<ConditionReport>& reports) {
  bool core = true;
  bool summable = false;
  for (const auto& r : reports) {
    if (detail::is_summability(r))
      summable = summable || r.satisfied;
    else
      core = core && r.satisfied;
  }
  return core && summable;
}

/// Smallest margin across the Theorem-1 conditions, taking the best alpha
/// for the summability condition.
inline double thm1_binding_margin(const std::vector<ConditionReport>& reports) {
  double core = detail::kInf;
  double best_alpha = 0.0;
  for (const auto& r : reports) {
    if (detail::is_summability(r))
      best_alpha = std::max(best_alpha, r.margin);
    else
      core = std::min(core, r.margin);
  }
  return std::min(core, best_alpha);
}

inline double binding_margin(const std::vector<ConditionReport>& reports) {
  double m = detail::kInf;
  for (const auto& r : reports)
    if (r.applicable) m = std::min(m, r.margin);
  return m;
}

inline RegimeReport classify(const ModelConfig& config, const ClassifyOptions& opt = {}) {
  RegimeReport rep;
  rep.options = opt;
  rep.thm1 = check_thm_convex1(config, opt.C, opt.alpha_grid, opt.summability_threshold);
  rep.thm2 = check_thm_convex2(config, opt.C);
  rep.thm3 = check_thm_hard(config, opt.eta);
  rep.thm4 = check_impossible(config);
  rep.thm5 = check_simple(config);

  rep.thm1_holds = thm1_holds(rep.thm1);
  rep.thm2_holds = detail::all_satisfied(rep.thm2);
  rep.thm3_holds = rep.thm3.condition.satisfied;
  rep.thm4_holds = detail::any_satisfied(rep.thm4);
  rep.thm5_holds = detail::all_satisfied(rep.thm5);

  const bool positive = rep.thm1_holds || rep.thm2_holds || rep.thm3_holds || rep.thm5_holds;
  if (rep.thm4_holds)
    rep.regime = positive ? Regime::contradiction : Regime::impossible;
  else if (rep.thm5_holds)
    rep.regime = Regime::simple;
  else if (rep.thm1_holds || rep.thm2_holds)
    rep.regime = Regime::easy;
  else if (rep.thm3_holds)
    rep.regime = Regime::hard;
  else
    rep.regime = Regime::unknown;
  return rep;
}

// ---- serialization -------------------------------------------------------

namespace detail {

/// JSON has no infinities or NaN; they are written as strings.
inline nlohmann::json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace detail

inline nlohmann::json to_json(const ConditionReport& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["sense"] = r.sense == Sense::at_least ? ">=" : "<=";
  j["applicable"] = r.applicable;
  j["lhs"] = detail::number_json(r.lhs);
  j["rhs"] = detail::number_json(r.rhs);
  j["constant"] = r.constant;
  j["margin"] = detail::number_json(r.margin);
  j["satisfied"] = r.satisfied;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline nlohmann::json to_json(const RegimeReport& rep) {
  auto list = [](const std::vector<ConditionReport>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : v) a.push_back(to_json(r));
    return a;
  };
  nlohmann::json j;
  j["regime"] = to_string(rep.regime);
  j["parameters"] = {{"C", rep.options.C},
                     {"eta", rep.options.eta},
                     {"alpha_grid", rep.options.alpha_grid},
                     {"summability_threshold", rep.options.summability_threshold}};
  j["thm1"] = {{"holds", rep.thm1_holds}, {"conditions", list(rep.thm1)}};
  j["thm2"] = {{"holds", rep.thm2_holds}, {"conditions", list(rep.thm2)}};
  j["thm3"] = {{"holds", rep.thm3_holds},
               {"conditions", nlohmann::json::array({to_json(rep.thm3.condition)})},
               {"failure_bound", detail::number_json(rep.thm3.failure_bound)}};
  j["thm4"] = {{"holds", rep.thm4_holds}, {"conditions", list(rep.thm4)}};
  j["thm5"] = {{"holds", rep.thm5_holds}, {"conditions", list(rep.thm5)}};
  return j;
}

namespace detail {

inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::vector<const ConditionReport*> flat_conditions(const RegimeReport& rep) {
  std::vector<const ConditionReport*> out;
  for (const auto* v : {&rep.thm1, &rep.thm2})
    for (const auto& r : *v) out.push_back(&r);
  out.push_back(&rep.thm3.condition);
  for (const auto* v : {&rep.thm4, &rep.thm5})
    for (const auto& r : *v) out.push_back(&r);
  return out;
}

}  // namespace detail

/// Fixed column set for a given alpha grid: config_id, then lhs/rhs/margin
/// per condition in report order, then regime.
inline std::string regime_csv_header(const RegimeReport& rep) {
  std::string h = "config_id";
  for (const auto* r : detail::flat_conditions(rep))
    h += "," + r->id + ".lhs," + r->id + ".rhs," + r->id + ".margin";
  h += ",regime";
  return h;
}

inline std::string regime_csv_row(const std::string& config_id, const RegimeReport& rep) {
  std::string row = config_id;
  for (const auto* r : detail::flat_conditions(rep))
    row += "," + detail::csv_number(r->lhs) + "," + detail::csv_number(r->rhs) + "," +
           detail::csv_number(r->margin);
  row += ",";
  row += to_string(rep.regime);
  return row;
}

}  // namespace hsbm
