#pragma once

// The six example configuration families. Every unspecified constant is a
// named parameter with default 1 unless noted; example 6 has no defaults.
//
//  1  (n − √n, n^{-2/3}), (√n, 1/log n); q = n^{-2/3-0.01}
//  2  (n − k s, c_big n^{-1/3+eps}), k = n^{1/6} clusters (s = √n, c_small/log n);
//     q = c_q n^{-2/3+3 eps}
//  3  m clusters (ceil(c_size √log n), c_tiny), √n clusters sharing the rest
//     with p = c_p log n/√n; q = c_q log n/n
//  4  n^{1-eps} clusters (n^eps/2, c_small), (n/2, c_big n^{-alpha} log n);
//     q = c_q n^{-beta} log n
//  5  clusters (c_size log n, c_small), m clusters (√(n log n),
//     c_big √(log n/n)); q = c_q log n/n
//  6  (n1_frac n, q + f n^{-f_exp}), (n^nmin_exp, p2), clusters (n^n3_exp, p3)
//     filling the rest; q given
//
// Fractional counts and sizes are rounded; the largest cluster absorbs the
// difference so the total is n.

#include "hsbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsbm {

struct Preset {
  ModelConfig config;
  std::vector<std::string> warnings;
};

using PresetParams = std::map<std::string, double>;

namespace detail {

struct ParamReader {
  int id;
  const PresetParams& given;
  std::set<std::string> known;

  double get(const std::string& name, double fallback) {
    known.insert(name);
    const auto it = given.find(name);
    return it == given.end() ? fallback : it->second;
  }
  double required(const std::string& name) {
    known.insert(name);
    const auto it = given.find(name);
    if (it == given.end())
      throw ConfigError("example " + std::to_string(id) + " requires parameter '" + name + "'");
    return it->second;
  }
  void reject_unknown() const {
    for (const auto& [name, value] : given)
      if (!known.count(name))
        throw ConfigError("example " + std::to_string(id) + " has no parameter '" + name + "'");
  }
};

inline std::size_t to_count(double x, const char* what) {
  if (!(x >= 1.0) || !std::isfinite(x))
    throw ConfigError(std::string("example yields ") + what + " below 1 at this n");
  return std::size_t(x);
}

inline double probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ConfigError(std::string("example yields ") + what + " outside [0,1] at this n");
  return p;
}

/// Adds `count` clusters of (size, p); the caller fixes the remainder.
inline void add(std::vector<Cluster>& cl, std::size_t count, std::size_t size, double p) {
  for (std::size_t i = 0; i < count; ++i) cl.push_back({size, p});
}

inline std::size_t placed(const std::vector<Cluster>& cl) {
  std::size_t t = 0;
  for (const auto& c : cl) t += c.size;
  return t;
}

}  // namespace detail

inline Preset example_config(int id, std::size_t n, const PresetParams& params = {}) {
  detail::ParamReader in{id, params, {}};
  const double nd = double(n);
  if (n < 16) throw ConfigError("examples need n >= 16");
  const double logn = std::log(nd);
  std::vector<Cluster> cl;
  std::vector<std::string> warn;
  double q = 0.0;

  switch (id) {
    case 1: {
      const auto n2 = detail::to_count(std::round(std::sqrt(nd)), "cluster size");
      cl.push_back({n - n2, std::pow(nd, -2.0 / 3.0)});
      cl.push_back({n2, detail::probability(1.0 / logn, "p_2")});
      q = std::pow(nd, -2.0 / 3.0 - 0.01);
      break;
    }
    case 2: {
      const double eps = in.get("eps", 0.1);
      const double c_big = in.get("c_big", 1.0);
      const double c_small = in.get("c_small", 1.0);
      const double c_q = in.get("c_q", 1.0);
      const auto s = detail::to_count(std::round(std::sqrt(nd)), "cluster size");
      const auto k = detail::to_count(std::round(std::pow(nd, 1.0 / 6.0)), "cluster count");
      if (k * s >= n) throw ConfigError("example 2: small clusters exhaust n");
      cl.push_back({n - k * s, detail::probability(c_big * std::pow(nd, -1.0 / 3.0 + eps), "p_1")});
      detail::add(cl, k, s, detail::probability(c_small / logn, "p_2"));
      q = c_q * std::pow(nd, -2.0 / 3.0 + 3.0 * eps);
      if (!(eps > 0.0 && eps < 1.0 / 9.0))
        warn.push_back("example 2: eps outside (0, 1/9) puts q above p_1 asymptotically");
      break;
    }
    case 3: {
      const double m = in.get("m", 1.0);
      const double c_tiny = in.get("c_tiny", 1.0);
      const double c_size = in.get("c_size", 1.0);
      const double c_p = in.get("c_p", 1.0);
      const double c_q = in.get("c_q", 1.0);
      const auto mm = detail::to_count(std::round(m), "tiny cluster count");
      const auto s1 = detail::to_count(std::ceil(c_size * std::sqrt(logn)), "tiny cluster size");
      const auto big = detail::to_count(std::round(std::sqrt(nd)), "cluster count");
      if (mm * s1 + big > n) throw ConfigError("example 3: tiny clusters exhaust n");
      detail::add(cl, mm, s1, detail::probability(c_tiny, "p_1"));
      const std::size_t rest = n - mm * s1;
      const double p2 = detail::probability(c_p * logn / std::sqrt(nd), "p_2");
      const std::size_t base = rest / big;
      const std::size_t extra = rest - base * big;
      detail::add(cl, extra, base + 1, p2);
      detail::add(cl, big - extra, base, p2);
      q = c_q * logn / nd;
      if (double(mm) > nd / (2.0 * std::sqrt(logn)))
        warn.push_back("example 3: m exceeds n/(2 sqrt(log n))");
      if (double(mm) > logn * logn)
        warn.push_back("example 3: m is not polylogarithmic in n (m > log^2 n)");
      break;
    }
    case 4: {
      const double eps = in.get("eps", 0.3);
      const double alpha = in.get("alpha", 0.45);
      const double beta = in.get("beta", 0.9);
      const double c_small = in.get("c_small", 1.0);
      const double c_big = in.get("c_big", 1.0);
      const double c_q = in.get("c_q", 1.0);
      const auto s = detail::to_count(std::round(0.5 * std::pow(nd, eps)), "small cluster size");
      const auto k = detail::to_count(std::round(std::pow(nd, 1.0 - eps)), "small cluster count");
      if (k * s >= n) throw ConfigError("example 4: small clusters exhaust n");
      cl.push_back({n - k * s, detail::probability(c_big * std::pow(nd, -alpha) * logn, "p_big")});
      detail::add(cl, k, s, detail::probability(c_small, "p_small"));
      q = c_q * std::pow(nd, -beta) * logn;
      if (!(0.0 < alpha && alpha < beta && beta < 1.0))
        warn.push_back("example 4: requires 0 < alpha < beta < 1");
      if (!(0.5 * (1.0 - alpha) < eps && eps < 2.0 * (1.0 - alpha) && eps > 2.0 * alpha - beta))
        warn.push_back(
            "example 4: (eps, alpha, beta) outside the region 1/2(1-alpha) < eps < 2(1-alpha), "
            "eps > 2 alpha - beta");
      break;
    }
    case 5: {
      const double m = in.get("m", 1.0);
      const double c_size = in.get("c_size", 1.0);
      const double c_small = in.get("c_small", 1.0);
      const double c_big = in.get("c_big", 1.0);
      const double c_q = in.get("c_q", 1.0);
      const auto mm = detail::to_count(std::round(m), "large cluster count");
      const auto s1 = detail::to_count(std::round(c_size * logn), "small cluster size");
      const auto s2 = detail::to_count(std::round(std::sqrt(nd * logn)), "large cluster size");
      if (mm * s2 >= n) throw ConfigError("example 5: large clusters exhaust n");
      const std::size_t k1 = (n - mm * s2) / s1;
      const std::size_t extra = n - mm * s2 - k1 * s1;
      const double p2 = detail::probability(c_big * std::sqrt(logn / nd), "p_2");
      cl.push_back({s2 + extra, p2});
      detail::add(cl, mm - 1, s2, p2);
      detail::add(cl, k1, s1, detail::probability(c_small, "p_1"));
      q = c_q * logn / nd;
      break;
    }
    case 6: {
      const double n1_frac = in.required("n1_frac");
      const double nmin_exp = in.required("nmin_exp");
      const double n3_exp = in.required("n3_exp");
      q = in.required("q");
      const double p2 = in.required("p2");
      const double p3 = in.required("p3");
      const double f = in.required("f");
      const double f_exp = in.get("f_exp", 0.0);
      const auto n1 = detail::to_count(std::round(n1_frac * nd), "n_1");
      const auto nmin = detail::to_count(std::round(std::pow(nd, nmin_exp)), "n_min");
      const auto n3 = detail::to_count(std::round(std::pow(nd, n3_exp)), "n_3");
      if (n1 + nmin >= n) throw ConfigError("example 6: n_1 + n_min exceeds n");
      const std::size_t k3 = (n - n1 - nmin) / n3;
      const std::size_t extra = n - n1 - nmin - k3 * n3;
      cl.push_back({n1 + extra, detail::probability(q + f * std::pow(nd, -f_exp), "p_1")});
      cl.push_back({nmin, detail::probability(p2, "p_2")});
      detail::add(cl, k3, n3, detail::probability(p3, "p_3"));
      if (nmin > n3 || nmin > n1 + extra)
        warn.push_back("example 6: the n_min cluster is not the smallest");
      break;
    }
    default:
      throw ConfigError("example id must be 1..6");
  }
  in.reject_unknown();
  if (detail::placed(cl) != n) throw ConfigError("example sizes do not sum to n");
  return {ModelConfig(n, std::move(cl), q), std::move(warn)};
}

}  // namespace hsbm
