#pragma once

// Configuration files.
//
// Text form ('#' starts a comment; the cluster list may span lines):
//
//   n = 200
//   q = 0.05
//   gamma = 1            # optional, default 1
//   clusters = [(100, 0.5), (100, 0.5)]
//
// A cluster may carry a repeat count: "(100, 0.5) * 2". The JSON form is
// {"n": 200, "q": 0.05, "gamma": 1, "clusters": [{"size": 100, "p": 0.5,
// "count": 2}]} with "count" optional. Readers detect JSON by a leading '{'.
// Both writers print doubles in shortest round-trip form.

#include "hsbm/model.hpp"

#include "json.hpp"

#include <cctype>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace hsbm {

namespace detail {

inline std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

class ConfigParser {
 public:
  explicit ConfigParser(std::string text) : s_(std::move(text)) {}

  ModelConfig parse() {
    std::map<std::string, bool> seen;
    std::size_t n = 0;
    double q = -1.0;
    double gamma = 1.0;
    std::vector<Cluster> clusters;
    skip();
    while (pos_ < s_.size()) {
      const std::string key = ident();
      if (seen[key]) fail("duplicate key '" + key + "'");
      seen[key] = true;
      skip();
      expect('=');
      skip();
      if (key == "n")
        n = std::size_t(integer());
      else if (key == "q")
        q = number();
      else if (key == "gamma")
        gamma = number();
      else if (key == "clusters")
        clusters = cluster_list();
      else
        fail("unknown key '" + key + "'");
      skip();
    }
    if (!seen["n"] || !seen["q"] || !seen["clusters"])
      throw ConfigError("config must define n, q and clusters");
    return ModelConfig(n, std::move(clusters), q, gamma);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i)
      if (s_[i] == '\n') ++line;
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string ident() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a key");
    return s_.substr(start, pos_ - start);
  }

  double number() {
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const auto r = std::from_chars(first, s_.data() + s_.size(), v);
    if (r.ec != std::errc()) fail("expected a number");
    pos_ += std::size_t(r.ptr - first);
    return v;
  }

  long long integer() {
    long long v = 0;
    const char* first = s_.data() + pos_;
    const auto r = std::from_chars(first, s_.data() + s_.size(), v);
    if (r.ec != std::errc() || v < 0) fail("expected a nonnegative integer");
    pos_ += std::size_t(r.ptr - first);
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      fail("expected an integer");
    return v;
  }

  std::vector<Cluster> cluster_list() {
    std::vector<Cluster> out;
    expect('[');
    skip();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return out;
    }
    for (;;) {
      skip();
      expect('(');
      skip();
      const auto size = std::size_t(integer());
      skip();
      expect(',');
      skip();
      const double p = number();
      skip();
      expect(')');
      skip();
      long long count = 1;
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        skip();
        count = integer();
        skip();
      }
      for (long long i = 0; i < count; ++i) out.push_back({size, p});
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      expect(']');
      return out;
    }
  }

  std::string s_;
  std::size_t pos_ = 0;
};

/// Consecutive runs of identical clusters.
inline std::vector<std::pair<Cluster, std::size_t>> runs(const std::vector<Cluster>& cl) {
  std::vector<std::pair<Cluster, std::size_t>> out;
  for (const auto& c : cl) {
    if (!out.empty() && out.back().first == c)
      ++out.back().second;
    else
      out.push_back({c, 1});
  }
  return out;
}

}  // namespace detail

inline ModelConfig parse_config_text(const std::string& text) {
  return detail::ConfigParser(text).parse();
}

inline ModelConfig config_from_json(const nlohmann::json& j) {
  try {
    std::vector<Cluster> cl;
    for (const auto& c : j.at("clusters")) {
      const std::size_t count = c.contains("count") ? c.at("count").get<std::size_t>() : 1;
      for (std::size_t i = 0; i < count; ++i)
        cl.push_back({c.at("size").get<std::size_t>(), c.at("p").get<double>()});
    }
    const double gamma = j.contains("gamma") ? j.at("gamma").get<double>() : 1.0;
    return ModelConfig(j.at("n").get<std::size_t>(), std::move(cl), j.at("q").get<double>(), gamma);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config json: ") + e.what());
  }
}

inline nlohmann::json to_json(const ModelConfig& config) {
  nlohmann::json cl = nlohmann::json::array();
  for (const auto& [c, count] : detail::runs(config.clusters())) {
    nlohmann::json e{{"size", c.size}, {"p", c.p}};
    if (count > 1) e["count"] = count;
    cl.push_back(e);
  }
  return {{"n", config.n()}, {"q", config.q()}, {"gamma", config.gamma()}, {"clusters", cl}};
}

inline ModelConfig parse_config(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config json: ") + e.what());
    }
    return config_from_json(j);
  }
  return parse_config_text(text);
}

inline ModelConfig read_config(std::istream& is) {
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

inline std::string format_config_text(const ModelConfig& config) {
  std::string out = "n = " + std::to_string(config.n()) + "\n";
  out += "q = " + detail::shortest(config.q()) + "\n";
  out += "gamma = " + detail::shortest(config.gamma()) + "\n";
  out += "clusters = [";
  bool first = true;
  for (const auto& [c, count] : detail::runs(config.clusters())) {
    if (!first) out += ", ";
    first = false;
    out += "(" + std::to_string(c.size) + ", " + detail::shortest(c.p) + ")";
    if (count > 1) out += " * " + std::to_string(count);
  }
  out += "]\n";
  return out;
}

}  // namespace hsbm
