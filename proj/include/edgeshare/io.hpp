// Copyright 2026 The edgeshare Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EDGESHARE_IO_HPP_
#define EDGESHARE_IO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgeshare/model.hpp"

namespace edgeshare {

// Raised for unreadable or unwritable files, as opposed to malformed content.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kScenarioVersion = 1;

// Scenario document:
//   {version, n, k, seed, players: [{capacity, requests, utility: {kind, mu | coeffs}, w, zeta}]}
inline nlohmann::json ScenarioToJson(const Scenario& s) {
  nlohmann::json doc;
  doc["version"] = kScenarioVersion;
  doc["n"] = s.num_players;
  doc["k"] = s.num_resources;
  doc["seed"] = s.seed ? nlohmann::json(*s.seed) : nlohmann::json(nullptr);
  nlohmann::json players = nlohmann::json::array();
  const std::size_t count = std::min({s.capacities.size(), s.requests.size(), s.utilities.size(),
                                      s.weights.size()});
  for (std::size_t p = 0; p < count; ++p) {
    nlohmann::json pj;
    pj["capacity"] = s.capacities[p];
    pj["requests"] = s.requests[p].ToRows();
    nlohmann::json u;
    u["kind"] = ToString(s.utilities[p].kind);
    if (s.utilities[p].kind == UtilityKind::kSigmoid) {
      u["mu"] = s.utilities[p].mu;
    } else if (!s.utilities[p].coeffs.empty()) {
      u["coeffs"] = s.utilities[p].coeffs.ToRows();
    }
    pj["utility"] = u;
    pj["w"] = s.weights[p].own;
    pj["zeta"] = s.weights[p].shared;
    players.push_back(std::move(pj));
  }
  doc["players"] = std::move(players);
  return doc;
}

inline Scenario ScenarioFromJson(const nlohmann::json& doc) {
  try {
    if (doc.value("version", 0) != kScenarioVersion) {
      throw std::invalid_argument("scenario: unsupported version");
    }
    Scenario s;
    s.num_players = doc.at("n").get<std::size_t>();
    s.num_resources = doc.at("k").get<std::size_t>();
    if (doc.contains("seed") && !doc["seed"].is_null()) s.seed = doc["seed"].get<std::uint64_t>();
    for (const auto& pj : doc.at("players")) {
      s.capacities.push_back(pj.at("capacity").get<std::vector<double>>());
      s.requests.push_back(Matrix::FromRows(pj.at("requests").get<std::vector<std::vector<double>>>()));
      const auto& u = pj.at("utility");
      const std::string kind = u.at("kind").get<std::string>();
      if (kind == "sigmoid") {
        s.utilities.push_back(UtilitySpec::Sigmoid(u.at("mu").get<double>()));
      } else if (kind == "linear") {
        Matrix c;
        if (u.contains("coeffs")) {
          c = Matrix::FromRows(u["coeffs"].get<std::vector<std::vector<double>>>());
        }
        s.utilities.push_back(UtilitySpec::Linear(std::move(c)));
      } else {
        throw std::invalid_argument("scenario: unknown utility kind '" + kind + "'");
      }
      s.weights.push_back({pj.value("w", 1.0), pj.value("zeta", 1.0)});
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("scenario: ") + e.what());
  }
}

inline std::string ScenarioToString(const Scenario& s) { return ScenarioToJson(s).dump(2) + "\n"; }

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

inline Scenario ReadScenarioFile(const std::string& path) {
  const std::string text = ReadFile(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return ScenarioFromJson(doc);
}

inline void WriteScenarioFile(const std::string& path, const Scenario& s) {
  WriteFile(path, ScenarioToString(s));
}

// 64-bit FNV-1a, printed as the scenario digest.
inline std::string Digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- CSV ------------------------------------------------------------------

// Shortest text that parses back to the same double.
inline std::string FormatDouble(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline double ParseDouble(const std::string& field) {
  if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size()) throw std::invalid_argument("csv: bad number '" + field + "'");
  return v;
}

inline std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::vector<std::vector<std::string>> ReadCsv(const std::string& text,
                                                     const std::string& expected_header_prefix) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind(expected_header_prefix, 0) != 0) {
    throw std::invalid_argument("csv: unexpected header, want '" + expected_header_prefix + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(SplitCsvLine(line));
  }
  return rows;
}

// Members are written 1-based and ';'-separated, e.g. "1;3".
inline std::string MembersLabel(Coalition c) {
  std::string out;
  for (PlayerIndex p : c.members()) {
    if (!out.empty()) out += ';';
    out += std::to_string(p + 1);
  }
  return out;
}

// Coalition CSV: kind,mask,size,members,value,u_p1..u_pN. kind is "value" for
// v(S) rows and "fast" / "shapley" for the grand-coalition payoff rows.
struct CoalitionRow {
  std::string kind;
  std::uint32_t mask = 0;
  std::size_t size = 0;
  std::string members;
  double value = 0.0;
  std::vector<double> utilities;

  friend bool operator==(const CoalitionRow&, const CoalitionRow&) = default;
};

inline std::string CoalitionCsvHeader(std::size_t num_players) {
  std::string h = "kind,mask,size,members,value";
  for (std::size_t p = 0; p < num_players; ++p) h += ",u_p" + std::to_string(p + 1);
  return h;
}

inline std::string WriteCoalitionCsv(const std::vector<CoalitionRow>& rows, std::size_t num_players) {
  std::string out = CoalitionCsvHeader(num_players) + "\n";
  for (const auto& r : rows) {
    out += r.kind + "," + std::to_string(r.mask) + "," + std::to_string(r.size) + "," + r.members +
           "," + FormatDouble(r.value);
    for (double u : r.utilities) out += "," + FormatDouble(u);
    out += "\n";
  }
  return out;
}

inline std::vector<CoalitionRow> ReadCoalitionCsv(const std::string& text) {
  std::vector<CoalitionRow> out;
  for (const auto& f : ReadCsv(text, "kind,mask,size,members,value")) {
    if (f.size() < 5) throw std::invalid_argument("coalition csv: short row");
    CoalitionRow r{f[0], static_cast<std::uint32_t>(std::stoul(f[1])), std::stoul(f[2]), f[3],
                   ParseDouble(f[4]), {}};
    for (std::size_t i = 5; i < f.size(); ++i) r.utilities.push_back(ParseDouble(f[i]));
    out.push_back(std::move(r));
  }
  return out;
}

// Payoffs CSV: method,player,payoff,standalone,gain (player is 1-based).
struct PayoffRow {
  std::string method;
  std::size_t player = 0;
  double payoff = 0.0;
  double standalone = 0.0;
  double gain = 0.0;

  friend bool operator==(const PayoffRow&, const PayoffRow&) = default;
};

inline std::string WritePayoffCsv(const std::vector<PayoffRow>& rows) {
  std::string out = "method,player,payoff,standalone,gain\n";
  for (const auto& r : rows) {
    out += r.method + "," + std::to_string(r.player) + "," + FormatDouble(r.payoff) + "," +
           FormatDouble(r.standalone) + "," + FormatDouble(r.gain) + "\n";
  }
  return out;
}

inline std::vector<PayoffRow> ReadPayoffCsv(const std::string& text) {
  std::vector<PayoffRow> out;
  for (const auto& f : ReadCsv(text, "method,player,payoff,standalone,gain")) {
    if (f.size() != 5) throw std::invalid_argument("payoff csv: expected 5 fields");
    out.push_back({f[0], std::stoul(f[1]), ParseDouble(f[2]), ParseDouble(f[3]), ParseDouble(f[4])});
  }
  return out;
}

// Comparison CSV: n,m_per_player,k,mu,method,solves,median_ms. mu is empty for
// linear scenarios.
struct ComparisonRow {
  std::size_t n = 0;
  std::size_t m_per_player = 0;
  std::size_t k = 0;
  std::optional<double> mu;
  std::string method;
  std::uint64_t solves = 0;
  double median_ms = 0.0;

  friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

inline std::string WriteComparisonCsv(const std::vector<ComparisonRow>& rows) {
  std::string out = "n,m_per_player,k,mu,method,solves,median_ms\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.m_per_player) + "," + std::to_string(r.k) +
           "," + (r.mu ? FormatDouble(*r.mu) : std::string()) + "," + r.method + "," +
           std::to_string(r.solves) + "," + FormatDouble(r.median_ms) + "\n";
  }
  return out;
}

inline std::vector<ComparisonRow> ReadComparisonCsv(const std::string& text) {
  std::vector<ComparisonRow> out;
  for (const auto& f : ReadCsv(text, "n,m_per_player,k,mu,method,solves,median_ms")) {
    if (f.size() != 7) throw std::invalid_argument("comparison csv: expected 7 fields");
    ComparisonRow r{std::stoul(f[0]), std::stoul(f[1]), std::stoul(f[2]), std::nullopt, f[4],
                    std::stoull(f[5]), ParseDouble(f[6])};
    if (!f[3].empty()) r.mu = ParseDouble(f[3]);
    out.push_back(std::move(r));
  }
  return out;
}

// Long-format plot data: setting,method,metric,value.
struct PlotRow {
  std::string setting;
  std::string method;
  std::string metric;
  double value = 0.0;

  friend bool operator==(const PlotRow&, const PlotRow&) = default;
};

inline std::string WritePlotCsv(const std::vector<PlotRow>& rows) {
  std::string out = "setting,method,metric,value\n";
  for (const auto& r : rows) {
    out += r.setting + "," + r.method + "," + r.metric + "," + FormatDouble(r.value) + "\n";
  }
  return out;
}

inline std::vector<PlotRow> ReadPlotCsv(const std::string& text) {
  std::vector<PlotRow> out;
  for (const auto& f : ReadCsv(text, "setting,method,metric,value")) {
    if (f.size() != 4) throw std::invalid_argument("plot csv: expected 4 fields");
    out.push_back({f[0], f[1], f[2], ParseDouble(f[3])});
  }
  return out;
}

}  // namespace edgeshare

#endif  // EDGESHARE_IO_HPP_
