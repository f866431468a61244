// Copyright 2026 The QGDM Authors
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

#pragma once

// Report tables (CSV and JSON) and their readers.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qgdm/harness/batch.hpp"
#include "qgdm/harness/config.hpp"

namespace qgdm::harness {

inline constexpr std::string_view kCsvHeader =
    "scenario,method,episodes,cr_pct,sr_pct,n_col,hd_m,v_mean,a_mean,t_mean,rho_cll,rho_clr,"
    "rho_kl,lat_mean_ms,lat_max_ms";

/// A report row as written: numbers already at 4 decimals.
struct ReportRecord {
  std::string scenario;
  std::string method;
  std::size_t episodes = 0;
  double cr_pct = 0.0;
  double sr_pct = 0.0;
  std::size_t n_col = 0;
  double hd_m = 0.0;
  double v_mean = 0.0;
  double a_mean = 0.0;
  double t_mean = 0.0;
  double rho_cll = 0.0;
  double rho_clr = 0.0;
  double rho_kl = 0.0;
  double lat_mean_ms = 0.0;
  double lat_max_ms = 0.0;

  friend bool operator==(const ReportRecord&, const ReportRecord&) = default;
};

inline std::string fixed4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

inline double round4(double x) { return std::stod(fixed4(x)); }

inline ReportRecord to_record(const ReportRow& r) {
  const auto& m = r.metrics;
  return {r.scenario,          r.method,           m.episodes,           round4(m.cr_pct()),
          round4(m.sr_pct()),  m.n_col,            round4(m.hd()),       round4(m.v_mean()),
          round4(m.a_mean()),  round4(m.t_mean()), round4(m.rho_cll()),  round4(m.rho_clr()),
          round4(m.rho_kl()),  round4(m.latency_mean_ms()), round4(m.latency_max_ms())};
}

namespace detail {

inline bool needs_quoting(std::string_view s) {
  return s.find_first_of(",\"\n") != std::string_view::npos;
}

}  // namespace detail

inline std::string write_csv(const std::vector<ReportRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    if (detail::needs_quoting(r.scenario) || detail::needs_quoting(r.method)) {
      throw std::invalid_argument("write_csv: names must not contain commas or quotes");
    }
    out += r.scenario + ',' + r.method + ',' + std::to_string(r.episodes) + ',' +
           fixed4(r.cr_pct) + ',' + fixed4(r.sr_pct) + ',' + std::to_string(r.n_col);
    for (double x : {r.hd_m, r.v_mean, r.a_mean, r.t_mean, r.rho_cll, r.rho_clr, r.rho_kl,
                     r.lat_mean_ms, r.lat_max_ms}) {
      out += ',' + fixed4(x);
    }
    out += '\n';
  }
  return out;
}

inline std::vector<ReportRecord> read_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("read_csv: missing or unexpected header");
  }
  std::vector<ReportRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 15) throw std::invalid_argument("read_csv: expected 15 fields: " + line);
    ReportRecord r;
    r.scenario = f[0];
    r.method = f[1];
    r.episodes = std::stoull(f[2]);
    r.cr_pct = std::stod(f[3]);
    r.sr_pct = std::stod(f[4]);
    r.n_col = std::stoull(f[5]);
    r.hd_m = std::stod(f[6]);
    r.v_mean = std::stod(f[7]);
    r.a_mean = std::stod(f[8]);
    r.t_mean = std::stod(f[9]);
    r.rho_cll = std::stod(f[10]);
    r.rho_clr = std::stod(f[11]);
    r.rho_kl = std::stod(f[12]);
    r.lat_mean_ms = std::stod(f[13]);
    r.lat_max_ms = std::stod(f[14]);
    out.push_back(std::move(r));
  }
  return out;
}

/// A JSON array of objects keyed like the CSV columns.
inline std::string write_json(const std::vector<ReportRecord>& records) {
  std::string out = "[";
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    out += k == 0 ? "\n  {" : ",\n  {";
    out += "\"scenario\": " + nlohmann::json(r.scenario).dump();
    out += ", \"method\": " + nlohmann::json(r.method).dump();
    out += ", \"episodes\": " + std::to_string(r.episodes);
    out += ", \"cr_pct\": " + fixed4(r.cr_pct);
    out += ", \"sr_pct\": " + fixed4(r.sr_pct);
    out += ", \"n_col\": " + std::to_string(r.n_col);
    out += ", \"hd_m\": " + fixed4(r.hd_m);
    out += ", \"v_mean\": " + fixed4(r.v_mean);
    out += ", \"a_mean\": " + fixed4(r.a_mean);
    out += ", \"t_mean\": " + fixed4(r.t_mean);
    out += ", \"rho_cll\": " + fixed4(r.rho_cll);
    out += ", \"rho_clr\": " + fixed4(r.rho_clr);
    out += ", \"rho_kl\": " + fixed4(r.rho_kl);
    out += ", \"lat_mean_ms\": " + fixed4(r.lat_mean_ms);
    out += ", \"lat_max_ms\": " + fixed4(r.lat_max_ms);
    out += "}";
  }
  out += records.empty() ? "]\n" : "\n]\n";
  return out;
}

inline std::vector<ReportRecord> read_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_array()) throw std::invalid_argument("read_json: expected an array");
  std::vector<ReportRecord> out;
  for (const auto& o : j) {
    ReportRecord r;
    r.scenario = o.at("scenario").get<std::string>();
    r.method = o.at("method").get<std::string>();
    r.episodes = o.at("episodes").get<std::size_t>();
    r.cr_pct = o.at("cr_pct").get<double>();
    r.sr_pct = o.at("sr_pct").get<double>();
    r.n_col = o.at("n_col").get<std::size_t>();
    r.hd_m = o.at("hd_m").get<double>();
    r.v_mean = o.at("v_mean").get<double>();
    r.a_mean = o.at("a_mean").get<double>();
    r.t_mean = o.at("t_mean").get<double>();
    r.rho_cll = o.at("rho_cll").get<double>();
    r.rho_clr = o.at("rho_clr").get<double>();
    r.rho_kl = o.at("rho_kl").get<double>();
    r.lat_mean_ms = o.at("lat_mean_ms").get<double>();
    r.lat_max_ms = o.at("lat_max_ms").get<double>();
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<ReportRecord> to_records(const std::vector<ReportRow>& rows) {
  std::vector<ReportRecord> out;
  for (const auto& r : rows) out.push_back(to_record(r));
  return out;
}

inline std::string render_report(const std::vector<ReportRow>& rows, ReportFormat format) {
  const auto records = to_records(rows);
  return format == ReportFormat::Csv ? write_csv(records) : write_json(records);
}

/// Writes report.csv or report.json under `out_dir` and returns its path.
inline std::filesystem::path emit_report(const std::vector<ReportRow>& rows, ReportFormat format,
                                         const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto path = std::filesystem::path(out_dir) /
                    (format == ReportFormat::Csv ? "report.csv" : "report.json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to " + path.string());
  out << render_report(rows, format);
  out.close();
  if (!out) throw std::runtime_error("failed writing report " + path.string());
  return path;
}

}  // namespace qgdm::harness
