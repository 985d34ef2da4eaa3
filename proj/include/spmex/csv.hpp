#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spmex {

struct TimeseriesRecord {
  double t = 0, I = 0;
  // plant outputs
  double V = 0, T = 0, dt_b = 0;
  double c_ss_neg = 0, c_ss_pos = 0, c_avg_neg = 0, c_avg_pos = 0, soc = 0;
  // noisy measurements
  double V_meas = 0, dt_meas = 0;
  // observer estimates
  double V_hat = 0, dt_hat = 0;
  double c_ss_neg_hat = 0, c_ss_pos_hat = 0, c_avg_neg_hat = 0, c_avg_pos_hat = 0, soc_hat = 0;
  double c_ss_pos_check = 0, c_avg_neg_check = 0;
  int clamp_v = 0, clamp_e = 0;
};

/// Fixed column contract; see docs/output-format.md.
inline const char* csv_header() {
  return "t_s,I_A,V_V,T_K,dt_m,c_ss_neg,c_ss_pos,c_avg_neg,c_avg_pos,soc,"
         "V_meas_V,dt_meas_m,V_hat_V,dt_hat_m,c_ss_neg_hat,c_ss_pos_hat,"
         "c_avg_neg_hat,c_avg_pos_hat,soc_hat,c_ss_pos_check,c_avg_neg_check,"
         "clamp_v,clamp_e";
}

namespace detail {

inline void append_g17(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

inline std::string format_record(const TimeseriesRecord& r) {
  std::string line;
  line.reserve(560);
  const double cols[] = {r.t, r.I, r.V, r.T, r.dt_b, r.c_ss_neg, r.c_ss_pos,
                         r.c_avg_neg, r.c_avg_pos, r.soc, r.V_meas, r.dt_meas,
                         r.V_hat, r.dt_hat, r.c_ss_neg_hat, r.c_ss_pos_hat,
                         r.c_avg_neg_hat, r.c_avg_pos_hat, r.soc_hat,
                         r.c_ss_pos_check, r.c_avg_neg_check};
  for (double c : cols) {
    append_g17(line, c);
    line += ',';
  }
  line += std::to_string(r.clamp_v);
  line += ',';
  line += std::to_string(r.clamp_e);
  return line;
}

} // namespace detail

inline void emit_csv(const std::vector<TimeseriesRecord>& records, const std::string& path) {
  if (records.empty())
    throw std::invalid_argument("emit_csv: no records to write");
  std::ofstream out(path, std::ios::binary); // binary keeps line endings fixed
  if (!out)
    throw std::runtime_error("emit_csv: cannot open " + path);
  out << csv_header() << '\n';
  for (const auto& r : records) out << detail::format_record(r) << '\n';
  if (!out)
    throw std::runtime_error("emit_csv: write failed for " + path);
}

inline std::vector<TimeseriesRecord> parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("parse_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("parse_csv: " + path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header())
    throw std::runtime_error("parse_csv: " + path + " has an unexpected header");

  std::vector<TimeseriesRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> f;
    f.reserve(23);
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        f.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("parse_csv: bad number '" + cell + "' at line " +
                                 std::to_string(line_no));
      }
    }
    if (f.size() != 23)
      throw std::runtime_error("parse_csv: expected 23 columns at line " +
                               std::to_string(line_no));
    TimeseriesRecord r;
    r.t = f[0]; r.I = f[1]; r.V = f[2]; r.T = f[3]; r.dt_b = f[4];
    r.c_ss_neg = f[5]; r.c_ss_pos = f[6]; r.c_avg_neg = f[7]; r.c_avg_pos = f[8];
    r.soc = f[9]; r.V_meas = f[10]; r.dt_meas = f[11]; r.V_hat = f[12]; r.dt_hat = f[13];
    r.c_ss_neg_hat = f[14]; r.c_ss_pos_hat = f[15]; r.c_avg_neg_hat = f[16];
    r.c_avg_pos_hat = f[17]; r.soc_hat = f[18]; r.c_ss_pos_check = f[19];
    r.c_avg_neg_check = f[20];
    r.clamp_v = static_cast<int>(f[21]); r.clamp_e = static_cast<int>(f[22]);
    records.push_back(r);
  }
  if (records.empty())
    throw std::runtime_error("parse_csv: " + path + " has no data rows");
  return records;
}

/** Plot-oriented companion format: six whitespace-separated blocks (current,
 *  voltage, expansion, temperature, positive concentrations, negative
 *  concentrations + SOC), each with its own sub-header, separated by blank
 *  lines so plotting tools can address them by block index. */
inline void emit_plotdata(const std::vector<TimeseriesRecord>& records,
                          const std::string& path) {
  if (records.empty())
    throw std::invalid_argument("emit_plotdata: no records to write");
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("emit_plotdata: cannot open " + path);

  auto block = [&](const char* title, const char* cols, auto&& row) {
    out << "# " << title << '\n' << "# " << cols << '\n';
    for (const auto& r : records) {
      std::string line;
      row(r, line);
      out << line << '\n';
    }
    out << '\n';
  };
  auto put = [](std::string& line, double v) {
    if (!line.empty()) line += ' ';
    detail::append_g17(line, v);
  };

  block("current", "t_s I_A", [&](const TimeseriesRecord& r, std::string& l) {
    put(l, r.t); put(l, r.I);
  });
  block("voltage", "t_s V_V V_meas_V V_hat_V", [&](const TimeseriesRecord& r, std::string& l) {
    put(l, r.t); put(l, r.V); put(l, r.V_meas); put(l, r.V_hat);
  });
  block("expansion", "t_s dt_m dt_meas_m dt_hat_m", [&](const TimeseriesRecord& r, std::string& l) {
    put(l, r.t); put(l, r.dt_b); put(l, r.dt_meas); put(l, r.dt_hat);
  });
  block("temperature", "t_s T_K", [&](const TimeseriesRecord& r, std::string& l) {
    put(l, r.t); put(l, r.T);
  });
  block("positive_concentration", "t_s c_ss_pos c_ss_pos_hat c_ss_pos_check c_avg_pos c_avg_pos_hat",
        [&](const TimeseriesRecord& r, std::string& l) {
          put(l, r.t); put(l, r.c_ss_pos); put(l, r.c_ss_pos_hat); put(l, r.c_ss_pos_check);
          put(l, r.c_avg_pos); put(l, r.c_avg_pos_hat);
        });
  block("negative_concentration_soc",
        "t_s c_ss_neg c_ss_neg_hat c_avg_neg c_avg_neg_hat c_avg_neg_check soc soc_hat",
        [&](const TimeseriesRecord& r, std::string& l) {
          put(l, r.t); put(l, r.c_ss_neg); put(l, r.c_ss_neg_hat); put(l, r.c_avg_neg);
          put(l, r.c_avg_neg_hat); put(l, r.c_avg_neg_check); put(l, r.soc); put(l, r.soc_hat);
        });
  if (!out)
    throw std::runtime_error("emit_plotdata: write failed for " + path);
}

} // namespace spmex
