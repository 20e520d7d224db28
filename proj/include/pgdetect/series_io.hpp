#pragma once

// Plain-text series files: optional time column (seconds) and a value
// column, '#'-prefixed header lines that may carry "dt=<seconds>" and
// "units=<text>". Columns are separated by whitespace or commas.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pgdetect/core_model.hpp"
#include "pgdetect/error.hpp"

namespace pgdetect {

inline constexpr double kSpacingTolerance = 1e-6;

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' ||
                               line[i] == '\r')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',' &&
           line[i] != '\r') {
      ++i;
    }
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    // from_chars rejects "nan"/"inf" spellings some writers use; report them as non-finite.
    if (s == "nan" || s == "NaN" || s == "inf" || s == "-inf" || s == "Inf" || s == "-Inf") {
      return std::numeric_limits<double>::quiet_NaN();
    }
    return std::nullopt;
  }
  return v;
}

} // namespace detail

struct SeriesFileInfo {
  std::optional<double> header_dt;
  std::string units;
  bool has_time_column = false;
};

/// Parses a series from text. `origin` names the source in error messages.
inline TimeSeries parse_series(std::istream& in, const std::string& origin,
                               SeriesFileInfo* info = nullptr) {
  SeriesFileInfo meta;
  std::vector<double> times;
  std::vector<double> values;
  std::size_t columns = 0;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw IngestionError(origin + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv(line);
    const auto first = sv.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    sv.remove_prefix(first);
    if (sv.front() == '#') {
      sv.remove_prefix(1);
      for (auto tok : detail::split_fields(sv)) {
        if (tok.starts_with("dt=")) {
          const auto v = detail::parse_double(tok.substr(3));
          if (!v || !(*v > 0.0) || !std::isfinite(*v)) fail("bad dt header value");
          meta.header_dt = *v;
        } else if (tok.starts_with("units=")) {
          meta.units = std::string(tok.substr(6));
        }
      }
      continue;
    }
    const auto fields = detail::split_fields(sv);
    if (columns == 0) {
      columns = fields.size();
      if (columns != 1 && columns != 2) fail("expected 1 or 2 columns");
    } else if (fields.size() != columns) {
      fail("expected " + std::to_string(columns) + " columns");
    }
    std::vector<double> row;
    for (auto f : fields) {
      const auto v = detail::parse_double(f);
      if (!v) fail("cannot parse '" + std::string(f) + "'");
      if (!std::isfinite(*v)) fail("non-finite value (data row " + std::to_string(values.size()) + ")");
      row.push_back(*v);
    }
    if (columns == 2) times.push_back(row[0]);
    values.push_back(row.back());
  }

  double dt = 0.0;
  if (columns == 2) {
    meta.has_time_column = true;
    if (times.size() < 2) throw IngestionError(origin + ": too few rows to infer dt");
    dt = times[1] - times[0];
    if (!(dt > 0.0)) throw IngestionError(origin + ": time column is not increasing at data row 1");
    for (std::size_t j = 1; j < times.size(); ++j) {
      const double step = times[j] - times[j - 1];
      if (std::abs(step - dt) > kSpacingTolerance * dt) {
        throw IngestionError(origin + ": non-uniform sampling at data row " + std::to_string(j) +
                             " (step " + std::to_string(step) + " vs " + std::to_string(dt) + ")");
      }
    }
    if (meta.header_dt && std::abs(*meta.header_dt - dt) > kSpacingTolerance * dt) {
      throw IngestionError(origin + ": header dt disagrees with the time column");
    }
  } else {
    if (!meta.header_dt) {
      throw IngestionError(origin + ": value-only file needs a '# dt=<seconds>' header");
    }
    dt = *meta.header_dt;
  }
  if (info) *info = meta;
  try {
    return {std::move(values), dt};
  } catch (const InvalidInput& e) {
    throw IngestionError(origin + ": " + e.what());
  }
}

inline TimeSeries load_series(const std::filesystem::path& path, SeriesFileInfo* info = nullptr) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open series file " + path.string());
  return parse_series(in, path.string(), info);
}

/// Writes a two-column file (t_j, x_j) with a dt header; load_series reads it back.
inline void save_series(const TimeSeries& x, const std::filesystem::path& path,
                        const std::string& units = "") {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write series file " + path.string());
  out.precision(17);
  out << "# dt=" << x.dt();
  if (!units.empty()) out << " units=" << units;
  out << '\n';
  for (std::size_t j = 0; j < x.size(); ++j) out << x.time(j) << ' ' << x.samples()[j] << '\n';
}

} // namespace pgdetect
