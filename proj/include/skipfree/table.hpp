#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "skipfree/chain.hpp"
#include "skipfree/errors.hpp"

namespace skipfree {

/*
 * A tabulated hitting-time law. For discrete chains the support holds integer
 * step counts and mass_or_density the point masses; for continuous chains the
 * support is a time grid and mass_or_density the density at each grid point.
 * tail_bound is the mass beyond the last support point.
 */
struct DistributionTable {
  TimeKind kind = TimeKind::discrete;
  std::vector<double> support;
  std::vector<double> mass_or_density;
  std::vector<double> cumulative;
  double tail_bound = 0.0;
  std::string method;  // which engine produced the values

  std::size_t size() const noexcept { return support.size(); }
  bool empty() const noexcept { return support.empty(); }
};

// 17 significant digits, shortest %g-style layout. Round-trips every double.
inline std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string format_support(TimeKind kind, double x) {
  if (kind == TimeKind::discrete) return std::to_string(static_cast<long long>(x));
  return format_number(x);
}

inline void write_csv(std::ostream& os, const DistributionTable& t) {
  os << "n_or_t,mass_or_density,cumulative\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    os << format_support(t.kind, t.support[i]) << ',' << format_number(t.mass_or_density[i]) << ','
       << format_number(t.cumulative[i]) << '\n';
}

inline void write_json(std::ostream& os, const DistributionTable& t) {
  auto array = [&](const std::vector<double>& v, bool is_support) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i)
      os << (i ? "," : "") << (is_support ? format_support(t.kind, v[i]) : format_number(v[i]));
    os << ']';
  };
  os << "{\"kind\":\"" << to_string(t.kind) << "\",\"method\":\"" << t.method << "\",\"support\":";
  array(t.support, true);
  os << ",\"mass_or_density\":";
  array(t.mass_or_density, false);
  os << ",\"cumulative\":";
  array(t.cumulative, false);
  os << ",\"tail_bound\":" << format_number(t.tail_bound) << "}\n";
}

// Text histogram of mass_or_density; the largest value spans `width` columns.
inline void write_histogram(std::ostream& os, const DistributionTable& t, std::size_t width = 60) {
  double peak = 0.0;
  std::size_t label_width = 1;
  for (std::size_t i = 0; i < t.size(); ++i) {
    peak = std::max(peak, t.mass_or_density[i]);
    label_width = std::max(label_width, format_support(t.kind, t.support[i]).size());
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::string label = format_support(t.kind, t.support[i]);
    const double v = std::max(0.0, t.mass_or_density[i]);
    const auto bar = peak > 0.0 ? static_cast<std::size_t>(std::lround(static_cast<double>(width) * v / peak)) : 0;
    os << std::string(label_width - label.size(), ' ') << label << " |" << std::string(bar, '#')
       << std::string(width - bar, ' ') << "| " << format_number(t.mass_or_density[i]) << '\n';
  }
}

inline double parse_number(std::string_view field) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw SchemaError("not a number: '" + std::string(field) + "'");
  return v;
}

/// Reads the CSV layout produced by write_csv. tail_bound is not part of the CSV
/// and comes back as zero.
inline DistributionTable parse_csv(std::string_view text, TimeKind kind) {
  DistributionTable t;
  t.kind = kind;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "n_or_t,mass_or_density,cumulative")
    throw SchemaError("missing CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw SchemaError("CSV row needs three fields: '" + line + "'");
    const std::string_view sv(line);
    t.support.push_back(parse_number(sv.substr(0, c1)));
    t.mass_or_density.push_back(parse_number(sv.substr(c1 + 1, c2 - c1 - 1)));
    t.cumulative.push_back(parse_number(sv.substr(c2 + 1)));
  }
  return t;
}

}  // namespace skipfree
