#include "fmvol/csv.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fmvol/error.hpp"

namespace fmvol::csv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool read_int(std::string_view& s, std::size_t digits, int& out) {
  if (s.size() < digits) return false;
  int v = 0;
  for (std::size_t i = 0; i < digits; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  s.remove_prefix(digits);
  return true;
}

bool expect(std::string_view& s, char c) {
  if (s.empty() || s.front() != c) return false;
  s.remove_prefix(1);
  return true;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::InvalidConfig, "cannot open output file '" + path + "'");
  return out;
}

}  // namespace

TimeMapping parse_time_mapping(std::string_view name) {
  if (name == "auto") return TimeMapping::Auto;
  if (name == "identity") return TimeMapping::Identity;
  if (name == "rescale") return TimeMapping::Rescale;
  throw Error(Errc::InvalidConfig, "unknown time mapping '" + std::string(name) + "'");
}

std::string_view to_string(TimeMapping mapping) noexcept {
  switch (mapping) {
    case TimeMapping::Auto: return "auto";
    case TimeMapping::Identity: return "identity";
    case TimeMapping::Rescale: return "rescale";
  }
  return "auto";
}

std::optional<double> parse_iso8601(std::string_view s) {
  s = trim(s);
  int y, mo, d, h, mi, sec;
  if (!read_int(s, 4, y) || !expect(s, '-') || !read_int(s, 2, mo) || !expect(s, '-') || !read_int(s, 2, d))
    return std::nullopt;
  if (s.empty() || (s.front() != 'T' && s.front() != ' ')) return std::nullopt;
  s.remove_prefix(1);
  if (!read_int(s, 2, h) || !expect(s, ':') || !read_int(s, 2, mi) || !expect(s, ':') || !read_int(s, 2, sec))
    return std::nullopt;
  double frac = 0.0;
  if (!s.empty() && (s.front() == '.' || s.front() == ',')) {
    s.remove_prefix(1);
    double scale = 0.1;
    std::size_t used = 0;
    while (used < s.size() && s[used] >= '0' && s[used] <= '9') {
      frac += (s[used] - '0') * scale;
      scale *= 0.1;
      ++used;
    }
    if (used == 0) return std::nullopt;
    s.remove_prefix(used);
  }
  int offset_seconds = 0;
  if (!s.empty()) {
    if (s.front() == 'Z') {
      s.remove_prefix(1);
    } else if (s.front() == '+' || s.front() == '-') {
      const int sign = s.front() == '+' ? 1 : -1;
      s.remove_prefix(1);
      int oh, om = 0;
      if (!read_int(s, 2, oh)) return std::nullopt;
      if (!s.empty() && s.front() == ':') s.remove_prefix(1);
      if (!s.empty() && !read_int(s, 2, om)) return std::nullopt;
      offset_seconds = sign * (oh * 3600 + om * 60);
    }
  }
  if (!s.empty()) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;
  const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + sec + frac - offset_seconds;
}

LoadedSeries parse_series(std::istream& in, double horizon, TimeMapping mapping) {
  std::vector<double> times, values;
  bool iso = false;
  bool numeric = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto comma = view.find(',');
    if (comma == std::string_view::npos)
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 'time,value'");
    const auto time_text = view.substr(0, comma);
    auto value_text = view.substr(comma + 1);
    if (const auto extra = value_text.find(','); extra != std::string_view::npos) value_text = value_text.substr(0, extra);

    std::optional<double> t = parse_real(time_text);
    bool this_iso = false;
    if (!t) {
      t = parse_iso8601(time_text);
      this_iso = t.has_value();
    }
    const auto v = parse_real(value_text);
    if (!t || !v) {
      if (times.empty() && !iso && !numeric) continue;  // header
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": cannot parse '" + std::string(view) + "'");
    }
    if ((this_iso && numeric) || (!this_iso && iso))
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": mixed numeric and ISO-8601 times");
    iso = iso || this_iso;
    numeric = numeric || !this_iso;
    times.push_back(*t);
    values.push_back(*v);
  }
  if (times.size() < 2) throw Error(Errc::TooFewPoints, "CSV input holds fewer than two observations");

  AffineTimeMap map;
  map.iso8601 = iso;
  bool rescale = mapping == TimeMapping::Rescale || iso;
  if (mapping == TimeMapping::Auto && !rescale) {
    const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
    rescale = *lo < 0.0 || *hi > horizon;
  }
  if (rescale) {
    const double first = times.front();
    const double span = times.back() - first;
    if (!(span > 0.0)) throw Error(Errc::NonMonotoneTimes, "time stamps do not increase");
    map.offset = first;
    map.scale = horizon / span;
    map.rescaled = true;
    for (double& t : times) t = std::clamp((t - first) * map.scale, 0.0, horizon);
    times.back() = horizon;
  }
  return {ObservationSeries::validate(std::move(times), std::move(values), horizon), map};
}

LoadedSeries read_series(const std::string& path, double horizon, TimeMapping mapping) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open input file '" + path + "'");
  return parse_series(in, horizon, mapping);
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_series(std::ostream& out, const ObservationSeries& series) {
  out << "time,value\n";
  const auto t = series.times();
  const auto x = series.values();
  for (std::size_t i = 0; i < t.size(); ++i) out << format_double(t[i]) << ',' << format_double(x[i]) << '\n';
}

void write_series(const std::string& path, const ObservationSeries& series) {
  auto out = open_output(path);
  write_series(out, series);
}

std::vector<double> join_truth(std::span<const double> taus, const ObservationSeries& truth) {
  const auto t = truth.times();
  const auto x = truth.values();
  const double tolerance = 0.5 * truth.mesh().max_gap * (1.0 + 1e-9);
  std::vector<double> joined;
  joined.reserve(taus.size());
  for (const double tau : taus) {
    const auto it = std::lower_bound(t.begin(), t.end(), tau);
    std::size_t best = static_cast<std::size_t>(it - t.begin());
    if (best == t.size() || (best > 0 && std::fabs(t[best - 1] - tau) <= std::fabs(t[best] - tau))) {
      best = best == 0 ? 0 : best - 1;
    }
    if (std::fabs(t[best] - tau) > tolerance)
      throw Error(Errc::JoinMismatch, "no truth observation within half a step of tau=" + format_double(tau));
    joined.push_back(x[best]);
  }
  return joined;
}

void emit_plot_data(const SpotPath& path, std::ostream& out, const ObservationSeries* truth) {
  if (path.taus.empty()) throw Error(Errc::EmptyTaus, "spot path has no estimation times");
  std::vector<double> joined;
  if (truth) joined = join_truth(path.taus, *truth);
  out << (truth ? "tau,estimate,truth\n" : "tau,estimate\n");
  for (std::size_t i = 0; i < path.taus.size(); ++i) {
    out << format_double(path.taus[i]) << ',' << format_double(path.values[i]);
    if (truth) out << ',' << format_double(joined[i]);
    out << '\n';
  }
}

void emit_plot_data(const SpotPath& path, const std::string& out_path, const ObservationSeries* truth) {
  auto out = open_output(out_path);
  emit_plot_data(path, out, truth);
}

}  // namespace fmvol::csv
