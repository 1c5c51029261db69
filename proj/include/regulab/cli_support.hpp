#pragma once

// Parsing and formatting helpers behind the regulab command-line tool:
// numbers, lists and grids from flag text, the `key = value` config format,
// and deterministic number formatting.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <vector>

#include "regulab/errors.hpp"
#include "regulab/numerics.hpp"

namespace regulab::cli {

using Settings = std::map<std::string, std::string>;

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// Parse a full string as a double; `key` names the setting in errors.
inline double parse_number(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
    throw InvalidArgument("--" + std::string(key) + ": expected a finite number, got '" + t + "'");
  return value;
}

inline std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
  if (out.empty()) throw InvalidArgument("--" + std::string(key) + ": empty list");
  return out;
}

/// `start:stop:count`, inclusive, count >= 1.
inline std::vector<double> parse_grid(std::string_view key, std::string_view text) {
  std::vector<std::string> parts;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3)
    throw InvalidArgument("--" + std::string(key) + ": expected start:stop:count, got '" + std::string(text) + "'");
  const double start = parse_number(key, parts[0]);
  const double stop = parse_number(key, parts[1]);
  const double count = parse_number(key, parts[2]);
  if (!(count >= 1.0) || count != std::floor(count) || count > 1e6)
    throw InvalidArgument("--" + std::string(key) + ": count must be a positive integer");
  const auto n = static_cast<long>(count);
  if (n == 1 && start != stop)
    throw InvalidArgument("--" + std::string(key) + ": a single-point grid needs start == stop");
  std::vector<double> out;
  for (long i = 0; i < n; ++i)
    out.push_back(i == n - 1 ? stop : start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

/// Flat `key = value` lines; `#` starts a comment; blank lines ignored.
inline Settings parse_config_text(std::string_view text, std::string_view origin = "config") {
  Settings out;
  std::stringstream ss{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(std::string(origin) + ":" + std::to_string(number) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw InvalidArgument(std::string(origin) + ":" + std::to_string(number) + ": empty key");
    out[key] = trim(std::string_view(body).substr(eq + 1));
  }
  return out;
}

inline Settings read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("--config: cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

/// Fixed 17-significant-digit rendering; round-trips every double.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline QuadratureSpec quadrature_from(const Settings& s) {
  QuadratureSpec q;
  q.rel_tol = parse_number("quadrature.rel_tol", s.at("quadrature.rel_tol"));
  q.abs_tol = parse_number("quadrature.abs_tol", s.at("quadrature.abs_tol"));
  const double subdiv = parse_number("quadrature.max_subdivisions", s.at("quadrature.max_subdivisions"));
  if (!(subdiv >= 1.0) || subdiv != std::floor(subdiv) || subdiv > 1e8)
    throw InvalidArgument("--quadrature.max_subdivisions: expected a positive integer");
  q.max_subdivisions = static_cast<int>(subdiv);
  q.tail_truncation_multiple =
      parse_number("quadrature.tail_truncation_multiple", s.at("quadrature.tail_truncation_multiple"));
  q.validate();
  return q;
}

/// Evaluate f(i) for i in [0, n) on a few threads and return the results in
/// index order. The first exception in index order is rethrown.
template <class R, class F>
std::vector<R> ordered_parallel_map(std::size_t n, F&& f) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          out[i] = f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace regulab::cli
