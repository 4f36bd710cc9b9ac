#include "projgeom/chart_file.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "projgeom/error.hpp"

namespace projgeom {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto h = s.find('#');
  return h == std::string_view::npos ? s : s.substr(0, h);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::ChartFormat, "line " + std::to_string(line) + ": " + msg);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::size_t> to_index(std::string_view s) {
  s = trim(s);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

Expr parse_at_line(std::string_view text, std::size_t dim, std::size_t line) {
  try {
    return parse(text, dim);
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.offset(), e.reason() + " (line " + std::to_string(line) + ")");
  } catch (const Error& e) {
    throw Error(e.kind(), "line " + std::to_string(line) + ": " + e.detail());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ChartFormat, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++lineno;
    const auto line = trim(strip_comment(text.substr(pos, nl - pos)));
    if (!line.empty()) f(line, lineno);
    pos = nl + 1;
  }
}

}  // namespace

ConnectionSpec parse_chart(std::string_view text) {
  std::optional<std::size_t> dim;
  std::optional<std::pair<double, double>> domain;
  enum class Section { None, Metric, Christoffel } section = Section::None;
  std::optional<ConnectionSpec::Source> source;
  std::map<std::vector<std::size_t>, std::size_t> seen;
  std::vector<std::pair<std::vector<std::size_t>, std::pair<std::string, std::size_t>>> entries;

  for_each_line(text, [&](std::string_view line, std::size_t no) {
    if (line.front() == '[') {
      if (line == "[metric]") {
        section = Section::Metric;
      } else if (line == "[christoffel]") {
        section = Section::Christoffel;
      } else {
        fail(no, "unknown section " + std::string(line));
      }
      const auto s = section == Section::Metric ? ConnectionSpec::Source::Metric
                                                : ConnectionSpec::Source::Christoffel;
      if (source && *source != s) fail(no, "[metric] and [christoffel] are exclusive");
      source = s;
      return;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(no, "expected '='");
    const auto lhs = trim(line.substr(0, eq));
    const auto rhs = trim(line.substr(eq + 1));
    const auto words = split_ws(lhs);
    if (words.empty()) fail(no, "missing key");

    if (section == Section::None) {
      if (words.size() == 1 && words[0] == "dim") {
        if (dim) fail(no, "duplicate dim");
        const auto d = to_index(rhs);
        if (!d || *d < 2) fail(no, "dim must be an integer >= 2");
        dim = d;
      } else if (words.size() == 1 && words[0] == "domain") {
        if (domain) fail(no, "duplicate domain");
        const auto comma = rhs.find(',');
        if (comma == std::string_view::npos) fail(no, "domain needs 'lo, hi'");
        const auto lo = to_double(rhs.substr(0, comma));
        const auto hi = to_double(rhs.substr(comma + 1));
        if (!lo || !hi || !(*lo < *hi)) fail(no, "domain needs numbers lo < hi");
        domain = std::make_pair(*lo, *hi);
      } else {
        fail(no, "unexpected key before a section: " + std::string(lhs));
      }
      return;
    }
    if (!dim) fail(no, "dim must precede the entries");

    const bool metric = section == Section::Metric;
    const std::string tag = metric ? "g" : "G";
    const std::size_t nidx = metric ? 2 : 3;
    if (words[0] != tag || words.size() != nidx + 1) {
      fail(no, "expected '" + tag + (metric ? " i j" : " k i j") + " = expr'");
    }
    std::vector<std::size_t> key;
    for (std::size_t a = 1; a <= nidx; ++a) {
      const auto v = to_index(words[a]);
      if (!v || *v < 1 || *v > *dim) fail(no, "index out of range: " + std::string(words[a]));
      key.push_back(*v - 1);
    }
    if (metric && key[0] > key[1]) std::swap(key[0], key[1]);
    if (const auto it = seen.find(key); it != seen.end()) {
      fail(no, "duplicate entry (first given on line " + std::to_string(it->second) + ")");
    }
    if (rhs.empty()) fail(no, "empty expression");
    seen.emplace(key, no);
    entries.emplace_back(key, std::make_pair(std::string(rhs), no));
  });

  if (!dim) throw Error(ErrorKind::ChartFormat, "missing 'dim = n'");
  if (!source) throw Error(ErrorKind::ChartFormat, "missing [metric] or [christoffel] section");
  const std::size_t n = *dim;

  ConnectionSpec spec;
  if (*source == ConnectionSpec::Source::Metric) {
    std::vector<std::optional<Expr>> table(n * n);
    for (const auto& [key, rhs] : entries) {
      table[key[0] * n + key[1]] = parse_at_line(rhs.first, n, rhs.second);
    }
    spec = ConnectionSpec::from_metric(n, std::move(table));
  } else {
    std::vector<std::optional<Expr>> table(n * n * n);
    for (const auto& [key, rhs] : entries) {
      table[(key[0] * n + key[1]) * n + key[2]] = parse_at_line(rhs.first, n, rhs.second);
    }
    spec = ConnectionSpec::from_christoffel(n, std::move(table));
  }
  if (domain) spec = spec.with_domain(domain->first, domain->second);
  return spec;
}

ConnectionSpec load_chart(const std::string& path) { return parse_chart(read_file(path)); }

OneFormField parse_alpha(std::string_view text, std::size_t dim) {
  OneFormField alpha = OneFormField::zero(dim);
  std::vector<std::size_t> seen(dim, 0);
  for_each_line(text, [&](std::string_view line, std::size_t no) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(no, "expected 'a <i> = expr'");
    const auto words = split_ws(trim(line.substr(0, eq)));
    if (words.size() != 2 || words[0] != "a") fail(no, "expected 'a <i> = expr'");
    const auto i = to_index(words[1]);
    if (!i || *i < 1 || *i > dim) fail(no, "index out of range: " + std::string(words[1]));
    if (seen[*i - 1]) fail(no, "duplicate entry (first given on line " + std::to_string(seen[*i - 1]) + ")");
    seen[*i - 1] = no;
    alpha.components[*i - 1] = parse_at_line(trim(line.substr(eq + 1)), dim, no);
  });
  return alpha;
}

OneFormField load_alpha(const std::string& path, std::size_t dim) {
  return parse_alpha(read_file(path), dim);
}

std::vector<double> parse_point(std::string_view text, std::size_t dim) {
  std::vector<double> p;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    const auto part = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    const auto v = to_double(part);
    if (!v) throw Error(ErrorKind::ChartFormat, "bad coordinate '" + std::string(trim(part)) + "'");
    p.push_back(*v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (p.size() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "point has " + std::to_string(p.size()) +
                                                  " coordinates, expected " + std::to_string(dim));
  }
  return p;
}

std::vector<std::vector<double>> parse_points(std::string_view text, std::size_t dim) {
  std::vector<std::vector<double>> pts;
  for_each_line(text, [&](std::string_view line, std::size_t no) {
    try {
      pts.push_back(parse_point(line, dim));
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(no) + ": " + e.detail());
    }
  });
  return pts;
}

std::vector<std::vector<double>> load_points(const std::string& path, std::size_t dim) {
  return parse_points(read_file(path), dim);
}

}  // namespace projgeom
