#include "polyapprox/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace polyapprox {

namespace {

std::string fnv_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> parse_eps(const nlohmann::json& j) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<double>());
  } else if (j.is_object()) {
    out = eps_grid(j.at("from").get<double>(), j.at("to").get<double>());
  } else {
    throw std::invalid_argument("eps must be a list or {\"from\", \"to\"}");
  }
  for (double e : out)
    if (!(e > 0.0 && e < 0.25)) throw std::invalid_argument("eps values must lie in (0, 0.25)");
  return out;
}

BodyEntry parse_entry(const nlohmann::json& j, std::uint64_t seed) {
  BodyEntry b;
  const bool wrapped = j.contains("body");
  const nlohmann::json& body = wrapped ? j.at("body") : j;
  b.spec = BodySpec::from_json(body);
  b.explicit_seed = body.contains("seed");
  if (!b.explicit_seed) b.spec.seed = seed;
  if (wrapped) {
    if (j.contains("eps")) b.eps = parse_eps(j.at("eps"));
    if (j.contains("eps_params"))
      for (const auto& [name, v] : j.at("eps_params").items()) {
        if (!v.is_array() || v.size() != 2) throw std::invalid_argument("eps_params entries are [coefficient, power]");
        b.eps_params[name] = {v[0].get<double>(), v[1].get<double>()};
      }
  }
  return b;
}

}  // namespace

std::string BodyEntry::hash() const {
  if (eps_params.empty()) return spec.hash();
  nlohmann::json j{{"body", spec.to_json()}, {"eps_params", nlohmann::json::object()}};
  for (const auto& [name, cp] : eps_params) j["eps_params"][name] = {cp.first, cp.second};
  return fnv_hex(j.dump());
}

BodySpec BodyEntry::at(double eps) const {
  BodySpec s = spec;
  for (const auto& [name, cp] : eps_params) s.params[name] = cp.first * std::pow(eps, cp.second);
  return s;
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j, std::optional<std::uint64_t> env_seed) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  SweepConfig c;
  c.seed = env_seed ? *env_seed : j.value("seed", std::uint64_t{1});
  c.workers = j.value("workers", 1);
  if (c.workers < 1) throw std::invalid_argument("workers must be at least 1");
  c.timing = j.value("timing", false);
  if (j.contains("eps")) c.eps = parse_eps(j.at("eps"));
  if (j.contains("algorithms")) {
    c.algorithms.clear();
    for (const auto& a : j.at("algorithms")) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
  }
  for (const auto& b : j.value("bodies", nlohmann::json::array())) {
    c.bodies.push_back(parse_entry(b, c.seed));
    if (c.bodies.back().eps.empty() && c.eps.empty())
      throw std::invalid_argument("body without eps grid and no sweep-wide eps");
  }
  return c;
}

std::vector<double> eps_grid(double hi, double lo) {
  if (!(hi > 0.0 && lo > 0.0 && lo <= hi)) throw std::invalid_argument("eps_grid: need 0 < to <= from");
  std::vector<double> out;
  for (double e = hi; e >= lo * (1.0 - 1e-12); e /= 2.0) out.push_back(e);
  return out;
}

ExperimentRecord run_cell(const BodyEntry& body, double eps, Algorithm algorithm, std::uint64_t seed, bool timing) {
  ExperimentRecord r;
  r.body_hash = body.hash();
  r.d = body.spec.d;
  r.eps = eps;
  r.algorithm = algorithm_name(algorithm);
  r.seed = seed;
  try {
    const Normalized nb = normalize(make_body(body.at(eps)), eps);
    const ConvexBody& k = *nb.body;
    r.diameter = k.diameter();
    r.surface_diameter = surface_diameter(k);
    r.min_width = k.min_width();
    const auto start = std::chrono::steady_clock::now();
    const Approximation a = approximate(algorithm, k, eps, false);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    r.facets = a.facets;
    r.hausdorff = a.diagnostics.error.hausdorff;
    if (!a.diagnostics.error.contained())
      r.failure = "containment";
    else if (!a.diagnostics.verified)
      r.failure = "hausdorff";
    if (timing) r.wall_ms = ms;
  } catch (const std::exception& e) {
    r.failure = e.what();
  }
  return r;
}

std::vector<ExperimentRecord> run_sweep(const SweepConfig& config) {
  struct Cell {
    const BodyEntry* body;
    double eps;
    Algorithm algorithm;
  };
  std::vector<Cell> cells;
  for (const BodyEntry& b : config.bodies)
    for (double e : b.eps.empty() ? config.eps : b.eps)
      for (Algorithm a : config.algorithms) cells.push_back({&b, e, a});
  std::vector<ExperimentRecord> out(cells.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      out[i] = run_cell(*c.body, c.eps, c.algorithm, c.body->spec.seed, config.timing);
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, config.workers));
  if (n == 1 || cells.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(n, cells.size()); ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return out;
}

ExponentFit fit_exponent(const std::vector<ExperimentRecord>& records) {
  std::vector<const ExperimentRecord*> use;
  for (const ExperimentRecord& r : records)
    if (!r.failed() && r.facets > 0 && r.eps > 0.0 && r.surface_diameter > 0.0) use.push_back(&r);
  if (use.size() < 5) throw std::invalid_argument("fit_exponent: need at least 5 accepted records");
  double lo = use.front()->eps, hi = lo;
  for (const ExperimentRecord* r : use) {
    lo = std::min(lo, r->eps);
    hi = std::max(hi, r->eps);
  }
  if (hi < 100.0 * lo * (1.0 - 1e-9)) throw std::invalid_argument("fit_exponent: eps must span two decades");
  const double n = static_cast<double>(use.size());
  double mx = 0.0, my = 0.0;
  for (const ExperimentRecord* r : use) {
    mx += std::log10(r->surface_diameter / r->eps) / n;
    my += std::log10(static_cast<double>(r->facets)) / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const ExperimentRecord* r : use) {
    const double x = std::log10(r->surface_diameter / r->eps) - mx;
    const double y = std::log10(static_cast<double>(r->facets)) - my;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_exponent: degenerate abscissae");
  ExponentFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.points = use.size();
  return f;
}

ExponentFit fit_exponent(const std::vector<ExperimentRecord>& records, const std::string& body_hash,
                         const std::string& algorithm) {
  std::vector<ExperimentRecord> subset;
  for (const ExperimentRecord& r : records)
    if (r.body_hash == body_hash && r.algorithm == algorithm) subset.push_back(r);
  return fit_exponent(subset);
}

namespace {

const std::vector<std::string> kColumns{"body_hash",        "d",         "eps",          "algorithm",
                                        "facets",           "hausdorff", "diameter",     "surface_diameter",
                                        "min_width",        "wall_time_ms", "seed",      "failure"};

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

// One RFC 4180 record; false at end of input.
bool read_row(std::istream& in, std::vector<std::string>& row) {
  row.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoting = false, was_quoted = false;
  for (int c; (c = in.get()) != std::char_traits<char>::eof();) {
    const char ch = static_cast<char>(c);
    if (quoting) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoting = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && field.empty() && !was_quoted) {
      quoting = was_quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (ch == '\r' || ch == '\n') {
      if (ch == '\r' && in.peek() == '\n') in.get();
      row.push_back(std::move(field));
      return true;
    } else {
      field += ch;
    }
  }
  if (quoting) throw std::invalid_argument("csv: unterminated quoted field");
  row.push_back(std::move(field));
  return true;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  out << "\r\n";
  for (const ExperimentRecord& r : records) {
    const std::vector<std::string> fields{r.body_hash,
                                          std::to_string(r.d),
                                          number(r.eps),
                                          r.algorithm,
                                          std::to_string(r.facets),
                                          number(r.hausdorff),
                                          number(r.diameter),
                                          number(r.surface_diameter),
                                          number(r.min_width),
                                          r.wall_ms ? number(*r.wall_ms) : std::string(),
                                          std::to_string(r.seed),
                                          r.failure};
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << quoted(fields[i]);
    out << "\r\n";
  }
}

std::vector<ExperimentRecord> read_csv(std::istream& in) {
  std::vector<std::string> row;
  if (!read_row(in, row)) throw std::invalid_argument("csv: empty input");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < row.size(); ++i) col[row[i]] = i;
  for (std::size_t i = 0; i + 1 < kColumns.size(); ++i)
    if (!col.count(kColumns[i])) throw std::invalid_argument("csv: missing column " + kColumns[i]);
  std::vector<ExperimentRecord> out;
  while (read_row(in, row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    const auto get = [&](const std::string& name) -> const std::string& {
      const std::size_t i = col.at(name);
      if (i >= row.size()) throw std::invalid_argument("csv: short row");
      return row[i];
    };
    ExperimentRecord r;
    r.body_hash = get("body_hash");
    r.d = std::stoi(get("d"));
    r.eps = std::stod(get("eps"));
    r.algorithm = get("algorithm");
    r.facets = static_cast<std::size_t>(std::stoull(get("facets")));
    r.hausdorff = std::stod(get("hausdorff"));
    r.diameter = std::stod(get("diameter"));
    r.surface_diameter = std::stod(get("surface_diameter"));
    r.min_width = std::stod(get("min_width"));
    if (!get("wall_time_ms").empty()) r.wall_ms = std::stod(get("wall_time_ms"));
    r.seed = std::stoull(get("seed"));
    if (col.count("failure")) r.failure = get("failure");
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escaped(const std::string& text) {
  std::string out;
  for (char ch : text) {
    if (ch == '&') out += "&amp;";
    else if (ch == '<') out += "&lt;";
    else if (ch == '>') out += "&gt;";
    else if (ch == '"') out += "&quot;";
    else out += ch;
  }
  return out;
}

}  // namespace

void write_svg(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw std::invalid_argument("write_svg: no records");
  constexpr double width = 800, height = 600, left = 70, right = 250, top = 30, bottom = 50;
  const std::vector<std::string> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                         "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  struct Series {
    std::string hash, algorithm;
    std::vector<ExperimentRecord> records;
  };
  std::vector<Series> series;
  double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  bool any = false;
  for (const ExperimentRecord& r : records) {
    if (r.failed() || r.facets == 0 || !(r.eps > 0.0) || !(r.surface_diameter > 0.0)) continue;
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.hash == r.body_hash && s.algorithm == r.algorithm; });
    if (it == series.end()) it = series.insert(series.end(), {r.body_hash, r.algorithm, {}});
    it->records.push_back(r);
    const double x = std::log10(r.surface_diameter / r.eps), y = std::log10(static_cast<double>(r.facets));
    if (!any) {
      xlo = xhi = x;
      ylo = yhi = y;
      any = true;
    }
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, y);
  }
  xlo = std::floor(xlo);
  ylo = std::floor(ylo);
  xhi = std::max(xlo + 1, std::ceil(xhi));
  yhi = std::max(ylo + 1, std::ceil(yhi));
  const double pw = width - left - right, ph = height - top - bottom;
  const auto sx = [&](double x) { return left + (x - xlo) / (xhi - xlo) * pw; };
  const auto sy = [&](double y) { return top + (yhi - y) / (yhi - ylo) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  out << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  out << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw) << "\" height=\""
      << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double k = xlo; k <= xhi + 1e-9; k += 1) {
    out << "<line x1=\"" << fixed(sx(k)) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(sx(k))
        << "\" y2=\"" << fixed(top + ph + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fixed(sx(k)) << "\" y=\"" << fixed(top + ph + 20)
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << static_cast<int>(k) << "</text>\n";
  }
  for (double k = ylo; k <= yhi + 1e-9; k += 1) {
    out << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(sy(k)) << "\" x2=\"" << fixed(left)
        << "\" y2=\"" << fixed(sy(k)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(sy(k) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">1e" << static_cast<int>(k) << "</text>\n";
  }
  out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(height - 10)
      << "\" font-size=\"13\" text-anchor=\"middle\">surface diameter / eps</text>\n";
  out << "<text x=\"18\" y=\"" << fixed(top + ph / 2) << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fixed(top + ph / 2) << ")\">facets</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    const std::string& color = palette[i % palette.size()];
    out << "<g class=\"series\" data-body=\"" << escaped(s.hash) << "\" data-algorithm=\"" << escaped(s.algorithm)
        << "\">\n";
    for (const ExperimentRecord& r : s.records) {
      const double x = std::log10(r.surface_diameter / r.eps), y = std::log10(static_cast<double>(r.facets));
      out << "<circle cx=\"" << fixed(sx(x)) << "\" cy=\"" << fixed(sy(y)) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    std::string label = s.hash.substr(0, 8) + " " + s.algorithm;
    try {
      const ExponentFit f = fit_exponent(s.records);
      double a = s.records.front().surface_diameter / s.records.front().eps, b = a;
      for (const ExperimentRecord& r : s.records) {
        a = std::min(a, r.surface_diameter / r.eps);
        b = std::max(b, r.surface_diameter / r.eps);
      }
      const double x0 = std::log10(a), x1 = std::log10(b);
      out << "<line class=\"fit\" x1=\"" << fixed(sx(x0)) << "\" y1=\"" << fixed(sy(f.intercept + f.slope * x0))
          << "\" x2=\"" << fixed(sx(x1)) << "\" y2=\"" << fixed(sy(f.intercept + f.slope * x1)) << "\" stroke=\""
          << color << "\" stroke-width=\"1.5\"/>\n";
      label += " slope " + fixed(f.slope);
    } catch (const std::invalid_argument&) {
    }
    out << "</g>\n";
    const double ly = top + 10 + 20 * static_cast<double>(i);
    out << "<g class=\"legend\"><rect x=\"" << fixed(width - right + 15) << "\" y=\"" << fixed(ly - 8)
        << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/><text x=\"" << fixed(width - right + 30)
        << "\" y=\"" << fixed(ly + 1) << "\" font-size=\"12\">" << escaped(label) << "</text></g>\n";
  }
  out << "</svg>\n";
}

}  // namespace polyapprox
