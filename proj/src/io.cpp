#include "ninf/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

namespace ninf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> numbers(const std::string& key, std::string text) {
  std::replace(text.begin(), text.end(), ',', ' ');
  std::replace(text.begin(), text.end(), ';', ' ');
  std::istringstream in(text);
  std::vector<double> out;
  std::string word;
  while (in >> word) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(word, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != word.size()) throw ConfigError(key, "'" + word + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::vector<double> numbers(const std::map<std::string, std::string>& kv, const std::string& key, std::size_t count) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ConfigError(key, "missing");
  auto v = numbers(key, it->second);
  if (count > 0 && v.size() != count) throw ConfigError(key, "expected " + std::to_string(count) + " numbers");
  return v;
}

}  // namespace

std::map<std::string, std::string> read_key_values(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source + ":" + std::to_string(lineno), "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno), "empty key");
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second) throw ConfigError(key, "given twice");
  }
  return kv;
}

ConvexDomain parse_domain(std::istream& in, const std::string& source) {
  auto kv = read_key_values(in, source);
  const auto shape_it = kv.find("shape");
  if (shape_it == kv.end()) throw ConfigError("shape", "missing");
  const std::string shape = shape_it->second;

  std::vector<std::string> allowed{"shape", "offset"};
  ConvexDomain domain = ConvexDomain::interval(0, 1);
  try {
    if (shape == "polygon") {
      allowed.push_back("vertices");
      const auto v = numbers(kv, "vertices", 0);
      if (v.size() % 2 != 0) throw ConfigError("vertices", "odd number of coordinates");
      std::vector<Point> pts;
      for (std::size_t i = 0; i < v.size(); i += 2) pts.emplace_back(v[i], v[i + 1]);
      domain = ConvexDomain::polygon(std::move(pts));
    } else if (shape == "ball") {
      allowed.insert(allowed.end(), {"center", "radius"});
      const auto c = numbers(kv, "center", 2);
      domain = ConvexDomain::ball(Point(c[0], c[1]), numbers(kv, "radius", 1)[0]);
    } else if (shape == "ellipse") {
      allowed.insert(allowed.end(), {"center", "semi_axes"});
      const auto c = numbers(kv, "center", 2);
      const auto a = numbers(kv, "semi_axes", 2);
      domain = ConvexDomain::ellipse(Point(c[0], c[1]), Eigen::Vector2d(a[0], a[1]));
    } else if (shape == "interval") {
      allowed.push_back("endpoints");
      const auto e = numbers(kv, "endpoints", 2);
      domain = ConvexDomain::interval(e[0], e[1]);
    } else {
      throw ConfigError("shape", "unknown shape '" + shape + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("shape", e.what());
  }
  for (const auto& [key, value] : kv) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(key, "not a key of shape " + shape);
  }
  if (kv.count("offset")) {
    const double e = numbers(kv, "offset", 1)[0];
    if (!(e > 0.0)) throw ConfigError("offset", "must be positive");
    domain = domain.outer_parallel_body(e);
  }
  return domain;
}

ConvexDomain read_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("domain", "cannot open " + path);
  return parse_domain(in, path);
}

}  // namespace ninf
