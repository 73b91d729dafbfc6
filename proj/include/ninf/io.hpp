#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "ninf/geometry.hpp"

namespace ninf {

/// Bad configuration or input file; key() names the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Flat "key = value" lines; '#' starts a comment. Duplicate keys are rejected.
std::map<std::string, std::string> read_key_values(std::istream& in, const std::string& source);

/// Domain description:
///   shape = polygon | ball | ellipse | interval
///   vertices = x0 y0, x1 y1, ...   (polygon)
///   center = x y, radius = r       (ball)
///   center = x y, semi_axes = a b  (ellipse)
///   endpoints = lo hi              (interval)
///   offset = e                     (optional: outer parallel body of width e)
ConvexDomain parse_domain(std::istream& in, const std::string& source = "domain");
ConvexDomain read_domain_file(const std::string& path);

}  // namespace ninf
