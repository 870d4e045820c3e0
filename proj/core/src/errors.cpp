#include "resobeam/errors.hpp"

#include <sstream>

namespace resobeam {
namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream out;
  out << "invalid configuration";
  for (const auto& issue : issues) out << "\n  " << issue;
  return out.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

ConfigError::ConfigError(const std::string& path, int line, int column, const std::string& what)
    : Error(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      issues_{path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what} {}

}  // namespace resobeam
