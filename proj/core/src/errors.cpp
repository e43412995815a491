#include "hosr/errors.hpp"

namespace hosr {

namespace {

std::string format_location(const std::string& path, std::size_t line,
                            const std::string& what) {
  std::string msg = path;
  if (line > 0) msg += ":" + std::to_string(line);
  if (!msg.empty()) msg += ": ";
  return msg + what;
}

}  // namespace

ParseError::ParseError(std::string path, std::size_t line,
                       const std::string& what)
    : std::runtime_error(format_location(path, line, what)),
      path_(std::move(path)),
      line_(line) {}

}  // namespace hosr
