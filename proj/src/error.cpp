#include "lgfrac/error.hpp"

namespace lgfrac {

ConfigError::ConfigError(std::vector<FieldIssue> issues)
    : Error(ErrorCode::config,
            [&] {
              std::string msg = "invalid configuration:";
              for (const auto& i : issues) msg += " [" + i.path + ": " + i.message + "]";
              return msg;
            }()),
      issues_(std::move(issues)) {}

}  // namespace lgfrac
