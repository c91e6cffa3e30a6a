#pragma once

#include <stdexcept>

namespace manetsim {

/// Invalid or inconsistent run configuration. Maps to CLI exit status 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace manetsim
