#pragma once

#include <stdexcept>
#include <string>

namespace sdcma {

/// Invalid scheme/strategy/power/OFDM settings. Maps to CLI exit code 1.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Sequence lengths or frame layouts that do not fit together.
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

struct IndexError : std::out_of_range {
    explicit IndexError(const std::string& what) : std::out_of_range(what) {}
};

} // namespace sdcma
