#pragma once

#include <stdexcept>
#include <string>

namespace latticetail {

struct RankDeficientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidLayerError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidRadiusError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Brute-force enumeration refused because the predicted workload is absurd.
struct TooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySamplesError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bad experiment configuration (unknown key, missing key, out-of-range value).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace latticetail
