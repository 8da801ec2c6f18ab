#pragma once

#include <stdexcept>

namespace spikecount {

// Error categories aligned with the CLI exit-code contract:
// input_error -> 1, config_error -> 2, numeric_error -> 3.
class input_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class config_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class numeric_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spikecount
