#pragma once

#include <cstdint>
#include <stdexcept>

namespace sigsoft {

// Gradient-descent settings shared by the fitting experiments.
struct TrainConfig {
  double learning_rate = 0.5;
  int max_epochs = 20000;
  double tol = 1e-9;        // stop when 50-epoch nll improvement drops below
  std::uint64_t seed = 1;   // base seed for parameter initialization

  void validate() const {
    if (!(learning_rate > 0.0))
      throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
    if (max_epochs < 1)
      throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
    if (tol < 0.0)
      throw std::invalid_argument("TrainConfig: tol must be >= 0");
  }
};

}  // namespace sigsoft
