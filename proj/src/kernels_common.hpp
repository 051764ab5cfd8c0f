// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace aircomp::detail {

// Index view over either an explicit batch or all samples 0..n-1.
class Picks {
 public:
  Picks(std::size_t total, std::span<const std::size_t> batch) : total_(total), batch_(batch) {
    if (size() == 0) throw std::invalid_argument("reduction over an empty sample set");
    for (std::size_t i : batch_) {
      if (i >= total_) {
        throw std::out_of_range("batch index " + std::to_string(i) + " >= " + std::to_string(total_));
      }
    }
  }

  std::size_t size() const { return batch_.empty() ? total_ : batch_.size(); }
  std::size_t operator[](std::size_t i) const { return batch_.empty() ? i : batch_[i]; }

 private:
  std::size_t total_;
  std::span<const std::size_t> batch_;
};

}  // namespace aircomp::detail
