#pragma once

#include "twr/ngonal.hpp"

#include <cstddef>
#include <string>

namespace twr::testing {

// Enumerates the box [-bound, bound]^E(top) for cycles killed by the push-forward
// and compares them with the Prym lattice basis.
struct KernelOracleResult {
  bool agrees = true;
  std::size_t elements = 0;  // nonzero kernel elements found in the box
  std::size_t rank = 0;      // rank of the lattice they span
  std::string detail;
};
KernelOracleResult kernel_oracle(const Tower& t, int bound);

// Number of pairs of points in a common fiber whose parity classes disagree with
// the parity of the difference of their plus-lift coefficient sums.
std::size_t parity_mismatches(const Tower& t, const DonagiOutput& o, const PlusLiftChoice& choice = {});

}  // namespace twr::testing
