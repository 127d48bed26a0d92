#pragma once

#include "twr/harmonic.hpp"

#include <string>
#include <vector>

namespace twr::testing {

std::string fixture_path(const std::string& name);

// Parses fixtures/<name>.twr; throws Error("ParseError") with the diagnostics.
Tower load_fixture(const std::string& name);

// Fixtures of good or connectivity-example towers on which the tetragonal
// construction and the identity suite apply.
const std::vector<std::string>& tetragonal_corpus();

}  // namespace twr::testing
