#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flp/io.hpp"

namespace flp {

SystemSpec spec_from_params(const CanonicalParams& p, const std::string& name, const std::string& provenance);

/// The eleven shipped systems, in a fixed order.
std::vector<SystemSpec> bundled_examples();
std::optional<SystemSpec> bundled_example(const std::string& name);

}  // namespace flp
