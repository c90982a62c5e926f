#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "flp/flow.hpp"
#include "flp/halfmaps.hpp"

namespace flp {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// A system as stored on disk; c and d are optional and default to the line x = 0.
struct SystemSpec {
    std::string name;
    std::string provenance;
    RawSystem raw;
    bool has_c = false;
    bool has_d = false;
};

/// Throws MalformedInput on bad JSON, missing keys, wrong shapes or non-finite entries.
SystemSpec parse_spec(const std::string& text);
SystemSpec load_spec(const std::filesystem::path& path);
/// Two-space indented JSON with a trailing newline; parse_spec(serialize_spec(s)) == s.
std::string serialize_spec(const SystemSpec& spec);

/// %.17g
std::string format_double(double v);

/// Axis decomposition, equilibria, tangencies and pseudo-equilibria as indented JSON.
std::string classification_report(const SystemSpec& spec);
/// Normal-form parameters and premises as indented JSON.
std::string canonical_report(const SystemSpec& spec);

/// Full analysis of a spec as indented JSON.
std::string analysis_report(const SystemSpec& spec, std::uint64_t seed);

/// t,x,y,segment_kind
std::string orbit_csv(const std::vector<OrbitSample>& samples);

/// y,P_R,P_Linv,D over an evenly spaced grid; entries outside a map's domain are left empty.
std::string dfunc_csv(const HalfMapContext& ctx, double y_min, double y_max, std::size_t samples);

}  // namespace flp
