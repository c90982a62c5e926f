#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flp/flow.hpp"
#include "flp/halfmaps.hpp"

namespace flp {

enum class OrbitKind { Standard, Crossing, Sliding };
enum class ConfigTag { F1A_a, F1A_b, F1A_c, F1A_d, F2A_a, F2A_b, F2A_c, Other };

std::string_view to_string(OrbitKind k);
std::string_view to_string(ConfigTag t);

/// Symmetry (x, y, t) -> (sx x, sy y, st t) that carries the raw orbit into the reference frame.
struct Frame {
    int sx = 1;
    int sy = 1;
    int st = 1;
    friend bool operator==(const Frame&, const Frame&) = default;
};

std::string to_string(const Frame& f);

struct ConfigurationLabel {
    ConfigTag tag = ConfigTag::Other;
    Frame frame;
    std::string word;  // normalized token word, e.g. "R S+ " style: "R,C,L,S+"
};

/// One axis contact of a cycle in forward time.
struct AxisContact {
    SegmentKind kind;  // segment that starts here
    double y;
};

struct PeriodicOrbitRecord {
    OrbitKind kind = OrbitKind::Crossing;
    std::vector<OrbitSegment> cycle;  // in the time direction recorded by `backward`
    bool backward = false;            // cycle was traced on the time-reversed system
    double period = 0.0;
    std::vector<AxisContact> axis_signature;  // forward-time order
    std::optional<double> multiplier;
    bool hyperbolic = false;
    bool through_tangency = false;
    std::optional<ConfigurationLabel> configuration;
};

struct CoexistenceReport {
    int n_crossing = 0;
    int n_sliding = 0;
    std::vector<PeriodicOrbitRecord> records;  // sliding first, then crossing
    std::optional<ConfigurationLabel> configuration;
    bool standard_orbits = false;  // an admissible center fills a region with periodic orbits
    bool closed_form_route = false;  // crossing orbits came from the displacement function
};

struct SearchOptions {
    std::size_t budget = 400;
};

std::vector<PeriodicOrbitRecord> find_sliding_orbits(const FilippovSystem& sys, const SearchOptions& opts = {});
/// Uses the displacement function when the normal form admits it, unless allow_closed_form is false.
std::vector<PeriodicOrbitRecord> find_crossing_orbits(const FilippovSystem& sys, bool* used_closed_form = nullptr,
                                                      bool allow_closed_form = true);

/// Token word of one sliding cycle normalized to the reference frame.
ConfigurationLabel classify_single(const PeriodicOrbitRecord& rec);
ConfigurationLabel classify_configuration(const std::vector<PeriodicOrbitRecord>& sliding, const FilippovSystem& sys);

CoexistenceReport coexistence(const FilippovSystem& sys, const SearchOptions& opts = {});

/// First return to the axis after one right and one left half-loop, starting right-going at (0, y).
std::optional<double> crossing_return(const FilippovSystem& sys, double y);

}  // namespace flp
