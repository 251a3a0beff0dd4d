#pragma once

// Output schema shared by every CLI command: a record of the command, its
// inputs, its outputs with unit annotations, the pinned defaults in force,
// and the seed when randomness is involved. Serializes to JSON (round-trip)
// and to flat CSV.

#include <nlohmann/json_fwd.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace peakbound {

inline constexpr const char* kVersion = "0.1.0";

/// Pinned numerical defaults, echoed into every OutputRecord. Overridable
/// from a JSON file named by the PEAKBOUND_CONFIG environment variable.
struct Defaults {
    int oversampling_L = 16;
    int smith_grid_size = 501;
    double smith_tol = 1e-6;
    long smith_max_iterations = 200000;
    double quad_tol = 1e-9;
    std::string version = kVersion;

    /// Defaults merged with the PEAKBOUND_CONFIG override file, if set.
    static Defaults load();
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct OutputRecord {
    std::string command;
    std::map<std::string, std::string> inputs;
    std::map<std::string, double> outputs;
    std::map<std::string, std::string> units; // one entry per numeric output
    std::string version = kVersion;
    std::optional<std::uint64_t> seed;
    std::optional<Table> table;

    void set(const std::string& key, double value, const std::string& unit);

    nlohmann::json to_json() const;
    static OutputRecord from_json(const nlohmann::json& j);

    std::string to_csv() const;

    /// Human-oriented plain text rendering.
    std::string to_text() const;
};

} // namespace peakbound
