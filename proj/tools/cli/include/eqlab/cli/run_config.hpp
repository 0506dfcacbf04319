#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eqlab/dynamics.hpp"
#include "eqlab/microcanonical.hpp"
#include "eqlab/models.hpp"

namespace eqlab::cli {

enum class Format { csv, json };

/// Energy grid: `count` evenly spaced points on [e_min, e_max], or the
/// explicit list when one is given.
struct GridSpec {
    double e_min = -9.0;
    double e_max = 40.0;
    int points = 100;
    std::vector<double> energies;

    std::vector<double> values() const;
};

/// Everything a command needs. The JSON form (to_json) is what output
/// headers record and what --config reads back.
struct RunConfig {
    std::string command;
    std::string model = "pendulum";
    Params params;
    std::vector<std::string> fields{"f11", "f22"};
    GridSpec grid;
    McConfig mc;
    DynamicsConfig dynamics;
    Route route = Route::automatic;
    Format format = Format::csv;
    std::string out = "-";

    // correction, orbit, counterexample
    double energy = 0.0;
    double delta_energy = 1.0;
    std::string component = "oscillation";
    std::optional<double> t_end;
    double omega1 = 1.0;
    double omega2 = 1.0;

    /// Throws DomainError on any inconsistency.
    void validate() const;
};

/// Resolved configuration, without output destination or worker count
/// (neither changes the data).
nlohmann::json to_json(const RunConfig& config);

/// Overwrites the fields present in `j`; unknown keys raise DomainError.
void apply_json(RunConfig& config, const nlohmann::json& j);

std::string_view to_string(Route route) noexcept;
Route route_from_string(std::string_view name);
std::string_view to_string(Format format) noexcept;
Format format_from_string(std::string_view name);

} // namespace eqlab::cli
