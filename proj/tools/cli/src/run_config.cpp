#include "eqlab/cli/run_config.hpp"

#include <cmath>
#include <set>

#include "eqlab/error.hpp"
#include "eqlab/fields.hpp"

namespace eqlab::cli {

using nlohmann::json;

std::vector<double> GridSpec::values() const {
    if (!energies.empty()) {
        return energies;
    }
    if (points == 1) {
        return {e_min};
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    const double step = (e_max - e_min) / static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) {
        out.push_back(i + 1 == points ? e_max : e_min + step * static_cast<double>(i));
    }
    return out;
}

std::string_view to_string(Route route) noexcept {
    switch (route) {
    case Route::automatic:
        return "auto";
    case Route::monte_carlo:
        return "mc";
    case Route::quadrature:
        return "quadrature";
    }
    return "auto";
}

Route route_from_string(std::string_view name) {
    if (name == "auto") {
        return Route::automatic;
    }
    if (name == "mc") {
        return Route::monte_carlo;
    }
    if (name == "quadrature") {
        return Route::quadrature;
    }
    throw DomainError("unknown method '" + std::string(name) + "' (auto, mc, quadrature)");
}

std::string_view to_string(Format format) noexcept {
    return format == Format::csv ? "csv" : "json";
}

Format format_from_string(std::string_view name) {
    if (name == "csv") {
        return Format::csv;
    }
    if (name == "json") {
        return Format::json;
    }
    throw DomainError("unknown format '" + std::string(name) + "' (csv, json)");
}

void RunConfig::validate() const {
    if (grid.energies.empty()) {
        if (grid.points < 1) {
            throw DomainError("grid needs at least one point");
        }
        if (!std::isfinite(grid.e_min) || !std::isfinite(grid.e_max) || grid.e_max < grid.e_min) {
            throw DomainError("grid needs finite e_min <= e_max");
        }
    }
    for (double e : grid.energies) {
        if (!std::isfinite(e)) {
            throw DomainError("grid energies must be finite");
        }
    }
    mc.validate();
    dynamics.validate();
    if (command == "scan" && fields.empty()) {
        throw DomainError("scan needs at least one field");
    }
    component_from_string(component);
}

json to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["model"] = c.model;
    json params = json::object();
    for (const auto& [key, value] : c.params) {
        params[key] = value;
    }
    j["params"] = params;
    j["fields"] = c.fields;
    j["e_min"] = c.grid.e_min;
    j["e_max"] = c.grid.e_max;
    j["points"] = c.grid.points;
    j["energies"] = c.grid.energies;
    j["seed"] = c.mc.seed;
    j["samples"] = c.mc.n_samples;
    j["fd_step"] = c.mc.fd_step;
    j["shell"] = c.mc.shell_thickness ? json(*c.mc.shell_thickness) : json(nullptr);
    j["steps_per_period"] = c.dynamics.steps_per_period;
    j["periods"] = c.dynamics.periods;
    j["method"] = to_string(c.route);
    j["format"] = to_string(c.format);
    j["e"] = c.energy;
    j["delta_e"] = c.delta_energy;
    j["component"] = c.component;
    j["t_end"] = c.t_end ? json(*c.t_end) : json(nullptr);
    j["omega1"] = c.omega1;
    j["omega2"] = c.omega2;
    return j;
}

namespace {

double number(const json& v, const char* key) {
    if (!v.is_number()) {
        throw DomainError(std::string("config key '") + key + "' must be a number");
    }
    return v.get<double>();
}

std::uint64_t count(const json& v, const char* key) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw DomainError(std::string("config key '") + key + "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::string text(const json& v, const char* key) {
    if (!v.is_string()) {
        throw DomainError(std::string("config key '") + key + "' must be a string");
    }
    return v.get<std::string>();
}

} // namespace

void apply_json(RunConfig& c, const json& j) {
    if (!j.is_object()) {
        throw DomainError("config must be a JSON object");
    }
    for (const auto& [key, v] : j.items()) {
        const char* k = key.c_str();
        if (key == "command") {
            c.command = text(v, k);
        } else if (key == "model") {
            c.model = text(v, k);
        } else if (key == "params") {
            if (!v.is_object()) {
                throw DomainError("config key 'params' must be an object");
            }
            for (const auto& [name, value] : v.items()) {
                c.params[name] = number(value, name.c_str());
            }
        } else if (key == "fields") {
            c.fields.clear();
            for (const auto& f : v) {
                c.fields.push_back(text(f, k));
            }
        } else if (key == "e_min") {
            c.grid.e_min = number(v, k);
        } else if (key == "e_max") {
            c.grid.e_max = number(v, k);
        } else if (key == "points") {
            c.grid.points = static_cast<int>(count(v, k));
        } else if (key == "energies") {
            c.grid.energies.clear();
            for (const auto& e : v) {
                c.grid.energies.push_back(number(e, k));
            }
        } else if (key == "seed") {
            c.mc.seed = count(v, k);
        } else if (key == "samples") {
            c.mc.n_samples = count(v, k);
        } else if (key == "fd_step") {
            c.mc.fd_step = number(v, k);
        } else if (key == "shell") {
            c.mc.shell_thickness =
                v.is_null() ? std::nullopt : std::optional<double>(number(v, k));
        } else if (key == "steps_per_period") {
            c.dynamics.steps_per_period = number(v, k);
        } else if (key == "periods") {
            c.dynamics.periods = number(v, k);
        } else if (key == "method") {
            c.route = route_from_string(text(v, k));
        } else if (key == "format") {
            c.format = format_from_string(text(v, k));
        } else if (key == "e") {
            c.energy = number(v, k);
        } else if (key == "delta_e") {
            c.delta_energy = number(v, k);
        } else if (key == "component") {
            c.component = text(v, k);
        } else if (key == "t_end") {
            c.t_end = v.is_null() ? std::nullopt : std::optional<double>(number(v, k));
        } else if (key == "omega1") {
            c.omega1 = number(v, k);
        } else if (key == "omega2") {
            c.omega2 = number(v, k);
        } else if (key == "workers") {
            c.mc.workers = static_cast<unsigned>(count(v, k));
        } else if (key == "out") {
            c.out = text(v, k);
        } else {
            throw DomainError("unknown config key '" + key + "'");
        }
    }
}

} // namespace eqlab::cli
