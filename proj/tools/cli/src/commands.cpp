#include "eqlab/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "eqlab/equipartition.hpp"
#include "eqlab/error.hpp"
#include "eqlab/parallel.hpp"

namespace eqlab::cli {

using ojson = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Accumulates header, rows and diagnostics and renders them as CSV or JSON.
class Output {
public:
    Output(const RunConfig& config, std::vector<std::string> columns)
        : config_(config), columns_(std::move(columns)) {}

    void warning(std::string message) { push_note("warning", std::move(message)); }
    void error(std::string message) {
        push_note("error", std::move(message));
        failed_ = true;
    }
    void row(ojson r) {
        entries_.push_back({std::move(r), {}, {}});
    }
    /// Extra lines after the rows (CSV) or a top-level key (JSON).
    void summary(std::string key, ojson value, std::string line) {
        summaries_.push_back({std::move(key), std::move(value), std::move(line)});
    }

    CommandResult render() const {
        return {config_.format == Format::csv ? csv() : json(), failed_ ? 1 : 0};
    }

private:
    struct Entry {
        ojson row;
        std::string note_kind;
        std::string note;
    };
    struct Summary {
        std::string key;
        ojson value;
        std::string line;
    };

    void push_note(std::string kind, std::string message) {
        entries_.push_back({ojson(), std::move(kind), std::move(message)});
    }

    std::string csv() const {
        std::string s = header_lines();
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            s += (i ? "," : "") + columns_[i];
        }
        s += '\n';
        for (const Entry& e : entries_) {
            if (!e.note_kind.empty()) {
                s += "# " + e.note_kind + ": " + e.note + '\n';
                continue;
            }
            for (std::size_t i = 0; i < columns_.size(); ++i) {
                s += (i ? "," : "") + cell(e.row.at(columns_[i]));
            }
            s += '\n';
        }
        for (const Summary& m : summaries_) {
            s += "# " + m.line + '\n';
        }
        return s;
    }

    std::string json() const {
        ojson j;
        j["eqlab"] = kVersion;
        j["command"] = config_.command;
        j["seed"] = config_.mc.seed;
        j["config"] = ojson::parse(to_json(config_).dump());
        ojson rows = ojson::array();
        ojson notes = ojson::array();
        for (const Entry& e : entries_) {
            if (e.note_kind.empty()) {
                rows.push_back(e.row);
            } else {
                notes.push_back({{"kind", e.note_kind}, {"message", e.note}});
            }
        }
        j["diagnostics"] = notes;
        j["data"] = rows;
        for (const Summary& m : summaries_) {
            j[m.key] = m.value;
        }
        return j.dump(2) + '\n';
    }

    std::string header_lines() const {
        std::string s = std::string("# eqlab ") + kVersion + '\n';
        s += "# command: " + config_.command + '\n';
        s += "# seed: " + std::to_string(config_.mc.seed) + '\n';
        s += "# config: " + to_json(config_).dump() + '\n';
        return s;
    }

    static std::string cell(const ojson& v) {
        if (v.is_null()) {
            return "";
        }
        if (v.is_boolean()) {
            return v.get<bool>() ? "true" : "false";
        }
        if (v.is_number_float()) {
            return format_number(v.get<double>());
        }
        if (v.is_number()) {
            return v.dump();
        }
        return v.get<std::string>();
    }

    const RunConfig& config_;
    std::vector<std::string> columns_;
    std::vector<Entry> entries_;
    std::vector<Summary> summaries_;
    bool failed_ = false;
};

ojson estimate_json(const Estimate& e) {
    return {{"value", e.value}, {"std_error", e.std_error}, {"method", to_string(e.method)},
            {"n_samples", e.n_samples}};
}

std::string energy_text(double e) { return "E=" + format_number(e); }

std::string critical_text(const CriticalValue& c) {
    return std::string(c.kind == CriticalKind::separatrix ? "separatrix" : "minimum") + " at " +
           format_number(c.energy);
}

/// JSON documents for single-result commands (correction, counterexample).
CommandResult json_document(const RunConfig& config, const ojson& result,
                            const std::string& failure) {
    ojson j;
    j["eqlab"] = kVersion;
    j["command"] = config.command;
    j["seed"] = config.mc.seed;
    j["config"] = ojson::parse(to_json(config).dump());
    if (failure.empty()) {
        j["data"] = result;
    } else {
        j["error"] = failure;
    }
    return {j.dump(2) + '\n', failure.empty() ? 0 : 1};
}

} // namespace

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string data_section(const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        ojson j = ojson::parse(text);
        for (const char* key : {"eqlab", "command", "seed", "config"}) {
            j.erase(key);
        }
        return j.dump();
    }
    std::istringstream in(text);
    std::string line;
    std::string out;
    bool body = false;
    while (std::getline(in, line)) {
        body = body || line.empty() || line.front() != '#';
        if (body) {
            out += line + '\n';
        }
    }
    return out;
}

CommandResult run_scan(const RunConfig& config) {
    config.validate();
    const auto model = make_model(config.model, config.params);
    std::vector<VectorFieldSpec> fields;
    for (const std::string& token : config.fields) {
        fields.push_back(field_from_token(*model, token));
    }
    const std::vector<double> grid = config.grid.values();

    struct Job {
        double energy;
        std::size_t field;
        std::optional<EquipartitionReport> report;
        std::string failure;
    };
    std::vector<Job> jobs;
    std::vector<std::optional<CriticalValue>> guarded(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        guarded[i] = model->guarding_critical_value(grid[i]);
        if (guarded[i]) {
            continue;
        }
        for (std::size_t f = 0; f < fields.size(); ++f) {
            jobs.push_back({grid[i], f, std::nullopt, {}});
        }
    }

    LawConfig law{config.mc, config.dynamics, config.route};
    law.mc.workers = 1;
    parallel_for(jobs.size(), config.mc.workers, [&](std::size_t k) {
        Job& job = jobs[k];
        try {
            job.report = check_law(*model, fields[job.field], job.energy, law);
        } catch (const std::exception& e) {
            job.failure = e.what();
        }
    });

    Output out(config, {"E", "field", "kT", "kT_err", "lhs_time", "lhs_time_err", "lhs_ens",
                        "lhs_ens_err", "rhs", "rhs_err", "tolman", "resid_intrinsic",
                        "resid_tolman", "smooth"});
    std::size_t next = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (guarded[i]) {
            out.warning(energy_text(grid[i]) + " skipped: inside the guard band of the " +
                        critical_text(*guarded[i]));
            continue;
        }
        for (std::size_t f = 0; f < fields.size(); ++f, ++next) {
            const Job& job = jobs[next];
            ojson row;
            row["E"] = job.energy;
            row["field"] = config.fields[f];
            if (!job.report) {
                out.error(energy_text(job.energy) + " field " + config.fields[f] + ": " +
                          job.failure);
                for (const char* key : {"kT", "kT_err", "lhs_time", "lhs_time_err", "lhs_ens",
                                        "lhs_ens_err", "rhs", "rhs_err", "tolman",
                                        "resid_intrinsic", "resid_tolman"}) {
                    row[key] = kNaN;
                }
                row["smooth"] = nullptr;
                out.row(std::move(row));
                continue;
            }
            const EquipartitionReport& r = *job.report;
            row["kT"] = r.kT.value;
            row["kT_err"] = r.kT.std_error;
            row["lhs_time"] = r.lhs_time.value;
            row["lhs_time_err"] = r.lhs_time.std_error;
            row["lhs_ens"] = r.lhs_ensemble.value;
            row["lhs_ens_err"] = r.lhs_ensemble.std_error;
            row["rhs"] = r.rhs_intrinsic.value;
            row["rhs_err"] = r.rhs_intrinsic.std_error;
            row["tolman"] = r.tolman_value ? ojson(*r.tolman_value) : ojson(nullptr);
            row["resid_intrinsic"] = r.residual_intrinsic;
            row["resid_tolman"] = r.residual_tolman ? ojson(*r.residual_tolman) : ojson(nullptr);
            row["smooth"] = r.field_smooth_on_ME;
            out.row(std::move(row));
        }
    }
    if (jobs.empty()) {
        out.error("no regular energy left in the grid");
    }
    return out.render();
}

CommandResult run_volumes(const RunConfig& config) {
    config.validate();
    const auto model = make_model(config.model, config.params);
    Output out(config, {"E", "vol_me", "vol_me_err", "vol_sigma", "vol_sigma_err", "kT", "kT_err"});
    for (double e : config.grid.values()) {
        ojson row;
        row["E"] = e;
        try {
            const VolumeCurve curve = volume_curve(*model, {e}, config.mc, config.route);
            if (curve.guarded.front()) {
                const auto critical = model->guarding_critical_value(e);
                out.warning(energy_text(e) + " flagged: " +
                            (critical ? "inside the guard band of the " + critical_text(*critical)
                                      : std::string("at or below the ground state")) +
                            "; Monte Carlo values");
            }
            row["vol_me"] = curve.vol_me.front().value;
            row["vol_me_err"] = curve.vol_me.front().std_error;
            row["vol_sigma"] = curve.vol_sigma.front().value;
            row["vol_sigma_err"] = curve.vol_sigma.front().std_error;
            row["kT"] = curve.kT.front().value;
            row["kT_err"] = curve.kT.front().std_error;
            row["guarded"] = static_cast<bool>(curve.guarded.front());
        } catch (const std::exception& ex) {
            out.error(energy_text(e) + ": " + ex.what());
            for (const char* key :
                 {"vol_me", "vol_me_err", "vol_sigma", "vol_sigma_err", "kT", "kT_err"}) {
                row[key] = kNaN;
            }
        }
        out.row(std::move(row));
    }
    return out.render();
}

CommandResult run_correction(const RunConfig& config) {
    config.validate();
    const auto model = make_model(config.model, config.params);
    try {
        const CorrectionCheck c = correction_identity(*model, config.energy, config.delta_energy);
        ojson r;
        r["E"] = c.energy;
        r["delta_E"] = c.delta_energy;
        r["lhs"] = c.lhs;
        r["rhs"] = c.rhs;
        r["delta_p"] = c.delta_p;
        r["kT"] = c.kT;
        r["gap"] = c.gap();
        r["relative_gap"] = c.relative_gap();
        r["vol_sigma_convention"] = "total over both rotation components";
        return json_document(config, r, {});
    } catch (const Error& e) {
        return json_document(config, nullptr, e.what());
    }
}

CommandResult run_orbit(const RunConfig& config) {
    config.validate();
    const auto model = make_model(config.model, config.params);
    if (model->dof() != 1) {
        throw DomainError("orbit dumps need a model with one degree of freedom");
    }
    const Component component = component_from_string(config.component);
    const double e = config.energy;

    PhaseState x0 = model->ground_state();
    double period = 0.0;
    if (e == model->e_min()) {
        // Fixed point: use the small-oscillation period to set the step.
        if (const auto* pendulum = dynamic_cast<const Pendulum*>(model.get())) {
            period = 2.0 * std::numbers::pi * std::sqrt(pendulum->inertia() / pendulum->depth());
        } else {
            period = model->characteristic_period(e);
        }
    } else {
        model->require_regular(e, "orbit");
        x0 = model->initial_state_on_shell(e, component);
        period = orbit_period(*model, e, component);
    }
    const double t_end = config.t_end.value_or(period);
    const OrbitRecord record =
        integrate_orbit(*model, x0, t_end, period / config.dynamics.steps_per_period);

    Output out(config, {"t", "q", "p", "H"});
    for (std::size_t k = 0; k < record.states.size(); ++k) {
        const PhaseState& x = record.states[k];
        out.row(ojson{{"t", record.times[k]},
                      {"q", x.q[0]},
                      {"p", x.p[0]},
                      {"H", model->energy_at(x.q, x.p)}});
    }
    const double budget = drift_budget(*model, record.energy);
    ojson drift{{"max_energy_drift", record.max_energy_drift},
                {"budget", budget},
                {"exceeded", record.drift_exceeded},
                {"h", record.step},
                {"period", period}};
    out.summary("drift", drift,
                "drift: max_energy_drift=" + format_number(record.max_energy_drift) +
                    " budget=" + format_number(budget) +
                    " exceeded=" + (record.drift_exceeded ? "true" : "false") +
                    " h=" + format_number(record.step));
    return out.render();
}

CommandResult run_counterexample(const RunConfig& config) {
    config.validate();
    try {
        const CounterexampleTable t =
            action_angle_counterexample(config.omega1, config.omega2, config.energy, config.mc);
        ojson r;
        r["omega"] = {t.omega[0], t.omega[1]};
        r["E"] = t.energy;
        r["mean_action"] = {estimate_json(t.mean_action[0]), estimate_json(t.mean_action[1])};
        ojson table = ojson::array();
        for (const auto& row : t.entries) {
            table.push_back({estimate_json(row[0]), estimate_json(row[1])});
        }
        r["table"] = table;
        r["kT"] = estimate_json(t.kT);
        return json_document(config, r, {});
    } catch (const Error& e) {
        return json_document(config, nullptr, e.what());
    }
}

CommandResult run_command(const RunConfig& config) {
    if (config.command == "scan") {
        return run_scan(config);
    }
    if (config.command == "volumes") {
        return run_volumes(config);
    }
    if (config.command == "correction") {
        return run_correction(config);
    }
    if (config.command == "orbit") {
        return run_orbit(config);
    }
    if (config.command == "counterexample") {
        return run_counterexample(config);
    }
    throw DomainError("unknown command '" + config.command + "'");
}

} // namespace eqlab::cli
