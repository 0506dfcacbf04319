#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "eqlab/cli/commands.hpp"
#include "eqlab/error.hpp"

namespace {

using nlohmann::json;

/// Flag values land here; only flags the user actually passed are applied.
struct Flags {
    std::string model;
    std::vector<std::string> params;
    std::vector<std::string> fields;
    double e_min = 0, e_max = 0;
    int points = 0;
    std::vector<double> energies;
    std::uint64_t seed = 0, samples = 0;
    double fd_step = 0, shell = 0, steps_per_period = 0, periods = 0;
    std::string out, format, config, component, method;
    unsigned workers = 1;
    double e = 0, delta_e = 0, t_end = 0, omega1 = 0, omega2 = 0;
};

json overrides(const CLI::App& app, const Flags& f) {
    json j = json::object();
    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (given("--model")) j["model"] = f.model;
    if (given("--param")) {
        json p = json::object();
        for (const std::string& kv : f.params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw eqlab::DomainError("--param expects key=value, got '" + kv + "'");
            }
            try {
                p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            } catch (const std::exception&) {
                throw eqlab::DomainError("--param value is not a number: '" + kv + "'");
            }
        }
        j["params"] = p;
    }
    if (given("--fields")) j["fields"] = f.fields;
    if (given("--e-min")) j["e_min"] = f.e_min;
    if (given("--e-max")) j["e_max"] = f.e_max;
    if (given("--points")) j["points"] = f.points;
    if (given("--energies")) j["energies"] = f.energies;
    if (given("--seed")) j["seed"] = f.seed;
    if (given("--samples")) j["samples"] = f.samples;
    if (given("--fd-step")) j["fd_step"] = f.fd_step;
    if (given("--shell")) j["shell"] = f.shell;
    if (given("--steps-per-period")) j["steps_per_period"] = f.steps_per_period;
    if (given("--periods")) j["periods"] = f.periods;
    if (given("--format")) j["format"] = f.format;
    if (given("--method")) j["method"] = f.method;
    if (given("--e")) j["e"] = f.e;
    if (given("--delta-e")) j["delta_e"] = f.delta_e;
    if (given("--component")) j["component"] = f.component;
    if (given("--t-end")) j["t_end"] = f.t_end;
    if (given("--omega1")) j["omega1"] = f.omega1;
    if (given("--omega2")) j["omega2"] = f.omega2;
    return j;
}

void add_options(CLI::App& app, Flags& f) {
    app.add_option("--model", f.model, "pendulum, ho1d or ho2d");
    app.add_option("--param", f.params, "model parameter override key=value (repeatable)");
    app.add_option("--fields", f.fields, "field tokens: f11,f12,f21,f22,pcubed")
        ->delimiter(',');
    app.add_option("--e-min", f.e_min, "lowest grid energy");
    app.add_option("--e-max", f.e_max, "highest grid energy");
    app.add_option("--points", f.points, "number of grid points");
    app.add_option("--energies", f.energies, "explicit comma-separated energies")
        ->delimiter(',');
    app.add_option("--seed", f.seed, "master seed (default: $EQLAB_SEED or 0)");
    app.add_option("--samples", f.samples, "Monte Carlo samples per estimate");
    app.add_option("--fd-step", f.fd_step, "relative finite-difference step for dVol/dE");
    app.add_option("--shell", f.shell, "shell thickness for Monte Carlo averages");
    app.add_option("--steps-per-period", f.steps_per_period, "integrator steps per period");
    app.add_option("--periods", f.periods, "periods per time average");
    app.add_option("--method", f.method, "auto, mc or quadrature");
    app.add_option("--format", f.format, "csv or json");
    app.add_option("--out", f.out, "output path, - for standard output");
    app.add_option("--config", f.config, "JSON config file (same keys as the header)");
    app.add_option("--workers", f.workers, "worker threads (never changes results)");
    app.add_option("--e", f.e, "energy");
    app.add_option("--delta-e", f.delta_e, "energy increment");
    app.add_option("--component", f.component, "oscillation, rotation_pos or rotation_neg");
    app.add_option("--t-end", f.t_end, "orbit length (default: one period)");
    app.add_option("--omega1", f.omega1, "first oscillator frequency");
    app.add_option("--omega2", f.omega2, "second oscillator frequency");
}

eqlab::cli::RunConfig resolve(const std::string& command, const CLI::App& app,
                              const Flags& f) {
    eqlab::cli::RunConfig config;
    config.command = command;
    if (const char* env = std::getenv("EQLAB_SEED")) {
        try {
            config.mc.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw eqlab::DomainError(std::string("EQLAB_SEED is not an integer: ") + env);
        }
    }
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) {
            throw eqlab::DomainError("cannot read config file " + f.config);
        }
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw eqlab::DomainError("config file " + f.config + ": " + e.what());
        }
        j.erase("command");
        eqlab::cli::apply_json(config, j);
    }
    eqlab::cli::apply_json(config, overrides(app, f));
    if (app.count("--out") > 0) config.out = f.out;
    if (app.count("--workers") > 0) config.mc.workers = f.workers;
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"eqlab: equipartition laboratory for Hamiltonian systems"};
    app.set_version_flag("--version", std::string("eqlab ") + eqlab::cli::kVersion);
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands{
        {"scan", "compare both sides of the equipartition laws over an energy grid"},
        {"volumes", "phase-space volumes and Gibbs temperature over an energy grid"},
        {"correction", "boundary correction identity above the separatrix"},
        {"orbit", "integrated orbit as t,q,p,H rows"},
        {"counterexample", "action-angle table on the two-dimensional oscillator"},
    };
    Flags flags;
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_options(*sub, flags);
        subs.push_back(sub);
    }
    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* chosen = app.get_subcommands().front();
        const eqlab::cli::RunConfig config = resolve(chosen->get_name(), *chosen, flags);
        const eqlab::cli::CommandResult result = eqlab::cli::run_command(config);

        if (config.out == "-") {
            std::cout << result.text << std::flush;
        } else {
            std::ofstream file(config.out, std::ios::binary);
            if (!file || !(file << result.text) || !file.flush()) {
                std::cerr << "eqlab: cannot write " << config.out << '\n';
                return 2;
            }
        }
        if (result.exit_code != 0) {
            std::cerr << "eqlab: some rows failed; see the error lines in the output\n";
        }
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "eqlab: " << e.what() << '\n';
        return 2;
    }
}
