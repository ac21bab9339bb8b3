// Copyright 2026 The NCQF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ncqf/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ncqf/errors.hpp"
#include "ncqf/experiments.hpp"
#include "ncqf/magic.hpp"

#ifndef NCQF_VERSION
#define NCQF_VERSION "0.0.0"
#endif

namespace ncqf::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string &path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + path);
    }
    return f;
}

std::string read_file(const std::string &path, const std::string &field) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ValidationError(field, "cannot read '" + path + "'");
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json parse_json(const std::string &text, const std::string &field) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError(field, std::string("invalid JSON: ") + e.what());
    }
}

void write_text(const std::string &path, const std::string &text) {
    auto f = open_out(path);
    f << text;
}

int report(std::ostream &err, int code, json body) {
    err << body.dump() << "\n";
    return code;
}

}  // namespace

void write_trajectory_csv(const TrajectoryRecord &rec, const std::string &path) {
    auto f = open_out(path);
    f << "t";
    for (const auto &name : rec.observable_names) {
        f << "," << name;
    }
    for (const auto &label : rec.channel_labels) {
        f << ",r_" << label << ",dW_" << label;
    }
    f << "\n";
    for (size_t r = 0; r < rec.rows(); r++) {
        f << format_double(rec.times[r]);
        for (const auto &series : rec.observables) {
            f << "," << format_double(series[r]);
        }
        for (size_t c = 0; c < rec.channel_labels.size(); c++) {
            f << "," << format_double(rec.readouts[c][r]) << "," << format_double(rec.noise[c][r]);
        }
        f << "\n";
    }
}

void write_aggregate_csv(const EnsembleSummary &s, const std::string &path) {
    auto f = open_out(path);
    f << "t";
    for (const auto &name : s.observables) {
        f << "," << name << "_mean," << name << "_p16," << name << "_p50," << name << "_p84";
    }
    f << "\n";
    for (size_t r = 0; r < s.times.size(); r++) {
        f << format_double(s.times[r]);
        for (const auto &name : s.observables) {
            const Stats &st = s.bands.at(name)[r];
            f << "," << format_double(st.mean) << "," << format_double(st.p16) << "," << format_double(st.p50)
              << "," << format_double(st.p84);
        }
        f << "\n";
    }
}

void write_spectrum_csv(const std::vector<TrajectoryRecord> &records, const std::string &path) {
    auto f = open_out(path);
    f << "traj,t,branch,re,im,exceptional\n";
    for (size_t i = 0; i < records.size(); i++) {
        for (const auto &sample : records[i].spectrum) {
            for (size_t k = 0; k < sample.values.size(); k++) {
                f << i << "," << format_double(sample.t) << "," << sample.branch[k] << ","
                  << format_double(sample.values[k].real()) << "," << format_double(sample.values[k].imag()) << ","
                  << (sample.exceptional ? 1 : 0) << "\n";
            }
        }
    }
}

int cmd_run(const RunRequest &req, std::ostream &out, std::ostream &err) {
    try {
        const int sources = (req.config_path.empty() ? 0 : 1) + (req.preset.empty() ? 0 : 1) +
                            (req.manifest_path.empty() ? 0 : 1);
        if (sources != 1) {
            throw ValidationError("config", "give exactly one of --config, --preset, --manifest");
        }
        ScenarioConfig config;
        std::uint64_t seed = 0;
        long long n_traj = 1;
        if (!req.config_path.empty()) {
            config = scenario_from_json(parse_json(read_file(req.config_path, "config"), "config"));
        } else if (!req.preset.empty()) {
            config = experiments::preset(req.preset);
        } else {
            json m = parse_json(read_file(req.manifest_path, "manifest"), "manifest");
            if (!m.contains("config") || !m.contains("master_seed") || !m.contains("n_traj")) {
                throw ValidationError("manifest", "missing config, master_seed or n_traj");
            }
            config = scenario_from_json(m["config"]);
            seed = m["master_seed"].get<std::uint64_t>();
            n_traj = m["n_traj"].get<long long>();
        }
        if (req.dt) {
            config.dt = *req.dt;
        }
        if (req.observable_stride) {
            config.observable_stride = *req.observable_stride;
        }
        if (req.trajectories) {
            n_traj = *req.trajectories;
        }
        if (req.seed) {
            seed = *req.seed;
        }
        if (n_traj < 1) {
            throw ValidationError("trajectories", "must be at least 1");
        }
        validate(config);
        Scenario scenario = materialize(config);

        int workers = 0;
        if (req.workers) {
            workers = *req.workers;
        } else if (const char *env = std::getenv("NCQF_WORKERS")) {
            try {
                workers = std::stoi(env);
            } catch (const std::exception &) {
                throw ValidationError("NCQF_WORKERS", "expected an integer");
            }
        }
        if (workers < 0) {
            throw ValidationError("workers", "must be non-negative");
        }

        bool per_traj = req.csv == CsvMode::per_trajectory || (req.csv == CsvMode::automatic && n_traj <= 16);
        EnsembleOptions opts;
        opts.workers = workers;
        opts.aggregate = !per_traj;
        opts.keep_records = per_traj || config.track_spectrum;

        auto t0 = std::chrono::steady_clock::now();
        EnsembleSummary summary = run_ensemble(scenario, n_traj, seed, opts);
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        fs::create_directories(req.out_dir);
        std::vector<std::string> files;
        auto emit = [&](const std::string &name) {
            files.push_back(name);
            return (fs::path(req.out_dir) / name).string();
        };
        json cfg = to_json(config);
        write_text(emit("config.json"), cfg.dump(2) + "\n");
        json ens = summary.to_json();
        ens["summary_digest"] = summary.digest();
        write_text(emit("ensemble.json"), ens.dump(2) + "\n");
        if (per_traj) {
            for (size_t i = 0; i < summary.records.size(); i++) {
                if (!summary.outcomes[i].ok) {
                    continue;
                }
                char name[32];
                std::snprintf(name, sizeof name, "traj_%04zu.csv", i);
                write_trajectory_csv(summary.records[i], emit(name));
            }
        } else {
            write_aggregate_csv(summary, emit("aggregate.csv"));
        }
        if (config.track_spectrum) {
            write_spectrum_csv(summary.records, emit("spectrum.csv"));
        }

        json inventory = json::array();
        for (const auto &name : files) {
            std::string bytes = read_file((fs::path(req.out_dir) / name).string(), "out");
            inventory.push_back({{"file", name}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
        }
        json manifest = {
            {"schema", "ncqf.manifest/1"},
            {"csv_schema", kCsvSchema},
            {"code_version", NCQF_VERSION},
            {"scenario", config.name},
            {"config_digest", summary.config_digest},
            {"summary_digest", ens["summary_digest"]},
            {"master_seed", seed},
            {"n_traj", n_traj},
            {"dt", config.dt},
            {"workers", workers},
            {"wall_clock_seconds", wall},
            {"files", inventory},
            {"config", cfg},
        };
        write_text((fs::path(req.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
        out << "wrote " << files.size() + 1 << " files to " << req.out_dir << " (" << summary.completed << "/"
            << n_traj << " trajectories completed";
        if (summary.has_postselect) {
            out << ", " << summary.successes << " postselected";
        }
        out << ")\n";
        return kExitOk;
    } catch (const ValidationError &e) {
        return report(err, kExitValidation, {{"error", "validation"}, {"field", e.field}, {"message", e.what()}});
    } catch (const IntegrationError &e) {
        return report(err, kExitIntegration, {{"error", "integration"}, {"step", e.step_index}, {"message", e.what()}});
    } catch (const PreconditionError &e) {
        return report(err, kExitIntegration, {{"error", "integration"}, {"message", e.what()}});
    } catch (const std::exception &e) {
        return report(err, 1, {{"error", "io"}, {"message", e.what()}});
    }
}

int cmd_analytic(const std::string &quantity, const std::vector<std::string> &eps, std::ostream &out,
                 std::ostream &err) {
    try {
        double (*fn)(double) = nullptr;
        if (quantity == "msd_ps") {
            fn = msd::ps_analytic;
        } else if (quantity == "msd_eps_out") {
            fn = msd::eps_out_analytic;
        } else {
            throw ValidationError("quantity", "expected msd_ps or msd_eps_out");
        }
        if (eps.empty()) {
            throw ValidationError("eps", "at least one value is required");
        }
        std::vector<std::pair<double, double>> rows;
        for (const auto &text : eps) {
            size_t used = 0;
            double e = 0.0;
            try {
                e = std::stod(text, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used != text.size()) {
                throw ValidationError("eps", "not a number: '" + text + "'");
            }
            rows.emplace_back(e, fn(e));
        }
        out << "eps,value\n";
        for (const auto &[e, v] : rows) {
            out << format_double(e) << "," << format_double(v) << "\n";
        }
        return kExitOk;
    } catch (const ValidationError &e) {
        return report(err, kExitValidation, {{"error", "validation"}, {"field", e.field}, {"message", e.what()}});
    }
}

int cmd_list(std::ostream &out) {
    for (const auto &p : experiments::presets()) {
        out << p.name << "\t" << p.description << "\n";
    }
    return kExitOk;
}

int main(int argc, char **argv) {
    CLI::App app{"Noise-canceling quantum feedback simulator"};
    app.require_subcommand(1);

    RunRequest req;
    long long trajectories = 0;
    std::uint64_t seed = 0;
    double dt = 0.0;
    int workers = 0;
    int stride = 0;
    std::string csv = "auto";
    auto *run = app.add_subcommand("run", "run a scenario ensemble and write outputs");
    run->add_option("--config", req.config_path, "scenario JSON file");
    run->add_option("--preset", req.preset, "built-in scenario name (see `list`)");
    run->add_option("--manifest", req.manifest_path, "re-run the configuration recorded in a manifest.json");
    auto *o_traj = run->add_option("--trajectories,-n", trajectories, "number of trajectories");
    auto *o_seed = run->add_option("--seed", seed, "master seed");
    auto *o_dt = run->add_option("--dt", dt, "time step override");
    auto *o_workers = run->add_option("--workers,-j", workers, "worker threads (0 = all cores; env NCQF_WORKERS)");
    auto *o_stride = run->add_option("--observable-stride", stride, "record every k-th step");
    run->add_option("--out,-o", req.out_dir, "output directory");
    run->add_option("--csv", csv, "auto, per-trajectory or aggregate")
        ->check(CLI::IsMember({"auto", "per-trajectory", "aggregate"}));

    std::string quantity;
    std::vector<std::string> eps;
    auto *analytic = app.add_subcommand("analytic", "closed-form MSD success probability and output error");
    analytic->add_option("quantity", quantity, "msd_ps or msd_eps_out")->required();
    analytic->add_option("eps", eps, "input error rates")->required();

    auto *list = app.add_subcommand("list", "list built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    if (run->parsed()) {
        if (o_traj->count() > 0) {
            req.trajectories = trajectories;
        }
        if (o_seed->count() > 0) {
            req.seed = seed;
        }
        if (o_dt->count() > 0) {
            req.dt = dt;
        }
        if (o_workers->count() > 0) {
            req.workers = workers;
        }
        if (o_stride->count() > 0) {
            req.observable_stride = stride;
        }
        req.csv = csv == "per-trajectory" ? CsvMode::per_trajectory
                  : csv == "aggregate"    ? CsvMode::aggregate
                                          : CsvMode::automatic;
        return cmd_run(req, std::cout, std::cerr);
    }
    if (analytic->parsed()) {
        return cmd_analytic(quantity, eps, std::cout, std::cerr);
    }
    if (list->parsed()) {
        return cmd_list(std::cout);
    }
    return kExitValidation;
}

}  // namespace ncqf::cli
