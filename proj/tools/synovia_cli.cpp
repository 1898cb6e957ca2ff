// Command-line front end: run / twin / verify / sweep over config files.
//
// Exit codes: 0 completed, 1 configuration error, 2 blow-up detected.

#include <CLI11.hpp>

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "synovia/config.hpp"
#include "synovia/errors.hpp"
#include "synovia/run_io.hpp"
#include "synovia/solver.hpp"
#include "synovia/verify.hpp"

namespace fs = std::filesystem;
using namespace synovia;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 1;
    int snapshot_every = 0;
    int report_every = 10;
};

const char* termination_name(Termination t) {
    return t == Termination::Completed ? "Completed" : "BlowUpDetected";
}

void write_manifest(const std::string& dir, const ExperimentSpec& spec,
                    const std::string& termination, const std::vector<std::string>& outputs) {
    fs::create_directories(dir);
    std::ofstream out(fs::path(dir) / "manifest");
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016" PRIx64, config_hash(spec));
    out << "config_hash = " << hash << '\n';
    out << "seed = " << spec.seed << '\n';
    out << "termination = " << termination << '\n';
    if (!spec.warning.empty()) out << "warning = " << spec.warning << '\n';
    for (const auto& path : outputs)
        out << "output = " << fs::relative(path, dir).string() << '\n';
}

ExperimentSpec load_spec(const CliOptions& opt) {
    ExperimentSpec spec = parse_config_file(opt.config_path);
    if (opt.seed_given) {
        spec.seed = opt.seed;
        spec.resolved["run.seed"] = std::to_string(opt.seed);
    }
    if (!spec.warning.empty()) std::cerr << spec.warning << '\n';
    return spec;
}

int cmd_run(const CliOptions& opt) {
    const ExperimentSpec spec = load_spec(opt);
    const RunReport report = run(spec.solver, build_initial_velocity(spec),
                                 build_initial_concentration(spec), opt.report_every,
                                 opt.snapshot_every);
    auto outputs = write_run_report(opt.out_dir, report);
    write_manifest(opt.out_dir, spec, termination_name(report.termination), outputs);
    std::cout << "run: " << termination_name(report.termination) << " at t = "
              << report.end_time << ", " << report.rows.size() << " monitor rows\n";
    return report.termination == Termination::Completed ? 0 : 2;
}

int cmd_twin(const CliOptions& opt) {
    const ExperimentSpec spec = load_spec(opt);
    const ContractionReport rep =
        twin_run(spec.solver, build_initial_velocity(spec), build_initial_concentration(spec),
                 spec.twin_eps, build_twin_perturbation(spec), opt.report_every);
    fs::create_directories(opt.out_dir);
    const std::string delta = (fs::path(opt.out_dir) / "delta.csv").string();
    write_contraction_csv(delta, rep);
    write_manifest(opt.out_dir, spec, termination_name(rep.termination), {delta});
    std::cout << "twin: eps = " << rep.eps << ", delta(0) = " << rep.delta.front()
              << ", delta(T) = " << rep.delta.back() << ", envelope rate = " << rep.lambda_fit
              << '\n';
    return rep.termination == Termination::Completed ? 0 : 2;
}

int cmd_verify(const CliOptions& opt) {
    const ExperimentSpec spec = load_spec(opt);
    RunReport report;
    std::vector<std::string> outputs;
    Snapshot first, last;
    bool have_snapshots = false;

    const fs::path energies = fs::path(opt.out_dir) / "energies.csv";
    if (fs::exists(energies)) {
        report = load_run_report(opt.out_dir);
        std::cout << "verify: loaded " << report.rows.size() << " rows from " << opt.out_dir
                  << '\n';
    } else {
        report = run(spec.solver, build_initial_velocity(spec),
                     build_initial_concentration(spec), opt.report_every,
                     std::max(opt.snapshot_every, 1 << 28));
        outputs = write_run_report(opt.out_dir, report);
        if (!report.snapshots.empty()) {
            first = report.snapshots.front();
            last = report.snapshots.back();
            have_snapshots = true;
        }
    }

    // forcing-dependent floor for the Grönwall fit
    std::vector<double> phi(report.rows.size(), 0.0);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const double t = report.rows[i].t;
        phi[i] = forcing_norm2_sq(spec.solver.forcing, spec.solver.grid, t) +
                 forcing_dt_norm2_sq(spec.solver.forcing, spec.solver.grid, t);
    }

    const std::string vdir = (fs::path(opt.out_dir) / "verify").string();
    bool all_ok = true;
    auto emit = [&](const InequalityReport& rep) {
        write_inequality_report(vdir, rep);
        outputs.push_back((fs::path(vdir) / (rep.name + ".report")).string());
        all_ok = all_ok && rep.satisfied;
        std::cout << "  " << rep.name << ": " << (rep.satisfied ? "satisfied" : "VIOLATED")
                  << " (constant " << rep.empirical_constant << ")\n";
    };

    emit(check_energy_balance(report));
    try {
        emit(check_gronwall_chain(report, phi));
    } catch (const FitFailure& e) {
        std::cout << "  gronwall_chain: fit not possible (" << e.what() << ")\n";
    }

    if (have_snapshots) {
        emit(check_lemma_hessian(spec.solver.stress.exponent, last.c, last.v));
        emit(check_lemma_difference(spec.solver.stress.exponent, last.c, first.v, last.v, 1.6));
    }

    {
        const StressConstants k =
            estimate_stress_constants(spec.solver.stress, 20000, 10.0, spec.seed);
        fs::create_directories(vdir);
        std::ofstream out(fs::path(vdir) / "stress_constants.report");
        out << "K1 = " << k.K1 << "\nK2 = " << k.K2 << "\nK3 = " << k.K3 << "\nK4 = " << k.K4
            << '\n';
        outputs.push_back((fs::path(vdir) / "stress_constants.report").string());
        std::cout << "  stress constants: K1 " << k.K1 << ", K2 " << k.K2 << ", K3 " << k.K3
                  << ", K4 " << k.K4 << '\n';
    }

    write_manifest(opt.out_dir, spec, termination_name(report.termination), outputs);
    if (!all_ok) std::cout << "verify: some inequality checks were violated; see reports\n";
    return report.termination == Termination::Completed ? 0 : 2;
}

int cmd_sweep(const CliOptions& opt) {
    const ExperimentSpec spec = load_spec(opt);
    if (spec.sweep_key.empty() || spec.sweep_values.empty())
        throw ConfigError("sweep needs [sweep] key and values in the config");

    struct Job {
        double value = 0.0;
        std::string dir;
        int exit_code = 1;
    };
    std::vector<Job> jobs;
    for (double v : spec.sweep_values) {
        char name[64];
        std::snprintf(name, sizeof(name), "sweep_%s_%g", spec.sweep_key.c_str(), v);
        for (char& ch : name)
            if (ch == '.') ch = '_';
        jobs.push_back({v, (fs::path(opt.out_dir) / name).string(), 1});
    }

    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            Job& job = jobs[i];
            try {
                const ExperimentSpec sub = apply_sweep_value(spec, job.value);
                const RunReport rep =
                    run(sub.solver, build_initial_velocity(sub), build_initial_concentration(sub),
                        opt.report_every, opt.snapshot_every);
                auto outputs = write_run_report(job.dir, rep);
                write_manifest(job.dir, sub, termination_name(rep.termination), outputs);
                job.exit_code = rep.termination == Termination::Completed ? 0 : 2;
            } catch (const Error& e) {
                std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << "sweep value " << job.value << ": " << e.what() << '\n';
                job.exit_code = 1;
            }
            std::lock_guard<std::mutex> lock(log_mutex);
            std::cout << "sweep " << spec.sweep_key << " = " << job.value << " -> exit "
                      << job.exit_code << '\n';
        }
    };
    std::vector<std::thread> pool;
    const int nworkers = std::max(1, std::min<int>(opt.workers, static_cast<int>(jobs.size())));
    pool.reserve(static_cast<std::size_t>(nworkers));
    for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::vector<std::string> outputs;
    for (const Job& job : jobs) outputs.push_back((fs::path(job.dir) / "manifest").string());
    int exit_code = 0;
    for (const Job& job : jobs) {
        if (job.exit_code == 1) exit_code = 1;
        if (job.exit_code == 2 && exit_code == 0) exit_code = 2;
    }
    write_manifest(opt.out_dir, spec,
                   exit_code == 0 ? "Completed" : (exit_code == 2 ? "BlowUpDetected" : "ConfigError"),
                   outputs);
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral solver for concentration-coupled shear-thinning flow"};
    app.require_subcommand(1);

    CliOptions opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "configuration file")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "RNG seed override")
            ->each([&](const std::string&) { opt.seed_given = true; });
        sub->add_option("--workers", opt.workers, "parallel runs for sweep");
        sub->add_option("--snapshot-every", opt.snapshot_every, "snapshot cadence in steps");
        sub->add_option("--report-every", opt.report_every, "monitor cadence in steps");
    };

    CLI::App* c_run = app.add_subcommand("run", "integrate one configuration");
    CLI::App* c_twin = app.add_subcommand("twin", "perturbation pair for uniqueness studies");
    CLI::App* c_verify = app.add_subcommand("verify", "inequality checks on a run");
    CLI::App* c_sweep = app.add_subcommand("sweep", "run a parameter axis");
    for (CLI::App* sub : {c_run, c_twin, c_verify, c_sweep}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_run->parsed()) return cmd_run(opt);
        if (c_twin->parsed()) return cmd_twin(opt);
        if (c_verify->parsed()) return cmd_verify(opt);
        if (c_sweep->parsed()) return cmd_sweep(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
