#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <iostream>
#include <random>
#include <thread>
#include <vector>

#include "fracns/config.hpp"
#include "fracns/estimates.hpp"
#include "fracns/harness.hpp"
#include "fracns/io.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBlowup = 2;
constexpr int kExitResolution = 3;

int jobs_from_env(int cli_jobs) {
    if (cli_jobs > 0) return cli_jobs;
    if (const char* env = std::getenv("FRACNS_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

int run_simulate(const std::string& config_path, bool emit_config) {
    fracns::RunConfig cfg;
    try {
        cfg = fracns::load_run_config(config_path);
    } catch (const fracns::ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    if (emit_config) {
        std::cout << fracns::normalize_run_config(cfg);
        return kExitOk;
    }
    const fracns::SpectralField u0 = fracns::make_datum(cfg.datum, cfg.grid);
    const fracns::TrajectoryReport rep = fracns::run(u0, cfg.solver);
    const std::string stem = cfg.output.directory + "/" + cfg.output.basename;
    if (cfg.output.formats == "csv" || cfg.output.formats == "both")
        fracns::atomic_write(stem + ".csv", fracns::trajectory_csv(rep));
    if (cfg.output.formats == "json" || cfg.output.formats == "both")
        fracns::atomic_write(stem + ".json", fracns::trajectory_json(rep));
    std::cout << "status: " << fracns::to_string(rep.status) << "\n";
    switch (rep.status) {
        case fracns::RunStatus::Completed: return kExitOk;
        case fracns::RunStatus::BlowupDetected: return kExitBlowup;
        case fracns::RunStatus::ResolutionExhausted: return kExitResolution;
    }
    return kExitOk;
}

int run_stability(const std::string& manifest_path, int jobs) {
    fracns::StabilityManifest m;
    try {
        m = fracns::load_stability_manifest(manifest_path);
    } catch (const fracns::ConfigError& e) {
        std::cerr << manifest_path << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    if (m.entries.empty()) {
        std::cerr << "manifest has no [entry NAME] sections\n";
        return kExitUsage;
    }
    const fracns::SpectralField u0 = fracns::make_datum(m.base.datum, m.base.grid);

    struct Slot {
        bool skipped = false;
        std::string skip_reason;
        fracns::StabilityReport report;
    };
    std::vector<Slot> slots(m.entries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= m.entries.size()) return;
            const auto& e = m.entries[i];
            fracns::SpectralField v0 = u0;
            if (e.perturbation_hs > 0.0) {
                fracns::DatumSpec pert;
                pert.kind = fracns::DatumSpec::Kind::RandomDivFree;
                pert.seed = e.pert_seed;
                pert.target_order = m.s;
                pert.target_value = e.perturbation_hs;
                v0 += fracns::make_datum(pert, m.base.grid);
            }
            try {
                slots[i].report = fracns::stability_experiment(
                    u0, v0, m.base.solver.alpha, e.beta, m.s, m.delta, m.base.solver.t_end,
                    m.base.solver, m.base.ledger);
            } catch (const std::invalid_argument&) {
                slots[i].skipped = true;
                slots[i].skip_reason = "inadmissible (alpha,beta,s,delta)";
            }
        }
    };
    const int nthreads = std::min<int>(jobs, static_cast<int>(m.entries.size()));
    if (nthreads > 1) {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    } else {
        worker();
    }

    bool all_dominated = true;
    json summary;
    summary["schema"] = "fracns-stability/1";
    summary["entries"] = json::array();
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        const auto& e = m.entries[i];
        json row;
        row["name"] = e.name;
        row["beta"] = e.beta;
        row["perturbation"] = e.perturbation_hs;
        if (slots[i].skipped) {
            row["skipped"] = slots[i].skip_reason;
            std::cout << e.name << ": skipped, " << slots[i].skip_reason << "\n";
        } else {
            const auto& rep = slots[i].report;
            row["dominated"] = rep.dominated;
            row["max_f"] = rep.max_f;
            row["u_status"] = fracns::to_string(rep.u_status);
            row["v_status"] = fracns::to_string(rep.v_status);
            if (rep.first_violation_time) row["first_violation_time"] = *rep.first_violation_time;
            all_dominated = all_dominated && rep.dominated;
            std::cout << e.name << ": dominated=" << (rep.dominated ? "true" : "false")
                      << " max_f=" << rep.max_f << "\n";
            fracns::atomic_write(m.base.output.directory + "/stability_" + e.name + ".csv",
                                 fracns::stability_csv(rep));
        }
        summary["entries"].push_back(std::move(row));
    }
    summary["all_dominated"] = all_dominated;
    fracns::atomic_write(m.base.output.directory + "/stability_summary.json", summary.dump(2));
    return all_dominated ? kExitOk : kExitBlowup;
}

int run_verify(const std::string& suite, int kmax, int trials, int n,
               const std::string& csv_path) {
    using namespace fracns;
    const ConstantsLedger ledger;
    if (suite == "lemma32") {
        double worst = 0.0;
        std::string csv = "alpha,beta,delta,worst_ratio\n";
        for (double alpha = 0.75; alpha <= 1.25 + 1e-12; alpha += 0.05)
            for (int d = 1; d <= 10; ++d) {
                const double delta = 0.1 * d;
                for (double beta : {alpha - delta / 2.0, alpha - delta / 4.0, alpha}) {
                    if (beta < delta / 2.0) continue;
                    const double cell = permode_diff_bound_scan(alpha, beta, delta, kmax, ledger);
                    char row[128];
                    std::snprintf(row, sizeof(row), "%.4f,%.4f,%.4f,%.12g\n", alpha, beta, delta,
                                  cell);
                    csv += row;
                    worst = std::max(worst, cell);
                }
            }
        if (!csv_path.empty()) fracns::atomic_write(csv_path, csv);
        GridSpec g{n > 0 ? n : 16, 2.0 / 3.0};
        double worst_field = 0.0;
        std::mt19937_64 rng(411);
        auto uniform = [&](double a, double b) {
            return a + (b - a) * ((rng() >> 11) * 0x1.0p-53);
        };
        for (int t = 0; t < trials; ++t) {
            DatumSpec spec;
            spec.kind = DatumSpec::Kind::RandomDivFree;
            spec.seed = 500 + t;
            const SpectralField u = make_datum(spec, g);
            const double alpha = uniform(0.75, 1.25);
            const double delta = uniform(0.1, 1.0);
            const double beta = uniform(std::max(delta / 2.0, alpha - delta / 2.0), alpha);
            const double s = uniform(0.0, 2.0);
            worst_field = std::max(
                worst_field, frac_lap_diff_check(u, alpha, beta, delta, s, ledger).ratio);
        }
        std::cout << "lemma32: worst permode ratio " << worst << ", worst field ratio "
                  << worst_field << "\n";
        return (worst <= 1.0 && worst_field <= 1.0) ? kExitOk : kExitUsage;
    }
    if (suite == "interpolation") {
        GridSpec g{n > 0 ? n : 16, 2.0 / 3.0};
        std::mt19937_64 rng(517);
        auto uniform = [&](double a, double b) {
            return a + (b - a) * ((rng() >> 11) * 0x1.0p-53);
        };
        double worst_margin = 0.0;
        std::string csv = "trial,s,beta,gradient_margin,sobolev_margin\n";
        for (int t = 0; t < trials; ++t) {
            DatumSpec spec;
            spec.kind = DatumSpec::Kind::RandomDivFree;
            spec.seed = 900 + t;
            const SpectralField u = make_datum(spec, g);
            const double beta = uniform(0.75, 1.25);
            const double s = uniform(std::max(0.0, 1.0 - beta), 1.0);
            const double mg = interpolation_gradient_check(u, s, beta).margin;
            const double ms = interpolation_sobolev_check(u, beta).margin;
            char row[128];
            std::snprintf(row, sizeof(row), "%d,%.6f,%.6f,%.6g,%.6g\n", t, s, beta, mg, ms);
            csv += row;
            worst_margin = std::min({worst_margin, mg, ms});
        }
        if (!csv_path.empty()) fracns::atomic_write(csv_path, csv);
        std::cout << "interpolation: worst margin " << worst_margin << "\n";
        return worst_margin >= -1e-12 ? kExitOk : kExitUsage;
    }
    if (suite == "energy") {
        GridSpec g{n > 0 ? n : 16, 2.0 / 3.0};
        DatumSpec tg;
        tg.kind = DatumSpec::Kind::TaylorGreen;
        const SpectralField u0 = make_datum(tg, g);
        SolverParams p;
        p.alpha = 1.25;
        p.t_end = 0.25;
        p.dt = 4e-3;
        const double coarse = energy_budget_check(run(u0, p));
        p.dt = 2e-3;
        const double fine = energy_budget_check(run(u0, p));
        const double ratio = fine > 0.0 ? coarse / fine : 16.0;
        std::cout << "energy: defect(dt)/defect(dt/2) = " << ratio << "\n";
        return ratio >= 12.0 ? kExitOk : kExitUsage;
    }
    if (suite == "scaling") {
        GridSpec g{n > 0 ? n : 16, 2.0 / 3.0};
        DatumSpec tg;
        tg.kind = DatumSpec::Kind::TaylorGreen;
        const SpectralField u0 = make_datum(tg, g);
        SolverParams p;
        p.dt = 2e-3;
        p.t_end = 0.25;
        const double defect = scaling_symmetry_check(u0, 1.25, 2, 0.25, p);
        std::cout << "scaling: relative defect " << defect << "\n";
        return defect <= 1e-6 ? kExitOk : kExitUsage;
    }
    std::cerr << "unknown suite '" << suite << "' (expected lemma32|interpolation|energy|scaling)\n";
    return kExitUsage;
}

int run_constants(const std::string& query, double s, double beta, double alpha, double m,
                  double delta, double t, double norm, double norm_hs1_sq, double norm_hsad_sq,
                  const fracns::ConstantsLedger& ledger) {
    using namespace fracns;
    json out;
    out["schema"] = "fracns-constants/1";
    out["query"] = query;
    json flags = json::object();
    try {
        if (query == "gamma") {
            out["inputs"] = {{"s", s}, {"beta", beta}};
            out["value"] = gamma_exponent(s, beta);
        } else if (query == "c0") {
            out["inputs"] = {{"s", s}, {"order", beta}};
            const C0Result r = constant_c0(s, beta, ledger);
            out["value"] = r.value;
            out["branch"] = r.branch;
            out["cap"] = r.cap;
        } else if (query == "c1") {
            out["inputs"] = {{"s", s}};
            out["value"] = constant_c1(s, ledger);
        } else if (query == "epsilon54") {
            out["inputs"] = {{"M", m}, {"delta", delta}};
            const Epsilon54 r = epsilon_54(m, delta, ledger);
            out["value"] = r.value;
            out["log10_value"] = r.log10_value;
            flags["underflow"] = r.underflow;
        } else if (query == "epsilon-local") {
            out["inputs"] = {{"s", s}, {"alpha", alpha}, {"beta", beta}, {"delta", delta},
                             {"T", t}, {"norm_hs1_sq", norm_hs1_sq},
                             {"norm_hsad_sq", norm_hsad_sq}};
            const GronwallSpec spec = GronwallSpec::make(s, alpha, beta, delta, ledger);
            out["value"] = epsilon_local(spec, t, norm_hs1_sq, norm_hsad_sq);
        } else if (query == "leray-h1") {
            out["inputs"] = {{"alpha", alpha}, {"grad_norm", norm}};
            out["value"] = leray_time_h1(norm, alpha, ledger);
        } else if (query == "leray-halpha") {
            out["inputs"] = {{"alpha", alpha}, {"halpha_norm", norm}};
            out["value"] = leray_time_halpha(norm, alpha, ledger);
        } else if (query == "tstar") {
            out["inputs"] = {{"M", m}, {"alpha", alpha}};
            const TstarResult r = tstar(m, alpha, ledger);
            out["value"] = r.threshold;
            out["branch"] = r.branch;
            if (r.improved_cap) {
                out["improved_cap"] = *r.improved_cap;
                out["log10_cap"] = r.log10_cap;
            }
        } else {
            std::cerr << "unknown constants query '" << query << "'\n";
            return kExitUsage;
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    out["flags"] = flags;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudospectral fractional Navier-Stokes solver and stability estimate toolkit"};
    app.require_subcommand(1);

    std::string config_path, manifest_path, suite, query;
    bool emit_config = false;
    int jobs = 0, kmax = 64, trials = 200, grid_n = 0;
    double s = 1.0, beta = 1.25, alpha = 1.25, m = 1.0, delta = 1.0, t = 1.0, norm = 1.0;
    double norm_hs1_sq = 0.0, norm_hsad_sq = 0.0;
    fracns::ConstantsLedger ledger;

    auto* sim = app.add_subcommand("simulate", "Integrate one trajectory from a config file");
    sim->add_option("--config", config_path, "run configuration file")->required();
    sim->add_flag("--emit-config", emit_config, "print the normalized config and exit");

    auto* stab = app.add_subcommand("stability", "Run paired stability experiments from a manifest");
    stab->add_option("--manifest", manifest_path, "experiment manifest")->required();
    stab->add_option("--jobs", jobs, "concurrent experiments (or FRACNS_JOBS)");

    auto* ver = app.add_subcommand("verify", "Run a named inequality/property suite");
    ver->add_option("suite", suite, "lemma32|interpolation|energy|scaling")->required();
    ver->add_option("--kmax", kmax, "lattice radius for the per-mode scan");
    ver->add_option("--trials", trials, "random fields per probe");
    ver->add_option("--n", grid_n, "grid size for field probes");
    std::string verify_csv;
    ver->add_option("--csv", verify_csv, "write per-cell worst ratios/margins as CSV");

    auto* con = app.add_subcommand("constants", "Evaluate one closed-form calculator as JSON");
    con->add_option("query", query, "gamma|c0|c1|epsilon54|epsilon-local|leray-h1|leray-halpha|tstar")
        ->required();
    con->add_option("--s", s);
    con->add_option("--beta", beta);
    con->add_option("--alpha", alpha);
    con->add_option("--m", m);
    con->add_option("--delta", delta);
    con->add_option("--t", t);
    con->add_option("--norm", norm);
    con->add_option("--norm-hs1-sq", norm_hs1_sq);
    con->add_option("--norm-hsad-sq", norm_hsad_sq);
    con->add_option("--c-bar", ledger.c_bar);
    con->add_option("--d-bar", ledger.d_bar);
    con->add_option("--c2-lemma", ledger.c2_lemma);

    auto* cal = app.add_subcommand("calibrate", "Estimate the discrete embedding constant");
    double cal_alpha = 1.0;
    int cal_trials = 50, cal_n = 16;
    std::uint64_t cal_seed = 1;
    cal->add_option("--alpha", cal_alpha)->required();
    cal->add_option("--n", cal_n);
    cal->add_option("--trials", cal_trials);
    cal->add_option("--seed", cal_seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate(config_path, emit_config);
        if (stab->parsed()) return run_stability(manifest_path, jobs_from_env(jobs));
        if (ver->parsed()) return run_verify(suite, kmax, trials, grid_n, verify_csv);
        if (con->parsed())
            return run_constants(query, s, beta, alpha, m, delta, t, norm, norm_hs1_sq,
                                 norm_hsad_sq, ledger);
        if (cal->parsed()) {
            fracns::GridSpec g{cal_n, 2.0 / 3.0};
            const double est = fracns::calibrate_embedding(cal_alpha, g, cal_trials, cal_seed);
            json out;
            out["schema"] = "fracns-calibrate/1";
            out["inputs"] = {{"alpha", cal_alpha}, {"n", cal_n}, {"trials", cal_trials},
                             {"seed", cal_seed}};
            out["estimated_c_bar_alpha"] = est;
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
