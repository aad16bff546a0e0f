// nsap - pseudo-spectral Navier-Stokes runs with an a-priori estimate monitor.
//
// Subcommands: run, check, scale-test, compare, sweep, resume.
// Exit codes: 0 ok, 2 trajectory escaped, 3 numerical failure, 4 config error.

#include <CLI11.hpp>

#include <iostream>

#include "nsap/harness.hpp"

namespace {

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const nsap::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return nsap::kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return nsap::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return nsap::kExitConfig;
    }
}

void print_report_summary(const nsap::InequalityReport& r) {
    std::cout << "inequality " << r.id << " (p = " << r.p << "): C_emp = " << r.c_emp
              << ", verdict = " << nsap::to_string(r.verdict) << "\n";
    for (const auto& note : r.notes) std::cout << "  note: " << note << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral periodic-box Navier-Stokes with an estimate monitor"};
    app.require_subcommand(1);
    app.footer(R"(config file sections and keys (defaults in configs/reference.ini):
  [grid]          dim=3 n=32 box_length=6.2831853071795862
  [ic]            kind=taylor_green|random_solenoidal|localized_bump|
                  critical_spectrum|shear|from_checkpoint amplitude=1 peak_k=3
                  seed=1 bump_radius_frac=0.25 critical_p=4 checkpoint=
  [solver]        viscosity=1 dt=0.001 t_end=1 snapshot_interval=0.1
                  nonlinear_form=skew_symmetric|divergence dealias=true
                  stokes_only=false cfl_safety=0.5 blowup_ceiling_factor=1e6
                  blowup_norm_p=4
  [monitor]       p_set=4,6,9 diag_stride=1 balance_terms=true
                  tail_fraction=0.1 checks=1.2,2.1,2.2,2.3,monotone
  [perturbation]  enabled=false + the same keys as [ic] for the w field
  [output]        directory=out checkpoint_stride=0 write_reports=true)");

    // --- run -----------------------------------------------------------------
    std::string run_config, run_output, run_resume;
    auto* cmd_run = app.add_subcommand("run", "run a scenario from a config file");
    cmd_run->add_option("config", run_config, "config file (sectioned key = value text)")
        ->required();
    cmd_run->add_option("--output", run_output, "override the [output] directory");
    cmd_run->add_option("--resume", run_resume, "start from a checkpoint file");

    // --- check ---------------------------------------------------------------
    std::string check_dir, check_id;
    int check_p = 0;
    auto* cmd_check = app.add_subcommand("check", "recompute one inequality report");
    cmd_check->add_option("dir", check_dir, "trajectory output directory")->required();
    cmd_check->add_option("--id", check_id, "inequality id (e.g. 1.2, 2.3, 3.4, monotone)")
        ->required();
    cmd_check->add_option("--p", check_p, "exponent p (default: the run's primary p)");

    // --- scale-test ------------------------------------------------------------
    std::string scale_config;
    int scale_lambda = 2;
    auto* cmd_scale = app.add_subcommand("scale-test", "kappa_p / ||.||_3 scaling invariance");
    cmd_scale->add_option("config", scale_config, "config file")->required();
    cmd_scale->add_option("--lambda", scale_lambda, "power-of-two scaling factor");

    // --- compare ---------------------------------------------------------------
    std::string cmp_a, cmp_b;
    auto* cmd_compare = app.add_subcommand("compare", "diff two run directories");
    cmd_compare->add_option("dirA", cmp_a)->required();
    cmd_compare->add_option("dirB", cmp_b)->required();

    // --- sweep -----------------------------------------------------------------
    std::string sweep_config;
    int sweep_count = 5;
    double sweep_kappa = 0.0;
    auto* cmd_sweep = app.add_subcommand("sweep", "IC family at fixed kappa_p");
    cmd_sweep->add_option("config", sweep_config, "base config file")->required();
    cmd_sweep->add_option("--count", sweep_count, "family size");
    cmd_sweep->add_option("--kappa", sweep_kappa, "target kappa_p (default: first member's)");

    // --- resume ----------------------------------------------------------------
    std::string resume_dir_arg;
    auto* cmd_resume = app.add_subcommand("resume", "continue a run directory to t_end");
    cmd_resume->add_option("dir", resume_dir_arg)->required();

    CLI11_PARSE(app, argc, argv);

    if (cmd_run->parsed()) {
        return guarded([&] {
            const nsap::ScenarioSpec spec = nsap::load_config(run_config);
            const nsap::ExecResult r =
                nsap::execute_scenario(spec, std::cout, std::filesystem::path(run_output),
                                       std::filesystem::path(run_resume));
            std::cout << "output: " << r.outdir.string() << "\n";
            for (const auto& [id, verdict] : r.manifest.verdicts)
                std::cout << "  " << id << ": " << verdict << "\n";
            return r.exit_code;
        });
    }
    if (cmd_check->parsed()) {
        return guarded([&] {
            const nsap::InequalityReport r =
                nsap::regenerate_check(check_dir, check_id, check_p);
            print_report_summary(r);
            return nsap::kExitOk;
        });
    }
    if (cmd_scale->parsed()) {
        return guarded([&] {
            const nsap::ScenarioSpec spec = nsap::load_config(scale_config);
            const nsap::ScalingReport r = nsap::scale_test_scenario(spec, scale_lambda);
            std::cout << "lambda = " << r.lambda << "\n"
                      << "kappa_p relative delta: " << r.kappa_rel_delta << "\n"
                      << "||u||_3 relative delta: " << r.l3_rel_delta << "\n"
                      << "||u||_2 factor: expected " << r.l2_expected_factor
                      << ", relative delta " << r.l2_rel_delta << "\n"
                      << (r.pass ? "scaling invariance holds to 1e-10\n"
                                 : "scaling invariance FAILED the 1e-10 bound\n");
            return r.pass ? nsap::kExitOk : 1;
        });
    }
    if (cmd_compare->parsed()) {
        return guarded([&] {
            const nsap::CompareResult r = nsap::compare_dirs(cmp_a, cmp_b);
            if (r.identical) {
                std::cout << "directories match (series";
                if (r.checkpoint_l2_distance >= 0) std::cout << " and final checkpoint";
                std::cout << ")\n";
            } else {
                for (const auto& c : r.columns)
                    if (c.max_abs > 0)
                        std::cout << c.column << ": max abs diff " << c.max_abs
                                  << ", max rel diff " << c.max_rel << "\n";
                if (r.checkpoint_l2_distance > 0)
                    std::cout << "final checkpoint L2 distance: " << r.checkpoint_l2_distance
                              << "\n";
            }
            return nsap::kExitOk;
        });
    }
    if (cmd_sweep->parsed()) {
        return guarded([&] {
            const nsap::ScenarioSpec spec = nsap::load_config(sweep_config);
            const nsap::SweepResult r =
                nsap::run_sweep(spec, sweep_count, sweep_kappa, std::cout);
            std::cout << "family kappa_p = " << r.target_kappa << ", p = " << r.p << "\n";
            for (const auto& m : r.members)
                std::cout << "  seed " << m.seed << ": kappa " << m.kappa_p << ", C_emp "
                          << m.c_emp << " (" << m.verdict << ")\n";
            std::cout << "C_emp spread (max/min): " << r.spread << "\n";
            return r.all_hold ? nsap::kExitOk : 1;
        });
    }
    if (cmd_resume->parsed()) {
        return guarded([&] {
            const nsap::ExecResult r = nsap::resume_run(resume_dir_arg, std::cout);
            std::cout << "output: " << r.outdir.string() << "\n";
            return r.exit_code;
        });
    }
    return nsap::kExitConfig;
}
