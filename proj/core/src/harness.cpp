#include "nsap/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nsap/checkpoint.hpp"
#include "nsap/projection.hpp"
#include "nsap/report_io.hpp"
#include "nsap/series.hpp"

namespace nsap {

namespace {

namespace fs = std::filesystem;

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct ReportSink {
    fs::path report_dir;
    RunManifest* manifest;

    void emit(const InequalityReport& r) {
        const std::string name = report_filename(r);
        write_report(report_dir / name, r);
        manifest->verdicts[r.id] = to_string(r.verdict);
        manifest->files.push_back("reports/" + name);
    }
};

const std::set<std::string> kIntegralIds = {"1.4",  "L2.2.3", "2.9",      "2.10",
                                            "2.11", "2.12",   "2.13", "2.12chain"};
const std::set<std::string> kPerturbationIds = {"3.4", "3.6", "3.7", "3.8", "3.9"};
const std::set<std::string> kBalanceIds = {"2.2", "2.5", "2.6"};

/// Dispatches one check id against the stored series; bundle ids share one
/// computation and the requested report is selected from it.
std::vector<InequalityReport> run_checks(const std::vector<std::string>& ids,
                                         const DiagnosticSeries& series,
                                         const DiagnosticSeries* series_w,
                                         const InitialNorms& init_v,
                                         const InitialNorms& init_w, const ScenarioSpec& spec) {
    std::vector<InequalityReport> out;
    bool did_balance = false, did_integral = false, did_pert = false;
    const int p = series.primary_p();
    for (const auto& id : ids) {
        if (id == "1.2") {
            out.push_back(check_energy(series, spec.solver.viscosity));
        } else if (id == "2.1") {
            out.push_back(check_sobolev(series, p));
        } else if (kBalanceIds.count(id)) {
            if (!did_balance) {
                for (auto& r : check_lp_balance(series, p)) out.push_back(std::move(r));
                did_balance = true;
            }
        } else if (id == "2.3") {
            out.push_back(check_ode_bound(series, p));
        } else if (id == "monotone") {
            out.push_back(check_monotone(series, {2.0, 3.0, static_cast<double>(p)}));
        } else if (kIntegralIds.count(id)) {
            if (!did_integral) {
                for (auto& r : check_integral_bounds(series, p, init_v, spec.solver.viscosity,
                                                     spec.box_length))
                    out.push_back(std::move(r));
                did_integral = true;
            }
        } else if (kPerturbationIds.count(id)) {
            if (!series_w)
                throw std::invalid_argument("check " + id +
                                            " needs a coupled (perturbation) run");
            if (!did_pert) {
                for (auto& r : check_perturbation(series, *series_w, p, init_v, init_w))
                    out.push_back(std::move(r));
                did_pert = true;
            }
        } else {
            throw std::invalid_argument("unknown inequality id: " + id);
        }
    }
    return out;
}

}  // namespace

const std::vector<std::string>& known_check_ids() {
    static const std::vector<std::string> ids = {
        "1.2",  "2.1",  "2.2",  "2.3",  "2.5",  "2.6",  "monotone", "1.4",       "L2.2.3",
        "2.9",  "2.10", "2.11", "2.12", "2.13", "2.12chain", "3.4", "3.6",       "3.7",
        "3.8",  "3.9"};
    return ids;
}

ExecResult execute_scenario(const ScenarioSpec& spec, std::ostream& log,
                            const fs::path& outdir_override, const fs::path& resume_checkpoint) {
    ExecResult result;
    result.outdir = outdir_override.empty() ? fs::path(spec.output_dir) : outdir_override;
    fs::create_directories(result.outdir);
    fs::create_directories(result.outdir / "reports");

    RunManifest& manifest = result.manifest;
    manifest.scenario_hash = hash_hex(scenario_hash(spec));
    manifest.code_version = code_version();
    manifest.started_utc = utc_now();
    manifest.seed = spec.ic.seed;

    // config echo
    {
        std::ofstream os(result.outdir / "config.ini");
        os << serialize_config(spec);
        manifest.files.push_back("config.ini");
    }

    GridPtr grid = make_grid(spec.dim, spec.n, spec.box_length);

    double t_start = 0.0;
    VectorField u0;
    const bool resuming = !resume_checkpoint.empty();
    if (resuming) {
        Checkpoint ck = read_checkpoint(resume_checkpoint);
        if (!ck.u.grid->compatible(*grid))
            throw std::invalid_argument("resume checkpoint grid does not match the config");
        u0 = leray_project(ck.u);
        t_start = ck.t;
        log << "resuming from t = " << t_start << "\n";
        manifest.warnings.push_back("resumed run: initial norms refer to the resume state");
    } else {
        u0 = make_initial(grid, spec.ic);
    }
    manifest.initial = initial_norms(u0, spec.monitor.p_set.empty()
                                             ? 4.0
                                             : static_cast<double>(spec.monitor.p_set.front()));

    // a resumed run must not clobber the original t = 0 state
    const char* start_name = resuming ? "checkpoint_resume.nsap" : "checkpoint_initial.nsap";
    write_checkpoint(result.outdir / start_name, u0, t_start);
    manifest.files.push_back(start_name);

    try {
        if (spec.perturbation_enabled) {
            VectorField w0 = make_initial(grid, spec.w_ic);
            SeriesCollector cv(spec.monitor, spec.dim);
            SeriesCollector cw(spec.monitor, spec.dim);
            SeriesCollector csum(spec.monitor, spec.dim);
            auto observer = [&](const Snapshot& sv, const Snapshot& sw) {
                cv.ingest(sv);
                cw.ingest(sw);
                std::vector<std::vector<Complex>> sum;
                for (std::size_t d = 0; d < sv.u.comp.size(); ++d) {
                    std::vector<Complex> c = sv.u.comp[d].coeffs;
                    for (std::size_t i = 0; i < c.size(); ++i) c[i] += sw.u.comp[d].coeffs[i];
                    sum.push_back(std::move(c));
                }
                Snapshot s;
                s.t = sv.t;
                s.u = vector_from_coeffs(sv.u.grid, std::move(sum), true);
                csum.ingest(s);
            };
            auto [tv, tw] = run_coupled(u0, w0, spec.solver, observer);
            for (const auto& w : tv.warnings) manifest.warnings.push_back(w);
            manifest.escaped = tv.escaped;
            manifest.escape_time = tv.escape_time;

            DiagnosticSeries sv = cv.take(), sw = cw.take(), ss = csum.take();
            sv.escaped = sw.escaped = ss.escaped = tv.escaped || tw.escaped;
            write_series_csv(result.outdir / "series_v.csv", sv);
            write_series_csv(result.outdir / "series_w.csv", sw);
            write_series_csv(result.outdir / "series.csv", ss);
            manifest.files.push_back("series_v.csv");
            manifest.files.push_back("series_w.csv");
            manifest.files.push_back("series.csv");

            write_checkpoint(result.outdir / "checkpoint_final_v.nsap",
                             tv.snapshots.back().u, tv.snapshots.back().t);
            write_checkpoint(result.outdir / "checkpoint_final_w.nsap",
                             tw.snapshots.back().u, tw.snapshots.back().t);
            manifest.files.push_back("checkpoint_final_v.nsap");
            manifest.files.push_back("checkpoint_final_w.nsap");

            if (spec.write_reports) {
                ReportSink sink{result.outdir / "reports", &manifest};
                const InitialNorms init_w =
                    initial_norms(w0, static_cast<double>(sv.primary_p()));
                for (auto& r : run_checks(spec.checks, sv, &sw, manifest.initial, init_w, spec))
                    sink.emit(r);
            }
        } else {
            SeriesCollector collector(spec.monitor, spec.dim);
            long snapshot_count = 0;
            Trajectory traj = run(u0, spec.solver, collector.observer(), t_start);
            for (const auto& w : traj.warnings) manifest.warnings.push_back(w);
            manifest.escaped = traj.escaped;
            manifest.escape_time = traj.escape_time;

            DiagnosticSeries series = collector.take();
            series.escaped = traj.escaped;
            write_series_csv(result.outdir / "series.csv", series);
            manifest.files.push_back("series.csv");

            if (spec.checkpoint_stride > 0) {
                for (std::size_t i = 0; i < traj.snapshots.size();
                     i += static_cast<std::size_t>(spec.checkpoint_stride)) {
                    char name[48];
                    std::snprintf(name, sizeof name, "checkpoint_%06ld.nsap", snapshot_count++);
                    write_checkpoint(result.outdir / name, traj.snapshots[i].u,
                                     traj.snapshots[i].t);
                    manifest.files.push_back(name);
                }
            }
            write_checkpoint(result.outdir / "checkpoint_final.nsap", traj.snapshots.back().u,
                             traj.snapshots.back().t);
            manifest.files.push_back("checkpoint_final.nsap");

            if (spec.write_reports) {
                ReportSink sink{result.outdir / "reports", &manifest};
                for (auto& r : run_checks(spec.checks, series, nullptr, manifest.initial,
                                          InitialNorms{}, spec))
                    sink.emit(r);
            }
        }
        result.exit_code = manifest.escaped ? kExitEscaped : kExitOk;
    } catch (const NumericalError& e) {
        log << "numerical failure: " << e.what() << "\n";
        manifest.warnings.push_back(std::string("numerical failure: ") + e.what());
        result.exit_code = kExitNumerical;
    }

    manifest.exit_code = result.exit_code;
    manifest.finished_utc = utc_now();
    write_manifest(result.outdir / "manifest.json", manifest);
    if (manifest.escaped)
        log << "trajectory escaped at t = " << manifest.escape_time << "\n";
    return result;
}

ExecResult resume_run(const fs::path& dir, std::ostream& log) {
    const ScenarioSpec spec = load_config(dir / "config.ini");
    fs::path ckpt = dir / "checkpoint_final.nsap";
    if (!fs::exists(ckpt)) throw std::runtime_error("resume: no checkpoint_final.nsap in " +
                                                    dir.string());
    const Checkpoint ck = read_checkpoint(ckpt);
    if (ck.t >= spec.solver.t_end) {
        log << "run already reached t_end = " << spec.solver.t_end << "; nothing to do\n";
        ExecResult r;
        r.outdir = dir;
        r.manifest = read_manifest(dir / "manifest.json");
        r.exit_code = r.manifest.exit_code;
        return r;
    }
    // Continue into the same directory; keep the already-recorded rows and
    // merge the new ones behind them.
    DiagnosticSeries old_series = read_series_csv(dir / "series.csv");
    ExecResult res = execute_scenario(spec, log, dir, ckpt);
    DiagnosticSeries new_series = read_series_csv(dir / "series.csv");
    DiagnosticSeries merged = old_series;
    for (const auto& row : new_series.rows) {
        if (!merged.rows.empty() && row.t <= merged.rows.back().t + 1e-12) continue;
        merged.rows.push_back(row);
    }
    write_series_csv(dir / "series.csv", merged);
    return res;
}

InequalityReport regenerate_check(const fs::path& dir, const std::string& id, int p) {
    const auto& ids = known_check_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
        throw std::invalid_argument("unknown inequality id: " + id);

    const ScenarioSpec spec = load_config(dir / "config.ini");
    const RunManifest manifest = read_manifest(dir / "manifest.json");

    const bool pert = kPerturbationIds.count(id) > 0;
    DiagnosticSeries series =
        read_series_csv(dir / (pert ? "series_v.csv" : "series.csv"));
    series.dim = spec.dim;
    series.escaped = manifest.escaped;
    if (p > 0) {
        if (std::find(series.p_set.begin(), series.p_set.end(), p) == series.p_set.end())
            throw std::invalid_argument("series has no columns for p = " + std::to_string(p));
        // reorder so the requested p is primary
        std::vector<int> pset{p};
        for (const int q : series.p_set)
            if (q != p) pset.push_back(q);
        series.p_set = pset;
    }

    std::vector<InequalityReport> reports;
    if (pert) {
        DiagnosticSeries series_w = read_series_csv(dir / "series_w.csv");
        series_w.dim = spec.dim;
        series_w.escaped = manifest.escaped;
        series_w.p_set = series.p_set;
        const Checkpoint w0 = read_checkpoint(dir / "checkpoint_initial.nsap");
        // initial norms of w are reconstructed from the stored w series row 0
        InitialNorms init_w;
        if (!series_w.rows.empty()) {
            const auto& r0 = series_w.rows.front();
            init_w.l2 = r0.l2;
            init_w.l3 = r0.l3;
            init_w.lp = r0.at_p(series.primary_p()).lp;
            init_w.lsob = r0.at_p(series.primary_p()).lsob;
            init_w.linf = r0.linf;
            init_w.p = series.primary_p();
        }
        (void)w0;
        reports = run_checks({id}, series, &series_w, manifest.initial, init_w, spec);
    } else {
        reports = run_checks({id}, series, nullptr, manifest.initial, InitialNorms{}, spec);
    }
    for (const auto& r : reports) {
        if (r.id == id) {
            write_report(dir / "reports" / report_filename(r), r);
            return r;
        }
    }
    throw std::invalid_argument("check " + id + " produced no report for this run");
}

CompareResult compare_dirs(const fs::path& a, const fs::path& b) {
    CompareResult res;
    std::ifstream fa(a / "series.csv"), fb(b / "series.csv");
    if (!fa || !fb) throw std::runtime_error("compare: both directories need a series.csv");
    std::string ha, hb;
    std::getline(fa, ha);
    std::getline(fb, hb);
    if (ha != hb) throw std::runtime_error("compare: series schemas differ");

    std::vector<std::string> names;
    {
        std::string cur;
        for (const char c : ha) {
            if (c == ',') {
                names.push_back(cur);
                cur.clear();
            } else
                cur.push_back(c);
        }
        names.push_back(cur);
    }
    res.columns.resize(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) res.columns[i].column = names[i];

    std::string la, lb;
    while (std::getline(fa, la) && std::getline(fb, lb)) {
        if (la == lb) continue;
        std::istringstream sa(la), sb(lb);
        std::string ca, cb;
        std::size_t col = 0;
        while (std::getline(sa, ca, ',') && std::getline(sb, cb, ',')) {
            const double va = std::stod(ca), vb = std::stod(cb);
            const double ad = std::abs(va - vb);
            if (ad > 0) {
                res.identical = false;
                auto& d = res.columns[col];
                d.max_abs = std::max(d.max_abs, ad);
                const double scale = std::max(std::abs(va), std::abs(vb));
                if (scale > 0) d.max_rel = std::max(d.max_rel, ad / scale);
            }
            ++col;
        }
    }
    if (fa.peek() != EOF || fb.peek() != EOF) res.identical = false;

    const fs::path cka = a / "checkpoint_final.nsap", ckb = b / "checkpoint_final.nsap";
    if (fs::exists(cka) && fs::exists(ckb)) {
        const Checkpoint x = read_checkpoint(cka), y = read_checkpoint(ckb);
        if (x.u.grid->compatible(*y.u.grid)) {
            double acc = 0.0;
            for (std::size_t d = 0; d < x.u.comp.size(); ++d)
                for (std::size_t i = 0; i < x.u.comp[d].values.size(); ++i) {
                    const double diff = x.u.comp[d].values[i] - y.u.comp[d].values[i];
                    acc += diff * diff;
                }
            res.checkpoint_l2_distance = std::sqrt(acc * x.u.grid->cell_volume());
            if (res.checkpoint_l2_distance != 0.0) res.identical = false;
        }
    }
    return res;
}

ScalingReport scale_test_scenario(const ScenarioSpec& spec, int lambda) {
    GridPtr grid = make_grid(spec.dim, spec.n, spec.box_length);
    const VectorField u0 = make_initial(grid, spec.ic);
    const int p = spec.monitor.p_set.empty() ? 4 : spec.monitor.p_set.front();
    return scaling_test(u0, lambda, p);
}

SweepResult run_sweep(const ScenarioSpec& base, int count, double target_kappa,
                      std::ostream& log) {
    SweepResult result;
    result.p = base.monitor.p_set.empty() ? 4 : base.monitor.p_set.front();
    GridPtr grid = make_grid(base.dim, base.n, base.box_length);

    // Fix the family kappa from the first member when not supplied.
    std::vector<ScenarioSpec> members;
    for (int i = 0; i < count; ++i) {
        ScenarioSpec m = base;
        m.ic.seed = base.ic.seed + static_cast<std::uint64_t>(i);
        const VectorField probe = make_initial(grid, m.ic);
        const double k = kappa(probe, result.p, base.dim).value;
        if (i == 0 && !(target_kappa > 0.0)) target_kappa = k;
        m.ic.amplitude = base.ic.amplitude * target_kappa / k;
        members.push_back(std::move(m));
    }
    result.target_kappa = target_kappa;

    double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
    bool all_hold = true;
    for (int i = 0; i < count; ++i) {
        ScenarioSpec m = members[static_cast<std::size_t>(i)];
        if (std::find(m.checks.begin(), m.checks.end(), "2.3") == m.checks.end())
            m.checks.push_back("2.3");
        const fs::path dir = fs::path(base.output_dir) / ("member_" + std::to_string(i));
        log << "sweep member " << i << " (seed " << m.ic.seed << ") -> " << dir << "\n";
        ExecResult r = execute_scenario(m, log, dir);
        const InequalityReport rep = regenerate_check(dir, "2.3", result.p);
        SweepMember sm;
        sm.seed = m.ic.seed;
        sm.kappa_p = r.manifest.initial.kappa_p;
        sm.c_emp = rep.c_emp;
        sm.verdict = to_string(rep.verdict);
        sm.dir = dir.string();
        result.members.push_back(sm);
        all_hold = all_hold && rep.verdict == Verdict::holds_with_c;
        cmin = std::min(cmin, rep.c_emp);
        cmax = std::max(cmax, rep.c_emp);
    }
    // all-zero constants (dissipation-dominated members) agree trivially
    if (cmax == 0.0)
        result.spread = 1.0;
    else
        result.spread = cmin > 0.0 ? cmax / cmin : std::numeric_limits<double>::infinity();
    result.all_hold = all_hold;

    nlohmann::json j;
    j["target_kappa"] = result.target_kappa;
    j["p"] = result.p;
    j["spread_max_over_min"] = result.spread;
    j["all_hold"] = result.all_hold;
    j["members"] = nlohmann::json::array();
    for (const auto& m : result.members)
        j["members"].push_back({{"seed", m.seed},
                                {"kappa_p", m.kappa_p},
                                {"c_emp", m.c_emp},
                                {"verdict", m.verdict},
                                {"dir", m.dir}});
    fs::create_directories(base.output_dir);
    std::ofstream os(fs::path(base.output_dir) / "family_summary.json");
    os << j.dump(2) << "\n";
    return result;
}

}  // namespace nsap
