#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <unistd.h>

#include "nsap/initial_conditions.hpp"
#include "nsap/report_io.hpp"
#include "nsap/series.hpp"

using namespace nsap;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("nsap_series_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

DiagnosticSeries tiny_series() {
    auto g = make_grid(3, 16, 2.0 * M_PI);
    IcParams ic;
    ic.kind = IcKind::random_solenoidal;
    ic.amplitude = 0.2;
    ic.seed = 8;
    VectorField u0 = make_initial(g, ic);
    SolverConfig scfg;
    scfg.dt = 2e-3;
    scfg.t_end = 0.01;
    MonitorConfig mcfg;
    mcfg.p_set = {4, 6};
    SeriesCollector c(mcfg, 3);
    run(u0, scfg, c.observer());
    DiagnosticSeries s = c.take();
    s.dim = 3;
    return s;
}

}  // namespace

TEST_CASE("series CSV header follows the documented schema") {
    DiagnosticSeries s = tiny_series();
    const std::string header = series_header(s);
    CHECK(header.rfind("t,l2,l3,lp,l3p,linf,D_4,D_6,grad_l2,tail_mass,l6,l9", 0) == 0);
}

TEST_CASE("series CSV round trip preserves every value") {
    TempDir tmp;
    DiagnosticSeries s = tiny_series();
    const auto file = tmp.path / "series.csv";
    write_series_csv(file, s);
    DiagnosticSeries back = read_series_csv(file);
    REQUIRE(back.rows.size() == s.rows.size());
    REQUIRE(back.p_set == s.p_set);
    CHECK(back.has_balance == s.has_balance);
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        CHECK(back.rows[i].t == s.rows[i].t);
        CHECK(back.rows[i].l2 == s.rows[i].l2);
        CHECK(back.rows[i].l9 == s.rows[i].l9);
        CHECK(back.rows[i].grad_l2_sq == s.rows[i].grad_l2_sq);
        for (int p : s.p_set) {
            CHECK(back.rows[i].at_p(p).lp == s.rows[i].at_p(p).lp);
            CHECK(back.rows[i].at_p(p).ibp_lhs == s.rows[i].at_p(p).ibp_lhs);
            CHECK(back.rows[i].at_p(p).rhs_dot == s.rows[i].at_p(p).rhs_dot);
        }
    }
    // rewriting the parsed series is byte-identical
    const auto file2 = tmp.path / "series2.csv";
    write_series_csv(file2, back);
    std::ifstream a(file), b(file2);
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
}

TEST_CASE("inequality report JSON round trip") {
    InequalityReport r;
    r.id = "2.3";
    r.description = "test";
    r.dim = 3;
    r.p = 4;
    r.t = {0.0, 0.5};
    r.lhs = {1.0, 0.25};
    r.rhs = {2.0, 1.0};
    r.c_emp = 0.5;
    r.tolerance = 1e-8;
    r.verdict = Verdict::holds_with_c;
    r.aux["alpha"] = 12.0;
    r.notes.push_back("torus caveat");

    const std::string text = report_to_json(r);
    InequalityReport back = report_from_json(text);
    CHECK(back.id == r.id);
    CHECK(back.p == r.p);
    CHECK(back.lhs == r.lhs);
    CHECK(back.rhs == r.rhs);
    CHECK(back.c_emp == r.c_emp);
    CHECK(back.verdict == r.verdict);
    CHECK(back.aux.at("alpha") == 12.0);
    CHECK(back.notes == r.notes);
    // a report is re-checkable from its stored series alone
    double sup = 0.0;
    for (std::size_t i = 0; i < back.lhs.size(); ++i)
        if (back.rhs[i] > 0) sup = std::max(sup, back.lhs[i] / back.rhs[i]);
    CHECK(sup <= back.c_emp * (1.0 + 1e-12));
    CHECK(report_filename(r) == "ineq_2.3_p4.json");
}
