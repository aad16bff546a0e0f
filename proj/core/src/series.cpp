#include "nsap/series.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nsap {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string series_header(const DiagnosticSeries& series) {
    std::ostringstream os;
    os << "t,l2,l3,lp,l3p,linf";
    for (const int p : series.p_set) os << ",D_" << p;
    os << ",grad_l2,tail_mass,l6,l9,spec_tail";
    for (const int p : series.p_set) {
        os << ",lp_" << p << ",l3p_" << p << ",ibp_lhs_" << p << ",ibp_cross_" << p;
        if (series.has_balance) os << ",rhs_dot_" << p;
    }
    return os.str();
}

void write_series_csv(const std::filesystem::path& path, const DiagnosticSeries& series) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("series: cannot open " + path.string() + " for write");
    os << series_header(series) << "\n";
    for (const auto& r : series.rows) {
        const int pp = series.primary_p();
        const auto& prim = r.at_p(pp);
        os << fmt(r.t) << ',' << fmt(r.l2) << ',' << fmt(r.l3) << ',' << fmt(prim.lp) << ','
           << fmt(prim.lsob) << ',' << fmt(r.linf);
        for (const int p : series.p_set) os << ',' << fmt(r.at_p(p).dp);
        os << ',' << fmt(r.grad_l2_sq) << ',' << fmt(r.tail_mass) << ',' << fmt(r.l6) << ','
           << fmt(r.l9) << ',' << fmt(r.spectral_tail);
        for (const int p : series.p_set) {
            const auto& d = r.at_p(p);
            os << ',' << fmt(d.lp) << ',' << fmt(d.lsob) << ',' << fmt(d.ibp_lhs) << ','
               << fmt(d.ibp_cross);
            if (series.has_balance) os << ',' << fmt(d.rhs_dot);
        }
        os << "\n";
    }
    if (!os) throw std::runtime_error("series: write failed for " + path.string());
}

DiagnosticSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("series: cannot open " + path.string());
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("series: empty file " + path.string());
    const auto names = split(header, ',');

    DiagnosticSeries series;
    for (const auto& n : names)
        if (n.rfind("D_", 0) == 0) series.p_set.push_back(std::stoi(n.substr(2)));
    if (series.p_set.empty())
        throw std::runtime_error("series: header has no D_<p> columns: " + header);
    series.has_balance = header.find("rhs_dot_") != std::string::npos;

    auto index_of = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        return -1;
    };

    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != names.size())
            throw std::runtime_error("series: ragged row in " + path.string());
        auto val = [&](int idx) { return std::stod(cells[static_cast<std::size_t>(idx)]); };
        DiagnosticRecord r;
        r.t = val(index_of("t"));
        r.l2 = val(index_of("l2"));
        r.l3 = val(index_of("l3"));
        r.l6 = val(index_of("l6"));
        r.l9 = val(index_of("l9"));
        r.linf = val(index_of("linf"));
        r.grad_l2_sq = val(index_of("grad_l2"));
        r.tail_mass = val(index_of("tail_mass"));
        r.spectral_tail = val(index_of("spec_tail"));
        for (const int p : series.p_set) {
            PerPDiagnostics d;
            d.p = p;
            d.lp = val(index_of("lp_" + std::to_string(p)));
            d.lsob = val(index_of("l3p_" + std::to_string(p)));
            d.dp = val(index_of("D_" + std::to_string(p)));
            d.ibp_lhs = val(index_of("ibp_lhs_" + std::to_string(p)));
            d.ibp_cross = val(index_of("ibp_cross_" + std::to_string(p)));
            if (series.has_balance) d.rhs_dot = val(index_of("rhs_dot_" + std::to_string(p)));
            r.per_p.push_back(d);
        }
        series.rows.push_back(std::move(r));
    }
    return series;
}

}  // namespace nsap
