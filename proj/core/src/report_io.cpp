#include "nsap/report_io.hpp"

#include <fstream>

#include <json.hpp>

namespace nsap {

namespace {

using nlohmann::json;

Verdict verdict_from_string(const std::string& s) {
    if (s == "holds-with-C") return Verdict::holds_with_c;
    if (s == "violated-beyond-tolerance") return Verdict::violated;
    return Verdict::inconclusive;
}

}  // namespace

std::string report_to_json(const InequalityReport& r) {
    json j;
    j["id"] = r.id;
    j["description"] = r.description;
    j["dim"] = r.dim;
    j["p"] = r.p;
    j["t"] = r.t;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["c_emp"] = r.c_emp;
    j["tolerance"] = r.tolerance;
    j["verdict"] = to_string(r.verdict);
    j["aux"] = r.aux;
    j["notes"] = r.notes;
    return j.dump(2);
}

InequalityReport report_from_json(const std::string& text) {
    const json j = json::parse(text);
    InequalityReport r;
    r.id = j.at("id").get<std::string>();
    r.description = j.at("description").get<std::string>();
    r.dim = j.at("dim").get<int>();
    r.p = j.at("p").get<double>();
    r.t = j.at("t").get<std::vector<double>>();
    r.lhs = j.at("lhs").get<std::vector<double>>();
    r.rhs = j.at("rhs").get<std::vector<double>>();
    r.c_emp = j.at("c_emp").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.aux = j.at("aux").get<std::map<std::string, double>>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

void write_report(const std::filesystem::path& path, const InequalityReport& report) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("report: cannot open " + path.string() + " for write");
    os << report_to_json(report) << "\n";
    if (!os) throw std::runtime_error("report: write failed for " + path.string());
}

InequalityReport read_report(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("report: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return report_from_json(text);
}

std::string report_filename(const InequalityReport& report) {
    std::string id = report.id;
    for (auto& c : id)
        if (c == '/' || c == ' ') c = '_';
    if (report.p > 0)
        return "ineq_" + id + "_p" + std::to_string(static_cast<int>(report.p)) + ".json";
    return "ineq_" + id + ".json";
}

}  // namespace nsap
