#include "nsap/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nsap {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config: bad boolean value '" + v + "'");
}

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

SectionMap parse_sections(const std::string& text) {
    SectionMap sections;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: malformed section at line " +
                                            std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(lineno));
        if (section.empty())
            throw std::invalid_argument("config: key outside any section at line " +
                                        std::to_string(lineno));
        sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return sections;
}

class SectionReader {
  public:
    SectionReader(const SectionMap& m, const std::string& name) {
        auto it = m.find(name);
        if (it != m.end()) kv_ = &it->second;
    }
    bool present() const { return kv_ != nullptr; }
    std::string str(const std::string& key, const std::string& dflt) const {
        if (!kv_) return dflt;
        auto it = kv_->find(key);
        return it == kv_->end() ? dflt : it->second;
    }
    double num(const std::string& key, double dflt) const {
        if (!kv_) return dflt;
        auto it = kv_->find(key);
        return it == kv_->end() ? dflt : std::stod(it->second);
    }
    int integer(const std::string& key, int dflt) const {
        if (!kv_) return dflt;
        auto it = kv_->find(key);
        return it == kv_->end() ? dflt : std::stoi(it->second);
    }
    std::uint64_t u64(const std::string& key, std::uint64_t dflt) const {
        if (!kv_) return dflt;
        auto it = kv_->find(key);
        return it == kv_->end() ? dflt : std::stoull(it->second);
    }
    bool boolean(const std::string& key, bool dflt) const {
        if (!kv_) return dflt;
        auto it = kv_->find(key);
        return it == kv_->end() ? dflt : parse_bool(it->second);
    }

  private:
    const std::map<std::string, std::string>* kv_ = nullptr;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : s) {
        if (c == ',') {
            const auto t = trim(cur);
            if (!t.empty()) out.push_back(t);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    const auto t = trim(cur);
    if (!t.empty()) out.push_back(t);
    return out;
}

IcParams read_ic(const SectionReader& r, const IcParams& dflt) {
    IcParams ic = dflt;
    ic.kind = ic_kind_from_string(r.str("kind", to_string(dflt.kind)));
    ic.amplitude = r.num("amplitude", dflt.amplitude);
    ic.peak_k = r.num("peak_k", dflt.peak_k);
    ic.seed = r.u64("seed", dflt.seed);
    ic.bump_radius_frac = r.num("bump_radius_frac", dflt.bump_radius_frac);
    ic.critical_p = r.num("critical_p", dflt.critical_p);
    ic.checkpoint_path = r.str("checkpoint", dflt.checkpoint_path);
    return ic;
}

}  // namespace

ScenarioSpec parse_config(const std::string& text) {
    const SectionMap sections = parse_sections(text);
    for (const auto& [name, kv] : sections) {
        (void)kv;
        if (name != "grid" && name != "ic" && name != "solver" && name != "monitor" &&
            name != "perturbation" && name != "output")
            throw std::invalid_argument("config: unknown section [" + name + "]");
    }
    ScenarioSpec spec;

    const SectionReader grid(sections, "grid");
    spec.dim = grid.integer("dim", spec.dim);
    spec.n = grid.integer("n", spec.n);
    spec.box_length = grid.num("box_length", spec.box_length);

    spec.ic = read_ic(SectionReader(sections, "ic"), spec.ic);

    const SectionReader solver(sections, "solver");
    spec.solver.viscosity = solver.num("viscosity", spec.solver.viscosity);
    spec.solver.dt = solver.num("dt", spec.solver.dt);
    spec.solver.t_end = solver.num("t_end", spec.solver.t_end);
    spec.solver.snapshot_interval = solver.num("snapshot_interval", spec.solver.snapshot_interval);
    spec.solver.nonlinear_form =
        nonlinear_form_from_string(solver.str("nonlinear_form", to_string(spec.solver.nonlinear_form)));
    spec.solver.dealias = solver.boolean("dealias", spec.solver.dealias);
    spec.solver.stokes_only = solver.boolean("stokes_only", spec.solver.stokes_only);
    spec.solver.cfl_safety = solver.num("cfl_safety", spec.solver.cfl_safety);
    spec.solver.blowup_ceiling_factor =
        solver.num("blowup_ceiling_factor", spec.solver.blowup_ceiling_factor);
    spec.solver.blowup_norm_p = solver.num("blowup_norm_p", spec.solver.blowup_norm_p);

    const SectionReader monitor(sections, "monitor");
    {
        const auto ps = split_list(monitor.str("p_set", "4,6,9"));
        spec.monitor.p_set.clear();
        for (const auto& p : ps) spec.monitor.p_set.push_back(std::stoi(p));
        if (spec.monitor.p_set.empty())
            throw std::invalid_argument("config: monitor p_set must be non-empty");
    }
    spec.monitor.diag_stride = monitor.integer("diag_stride", spec.monitor.diag_stride);
    spec.monitor.balance_terms = monitor.boolean("balance_terms", spec.monitor.balance_terms);
    spec.monitor.tail_fraction = monitor.num("tail_fraction", spec.monitor.tail_fraction);
    spec.checks = split_list(monitor.str("checks", "1.2,2.1,2.2,2.3,monotone"));
    spec.monitor.viscosity = spec.solver.viscosity;
    spec.monitor.form = spec.solver.nonlinear_form;
    spec.monitor.dealias = spec.solver.dealias;
    spec.monitor.stokes_only = spec.solver.stokes_only;

    const SectionReader pert(sections, "perturbation");
    spec.perturbation_enabled = pert.boolean("enabled", false);
    if (spec.perturbation_enabled) {
        IcParams wd;
        wd.kind = IcKind::random_solenoidal;
        wd.amplitude = 1e-3;
        wd.seed = spec.ic.seed + 1000;
        wd.peak_k = spec.ic.peak_k;
        spec.w_ic = read_ic(pert, wd);
    }

    const SectionReader output(sections, "output");
    spec.output_dir = output.str("directory", spec.output_dir);
    spec.checkpoint_stride = output.integer("checkpoint_stride", spec.checkpoint_stride);
    spec.write_reports = output.boolean("write_reports", spec.write_reports);

    if (spec.dim != 2 && spec.dim != 3)
        throw std::invalid_argument("config: grid dim must be 2 or 3");
    if (!(spec.ic.amplitude > 0.0))
        throw std::invalid_argument("config: ic amplitude must be > 0");
    return spec;
}

ScenarioSpec load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

std::string serialize_config(const ScenarioSpec& spec) {
    std::ostringstream os;
    os << "[grid]\n";
    os << "dim = " << spec.dim << "\n";
    os << "n = " << spec.n << "\n";
    os << "box_length = " << fmt(spec.box_length) << "\n\n";

    auto emit_ic = [&os](const IcParams& ic) {
        os << "kind = " << to_string(ic.kind) << "\n";
        os << "amplitude = " << fmt(ic.amplitude) << "\n";
        os << "peak_k = " << fmt(ic.peak_k) << "\n";
        os << "seed = " << ic.seed << "\n";
        os << "bump_radius_frac = " << fmt(ic.bump_radius_frac) << "\n";
        os << "critical_p = " << fmt(ic.critical_p) << "\n";
        if (!ic.checkpoint_path.empty()) os << "checkpoint = " << ic.checkpoint_path << "\n";
    };
    os << "[ic]\n";
    emit_ic(spec.ic);
    os << "\n[solver]\n";
    os << "viscosity = " << fmt(spec.solver.viscosity) << "\n";
    os << "dt = " << fmt(spec.solver.dt) << "\n";
    os << "t_end = " << fmt(spec.solver.t_end) << "\n";
    os << "snapshot_interval = " << fmt(spec.solver.snapshot_interval) << "\n";
    os << "nonlinear_form = " << to_string(spec.solver.nonlinear_form) << "\n";
    os << "dealias = " << (spec.solver.dealias ? "true" : "false") << "\n";
    os << "stokes_only = " << (spec.solver.stokes_only ? "true" : "false") << "\n";
    os << "cfl_safety = " << fmt(spec.solver.cfl_safety) << "\n";
    os << "blowup_ceiling_factor = " << fmt(spec.solver.blowup_ceiling_factor) << "\n";
    os << "blowup_norm_p = " << fmt(spec.solver.blowup_norm_p) << "\n";
    os << "\n[monitor]\n";
    os << "p_set = ";
    for (std::size_t i = 0; i < spec.monitor.p_set.size(); ++i)
        os << (i ? "," : "") << spec.monitor.p_set[i];
    os << "\n";
    os << "diag_stride = " << spec.monitor.diag_stride << "\n";
    os << "balance_terms = " << (spec.monitor.balance_terms ? "true" : "false") << "\n";
    os << "tail_fraction = " << fmt(spec.monitor.tail_fraction) << "\n";
    os << "checks = ";
    for (std::size_t i = 0; i < spec.checks.size(); ++i) os << (i ? "," : "") << spec.checks[i];
    os << "\n";
    if (spec.perturbation_enabled) {
        os << "\n[perturbation]\n";
        os << "enabled = true\n";
        emit_ic(spec.w_ic);
    }
    os << "\n[output]\n";
    os << "directory = " << spec.output_dir << "\n";
    os << "checkpoint_stride = " << spec.checkpoint_stride << "\n";
    os << "write_reports = " << (spec.write_reports ? "true" : "false") << "\n";
    return os.str();
}

std::uint64_t scenario_hash(const ScenarioSpec& spec) {
    const std::string text = serialize_config(spec);
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string code_version() {
#ifdef NSAP_VERSION
    return NSAP_VERSION;
#else
    return "unknown";
#endif
}

std::string manifest_to_json(const RunManifest& m) {
    json j;
    j["scenario_hash"] = m.scenario_hash;
    j["code_version"] = m.code_version;
    j["started_utc"] = m.started_utc;
    j["finished_utc"] = m.finished_utc;
    j["seed"] = m.seed;
    j["escaped"] = m.escaped;
    j["escape_time"] = m.escape_time;
    j["exit_code"] = m.exit_code;
    j["initial"] = {{"l2", m.initial.l2},     {"l3", m.initial.l3},
                    {"lp", m.initial.lp},     {"lsob", m.initial.lsob},
                    {"linf", m.initial.linf}, {"kappa_p", m.initial.kappa_p},
                    {"p", m.initial.p}};
    j["verdicts"] = m.verdicts;
    j["warnings"] = m.warnings;
    j["files"] = m.files;
    return j.dump(2);
}

RunManifest manifest_from_json(const std::string& text) {
    const json j = json::parse(text);
    RunManifest m;
    m.scenario_hash = j.at("scenario_hash").get<std::string>();
    m.code_version = j.at("code_version").get<std::string>();
    m.started_utc = j.at("started_utc").get<std::string>();
    m.finished_utc = j.at("finished_utc").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.escaped = j.at("escaped").get<bool>();
    m.escape_time = j.at("escape_time").get<double>();
    m.exit_code = j.at("exit_code").get<int>();
    const auto& init = j.at("initial");
    m.initial.l2 = init.at("l2").get<double>();
    m.initial.l3 = init.at("l3").get<double>();
    m.initial.lp = init.at("lp").get<double>();
    m.initial.lsob = init.at("lsob").get<double>();
    m.initial.linf = init.at("linf").get<double>();
    m.initial.kappa_p = init.at("kappa_p").get<double>();
    m.initial.p = init.at("p").get<double>();
    m.verdicts = j.at("verdicts").get<std::map<std::string, std::string>>();
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    m.files = j.at("files").get<std::vector<std::string>>();
    return m;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("manifest: cannot open " + path.string() + " for write");
    os << manifest_to_json(m) << "\n";
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("manifest: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return manifest_from_json(text);
}

}  // namespace nsap
