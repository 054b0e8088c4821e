// maxlab command-line front end: evolve, fit, peel, identities, resolvent, report.
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "maxlab/maxlab.hpp"

namespace fs = std::filesystem;
using namespace maxlab;

namespace {

constexpr int exit_schema = 2;
constexpr int exit_numeric = 3;

std::string timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

fs::path output_root(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("MAXLAB_OUTPUT_ROOT")) return env;
    return "maxlab_out";
}

void write_json(const fs::path& p, json j) {
    j["timestamp"] = timestamp();
    std::ofstream out(p);
    out << j.dump(2) << "\n";
    if (!out) throw Error(ErrorKind::input, "cannot write " + p.string());
}

class CsvWriter {
public:
    CsvWriter(const fs::path& p, const std::vector<std::string>& header) : out_(p) {
        if (!out_) throw Error(ErrorKind::input, "cannot write " + p.string());
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }
    void row(const std::vector<double>& v) {
        char buf[40];
        for (std::size_t i = 0; i < v.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", v[i]);
            out_ << (i ? "," : "") << buf;
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> cols;

    const std::vector<double>& col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return cols[i];
        throw Error(ErrorKind::config, "CSV has no column '" + name + "'");
    }
};

CsvTable read_csv(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorKind::config, "cannot open " + p.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::config, p.string() + " is empty");
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
    t.cols.resize(t.header.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::size_t i = 0;
        for (std::string cell; std::getline(ls, cell, ','); ++i) {
            if (i >= t.cols.size()) throw Error(ErrorKind::config, "ragged row in " + p.string());
            t.cols[i].push_back(std::stod(cell));
        }
    }
    return t;
}

std::vector<Parity> parities_of(ParityOutput p) {
    if (p == ParityOutput::both) return {Parity::odd, Parity::even};
    return {p == ParityOutput::even ? Parity::even : Parity::odd};
}

std::string label_string(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// ---------------------------------------------------------------------------

int cmd_evolve(const std::string& config_path, const fs::path& dir) {
    RunConfig rc = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    rc.command = "evolve";
    fs::create_directories(dir);
    const Trajectory tr = evolve(rc.evolution);
    const EvolutionConfig& c = rc.evolution;
    const std::vector<Parity> pars = parities_of(c.parity);
    const bool tag = pars.size() > 1;

    json summary;
    summary["kind"] = "evolve";
    summary["config"] = to_json(rc);
    summary["grid"] = {{"n", tr.grid.n}, {"dr", tr.grid.dr}, {"dt", tr.grid.dt}, {"steps", tr.steps}};
    summary["peak_abs_psi"] = tr.peak_abs_psi;
    json probes = json::array(), ulines = json::array(), vlines = json::array();
    for (Parity par : pars) {
        const std::string suffix = tag ? std::string("_") + to_string(par) : "";
        for (std::size_t k = 0; k < tr.probes.size(); ++k) {
            const ProbeComponents pc = probe_components(tr, k, par);
            const std::string name = "probe_rstar" + label_string(tr.probes[k].rstar) + suffix + ".csv";
            CsvWriter w(dir / name, {"t", "psi", "F_uv", "F_AB", "F_uA", "F_vA"});
            for (std::size_t i = 0; i < pc.t.size(); ++i) w.row({pc.t[i], pc.psi[i], pc.uv[i], pc.AB[i], pc.uA[i], pc.vA[i]});
            probes.push_back({{"rstar", tr.probes[k].rstar}, {"r", tr.probes[k].r}, {"parity", to_string(par)}, {"file", name}});
        }
        const ExtremeReconstruction rec =
            reconstruct_extremes(tr, c.metric, ModeIndex{c.l, 0, par}, par == Parity::odd ? ParityOutput::odd : ParityOutput::even);
        auto dump = [&](const std::vector<ExtremeSeries>& lines, const char* kind, json& index) {
            for (const auto& s : lines) {
                const std::string name = std::string(kind) + "line_" + label_string(s.label) + suffix + ".csv";
                CsvWriter w(dir / name, {"t", kind[0] == 'u' ? "v" : "u", "r", "rstar", "F_uv", "F_AB", "F_uA", "F_vA"});
                for (std::size_t i = 0; i < s.t.size(); ++i) {
                    const double other = kind[0] == 'u' ? s.t[i] + s.rstar[i] : s.t[i] - s.rstar[i];
                    w.row({s.t[i], other, s.r[i], s.rstar[i], s.F_uv[i], s.F_AB[i], s.F_uA[i], s.F_vA[i]});
                }
                index.push_back({{"label", s.label}, {"parity", to_string(par)}, {"file", name}, {"samples", s.t.size()}});
            }
        };
        dump(rec.u_lines, "u", ulines);
        dump(rec.v_lines, "v", vlines);
    }
    summary["probes"] = probes;
    summary["u_lines"] = ulines;
    summary["v_lines"] = vlines;
    std::ofstream(dir / "resolved_config.json") << to_json(rc).dump(2) << "\n";
    write_json(dir / "summary.json", summary);
    std::cout << "evolve: " << tr.steps << " steps, outputs in " << dir.string() << "\n";
    return 0;
}

int cmd_fit(const std::string& input, const std::string& column, const WindowPolicy& pol, std::optional<double> target,
            double tol, const fs::path& dir) {
    const CsvTable t = read_csv(input);
    const auto& tt = t.col("t");
    fs::create_directories(dir);
    json j;
    j["kind"] = "fit";
    j["input"] = fs::path(input).filename().string();
    j["window"] = {{"decades", pol.decades}, {"drift_tolerance", pol.drift_tolerance}};
    std::vector<std::string> cols;
    if (column == "all") {
        for (const auto& h : t.header)
            if (h != "t") cols.push_back(h);
    } else {
        cols.push_back(column);
    }
    CsvWriter w(dir / "fit.csv", {"column", "exponent", "stderr", "t1", "t2", "drift", "stable"});
    json rows = json::array();
    bool all_pass = true;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        json row{{"column", cols[k]}};
        try {
            const DecayFit f = fit_exponent(tt, t.col(cols[k]), pol);
            row.update(fit_json(f));
            w.row({double(k), f.exponent, f.stderr_, f.t1, f.t2, f.drift, f.stable ? 1.0 : 0.0});
            if (target) {
                row["target"] = *target;
                row["pass"] = std::abs(f.exponent - *target) <= tol && f.stable;
                all_pass = all_pass && row["pass"].get<bool>();
            }
            std::printf("%-6s p = %.4f +- %.4f  window [%.4g, %.4g]  drift %.4f%s\n", cols[k].c_str(), f.exponent, f.stderr_,
                        f.t1, f.t2, f.drift, f.stable ? "" : "  (unstable)");
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::tail_not_reached) throw;
            row["error"] = e.what();
            all_pass = false;
            std::printf("%-6s %s\n", cols[k].c_str(), e.what());
        }
        rows.push_back(row);
    }
    j["fits"] = rows;
    if (target) {
        j["target"] = *target;
        j["tolerance"] = tol;
        j["pass"] = all_pass;
    }
    write_json(dir / "fit.json", j);
    return 0;
}

ExtremeReconstruction load_lines(const fs::path& run, Parity parity) {
    std::ifstream in(run / "summary.json");
    if (!in) throw Error(ErrorKind::config, "no summary.json in " + run.string());
    const json s = json::parse(in);
    ExtremeReconstruction rec;
    auto load = [&](const char* key, LineKind kind, std::vector<ExtremeSeries>& out) {
        for (const auto& e : s.at(key)) {
            if (e.at("parity").get<std::string>() != to_string(parity)) continue;
            const CsvTable t = read_csv(run / e.at("file").get<std::string>());
            ExtremeSeries x;
            x.kind = kind;
            x.label = e.at("label").get<double>();
            x.t = t.col("t");
            x.r = t.col("r");
            x.rstar = t.col("rstar");
            x.F_uv = t.col("F_uv");
            x.F_AB = t.col("F_AB");
            x.F_uA = t.col("F_uA");
            x.F_vA = t.col("F_vA");
            out.push_back(std::move(x));
        }
    };
    load("u_lines", LineKind::u, rec.u_lines);
    load("v_lines", LineKind::v, rec.v_lines);
    return rec;
}

int cmd_peel(const std::string& run, const std::string& parity, const PeelingOptions& o, const fs::path& dir) {
    const Parity par = parity == "even" ? Parity::even : Parity::odd;
    const PeelingTable tab = peeling_scan(load_lines(run, par), o);
    fs::create_directories(dir);
    CsvWriter w(dir / "peel.csv", {"index", "slope", "stderr", "target", "samples", "present", "pass"});
    json rows = json::array();
    bool ok = true;
    std::printf("%-10s %9s %9s %7s\n", "component", "slope", "stderr", "target");
    std::vector<ComponentSlope> all = tab.r_slopes;
    all.push_back(tab.u_slope);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto& c = all[i];
        rows.push_back(slope_json(c));
        w.row({double(i), c.slope, c.stderr_, c.target, double(c.samples), c.present ? 1.0 : 0.0, c.pass ? 1.0 : 0.0});
        if (c.present) {
            ok = ok && c.pass;
            std::printf("%-10s %9.4f %9.4f %7.1f %s\n", c.name.c_str(), c.slope, c.stderr_, c.target, c.pass ? "pass" : "FAIL");
        } else {
            std::printf("%-10s %9s\n", c.name.c_str(), "absent");
        }
    }
    json j{{"kind", "peel"}, {"parity", to_string(par)}, {"u0", o.u0}, {"r_range", {o.r_lo, o.r_hi}},
           {"r_radiation", o.r_radiation}, {"slopes", rows}, {"u", tab.u_values}, {"r_F_uA", tab.radiation}, {"pass", ok}};
    write_json(dir / "peel.json", j);
    return 0;
}

int cmd_identities(const fs::path& dir) {
    const IdentityReport rep = run_identity_suite();
    fs::create_directories(dir);
    json arr = json::array();
    for (const auto& c : rep.checks) {
        arr.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance},
                       {"order", std::isfinite(c.order) ? json(c.order) : json(nullptr)}, {"negative_control", c.expect_fail},
                       {"pass", c.pass}, {"note", c.note}});
        std::printf("%-40s %-4s residual %.3e tol %.1e\n", c.name.c_str(), c.pass ? "pass" : "FAIL", c.residual, c.tolerance);
    }
    write_json(dir / "identities.json", {{"kind", "identities"}, {"checks", arr}, {"pass", rep.all_pass()}});
    return rep.all_pass() ? 0 : exit_numeric;
}

int cmd_resolvent(const CampaignOptions& o, const fs::path& dir) {
    const CampaignResult r = resolvent_campaign(o);
    fs::create_directories(dir);
    json j = Playbook::campaign_json(r);
    j["kind"] = "resolvent";
    j["options"] = {{"seeds", o.seeds}, {"base_seed", o.base_seed}, {"support", {o.support_lo, o.support_hi}},
                    {"l_range", {o.l_min, o.l_max}}};
    write_json(dir / "resolvent.json", j);
    std::printf("seeds %d: residual %.2e, radial %.2e, ratio max %.4f spread %.3f, annuli %s -> %s\n", o.seeds,
                r.max_residual, r.max_radial_residual, r.max_ratio1, r.spread1, r.annuli_finite ? "finite" : "not finite",
                r.pass ? "pass" : "FAIL");
    return r.pass ? 0 : exit_numeric;
}

// Aggregate prior fit/peel artifacts under the output root into a measured-vs-target table.
int cmd_report(bool reproduce, const fs::path& root) {
    fs::create_directories(root);
    json j{{"kind", "report"}};
    std::ostringstream table;
    if (reproduce) {
        Playbook pb;
        pb.on_progress([](const std::string& s) { std::cerr << "  .. " << s << "\n"; });
        json arr = json::array();
        for (const auto& c : pb.run_all([](const CriterionLine& c) { std::cout << criterion_text(c) << std::endl; })) {
            json cj = criterion_json(c);
            cj.erase("seconds");
            arr.push_back(cj);
            table << criterion_text(c) << "\n";
        }
        j["criteria"] = arr;
        json info = json::array();
        for (const auto& l : pb.informational()) {
            info.push_back({{"name", l.name}, {"value", l.text}});
            table << "  info: " << l.name << ": " << l.text << "\n";
            std::cout << "  info: " << l.name << ": " << l.text << std::endl;
        }
        j["informational"] = info;
    }
    json found = json::array();
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file() && (e.path().filename() == "fit.json" || e.path().filename() == "peel.json"))
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        std::ifstream in(p);
        json a = json::parse(in);
        a.erase("timestamp");
        a["source"] = fs::relative(p, root).string();
        found.push_back(a);
        if (a["kind"] == "fit")
            for (const auto& f : a["fits"])
                if (f.contains("exponent"))
                    table << "fit  " << a["source"].get<std::string>() << " " << f["column"].get<std::string>()
                          << ": p = " << f["exponent"].get<double>()
                          << (f.contains("target") ? " target " + std::to_string(f["target"].get<double>()) : "") << "\n";
        if (a["kind"] == "peel")
            for (const auto& s : a["slopes"])
                if (s["present"].get<bool>())
                    table << "peel " << a["source"].get<std::string>() << " " << s["component"].get<std::string>()
                          << ": slope " << s["slope"].get<double>() << " target " << s["target"].get<double>() << "\n";
    }
    j["artifacts"] = found;
    write_json(root / "report.json", j);
    std::ofstream(root / "report.txt") << table.str();
    if (!reproduce) std::cout << table.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maxlab: Maxwell decay experiments on Schwarzschild and perturbed backgrounds"};
    app.fallthrough();
    app.require_subcommand(1);
    std::string out_flag;
    app.add_option("-o,--out", out_flag, "output directory (default $MAXLAB_OUTPUT_ROOT or ./maxlab_out)");

    auto* evolve_cmd = app.add_subcommand("evolve", "run a mode evolution from a JSON config");
    std::string config_path;
    evolve_cmd->add_option("-c,--config", config_path, "JSON run config (defaults: Schwarzschild l = 1)");

    auto* fit_cmd = app.add_subcommand("fit", "power-law tail fit of a probe CSV");
    std::string fit_input, fit_column = "psi";
    WindowPolicy pol;
    std::optional<double> fit_target;
    double fit_tol = 0.15;
    fit_cmd->add_option("input", fit_input, "probe CSV")->required();
    fit_cmd->add_option("--column", fit_column, "column to fit, or 'all'");
    fit_cmd->add_option("--decades", pol.decades, "window length in decades");
    fit_cmd->add_option("--drift", pol.drift_tolerance, "allowed relative slope drift across the window");
    fit_cmd->add_option("--target", fit_target, "target exponent for the pass flag");
    fit_cmd->add_option("--tol", fit_tol, "tolerance on the target");

    auto* peel_cmd = app.add_subcommand("peel", "peeling slopes from an evolve output directory");
    std::string peel_run, peel_parity = "odd";
    PeelingOptions po;
    peel_cmd->add_option("run", peel_run, "evolve output directory")->required();
    peel_cmd->add_option("--parity", peel_parity)->check(CLI::IsMember({"odd", "even"}));
    peel_cmd->add_option("--u0", po.u0);
    peel_cmd->add_option("--r-lo", po.r_lo);
    peel_cmd->add_option("--r-hi", po.r_hi);
    peel_cmd->add_option("--r-radiation", po.r_radiation);
    peel_cmd->add_option("--u-min", po.u_min);

    auto* id_cmd = app.add_subcommand("identities", "identity suite over the metric catalog");

    auto* res_cmd = app.add_subcommand("resolvent", "zero-resolvent fuzzing campaign");
    CampaignOptions co;
    res_cmd->add_option("--seeds", co.seeds);
    res_cmd->add_option("--base-seed", co.base_seed);
    res_cmd->add_option("--support-lo", co.support_lo);
    res_cmd->add_option("--support-hi", co.support_hi);
    res_cmd->add_option("--l-min", co.l_min);
    res_cmd->add_option("--l-max", co.l_max);

    auto* rep_cmd = app.add_subcommand("report", "aggregate artifacts; --reproduce reruns every acceptance criterion");
    bool reproduce = false;
    rep_cmd->add_flag("--reproduce", reproduce);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_schema;
    }

    const fs::path root = output_root(out_flag);
    try {
        if (*evolve_cmd) return cmd_evolve(config_path, root);
        if (*fit_cmd) return cmd_fit(fit_input, fit_column, pol, fit_target, fit_tol, root);
        if (*peel_cmd) return cmd_peel(peel_run, peel_parity, po, root);
        if (*id_cmd) return cmd_identities(root);
        if (*res_cmd) return cmd_resolvent(co, root);
        if (*rep_cmd) return cmd_report(reproduce, root);
    } catch (const Error& e) {
        json payload{{"error", e.what()}, {"kind", to_string(e.kind())}};
        std::cerr << payload.dump() << "\n";
        return e.kind() == ErrorKind::config ? exit_schema : exit_numeric;
    } catch (const json::exception& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "config"}}.dump() << "\n";
        return exit_schema;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "numeric"}}.dump() << "\n";
        return exit_numeric;
    }
    return 0;
}
