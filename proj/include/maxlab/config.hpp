// Keyed JSON run configuration for evolutions, with strict key checking.
#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "evolution.hpp"

namespace maxlab {

using json = nlohmann::ordered_json;

struct RunConfig {
    std::string command = "evolve";
    std::string output_dir;
    EvolutionConfig evolution;
};

namespace detail {

inline void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw Error(ErrorKind::config, where + " must be an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw Error(ErrorKind::config, "unknown key '" + k + "' in " + (where.empty() ? "config" : where));
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

template <class E, std::size_t N>
E parse_enum(const std::string& s, const std::array<E, N>& values, const std::string& what) {
    for (E v : values)
        if (s == to_string(v)) return v;
    throw Error(ErrorKind::config, "unknown " + what + " '" + s + "'");
}

inline MetricSpec parse_metric(const json& j) {
    check_keys(j, {"family", "mass", "g_omega", "g_sr", "r_min"}, "metric");
    const std::string fam = j.value("family", std::string("schwarzschild"));
    if (fam == "minkowski") return MetricSpec::minkowski();
    if (fam == "schwarzschild") return MetricSpec::schwarzschild(j.value("mass", 1.0));
    if (fam == "general_normalized" || fam == "general") {
        RadialFunction go = make_radial_function("zero", 0);
        ShortRangePart sr = make_short_range("none", 0);
        if (j.contains("g_omega")) {
            const json& g = j.at("g_omega");
            check_keys(g, {"name", "amplitude"}, "metric.g_omega");
            go = make_radial_function(g.value("name", std::string("zero")), g.value("amplitude", 0.0));
        }
        if (j.contains("g_sr")) {
            const json& g = j.at("g_sr");
            check_keys(g, {"name", "amplitude"}, "metric.g_sr");
            sr = make_short_range(g.value("name", std::string("none")), g.value("amplitude", 0.0));
        }
        return MetricSpec::general(go, sr, j.value("r_min", 1.0));
    }
    throw Error(ErrorKind::config, "unknown metric family '" + fam + "'");
}

inline json metric_json(const MetricSpec& m) {
    json j;
    j["family"] = to_string(m.family);
    if (m.family == MetricFamily::schwarzschild) j["mass"] = m.mass;
    if (m.family == MetricFamily::general_normalized) {
        j["g_omega"] = {{"name", m.g_omega.name}, {"amplitude", m.g_omega.amplitude}};
        j["g_sr"] = {{"name", m.g_sr.name}, {"amplitude", m.g_sr.amplitude}};
        j["r_min"] = m.domain_r_min;
    }
    return j;
}

}  // namespace detail

// Throws Error(config) on schema violations.
inline RunConfig parse_run_config(const json& j) {
    using namespace detail;
    RunConfig rc;
    EvolutionConfig& c = rc.evolution;
    try {
        check_keys(j, {"command", "output_dir", "metric", "mode", "grid", "data", "probes", "null_lines", "t_final",
                       "save_every", "potential", "tail_purity", "purity_margin", "snapshots", "slices"},
                   "");
        read_opt(j, "command", rc.command);
        read_opt(j, "output_dir", rc.output_dir);
        if (j.contains("metric")) c.metric = parse_metric(j.at("metric"));
        if (j.contains("mode")) {
            const json& m = j.at("mode");
            check_keys(m, {"l", "s", "parity"}, "mode");
            read_opt(m, "l", c.l);
            read_opt(m, "s", c.s);
            if (m.contains("parity"))
                c.parity = parse_enum(m.at("parity").get<std::string>(),
                                      std::array{ParityOutput::even, ParityOutput::odd, ParityOutput::both}, "parity");
        }
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            check_keys(g, {"rstar_min", "rstar_max", "n", "dr", "cfl", "space_order"}, "grid");
            read_opt(g, "rstar_min", c.rstar_min);
            read_opt(g, "rstar_max", c.rstar_max);
            read_opt(g, "cfl", c.cfl);
            read_opt(g, "space_order", c.space_order);
            if (g.contains("n") && g.contains("dr")) throw Error(ErrorKind::config, "grid takes either n or dr");
            if (g.contains("n")) {
                const long n = g.at("n").get<long>();
                if (n < 16) throw Error(ErrorKind::config, "grid.n must be >= 16");
                c.dr = (c.rstar_max - c.rstar_min) / double(n - 1);
            }
            read_opt(g, "dr", c.dr);
        }
        if (j.contains("data")) {
            const json& d = j.at("data");
            check_keys(d, {"profile", "center", "sigma", "amplitude", "symmetry"}, "data");
            if (d.contains("profile"))
                c.data.profile = parse_enum(d.at("profile").get<std::string>(),
                                            std::array{Profile::gaussian, Profile::compact_bump}, "profile");
            read_opt(d, "center", c.data.center);
            read_opt(d, "sigma", c.data.sigma);
            read_opt(d, "amplitude", c.data.amplitude);
            if (d.contains("symmetry"))
                c.data.symmetry = parse_enum(
                    d.at("symmetry").get<std::string>(),
                    std::array{TimeSymmetry::time_symmetric, TimeSymmetry::ingoing, TimeSymmetry::outgoing}, "symmetry");
        }
        read_opt(j, "probes", c.probes);
        if (j.contains("null_lines")) {
            const json& n = j.at("null_lines");
            check_keys(n, {"u0", "v0", "record_every"}, "null_lines");
            const int every = n.value("record_every", 1);
            c.u_lines.clear();
            c.v_lines.clear();
            for (double u : n.value("u0", std::vector<double>{})) c.u_lines.push_back({u, every});
            for (double v : n.value("v0", std::vector<double>{})) c.v_lines.push_back({v, every});
        }
        read_opt(j, "t_final", c.t_final);
        read_opt(j, "save_every", c.save_every);
        if (j.contains("potential"))
            c.potential = parse_enum(j.at("potential").get<std::string>(),
                                     std::array{PotentialVariant::standard, PotentialVariant::wrong_mass_term}, "potential");
        read_opt(j, "tail_purity", c.tail_purity);
        read_opt(j, "purity_margin", c.purity_margin);
        if (j.contains("snapshots")) {
            c.snapshots.clear();
            for (double t : j.at("snapshots").get<std::vector<double>>()) c.snapshots.push_back({t});
        }
        if (j.contains("slices")) {
            const json& s = j.at("slices");
            check_keys(s, {"every", "stride"}, "slices");
            read_opt(s, "every", c.slices.every);
            read_opt(s, "stride", c.slices.stride);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config, std::string("malformed value: ") + e.what());
    }
    if (c.l < 0 || c.s < 0 || c.s > 1 || c.l < c.s) throw Error(ErrorKind::config, "mode needs 0 <= s <= 1 and l >= s");
    if (!(c.t_final > 0)) throw Error(ErrorKind::config, "t_final must be positive");
    if (c.save_every < 1) throw Error(ErrorKind::config, "save_every must be >= 1");
    if (c.space_order != 2 && c.space_order != 4) throw Error(ErrorKind::config, "space_order must be 2 or 4");
    make_grid(c.rstar_min, c.rstar_max, c.dr, c.cfl);  // validates grid keys
    return rc;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot open config file " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config, std::string("config is not valid JSON: ") + e.what());
    }
    return parse_run_config(j);
}

// Fully resolved configuration; parses back to the same run.
inline json to_json(const RunConfig& rc) {
    const EvolutionConfig& c = rc.evolution;
    json j;
    j["command"] = rc.command;
    if (!rc.output_dir.empty()) j["output_dir"] = rc.output_dir;
    j["metric"] = detail::metric_json(c.metric);
    j["mode"] = {{"l", c.l}, {"s", c.s}, {"parity", to_string(c.parity)}};
    j["grid"] = {{"rstar_min", c.rstar_min}, {"rstar_max", c.rstar_max}, {"dr", c.dr}, {"cfl", c.cfl},
                 {"space_order", c.space_order}};
    j["data"] = {{"profile", to_string(c.data.profile)}, {"center", c.data.center}, {"sigma", c.data.sigma},
                 {"amplitude", c.data.amplitude}, {"symmetry", to_string(c.data.symmetry)}};
    j["probes"] = c.probes;
    std::vector<double> u0, v0;
    for (const auto& l : c.u_lines) u0.push_back(l.label);
    for (const auto& l : c.v_lines) v0.push_back(l.label);
    const int every = !c.u_lines.empty() ? c.u_lines[0].record_every : !c.v_lines.empty() ? c.v_lines[0].record_every : 1;
    j["null_lines"] = {{"u0", u0}, {"v0", v0}, {"record_every", every}};
    j["t_final"] = c.t_final;
    j["save_every"] = c.save_every;
    j["potential"] = to_string(c.potential);
    j["tail_purity"] = c.tail_purity;
    j["purity_margin"] = c.purity_margin;
    std::vector<double> snaps;
    for (const auto& s : c.snapshots) snaps.push_back(s.time);
    j["snapshots"] = snaps;
    j["slices"] = {{"every", c.slices.every}, {"stride", c.slices.stride}};
    return j;
}

}  // namespace maxlab
