#include "ringlaser/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ringlaser/error.hpp"

namespace ringlaser {

Truncation TruncationSetting::resolve(std::size_t atom_count) const {
    switch (policy) {
    case Policy::full:
        return Truncation::full();
    case Policy::fixed:
        return Truncation::at(std::min(max_excitations, atom_count));
    case Policy::automatic:
        break;
    }
    if (atom_count <= full_basis_atoms) return Truncation::full();
    return Truncation::at(std::min(max_excitations, atom_count));
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

double to_real(const std::string& s) {
    const std::string t = trim(s);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
        fail(ErrorKind::invalid_config, "not a number: '" + t + "'");
    }
    return value;
}

std::size_t to_count(const std::string& s) {
    const std::string t = trim(s);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        fail(ErrorKind::invalid_config, "not a non-negative integer: '" + t + "'");
    }
    return value;
}

bool to_bool(const std::string& s) {
    const std::string t = lower(trim(s));
    if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
    if (t == "false" || t == "no" || t == "off" || t == "0") return false;
    fail(ErrorKind::invalid_config, "not a boolean: '" + t + "'");
}

std::pair<double, double> to_range(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 2) fail(ErrorKind::invalid_config, "range needs two values: '" + s + "'");
    const double lo = to_real(parts[0]);
    const double hi = to_real(parts[1]);
    if (!(lo > 0.0 && hi > lo)) fail(ErrorKind::invalid_config, "range must satisfy 0 < lo < hi");
    return {lo, hi};
}

std::optional<double> to_spacing(const std::string& s) {
    if (lower(trim(s)) == "subradiant") return std::nullopt;
    return to_real(s);
}

// keys accepted per section
const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"system", {"n_ring", "spacing", "pump_rate", "truncation", "subradiant_range"}},
        {"solver", {"rtol", "atol", "svd_limit"}},
        {"sweep", {"n_ring", "spacing", "pump_rate", "level"}},
        {"spectrum", {"tau_max", "tau_samples", "omega_points"}},
        {"evolve", {"t_end", "steps"}},
        {"map", {"plane", "offset", "half_extent", "resolution"}},
        {"truncation_check", {"pump_rate", "spectrum"}},
        {"output", {"dir", "name"}},
    };
    return keys;
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) fail(ErrorKind::invalid_config, key + ": " + what);
}

} // namespace

std::vector<double> parse_real_axis(const std::string& text) {
    const std::string t = trim(text);
    std::vector<double> out;
    const auto open = t.find('(');
    if (open != std::string::npos) {
        const std::string kind = lower(trim(t.substr(0, open)));
        if (t.back() != ')') fail(ErrorKind::invalid_config, "unterminated axis: '" + t + "'");
        const auto args = split(t.substr(open + 1, t.size() - open - 2), ',');
        if (args.size() != 3) fail(ErrorKind::invalid_config, "axis needs (start, stop, count)");
        const double a = to_real(args[0]);
        const double b = to_real(args[1]);
        const std::size_t n = to_count(args[2]);
        if (n == 0) fail(ErrorKind::invalid_config, "axis count must be positive");
        if (kind != "lin" && kind != "log") {
            fail(ErrorKind::invalid_config, "unknown axis kind '" + kind + "'");
        }
        if (kind == "log" && !(a > 0.0 && b > 0.0)) {
            fail(ErrorKind::invalid_config, "log axis needs positive bounds");
        }
        out.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double f = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
            out[k] = kind == "lin" ? a + (b - a) * f
                                   : std::exp(std::log(a) + (std::log(b) - std::log(a)) * f);
        }
        out.front() = a;
        if (n > 1) out.back() = b;
        return out;
    }
    for (const auto& part : split(t, ',')) {
        if (part.empty()) continue;
        out.push_back(to_real(part));
    }
    if (out.empty()) fail(ErrorKind::invalid_config, "empty axis");
    return out;
}

std::vector<std::size_t> parse_count_axis(const std::string& text) {
    const std::string t = trim(text);
    std::vector<std::size_t> out;
    if (const auto dots = t.find(".."); dots != std::string::npos) {
        const std::size_t a = to_count(t.substr(0, dots));
        const std::size_t b = to_count(t.substr(dots + 2));
        if (b < a) fail(ErrorKind::invalid_config, "empty range '" + t + "'");
        for (std::size_t n = a; n <= b; ++n) out.push_back(n);
        return out;
    }
    for (const auto& part : split(t, ',')) {
        if (part.empty()) continue;
        out.push_back(to_count(part));
    }
    if (out.empty()) fail(ErrorKind::invalid_config, "empty axis");
    return out;
}

SimConfig parse_config(const std::string& text) {
    boost::property_tree::ptree tree;
    try {
        std::istringstream in(text);
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        fail(ErrorKind::invalid_config, std::string("malformed config: ") + e.what());
    }

    for (const auto& [section, body] : tree) {
        const auto it = schema().find(section);
        if (it == schema().end() || !body.data().empty()) {
            fail(ErrorKind::invalid_config, "unknown section or top-level key '" + section + "'");
        }
        for (const auto& [key, value] : body) {
            if (!it->second.count(key)) {
                fail(ErrorKind::invalid_config, "unknown key '" + section + "." + key + "'");
            }
        }
    }

    SimConfig c;
    auto get = [&](const std::string& path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(boost::property_tree::ptree::path_type(path, '.'))) {
            return trim(*v);
        }
        return std::nullopt;
    };
    auto with_key = [](const std::string& key, auto fn) {
        try {
            return fn();
        } catch (const Error& e) {
            throw Error(ErrorKind::invalid_config, key + ": " + e.what());
        }
    };

    if (auto v = get("system.n_ring")) c.system.n_ring = with_key("system.n_ring", [&] { return to_count(*v); });
    if (auto v = get("system.spacing")) {
        c.system.spacing = with_key("system.spacing", [&] { return to_spacing(*v); });
    }
    if (auto v = get("system.pump_rate")) c.system.pump_rate = with_key("system.pump_rate", [&] { return to_real(*v); });
    if (auto v = get("system.truncation")) {
        const std::string t = lower(*v);
        if (t == "auto") {
            c.system.truncation.policy = TruncationSetting::Policy::automatic;
        } else if (t == "full") {
            c.system.truncation.policy = TruncationSetting::Policy::full;
        } else {
            c.system.truncation.policy = TruncationSetting::Policy::fixed;
            c.system.truncation.max_excitations =
                with_key("system.truncation", [&] { return to_count(t); });
            require(c.system.truncation.max_excitations >= 1, "system.truncation",
                    "use auto, full or an excitation count >= 1");
        }
    }
    if (auto v = get("system.subradiant_range")) {
        c.system.subradiant_range = with_key("system.subradiant_range", [&] { return to_range(*v); });
    }

    if (auto v = get("solver.rtol")) c.solver.rtol = with_key("solver.rtol", [&] { return to_real(*v); });
    if (auto v = get("solver.atol")) c.solver.atol = with_key("solver.atol", [&] { return to_real(*v); });
    if (auto v = get("solver.svd_limit")) c.solver.svd_limit = with_key("solver.svd_limit", [&] { return to_count(*v); });

    if (auto v = get("sweep.n_ring")) c.sweep.n_ring = with_key("sweep.n_ring", [&] { return parse_count_axis(*v); });
    if (auto v = get("sweep.spacing")) {
        if (lower(*v) == "subradiant") {
            c.sweep.subradiant = true;
        } else {
            c.sweep.spacing = with_key("sweep.spacing", [&] { return parse_real_axis(*v); });
        }
    }
    if (auto v = get("sweep.pump_rate")) c.sweep.pump_rate = with_key("sweep.pump_rate", [&] { return parse_real_axis(*v); });
    if (auto v = get("sweep.level")) {
        const std::string t = lower(*v);
        if (t == "couplings") {
            c.sweep.level = SweepLevel::couplings;
        } else if (t == "steady") {
            c.sweep.level = SweepLevel::steady;
        } else if (t == "spectrum") {
            c.sweep.level = SweepLevel::spectrum;
        } else {
            fail(ErrorKind::invalid_config, "sweep.level: use couplings, steady or spectrum");
        }
    }

    if (auto v = get("spectrum.tau_max")) c.spectrum.tau_max = with_key("spectrum.tau_max", [&] { return to_real(*v); });
    if (auto v = get("spectrum.tau_samples")) c.spectrum.tau_samples = with_key("spectrum.tau_samples", [&] { return to_count(*v); });
    if (auto v = get("spectrum.omega_points")) c.spectrum.omega_points = with_key("spectrum.omega_points", [&] { return to_count(*v); });

    if (auto v = get("evolve.t_end")) c.evolve.t_end = with_key("evolve.t_end", [&] { return to_real(*v); });
    if (auto v = get("evolve.steps")) c.evolve.steps = with_key("evolve.steps", [&] { return to_count(*v); });

    if (auto v = get("map.plane")) {
        const std::string t = lower(*v);
        if (t == "xy") {
            c.map.normal = PlaneNormal::z;
        } else if (t == "xz") {
            c.map.normal = PlaneNormal::y;
        } else if (t == "yz") {
            c.map.normal = PlaneNormal::x;
        } else {
            fail(ErrorKind::invalid_config, "map.plane: use xy, xz or yz");
        }
    }
    if (auto v = get("map.offset")) c.map.offset = with_key("map.offset", [&] { return to_real(*v); });
    if (auto v = get("map.half_extent")) c.map.half_extent = with_key("map.half_extent", [&] { return to_real(*v); });
    if (auto v = get("map.resolution")) c.map.resolution = with_key("map.resolution", [&] { return to_count(*v); });

    if (auto v = get("truncation_check.pump_rate")) {
        c.truncation_check.pump_rate =
            with_key("truncation_check.pump_rate", [&] { return parse_real_axis(*v); });
    }
    if (auto v = get("truncation_check.spectrum")) {
        c.truncation_check.spectrum = with_key("truncation_check.spectrum", [&] { return to_bool(*v); });
    }

    if (auto v = get("output.dir")) c.output.dir = *v;
    if (auto v = get("output.name")) c.output.name = *v;

    // sweep axes fall back to the single system point
    if (c.sweep.n_ring.empty()) c.sweep.n_ring = {c.system.n_ring};
    if (c.sweep.spacing.empty() && !c.sweep.subradiant) {
        if (c.system.spacing) {
            c.sweep.spacing = {*c.system.spacing};
        } else {
            c.sweep.subradiant = true;
        }
    }
    if (c.sweep.pump_rate.empty()) c.sweep.pump_rate = {c.system.pump_rate};

    require(c.system.n_ring >= 3, "system.n_ring", "need at least 3 ring atoms");
    require(!c.system.spacing || *c.system.spacing > 0.0, "system.spacing", "must be positive");
    require(c.system.pump_rate >= 0.0, "system.pump_rate", "must be non-negative");
    require(c.solver.rtol > 0.0 && c.solver.atol > 0.0, "solver", "tolerances must be positive");
    for (auto n : c.sweep.n_ring) require(n >= 3, "sweep.n_ring", "need at least 3 ring atoms");
    for (auto d : c.sweep.spacing) require(d > 0.0, "sweep.spacing", "must be positive");
    for (auto nu : c.sweep.pump_rate) require(nu >= 0.0, "sweep.pump_rate", "must be non-negative");
    for (auto nu : c.truncation_check.pump_rate) {
        require(nu >= 0.0, "truncation_check.pump_rate", "must be non-negative");
    }
    require(!c.spectrum.tau_max || *c.spectrum.tau_max > 0.0, "spectrum.tau_max", "must be positive");
    require(c.spectrum.tau_samples >= 3, "spectrum.tau_samples", "need at least 3 samples");
    require(c.spectrum.omega_points >= 3, "spectrum.omega_points", "need at least 3 points");
    require(c.evolve.t_end > 0.0 && c.evolve.steps >= 1, "evolve", "need t_end > 0 and steps >= 1");
    require(c.map.half_extent > 0.0 && c.map.resolution >= 2, "map",
            "need half_extent > 0 and resolution >= 2");
    require(!c.output.name.empty(), "output.name", "must not be empty");
    return c;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::invalid_config, "cannot open config '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

} // namespace ringlaser
