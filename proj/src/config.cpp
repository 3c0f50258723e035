#include "rodvoids/config.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "rodvoids/errors.hpp"
#include "rodvoids/io.hpp"
#include "rodvoids/rod3d.hpp"

namespace rodvoids {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& value) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(value);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size())
            throw ConfigError("E_CONFIG_PARSE", "malformed number in list: " + item);
    }
    return out;
}

} // namespace

ExperimentConfig::ExperimentConfig() : rho(rho0()) {}

double ExperimentConfig::alpha() const {
    return std::pow(T / (10.0 * korn_constant), 2.0 / 3.0);
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
    ExperimentConfig cfg;
    bool have_M = false, have_rho = false, have_ds = false;

    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("E_CONFIG_PARSE",
                                  "line " + std::to_string(line_no) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("E_CONFIG_PARSE",
                              "line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto num = [&] {
            size_t pos = 0;
            const double v = std::stod(value, &pos);
            if (pos != value.size())
                throw ConfigError("E_CONFIG_PARSE", "malformed number for " + key);
            return v;
        };

        if (key == "material.kind") {
            if (value == "stvk" || value == "StVenantKirchhoff")
                cfg.kind = MaterialKind::StVenantKirchhoff;
            else if (value == "neohookean" || value == "CompressibleNeoHookeanRegularized")
                cfg.kind = MaterialKind::CompressibleNeoHookeanRegularized;
            else
                throw ConfigError("E_CONFIG_VALUE", "unknown material kind: " + value);
        } else if (key == "material.lambda") cfg.lambda = num();
        else if (key == "material.mu") cfg.mu = num();
        else if (key == "geometry.L") cfg.L = num();
        else if (key == "geometry.M") { cfg.M = num(); have_M = true; }
        else if (key == "geometry.T") cfg.T = static_cast<int>(num());
        else if (key == "geometry.rho") { cfg.rho = num(); have_rho = true; }
        else if (key == "geometry.korn_constant") cfg.korn_constant = num();
        else if (key == "geometry.c_iso") cfg.c_iso = num();
        else if (key == "mesh.cell_n") cfg.cell_n = static_cast<int>(num());
        else if (key == "mesh.ds") { cfg.ds = num(); have_ds = true; }
        else if (key == "mesh.n_cross") cfg.n_cross = static_cast<int>(num());
        else if (key == "sweep.h_list") cfg.h_list = parse_list(value);
        else if (key == "sweep.kappa_exponent") cfg.kappa_exponent = num();
        else if (key == "sweep.validate_regime") cfg.validate_regime = value == "true";
        else if (key == "limit.source") cfg.limit_source = value;
        else if (key == "minimize.clamp_theta") cfg.clamp_theta = num();
        else if (key == "minimize.clamp_yL") cfg.clamp_yL = parse_list(value);
        else if (key == "minimize.break_grid") cfg.break_grid = parse_list(value);
        else if (key == "minimize.max_discontinuities")
            cfg.max_discontinuities = static_cast<int>(num());
        else if (key == "isoperimetry.mode") cfg.iso_mode = value;
        else if (key == "isoperimetry.d") cfg.iso_d = static_cast<int>(num());
        else if (key == "isoperimetry.long_cells") cfg.iso_long = static_cast<int>(num());
        else if (key == "isoperimetry.cross_cells") cfg.iso_cross = static_cast<int>(num());
        else if (key == "isoperimetry.samples") cfg.iso_samples = static_cast<int>(num());
        else if (key == "isoperimetry.t0") cfg.iso_t0 = num();
        else if (key == "run.seed") cfg.seed = static_cast<std::uint64_t>(num());
        else if (key == "output.dir") cfg.output_dir = value;
        else
            throw ConfigError("E_CONFIG_KEY", "unknown configuration key: " + key);
    }

    if (!have_M) cfg.M = 10.0 * cfg.L;
    if (!have_rho) cfg.rho = rho0();
    if (!have_ds) cfg.ds = cfg.L / 512.0;
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path,
                                              std::uint64_t* hash_out) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const InvalidInputError& e) {
        throw ConfigError("E_CONFIG_IO", e.what());
    }
    if (hash_out) *hash_out = fnv1a_hash(text);
    return parse_text(text);
}

void ExperimentConfig::validate() const {
    if (mu <= 0.0 || 3.0 * lambda + 2.0 * mu <= 0.0)
        throw ConfigError("E_CONFIG_MATERIAL",
                          "material needs mu > 0 and 3*lambda + 2*mu > 0");
    if (L <= 0.0) throw ConfigError("E_CONFIG_GEOMETRY", "L must be positive");
    if (M <= 0.0) throw ConfigError("E_CONFIG_GEOMETRY", "M must be positive");
    if (T < 2) throw ConfigError("E_CONFIG_GEOMETRY", "T must be an integer >= 2");
    if (!(rho > 0.0 && rho <= rho0() + 1e-15))
        throw ConfigError("E_CONFIG_RHO",
                          "rho must lie in (0, 1 - (19/20)^(1/3)] = (0, " +
                              format_g17(rho0()) + "]");
    if (korn_constant <= 0.0 || c_iso < 0.0)
        throw ConfigError("E_CONFIG_GEOMETRY", "korn_constant > 0 and c_iso >= 0 required");
    if (cell_n < 1 || n_cross < 1)
        throw ConfigError("E_CONFIG_MESH", "mesh resolutions must be >= 1");
    if (ds <= 0.0) throw ConfigError("E_CONFIG_MESH", "ds must be positive");
    if (h_list.empty())
        throw ConfigError("E_CONFIG_SWEEP", "h list must not be empty");
    for (double h : h_list)
        if (!(h > 0.0 && h < 1.0))
            throw ConfigError("E_CONFIG_SWEEP", "h values must lie in (0, 1)");
    for (size_t i = 0; i + 1 < h_list.size(); ++i)
        if (!(h_list[i] > h_list[i + 1]))
            throw ConfigError("E_CONFIG_SWEEP", "h list must be strictly decreasing");
    if (validate_regime && !(kappa_exponent < 52.0 / 25.0))
        throw ConfigError("E_CONFIG_KAPPA",
                          "regime validation requires kappa exponent < 52/25");
    if (max_discontinuities < 0 || max_discontinuities > 6)
        throw ConfigError("E_CONFIG_MINIMIZE", "max_discontinuities must lie in [0, 6]");
    if (iso_mode != "exhaustive" && iso_mode != "random")
        throw ConfigError("E_CONFIG_ISO", "isoperimetry mode must be exhaustive or random");
    if (iso_d < 1 || iso_d > 3)
        throw ConfigError("E_CONFIG_ISO", "isoperimetry dimension must be 1, 2, or 3");
}

} // namespace rodvoids
