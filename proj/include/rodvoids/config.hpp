#ifndef RODVOIDS_CONFIG_HPP
#define RODVOIDS_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rodvoids/material.hpp"

namespace rodvoids {

// Flat `key = value` configuration with [section] headers and # comments.
// Every key has a default; unknown keys are rejected.
struct ExperimentConfig {
    // [material]
    MaterialKind kind = MaterialKind::StVenantKirchhoff;
    double lambda = 0.0;
    double mu = 1.0;

    ExperimentConfig(); // fills the rho default 1 - (19/20)^{1/3}

    // [geometry]
    double L = 1.0;
    double M = 10.0; // sup bound, default 10 * L at parse time if unset
    int T = 10;
    double rho; // default rho0
    double korn_constant = 10.0; // c_T stand-in; alpha = (T / (10 c_T))^{2/3}
    double c_iso = 0.1;          // empirical isoperimetric constant

    // [mesh]
    int cell_n = 64;
    double ds = 1.0 / 512.0; // default L / 512 (resolved at parse time)
    int n_cross = 8;

    // [sweep]
    std::vector<double> h_list = {0.125, 0.0625, 0.03125, 0.015625};
    double kappa_exponent = 51.0 / 25.0;
    bool validate_regime = false;

    // [limit]
    std::string limit_source;

    // [minimize]
    double clamp_theta = 0.0; // right clamp: rotation by theta about e3
    std::vector<double> clamp_yL; // empty = default (L, 0, 0)
    std::vector<double> break_grid;
    int max_discontinuities = 2;

    // [isoperimetry]
    std::string iso_mode = "exhaustive"; // exhaustive | random
    int iso_d = 2;
    int iso_long = 10, iso_cross = 2;
    int iso_samples = 10000;
    double iso_t0 = 8.0;

    // [run]
    std::uint64_t seed = 1;

    // [output]
    std::string output_dir = ".";

    double alpha() const;

    static ExperimentConfig parse_text(const std::string& text);
    static ExperimentConfig parse_file(const std::string& path, std::uint64_t* hash_out);

    void validate() const; // throws ConfigError
};

} // namespace rodvoids

#endif
