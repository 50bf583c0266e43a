#pragma once

// Flat "key = value" run configuration.  '#' starts a comment; blank lines are
// ignored; unknown or repeated keys are errors.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "mpv/gridcore.hpp"
#include "mpv/kinetic.hpp"

namespace mpv {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Config {
    double L = 6.283185307179586;
    int Nq = 64;
    int Np = 256;
    double Pmax = 8.0;
    double dt = 0.05;
    double t_end = 1.0;
    double m = 1.0;
    double e = 1.0;
    int K = 4;
    DiffScheme scheme = DiffScheme::Fourier;
    FieldMode field_mode = FieldMode::SelfConsistent;
    std::uint64_t seed = 1;
    int order_cap = 10;
    bool bernoulli_half_factor = false;

    /// Random instances per identity suite.
    int instances = 100;
    /// Worker threads for the kinetic advection sweeps.
    int threads = 1;
    /// Initial data: "landau" (1 + amplitude cos(mode q 2pi/L)) Maxwellian, or "bump".
    std::string initial = "landau";
    double amplitude = 0.05;
    int mode = 1;
    double thermal_width = 1.0;
    /// Mean velocity of the Maxwellian part of the initial profile.
    double drift = 0.0;
    /// Prescribed potential phi_amplitude sin(mode q 2pi/L).
    double phi_amplitude = 0.0;
    /// Snapshot every n steps; 0 writes only the first and last.
    int snapshot_every = 0;
    /// "euler" or "vlasov" for run-moments.
    std::string moment_model = "euler";
    double fluid_kappa = 1.0;
    double fluid_gamma = 2.0;

    /// Throws ConfigError on the first violated constraint.
    void validate() const;
    /// Every key in a fixed order, "key = value" per line, round-trippable.
    std::string to_text() const;
};

/// Parses and validates.  Messages name the offending line.
Config parse_config(const std::string& text);
/// Throws ConfigError if the file cannot be read.
Config load_config(const std::string& path);

}  // namespace mpv
