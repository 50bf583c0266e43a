#pragma once

// Verification suites and simulation drivers behind the command-line tool.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mpv/config.hpp"
#include "mpv/gridcore.hpp"

namespace mpv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;

/// Count of exact checks run and failed under one identity name.
struct ExactTally {
    std::string name;
    int run = 0;
    int failed = 0;
};

struct AlgebraReport {
    int instances = 0;
    std::vector<ExactTally> checks;
    bool ok() const;
    int total() const;
    std::string to_text() const;
};

/// Exact identity suite over `instances` seeded random instances: dims 1 and 2
/// alternate, tensor orders up to 4, coefficient degree up to 3.
AlgebraReport verify_algebra(std::uint64_t seed, int instances, int order_cap);

/// Largest error seen for a floating-point identity, against its tolerance.
struct NumericCheck {
    std::string name;
    double worst = 0.0;
    double tolerance = 0.0;
    bool ok() const { return worst <= tolerance; }
};

struct DualReport {
    std::vector<NumericCheck> checks;
    bool ok() const;
    std::string to_text() const;
};

/// Adjointness relative errors for the coadjoint action on moments and for
/// J_LP, plus the pointwise matched-vs-full coadjoint mismatch.  Data are
/// trigonometric in q with analytic derivatives for the oracle side.
struct DualErrors {
    double coad_adjoint = 0.0;
    double jlp_adjoint = 0.0;
    double decomposition = 0.0;
    double pairing_kernel = 0.0;
};
DualErrors dual_errors(std::uint64_t seed, const PhaseGrid& g, DiffScheme scheme);
DualReport verify_dual(std::uint64_t seed, int instances, const PhaseGrid& g, DiffScheme scheme);

struct RunRequest {
    std::string subcommand;
    std::optional<std::string> config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand, writing CSVs and manifest.txt under out_dir.  Returns
/// kExitOk, kExitViolation when a checked invariant fails, or kExitConfig
/// when the subcommand or configuration is rejected (nothing is written then).
int run(const RunRequest& request, std::ostream& out, std::ostream& err);

}  // namespace mpv
