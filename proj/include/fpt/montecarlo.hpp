#pragma once

#include "fpt/model.hpp"

#include <cstdint>
#include <vector>

namespace fpt {

/// Euler-Maruyama discretization controls. Reflection is by projection
/// (max(0, .)); the broken drift is evaluated at the left endpoint of each
/// step; known O(sqrt(dt)) bias sources are monitored by the step-halving
/// test rather than corrected.
struct SimConfig {
    double dt = 1e-3;
    std::uint64_t n_paths = 100000;
    std::uint64_t seed = 1;
    bool bridge_correction = true;
    double t_max = 1000.0;
    int threads = 0;  // 0: FPT_THREADS env, then hardware concurrency

    void validate() const {
        check_arg(dt > 0.0 && dt <= 1e-2, "SimConfig: dt must be in (0, 1e-2]");
        check_arg(n_paths >= 1, "SimConfig: n_paths must be >= 1");
        check_arg(std::isfinite(t_max) && t_max > 0.0, "SimConfig: t_max must be finite");
    }
};

enum class HitKind : std::uint8_t { lower, upper, boundary_jump, censored };

inline const char* to_string(HitKind k) {
    switch (k) {
        case HitKind::lower: return "lower";
        case HitKind::upper: return "upper";
        case HitKind::boundary_jump: return "boundary-jump";
        default: return "censored";
    }
}

/// One simulated first-passage outcome. `upper` means the pre-jump level b
/// was hit, `boundary-jump` the post-jump level b+Y. Censored samples carry
/// tau = t_max.
struct HitSample {
    double tau;
    double x_tau;
    HitKind kind;
    bool jumped;  // whether T1 < tau
};

struct MCEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    std::uint64_t n = 0;
    double censored_fraction = 0.0;
};

int resolve_threads(int requested);

std::vector<HitSample> simulate_hitting(System system, const DriftSpec& drift,
                                        const BoundarySpec& boundary, double x0,
                                        const SimConfig& config);

/// Mean of exp(-alpha x_tau - theta tau). Censored paths contribute the
/// bound exp(-theta t_max); the induced bias is at most censored_fraction *
/// exp(-theta t_max).
MCEstimate estimate_joint_lt(System system, const DriftSpec& drift,
                             const BoundarySpec& boundary, const TransformQuery& query,
                             const SimConfig& config);

/// Same paths evaluated against many (alpha, theta) pairs at a single start.
std::vector<MCEstimate> estimate_joint_lt_grid(
    System system, const DriftSpec& drift, const BoundarySpec& boundary, double x0,
    const std::vector<std::pair<double, double>>& alpha_theta, const SimConfig& config);

struct PhiQuadEstimate {
    MCEstimate phi1, phi2, phi3, phi4;
};

/// Simulates to T1 (tracking whether the constant boundary was met first)
/// and averages the four indicator-weighted functionals.
PhiQuadEstimate estimate_phi_quadruple(System system, const DriftSpec& drift,
                                       const BoundarySpec& boundary, double alpha,
                                       double theta, double x0, const SimConfig& config);

struct Histogram {
    double lo = 0.0, hi = 0.0;
    int bins = 0;
    std::uint64_t n = 0;
    std::uint64_t below = 0, above = 0;
    std::vector<std::uint64_t> counts;
    std::vector<double> density;  // count / (n * bin_width)
    std::vector<double> se;       // sqrt(p(1-p)/n) / bin_width
};

/// Normalized histogram of X_t (no hitting boundary; reflected system is
/// projected at 0).
Histogram density_histogram(System system, const DriftSpec& drift, double t, double x0,
                            double lo, double hi, int bins, const SimConfig& config);

}  // namespace fpt
