#pragma once

#include "fpt/model.hpp"
#include "fpt/scaled.hpp"

#include <array>

namespace fpt {

enum class Direction { increasing, decreasing };

/// Roots of (1/2) r^2 + mu_i r - s = 0 for the two drift regimes, principal
/// branch: l_i^{+/-} = -mu_i +/- sqrt(mu_i^2 + 2 s).
struct SpectralRoots {
    Complex l1p, l1m, l2p, l2m;
};

/// Roots, matching coefficients of the four fundamental solutions (free and
/// reflected) and both Wronskians at one frequency.
struct SpectralData {
    SpectralRoots roots;
    Complex a1, a2, b1, b2;      // free: psi above c, phi below c
    Complex at1, at2, bt1, bt2;  // reflected counterparts
    Complex w_free, w_refl;
};

/// One exponential piece coef * exp(rate * x + shift). The shift carries the
/// threshold-matching exponent so it can be combined with other exponents
/// before exp() is taken.
struct SolTerm {
    Complex coef;
    Complex rate;
    Complex shift;
};

/// Piecewise-exponential fundamental solution with a single break at c.
struct PiecewiseSolution {
    std::array<SolTerm, 4> below{}, above{};
    int n_below = 0, n_above = 0;
    double c = 0.0;

    const SolTerm* branch(double x, int& n) const {
        // the x >= c branch owns the threshold itself
        if (x < c) {
            n = n_below;
            return below.data();
        }
        n = n_above;
        return above.data();
    }

    Scaled eval_scaled(double x) const;
    Scaled deriv_scaled(double x) const;
    Complex eval(double x) const { return eval_scaled(x).value(); }
    Complex deriv(double x) const { return deriv_scaled(x).value(); }
};

SpectralRoots spectral_roots(const DriftSpec& drift, const Frequency& s);
SpectralData spectral_data(const DriftSpec& drift, const Frequency& s);

/// Term representation of psi_s / phi_s (free) or their reflected
/// counterparts. Reflected solutions require x >= 0 at evaluation time.
PiecewiseSolution fundamental_terms(System system, Direction dir, const DriftSpec& drift,
                                    const Frequency& s);

Complex fundamental_solution(System system, Direction dir, const DriftSpec& drift,
                             const Frequency& s, double x);
Complex fundamental_solution_deriv(System system, Direction dir, const DriftSpec& drift,
                                   const Frequency& s, double x);

Scaled wronskian_scaled(System system, const DriftSpec& drift, const Frequency& s);
Complex wronskian(System system, const DriftSpec& drift, const Frequency& s);

struct SpeedScale {
    double speed;
    double scale;
};

/// Speed measure density m and scale density of the broken-drift generator;
/// m(x) * scale(x) = 2 away from the threshold.
SpeedScale speed_scale_densities(System system, const DriftSpec& drift, double x);

/// Speed density as an exponential factor 2 * exp(rate * x + shift) on the
/// branch containing x.
SolTerm speed_factor(const DriftSpec& drift, double x);

}  // namespace fpt
