#pragma once

#include "fpt/greens.hpp"
#include "fpt/model.hpp"

#include <functional>
#include <vector>

namespace fpt {

enum class InvMethod { euler_summation, gaver_stehfest };

/// Knobs of the numerical Bromwich inversion. abscissa_shift = 0 selects the
/// standard choice ln(10) * digits / (2t) from target_tol. Euler summation
/// evaluates only on the fixed line Re(s) = abscissa; Gaver-Stehfest only at
/// real s > 0, so neither leaves the principal branch.
struct InversionParams {
    InvMethod method = InvMethod::euler_summation;
    int terms = 60;
    double abscissa_shift = 0.0;
    double target_tol = 1e-8;
    double cross_tol = 1e-6;

    void validate() const {
        check_arg(target_tol > 0.0, "InversionParams: target_tol must be > 0");
        check_arg(abscissa_shift >= 0.0, "InversionParams: abscissa_shift must be >= 0");
        if (method == InvMethod::euler_summation)
            check_arg(terms >= 10, "InversionParams: euler-summation needs terms >= 10");
        else
            check_arg(terms >= 2 && terms <= 18 && terms % 2 == 0,
                      "InversionParams: gaver-stehfest needs even terms <= 18");
    }
};

using LaplaceFn = std::function<Complex(Complex)>;

double invert_laplace(const LaplaceFn& F, double t, const InversionParams& params);

/// Runs euler-summation and gaver-stehfest and requires agreement within
/// max(cross_tol, cross_tol * |f|); returns the euler-summation value.
/// Disagreement signals analytic-continuation or conditioning trouble and is
/// reported as std::runtime_error.
double invert_laplace_checked(const LaplaceFn& F, double t, const InversionParams& params);

struct DensityValue {
    double value;
    double raw;
    bool clamped;
};

/// Clamp tolerance for small negative inversion results of densities.
constexpr double kDensityClampTol = 1e-6;

DensityValue transition_density_info(System system, const DriftSpec& drift, double t,
                                     double x, double y, const InversionParams& params);

double transition_density(System system, const DriftSpec& drift, double t, double x,
                          double y, const InversionParams& params);

/// One inversion contour shared across a row of y values (the spectral data
/// and the psi/phi factors at x are reused per node).
std::vector<DensityValue> transition_density_table(System system, const DriftSpec& drift,
                                                   double t, double x,
                                                   const std::vector<double>& ys,
                                                   const InversionParams& params);

/// Inverts a closed-form tail transform s -> integral_level^inf G_s(x,y) dy,
/// giving P_x(X_t >= level) (free) or the reflected analogue.
double tail_probability(System system, const DriftSpec& drift, double t, double x,
                        double level, const InversionParams& params);

}  // namespace fpt
