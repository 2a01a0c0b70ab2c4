#pragma once

#include "fpt/model.hpp"
#include "fpt/scaled.hpp"
#include "fpt/spectral.hpp"

#include <vector>

namespace fpt {

/// Payoff h(y) = sum_k coeff_k exp(rate_k y) on each segment, zero
/// elsewhere. Segments must be disjoint and ordered; bounds may be +/-inf.
struct PayoffTerm {
    Complex coeff;
    Complex rate;
};

struct PayoffSegment {
    double lo;
    double hi;
    std::vector<PayoffTerm> terms;
};

struct PiecewiseExpPayoff {
    std::vector<PayoffSegment> segments;

    void validate() const;

    static PiecewiseExpPayoff indicator(double lo, double hi);
    static PiecewiseExpPayoff exponential(Complex coeff, Complex rate, double lo, double hi);
};

/// Resolvent density G_s(x,y) = m(y) psi_s(x^y) phi_s(xvy) / omega_s.
Complex green(System system, const DriftSpec& drift, const Frequency& s, double x, double y);

/// integral G_s(x,y) h(y) dy in closed form (exponential antiderivatives,
/// splits at x and c inserted automatically). Divergent unbounded terms are
/// an error, never a silent truncation.
Complex resolvent_integral(System system, const DriftSpec& drift, const Frequency& s,
                           double x, const PiecewiseExpPayoff& payoff);

/// integral_level^inf G_s(x,y) dy. level = -inf gives the full mass 1/s for
/// the free system.
Complex tail_mass(System system, const DriftSpec& drift, const Frequency& s, double x,
                  double level);

/// Shared spectral state for many Green evaluations at one frequency
/// (density tabulation over y reuses psi/phi at the fixed start x).
class GreenRow {
public:
    GreenRow(System system, const DriftSpec& drift, const Frequency& s, double x);
    Complex at(double y) const;
    Scaled at_scaled(double y) const;

private:
    System system_;
    DriftSpec drift_;
    double x_;
    PiecewiseSolution psi_, phi_;
    Scaled psi_x_, phi_x_, w_;
};

}  // namespace fpt
