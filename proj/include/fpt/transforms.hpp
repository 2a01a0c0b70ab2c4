#pragma once

#include "fpt/greens.hpp"
#include "fpt/model.hpp"

namespace fpt {

struct TwoSidedExit {
    double omega1;  // E_x[exp(-theta R_0) 1{R_0 < R_b}]
    double omega2;  // E_x[exp(-theta R_b) 1{R_b < R_0}]
};

/// Two-sided exit Laplace transforms of the free broken-drift diffusion from
/// [0, b], as psi/phi ratio formulas.
TwoSidedExit two_sided_exit_lt(const DriftSpec& drift, double theta, double b, double x);

/// Upward hitting transform of the reflected diffusion:
/// E_x[exp(-theta R_b)] = psi~_theta(x) / psi~_theta(b).
double reflected_hit_lt(const DriftSpec& drift, double theta, double b, double x);

/// g(theta; x) = E_x[exp(-theta T1) 1{X_{T1} >= c}] for T1 ~ Exp(lambda),
/// computed by exponential randomization as lambda * tail mass at theta+lambda.
double g_function(const DriftSpec& drift, double lambda, double theta, double x);

struct ReflectedG {
    double g0;  // E_x[exp(-theta T1) 1{X~_{T1} >= c}]
    double g1;  // (1/(2 lambda)) E_x[exp(-theta T1) p~(T1; x, 0)]
};

ReflectedG g_functions_reflected(const DriftSpec& drift, double lambda, double theta,
                                 double x);

struct PhiQuad {
    double phi1, phi2, phi3, phi4;
};

/// Closed-form transforms at the exponential time T1 (free system) with the
/// boundary-restart split phi3/phi4. Denominators lambda+theta+alpha*mu_i -
/// alpha^2/2 near zero are removable singularities and are evaluated by a
/// symmetric epsilon-offset Richardson limit.
PhiQuad phi_quadruple(const DriftSpec& drift, const BoundarySpec& boundary, double alpha,
                      double theta, double x);

PhiQuad phi_tilde_quadruple(const DriftSpec& drift, const BoundarySpec& boundary,
                            double alpha, double theta, double x);

/// K_h = E_x[exp(-theta T1) h(X_{T1}) 1{tau >= T1}] through the strong-Markov
/// decomposition. Pole-free; the canonical path for the joint transforms.
double killed_expectation(System system, const DriftSpec& drift, const BoundarySpec& boundary,
                          double theta, double x, const PiecewiseExpPayoff& payoff);

struct JointLtResult {
    double value;
    bool degenerate;  // query started on or beyond a boundary (tau = 0)
};

/// Joint transform E_x[exp(-alpha X_tau - theta tau)] against the
/// single-jump random boundary, assembled through killed_expectation with
/// the post-jump kernel M as a piecewise-exponential payoff. `reading`
/// applies to the reflected system only.
JointLtResult joint_lt(System system, const DriftSpec& drift, const BoundarySpec& boundary,
                       const TransformQuery& query, MVariant variant,
                       TildeReading reading = TildeReading::restarted);

/// Post-jump kernel M(theta, u, y) as a payoff on [0, b] (zero outside; the
/// killed expectation only sees X_{T1} in (0, b), so the truncation is exact
/// and keeps every resolvent integral convergent). Exposed for tests.
PiecewiseExpPayoff post_jump_payoff(System system, const DriftSpec& drift,
                                    const BoundarySpec& boundary, double alpha, double theta,
                                    double jump_y, MVariant variant);

}  // namespace fpt
