#include "fpt/transforms.hpp"

#include "fpt/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace fpt {

namespace {

Scaled diff(const Scaled& a, const Scaled& b) {
    ScaledSum s;
    s.add(a);
    s.add({-b.mant, b.logw});
    return s.scaled();
}

struct SolutionPair {
    PiecewiseSolution psi, phi;
};

SolutionPair solutions(System system, const DriftSpec& drift, double s) {
    const Frequency f(s);
    return {fundamental_terms(system, Direction::increasing, drift, f),
            fundamental_terms(system, Direction::decreasing, drift, f)};
}

// Appends coef*sol terms restricted to [lo, hi] as payoff segments split at c.
void append_solution_terms(PiecewiseExpPayoff& payoff, const PiecewiseSolution& sol,
                           Complex scale, double lo, double hi) {
    const double cut = std::clamp(sol.c, lo, hi);
    const auto add_branch = [&](double l, double h, double probe) {
        if (!(l < h)) return;
        int n = 0;
        const SolTerm* t = sol.branch(probe, n);
        // locate or create the segment [l, h]
        for (auto& seg : payoff.segments) {
            if (seg.lo == l && seg.hi == h) {
                for (int k = 0; k < n; ++k)
                    seg.terms.push_back({scale * t[k].coef * std::exp(t[k].shift), t[k].rate});
                return;
            }
        }
        PayoffSegment seg{l, h, {}};
        for (int k = 0; k < n; ++k)
            seg.terms.push_back({scale * t[k].coef * std::exp(t[k].shift), t[k].rate});
        payoff.segments.push_back(seg);
    };
    add_branch(lo, cut, 0.5 * (lo + cut));
    add_branch(cut, hi, 0.5 * (cut + hi));
}

double reflected_ratio(const DriftSpec& drift, double s, double x, double b) {
    const Frequency f(s);
    const PiecewiseSolution psi =
        fundamental_terms(System::reflected, Direction::increasing, drift, f);
    const Scaled num = psi.eval_scaled(x);
    const Scaled den = psi.eval_scaled(b);
    return (num / den).value().real();
}

}  // namespace

TwoSidedExit two_sided_exit_lt(const DriftSpec& drift, double theta, double b, double x) {
    check_arg(theta > 0.0, "two_sided_exit_lt: theta must be > 0");
    check_arg(b > 0.0, "two_sided_exit_lt: b must be > 0");
    check_arg(x >= 0.0 && x <= b, "two_sided_exit_lt: x must lie in [0, b]");

    const auto [psi, phi] = solutions(System::free_bm, drift, theta);
    const Scaled psi0 = psi.eval_scaled(0.0), psib = psi.eval_scaled(b),
                 psix = psi.eval_scaled(x);
    const Scaled phi0 = phi.eval_scaled(0.0), phib = phi.eval_scaled(b),
                 phix = phi.eval_scaled(x);

    const Scaled den = diff(phi0 * psib, psi0 * phib);
    const double omega1 = (diff(phix * psib, psix * phib) / den).value().real();
    const double omega2 = (diff(phix * psi0, psix * phi0) / den).value().real() * -1.0;
    return {omega1, omega2};
}

double reflected_hit_lt(const DriftSpec& drift, double theta, double b, double x) {
    check_arg(theta > 0.0, "reflected_hit_lt: theta must be > 0");
    check_arg(b > 0.0, "reflected_hit_lt: b must be > 0");
    check_arg(x >= 0.0 && x <= b, "reflected_hit_lt: x must lie in [0, b]");
    return reflected_ratio(drift, theta, x, b);
}

double g_function(const DriftSpec& drift, double lambda, double theta, double x) {
    check_arg(lambda > 0.0 && theta > 0.0, "g_function: rates must be > 0");
    return lambda *
           tail_mass(System::free_bm, drift, Frequency(lambda + theta), x, drift.c).real();
}

ReflectedG g_functions_reflected(const DriftSpec& drift, double lambda, double theta,
                                 double x) {
    check_arg(lambda > 0.0 && theta > 0.0, "g_functions_reflected: rates must be > 0");
    check_arg(x >= 0.0, "g_functions_reflected: x must be >= 0");
    const Frequency s(lambda + theta);
    const double g0 = lambda * tail_mass(System::reflected, drift, s, x, drift.c).real();
    const double g1 = 0.5 * green(System::reflected, drift, s, x, 0.0).real();
    return {g0, g1};
}

namespace {

// Raw closed-form Phi_1, Phi_2 (or tilde versions) at one alpha; throws
// nothing, caller must keep alpha away from the denominator roots.
struct PhiPair {
    double phi1, phi2;
};

PhiPair phi_pair_raw(System system, const DriftSpec& drift, double lambda, double theta,
                     double alpha, double z) {
    const double above = (z >= drift.c) ? 1.0 : 0.0;
    const double e_z = std::exp(-alpha * z);
    const double e_c = std::exp(-alpha * drift.c);
    const double den1 = lambda + theta + alpha * drift.mu1 - 0.5 * alpha * alpha;
    const double den2 = lambda + theta + alpha * drift.mu2 - 0.5 * alpha * alpha;

    if (system == System::free_bm) {
        const double g = g_function(drift, lambda, theta, z);
        const double phi1 =
            (lambda * (e_z * (1.0 - above) + e_c * above) - (lambda + theta) * e_c * g) / den1;
        const double phi2 = (lambda * (e_z - e_c) * above + (lambda + theta) * e_c * g) / den2;
        return {phi1, phi2};
    }
    const ReflectedG g = g_functions_reflected(drift, lambda, theta, z);
    const double phi1 = (lambda * (e_z * (1.0 - above) + e_c * above) -
                         (lambda + theta) * e_c * g.g0 - lambda * alpha * g.g1) /
                        den1;
    const double phi2 = (lambda * (e_z - e_c) * above + (lambda + theta) * e_c * g.g0) / den2;
    return {phi1, phi2};
}

// Denominator-proximity test: the singularities sit at alpha = mu_i +
// sqrt(mu_i^2 + 2(lambda+theta)).
bool near_pole(const DriftSpec& drift, double lambda, double theta, double alpha) {
    const double scale = lambda + theta + 1.0 + alpha * alpha;
    for (double mu : {drift.mu1, drift.mu2}) {
        const double den = lambda + theta + alpha * mu - 0.5 * alpha * alpha;
        if (std::abs(den) < 1e-8 * scale) return true;
    }
    return false;
}

// Symmetric epsilon-offset Richardson limit across the removable
// singularity; flags instability if the two extrapolation levels spread.
PhiPair phi_pair(System system, const DriftSpec& drift, double lambda, double theta,
                 double alpha, double z) {
    if (!near_pole(drift, lambda, theta, alpha))
        return phi_pair_raw(system, drift, lambda, theta, alpha, z);

    const double eps[3] = {1e-4, 5e-5, 2.5e-5};
    PhiPair avg[3];
    for (int i = 0; i < 3; ++i) {
        const PhiPair lo = phi_pair_raw(system, drift, lambda, theta, alpha - eps[i], z);
        const PhiPair hi = phi_pair_raw(system, drift, lambda, theta, alpha + eps[i], z);
        avg[i] = {0.5 * (lo.phi1 + hi.phi1), 0.5 * (lo.phi2 + hi.phi2)};
    }
    const auto rich = [](double a1, double a2, double a3, double& spread) {
        const double b12 = (4.0 * a2 - a1) / 3.0;
        const double b23 = (4.0 * a3 - a2) / 3.0;
        spread = std::abs(b23 - b12);
        return (16.0 * b23 - b12) / 15.0;
    };
    double s1 = 0.0, s2 = 0.0;
    PhiPair out;
    out.phi1 = rich(avg[0].phi1, avg[1].phi1, avg[2].phi1, s1);
    out.phi2 = rich(avg[0].phi2, avg[1].phi2, avg[2].phi2, s2);
    if (s1 > 1e-6 || s2 > 1e-6)
        throw std::runtime_error(
            "phi_quadruple: unstable removable-singularity extrapolation");
    return out;
}

}  // namespace

PhiQuad phi_quadruple(const DriftSpec& drift, const BoundarySpec& boundary, double alpha,
                      double theta, double x) {
    check_arg(alpha >= 0.0, "phi_quadruple: alpha must be >= 0");
    check_arg(theta > 0.0, "phi_quadruple: theta must be > 0");
    check_arg(x > 0.0 && x < boundary.b, "phi_quadruple: x must lie in (0, b)");
    boundary.validate();

    const double lambda = boundary.lambda;
    const PhiPair at_x = phi_pair(System::free_bm, drift, lambda, theta, alpha, x);
    const PhiPair at_0 = phi_pair(System::free_bm, drift, lambda, theta, alpha, 0.0);
    const PhiPair at_b = phi_pair(System::free_bm, drift, lambda, theta, alpha, boundary.b);
    const TwoSidedExit w = two_sided_exit_lt(drift, lambda + theta, boundary.b, x);

    return {at_x.phi1, at_x.phi2, at_0.phi1 * w.omega1 + at_b.phi1 * w.omega2,
            at_0.phi2 * w.omega1 + at_b.phi2 * w.omega2};
}

PhiQuad phi_tilde_quadruple(const DriftSpec& drift, const BoundarySpec& boundary,
                            double alpha, double theta, double x) {
    check_arg(alpha >= 0.0, "phi_tilde_quadruple: alpha must be >= 0");
    check_arg(theta > 0.0, "phi_tilde_quadruple: theta must be > 0");
    check_arg(x >= 0.0 && x < boundary.b, "phi_tilde_quadruple: x must lie in [0, b)");
    boundary.validate();

    const double lambda = boundary.lambda;
    const PhiPair at_x = phi_pair(System::reflected, drift, lambda, theta, alpha, x);
    const PhiPair at_b = phi_pair(System::reflected, drift, lambda, theta, alpha, boundary.b);
    const double ratio = reflected_hit_lt(drift, lambda + theta, boundary.b, x);

    return {at_x.phi1, at_x.phi2, at_b.phi1 * ratio, at_b.phi2 * ratio};
}

double killed_expectation(System system, const DriftSpec& drift, const BoundarySpec& boundary,
                          double theta, double x, const PiecewiseExpPayoff& payoff) {
    check_arg(theta > 0.0, "killed_expectation: theta must be > 0");
    check_arg(x >= 0.0 && x <= boundary.b, "killed_expectation: x must lie in [0, b]");
    boundary.validate();

    const double lambda = boundary.lambda;
    const Frequency s(lambda + theta);
    const auto phi_h = [&](double z) {
        return lambda * resolvent_integral(system, drift, s, z, payoff).real();
    };

    if (system == System::free_bm) {
        const TwoSidedExit w = two_sided_exit_lt(drift, lambda + theta, boundary.b, x);
        return phi_h(x) - phi_h(0.0) * w.omega1 - phi_h(boundary.b) * w.omega2;
    }
    const double ratio = reflected_hit_lt(drift, lambda + theta, boundary.b, x);
    return phi_h(x) - phi_h(boundary.b) * ratio;
}

PiecewiseExpPayoff post_jump_payoff(System system, const DriftSpec& drift,
                                    const BoundarySpec& boundary, double alpha, double theta,
                                    double jump_y, MVariant variant) {
    check_arg(jump_y > 0.0, "post_jump_payoff: jump must be positive");
    const double b = boundary.b;
    const double big_b = b + jump_y;
    const double r = (variant == MVariant::theta_only) ? theta : theta + boundary.lambda;
    const double e_ab = std::exp(-alpha * big_b);

    PiecewiseExpPayoff payoff;
    if (system == System::free_bm) {
        // M(u) = [phi(u)(psi(B) - e^{-aB} psi(0)) - psi(u)(phi(B) - e^{-aB} phi(0))] / D
        const auto [psi, phi] = solutions(System::free_bm, drift, r);
        const Scaled psi0 = psi.eval_scaled(0.0), psiB = psi.eval_scaled(big_b);
        const Scaled phi0 = phi.eval_scaled(0.0), phiB = phi.eval_scaled(big_b);
        const Scaled den = diff(phi0 * psiB, psi0 * phiB);
        const Complex cu = (diff(psiB, psi0 * e_ab) / den).value();
        const Complex cv = (diff(phiB, phi0 * e_ab) / den).value();
        append_solution_terms(payoff, phi, cu, 0.0, b);
        append_solution_terms(payoff, psi, -cv, 0.0, b);
    } else {
        // M~(u) = e^{-aB} psi~_r(u) / psi~_r(B)
        const Frequency f(r);
        const PiecewiseSolution psi =
            fundamental_terms(System::reflected, Direction::increasing, drift, f);
        const Scaled psiB = psi.eval_scaled(big_b);
        const Complex scale = Scaled{Complex(e_ab, 0.0) / psiB.mant, -psiB.logw}.value();
        append_solution_terms(payoff, psi, scale, 0.0, b);
    }
    payoff.validate();
    return payoff;
}

JointLtResult joint_lt(System system, const DriftSpec& drift, const BoundarySpec& boundary,
                       const TransformQuery& query, MVariant variant, TildeReading reading) {
    query.validate();
    boundary.validate();
    const double alpha = query.alpha, theta = query.theta, x = query.x;
    const double b = boundary.b, lambda = boundary.lambda;

    if (system == System::reflected)
        check_arg(x >= 0.0, "joint_lt: reflected start must be >= 0");
    if (x >= b) return {std::exp(-alpha * b), true};
    if (system == System::free_bm && x <= 0.0) return {1.0, true};

    // contribution of one jump value y with weight w
    const auto jump_term = [&](double y, double w) {
        if (system == System::free_bm || reading == TildeReading::restarted) {
            const PiecewiseExpPayoff h =
                post_jump_payoff(system, drift, boundary, alpha, theta, y, variant);
            return w * killed_expectation(system, drift, boundary, theta, x, h);
        }
        // literal reading: ratio at the fixed start x, frequency theta,
        // pulled outside the killed expectation of 1.
        const double ratio_theta = reflected_ratio(drift, theta, x, b + y);
        const double k1 = (lambda / (lambda + theta)) *
                          (1.0 - reflected_hit_lt(drift, lambda + theta, b, x));
        return w * std::exp(-alpha * (b + y)) * ratio_theta * k1;
    };

    double base;
    if (system == System::free_bm) {
        const TwoSidedExit w0 = two_sided_exit_lt(drift, lambda + theta, b, x);
        base = w0.omega1 + std::exp(-alpha * b) * w0.omega2;
    } else {
        base = std::exp(-alpha * b) * reflected_hit_lt(drift, lambda + theta, b, x);
    }

    const JumpLaw& law = boundary.jump;
    double total = base;
    if (law.is_discrete()) {
        for (const auto& atom : law.atom_list()) total += jump_term(atom.y, atom.w);
    } else {
        // Gauss-Legendre over the continuous law, nodes doubled to 1e-8
        // stability.
        int n = std::max(law.quadrature_nodes(), 4);
        double prev = 0.0;
        bool have_prev = false;
        for (; n <= 1024; n *= 2) {
            double acc = 0.0;
            const auto nodes = gauss_legendre_nodes(n, law.support_lo(), law.support_hi());
            for (const auto& [y, wq] : nodes) acc += jump_term(y, wq * law.pdf()(y));
            if (have_prev && std::abs(acc - prev) < 1e-8) {
                prev = acc;
                break;
            }
            prev = acc;
            have_prev = true;
            if (n == 1024)
                throw std::runtime_error("joint_lt: jump-law quadrature did not converge");
        }
        total += prev;
    }
    return {total, false};
}

}  // namespace fpt
