#include "fpt/spectral.hpp"

namespace fpt {

namespace {

void reflected_domain_check(System system, double x) {
    if (system == System::reflected)
        check_arg(x >= 0.0, "reflected evaluation requires x >= 0");
}

}  // namespace

Scaled PiecewiseSolution::eval_scaled(double x) const {
    int n = 0;
    const SolTerm* t = branch(x, n);
    ScaledSum sum;
    for (int i = 0; i < n; ++i)
        sum.add(Scaled::from(t[i].coef, t[i].rate * x + t[i].shift));
    return sum.scaled();
}

Scaled PiecewiseSolution::deriv_scaled(double x) const {
    int n = 0;
    const SolTerm* t = branch(x, n);
    ScaledSum sum;
    for (int i = 0; i < n; ++i)
        sum.add(Scaled::from(t[i].coef * t[i].rate, t[i].rate * x + t[i].shift));
    return sum.scaled();
}

SpectralRoots spectral_roots(const DriftSpec& drift, const Frequency& s) {
    drift.validate();
    const Complex two_s = 2.0 * s.s();
    const Complex r1 = std::sqrt(Complex(drift.mu1 * drift.mu1, 0.0) + two_s);
    const Complex r2 = std::sqrt(Complex(drift.mu2 * drift.mu2, 0.0) + two_s);
    return {-drift.mu1 + r1, -drift.mu1 - r1, -drift.mu2 + r2, -drift.mu2 - r2};
}

SpectralData spectral_data(const DriftSpec& drift, const Frequency& s) {
    const SpectralRoots r = spectral_roots(drift, s);
    const double c = drift.c;
    SpectralData d;
    d.roots = r;

    const Complex d2 = r.l2p - r.l2m;  // = 2 sqrt(mu2^2 + 2s), never 0 for Re(s) > 0
    const Complex d1 = r.l1p - r.l1m;

    d.a1 = (r.l2p - r.l1p) / d2 * std::exp((r.l1p - r.l2m) * c);
    d.a2 = (r.l1p - r.l2m) / d2 * std::exp((r.l1p - r.l2p) * c);
    d.b1 = (r.l1p - r.l2m) / d1 * std::exp((r.l2m - r.l1m) * c);
    d.b2 = (r.l2m - r.l1m) / d1 * std::exp((r.l2m - r.l1p) * c);

    d.at1 = r.l1p * (r.l2p - r.l1m) / d2 * std::exp((r.l1m - r.l2m) * c) -
            r.l1m * (r.l2p - r.l1p) / d2 * std::exp((r.l1p - r.l2m) * c);
    d.at2 = r.l1p * (r.l1m - r.l2m) / d2 * std::exp((r.l1m - r.l2p) * c) -
            r.l1m * (r.l1p - r.l2m) / d2 * std::exp((r.l1p - r.l2p) * c);
    d.bt1 = d.b1;
    d.bt2 = d.b2;

    d.w_free = wronskian(System::free_bm, drift, s);
    d.w_refl = wronskian(System::reflected, drift, s);
    return d;
}

PiecewiseSolution fundamental_terms(System system, Direction dir, const DriftSpec& drift,
                                    const Frequency& s) {
    const SpectralRoots r = spectral_roots(drift, s);
    const double c = drift.c;
    const Complex d2 = r.l2p - r.l2m;
    const Complex d1 = r.l1p - r.l1m;
    PiecewiseSolution sol;
    sol.c = c;

    if (dir == Direction::decreasing) {
        // phi is the same display in both systems (integrable at +inf).
        sol.below[0] = {(r.l1p - r.l2m) / d1, r.l1m, (r.l2m - r.l1m) * c};
        sol.below[1] = {(r.l2m - r.l1m) / d1, r.l1p, (r.l2m - r.l1p) * c};
        sol.n_below = 2;
        sol.above[0] = {1.0, r.l2m, 0.0};
        sol.n_above = 1;
        return sol;
    }

    if (system == System::free_bm) {
        sol.below[0] = {1.0, r.l1p, 0.0};
        sol.n_below = 1;
        sol.above[0] = {(r.l2p - r.l1p) / d2, r.l2m, (r.l1p - r.l2m) * c};
        sol.above[1] = {(r.l1p - r.l2m) / d2, r.l2p, (r.l1p - r.l2p) * c};
        sol.n_above = 2;
    } else {
        // psi~ = l1p e^{l1m x} - l1m e^{l1p x} below c; Neumann at 0 built in.
        sol.below[0] = {r.l1p, r.l1m, 0.0};
        sol.below[1] = {-r.l1m, r.l1p, 0.0};
        sol.n_below = 2;
        sol.above[0] = {r.l1p * (r.l2p - r.l1m) / d2, r.l2m, (r.l1m - r.l2m) * c};
        sol.above[1] = {-r.l1m * (r.l2p - r.l1p) / d2, r.l2m, (r.l1p - r.l2m) * c};
        sol.above[2] = {r.l1p * (r.l1m - r.l2m) / d2, r.l2p, (r.l1m - r.l2p) * c};
        sol.above[3] = {-r.l1m * (r.l1p - r.l2m) / d2, r.l2p, (r.l1p - r.l2p) * c};
        sol.n_above = 4;
    }
    return sol;
}

Complex fundamental_solution(System system, Direction dir, const DriftSpec& drift,
                             const Frequency& s, double x) {
    reflected_domain_check(system, x);
    return fundamental_terms(system, dir, drift, s).eval(x);
}

Complex fundamental_solution_deriv(System system, Direction dir, const DriftSpec& drift,
                                   const Frequency& s, double x) {
    reflected_domain_check(system, x);
    return fundamental_terms(system, dir, drift, s).deriv(x);
}

Scaled wronskian_scaled(System system, const DriftSpec& drift, const Frequency& s) {
    const SpectralRoots r = spectral_roots(drift, s);
    const double c = drift.c;
    if (system == System::free_bm)
        return Scaled::from(r.l1p - r.l2m, (r.l2m - r.l1m) * c);

    ScaledSum sum;
    sum.add(Scaled::from(-r.l1p * (r.l2m - r.l1m), (r.l2m - r.l1p) * c));
    sum.add(Scaled::from(-r.l1m * (r.l1p - r.l2m), (r.l2m - r.l1m) * c));
    return sum.scaled();
}

Complex wronskian(System system, const DriftSpec& drift, const Frequency& s) {
    return wronskian_scaled(system, drift, s).value();
}

SpeedScale speed_scale_densities(System system, const DriftSpec& drift, double x) {
    drift.validate();
    reflected_domain_check(system, x);
    const SolTerm m = speed_factor(drift, x);
    const double speed = m.coef.real() * std::exp(m.rate.real() * x + m.shift.real());
    return {speed, 2.0 / speed};
}

SolTerm speed_factor(const DriftSpec& drift, double x) {
    if (x < drift.c) return {2.0, 2.0 * drift.mu1, 0.0};
    return {2.0, 2.0 * drift.mu2, 2.0 * (drift.mu1 - drift.mu2) * drift.c};
}

}  // namespace fpt
