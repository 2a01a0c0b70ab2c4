#include "fpt/greens.hpp"

#include <algorithm>
#include <limits>

namespace fpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConvergenceMargin = 1e-12;

void domain_check(System system, double v, const char* what) {
    if (system == System::reflected)
        check_arg(v >= 0.0, what);
}

// G_s(x, .) restricted to a y-interval on one side of both x and c is a sum
// of exponential terms coef * exp(rate * y); coef carried as Scaled.
struct GTerm {
    Scaled coef;
    Complex rate;
};

struct GTermList {
    GTerm terms[8];
    int n = 0;
    void add(const Scaled& coef, Complex rate) {
        terms[n].coef = coef;
        terms[n].rate = rate;
        ++n;
    }
};

}  // namespace

void PiecewiseExpPayoff::validate() const {
    double prev_hi = -kInf;
    for (const auto& seg : segments) {
        check_arg(seg.lo < seg.hi, "payoff segment must have lo < hi");
        check_arg(seg.lo >= prev_hi, "payoff segments must be ordered and disjoint");
        prev_hi = seg.hi;
    }
}

PiecewiseExpPayoff PiecewiseExpPayoff::indicator(double lo, double hi) {
    return {{{lo, hi, {{Complex(1.0, 0.0), Complex(0.0, 0.0)}}}}};
}

PiecewiseExpPayoff PiecewiseExpPayoff::exponential(Complex coeff, Complex rate, double lo,
                                                   double hi) {
    return {{{lo, hi, {{coeff, rate}}}}};
}

GreenRow::GreenRow(System system, const DriftSpec& drift, const Frequency& s, double x)
    : system_(system), drift_(drift), x_(x) {
    domain_check(system, x, "reflected Green function requires x >= 0");
    const Direction inc = Direction::increasing;
    const Direction dec = Direction::decreasing;
    psi_ = fundamental_terms(system, inc, drift, s);
    phi_ = fundamental_terms(system, dec, drift, s);
    psi_x_ = psi_.eval_scaled(x);
    phi_x_ = phi_.eval_scaled(x);
    w_ = wronskian_scaled(system, drift, s);
}

Scaled GreenRow::at_scaled(double y) const {
    domain_check(system_, y, "reflected Green function requires y >= 0");
    const SolTerm m = speed_factor(drift_, y);
    const Scaled mval = Scaled::from(m.coef, m.rate * y + m.shift);
    const Scaled lower = (y < x_) ? psi_.eval_scaled(y) : psi_x_;
    const Scaled upper = (y < x_) ? phi_x_ : phi_.eval_scaled(y);
    return mval * lower * upper / w_;
}

Complex GreenRow::at(double y) const { return at_scaled(y).value(); }

Complex green(System system, const DriftSpec& drift, const Frequency& s, double x, double y) {
    return GreenRow(system, drift, s, x).at(y);
}

Complex resolvent_integral(System system, const DriftSpec& drift, const Frequency& s,
                           double x, const PiecewiseExpPayoff& payoff) {
    payoff.validate();
    domain_check(system, x, "reflected resolvent requires x >= 0");

    const PiecewiseSolution psi = fundamental_terms(system, Direction::increasing, drift, s);
    const PiecewiseSolution phi = fundamental_terms(system, Direction::decreasing, drift, s);
    const Scaled psi_x = psi.eval_scaled(x);
    const Scaled phi_x = phi.eval_scaled(x);
    const Scaled w = wronskian_scaled(system, drift, s);

    const double domain_lo = (system == System::reflected) ? 0.0 : -kInf;
    ScaledSum total;

    for (const auto& seg : payoff.segments) {
        const double lo = std::max(seg.lo, domain_lo);
        const double hi = seg.hi;
        if (!(lo < hi)) continue;

        // subsegment boundaries at the threshold and at the start point
        double cuts[4] = {lo, hi, hi, hi};
        int ncut = 2;
        for (double p : {drift.c, x}) {
            if (p > lo && p < hi) cuts[ncut++] = p;
        }
        std::sort(cuts, cuts + ncut);

        for (int i = 0; i + 1 < ncut; ++i) {
            const double l = cuts[i];
            const double u = cuts[i + 1];
            if (!(l < u)) continue;
            const double probe =
                std::isinf(l) ? (std::isinf(u) ? drift.c - 1.0 : u - 1.0)
                              : (std::isinf(u) ? l + 1.0 : 0.5 * (l + u));

            // G(x, .) term list on this piece
            GTermList g;
            const SolTerm m = speed_factor(drift, probe);
            const Scaled mcoef = Scaled::from(m.coef, m.shift);
            if (probe < x) {
                int n = 0;
                const SolTerm* t = psi.branch(probe, n);
                for (int k = 0; k < n; ++k)
                    g.add(Scaled::from(t[k].coef, t[k].shift) * phi_x * mcoef / w,
                          t[k].rate + m.rate);
            } else {
                int n = 0;
                const SolTerm* t = phi.branch(probe, n);
                for (int k = 0; k < n; ++k)
                    g.add(Scaled::from(t[k].coef, t[k].shift) * psi_x * mcoef / w,
                          t[k].rate + m.rate);
            }

            for (const auto& pt : seg.terms) {
                for (int k = 0; k < g.n; ++k) {
                    const Complex q = g.terms[k].rate + pt.rate;
                    Scaled integral;
                    if (std::isinf(u)) {
                        if (!(q.real() < -kConvergenceMargin))
                            throw std::domain_error(
                                "resolvent_integral: divergent term on unbounded upper "
                                "segment");
                        integral = exp_integral_upper(q, l);
                    } else if (std::isinf(l)) {
                        if (!(q.real() > kConvergenceMargin))
                            throw std::domain_error(
                                "resolvent_integral: divergent term on unbounded lower "
                                "segment");
                        integral = exp_integral_lower(q, u);
                    } else {
                        integral = exp_integral(q, l, u);
                    }
                    total.add(g.terms[k].coef * pt.coeff * integral);
                }
            }
        }
    }
    return total.value();
}

Complex tail_mass(System system, const DriftSpec& drift, const Frequency& s, double x,
                  double level) {
    const double lo = (system == System::reflected) ? std::max(level, 0.0) : level;
    return resolvent_integral(system, drift, s, x, PiecewiseExpPayoff::indicator(lo, kInf));
}

}  // namespace fpt
