#include "fpt/inversion.hpp"

#include <algorithm>
#include <cmath>

namespace fpt {

namespace {

constexpr double kLn10 = 2.302585092994046;
constexpr double kLn2 = 0.6931471805599453;

// Linear-in-F representation of one inversion rule at fixed t:
// f(t) ~ pref * sum_k coef[k] * Re F(node[k]).
struct Quadrature {
    std::vector<Complex> nodes;
    std::vector<double> coef;
    double pref;
};

Quadrature euler_scheme(double t, const InversionParams& p) {
    const int M = std::clamp(p.terms / 4, 6, 15);
    const int N = std::max(p.terms - M, 2);

    double a;
    if (p.abscissa_shift > 0.0) {
        a = p.abscissa_shift;
    } else {
        const double digits = std::clamp(-std::log10(p.target_tol) + 3.0, 6.0, 15.0);
        a = digits * kLn10 / (2.0 * t);
    }

    Quadrature q;
    q.pref = std::exp(a * t) / t;
    q.nodes.resize(N + M + 1);
    q.coef.resize(N + M + 1);

    const double pi_t = M_PI / t;
    for (int k = 0; k <= N + M; ++k) q.nodes[k] = Complex(a, k * pi_t);

    // binomial tail weights of the Euler transform
    std::vector<double> binom(M + 1);
    binom[0] = std::pow(0.5, M);
    for (int i = 1; i <= M; ++i) binom[i] = binom[i - 1] * double(M - i + 1) / double(i);
    std::vector<double> tail(M + 1, 0.0);
    tail[M] = binom[M];
    for (int i = M - 1; i >= 0; --i) tail[i] = tail[i + 1] + binom[i];

    q.coef[0] = 0.5;
    for (int k = 1; k <= N + M; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        q.coef[k] = (k <= N) ? sign : sign * tail[k - N];
    }
    return q;
}

Quadrature gaver_stehfest_scheme(double t, const InversionParams& p) {
    const int n = p.terms;
    const int nh = n / 2;

    std::vector<long double> fact(n + 1, 1.0L);
    for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;

    Quadrature q;
    q.pref = kLn2 / t;
    q.nodes.resize(n);
    q.coef.resize(n);
    for (int k = 1; k <= n; ++k) {
        q.nodes[k - 1] = Complex(k * kLn2 / t, 0.0);
        long double sum = 0.0L;
        const int j_lo = (k + 1) / 2;
        const int j_hi = std::min(k, nh);
        for (int j = j_lo; j <= j_hi; ++j) {
            long double term = powl((long double)j, nh) * fact[2 * j];
            term /= fact[nh - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k];
            sum += term;
        }
        const long double sign = ((nh + k) % 2 == 0) ? 1.0L : -1.0L;
        q.coef[k - 1] = (double)(sign * sum);
    }
    return q;
}

Quadrature make_scheme(double t, const InversionParams& p) {
    return p.method == InvMethod::euler_summation ? euler_scheme(t, p)
                                                  : gaver_stehfest_scheme(t, p);
}

double apply(const Quadrature& q, const LaplaceFn& F) {
    double sum = 0.0;
    for (size_t k = 0; k < q.nodes.size(); ++k) sum += q.coef[k] * F(q.nodes[k]).real();
    return q.pref * sum;
}

DensityValue clamp_density(double raw) {
    if (raw < 0.0) {
        if (raw < -kDensityClampTol)
            throw std::runtime_error(
                "transition_density: inversion produced a negative value beyond the clamp "
                "tolerance");
        return {0.0, raw, true};
    }
    return {raw, raw, false};
}

}  // namespace

double invert_laplace(const LaplaceFn& F, double t, const InversionParams& params) {
    params.validate();
    check_arg(t > 0.0, "invert_laplace: t must be > 0");
    return apply(make_scheme(t, params), F);
}

double invert_laplace_checked(const LaplaceFn& F, double t, const InversionParams& params) {
    params.validate();
    check_arg(t > 0.0, "invert_laplace: t must be > 0");
    InversionParams pe = params;
    pe.method = InvMethod::euler_summation;
    pe.terms = std::max(params.terms, 10);
    InversionParams pg = params;
    pg.method = InvMethod::gaver_stehfest;
    pg.terms = 16;

    const double fe = apply(euler_scheme(t, pe), F);
    const double fg = apply(gaver_stehfest_scheme(t, pg), F);
    const double tol = std::max(params.cross_tol, params.cross_tol * std::abs(fe));
    if (std::abs(fe - fg) > tol)
        throw std::runtime_error("invert_laplace_checked: euler-summation and "
                                 "gaver-stehfest disagree beyond tolerance");
    return fe;
}

std::vector<DensityValue> transition_density_table(System system, const DriftSpec& drift,
                                                   double t, double x,
                                                   const std::vector<double>& ys,
                                                   const InversionParams& params) {
    params.validate();
    check_arg(t > 0.0, "transition_density: t must be > 0");
    const Quadrature q = make_scheme(t, params);

    std::vector<GreenRow> rows;
    rows.reserve(q.nodes.size());
    for (const Complex& s : q.nodes) rows.emplace_back(system, drift, Frequency(s), x);

    std::vector<DensityValue> out;
    out.reserve(ys.size());
    for (double y : ys) {
        double sum = 0.0;
        for (size_t k = 0; k < rows.size(); ++k) sum += q.coef[k] * rows[k].at(y).real();
        out.push_back(clamp_density(q.pref * sum));
    }
    return out;
}

DensityValue transition_density_info(System system, const DriftSpec& drift, double t,
                                     double x, double y, const InversionParams& params) {
    return transition_density_table(system, drift, t, x, {y}, params)[0];
}

double transition_density(System system, const DriftSpec& drift, double t, double x,
                          double y, const InversionParams& params) {
    return transition_density_info(system, drift, t, x, y, params).value;
}

double tail_probability(System system, const DriftSpec& drift, double t, double x,
                        double level, const InversionParams& params) {
    const auto F = [&](Complex s) {
        return tail_mass(system, drift, Frequency(s), x, level);
    };
    return invert_laplace(F, t, params);
}

}  // namespace fpt
