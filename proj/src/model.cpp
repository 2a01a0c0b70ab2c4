#include "fpt/model.hpp"

#include "fpt/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace fpt {

JumpLaw JumpLaw::atoms(std::vector<Atom> atoms) {
    check_arg(!atoms.empty(), "JumpLaw: atom list must not be empty");
    double total = 0.0;
    for (const auto& a : atoms) {
        check_arg(std::isfinite(a.y) && a.y > 0.0, "JumpLaw: atoms must be strictly positive");
        check_arg(a.w >= 0.0, "JumpLaw: weights must be nonnegative");
        total += a.w;
    }
    check_arg(std::abs(total - 1.0) <= 1e-12, "JumpLaw: weights must sum to 1");
    JumpLaw law;
    law.atoms_ = std::move(atoms);
    return law;
}

JumpLaw JumpLaw::density(std::function<double(double)> pdf, double lo, double hi,
                         int quadrature_nodes) {
    check_arg(std::isfinite(lo) && std::isfinite(hi) && 0.0 < lo && lo < hi,
              "JumpLaw: continuous support must be bounded and positive");
    check_arg(quadrature_nodes >= 4, "JumpLaw: need at least 4 quadrature nodes");
    JumpLaw law;
    law.pdf_ = std::move(pdf);
    law.lo_ = lo;
    law.hi_ = hi;
    law.nodes_ = quadrature_nodes;

    // tabulated CDF for inverse sampling
    const int grid = 2048;
    law.cdf_grid_.resize(grid + 1);
    law.cdf_val_.resize(grid + 1);
    const double h = (hi - lo) / grid;
    double acc = 0.0;
    law.cdf_grid_[0] = lo;
    law.cdf_val_[0] = 0.0;
    double f_prev = law.pdf_(lo);
    for (int i = 1; i <= grid; ++i) {
        const double y = lo + i * h;
        const double f = law.pdf_(y);
        acc += 0.5 * (f_prev + f) * h;
        f_prev = f;
        law.cdf_grid_[i] = y;
        law.cdf_val_[i] = acc;
    }
    check_arg(std::abs(acc - 1.0) <= 1e-6, "JumpLaw: density must integrate to 1 on support");
    for (auto& v : law.cdf_val_) v /= acc;
    return law;
}

double JumpLaw::sample(double u) const {
    if (is_discrete()) {
        double acc = 0.0;
        for (const auto& a : atoms_) {
            acc += a.w;
            if (u < acc) return a.y;
        }
        return atoms_.back().y;
    }
    const auto it = std::lower_bound(cdf_val_.begin(), cdf_val_.end(), u);
    if (it == cdf_val_.begin()) return cdf_grid_.front();
    if (it == cdf_val_.end()) return cdf_grid_.back();
    const size_t i = size_t(it - cdf_val_.begin());
    const double v0 = cdf_val_[i - 1], v1 = cdf_val_[i];
    const double frac = (v1 > v0) ? (u - v0) / (v1 - v0) : 0.0;
    return cdf_grid_[i - 1] + frac * (cdf_grid_[i] - cdf_grid_[i - 1]);
}

}  // namespace fpt
