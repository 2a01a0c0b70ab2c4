#include "fpt/rng.hpp"

namespace fpt::zigg {

namespace {

Tables build() {
    Tables t;
    const double m1 = 2147483648.0;
    double dn = kTailR, tn = kTailR;
    const double vn = 9.91256303526217e-3;

    double q = vn / std::exp(-0.5 * dn * dn);
    t.kn[0] = std::uint32_t((dn / q) * m1);
    t.kn[1] = 0;
    t.wn[0] = q / m1;
    t.wn[127] = dn / m1;
    t.fn[0] = 1.0;
    t.fn[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
        dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
        t.kn[i + 1] = std::uint32_t((dn / tn) * m1);
        tn = dn;
        t.fn[i] = std::exp(-0.5 * dn * dn);
        t.wn[i] = dn / m1;
    }
    return t;
}

}  // namespace

const Tables& tables() {
    static const Tables t = build();
    return t;
}

}  // namespace fpt::zigg
