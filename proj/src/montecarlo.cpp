#include "fpt/montecarlo.hpp"

#include "fpt/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace fpt {

namespace {

constexpr std::uint64_t kChunk = 8192;
// exp(-40) ~ 4e-18: skip the bridge draw when a crossing is this unlikely
constexpr double kBridgeExpCut = 40.0;

template <class Fn>
void run_chunks(std::uint64_t n_items, int threads, Fn&& fn) {
    const std::uint64_t n_chunks = (n_items + kChunk - 1) / kChunk;
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= n_chunks) break;
            fn(i, i * kChunk, std::min(n_items, (i + 1) * kChunk));
        }
    };
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int i = 0; i + 1 < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

struct Accum {
    double sum = 0.0;
    double sumsq = 0.0;
    std::uint64_t n = 0;
    std::uint64_t censored = 0;

    void add(double v) {
        sum += v;
        sumsq += v * v;
        ++n;
    }
};

MCEstimate finalize(const Accum& a) {
    MCEstimate e;
    e.n = a.n;
    if (a.n == 0) return e;
    e.mean = a.sum / double(a.n);
    e.censored_fraction = double(a.censored) / double(a.n);
    if (a.n > 1) {
        const double var = std::max(0.0, (a.sumsq - a.sum * a.sum / double(a.n)) /
                                             double(a.n - 1));
        e.std_err = std::sqrt(var / double(a.n));
    }
    return e;
}

template <bool Reflected>
HitSample run_hitting_path(const DriftSpec& drift, double b, double lambda,
                           const JumpLaw& jump, double x0, const SimConfig& cfg,
                           PathRng& rng) {
    const double T1 = rng.exponential(lambda);
    const double Y = jump.sample(rng.uniform());
    const double dt = cfg.dt;
    const double sdt = std::sqrt(dt);

    double level = b;
    bool jumped = false;
    double t = 0.0;
    double x = x0;

    if constexpr (!Reflected) {
        if (x <= 0.0) return {0.0, 0.0, HitKind::lower, false};
    }
    if (x >= level) return {0.0, level, HitKind::upper, false};

    while (t < cfg.t_max) {
        double target = t + dt;
        if (!jumped && T1 < target) target = T1;
        if (target > cfg.t_max) target = cfg.t_max;
        const double h = target - t;
        const double sh = (h == dt) ? sdt : std::sqrt(h);
        const bool at_T1 = !jumped && target == T1;

        const double mu = (x < drift.c) ? drift.mu1 : drift.mu2;
        double xn = x + mu * h + sh * rng.normal();

        if constexpr (Reflected) {
            if (xn < 0.0) xn = 0.0;
        } else {
            if (xn <= 0.0) {
                const double frac = x / (x - xn);
                return {t + frac * h, 0.0, HitKind::lower, jumped};
            }
        }
        if (xn >= level) {
            const double frac = (level - x) / (xn - x);
            return {t + frac * h, level, jumped ? HitKind::boundary_jump : HitKind::upper,
                    jumped};
        }
        if (cfg.bridge_correction) {
            if constexpr (!Reflected) {
                const double e_lo = 2.0 * x * xn / h;
                if (e_lo < kBridgeExpCut && rng.uniform() < std::exp(-e_lo))
                    return {t + 0.5 * h, 0.0, HitKind::lower, jumped};
            }
            const double e_up = 2.0 * (level - x) * (level - xn) / h;
            if (e_up < kBridgeExpCut && rng.uniform() < std::exp(-e_up))
                return {t + 0.5 * h, level, jumped ? HitKind::boundary_jump : HitKind::upper,
                        jumped};
        }
        x = xn;
        t = target;
        if (at_T1) {
            level = b + Y;
            jumped = true;
        }
    }
    return {cfg.t_max, x, HitKind::censored, jumped};
}

HitSample run_hitting_path(System system, const DriftSpec& drift, const BoundarySpec& bd,
                           double x0, const SimConfig& cfg, PathRng& rng) {
    return system == System::reflected
               ? run_hitting_path<true>(drift, bd.b, bd.lambda, bd.jump, x0, cfg, rng)
               : run_hitting_path<false>(drift, bd.b, bd.lambda, bd.jump, x0, cfg, rng);
}

struct T1Outcome {
    double x_t1;
    double t1;
    bool hit_before;
    bool censored;
};

template <bool Reflected>
T1Outcome run_to_t1(const DriftSpec& drift, double b, double lambda, double x0,
                    const SimConfig& cfg, PathRng& rng) {
    const double T1 = rng.exponential(lambda);
    if (T1 > cfg.t_max) return {0.0, T1, false, true};

    const double dt = cfg.dt;
    const double sdt = std::sqrt(dt);
    double t = 0.0;
    double x = x0;
    bool hit = false;
    if constexpr (!Reflected) {
        if (x <= 0.0) hit = true;
    }
    if (x >= b) hit = true;

    while (t < T1) {
        double target = t + dt;
        if (target > T1) target = T1;
        const double h = target - t;
        const double sh = (h == dt) ? sdt : std::sqrt(h);

        const double mu = (x < drift.c) ? drift.mu1 : drift.mu2;
        double xn = x + mu * h + sh * rng.normal();
        if constexpr (Reflected) {
            if (xn < 0.0) xn = 0.0;
        }
        if (!hit) {
            if constexpr (!Reflected) {
                if (xn <= 0.0) hit = true;
                if (!hit && cfg.bridge_correction) {
                    const double e_lo = 2.0 * x * xn / h;
                    if (e_lo < kBridgeExpCut && rng.uniform() < std::exp(-e_lo)) hit = true;
                }
            }
            if (!hit && xn >= b) hit = true;
            if (!hit && cfg.bridge_correction) {
                const double e_up = 2.0 * (b - x) * (b - xn) / h;
                if (e_up < kBridgeExpCut && rng.uniform() < std::exp(-e_up)) hit = true;
            }
        }
        x = xn;
        t = target;
    }
    return {x, T1, hit, false};
}

template <bool Reflected>
double run_density_path(const DriftSpec& drift, double t_end, double x0,
                        const SimConfig& cfg, PathRng& rng) {
    const double dt = cfg.dt;
    const double sdt = std::sqrt(dt);
    double t = 0.0;
    double x = x0;
    while (t < t_end) {
        double target = t + dt;
        if (target > t_end) target = t_end;
        const double h = target - t;
        const double sh = (h == dt) ? sdt : std::sqrt(h);
        const double mu = (x < drift.c) ? drift.mu1 : drift.mu2;
        x += mu * h + sh * rng.normal();
        if constexpr (Reflected) {
            if (x < 0.0) x = 0.0;
        }
        t = target;
    }
    return x;
}

}  // namespace

int resolve_threads(int requested) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("FPT_THREADS")) n = std::atoi(env);
    }
    if (n <= 0) n = int(std::thread::hardware_concurrency());
    return std::max(1, n);
}

std::vector<HitSample> simulate_hitting(System system, const DriftSpec& drift,
                                        const BoundarySpec& boundary, double x0,
                                        const SimConfig& config) {
    config.validate();
    drift.validate();
    boundary.validate();
    if (system == System::reflected)
        check_arg(x0 >= 0.0, "simulate_hitting: reflected start must be >= 0");

    std::vector<HitSample> out(config.n_paths);
    run_chunks(config.n_paths, resolve_threads(config.threads),
               [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
                   for (std::uint64_t i = begin; i < end; ++i) {
                       PathRng rng(config.seed, i);
                       out[i] = run_hitting_path(system, drift, boundary, x0, config, rng);
                   }
               });
    return out;
}

std::vector<MCEstimate> estimate_joint_lt_grid(
    System system, const DriftSpec& drift, const BoundarySpec& boundary, double x0,
    const std::vector<std::pair<double, double>>& alpha_theta, const SimConfig& config) {
    config.validate();
    drift.validate();
    boundary.validate();
    const size_t n_pairs = alpha_theta.size();
    const std::uint64_t n_chunks = (config.n_paths + kChunk - 1) / kChunk;
    std::vector<Accum> slots(n_chunks * n_pairs);

    run_chunks(config.n_paths, resolve_threads(config.threads),
               [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                   Accum* acc = slots.data() + chunk * n_pairs;
                   for (std::uint64_t i = begin; i < end; ++i) {
                       PathRng rng(config.seed, i);
                       const HitSample s =
                           run_hitting_path(system, drift, boundary, x0, config, rng);
                       for (size_t p = 0; p < n_pairs; ++p) {
                           const auto [alpha, theta] = alpha_theta[p];
                           double v;
                           if (s.kind == HitKind::censored) {
                               v = std::exp(-theta * config.t_max);
                               ++acc[p].censored;
                           } else {
                               v = std::exp(-alpha * s.x_tau - theta * s.tau);
                           }
                           acc[p].add(v);
                       }
                   }
               });

    std::vector<MCEstimate> out(n_pairs);
    for (size_t p = 0; p < n_pairs; ++p) {
        Accum total;
        for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) {
            const Accum& a = slots[chunk * n_pairs + p];
            total.sum += a.sum;
            total.sumsq += a.sumsq;
            total.n += a.n;
            total.censored += a.censored;
        }
        out[p] = finalize(total);
    }
    return out;
}

MCEstimate estimate_joint_lt(System system, const DriftSpec& drift,
                             const BoundarySpec& boundary, const TransformQuery& query,
                             const SimConfig& config) {
    query.validate();
    return estimate_joint_lt_grid(system, drift, boundary, query.x,
                                  {{query.alpha, query.theta}}, config)[0];
}

PhiQuadEstimate estimate_phi_quadruple(System system, const DriftSpec& drift,
                                       const BoundarySpec& boundary, double alpha,
                                       double theta, double x0, const SimConfig& config) {
    config.validate();
    drift.validate();
    boundary.validate();
    check_arg(theta > 0.0, "estimate_phi_quadruple: theta must be > 0");

    const std::uint64_t n_chunks = (config.n_paths + kChunk - 1) / kChunk;
    std::vector<Accum> slots(n_chunks * 4);
    const bool reflected = system == System::reflected;

    run_chunks(config.n_paths, resolve_threads(config.threads),
               [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                   Accum* acc = slots.data() + chunk * 4;
                   for (std::uint64_t i = begin; i < end; ++i) {
                       PathRng rng(config.seed, i);
                       const T1Outcome o =
                           reflected ? run_to_t1<true>(drift, boundary.b, boundary.lambda,
                                                       x0, config, rng)
                                     : run_to_t1<false>(drift, boundary.b, boundary.lambda,
                                                        x0, config, rng);
                       double w = 0.0, below = 0.0, hit = 0.0;
                       if (o.censored) {
                           for (int q = 0; q < 4; ++q) ++acc[q].censored;
                       } else {
                           w = std::exp(-alpha * o.x_t1 - theta * o.t1);
                           below = (o.x_t1 < drift.c) ? 1.0 : 0.0;
                           hit = o.hit_before ? 1.0 : 0.0;
                       }
                       acc[0].add(w * below);
                       acc[1].add(w * (1.0 - below));
                       acc[2].add(w * below * hit);
                       acc[3].add(w * (1.0 - below) * hit);
                   }
               });

    PhiQuadEstimate out;
    MCEstimate* fields[4] = {&out.phi1, &out.phi2, &out.phi3, &out.phi4};
    for (int q = 0; q < 4; ++q) {
        Accum total;
        for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) {
            const Accum& a = slots[chunk * 4 + q];
            total.sum += a.sum;
            total.sumsq += a.sumsq;
            total.n += a.n;
            total.censored += a.censored;
        }
        *fields[q] = finalize(total);
    }
    return out;
}

Histogram density_histogram(System system, const DriftSpec& drift, double t, double x0,
                            double lo, double hi, int bins, const SimConfig& config) {
    config.validate();
    drift.validate();
    check_arg(t > 0.0, "density_histogram: t must be > 0");
    check_arg(bins > 0 && lo < hi, "density_histogram: invalid bin layout");
    if (system == System::reflected)
        check_arg(x0 >= 0.0, "density_histogram: reflected start must be >= 0");

    const std::uint64_t n_chunks = (config.n_paths + kChunk - 1) / kChunk;
    std::vector<std::uint64_t> slots(n_chunks * (bins + 2), 0);
    const double width = (hi - lo) / bins;
    const bool reflected = system == System::reflected;

    run_chunks(config.n_paths, resolve_threads(config.threads),
               [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                   std::uint64_t* local = slots.data() + chunk * (bins + 2);
                   for (std::uint64_t i = begin; i < end; ++i) {
                       PathRng rng(config.seed, i);
                       const double x =
                           reflected ? run_density_path<true>(drift, t, x0, config, rng)
                                     : run_density_path<false>(drift, t, x0, config, rng);
                       if (x < lo) {
                           ++local[bins];
                       } else if (x >= hi) {
                           ++local[bins + 1];
                       } else {
                           ++local[std::min(bins - 1, int((x - lo) / width))];
                       }
                   }
               });

    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.bins = bins;
    h.n = config.n_paths;
    h.counts.assign(bins, 0);
    for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) {
        const std::uint64_t* local = slots.data() + chunk * (bins + 2);
        for (int b = 0; b < bins; ++b) h.counts[b] += local[b];
        h.below += local[bins];
        h.above += local[bins + 1];
    }
    h.density.resize(bins);
    h.se.resize(bins);
    for (int b = 0; b < bins; ++b) {
        const double p = double(h.counts[b]) / double(h.n);
        h.density[b] = p / width;
        h.se[b] = std::sqrt(std::max(p * (1.0 - p), 1.0 / double(h.n)) / double(h.n)) / width;
    }
    return h;
}

}  // namespace fpt
