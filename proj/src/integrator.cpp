#include "sitpyr/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

#include "sitpyr/equilibria.hpp"

namespace sitpyr {

namespace {

using Vec5 = std::array<double, 5>;

Vec5 axpy(const Vec5& y, double h, const Vec5& d) {
    Vec5 out;
    for (int i = 0; i < 5; ++i) out[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] + h * d[static_cast<std::size_t>(i)];
    return out;
}

// Observables driving event detection, with analytic time derivatives.
struct Observables {
    double J, dJ; // infective pressure I + alpha Y
    double I, dI;
    double Y, dY;
};

struct SystemView {
    std::function<Vec5(double, const Vec5&)> rhs;
    std::function<State5(const Vec5&)> to_state;
    std::function<Observables(const Vec5&)> observe;
};

// Runge-Kutta stage values are not error-controlled and may undershoot zero
// past the strict tolerance of the public field functions; project them back
// onto the region before evaluation.
State5 projected(const Vec5& y) {
    return {std::max(y[0], 0.0), std::max(y[1], 0.0), std::max(y[2], 0.0), std::max(y[3], 0.0),
            std::max(y[4], 0.0)};
}

// Plain coordinates: y = (S, I, T, P, Y).
SystemView plain_view(const ModelParams& p, FieldKind field) {
    SystemView v;
    const bool fast = field == FieldKind::FastLimit;
    v.rhs = [p, fast](double, const Vec5& y) {
        const State5 s = projected(y);
        return fast ? fast_vector_field(s, p) : vector_field5(s, p);
    };
    v.to_state = [](const Vec5& y) { return State5::from_array(y); };
    v.observe = [p, fast](const Vec5& y) {
        const State5 s = projected(y);
        const Vec5 f = fast ? fast_vector_field(s, p) : vector_field5(s, p);
        Observables o;
        o.I = s.I;
        o.Y = s.Y;
        o.J = s.I + p.alpha * s.Y;
        o.dI = f[1];
        o.dY = f[4];
        o.dJ = f[1] + p.alpha * f[4];
        return o;
    };
    return v;
}

// Log-infective coordinates: y = (S, T, P, Y, w), w = log(I + alpha Y).
// With gamma1 == gamma2 the pressure J = e^w obeys w' = beta(S + alpha nu P) - gamma
// exactly, so w tracks dips of J through hundreds of thousands of e-folds.
SystemView log_view(const ModelParams& p) {
    const double g = p.gamma();
    // J = e^w never exceeds 1 + alpha on the region; capping the exponent
    // keeps wildly extrapolated trial stages finite.
    const double w_cap = std::log(2.0 + p.alpha);
    auto reconstruct = [alpha = p.alpha, w_cap](const Vec5& y) {
        const double J = std::exp(std::min(y[4], w_cap));
        const double I = std::max(J - alpha * std::max(y[3], 0.0), 0.0);
        return std::pair<double, double>(J, I);
    };
    SystemView v;
    v.rhs = [p, g, reconstruct](double, const Vec5& y) {
        const double S = std::max(y[0], 0.0), T = std::max(y[1], 0.0), P = std::max(y[2], 0.0),
                     Y = std::max(y[3], 0.0);
        const auto [J, I] = reconstruct(y);
        const double de = p.delta * p.epsilon;
        Vec5 f;
        f[0] = -p.beta * S * J + de * P;
        f[1] = p.gamma1 * I - p.epsilon * T;
        f[2] = de + p.epsilon * T * (1.0 - p.delta) - p.nu * p.beta * P * J -
               de * (S + I + 2.0 * P + Y);
        f[3] = p.nu * p.beta * P * J - p.gamma2 * Y;
        f[4] = p.beta * (S + p.alpha * p.nu * P) - g;
        return f;
    };
    v.to_state = [reconstruct](const Vec5& y) {
        const auto [J, I] = reconstruct(y);
        (void)J;
        return State5{y[0], I, y[1], y[2], std::max(y[3], 0.0)};
    };
    v.observe = [p, g, reconstruct](const Vec5& y) {
        const auto [J, I] = reconstruct(y);
        const double wdot = p.beta * (y[0] + p.alpha * p.nu * y[2]) - g;
        Observables o;
        o.J = J;
        o.dJ = J * wdot;
        o.I = I;
        o.dI = p.beta * y[0] * J - p.gamma1 * I;
        o.Y = y[3];
        o.dY = p.nu * p.beta * y[2] * J - p.gamma2 * y[3];
        return o;
    };
    return v;
}

struct HermiteSeg {
    double t0, h;
    Vec5 y0, y1, f0, f1;

    Vec5 eval(double t) const {
        const double th = (t - t0) / h;
        Vec5 out;
        for (int i = 0; i < 5; ++i) {
            const std::size_t k = static_cast<std::size_t>(i);
            const double a = y0[k];
            const double b = y1[k];
            out[k] = (1.0 - th) * a + th * b +
                     th * (th - 1.0) *
                         ((1.0 - 2.0 * th) * (b - a) + (th - 1.0) * h * f0[k] + th * h * f1[k]);
        }
        return out;
    }
};

class EventDetector {
public:
    EventDetector(const SystemView& view, const IntegratorConfig& cfg, Trajectory& out)
        : view_(view), cfg_(cfg), out_(out) {}

    void begin(double t, const Vec5& y) { last_ = view_.observe(y); (void)t; }

    void step(const HermiteSeg& seg) {
        const Observables cur = view_.observe(seg.y1);
        for (double th : cfg_.event_thresholds) {
            maybe_crossing(seg, th, last_.J, cur.J, [](const Observables& o) { return o.J; });
        }
        maybe_peak(seg, last_.dI, cur.dI, EventKind::PeakI,
                   [](const Observables& o) { return o.dI; });
        maybe_peak(seg, last_.dY, cur.dY, EventKind::PeakY,
                   [](const Observables& o) { return o.dY; });
        last_ = cur;
    }

private:
    template <class Get>
    void maybe_crossing(const HermiteSeg& seg, double th, double v0, double v1, Get&& get) {
        if ((v0 - th) * (v1 - th) >= 0.0) return;
        const bool upward = v1 > v0;
        const double t = bisect(seg, [&](const Vec5& y) { return get(view_.observe(y)) - th; });
        Event ev;
        ev.kind = upward ? EventKind::EpidemicStart : EventKind::EpidemicEnd;
        ev.time = t;
        ev.state = view_.to_state(seg.eval(t));
        ev.threshold = th;
        out_.events.push_back(ev);
    }

    template <class Get>
    void maybe_peak(const HermiteSeg& seg, double d0, double d1, EventKind kind, Get&& get) {
        if (!(d0 > 0.0 && d1 < 0.0)) return;
        const double t = bisect(seg, [&](const Vec5& y) { return get(view_.observe(y)); });
        Event ev;
        ev.kind = kind;
        ev.time = t;
        ev.state = view_.to_state(seg.eval(t));
        ev.threshold = 0.0;
        out_.events.push_back(ev);
    }

    template <class F>
    double bisect(const HermiteSeg& seg, F&& f) const {
        double a = seg.t0, b = seg.t0 + seg.h;
        double fa = f(seg.eval(a));
        if (fa == 0.0) return a;
        const double tol = std::max(cfg_.event_time_tol, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(b));
        while (b - a > tol) {
            const double m = 0.5 * (a + b);
            const double fm = f(seg.eval(m));
            if (fm == 0.0) return m;
            if ((fm > 0.0) == (fa > 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    }

    const SystemView& view_;
    const IntegratorConfig& cfg_;
    Trajectory& out_;
    Observables last_{};
};

// Dormand-Prince 5(4) tableau.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;

Trajectory run_rk(const SystemView& view, const Vec5& y_init, double t0, double t1,
                  const IntegratorConfig& cfg) {
    if (!(t1 > t0)) throw std::invalid_argument("integrate: need t1 > t0");
    Trajectory out;
    EventDetector detector(view, cfg, out);

    Vec5 y = y_init;
    double t = t0;
    Vec5 k1 = view.rhs(t, y);

    auto err_norm = [&](const Vec5& e, const Vec5& y0, const Vec5& y1) {
        double sum = 0.0;
        for (int i = 0; i < 5; ++i) {
            const std::size_t k = static_cast<std::size_t>(i);
            const double sc =
                cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[k]), std::abs(y1[k]));
            const double q = e[k] / sc;
            sum += q * q;
        }
        return std::sqrt(sum / 5.0);
    };

    // Initial step: standard two-evaluation heuristic.
    double h = cfg.initial_step;
    if (h <= 0.0) {
        double d0 = 0.0, d1 = 0.0;
        for (int i = 0; i < 5; ++i) {
            const std::size_t k = static_cast<std::size_t>(i);
            const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[k]);
            d0 = std::max(d0, std::abs(y[k]) / sc);
            d1 = std::max(d1, std::abs(k1[k]) / sc);
        }
        h = (d1 > 1e-10) ? 0.01 * d0 / d1 : 1e-6;
        h = std::max(h, 1e-10);
        h = std::min({h, t1 - t0, cfg.max_step});
    }

    out.times.push_back(t);
    out.states.push_back(view.to_state(y));
    detector.begin(t, y);

    double err_prev = 1e-4;
    long nsteps = 0;
    while (t < t1) {
        if (++nsteps > cfg.max_steps)
            throw numerical_error("integrate: step budget exhausted", t);
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
            throw numerical_error("integrate: step size underflow (stiffness diagnostic)", t);
        if (t + h > t1) h = t1 - t;

        const Vec5 k2 = view.rhs(t + C2 * h, axpy(y, h * A21, k1));
        Vec5 tmp;
        for (int i = 0; i < 5; ++i) {
            const std::size_t q = static_cast<std::size_t>(i);
            tmp[q] = y[q] + h * (A31 * k1[q] + A32 * k2[q]);
        }
        const Vec5 k3 = view.rhs(t + C3 * h, tmp);
        for (int i = 0; i < 5; ++i) {
            const std::size_t q = static_cast<std::size_t>(i);
            tmp[q] = y[q] + h * (A41 * k1[q] + A42 * k2[q] + A43 * k3[q]);
        }
        const Vec5 k4 = view.rhs(t + C4 * h, tmp);
        for (int i = 0; i < 5; ++i) {
            const std::size_t q = static_cast<std::size_t>(i);
            tmp[q] = y[q] + h * (A51 * k1[q] + A52 * k2[q] + A53 * k3[q] + A54 * k4[q]);
        }
        const Vec5 k5 = view.rhs(t + C5 * h, tmp);
        for (int i = 0; i < 5; ++i) {
            const std::size_t q = static_cast<std::size_t>(i);
            tmp[q] = y[q] + h * (A61 * k1[q] + A62 * k2[q] + A63 * k3[q] + A64 * k4[q] +
                                 A65 * k5[q]);
        }
        const Vec5 k6 = view.rhs(t + h, tmp);
        Vec5 y_new;
        for (int i = 0; i < 5; ++i) {
            const std::size_t q = static_cast<std::size_t>(i);
            y_new[q] = y[q] + h * (B1 * k1[q] + B3 * k3[q] + B4 * k4[q] + B5 * k5[q] + B6 * k6[q]);
        }
        const Vec5 k7 = view.rhs(t + h, y_new);
        Vec5 errv;
        for (int i = 0; i < 5; ++i) {
            const std::size_t q = static_cast<std::size_t>(i);
            errv[q] = h * (E1 * k1[q] + E3 * k3[q] + E4 * k4[q] + E5 * k5[q] + E6 * k6[q] +
                           E7 * k7[q]);
        }
        const double err = err_norm(errv, y, y_new);
        if (!std::isfinite(err)) {
            h *= 0.1;
            continue;
        }

        if (err <= 1.0) {
            HermiteSeg seg{t, h, y, y_new, k1, k7};
            t += h;
            y = y_new;
            k1 = k7; // FSAL
            out.times.push_back(t);
            out.states.push_back(view.to_state(y));
            if (cfg.dense_output) detector.step(seg);

            const double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.17) * std::pow(err_prev, 0.04);
            h *= std::clamp(fac, 0.2, 5.0);
            h = std::min(h, cfg.max_step);
            err_prev = std::max(err, 1e-4);
        } else {
            const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
            h *= fac;
        }
    }
    return out;
}

} // namespace

Trajectory integrate(const State5& initial, const ModelParams& p, double t0, double t1,
                     const IntegratorConfig& cfg, FieldKind field) {
    for (double v : initial.to_array())
        if (!std::isfinite(v)) throw std::invalid_argument("integrate: non-finite initial state");
    const SystemView view = plain_view(p, field);
    return run_rk(view, initial.to_array(), t0, t1, cfg);
}

Trajectory integrate_log_infectives(const State5& initial, const ModelParams& p, double t0,
                                    double t1, const IntegratorConfig& cfg) {
    p.gamma(); // enforce gamma1 == gamma2
    const double J0 = initial.I + p.alpha * initial.Y;
    if (!(J0 > 0.0))
        throw std::invalid_argument("integrate_log_infectives: need I + alpha Y > 0 initially");
    const SystemView view = log_view(p);
    Vec5 y{initial.S, initial.T, initial.P, initial.Y, std::log(J0)};
    return run_rk(view, y, t0, t1, cfg);
}

std::vector<BasinSample> basin_sample(const ModelParams& p, int n, std::uint64_t seed,
                                      double t_max, double classifier_tol,
                                      const IntegratorConfig& cfg) {
    std::vector<BasinSample> out(static_cast<std::size_t>(std::max(n, 0)));
    if (n <= 0) return out;

    // Uniform draws on the closed simplex: six exponentials, normalized,
    // last coordinate dropped. The generator stream is consumed up front so
    // sample i is identical regardless of execution order.
    std::vector<State5> initials(static_cast<std::size_t>(n));
    std::uint64_t state = seed ? seed : 0x9e3779b97f4a7c15ULL;
    auto next_u64 = [&state]() {
        // splitmix64; stable across platforms.
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    auto next_exp = [&next_u64]() {
        const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
        return -std::log(u);
    };
    for (int i = 0; i < n; ++i) {
        double e[6];
        double sum = 0.0;
        for (double& v : e) {
            v = next_exp();
            sum += v;
        }
        initials[static_cast<std::size_t>(i)] =
            State5{e[0] / sum, e[1] / sum, e[2] / sum, e[3] / sum, e[4] / sum};
    }

    const std::vector<EquilibriumRecord> endemic = endemic_equilibria(p);

    auto classify = [&](const State5& terminal) {
        if (terminal.I + terminal.Y < classifier_tol) return AttractorLabel::DFE;
        for (const auto& rec : endemic) {
            const State5 e = rec.state.project();
            const double d = std::max({std::abs(terminal.S - e.S), std::abs(terminal.I - e.I),
                                       std::abs(terminal.T - e.T), std::abs(terminal.P - e.P),
                                       std::abs(terminal.Y - e.Y)});
            if (d < 1e-4) return AttractorLabel::Endemic;
        }
        return AttractorLabel::Undecided;
    };

    // In plain coordinates an inter-epidemic dip of I + alpha Y can underflow
    // to exactly zero and wrongly freeze an orbit that re-ignites later; the
    // exact log-infective chart avoids that whenever it applies.
    const bool use_log = p.equal_gammas();

    auto work = [&](int begin, int end) {
        IntegratorConfig run_cfg = cfg;
        run_cfg.dense_output = false;
        for (int i = begin; i < end; ++i) {
            const State5& x0 = initials[static_cast<std::size_t>(i)];
            AttractorLabel label = AttractorLabel::Undecided;
            try {
                const Trajectory tr = use_log && x0.I + p.alpha * x0.Y > 0.0
                                          ? integrate_log_infectives(x0, p, 0.0, t_max, run_cfg)
                                          : integrate(x0, p, 0.0, t_max, run_cfg);
                label = classify(tr.back());
            } catch (const std::exception&) {
                label = AttractorLabel::Undecided;
            }
            out[static_cast<std::size_t>(i)] = BasinSample{x0, label};
        }
    };

    int threads = 1;
    if (const char* env = std::getenv("SITPYR_THREADS")) threads = std::max(1, std::atoi(env));
    threads = std::min(threads, n);
    if (threads <= 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n + threads - 1) / threads;
        for (int tix = 0; tix < threads; ++tix) {
            const int b = tix * chunk;
            const int e = std::min(n, b + chunk);
            if (b >= e) break;
            pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

} // namespace sitpyr
