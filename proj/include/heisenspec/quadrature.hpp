#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"

namespace heisenspec::quad {

// 15-point Kronrod extension of the 7-point Gauss rule, positive abscissae.
// Even indices of xk are the Kronrod-only nodes, odd indices the Gauss nodes.
inline constexpr double gk_xk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};

inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class T>
struct kahan_sum {
    T s{};
    T c{};
    void add(T x) {
        T y = x - c;
        T t = s + y;
        c = (t - s) - y;
        s = t;
    }
    T value() const { return s; }
};

template <class T>
struct panel {
    double a = 0, b = 0;
    T value{};
    double err = 0;
};

template <class T>
struct quad_outcome {
    T value{};
    double err = 0;
    int panels = 0;
};

struct quad_options {
    double rel_tol = 1e-10;
    double abs_floor = 0.0;
    int max_panels = 20000;
};

namespace detail {

inline double mag(double x) { return std::abs(x); }
inline double mag(const std::complex<double>& x) { return std::abs(x); }

template <class F>
auto gk15(F&& f, double a, double b) {
    using T = std::invoke_result_t<F&, double>;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T resk = gk_wk[7] * fc;
    T resg = gk_wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * gk_xk[j];
        T f1 = f(c - dx);
        T f2 = f(c + dx);
        resk += gk_wk[j] * (f1 + f2);
        if (j % 2 == 1) resg += gk_wg[j / 2] * (f1 + f2);
    }
    panel<T> p;
    p.a = a;
    p.b = b;
    p.value = h * resk;
    p.err = mag(h * (resk - resg));
    return p;
}

}  // namespace detail

// Adaptive integration over the union of [breaks[i], breaks[i+1]].
// Worst panel is bisected first; ties resolve to the oldest panel so runs are
// deterministic.  The final value re-sums all panels left to right with
// compensation, so the result does not depend on refinement history.
template <class F>
auto integrate_breaks(F&& f, const std::vector<double>& breaks,
                      const quad_options& opt) {
    using T = std::invoke_result_t<F&, double>;
    if (breaks.size() < 2) throw range_violation("integrate: need at least one interval");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i] > breaks[i - 1]))
            throw range_violation("integrate: breakpoints must increase strictly");
    if (!(opt.rel_tol > 0) && !(opt.abs_floor > 0))
        throw range_violation("integrate: no positive tolerance given");

    std::vector<panel<T>> panels;
    panels.reserve(breaks.size() + 256);
    // priority: larger error first, then smaller sequence number
    using pq_entry = std::pair<double, std::int64_t>;
    std::priority_queue<pq_entry> pq;

    double err_total = 0;
    T val_total{};
    auto push_panel = [&](panel<T>&& p) {
        err_total += p.err;
        val_total += p.value;
        pq.emplace(p.err, -static_cast<std::int64_t>(panels.size()));
        panels.emplace_back(std::move(p));
    };

    for (std::size_t i = 1; i < breaks.size(); ++i)
        push_panel(detail::gk15(f, breaks[i - 1], breaks[i]));

    auto target = [&]() {
        return std::max(opt.rel_tol * detail::mag(val_total), opt.abs_floor);
    };

    auto resum = [&]() {
        std::vector<std::size_t> order(panels.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            return panels[i].a < panels[j].a;
        });
        kahan_sum<T> v;
        kahan_sum<double> e;
        for (std::size_t i : order) {
            v.add(panels[i].value);
            e.add(panels[i].err);
        }
        val_total = v.value();
        err_total = e.value();
    };

    int since_resum = 0;
    for (;;) {
        while (err_total > target()) {
            if (static_cast<int>(panels.size()) >= opt.max_panels) {
                resum();
                if (err_total <= target()) break;
                throw tolerance_not_met(
                    "integrate: panel budget exhausted, error " +
                    std::to_string(err_total) + " > target " +
                    std::to_string(target()));
            }
            auto [werr, nseq] = pq.top();
            pq.pop();
            std::size_t k = static_cast<std::size_t>(-nseq);
            panel<T>& w = panels[k];
            if (w.err != werr) continue;  // stale entry
            const double mid = 0.5 * (w.a + w.b);
            if (!(mid > w.a && mid < w.b)) {
                resum();
                if (err_total <= target()) break;
                throw tolerance_not_met("integrate: interval too narrow to split at " +
                                        std::to_string(w.a));
            }
            err_total -= w.err;
            val_total -= w.value;
            panel<T> left = detail::gk15(f, w.a, mid);
            panel<T> right = detail::gk15(f, mid, w.b);
            w = left;
            err_total += w.err;
            val_total += w.value;
            pq.emplace(w.err, -static_cast<std::int64_t>(k));
            push_panel(std::move(right));
            if (++since_resum >= 4096) {
                resum();
                since_resum = 0;
            }
        }
        resum();
        if (err_total <= target() * 1.0000001) break;
    }

    quad_outcome<T> out;
    out.value = val_total;
    out.err = err_total;
    out.panels = static_cast<int>(panels.size());
    return out;
}

template <class F>
auto integrate(F&& f, double a, double b, const quad_options& opt) {
    return integrate_breaks(std::forward<F>(f), std::vector<double>{a, b}, opt);
}

// Upper incomplete gamma for integer order: Gamma(n+1, x) with x >= 0.
inline double upper_gamma_int(int n, double x) {
    double fact = 1.0;
    for (int j = 2; j <= n; ++j) fact *= j;
    double term = 1.0, sum = 1.0;
    for (int j = 1; j <= n; ++j) {
        term *= x / j;
        sum += term;
    }
    return fact * std::exp(-x) * sum;
}

}
