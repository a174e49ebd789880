#include "thfield/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace thfield::quad {

namespace {

// Kronrod-15 abscissae on [0,1] and weights; Gauss-7 weights interleaved
// (nonzero at odd Kronrod indices).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double a, b, value, err;
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double fsum = f(c - x) + f(c + x);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    const double value = resk * h;
    const double e0 = 200.0 * std::abs((resk - resg) * h);
    // the usual (200|K-G|)^(3/2) sharpening, clipped so rough panels
    // keep a finite priority
    const double err = (e0 < 1.0) ? e0 * std::sqrt(e0) : e0;
    return Panel{a, b, value, std::max(err, 1e-300)};
}

}  // namespace

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     const Options& opts) {
    if (a == b) return {0.0, 0.0, true};
    // seed panels at golden-ratio spaced cuts: integrand kinks then sit in
    // general position inside panels, where the K-G estimate sees them
    std::vector<double> cuts{a, b};
    constexpr double kGolden = 0.6180339887498949;
    double frac = kGolden;
    for (int i = 0; i < 7; ++i) {
        cuts.push_back(a + (b - a) * frac);
        frac += kGolden;
        if (frac >= 1.0) frac -= 1.0;
    }
    std::sort(cuts.begin(), cuts.end());

    std::vector<Panel> heap;
    double total = 0.0, toterr = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        Panel p = eval_panel(f, cuts[i], cuts[i + 1]);
        total += p.value;
        toterr += p.err;
        heap.push_back(p);
    }
    auto cmp = [](const Panel& p, const Panel& q) { return p.err < q.err; };
    std::make_heap(heap.begin(), heap.end(), cmp);
    int n = static_cast<int>(heap.size());
    while (n < opts.max_intervals) {
        const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
        if (n >= opts.min_intervals && toterr <= tol) break;
        std::pop_heap(heap.begin(), heap.end(), cmp);
        Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at floating-point resolution; accept as is
            heap.push_back(Panel{worst.a, worst.b, worst.value, 0.0});
            std::push_heap(heap.begin(), heap.end(), cmp);
            toterr -= worst.err;
            continue;
        }
        Panel left = eval_panel(f, worst.a, mid);
        Panel right = eval_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        toterr += left.err + right.err - worst.err;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), cmp);
        ++n;
    }
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    return {total, toterr, toterr <= tol};
}

Result power_endpoint_left(const std::function<double(double)>& s, double a, double b,
                           double sigma, const Options& opts) {
    if (b <= a) return {0.0, 0.0, true};
    const double p = 1.0 + sigma;
    if (!(p > 0.0)) return {std::nan(""), 0.0, false};
    if (std::abs(sigma) < 1e-12) {
        return gauss_kronrod([&](double x) { return s(x); }, a, b, opts);
    }
    // x = a + w^(1/p): the power factor and the Jacobian cancel to 1/p
    const double wmax = std::pow(b - a, p);
    auto g = [&](double w) {
        const double u = (w > 0.0) ? std::pow(w, 1.0 / p) : 0.0;
        return s(a + u) / p;
    };
    return gauss_kronrod(g, 0.0, wmax, opts);
}

}
