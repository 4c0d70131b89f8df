#include "hent/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <string>
#include <vector>

#include "hent/error.hpp"

namespace hent {

namespace {

// Kronrod abscissae (positive half) and weights; Gauss weights belong to the
// odd-indexed Kronrod nodes 1, 3, 5, 7.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double abs_k = std::abs(kronrod);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        kronrod += kWgk[j] * (fv1[j] + fv2[j]);
        abs_k += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) gauss += kWg[j / 2] * (fv1[j] + fv2[j]);
    }
    const double mean = 0.5 * kronrod;
    double asc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

    const double value = kronrod * half;
    asc *= std::abs(half);
    abs_k *= std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    // QUADPACK's rescaling of the raw Gauss/Kronrod difference.
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    const double round = 50.0 * 2.2e-16 * abs_k;
    if (abs_k > 2.2e-308 / (50.0 * 2.2e-16)) err = std::max(round, err);
    return {a, b, value, err};
}

}  // namespace

QuadratureResult integrate_gk15(const std::function<double(double)>& f,
                                std::span<const double> breakpoints, double abs_tol,
                                std::size_t max_intervals) {
    if (breakpoints.size() < 2) return {};
    // Max-heap on the error estimate.
    std::vector<Panel> heap;
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        if (breakpoints[k + 1] > breakpoints[k]) heap.push_back(gk15(f, breakpoints[k], breakpoints[k + 1]));
    }
    std::make_heap(heap.begin(), heap.end());

    auto totals = [&heap] {
        double v = 0.0, e = 0.0;
        for (const auto& p : heap) {
            v += p.value;
            e += p.error;
        }
        return std::pair{v, e};
    };

    auto [value, error] = totals();
    std::size_t since_resum = 0;
    while (error > abs_tol) {
        if (heap.size() >= max_intervals) {
            throw NumericalError("quadrature did not converge: error estimate " + std::to_string(error) +
                                 " > tolerance " + std::to_string(abs_tol) + " after " +
                                 std::to_string(heap.size()) + " intervals");
        }
        std::pop_heap(heap.begin(), heap.end());
        const Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NumericalError("quadrature did not converge: interval collapsed at " + std::to_string(mid));
        }
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
        // Re-sum periodically so the running totals do not drift.
        if (++since_resum == 256) {
            std::tie(value, error) = totals();
            since_resum = 0;
        }
    }
    std::tie(value, error) = totals();
    return {value, error, heap.size()};
}

}  // namespace hent
