#include "leapclust/quadrature.hpp"

#include "leapclust/types.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace leapclust {

namespace {

// Kronrod nodes on [0, 1]; odd-indexed nodes (1, 3, 5) together with 0 form the Gauss rule.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gauss_kronrod(const std::function<double(double)>& f, double a, double b, std::size_t& evals) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto eval = [&](double x) {
        const double y = f(x);
        ++evals;
        if (!std::isfinite(y)) throw DomainError("integrand is not finite at x = " + std::to_string(x));
        return y;
    };
    const double fc = eval(center);
    double kronrod = kKronrod[7] * fc;
    double gauss = kGauss[3] * fc;
    for (int k = 0; k < 7; ++k) {
        const double dx = half * kNodes[static_cast<std::size_t>(k)];
        const double s = eval(center - dx) + eval(center + dx);
        kronrod += kKronrod[static_cast<std::size_t>(k)] * s;
        if (k % 2 == 1) gauss += kGauss[static_cast<std::size_t>(k / 2)] * s;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
    QuadratureResult out;
    if (a == b) return out;
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integration limits must be finite");
    const double sign = a < b ? 1.0 : -1.0;
    if (a > b) std::swap(a, b);

    std::priority_queue<Piece> heap;
    Piece first = gauss_kronrod(f, a, b, out.evaluations);
    double total = first.value;
    double error = first.error;
    heap.push(first);
    while (error > std::max(options.abs_tol, options.rel_tol * std::abs(total)) &&
           heap.size() < options.max_intervals) {
        const Piece worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        const Piece left = gauss_kronrod(f, worst.a, mid, out.evaluations);
        const Piece right = gauss_kronrod(f, mid, worst.b, out.evaluations);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    total = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = sign * total;
    out.error_estimate = error;
    return out;
}

}  // namespace leapclust
