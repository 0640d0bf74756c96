#include "cpsim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpsim/errors.hpp"

namespace cpsim::num {

double erfcx(double z) {
    if (z < 25.0) return std::exp(z * z) * std::erfc(z);
    // Asymptotic series 1/(z sqrt(pi)) * sum (-1)^k (2k-1)!!/(2 z^2)^k.
    const double inv2z2 = 1.0 / (2.0 * z * z);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
        term *= -(2 * k - 1) * inv2z2;
        sum += term;
    }
    return sum / (z * std::sqrt(M_PI));
}

double normal_pdf(double z) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

double normal_tail(double z) {
    return 0.5 * std::erfc(z * M_SQRT1_2);
}

double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& df, double lo,
                      double hi, double abs_tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0)
        throw numeric_error("solve_monotone: root not bracketed");
    if (std::abs(flo) <= abs_tol) return lo;
    if (std::abs(fhi) <= abs_tol) return hi;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        double fx = f(x);
        if (std::abs(fx) <= abs_tol) return x;
        if (fx < 0.0)
            lo = x;
        else
            hi = x;
        double d = df(x);
        double xn = (d != 0.0) ? x - fx / d : lo;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (hi - lo <= 1e-16 * (1.0 + std::abs(x))) return 0.5 * (lo + hi);
        x = xn;
    }
    return x;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol, int max_iter) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    bool rising = flo < 0.0;
    for (int it = 0; it < max_iter && hi - lo > x_tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((fm < 0.0) == rising)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double fm, double whole, double tol,
             int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, fa, m, fm, flm);
    double right = simpson(f, m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson(f, a, fa, b, fb, fm);
    double tol = rel_tol * std::max(std::abs(whole), 1e-300);
    return adapt(f, a, fa, b, fb, fm, whole, tol, max_depth);
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double x_tol, int max_iter) {
    const double invphi = 0.6180339887498948482;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw validation_error("Pchip: need at least two nodes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw validation_error("Pchip: x nodes must be strictly increasing");

    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    // Fritsch-Carlson slopes: weighted harmonic mean at interior nodes,
    // zero where the data changes direction or is flat.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] > 0.0) {
            double w1 = 2.0 * h[i] + h[i - 1];
            double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) return 0.0;
        if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0))
            return 3.0 * d0;
        return s;
    };
    d_[0] = (n == 2) ? delta[0] : end_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = (n == 2) ? delta[0]
                         : end_slope(h[n - 2], h[n - 3], delta[n - 2],
                                     delta[n - 3]);

    cum_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        // Exact integral of the cubic on segment i.
        cum_[i + 1] = cum_[i] + h[i] * (0.5 * (y_[i] + y_[i + 1]) +
                                        h[i] * (d_[i] - d_[i + 1]) / 12.0);
    }
}

std::size_t Pchip::segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double Pchip::operator()(double x) const {
    std::size_t i = segment(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

double Pchip::derivative(double x) const {
    std::size_t i = segment(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double t2 = t * t;
    double g00 = (6 * t2 - 6 * t) / h, g10 = 3 * t2 - 4 * t + 1;
    double g01 = (-6 * t2 + 6 * t) / h, g11 = 3 * t2 - 2 * t;
    return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
}

double Pchip::antiderivative(double x) const {
    std::size_t i = segment(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
    double H00 = 0.5 * t4 - t3 + t;
    double H10 = 0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2;
    double H01 = -0.5 * t4 + t3;
    double H11 = 0.25 * t4 - t3 / 3.0;
    return cum_[i] + h * (H00 * y_[i] + h * H10 * d_[i] + H01 * y_[i + 1] +
                          h * H11 * d_[i + 1]);
}

Hermite::Hermite(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw validation_error("Hermite: need at least two nodes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw validation_error("Hermite: x nodes must be increasing");
    d_.assign(n, 0.0);
    if (n == 2) {
        d_[0] = d_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
        return;
    }
    auto sec = [&](std::size_t i) {
        return (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        d_[i] = (h1 * sec(i - 1) + h0 * sec(i)) / (h0 + h1);
    }
    double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
    d_[0] = ((2 * h0 + h1) * sec(0) - h0 * sec(1)) / (h0 + h1);
    double g0 = x_[n - 1] - x_[n - 2], g1 = x_[n - 2] - x_[n - 3];
    d_[n - 1] =
        ((2 * g0 + g1) * sec(n - 2) - g0 * sec(n - 3)) / (g0 + g1);
}

std::size_t Hermite::segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double Hermite::operator()(double x) const {
    std::size_t i = segment(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + h * (t3 - 2 * t2 + t) * d_[i] +
           (-2 * t3 + 3 * t2) * y_[i + 1] + h * (t3 - t2) * d_[i + 1];
}

double Hermite::derivative(double x) const {
    std::size_t i = segment(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double t2 = t * t;
    return (6 * t2 - 6 * t) / h * y_[i] + (3 * t2 - 4 * t + 1) * d_[i] +
           (-6 * t2 + 6 * t) / h * y_[i + 1] + (3 * t2 - 2 * t) * d_[i + 1];
}

double Hermite::second_derivative(double x) const {
    std::size_t i = segment(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    return (12 * t - 6) / (h * h) * y_[i] + (6 * t - 4) / h * d_[i] +
           (-12 * t + 6) / (h * h) * y_[i + 1] + (6 * t - 2) / h * d_[i + 1];
}

double fit_proportional(const std::vector<double>& u,
                        const std::vector<double>& y) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        num += u[i] * y[i];
        den += u[i] * u[i];
    }
    if (den == 0.0) throw numeric_error("fit_proportional: degenerate basis");
    return num / den;
}

std::vector<double> fit_quadratic(const std::vector<double>& x,
                                  const std::vector<double>& y,
                                  double* max_residual) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n)
        throw validation_error("fit_quadratic: need >= 3 points");
    // Normal equations for the 3x3 system.
    double s[5] = {double(n), 0, 0, 0, 0};
    double b[3] = {0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        double xi = x[i], x2 = xi * xi;
        s[1] += xi;
        s[2] += x2;
        s[3] += x2 * xi;
        s[4] += x2 * x2;
        b[0] += y[i];
        b[1] += y[i] * xi;
        b[2] += y[i] * x2;
    }
    double m[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
    // Gaussian elimination with partial pivoting.
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[idx[r]][col]) > std::abs(m[idx[piv]][col])) piv = r;
        std::swap(idx[col], idx[piv]);
        for (int r = col + 1; r < 3; ++r) {
            double f = m[idx[r]][col] / m[idx[col]][col];
            for (int cc = col; cc < 3; ++cc) m[idx[r]][cc] -= f * m[idx[col]][cc];
            b[idx[r]] -= f * b[idx[col]];
        }
    }
    std::vector<double> c(3);
    for (int col = 2; col >= 0; --col) {
        double acc = b[idx[col]];
        for (int cc = col + 1; cc < 3; ++cc) acc -= m[idx[col]][cc] * c[cc];
        c[col] = acc / m[idx[col]][col];
    }
    if (max_residual) {
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            r = std::max(r, std::abs(c[0] + c[1] * x[i] + c[2] * x[i] * x[i] -
                                     y[i]));
        *max_residual = r;
    }
    return c;
}

}  // namespace cpsim::num
