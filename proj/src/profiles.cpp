#include "cpsim/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cpsim/errors.hpp"

namespace cpsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mills ratio P(Z>z)/phi(z) of the standard normal, stable for all z >= 0.
double mills(double z) {
    return num::erfcx(z * M_SQRT1_2) * std::sqrt(M_PI_2);
}

}  // namespace

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << "v_increasing=" << v_increasing << " growth_bound=" << growth_bound
       << " epsilon_below_mean=" << epsilon_below_mean
       << " contraction_margin=" << contraction_margin
       << " pole_extrapolation=" << pole_extrapolation
       << " pass=" << pass();
    return os.str();
}

Profile Profile::self_similar(double beta) {
    if (!(beta > 0.0))
        throw validation_error("self_similar: beta must be positive");
    Profile p;
    p.kind_ = ProfileKind::SelfSimilar;
    p.beta_ = beta;
    return p;
}

Profile Profile::gaussian(double length_scale) {
    if (!(length_scale > 0.0))
        throw validation_error("gaussian: L must be positive");
    Profile p;
    p.kind_ = ProfileKind::Gaussian;
    p.length_ = length_scale;
    double sl = std::sqrt(length_scale);
    double r = mills(sl);
    // Unit-mass and mean-1 conditions reduce to closed form in the Mills
    // ratio: a = sqrt(L) (1/R(sqrt L) - sqrt L), K = a / (sqrt(L) R(sqrt L)).
    p.a_ = sl * (1.0 / r - sl);
    p.k_ = p.a_ / (sl * r);
    if (!(p.a_ > 0.0) || !std::isfinite(p.a_))
        throw numeric_error("gaussian: parameter solve failed");
    return p;
}

Profile Profile::tabulated(std::vector<double> x_nodes,
                           std::vector<double> v_values, double x_inf,
                           bool use_linear) {
    if (x_nodes.size() != v_values.size() || x_nodes.size() < 2)
        throw validation_error("tabulated: need matching grids, >= 2 nodes");
    if (x_nodes.front() != 0.0)
        throw validation_error("tabulated: grid must start at 0");
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < x_nodes.size(); ++i) {
        if (i > 0 && !(x_nodes[i] > x_nodes[i - 1]))
            throw validation_error("tabulated: x grid not strictly increasing");
        if (!(v_values[i] > 0.0))
            throw validation_error("tabulated: v values must be positive");
        if (i > 0 && v_values[i] < v_values[i - 1]) bad.push_back(i);
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os << "tabulated: v must be non-decreasing; offending indices:";
        for (auto i : bad) os << " " << i;
        throw validation_error(os.str());
    }
    if (!(x_inf > x_nodes.back()))
        throw validation_error("tabulated: x_inf must exceed the last node");

    Profile p;
    p.kind_ = ProfileKind::Tabulated;
    p.nodes_ = x_nodes;
    p.values_ = v_values;
    p.linear_ = use_linear;
    p.x_inf_ = x_inf;
    p.interp_ = num::Pchip(std::move(x_nodes), std::move(v_values));
    p.tail_cum_ = p.interp_.antiderivative(p.interp_.x_back());
    p.tail_slope_ = p.interp_.slopes().back();
    if (p.tail_slope_ < 0.0) p.tail_slope_ = 0.0;
    return p;
}

double Profile::zeta(double xb) const {
    double sl = std::sqrt(length_);
    return sl + a_ * xb / sl;
}

// ---- base-coordinate (stretch 1) evaluations -------------------------------

double Profile::v_base(double xb) const {
    switch (kind_) {
        case ProfileKind::SelfSimilar: {
            double s = 1.0 - (1.0 - beta_) * xb;
            return s > 0.0 ? 1.0 / s : kInf;
        }
        case ProfileKind::Gaussian: {
            double z = zeta(xb);
            double r = mills(z);
            double sdev = std::sqrt(length_) / a_;
            return r / (sdev * (1.0 - z * r));
        }
        case ProfileKind::Tabulated: {
            if (xb >= x_inf_) return kInf;
            if (xb <= interp_.x_back())
                return linear_ ? lerp_v(std::max(xb, 0.0))
                               : interp_(std::max(xb, 0.0));
            if (std::isfinite(x_inf_)) {
                double xn = interp_.x_back();
                return values_.back() * (x_inf_ - xn) / (x_inf_ - xb);
            }
            return values_.back() + tail_slope_ * (xb - interp_.x_back());
        }
    }
    return 0.0;
}

double Profile::v_prime_base(double xb) const {
    switch (kind_) {
        case ProfileKind::SelfSimilar: {
            double s = 1.0 - (1.0 - beta_) * xb;
            return s > 0.0 ? (1.0 - beta_) / (s * s) : kInf;
        }
        case ProfileKind::Gaussian: {
            double vb = v_base(xb);
            return vb * vb * (1.0 - beta_base(xb));
        }
        case ProfileKind::Tabulated: {
            if (xb >= x_inf_) return kInf;
            if (xb <= interp_.x_back())
                return linear_ ? lerp_v_slope(std::max(xb, 0.0))
                               : interp_.derivative(std::max(xb, 0.0));
            if (std::isfinite(x_inf_)) {
                double xn = interp_.x_back();
                double c = values_.back() * (x_inf_ - xn);
                return c / ((x_inf_ - xb) * (x_inf_ - xb));
            }
            return tail_slope_;
        }
    }
    return 0.0;
}

double Profile::w_base(double xb) const {
    if (xb < 0.0) return 1.0;
    switch (kind_) {
        case ProfileKind::SelfSimilar: {
            if (beta_ == 1.0) return std::exp(-xb);
            double s = 1.0 - (1.0 - beta_) * xb;
            return s > 0.0 ? std::pow(s, beta_ / (1.0 - beta_)) : 0.0;
        }
        case ProfileKind::Gaussian: {
            double z = zeta(xb);
            return std::exp(-a_ * xb -
                            a_ * a_ * xb * xb / (2.0 * length_)) *
                   mills(z) / mills(std::sqrt(length_));
        }
        case ProfileKind::Tabulated:
            if (xb >= x_inf_) return 0.0;
            return v_base(xb) * h_base(xb);
    }
    return 0.0;
}

double Profile::h_base(double xb) const {
    if (xb < 0.0) return h_base(0.0) - xb;
    switch (kind_) {
        case ProfileKind::SelfSimilar: {
            if (beta_ == 1.0) return std::exp(-xb);
            double s = 1.0 - (1.0 - beta_) * xb;
            return s > 0.0 ? std::pow(s, 1.0 / (1.0 - beta_)) : 0.0;
        }
        case ProfileKind::Gaussian: {
            double z = zeta(xb);
            double r = mills(z);
            double sdev = std::sqrt(length_) / a_;
            return sdev * (1.0 - z * r) / mills(std::sqrt(length_)) *
                   std::exp(-a_ * xb - a_ * a_ * xb * xb / (2.0 * length_));
        }
        case ProfileKind::Tabulated: {
            if (xb >= x_inf_) return 0.0;
            double cum;
            if (xb <= interp_.x_back()) {
                cum = linear_ ? lerp_v_cum(xb) : interp_.antiderivative(xb);
            } else if (std::isfinite(x_inf_)) {
                double xn = interp_.x_back();
                double c = values_.back() * (x_inf_ - xn);
                cum = tail_cum_ + c * std::log((x_inf_ - xn) / (x_inf_ - xb));
            } else {
                double dx = xb - interp_.x_back();
                cum = tail_cum_ +
                      dx * (values_.back() + 0.5 * tail_slope_ * dx);
            }
            // h(0) = 1/v(0) makes w(0) = 1 for the raw profile.
            return std::exp(-cum) / values_.front();
        }
    }
    return 0.0;
}

double Profile::density_base(double xb) const {
    if (xb < 0.0) return 0.0;
    switch (kind_) {
        case ProfileKind::SelfSimilar: {
            if (beta_ == 1.0) return std::exp(-xb);
            double s = 1.0 - (1.0 - beta_) * xb;
            return s > 0.0 ? beta_ * std::pow(s, (2.0 * beta_ - 1.0) /
                                                     (1.0 - beta_))
                           : 0.0;
        }
        case ProfileKind::Gaussian:
            return k_ *
                   std::exp(-a_ * xb - a_ * a_ * xb * xb / (2.0 * length_));
        case ProfileKind::Tabulated: {
            if (xb >= x_inf_) return 0.0;
            double vv = v_base(xb);
            return (vv * vv - v_prime_base(xb)) * h_base(xb);
        }
    }
    return 0.0;
}

double Profile::beta_base(double xb) const {
    switch (kind_) {
        case ProfileKind::SelfSimilar:
            return beta_;
        case ProfileKind::Gaussian: {
            double z = zeta(xb);
            double r = mills(z);
            return (1.0 - z * r) / (r * r);
        }
        case ProfileKind::Tabulated: {
            // beta = 1 + d/dx (1/v): centered second-order difference with
            // one-sided closure at the support ends; relative spacing 1e-6.
            double end = std::isfinite(x_inf_) ? x_inf_ : kInf;
            double delta = 1e-6 * (1.0 + std::abs(xb));
            double lo = std::max(xb - delta, 0.0);
            double hi = xb + delta;
            if (hi >= end) {
                hi = xb;
                lo = xb - delta;
            }
            return 1.0 +
                   (1.0 / v_base(hi) - 1.0 / v_base(lo)) / (hi - lo);
        }
    }
    return 0.0;
}

// Linear-interpolation fallbacks for tabulated v.
double Profile::lerp_v(double xb) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), xb);
    std::size_t i = (it == nodes_.begin()) ? 0 : std::size_t(it - nodes_.begin()) - 1;
    i = std::min(i, nodes_.size() - 2);
    double t = (xb - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
    return (1.0 - t) * values_[i] + t * values_[i + 1];
}

double Profile::lerp_v_slope(double xb) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), xb);
    std::size_t i = (it == nodes_.begin()) ? 0 : std::size_t(it - nodes_.begin()) - 1;
    i = std::min(i, nodes_.size() - 2);
    return (values_[i + 1] - values_[i]) / (nodes_[i + 1] - nodes_[i]);
}

double Profile::lerp_v_cum(double xb) const {
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        double x1 = std::min(nodes_[i + 1], xb);
        if (x1 <= nodes_[i]) break;
        double va = values_[i];
        double vb2 = lerp_v(x1);
        cum += 0.5 * (va + vb2) * (x1 - nodes_[i]);
        if (x1 == xb) break;
    }
    return cum;
}

// ---- public accessors (affine map X = stretch * X_base) --------------------

double Profile::mean() const { return stretch_ / v_base(0.0); }

double Profile::support_end() const {
    switch (kind_) {
        case ProfileKind::SelfSimilar:
            return beta_ < 1.0 ? stretch_ / (1.0 - beta_) : kInf;
        case ProfileKind::Gaussian:
            return kInf;
        case ProfileKind::Tabulated:
            return stretch_ * x_inf_;
    }
    return kInf;
}

double Profile::w(double x) const { return w_base(x / stretch_); }
double Profile::h(double x) const { return stretch_ * h_base(x / stretch_); }
double Profile::v(double x) const { return v_base(x / stretch_) / stretch_; }
double Profile::v_prime(double x) const {
    return v_prime_base(x / stretch_) / (stretch_ * stretch_);
}
double Profile::density(double x) const {
    return density_base(x / stretch_) / stretch_;
}
double Profile::beta(double x) const { return beta_base(x / stretch_); }

ProfileEval Profile::evaluate(double x) const {
    ProfileEval e;
    if (x >= support_end()) {
        e.out_of_support = true;
        e.v = kInf;
        e.beta = std::numeric_limits<double>::quiet_NaN();
        return e;
    }
    e.w = w(x);
    e.h = h(x);
    e.v = v(x);
    e.beta = beta(x);
    return e;
}

Profile Profile::scaled_by(double lambda) const {
    if (!(lambda > 0.0))
        throw validation_error("scaled_by: factor must be positive");
    Profile p = *this;
    p.stretch_ *= lambda;
    return p;
}

Profile Profile::normalized() const {
    double m = mean();
    if (!(m > 0.0) || !std::isfinite(m))
        throw validation_error("normalize: mean must be finite and positive");
    Profile p = *this;
    p.stretch_ /= m;
    p.scale_ *= m;
    return p;
}

ValidationReport Profile::validate_inviscid_data(double epsilon,
                                                 double delta0) const {
    ValidationReport r;
    std::vector<double> grid;
    if (kind_ == ProfileKind::Tabulated) {
        for (double xb : nodes_) grid.push_back(xb * stretch_);
    } else {
        double end = support_end();
        if (!std::isfinite(end)) {
            double x = 0.0;
            while (w(x) > 1e-6) x += 0.25 * mean();
            end = x;
        }
        int n = 512;
        for (int i = 0; i <= n; ++i)
            grid.push_back(end * (i / double(n)) * (1.0 - 1e-9));
    }

    r.v_increasing = v(grid.front()) > 0.0;
    r.growth_bound = true;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double v1 = v(grid[i - 1]), v2 = v(grid[i]);
        if (v2 < v1 * (1.0 - 1e-12)) {
            r.v_increasing = false;
            r.offending.push_back(i);
        }
        double xm = 0.5 * (grid[i - 1] + grid[i]);
        double vm = v(xm);
        double quad = (grid[i] - grid[i - 1]) / 6.0 *
                      (v1 * v1 + 4.0 * vm * vm + v2 * v2);
        if (v2 - v1 > quad * (1.0 + 1e-9) + 1e-300) {
            r.growth_bound = false;
            r.offending.push_back(i);
        }
    }
    r.epsilon_below_mean = epsilon < mean();
    r.contraction_margin = (1.0 + delta0) * v(0.0) < 1.0 / epsilon;
    r.pole_extrapolation =
        kind_ == ProfileKind::Tabulated && std::isfinite(x_inf_);
    return r;
}

}  // namespace cpsim
