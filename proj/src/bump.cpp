#include "ccn/bump.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ccn {

namespace {

double smooth_step(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

std::string format_point(const std::vector<double>& p) {
    std::ostringstream os;
    os.precision(6);
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ')';
    return os.str();
}

}  // namespace

double bump_profile(double s) {
    if (s <= 1.0) return 1.0;
    if (s >= 4.0) return 0.0;
    const double a = smooth_step(4.0 - s);
    const double b = smooth_step(s - 1.0);
    return a / (a + b);
}

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

BumpComponent::BumpComponent(ComponentLayout layout, std::vector<double> z, std::vector<double> w, double delta)
    : Component(std::move(layout)), z_(std::move(z)), w_(std::move(w)), delta_(delta) {
    if (static_cast<int>(z_.size()) != this->layout().total()) throw std::runtime_error("bump centre has wrong dimension");
    if (static_cast<int>(w_.size()) != this->layout().self_dim) throw std::runtime_error("bump value has wrong dimension");
    if (!(delta_ > 0.0)) throw std::runtime_error("bump radius must be positive");
}

void BumpComponent::eval(const double* y, double* out) const {
    double s = 0.0;
    for (std::size_t i = 0; i < z_.size(); ++i) s += (y[i] - z_[i]) * (y[i] - z_[i]);
    const double phi = bump_profile(s / (delta_ * delta_));
    for (std::size_t i = 0; i < w_.size(); ++i) out[i] = phi * w_[i];
}

std::string BumpComponent::describe() const {
    return "bump(z=" + format_point(z_) + ", delta=" + std::to_string(delta_) + ")";
}

std::vector<std::vector<double>> group_orbit(const ComponentLayout& layout, const std::vector<double>& y,
                                             const VertexGroup& group) {
    std::vector<std::vector<double>> out;
    std::vector<double> buf(y.size());
    for (const auto& g : group.elements()) {
        apply_group_element(layout, g, y.data(), buf.data());
        if (std::find(out.begin(), out.end(), buf) == out.end()) out.push_back(buf);
    }
    return out;
}

SymmetrisedBumpComponent::SymmetrisedBumpComponent(ComponentLayout layout, const std::vector<double>& z,
                                                   const std::vector<std::vector<double>>& avoid,
                                                   std::vector<double> w, double delta, const VertexGroup& group)
    : Component(std::move(layout)), w_(std::move(w)), delta_(delta) {
    const auto& lay = this->layout();
    if (static_cast<int>(z.size()) != lay.total()) throw std::runtime_error("bump centre has wrong dimension");
    if (static_cast<int>(w_.size()) != lay.self_dim) throw std::runtime_error("bump value has wrong dimension");
    if (!(delta_ > 0.0)) throw std::runtime_error("bump radius must be positive");
    centres_ = group_orbit(lay, z, group);
    double d_avoid = std::numeric_limits<double>::infinity();
    for (const auto& a : avoid) {
        if (static_cast<int>(a.size()) != lay.total()) throw std::runtime_error("avoid point has wrong dimension");
        for (const auto& oa : group_orbit(lay, a, group)) {
            for (const auto& c : centres_) {
                double d = euclidean_distance(c, oa);
                if (d <= 0.0) {
                    throw std::runtime_error("bump orbit meets avoid orbit at " + format_point(c) + " (avoid point " +
                                             format_point(a) + ")");
                }
                d_avoid = std::min(d_avoid, d);
            }
        }
    }
    double d_self = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centres_.size(); ++i)
        for (std::size_t j = i + 1; j < centres_.size(); ++j)
            d_self = std::min(d_self, euclidean_distance(centres_[i], centres_[j]));
    // the support radius is 2*delta; keep it off O(A) and the balls disjoint
    delta_ = std::min({delta_, 0.49 * d_avoid, 0.24 * d_self});
}

void SymmetrisedBumpComponent::eval(const double* y, double* out) const {
    // disjoint supports, so the sum equals the profile of the nearest centre
    double phi = 0.0;
    const double inv = 1.0 / (delta_ * delta_);
    for (const auto& c : centres_) {
        double s = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) s += (y[i] - c[i]) * (y[i] - c[i]);
        if (s * inv < 4.0) phi += bump_profile(s * inv);
    }
    for (std::size_t i = 0; i < w_.size(); ++i) out[i] = phi * w_[i];
}

std::string SymmetrisedBumpComponent::describe() const {
    return "symmetrised-bump(centres=" + std::to_string(centres_.size()) + ", delta=" + std::to_string(delta_) + ")";
}

}  // namespace ccn
