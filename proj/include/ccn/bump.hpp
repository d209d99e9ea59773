#pragma once

#include <vector>

#include "ccn/admissible.hpp"

namespace ccn {

/// Smooth profile: 1 on [0,1], 0 on [4,inf), strictly between in (1,4).
[[nodiscard]] double bump_profile(double s);

/// w * profile(|y - z|^2 / delta^2): equals w on the delta-ball around z and
/// vanishes outside the 2*delta-ball.
class BumpComponent : public Component {
public:
    BumpComponent(ComponentLayout layout, std::vector<double> z, std::vector<double> w, double delta);
    void eval(const double* y, double* out) const override;
    [[nodiscard]] std::string describe() const override;

private:
    std::vector<double> z_, w_;
    double delta_;
};

/// Vertex-group invariant bump: equals w near every point of the orbit O(z)
/// and vanishes on the orbit O(A) of an avoid set.
class SymmetrisedBumpComponent : public Component {
public:
    /// delta is shrunk so that supports stay disjoint from O(A) and from each
    /// other. Throws if O(z) meets O(A).
    SymmetrisedBumpComponent(ComponentLayout layout, const std::vector<double>& z,
                             const std::vector<std::vector<double>>& avoid, std::vector<double> w, double delta,
                             const VertexGroup& group);
    void eval(const double* y, double* out) const override;
    [[nodiscard]] std::string describe() const override;

    [[nodiscard]] double delta() const { return delta_; }
    [[nodiscard]] const std::vector<std::vector<double>>& centres() const { return centres_; }

private:
    std::vector<std::vector<double>> centres_;
    std::vector<double> w_;
    double delta_;
};

/// Distinct points of the vertex-group orbit of y.
[[nodiscard]] std::vector<std::vector<double>> group_orbit(const ComponentLayout& layout, const std::vector<double>& y,
                                                           const VertexGroup& group);

[[nodiscard]] double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ccn
