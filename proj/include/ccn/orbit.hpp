#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccn/dynamics.hpp"

namespace ccn {

struct OrbitOptions {
    double h = 1e-3;          ///< integrator step
    double tol = 1e-10;       ///< Newton convergence on |flow_T(x) - x|
    int max_iter = 50;
    double fd_step = 1e-6;    ///< relative finite-difference step
    /// Poincare section through section_point with normal section_normal;
    /// defaults to the guess and the field there.
    std::optional<std::vector<double>> section_point;
    std::optional<std::vector<double>> section_normal;
    /// Shooting Jacobian to reuse (chord iterations); recomputed when the
    /// chord iteration stalls.
    std::optional<Eigen::MatrixXd> chord_jacobian;
};

struct PeriodicOrbit {
    std::vector<double> anchor;
    double period = 0.0;
    std::vector<double> section_point;
    std::vector<double> section_normal;
    int iterations = 0;
    double residual = 0.0;
    std::vector<std::complex<double>> multipliers;  ///< filled by floquet()
};

/// Newton shooting on (x, T) with a section phase condition. Throws when the
/// iteration does not converge or collapses onto an equilibrium.
[[nodiscard]] PeriodicOrbit find_periodic_orbit(const VectorField& f, const std::vector<double>& x_guess,
                                                double T_guess, const OrbitOptions& opts = {});

/// Finite-difference Jacobian of the time-T flow at x (central differences).
[[nodiscard]] Eigen::MatrixXd monodromy(const VectorField& f, const std::vector<double>& x, double T, double h,
                                        double fd_step = 1e-6);

/// [[M - I, f(x)], [n^T, 0]] at a periodic point.
[[nodiscard]] Eigen::MatrixXd shooting_jacobian(const Eigen::MatrixXd& M, const std::vector<double>& fx,
                                                const std::vector<double>& normal);

/// Eigenvalues of a monodromy matrix sorted by distance to 1.
[[nodiscard]] std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXd& M);

/// Multipliers of the orbit (also stored into orbit.multipliers). If M is
/// given, the monodromy is written there.
std::vector<std::complex<double>> floquet(const VectorField& f, PeriodicOrbit& orbit, double h,
                                          double fd_step = 1e-6, Eigen::MatrixXd* M = nullptr);

enum class Verdict { Hyperbolic, Borderline, NonHyperbolic };

[[nodiscard]] std::string to_string(Verdict v);

struct HyperbolicityReport {
    Verdict verdict = Verdict::NonHyperbolic;
    double trivial_distance = 0.0;  ///< |mu_0 - 1| for the multiplier nearest 1
    double min_gap = 0.0;           ///< min over the rest of ||mu| - 1|
    int near_one = 0;               ///< multipliers within tol_triv of 1
    bool quasi_hyperbolic = false;  ///< exactly two at 1, the rest off the circle
    bool structural_warning = false;
    std::vector<std::string> notes;
};

[[nodiscard]] HyperbolicityReport classify_multipliers(const std::vector<std::complex<double>>& mu,
                                                       double tol_triv = 1e-5, double tol_hyp = 1e-3);

/// Uniform period grid of an orbit with exact field values, interpolated by
/// cubic Hermite splines.
class OrbitSamples {
public:
    OrbitSamples() = default;

    /// Integrates one period from the anchor onto an n-point grid.
    static OrbitSamples sample(const VectorField& f, const PeriodicOrbit& orbit, double h, std::size_t n = 1024);

    /// From explicit grid values; used for synthetic and sheared orbits.
    static OrbitSamples from_grid(const VectorField& f, double period, std::vector<std::vector<double>> x);

    [[nodiscard]] double period() const { return period_; }
    [[nodiscard]] std::size_t size() const { return x_.size(); }
    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] const std::vector<std::vector<double>>& states() const { return x_; }
    [[nodiscard]] const std::vector<double>& state(std::size_t k) const { return x_.at(k); }
    [[nodiscard]] double time(std::size_t k) const { return period_ * static_cast<double>(k) / static_cast<double>(x_.size()); }
    /// |x(T) - x(0)| seen when sampling.
    [[nodiscard]] double closure_error() const { return closure_; }

    /// State at time t (periodic).
    void at(double t, double* out) const;
    [[nodiscard]] std::vector<double> at(double t) const;

    /// States at m uniformly spaced times in [t0 - half, t0 + half].
    [[nodiscard]] std::vector<std::vector<double>> window(double t0, double half, std::size_t m = 129) const;

    /// Grid index maximising score(k).
    [[nodiscard]] std::size_t argmax(const std::function<double(const std::vector<double>&)>& score) const;

    /// Sheared orbit (x(t), x(t + theta T)) for the doubled field.
    [[nodiscard]] OrbitSamples shear(const VectorField& doubled, double theta) const;

private:
    double period_ = 0.0;
    std::size_t dim_ = 0;
    double closure_ = 0.0;
    std::vector<std::vector<double>> x_, dx_;
};

}  // namespace ccn
