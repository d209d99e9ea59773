#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccn/admissible.hpp"

namespace ccn {

/// Autonomous vector field on R^dim.
struct VectorField {
    std::size_t dim = 0;
    std::function<void(const double*, double*)> f;

    void operator()(const double* x, double* dx) const { f(x, dx); }
};

[[nodiscard]] VectorField as_field(const AdmissibleSystem& sys);

struct IntegratorOptions {
    double h = 1e-3;                   ///< fixed step
    std::size_t sample_stride = 1;     ///< keep every n-th step
    double blowup = 1e8;               ///< abort when |x|_inf exceeds this
    std::size_t error_check_every = 64;  ///< step-halving estimate cadence (0 = never)
};

struct Trajectory {
    std::size_t dim = 0;
    std::vector<double> t;
    std::vector<std::vector<double>> x;
    double max_local_error = 0.0;  ///< largest step-halving estimate seen
    std::size_t steps = 0;
};

/// Classical RK4 with fixed step. The final step is shortened to land on t_end.
/// Throws on non-finite state or blow-up.
[[nodiscard]] Trajectory integrate(const VectorField& f, const std::vector<double>& x0, double t_end,
                                   const IntegratorOptions& opts = {});

/// Time-T flow; uses ceil(T/h) equal steps.
void flow(const VectorField& f, double* x, double T, double h, double blowup = 1e8);

/// Writes t, x1..xn as CSV.
void write_csv(const Trajectory& tr, const std::string& path);

}  // namespace ccn
