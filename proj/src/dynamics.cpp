#include "ccn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace ccn {

VectorField as_field(const AdmissibleSystem& sys) {
    // owns a copy so the field may outlive its argument
    auto ptr = std::make_shared<const AdmissibleSystem>(sys);
    return {sys.state_dim(), [ptr](const double* x, double* dx) { ptr->eval(x, dx); }};
}

namespace {

struct Rk4 {
    explicit Rk4(std::size_t n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}

    void step(const VectorField& f, double* x, double h) {
        const std::size_t n = k1.size();
        f(x, k1.data());
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
        f(tmp.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
        f(tmp.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
        f(tmp.data(), k4.data());
        for (std::size_t i = 0; i < n; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    std::vector<double> k1, k2, k3, k4, tmp;
};

void guard(const double* x, std::size_t n, double t, double blowup) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x[i])) throw std::runtime_error("non-finite state at t=" + std::to_string(t));
        if (std::abs(x[i]) > blowup) throw std::runtime_error("state blew up at t=" + std::to_string(t));
    }
}

}  // namespace

Trajectory integrate(const VectorField& f, const std::vector<double>& x0, double t_end, const IntegratorOptions& opts) {
    if (x0.size() != f.dim) throw std::runtime_error("initial state has the wrong dimension");
    if (!(opts.h > 0.0)) throw std::runtime_error("step must be positive");
    if (t_end < 0.0) throw std::runtime_error("negative integration time");
    const std::size_t n = f.dim;
    Rk4 rk(n), rk_half(n);
    Trajectory tr;
    tr.dim = n;
    std::vector<double> x = x0, big(n), half(n);
    guard(x.data(), n, 0.0, opts.blowup);
    tr.t.push_back(0.0);
    tr.x.push_back(x);
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / opts.h - 1e-12));
    const double h = steps ? t_end / static_cast<double>(steps) : 0.0;
    const std::size_t stride = std::max<std::size_t>(1, opts.sample_stride);
    for (std::size_t s = 1; s <= steps; ++s) {
        if (opts.error_check_every && (s - 1) % opts.error_check_every == 0) {
            big = x;
            half = x;
            rk_half.step(f, big.data(), h);
            rk_half.step(f, half.data(), 0.5 * h);
            rk_half.step(f, half.data(), 0.5 * h);
            double e = 0.0;
            for (std::size_t i = 0; i < n; ++i) e = std::max(e, std::abs(big[i] - half[i]) / 15.0);
            tr.max_local_error = std::max(tr.max_local_error, e);
        }
        rk.step(f, x.data(), h);
        const double t = h * static_cast<double>(s);
        guard(x.data(), n, t, opts.blowup);
        if (s % stride == 0 || s == steps) {
            tr.t.push_back(t);
            tr.x.push_back(x);
        }
    }
    tr.steps = steps;
    return tr;
}

void flow(const VectorField& f, double* x, double T, double h, double blowup) {
    if (T <= 0.0) return;
    const auto steps = static_cast<std::size_t>(std::ceil(T / h - 1e-12));
    const double hh = T / static_cast<double>(steps);
    Rk4 rk(f.dim);
    for (std::size_t s = 0; s < steps; ++s) rk.step(f, x, hh);
    guard(x, f.dim, T, blowup);
}

void write_csv(const Trajectory& tr, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.precision(17);
    os << "t";
    for (std::size_t i = 0; i < tr.dim; ++i) os << ",x" << (i + 1);
    os << '\n';
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        os << tr.t[k];
        for (double v : tr.x[k]) os << ',' << v;
        os << '\n';
    }
}

}  // namespace ccn
