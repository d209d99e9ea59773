#include "ccn/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccn {

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double two_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

struct ShootState {
    std::vector<double> x, y;  // y = flow_T(x)
    double T = 0.0;
    double res = 0.0;
};

void evaluate(const VectorField& f, ShootState& s, const std::vector<double>& s0, const std::vector<double>& n,
              double h) {
    s.y = s.x;
    flow(f, s.y.data(), s.T, h);
    double r = 0.0;
    double ph = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        r = std::max(r, std::abs(s.y[i] - s.x[i]));
        ph += n[i] * (s.x[i] - s0[i]);
    }
    s.res = std::max(r, std::abs(ph));
}

}  // namespace

Eigen::MatrixXd monodromy(const VectorField& f, const std::vector<double>& x, double T, double h, double fd_step) {
    const std::size_t n = f.dim;
    const double step = fd_step * std::max(1.0, inf_norm(x));
    Eigen::MatrixXd M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<double> xp(n), xm(n);
    for (std::size_t j = 0; j < n; ++j) {
        xp = x;
        xm = x;
        xp[j] += step;
        xm[j] -= step;
        flow(f, xp.data(), T, h);
        flow(f, xm.data(), T, h);
        for (std::size_t i = 0; i < n; ++i) {
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (xp[i] - xm[i]) / (2.0 * step);
        }
    }
    return M;
}

Eigen::MatrixXd shooting_jacobian(const Eigen::MatrixXd& M, const std::vector<double>& fx,
                                  const std::vector<double>& normal) {
    const auto n = M.rows();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
    J.topLeftCorner(n, n) = M - Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        J(i, n) = fx[static_cast<std::size_t>(i)];
        J(n, i) = normal[static_cast<std::size_t>(i)];
    }
    return J;
}

PeriodicOrbit find_periodic_orbit(const VectorField& f, const std::vector<double>& x_guess, double T_guess,
                                  const OrbitOptions& opts) {
    const std::size_t n = f.dim;
    if (x_guess.size() != n) throw std::runtime_error("initial guess has the wrong dimension");
    if (!(T_guess > 0.0)) throw std::runtime_error("period guess must be positive");
    std::vector<double> fx(n);
    f(x_guess.data(), fx.data());
    const double scale = std::max(1.0, inf_norm(x_guess));
    if (two_norm(fx) < 1e-10 * scale) {
        throw std::runtime_error("orbit collapsed: the initial guess is an equilibrium");
    }
    std::vector<double> s0 = opts.section_point.value_or(x_guess);
    std::vector<double> nrm = opts.section_normal.value_or(fx);
    {
        double nn = two_norm(nrm);
        if (nn == 0.0) throw std::runtime_error("degenerate section normal");
        for (auto& v : nrm) v /= nn;
    }

    ShootState cur;
    cur.x = x_guess;
    cur.T = T_guess;
    evaluate(f, cur, s0, nrm, opts.h);

    Eigen::MatrixXd J;
    bool chord = false;
    if (opts.chord_jacobian) {
        J = *opts.chord_jacobian;
        chord = true;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> dec;
    if (chord) dec.compute(J);

    PeriodicOrbit out;
    int it = 0;
    for (; it < opts.max_iter && !(cur.res < opts.tol); ++it) {
        if (!chord) {
            auto M = monodromy(f, cur.x, cur.T, opts.h, opts.fd_step);
            std::vector<double> fy(n);
            f(cur.y.data(), fy.data());
            J = shooting_jacobian(M, fy, nrm);
            dec.compute(J);
        }
        Eigen::VectorXd F(static_cast<Eigen::Index>(n + 1));
        double ph = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            F(static_cast<Eigen::Index>(i)) = cur.y[i] - cur.x[i];
            ph += nrm[i] * (cur.x[i] - s0[i]);
        }
        F(static_cast<Eigen::Index>(n)) = ph;
        Eigen::VectorXd dz = dec.solve(-F);

        ShootState trial;
        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k < 8; ++k) {
            trial.x = cur.x;
            for (std::size_t i = 0; i < n; ++i) trial.x[i] += lambda * dz(static_cast<Eigen::Index>(i));
            trial.T = cur.T + lambda * dz(static_cast<Eigen::Index>(n));
            if (trial.T <= 1e-8 * std::max(1.0, T_guess)) {
                lambda *= 0.5;
                continue;
            }
            evaluate(f, trial, s0, nrm, opts.h);
            if (trial.res < cur.res || k == 7) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) throw std::runtime_error("orbit collapsed: period went to zero");
        const double ratio = trial.res / std::max(cur.res, 1e-300);
        cur = std::move(trial);
        if (chord && ratio > 0.5) chord = false;  // stalled, switch to full Newton
        f(cur.x.data(), fx.data());
        if (two_norm(fx) < 1e-10 * std::max(1.0, inf_norm(cur.x))) {
            throw std::runtime_error("orbit collapsed onto an equilibrium");
        }
    }
    if (!(cur.res < opts.tol)) {
        throw std::runtime_error("periodic orbit search did not converge (residual " + std::to_string(cur.res) +
                                 " after " + std::to_string(it) + " iterations)");
    }
    out.anchor = cur.x;
    out.period = cur.T;
    out.section_point = s0;
    out.section_normal = nrm;
    out.iterations = it;
    out.residual = cur.res;
    return out;
}

std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXd& M) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation failed");
    std::vector<std::complex<double>> mu;
    for (Eigen::Index i = 0; i < M.rows(); ++i) mu.push_back(es.eigenvalues()(i));
    std::stable_sort(mu.begin(), mu.end(), [](const auto& a, const auto& b) {
        return std::abs(a - 1.0) < std::abs(b - 1.0);
    });
    return mu;
}

std::vector<std::complex<double>> floquet(const VectorField& f, PeriodicOrbit& orbit, double h, double fd_step,
                                          Eigen::MatrixXd* Mout) {
    auto M = monodromy(f, orbit.anchor, orbit.period, h, fd_step);
    orbit.multipliers = sorted_eigenvalues(M);
    if (Mout) *Mout = M;
    return orbit.multipliers;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Hyperbolic: return "hyperbolic";
        case Verdict::Borderline: return "borderline";
        case Verdict::NonHyperbolic: return "non-hyperbolic";
    }
    return "?";
}

HyperbolicityReport classify_multipliers(const std::vector<std::complex<double>>& mu, double tol_triv,
                                         double tol_hyp) {
    HyperbolicityReport rep;
    if (mu.empty()) throw std::runtime_error("no multipliers");
    rep.trivial_distance = std::abs(mu[0] - 1.0);
    if (rep.trivial_distance > tol_triv) {
        rep.notes.push_back("no multiplier within " + std::to_string(tol_triv) + " of 1; orbit may be inaccurate");
    }
    rep.min_gap = mu.size() > 1 ? 1e300 : 0.0;
    bool any_on = false, any_border = false;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (std::abs(mu[i] - 1.0) <= tol_triv) ++rep.near_one;
        if (i == 0) continue;
        double d = std::abs(std::abs(mu[i]) - 1.0);
        rep.min_gap = std::min(rep.min_gap, d);
        if (d <= tol_triv) any_on = true;
        else if (d <= tol_hyp) any_border = true;
    }
    if (any_on) rep.verdict = Verdict::NonHyperbolic;
    else if (any_border) rep.verdict = Verdict::Borderline;
    else rep.verdict = Verdict::Hyperbolic;
    if (rep.trivial_distance > tol_triv && rep.verdict == Verdict::Hyperbolic) rep.verdict = Verdict::Borderline;
    if (rep.near_one == 2) {
        bool rest_off = true;
        for (std::size_t i = 2; i < mu.size(); ++i) rest_off = rest_off && std::abs(std::abs(mu[i]) - 1.0) > tol_hyp;
        rep.quasi_hyperbolic = rest_off;
    }
    return rep;
}

OrbitSamples OrbitSamples::sample(const VectorField& f, const PeriodicOrbit& orbit, double h, std::size_t n) {
    if (n < 8) throw std::runtime_error("orbit grid too coarse");
    OrbitSamples s;
    s.period_ = orbit.period;
    s.dim_ = f.dim;
    std::vector<double> x = orbit.anchor;
    const double dt = orbit.period / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        s.x_.push_back(x);
        flow(f, x.data(), dt, h);
    }
    double e = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) e = std::max(e, std::abs(x[i] - orbit.anchor[i]));
    s.closure_ = e;
    s.dx_.resize(n, std::vector<double>(f.dim));
    for (std::size_t k = 0; k < n; ++k) f(s.x_[k].data(), s.dx_[k].data());
    return s;
}

OrbitSamples OrbitSamples::from_grid(const VectorField& f, double period, std::vector<std::vector<double>> x) {
    OrbitSamples s;
    s.period_ = period;
    s.dim_ = f.dim;
    s.x_ = std::move(x);
    s.dx_.resize(s.x_.size(), std::vector<double>(f.dim));
    for (std::size_t k = 0; k < s.x_.size(); ++k) f(s.x_[k].data(), s.dx_[k].data());
    return s;
}

void OrbitSamples::at(double t, double* out) const {
    const std::size_t n = x_.size();
    double u = t / period_;
    u -= std::floor(u);
    u *= static_cast<double>(n);
    auto k = static_cast<std::size_t>(u);
    if (k >= n) k = n - 1;
    const double s = u - static_cast<double>(k);
    const std::size_t k1 = (k + 1) % n;
    const double dt = period_ / static_cast<double>(n);
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const auto& a = x_[k];
    const auto& b = x_[k1];
    const auto& da = dx_[k];
    const auto& db = dx_[k1];
    for (std::size_t i = 0; i < dim_; ++i) {
        out[i] = h00 * a[i] + h10 * dt * da[i] + h01 * b[i] + h11 * dt * db[i];
    }
}

std::vector<double> OrbitSamples::at(double t) const {
    std::vector<double> v(dim_);
    at(t, v.data());
    return v;
}

std::vector<std::vector<double>> OrbitSamples::window(double t0, double half, std::size_t m) const {
    std::vector<std::vector<double>> out;
    for (std::size_t k = 0; k < m; ++k) {
        double t = t0 - half + 2.0 * half * static_cast<double>(k) / static_cast<double>(m - 1);
        out.push_back(at(t));
    }
    return out;
}

std::size_t OrbitSamples::argmax(const std::function<double(const std::vector<double>&)>& score) const {
    std::size_t best = 0;
    double bv = -1e300;
    for (std::size_t k = 0; k < x_.size(); ++k) {
        double v = score(x_[k]);
        if (v > bv) {
            bv = v;
            best = k;
        }
    }
    return best;
}

OrbitSamples OrbitSamples::shear(const VectorField& doubled, double theta) const {
    if (doubled.dim != 2 * dim_) throw std::runtime_error("doubled field has the wrong dimension");
    std::vector<std::vector<double>> xs;
    std::vector<double> y(dim_);
    for (std::size_t k = 0; k < x_.size(); ++k) {
        auto row = x_[k];
        at(time(k) + theta * period_, y.data());
        row.insert(row.end(), y.begin(), y.end());
        xs.push_back(std::move(row));
    }
    return from_grid(doubled, period_, std::move(xs));
}

}  // namespace ccn
