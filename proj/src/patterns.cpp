#include "ccn/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ccn {

NodeLayout node_layout(const AdmissibleSystem& sys) {
    NodeLayout lay;
    lay.offsets = sys.offsets();
    lay.dims = sys.dims();
    lay.state_classes = state_equivalence(sys.network());
    return lay;
}

std::vector<double> node_amplitudes(const NodeLayout& lay, const std::vector<std::vector<double>>& xs) {
    const std::size_t n = lay.dims.size();
    std::vector<double> amp(n, 0.0);
    if (xs.empty()) return amp;
    for (std::size_t c = 0; c < n; ++c) {
        const auto off = static_cast<std::size_t>(lay.offsets[c]);
        const auto d = static_cast<std::size_t>(lay.dims[c]);
        std::vector<double> mean(d, 0.0);
        for (const auto& x : xs)
            for (std::size_t i = 0; i < d; ++i) mean[i] += x[off + i];
        for (auto& m : mean) m /= static_cast<double>(xs.size());
        for (const auto& x : xs) {
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i) s += (x[off + i] - mean[i]) * (x[off + i] - mean[i]);
            amp[c] = std::max(amp[c], std::sqrt(s));
        }
    }
    return amp;
}

double pair_threshold(double amp_c, double amp_d, const SyncTolerance& tol) {
    const double a = std::max(amp_c, amp_d);
    return a < tol.steady ? tol.steady : tol.rel * a;
}

double sup_distance(const NodeLayout& lay, const std::vector<std::vector<double>>& xs, std::size_t c, std::size_t d) {
    const auto oc = static_cast<std::size_t>(lay.offsets[c]);
    const auto od = static_cast<std::size_t>(lay.offsets[d]);
    const auto k = static_cast<std::size_t>(lay.dims[c]);
    double m = 0.0;
    for (const auto& x : xs) {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += (x[oc + i] - x[od + i]) * (x[oc + i] - x[od + i]);
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

Colouring detect_synchrony(const NodeLayout& lay, const std::vector<std::vector<double>>& xs,
                           const SyncTolerance& tol, const std::vector<double>* amps) {
    const std::size_t n = lay.dims.size();
    std::vector<double> own;
    if (!amps) {
        own = node_amplitudes(lay, xs);
        amps = &own;
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& cls : lay.state_classes) {
        for (std::size_t i = 0; i < cls.size(); ++i) {
            for (std::size_t j = i + 1; j < cls.size(); ++j) {
                auto c = cls[i], d = cls[j];
                if (sup_distance(lay, xs, c, d) < pair_threshold((*amps)[c], (*amps)[d], tol)) {
                    parent[find(d)] = find(c);
                }
            }
        }
    }
    std::vector<int> lab(n);
    for (std::size_t c = 0; c < n; ++c) lab[c] = static_cast<int>(find(c));
    return Colouring(lab);
}

double synchrony_gap(const NodeLayout& lay, const std::vector<std::vector<double>>& xs, const Colouring& col,
                     const std::vector<double>& amps, const SyncTolerance& tol) {
    double gap = 0.0;
    for (const auto& b : col.blocks()) {
        for (std::size_t i = 0; i < b.size(); ++i) {
            for (std::size_t j = i + 1; j < b.size(); ++j) {
                const double a = std::max(amps[b[i]], amps[b[j]]);
                const double scale = a < tol.steady ? 1.0 : a;
                gap = std::max(gap, sup_distance(lay, xs, b[i], b[j]) / scale);
            }
        }
    }
    return gap;
}

std::vector<std::size_t> detect_steady_nodes(const NodeLayout& lay, const std::vector<std::vector<double>>& xs,
                                             double tol) {
    auto amp = node_amplitudes(lay, xs);
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < amp.size(); ++c)
        if (amp[c] < tol) out.push_back(c);
    return out;
}

double phase_residual(const OrbitSamples& orbit, const NodeLayout& lay, std::size_t c, std::size_t d, double theta,
                      double scale) {
    const auto oc = static_cast<std::size_t>(lay.offsets[c]);
    const auto od = static_cast<std::size_t>(lay.offsets[d]);
    const auto k = static_cast<std::size_t>(lay.dims[c]);
    std::vector<double> y(orbit.dim());
    double m = 0.0;
    for (std::size_t j = 0; j < orbit.size(); ++j) {
        const auto& x = orbit.state(j);
        orbit.at(orbit.time(j) + theta * orbit.period(), y.data());
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += (x[oc + i] - y[od + i]) * (x[oc + i] - y[od + i]);
        m = std::max(m, s);
    }
    return std::sqrt(m) / scale;
}

PhaseSet detect_phase(const OrbitSamples& orbit, const NodeLayout& lay, std::size_t c, std::size_t d, double tol,
                      double steady_tol) {
    PhaseSet out;
    if (lay.dims.at(c) != lay.dims.at(d)) return out;
    bool comparable = false;
    for (const auto& cls : lay.state_classes) {
        bool hc = std::find(cls.begin(), cls.end(), c) != cls.end();
        bool hd = std::find(cls.begin(), cls.end(), d) != cls.end();
        if (hc && hd) comparable = true;
    }
    if (!comparable) return out;
    auto amps = node_amplitudes(lay, orbit.states());
    const bool sc = amps[c] < steady_tol, sd = amps[d] < steady_tol;
    if (sc || sd) {
        if (sc && sd && sup_distance(lay, orbit.states(), c, d) < steady_tol) {
            out.full_circle = true;
        }
        return out;
    }
    const double scale = std::max(amps[c], amps[d]);
    const std::size_t N = orbit.size();
    const std::size_t coarse = 512;
    std::vector<double> r(coarse);
    for (std::size_t j = 0; j < coarse; ++j) {
        r[j] = phase_residual(orbit, lay, c, d, static_cast<double>(j) / static_cast<double>(coarse), scale);
    }
    (void)N;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (std::size_t j = 0; j < coarse; ++j) {
        const double left = r[(j + coarse - 1) % coarse], right = r[(j + 1) % coarse];
        if (!(r[j] <= left && r[j] < right) || r[j] > 0.1) continue;
        double a = (static_cast<double>(j) - 1.0) / coarse, b = (static_cast<double>(j) + 1.0) / coarse;
        double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
        double f1 = phase_residual(orbit, lay, c, d, x1, scale), f2 = phase_residual(orbit, lay, c, d, x2, scale);
        for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = phase_residual(orbit, lay, c, d, x1, scale);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = phase_residual(orbit, lay, c, d, x2, scale);
            }
        }
        double th = f1 < f2 ? x1 : x2;
        double best = std::min({f1, f2, r[j]});
        if (r[j] <= best) th = static_cast<double>(j) / coarse;
        if (best >= tol) continue;
        th -= std::floor(th);
        if (th > 1.0 - 1e-9) th = 0.0;
        bool dup = false;
        for (double e : out.thetas) {
            double dd = std::abs(e - th);
            if (std::min(dd, 1.0 - dd) < 1e-6) dup = true;
        }
        if (dup) continue;
        out.thetas.push_back(th);
        out.residuals.push_back(best);
    }
    // sort by theta
    std::vector<std::size_t> idx(out.thetas.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return out.thetas[a] < out.thetas[b]; });
    PhaseSet sorted;
    for (auto i : idx) {
        sorted.thetas.push_back(out.thetas[i]);
        sorted.residuals.push_back(out.residuals[i]);
    }
    return sorted;
}

bool structural_degeneracy(const Network& net, const std::vector<double>& amps, double steady_tol) {
    auto dag = transitive_components(net);
    if (dag.maximal.size() < 2) return false;
    int osc = 0;
    for (auto k : dag.maximal) {
        bool any = false;
        for (auto c : dag.components[k]) any = any || amps.at(c) >= steady_tol;
        if (any) ++osc;
    }
    return osc >= 2;
}

}  // namespace ccn
