#pragma once

#include <cstddef>
#include <vector>

#include "ccn/admissible.hpp"
#include "ccn/colouring.hpp"
#include "ccn/orbit.hpp"

namespace ccn {

/// Where each node's coordinates live in a full state, and which nodes may
/// be compared at all.
struct NodeLayout {
    std::vector<int> offsets;
    std::vector<int> dims;
    Partition state_classes;
};

[[nodiscard]] NodeLayout node_layout(const AdmissibleSystem& sys);

/// Per node: max over samples of the distance to the node's sample mean.
[[nodiscard]] std::vector<double> node_amplitudes(const NodeLayout& lay, const std::vector<std::vector<double>>& xs);

struct SyncTolerance {
    double rel = 1e-8;     ///< relative to the larger amplitude of the pair
    double steady = 1e-8;  ///< absolute, when both nodes are below this amplitude
};

/// Pair threshold used by the detectors.
[[nodiscard]] double pair_threshold(double amp_c, double amp_d, const SyncTolerance& tol);

/// Largest pairwise distance sup_k |x_c - x_d| over the samples.
[[nodiscard]] double sup_distance(const NodeLayout& lay, const std::vector<std::vector<double>>& xs, std::size_t c,
                                  std::size_t d);

/// c, d share a colour iff they are state equivalent and sup |x_c - x_d| stays
/// below the pair threshold on the samples. amps are taken from amp_source
/// (normally the whole orbit) when given.
[[nodiscard]] Colouring detect_synchrony(const NodeLayout& lay, const std::vector<std::vector<double>>& xs,
                                         const SyncTolerance& tol = {},
                                         const std::vector<double>* amps = nullptr);

/// Largest normalised sup-distance among same-coloured pairs of col.
[[nodiscard]] double synchrony_gap(const NodeLayout& lay, const std::vector<std::vector<double>>& xs,
                                   const Colouring& col, const std::vector<double>& amps, const SyncTolerance& tol);

[[nodiscard]] std::vector<std::size_t> detect_steady_nodes(const NodeLayout& lay,
                                                           const std::vector<std::vector<double>>& xs,
                                                           double tol = 1e-8);

/// Theta(c,d): fractions theta in [0,1) with x_c(t) = x_d(t + theta T).
struct PhaseSet {
    std::vector<double> thetas;
    std::vector<double> residuals;  ///< normalised sup residual at each theta
    bool full_circle = false;       ///< both nodes steady and equal
};

[[nodiscard]] PhaseSet detect_phase(const OrbitSamples& orbit, const NodeLayout& lay, std::size_t c, std::size_t d,
                                    double tol = 1e-6, double steady_tol = 1e-8);

/// Normalised sup residual of a candidate phase.
[[nodiscard]] double phase_residual(const OrbitSamples& orbit, const NodeLayout& lay, std::size_t c, std::size_t d,
                                    double theta, double scale);

/// At least two maximal transitive components carry oscillating nodes.
[[nodiscard]] bool structural_degeneracy(const Network& net, const std::vector<double>& amps, double steady_tol = 1e-8);

}  // namespace ccn
