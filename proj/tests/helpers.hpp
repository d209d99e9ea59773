#pragma once

#include <string>
#include <tuple>
#include <vector>

#include <cmath>
#include <memory>
#include <random>

#include "ccn/admissible.hpp"
#include "ccn/colouring.hpp"
#include "ccn/io.hpp"
#include "ccn/network.hpp"

namespace testing {

/// Network with nodes 1..n of one type and arrows (tail, head, type).
inline ccn::Network make_net(int n, const std::vector<std::tuple<int, int, std::string>>& arrows,
                             const std::vector<std::string>& types = {}) {
    ccn::Network net;
    for (int i = 1; i <= n; ++i) net.add_node(i, types.empty() ? "A" : types.at(static_cast<std::size_t>(i - 1)));
    for (const auto& [t, h, ty] : arrows) net.add_arrow(t, h, ty);
    return net;
}

inline ccn::Colouring col(const ccn::Network& net, const std::string& s) { return ccn::io::parse_colouring(net, s); }

inline std::vector<std::size_t> idx(const ccn::Network& net, const std::vector<int>& ids) {
    std::vector<std::size_t> out;
    for (int id : ids) out.push_back(net.index_of(id));
    return out;
}

/// Partition given by node ids, converted to indices.
inline ccn::Partition part(const ccn::Network& net, const std::vector<std::vector<int>>& blocks) {
    ccn::Partition p;
    for (const auto& b : blocks) p.push_back(idx(net, b));
    return ccn::partition_from_labels(ccn::labels_from_partition(p, net.size()));
}

/// Random smooth admissible system with dimension d on every node. Components
/// are random nonlinear maps averaged over the vertex group.
inline ccn::AdmissibleSystem random_system(const ccn::Network& net, std::mt19937_64& rng, int d = 1) {
    std::vector<int> dims(net.size(), d);
    auto classes = ccn::input_classes(net);
    std::vector<ccn::ComponentPtr> comps;
    std::normal_distribution<double> g(0.0, 1.0);
    for (const auto& cls : classes) {
        const std::size_t c = cls.front();
        ccn::ComponentLayout lay{d, std::vector<int>(net.inputs(c).size(), d)};
        const int m = lay.total();
        std::vector<double> a(static_cast<std::size_t>(d * m)), b(static_cast<std::size_t>(d * m));
        for (auto& v : a) v = g(rng);
        for (auto& v : b) v = g(rng);
        auto fn = [a, b, m, d](const double* y, double* out) {
            for (int i = 0; i < d; ++i) {
                double s = 0.0, q = 0.0;
                for (int j = 0; j < m; ++j) {
                    s += a[static_cast<std::size_t>(i * m + j)] * y[j];
                    q += b[static_cast<std::size_t>(i * m + j)] * y[j] * y[j];
                }
                out[i] = std::tanh(s) + 0.3 * q - 0.1 * y[i];
            }
        };
        auto base = std::make_shared<ccn::FunctionComponent>(lay, fn, "random");
        comps.push_back(std::make_shared<ccn::SymmetrisedComponent>(base, ccn::vertex_group(net, c)));
    }
    return ccn::AdmissibleSystem(net, dims, comps);
}

}  // namespace testing
