#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccn/network.hpp"

namespace ccn {

/// Dense integer matrix, row-major.
struct IntMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::int64_t> a;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
    std::int64_t& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    bool operator==(const IntMatrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

struct LabelledMatrix {
    std::string label;
    IntMatrix m;
};

/// One matrix per arrow type (a_ij = number of arrows of that type j -> i) and
/// one diagonal 0/1 matrix per node type.
[[nodiscard]] std::vector<LabelledMatrix> adjacency_matrices(const Network& net);

/// Basis of the linear admissible maps with one-dimensional nodes: the
/// indicator of each input class, and each arrow-type matrix restricted to
/// heads of one input class. Agrees with adjacency_matrices() spans on
/// irredundant networks.
[[nodiscard]] std::vector<LabelledMatrix> linear_admissible_basis(const Network& net);

/// Rank over the rationals of matrices viewed as flat vectors (fraction-free
/// elimination; throws on overflow).
[[nodiscard]] std::size_t span_rank(const std::vector<IntMatrix>& ms);

[[nodiscard]] bool span_equal(const std::vector<IntMatrix>& a, const std::vector<IntMatrix>& b);

[[nodiscard]] bool in_span(const std::vector<IntMatrix>& basis, const IntMatrix& m);

/// Same node ids in the same order, and equal linear admissible spans.
[[nodiscard]] bool linearly_equivalent(const Network& a, const Network& b);

/// ODE-equivalence, decided through linear equivalence.
[[nodiscard]] bool ode_equivalent(const Network& a, const Network& b);

/// One of the eight ODE-classes of two-node networks.
struct TwoNodeClass {
    int cls = 0;
    int p = 0, q = 0;     ///< class 8 parameters, coprime and positive
    bool swapped = false; ///< node order was reversed to reach the normal form
    std::string description;
};

[[nodiscard]] TwoNodeClass classify_2node(const Network& net);

}  // namespace ccn
