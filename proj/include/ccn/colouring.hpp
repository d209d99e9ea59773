#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ccn/network.hpp"

namespace ccn {

/// A node colouring with canonical colour ids: colours are numbered by first
/// occurrence in node index order, so equal partitions compare equal.
class Colouring {
public:
    Colouring() = default;
    explicit Colouring(std::vector<int> labels);

    static Colouring from_partition(const Partition& p, std::size_t n);
    /// Every node its own colour (the trivial synchrony pattern).
    static Colouring discrete(std::size_t n);
    /// All nodes one colour.
    static Colouring uniform(std::size_t n);

    [[nodiscard]] std::size_t size() const { return labels_.size(); }
    [[nodiscard]] std::size_t num_colours() const { return num_colours_; }
    [[nodiscard]] int colour(std::size_t i) const { return labels_.at(i); }
    [[nodiscard]] const std::vector<int>& labels() const { return labels_; }
    [[nodiscard]] Partition blocks() const;
    /// Smallest node index of each colour, in colour order.
    [[nodiscard]] std::vector<std::size_t> min_representatives() const;

    bool operator==(const Colouring& o) const { return labels_ == o.labels_; }
    bool operator!=(const Colouring& o) const { return labels_ != o.labels_; }
    bool operator<(const Colouring& o) const { return labels_ < o.labels_; }

private:
    std::vector<int> labels_;
    std::size_t num_colours_ = 0;
};

enum class LatticeOrder { Equal, Finer, Coarser, Incomparable };

[[nodiscard]] std::string to_string(LatticeOrder o);

/// Position of a relative to b. Finer means every colour class of a lies in one of b.
[[nodiscard]] LatticeOrder compare(const Colouring& a, const Colouring& b);

/// Common refinement (intersection of the equivalence relations).
[[nodiscard]] Colouring meet(const Colouring& a, const Colouring& b);

/// Finest common coarsening (transitive closure of the union).
[[nodiscard]] Colouring join(const Colouring& a, const Colouring& b);

/// Meet inside the lattice of balanced colourings. The intersection of two
/// balanced colourings need not be balanced, so it gets refined.
[[nodiscard]] Colouring balanced_meet(const Network& net, const Colouring& a, const Colouring& b);

/// Same-coloured nodes have colour-isomorphic input sets.
[[nodiscard]] bool is_balanced(const Network& net, const Colouring& col);

/// Same-coloured pairs (c, d), c < d, whose input sets are not colour-isomorphic.
[[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> unbalanced_pairs(const Network& net,
                                                                               const Colouring& col);

/// Coarsest balanced colouring finer than col.
[[nodiscard]] Colouring coarsest_balanced_refinement(const Network& net, const Colouring& col);

/// All balanced colourings, sorted canonically. Throws above cap nodes.
[[nodiscard]] std::vector<Colouring> enumerate_balanced(const Network& net, std::size_t cap = 10);

/// Throws if the colouring has the wrong size or identifies nodes that are
/// not state equivalent.
void check_colouring(const Network& net, const Colouring& col);

/// Renders the colouring as "{{1,2},{3}}" using node ids.
[[nodiscard]] std::string format_colouring(const Network& net, const Colouring& col);

/// All set partitions of {0..n-1} as canonical colourings.
[[nodiscard]] std::vector<Colouring> all_colourings(std::size_t n);

}  // namespace ccn
