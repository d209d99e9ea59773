#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ccn {

/// A partition of node indices. Blocks are sorted, and ordered by their
/// smallest element.
using Partition = std::vector<std::vector<std::size_t>>;

/// A permutation of node indices, perm[i] is the image of i.
using Permutation = std::vector<std::size_t>;

struct Node {
    int id = 0;
    std::string type;
};

struct Arrow {
    int id = 0;
    std::size_t tail = 0;
    std::size_t head = 0;
    std::string type;
};

/// Typed directed multigraph. Nodes are addressed by insertion index;
/// external ids are kept for I/O and tie-breaking.
class Network {
public:
    Network() = default;

    /// Adds a node and returns its index. Throws on duplicate id.
    std::size_t add_node(int id, std::string type);

    /// Adds an arrow between node ids. Throws on dangling endpoints.
    /// An arrow id of -1 means "next free id".
    std::size_t add_arrow(int tail_id, int head_id, std::string type, int arrow_id = -1);

    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
    [[nodiscard]] const std::vector<Arrow>& arrows() const { return arrows_; }
    [[nodiscard]] const Node& node(std::size_t i) const { return nodes_.at(i); }
    [[nodiscard]] const Arrow& arrow(std::size_t a) const { return arrows_.at(a); }
    [[nodiscard]] int node_id(std::size_t i) const { return nodes_.at(i).id; }

    /// Index of the node with the given id; throws if unknown.
    [[nodiscard]] std::size_t index_of(int id) const;
    [[nodiscard]] std::optional<std::size_t> find(int id) const;

    /// Input set I(c) as arrow indices in standard order:
    /// (arrow type, tail id, arrow id).
    [[nodiscard]] const std::vector<std::size_t>& inputs(std::size_t c) const { return inputs_.at(c); }

    /// Tails of I(c) in standard order.
    [[nodiscard]] std::vector<std::size_t> tails(std::size_t c) const;

    [[nodiscard]] std::vector<std::string> arrow_types() const;
    [[nodiscard]] std::vector<std::string> node_types() const;

    /// Renders a node index set as "{1,2}" using external ids.
    [[nodiscard]] std::string format_set(const std::vector<std::size_t>& s) const;
    [[nodiscard]] std::string format_partition(const Partition& p) const;

private:
    void resort_inputs(std::size_t head);

    std::vector<Node> nodes_;
    std::vector<Arrow> arrows_;
    std::vector<std::vector<std::size_t>> inputs_;
    int next_arrow_id_ = 1;
};

/// Canonical partition from a label vector (labels need not be dense).
[[nodiscard]] Partition partition_from_labels(const std::vector<int>& labels);

/// Dense labels from a partition of {0..n-1}.
[[nodiscard]] std::vector<int> labels_from_partition(const Partition& p, std::size_t n);

/// Arrow types of I(c) as a sorted multiset.
[[nodiscard]] std::vector<std::string> input_signature(const Network& net, std::size_t c);

/// Same node type and same multiset of arrow types.
[[nodiscard]] bool input_equivalent(const Network& net, std::size_t c, std::size_t d);

[[nodiscard]] Partition input_classes(const Network& net);

/// Label per node: index of its block in input_classes().
[[nodiscard]] std::vector<int> input_class_labels(const Network& net);

/// One contiguous run of same-typed arrows inside a standard-ordered input set.
struct InputBlock {
    std::string type;
    std::size_t begin = 0;  ///< position in inputs(c)
    std::size_t size = 0;
};

[[nodiscard]] std::vector<InputBlock> input_blocks(const Network& net, std::size_t c);

/// Vertex group B(c,c): a product of symmetric groups, one factor per arrow
/// type block. Elements act on positions of the standard-ordered input set.
struct VertexGroup {
    std::vector<InputBlock> blocks;
    std::size_t degree = 0;

    [[nodiscard]] std::uint64_t order() const;

    /// All elements as position permutations (element[p] = source position
    /// feeding slot p). Throws if the order exceeds cap.
    [[nodiscard]] std::vector<std::vector<std::size_t>> elements(std::uint64_t cap = 720) const;

    /// Adjacent transpositions inside each block; they generate the group.
    [[nodiscard]] std::vector<std::vector<std::size_t>> generators() const;
};

[[nodiscard]] VertexGroup vertex_group(const Network& net, std::size_t c);

/// Arrow-type preserving bijections I(c) -> I(d), as maps from positions of
/// inputs(c) to positions of inputs(d). Empty when c, d are not input equivalent.
[[nodiscard]] std::vector<std::vector<std::size_t>> input_isomorphisms(const Network& net, std::size_t c,
                                                                       std::size_t d, std::size_t cap = 40320);

/// Finest relation forcing equal state spaces.
[[nodiscard]] Partition state_equivalence(const Network& net);

struct ValidationReport {
    Partition state_classes;
    Partition input_classes;
    std::vector<std::string> warnings;
};

/// Checks that state-equivalent nodes have equal dimensions (throws otherwise)
/// and reports redundancy warnings. dims has one entry per node.
ValidationReport validate_network(const Network& net, const std::vector<int>& dims);

/// Strongly connected components with the condensation DAG.
struct ComponentDag {
    Partition components;
    std::vector<int> component_of;                 ///< node -> component
    std::vector<std::vector<std::size_t>> downstream;  ///< component -> components it feeds
    std::vector<std::size_t> maximal;              ///< components with no outside input
};

[[nodiscard]] ComponentDag transitive_components(const Network& net);

[[nodiscard]] bool is_transitive(const Network& net);

/// Node-type and typed-adjacency preserving permutations. Throws above cap nodes.
[[nodiscard]] std::vector<Permutation> automorphisms(const Network& net, std::size_t cap = 8);

/// A bijection a -> b preserving node types and typed adjacency counts, if any.
[[nodiscard]] std::optional<Permutation> find_isomorphism(const Network& a, const Network& b,
                                                          std::size_t cap = 8);

/// All nodes with a directed path into s (s included).
[[nodiscard]] std::vector<std::size_t> upstream_closure(const Network& net, const std::vector<std::size_t>& s);

}  // namespace ccn
