#include "ccn/network.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ccn {

std::size_t Network::add_node(int id, std::string type) {
    if (find(id)) throw std::runtime_error("duplicate node id " + std::to_string(id));
    nodes_.push_back({id, std::move(type)});
    inputs_.emplace_back();
    return nodes_.size() - 1;
}

std::size_t Network::add_arrow(int tail_id, int head_id, std::string type, int arrow_id) {
    auto t = find(tail_id);
    auto h = find(head_id);
    if (!t || !h) {
        throw std::runtime_error("dangling arrow " + std::to_string(tail_id) + "->" + std::to_string(head_id));
    }
    if (arrow_id < 0) arrow_id = next_arrow_id_;
    for (const auto& a : arrows_) {
        if (a.id == arrow_id) throw std::runtime_error("duplicate arrow id " + std::to_string(arrow_id));
    }
    next_arrow_id_ = std::max(next_arrow_id_, arrow_id + 1);
    arrows_.push_back({arrow_id, *t, *h, std::move(type)});
    inputs_[*h].push_back(arrows_.size() - 1);
    resort_inputs(*h);
    return arrows_.size() - 1;
}

void Network::resort_inputs(std::size_t head) {
    auto& in = inputs_[head];
    std::sort(in.begin(), in.end(), [this](std::size_t a, std::size_t b) {
        const Arrow& x = arrows_[a];
        const Arrow& y = arrows_[b];
        if (x.type != y.type) return x.type < y.type;
        if (nodes_[x.tail].id != nodes_[y.tail].id) return nodes_[x.tail].id < nodes_[y.tail].id;
        return x.id < y.id;
    });
}

std::optional<std::size_t> Network::find(int id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id == id) return i;
    }
    return std::nullopt;
}

std::size_t Network::index_of(int id) const {
    auto i = find(id);
    if (!i) throw std::runtime_error("unknown node id " + std::to_string(id));
    return *i;
}

std::vector<std::size_t> Network::tails(std::size_t c) const {
    std::vector<std::size_t> out;
    for (auto a : inputs_.at(c)) out.push_back(arrows_[a].tail);
    return out;
}

std::vector<std::string> Network::arrow_types() const {
    std::set<std::string> s;
    for (const auto& a : arrows_) s.insert(a.type);
    return {s.begin(), s.end()};
}

std::vector<std::string> Network::node_types() const {
    std::set<std::string> s;
    for (const auto& n : nodes_) s.insert(n.type);
    return {s.begin(), s.end()};
}

std::string Network::format_set(const std::vector<std::size_t>& s) const {
    std::vector<int> ids;
    for (auto i : s) ids.push_back(node_id(i));
    std::sort(ids.begin(), ids.end());
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < ids.size(); ++k) os << (k ? "," : "") << ids[k];
    os << '}';
    return os.str();
}

std::string Network::format_partition(const Partition& p) const {
    std::vector<std::string> parts;
    for (const auto& b : p) parts.push_back(format_set(b));
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < parts.size(); ++k) os << (k ? "," : "") << parts[k];
    os << '}';
    return os.str();
}

Partition partition_from_labels(const std::vector<int>& labels) {
    std::map<int, std::vector<std::size_t>> by;
    for (std::size_t i = 0; i < labels.size(); ++i) by[labels[i]].push_back(i);
    Partition p;
    for (auto& [_, b] : by) p.push_back(std::move(b));
    std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return p;
}

std::vector<int> labels_from_partition(const Partition& p, std::size_t n) {
    std::vector<int> lab(n, -1);
    for (std::size_t k = 0; k < p.size(); ++k) {
        for (auto i : p[k]) {
            if (i >= n || lab[i] != -1) throw std::runtime_error("partition is not a partition of the node set");
            lab[i] = static_cast<int>(k);
        }
    }
    for (auto l : lab) {
        if (l < 0) throw std::runtime_error("partition does not cover every node");
    }
    return lab;
}

std::vector<std::string> input_signature(const Network& net, std::size_t c) {
    std::vector<std::string> sig;
    for (auto a : net.inputs(c)) sig.push_back(net.arrow(a).type);
    return sig;  // standard order is already type-sorted
}

bool input_equivalent(const Network& net, std::size_t c, std::size_t d) {
    return net.node(c).type == net.node(d).type && input_signature(net, c) == input_signature(net, d);
}

Partition input_classes(const Network& net) {
    return partition_from_labels(input_class_labels(net));
}

std::vector<int> input_class_labels(const Network& net) {
    std::map<std::pair<std::string, std::vector<std::string>>, int> seen;
    std::vector<int> lab(net.size());
    for (std::size_t c = 0; c < net.size(); ++c) {
        auto key = std::make_pair(net.node(c).type, input_signature(net, c));
        auto it = seen.find(key);
        if (it == seen.end()) it = seen.emplace(key, static_cast<int>(seen.size())).first;
        lab[c] = it->second;
    }
    // relabel by first occurrence so labels match input_classes() block order
    auto p = partition_from_labels(lab);
    return labels_from_partition(p, net.size());
}

std::vector<InputBlock> input_blocks(const Network& net, std::size_t c) {
    std::vector<InputBlock> out;
    const auto& in = net.inputs(c);
    for (std::size_t p = 0; p < in.size(); ++p) {
        const auto& t = net.arrow(in[p]).type;
        if (out.empty() || out.back().type != t) out.push_back({t, p, 0});
        ++out.back().size;
    }
    return out;
}

std::uint64_t VertexGroup::order() const {
    std::uint64_t o = 1;
    for (const auto& b : blocks) {
        for (std::size_t k = 2; k <= b.size; ++k) {
            if (o > UINT64_MAX / k) return UINT64_MAX;
            o *= k;
        }
    }
    return o;
}

std::vector<std::vector<std::size_t>> VertexGroup::elements(std::uint64_t cap) const {
    if (order() > cap) {
        throw std::runtime_error("vertex group order " + std::to_string(order()) + " exceeds cap " +
                                 std::to_string(cap));
    }
    std::vector<std::size_t> id(degree);
    std::iota(id.begin(), id.end(), 0);
    std::vector<std::vector<std::size_t>> out{id};
    for (const auto& b : blocks) {
        if (b.size < 2) continue;
        std::vector<std::vector<std::size_t>> next;
        std::vector<std::size_t> local(b.size);
        std::iota(local.begin(), local.end(), 0);
        for (const auto& base : out) {
            auto perm = local;
            do {
                auto e = base;
                for (std::size_t k = 0; k < b.size; ++k) e[b.begin + k] = base[b.begin + perm[k]];
                next.push_back(std::move(e));
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        out = std::move(next);
    }
    return out;
}

std::vector<std::vector<std::size_t>> VertexGroup::generators() const {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& b : blocks) {
        for (std::size_t k = 0; k + 1 < b.size; ++k) {
            std::vector<std::size_t> e(degree);
            std::iota(e.begin(), e.end(), 0);
            std::swap(e[b.begin + k], e[b.begin + k + 1]);
            out.push_back(std::move(e));
        }
    }
    return out;
}

VertexGroup vertex_group(const Network& net, std::size_t c) {
    VertexGroup g;
    g.blocks = input_blocks(net, c);
    g.degree = net.inputs(c).size();
    return g;
}

std::vector<std::vector<std::size_t>> input_isomorphisms(const Network& net, std::size_t c, std::size_t d,
                                                         std::size_t cap) {
    if (!input_equivalent(net, c, d)) return {};
    auto g = vertex_group(net, d);
    auto elems = g.elements(cap);
    // with equal signatures the block layout of c and d coincides, so every
    // vertex-group element of d composed with the position identity is a bijection
    return elems;
}

namespace {

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::size_t> parent;
};

}  // namespace

Partition state_equivalence(const Network& net) {
    UnionFind uf(net.size());
    for (const auto& cls : input_classes(net)) {
        // every input isomorphism between members of cls maps a type block
        // onto the same-typed block, so all tails of that block are identified
        std::map<std::string, std::vector<std::size_t>> tails_by_type;
        for (auto c : cls) {
            uf.unite(cls.front(), c);
            for (auto a : net.inputs(c)) tails_by_type[net.arrow(a).type].push_back(net.arrow(a).tail);
        }
        for (const auto& [_, ts] : tails_by_type) {
            for (auto t : ts) uf.unite(ts.front(), t);
        }
    }
    std::vector<int> lab(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) lab[i] = static_cast<int>(uf.find(i));
    return partition_from_labels(lab);
}

ValidationReport validate_network(const Network& net, const std::vector<int>& dims) {
    if (dims.size() != net.size()) throw std::runtime_error("dimension list does not match node count");
    ValidationReport rep;
    rep.state_classes = state_equivalence(net);
    rep.input_classes = input_classes(net);
    for (const auto& cls : rep.state_classes) {
        for (auto c : cls) {
            if (dims[c] <= 0) throw std::runtime_error("node " + std::to_string(net.node_id(c)) + " has no state");
            if (dims[c] != dims[cls.front()]) {
                throw std::runtime_error("dimension mismatch within state class " + net.format_set(cls) + ": node " +
                                         std::to_string(net.node_id(cls.front())) + " has " +
                                         std::to_string(dims[cls.front()]) + ", node " +
                                         std::to_string(net.node_id(c)) + " has " + std::to_string(dims[c]));
            }
        }
    }
    // an arrow type shared by heads from different input classes is redundant labelling
    auto lab = input_class_labels(net);
    std::map<std::string, std::set<int>> heads;
    for (const auto& a : net.arrows()) heads[a.type].insert(lab[a.head]);
    for (const auto& [t, ks] : heads) {
        if (ks.size() > 1) {
            rep.warnings.push_back("arrow type '" + t + "' enters nodes of " + std::to_string(ks.size()) +
                                   " different input classes (network is not irredundant)");
        }
    }
    return rep;
}

ComponentDag transitive_components(const Network& net) {
    const std::size_t n = net.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
    for (const auto& a : net.arrows()) reach[a.tail][a.head] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;

    std::vector<int> lab(n, -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (lab[i] >= 0) continue;
        for (std::size_t j = i; j < n; ++j) {
            if (reach[i][j] && reach[j][i]) lab[j] = next;
        }
        ++next;
    }
    ComponentDag dag;
    dag.components = partition_from_labels(lab);
    dag.component_of = labels_from_partition(dag.components, n);
    dag.downstream.assign(dag.components.size(), {});
    std::vector<bool> has_input(dag.components.size(), false);
    for (const auto& a : net.arrows()) {
        auto ct = static_cast<std::size_t>(dag.component_of[a.tail]);
        auto ch = static_cast<std::size_t>(dag.component_of[a.head]);
        if (ct == ch) continue;
        auto& ds = dag.downstream[ct];
        if (std::find(ds.begin(), ds.end(), ch) == ds.end()) ds.push_back(ch);
        has_input[ch] = true;
    }
    for (auto& ds : dag.downstream) std::sort(ds.begin(), ds.end());
    for (std::size_t k = 0; k < dag.components.size(); ++k) {
        if (!has_input[k]) dag.maximal.push_back(k);
    }
    return dag;
}

bool is_transitive(const Network& net) { return transitive_components(net).components.size() <= 1; }

namespace {

/// counts[type][head][tail]
using AdjCounts = std::vector<std::vector<std::vector<int>>>;

AdjCounts adjacency_counts(const Network& net, const std::vector<std::string>& types) {
    AdjCounts m(types.size(), std::vector<std::vector<int>>(net.size(), std::vector<int>(net.size(), 0)));
    for (const auto& a : net.arrows()) {
        auto t = static_cast<std::size_t>(std::find(types.begin(), types.end(), a.type) - types.begin());
        ++m[t][a.head][a.tail];
    }
    return m;
}

/// Backtracking search for bijections a -> b; calls visit for each complete one,
/// stopping when visit returns false.
void search_isomorphisms(const Network& a, const Network& b, const std::function<bool(const Permutation&)>& visit) {
    const std::size_t n = a.size();
    if (b.size() != n) return;
    auto types = a.arrow_types();
    if (types != b.arrow_types()) return;
    auto ma = adjacency_counts(a, types);
    auto mb = adjacency_counts(b, types);
    Permutation perm(n, 0);
    std::vector<bool> used(n, false);
    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (stop) return;
        if (i == n) {
            if (!visit(perm)) stop = true;
            return;
        }
        for (std::size_t j = 0; j < n && !stop; ++j) {
            if (used[j] || a.node(i).type != b.node(j).type) continue;
            bool ok = true;
            for (std::size_t t = 0; t < types.size() && ok; ++t) {
                if (ma[t][i][i] != mb[t][j][j]) ok = false;
                for (std::size_t k = 0; k < i && ok; ++k) {
                    if (ma[t][i][k] != mb[t][j][perm[k]] || ma[t][k][i] != mb[t][perm[k]][j]) ok = false;
                }
            }
            if (!ok) continue;
            used[j] = true;
            perm[i] = j;
            rec(i + 1);
            used[j] = false;
        }
    };
    rec(0);
}

}  // namespace

std::vector<Permutation> automorphisms(const Network& net, std::size_t cap) {
    if (net.size() > cap) {
        throw std::runtime_error("automorphism search limited to " + std::to_string(cap) + " nodes, network has " +
                                 std::to_string(net.size()));
    }
    std::vector<Permutation> out;
    search_isomorphisms(net, net, [&](const Permutation& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

std::optional<Permutation> find_isomorphism(const Network& a, const Network& b, std::size_t cap) {
    if (a.size() > cap) throw std::runtime_error("isomorphism search limited to " + std::to_string(cap) + " nodes");
    std::optional<Permutation> found;
    search_isomorphisms(a, b, [&](const Permutation& p) {
        found = p;
        return false;
    });
    return found;
}

std::vector<std::size_t> upstream_closure(const Network& net, const std::vector<std::size_t>& s) {
    std::vector<bool> in(net.size(), false);
    std::vector<std::size_t> stack(s.begin(), s.end());
    for (auto v : s) in.at(v) = true;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto a : net.inputs(v)) {
            auto t = net.arrow(a).tail;
            if (!in[t]) {
                in[t] = true;
                stack.push_back(t);
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < net.size(); ++i)
        if (in[i]) out.push_back(i);
    return out;
}

}  // namespace ccn
