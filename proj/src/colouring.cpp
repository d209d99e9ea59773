#include "ccn/colouring.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ccn {

Colouring::Colouring(std::vector<int> labels) {
    std::map<int, int> remap;
    labels_.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = remap.find(labels[i]);
        if (it == remap.end()) it = remap.emplace(labels[i], static_cast<int>(remap.size())).first;
        labels_[i] = it->second;
    }
    num_colours_ = remap.size();
}

Colouring Colouring::from_partition(const Partition& p, std::size_t n) {
    return Colouring(labels_from_partition(p, n));
}

Colouring Colouring::discrete(std::size_t n) {
    std::vector<int> l(n);
    std::iota(l.begin(), l.end(), 0);
    return Colouring(std::move(l));
}

Colouring Colouring::uniform(std::size_t n) { return Colouring(std::vector<int>(n, 0)); }

Partition Colouring::blocks() const { return partition_from_labels(labels_); }

std::vector<std::size_t> Colouring::min_representatives() const {
    std::vector<std::size_t> reps(num_colours_, labels_.size());
    for (std::size_t i = labels_.size(); i-- > 0;) reps[static_cast<std::size_t>(labels_[i])] = i;
    return reps;
}

std::string to_string(LatticeOrder o) {
    switch (o) {
        case LatticeOrder::Equal: return "equal";
        case LatticeOrder::Finer: return "finer";
        case LatticeOrder::Coarser: return "coarser";
        case LatticeOrder::Incomparable: return "incomparable";
    }
    return "?";
}

namespace {

bool refines(const Colouring& a, const Colouring& b) {
    // a finer-or-equal b: colour of a determines colour of b
    std::vector<int> img(a.num_colours(), -1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto& v = img[static_cast<std::size_t>(a.colour(i))];
        if (v == -1) v = b.colour(i);
        else if (v != b.colour(i)) return false;
    }
    return true;
}

void check_sizes(const Colouring& a, const Colouring& b) {
    if (a.size() != b.size()) throw std::runtime_error("colourings of different node sets");
}

/// Integer view of a network used by the refinement loops.
struct Compact {
    std::vector<int> node_type;
    std::vector<std::vector<std::pair<int, std::size_t>>> in;  // (arrow type, tail)
};

Compact compact(const Network& net) {
    Compact k;
    auto nts = net.node_types();
    auto ats = net.arrow_types();
    k.node_type.resize(net.size());
    k.in.resize(net.size());
    for (std::size_t c = 0; c < net.size(); ++c) {
        k.node_type[c] = static_cast<int>(std::find(nts.begin(), nts.end(), net.node(c).type) - nts.begin());
        for (auto a : net.inputs(c)) {
            const auto& ar = net.arrow(a);
            k.in[c].emplace_back(static_cast<int>(std::find(ats.begin(), ats.end(), ar.type) - ats.begin()), ar.tail);
        }
    }
    return k;
}

std::vector<std::pair<int, int>> coloured_inputs(const Compact& k, std::size_t c, const std::vector<int>& lab) {
    std::vector<std::pair<int, int>> s;
    s.reserve(k.in[c].size());
    for (const auto& [t, tail] : k.in[c]) s.emplace_back(t, lab[tail]);
    std::sort(s.begin(), s.end());
    return s;
}

bool balanced_compact(const Compact& k, const std::vector<int>& lab, std::size_t ncol) {
    std::vector<long> rep(ncol, -1);
    std::vector<std::vector<std::pair<int, int>>> sig(ncol);
    for (std::size_t c = 0; c < lab.size(); ++c) {
        auto col = static_cast<std::size_t>(lab[c]);
        auto s = coloured_inputs(k, c, lab);
        if (rep[col] < 0) {
            rep[col] = static_cast<long>(c);
            sig[col] = std::move(s);
        } else if (k.node_type[static_cast<std::size_t>(rep[col])] != k.node_type[c] || sig[col] != s) {
            return false;
        }
    }
    return true;
}

}  // namespace

LatticeOrder compare(const Colouring& a, const Colouring& b) {
    check_sizes(a, b);
    bool ab = refines(a, b);
    bool ba = refines(b, a);
    if (ab && ba) return LatticeOrder::Equal;
    if (ab) return LatticeOrder::Finer;
    if (ba) return LatticeOrder::Coarser;
    return LatticeOrder::Incomparable;
}

Colouring meet(const Colouring& a, const Colouring& b) {
    check_sizes(a, b);
    std::vector<int> l(a.size());
    const int nb = static_cast<int>(b.num_colours());
    for (std::size_t i = 0; i < a.size(); ++i) l[i] = a.colour(i) * nb + b.colour(i);
    return Colouring(std::move(l));
}

Colouring join(const Colouring& a, const Colouring& b) {
    check_sizes(a, b);
    const std::size_t n = a.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto* c : {&a, &b}) {
        std::vector<long> first(c->num_colours(), -1);
        for (std::size_t i = 0; i < n; ++i) {
            auto& f = first[static_cast<std::size_t>(c->colour(i))];
            if (f < 0) f = static_cast<long>(i);
            else parent[find(i)] = find(static_cast<std::size_t>(f));
        }
    }
    std::vector<int> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<int>(find(i));
    return Colouring(std::move(l));
}

Colouring balanced_meet(const Network& net, const Colouring& a, const Colouring& b) {
    return coarsest_balanced_refinement(net, meet(a, b));
}

bool is_balanced(const Network& net, const Colouring& col) {
    if (col.size() != net.size()) throw std::runtime_error("colouring does not match network size");
    return balanced_compact(compact(net), col.labels(), col.num_colours());
}

std::vector<std::pair<std::size_t, std::size_t>> unbalanced_pairs(const Network& net, const Colouring& col) {
    if (col.size() != net.size()) throw std::runtime_error("colouring does not match network size");
    auto k = compact(net);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t c = 0; c < net.size(); ++c) {
        auto sc = coloured_inputs(k, c, col.labels());
        for (std::size_t d = c + 1; d < net.size(); ++d) {
            if (col.colour(c) != col.colour(d)) continue;
            if (k.node_type[c] != k.node_type[d] || sc != coloured_inputs(k, d, col.labels())) out.emplace_back(c, d);
        }
    }
    return out;
}

Colouring coarsest_balanced_refinement(const Network& net, const Colouring& col) {
    if (col.size() != net.size()) throw std::runtime_error("colouring does not match network size");
    auto k = compact(net);
    std::vector<int> lab = col.labels();
    std::size_t ncol = col.num_colours();
    // node types must agree inside a balanced class
    {
        std::map<std::pair<int, int>, int> m;
        for (std::size_t c = 0; c < lab.size(); ++c) {
            auto key = std::make_pair(lab[c], k.node_type[c]);
            auto it = m.emplace(key, static_cast<int>(m.size())).first;
            lab[c] = it->second;
        }
        ncol = m.size();
    }
    while (true) {
        using Sig = std::pair<int, std::vector<std::pair<int, int>>>;
        std::map<Sig, int> m;
        std::vector<int> next(lab.size());
        for (std::size_t c = 0; c < lab.size(); ++c) {
            Sig s{lab[c], coloured_inputs(k, c, lab)};
            auto it = m.emplace(std::move(s), static_cast<int>(m.size())).first;
            next[c] = it->second;
        }
        lab = std::move(next);
        if (m.size() == ncol) break;
        ncol = m.size();
    }
    return Colouring(std::move(lab));
}

std::vector<Colouring> all_colourings(std::size_t n) {
    std::vector<Colouring> out;
    if (n == 0) return {Colouring(std::vector<int>{})};
    std::vector<int> a(n, 0);
    std::vector<int> mx(n, 0);  // mx[i] = max(a[0..i-1])
    while (true) {
        out.emplace_back(a);
        // next restricted growth string
        std::size_t i = n - 1;
        while (i > 0 && a[i] == mx[i] + 1) --i;
        if (i == 0) break;
        ++a[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            a[j] = 0;
            mx[j] = std::max(mx[j - 1], a[j - 1]);
        }
    }
    return out;
}

std::vector<Colouring> enumerate_balanced(const Network& net, std::size_t cap) {
    const std::size_t n = net.size();
    if (n > cap) {
        throw std::runtime_error("balanced colouring enumeration limited to " + std::to_string(cap) + " nodes");
    }
    std::vector<Colouring> out;
    if (n <= 6) {
        auto k = compact(net);
        for (auto& c : all_colourings(n)) {
            if (balanced_compact(k, c.labels(), c.num_colours())) out.push_back(std::move(c));
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    // walk down from the top balanced colouring: every balanced colouring is
    // reached by splitting one class in two and refining
    std::set<Colouring> seen;
    std::vector<Colouring> frontier{coarsest_balanced_refinement(net, Colouring::uniform(n))};
    seen.insert(frontier.front());
    while (!frontier.empty()) {
        auto cur = frontier.back();
        frontier.pop_back();
        for (const auto& block : cur.blocks()) {
            if (block.size() < 2) continue;
            const std::size_t m = block.size();
            // subsets containing block[0], proper
            for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << (m - 1)); ++mask) {
                auto lab = cur.labels();
                const int fresh = static_cast<int>(cur.num_colours());
                for (std::size_t j = 1; j < m; ++j) {
                    if (!((mask >> (j - 1)) & 1U)) lab[block[j]] = fresh;
                }
                auto ref = coarsest_balanced_refinement(net, Colouring(lab));
                if (seen.insert(ref).second) frontier.push_back(ref);
            }
        }
    }
    out.assign(seen.begin(), seen.end());
    return out;
}

void check_colouring(const Network& net, const Colouring& col) {
    if (col.size() != net.size()) {
        throw std::runtime_error("colouring has " + std::to_string(col.size()) + " nodes, network has " +
                                 std::to_string(net.size()));
    }
    auto se = Colouring::from_partition(state_equivalence(net), net.size());
    if (compare(col, se) != LatticeOrder::Finer && compare(col, se) != LatticeOrder::Equal) {
        throw std::runtime_error("colouring " + format_colouring(net, col) +
                                 " identifies nodes that are not state equivalent");
    }
}

std::string format_colouring(const Network& net, const Colouring& col) {
    return net.format_partition(col.blocks());
}

}  // namespace ccn
