#include "ccn/odeequiv.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace ccn {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::runtime_error("integer overflow in row reduction");
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::runtime_error("integer overflow in row reduction");
    return r;
}

/// Row echelon form over Q using integer rows normalised by their gcd.
std::vector<std::vector<std::int64_t>> echelon(std::vector<std::vector<std::int64_t>> rows) {
    std::vector<std::vector<std::int64_t>> out;
    if (rows.empty()) return out;
    const std::size_t n = rows.front().size();
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col] == 0) continue;
            const std::int64_t a = rows[r][col], b = rows[i][col];
            const std::int64_t g = std::gcd(a, b);
            for (std::size_t j = 0; j < n; ++j) {
                rows[i][j] = checked_sub(checked_mul(rows[i][j], a / g), checked_mul(rows[r][j], b / g));
            }
            std::int64_t rg = 0;
            for (auto v : rows[i]) rg = std::gcd(rg, v);
            if (rg > 1)
                for (auto& v : rows[i]) v /= rg;
        }
        ++r;
    }
    for (std::size_t i = 0; i < r; ++i) {
        auto row = rows[i];
        std::int64_t g = 0;
        for (auto v : row) g = std::gcd(g, v);
        if (g > 1)
            for (auto& v : row) v /= g;
        // sign convention: leading entry positive
        auto lead = std::find_if(row.begin(), row.end(), [](std::int64_t v) { return v != 0; });
        if (lead != row.end() && *lead < 0)
            for (auto& v : row) v = -v;
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<std::vector<std::int64_t>> flatten(const std::vector<IntMatrix>& ms) {
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& m : ms) rows.push_back(m.a);
    return rows;
}

std::vector<IntMatrix> matrices(const std::vector<LabelledMatrix>& lm) {
    std::vector<IntMatrix> out;
    for (const auto& l : lm) out.push_back(l.m);
    return out;
}

}  // namespace

std::vector<LabelledMatrix> adjacency_matrices(const Network& net) {
    const std::size_t n = net.size();
    std::vector<LabelledMatrix> out;
    for (const auto& t : net.arrow_types()) {
        IntMatrix m(n, n);
        for (const auto& a : net.arrows())
            if (a.type == t) ++m(a.head, a.tail);
        out.push_back({"arrow:" + t, m});
    }
    for (const auto& t : net.node_types()) {
        IntMatrix m(n, n);
        for (std::size_t c = 0; c < n; ++c)
            if (net.node(c).type == t) m(c, c) = 1;
        out.push_back({"node:" + t, m});
    }
    return out;
}

std::vector<LabelledMatrix> linear_admissible_basis(const Network& net) {
    const std::size_t n = net.size();
    auto classes = input_classes(net);
    auto lab = input_class_labels(net);
    std::vector<LabelledMatrix> out;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        IntMatrix d(n, n);
        for (auto c : classes[k]) d(c, c) = 1;
        out.push_back({"class:" + net.format_set(classes[k]), d});
        for (const auto& t : net.arrow_types()) {
            IntMatrix m(n, n);
            bool any = false;
            for (const auto& a : net.arrows()) {
                if (a.type == t && static_cast<std::size_t>(lab[a.head]) == k) {
                    ++m(a.head, a.tail);
                    any = true;
                }
            }
            if (any) out.push_back({"arrow:" + t + "@" + net.format_set(classes[k]), m});
        }
    }
    return out;
}

std::size_t span_rank(const std::vector<IntMatrix>& ms) { return echelon(flatten(ms)).size(); }

bool span_equal(const std::vector<IntMatrix>& a, const std::vector<IntMatrix>& b) {
    auto ra = span_rank(a);
    if (ra != span_rank(b)) return false;
    auto both = a;
    both.insert(both.end(), b.begin(), b.end());
    return span_rank(both) == ra;
}

bool in_span(const std::vector<IntMatrix>& basis, const IntMatrix& m) {
    auto both = basis;
    both.push_back(m);
    return span_rank(both) == span_rank(basis);
}

bool linearly_equivalent(const Network& a, const Network& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.node_id(i) != b.node_id(i)) return false;
    }
    return span_equal(matrices(linear_admissible_basis(a)), matrices(linear_admissible_basis(b)));
}

bool ode_equivalent(const Network& a, const Network& b) { return linearly_equivalent(a, b); }

TwoNodeClass classify_2node(const Network& net) {
    if (net.size() != 2) throw std::runtime_error("classification needs exactly two nodes");
    auto basis = echelon(flatten(matrices(linear_admissible_basis(net))));
    // flat index: 0 = (1,1), 1 = (1,2), 2 = (2,1), 3 = (2,2)
    bool has12 = false, has21 = false;
    for (const auto& r : basis) {
        has12 = has12 || r[1] != 0;
        has21 = has21 || r[2] != 0;
    }
    IntMatrix e11(2, 2);
    e11(0, 0) = 1;
    IntMatrix e22(2, 2);
    e22(1, 1) = 1;
    std::vector<IntMatrix> span;
    for (const auto& r : basis) {
        IntMatrix m(2, 2);
        m.a = r;
        span.push_back(m);
    }
    const bool inhom = in_span(span, e11);
    TwoNodeClass out;
    if (!has12 && !has21) {
        out.cls = basis.size() == 1 ? 1 : 2;
        out.description = out.cls == 1 ? "no coupling, identical nodes" : "no coupling, distinct nodes";
        return out;
    }
    if (has12 != has21) {
        out.swapped = has12;  // normal form has the arrow 1 -> 2
        out.cls = inhom ? 5 : 6;
        out.description = inhom ? "feedforward, inhomogeneous" : "feedforward, homogeneous";
        return out;
    }
    if (inhom) {
        out.cls = 3;
        out.description = "bidirectional, inhomogeneous (all of M2)";
        return out;
    }
    // homogeneous: every element is lambda*I + (b, c) in the off-diagonal
    // coordinates; collect the (b, c) directions
    std::vector<std::vector<std::int64_t>> bc;
    for (const auto& r : basis) bc.push_back({r[1], r[2]});
    auto red = echelon(bc);
    if (red.size() == 2) {
        out.cls = 7;
        out.description = "bidirectional, homogeneous, full equal-row-sum space";
        return out;
    }
    std::int64_t b = red[0][0], c = red[0][1];
    if (b < 0 || c < 0) {
        b = -b;
        c = -c;
    }
    if (b <= 0 || c <= 0) throw std::runtime_error("unexpected two-node span");
    const std::int64_t g = std::gcd(b, c);
    b /= g;
    c /= g;
    if (b == c) {
        out.cls = 4;
        out.description = "symmetric bidirectional ring";
        return out;
    }
    if (b < c) {
        std::swap(b, c);
        out.swapped = true;
    }
    out.cls = 8;
    out.p = static_cast<int>(b - c);
    out.q = static_cast<int>(c);
    out.description = "asymmetric bidirectional, p=" + std::to_string(out.p) + " q=" + std::to_string(out.q);
    return out;
}

}  // namespace ccn
