#include "ccn/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccn {

QuasiQuotient quasi_quotient(const Network& net, const Colouring& col, const std::vector<std::size_t>& reps) {
    if (col.size() != net.size()) throw std::runtime_error("colouring does not match network size");
    QuasiQuotient qq;
    qq.colouring = col;
    qq.reps.assign(col.num_colours(), net.size());
    for (auto r : reps) {
        if (r >= net.size()) throw std::runtime_error("representative out of range");
        auto k = static_cast<std::size_t>(col.colour(r));
        if (qq.reps[k] != net.size()) {
            throw std::runtime_error("two representatives for colour class " + net.format_set(col.blocks()[k]));
        }
        qq.reps[k] = r;
    }
    for (std::size_t k = 0; k < qq.reps.size(); ++k) {
        if (qq.reps[k] == net.size()) {
            throw std::runtime_error("no representative for colour class " + net.format_set(col.blocks()[k]));
        }
    }
    qq.bracket.resize(net.size());
    for (std::size_t c = 0; c < net.size(); ++c) qq.bracket[c] = static_cast<std::size_t>(col.colour(c));
    for (auto r : qq.reps) qq.net.add_node(net.node_id(r), net.node(r).type);
    for (auto r : qq.reps) {
        for (auto a : net.inputs(r)) {
            const auto& ar = net.arrow(a);
            qq.net.add_arrow(net.node_id(qq.reps[qq.bracket[ar.tail]]), net.node_id(r), ar.type, ar.id);
        }
    }
    return qq;
}

QuasiQuotient quasi_quotient(const Network& net, const Colouring& col) {
    return quasi_quotient(net, col, col.min_representatives());
}

AdmissibleSystem restrict_system(const AdmissibleSystem& sys, const QuasiQuotient& qq) {
    std::vector<int> dims;
    for (auto r : qq.reps) dims.push_back(sys.dim(r));
    auto qclasses = input_classes(qq.net);
    std::vector<ComponentPtr> comps;
    for (const auto& cls : qclasses) comps.push_back(sys.component_for_node(qq.reps[cls.front()]));
    return AdmissibleSystem(qq.net, dims, std::move(comps));
}

AdmissibleSystem lift_system(const AdmissibleSystem& qsys, const QuasiQuotient& qq, const Network& net) {
    if (qsys.network().size() != qq.reps.size()) throw std::runtime_error("system does not live on this quotient");
    std::vector<int> dims(net.size());
    for (std::size_t c = 0; c < net.size(); ++c) dims[c] = qsys.dim(qq.bracket[c]);
    auto classes = input_classes(net);
    auto lab = input_class_labels(net);
    std::vector<ComponentPtr> comps(classes.size());
    for (std::size_t k = 0; k < qq.reps.size(); ++k) {
        auto K = static_cast<std::size_t>(lab[qq.reps[k]]);
        if (!comps[K]) comps[K] = qsys.component_for_node(k);
    }
    for (std::size_t K = 0; K < classes.size(); ++K) {
        if (comps[K]) continue;
        ComponentLayout l;
        auto c = classes[K].front();
        l.self_dim = dims[c];
        for (auto t : net.tails(c)) l.input_dims.push_back(dims[t]);
        comps[K] = std::make_shared<ZeroComponent>(l);
    }
    return AdmissibleSystem(net, dims, std::move(comps));
}

std::vector<double> project_polydiagonal(const AdmissibleSystem& sys, const Colouring& col,
                                         const std::vector<double>& x) {
    std::vector<double> out(x.size(), 0.0);
    for (const auto& block : col.blocks()) {
        const int d = sys.dim(block.front());
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (auto c : block) s += x[static_cast<std::size_t>(sys.offset(c) + i)];
            s /= static_cast<double>(block.size());
            for (auto c : block) out[static_cast<std::size_t>(sys.offset(c) + i)] = s;
        }
    }
    return out;
}

ConstraintResidual constraint_residual(const AdmissibleSystem& sys, const QuasiQuotient& qq,
                                       const std::vector<std::vector<double>>& states) {
    const auto& net = sys.network();
    ConstraintResidual res;
    res.per_node.assign(net.size(), 0.0);
    std::vector<bool> is_rep(net.size(), false);
    for (auto r : qq.reps) is_rep[r] = true;
    std::vector<double> y(256), fc(64), fr(64);
    for (const auto& x : states) {
        auto p = project_polydiagonal(sys, qq.colouring, x);
        for (std::size_t c = 0; c < net.size(); ++c) {
            if (is_rep[c]) continue;
            auto r = qq.reps[qq.bracket[c]];
            auto lay = sys.layout(c);
            if (lay.total() > 256 || lay.self_dim > 64) throw std::runtime_error("component too large");
            sys.gather(c, p.data(), y.data());
            sys.eval_node(c, y.data(), fc.data());
            sys.gather(r, p.data(), y.data());
            sys.eval_node(r, y.data(), fr.data());
            double s = 0.0;
            for (int i = 0; i < lay.self_dim; ++i) s += (fc[static_cast<std::size_t>(i)] - fr[static_cast<std::size_t>(i)]) *
                                                        (fc[static_cast<std::size_t>(i)] - fr[static_cast<std::size_t>(i)]);
            res.per_node[c] = std::max(res.per_node[c], std::sqrt(s));
            res.max = std::max(res.max, res.per_node[c]);
        }
    }
    return res;
}

Network double_network(const Network& net) {
    int shift = 0;
    for (const auto& n : net.nodes()) shift = std::max(shift, n.id);
    int ashift = 0;
    for (const auto& a : net.arrows()) ashift = std::max(ashift, a.id);
    Network d;
    for (const auto& n : net.nodes()) d.add_node(n.id, n.type);
    for (const auto& n : net.nodes()) d.add_node(n.id + shift, n.type);
    for (const auto& a : net.arrows()) d.add_arrow(net.node_id(a.tail), net.node_id(a.head), a.type, a.id);
    for (const auto& a : net.arrows()) {
        d.add_arrow(net.node_id(a.tail) + shift, net.node_id(a.head) + shift, a.type, a.id + ashift);
    }
    return d;
}

AdmissibleSystem double_system(const AdmissibleSystem& sys) {
    auto d = double_network(sys.network());
    auto dims = sys.dims();
    dims.insert(dims.end(), sys.dims().begin(), sys.dims().end());
    auto classes = input_classes(d);
    std::vector<ComponentPtr> comps;
    // copy-1 nodes come first, so every class has a copy-1 member
    for (const auto& cls : classes) comps.push_back(sys.component_for_node(cls.front()));
    return AdmissibleSystem(d, dims, std::move(comps));
}

AdmissibleSystem undouble_system(const AdmissibleSystem& dsys, const AdmissibleSystem& base) {
    const std::size_t n = base.network().size();
    if (dsys.network().size() != 2 * n) throw std::runtime_error("not a doubled system of this network");
    std::vector<ComponentPtr> comps;
    for (const auto& cls : base.classes()) comps.push_back(dsys.component_for_node(cls.front()));
    return AdmissibleSystem(base.network(), base.dims(), std::move(comps));
}

TransversalSearch good_transversals(const Network& net, const Colouring& col, std::size_t cap) {
    TransversalSearch out;
    auto blocks = col.blocks();
    std::vector<std::size_t> pick(blocks.size(), 0);
    while (true) {
        if (out.examined >= cap) {
            out.truncated = true;
            break;
        }
        std::vector<std::size_t> reps;
        for (std::size_t k = 0; k < blocks.size(); ++k) reps.push_back(blocks[k][pick[k]]);
        ++out.examined;
        auto qq = quasi_quotient(net, col, reps);
        if (transitive_components(qq.net).maximal.size() == 1) out.good.push_back(reps);
        std::size_t k = 0;
        while (k < blocks.size()) {
            if (++pick[k] < blocks[k].size()) break;
            pick[k] = 0;
            ++k;
        }
        if (k == blocks.size()) break;
    }
    return out;
}

}  // namespace ccn
