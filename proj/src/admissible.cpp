#include "ccn/admissible.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccn {

int ComponentLayout::total() const {
    int t = self_dim;
    for (int d : input_dims) t += d;
    return t;
}

int ComponentLayout::offset(std::size_t input) const {
    int off = self_dim;
    for (std::size_t j = 0; j < input; ++j) off += input_dims.at(j);
    return off;
}

ExprComponent::ExprComponent(ComponentLayout layout, const std::vector<std::string>& sources)
    : Component(std::move(layout)) {
    if (static_cast<int>(sources.size()) != this->layout().self_dim) {
        throw std::runtime_error("component needs " + std::to_string(this->layout().self_dim) +
                                 " expressions, got " + std::to_string(sources.size()));
    }
    for (const auto& s : sources) progs_.emplace_back(expr::parse(s), this->layout().self_dim, this->layout().input_dims);
}

void ExprComponent::eval(const double* y, double* out) const {
    for (std::size_t i = 0; i < progs_.size(); ++i) out[i] = progs_[i](y);
}

std::string ExprComponent::describe() const {
    std::string s = "[";
    for (std::size_t i = 0; i < progs_.size(); ++i) s += (i ? ", " : "") + progs_[i].source().to_string();
    return s + "]";
}

void ZeroComponent::eval(const double*, double* out) const {
    std::fill(out, out + layout().self_dim, 0.0);
}

SumComponent::SumComponent(ComponentPtr a, ComponentPtr b, double s)
    : Component(a->layout()), a_(std::move(a)), b_(std::move(b)), s_(s) {
    if (!(a_->layout() == b_->layout())) throw std::runtime_error("cannot add components of different shapes");
}

void SumComponent::eval(const double* y, double* out) const {
    const int k = layout().self_dim;
    double tmp[64];
    if (k > 64) throw std::runtime_error("node dimension above 64 unsupported");
    a_->eval(y, out);
    b_->eval(y, tmp);
    for (int i = 0; i < k; ++i) out[i] += s_ * tmp[i];
}

std::string SumComponent::describe() const {
    return a_->describe() + " + " + std::to_string(s_) + "*(" + b_->describe() + ")";
}

void apply_group_element(const ComponentLayout& layout, const std::vector<std::size_t>& g, const double* y,
                         double* dst) {
    std::copy(y, y + layout.self_dim, dst);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const int d = layout.input_dims[p];
        const double* src = y + layout.offset(g[p]);
        std::copy(src, src + d, dst + layout.offset(p));
    }
}

SymmetrisedComponent::SymmetrisedComponent(ComponentPtr base, const VertexGroup& group, std::uint64_t cap)
    : Component(base->layout()), base_(std::move(base)), elems_(group.elements(cap)) {
    if (group.degree != layout().input_dims.size()) throw std::runtime_error("vertex group does not match layout");
}

void SymmetrisedComponent::permute(const std::vector<std::size_t>& g, const double* y, double* dst) const {
    apply_group_element(layout(), g, y, dst);
}

void SymmetrisedComponent::eval(const double* y, double* out) const {
    const int k = layout().self_dim;
    const int m = layout().total();
    if (elems_.size() == 1) {
        base_->eval(y, out);
        return;
    }
    const std::size_t ng = elems_.size();
    std::vector<double> buf(static_cast<std::size_t>(m));
    std::vector<double> terms(ng * static_cast<std::size_t>(k));
    for (std::size_t e = 0; e < ng; ++e) {
        permute(elems_[e], y, buf.data());
        base_->eval(buf.data(), terms.data() + e * static_cast<std::size_t>(k));
    }
    // Permuting y only reorders the terms. Summing them in sorted order makes
    // the average bitwise invariant, so balanced polydiagonals hold exactly.
    std::vector<double> col(ng);
    for (int i = 0; i < k; ++i) {
        for (std::size_t e = 0; e < ng; ++e) col[e] = terms[e * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)];
        std::sort(col.begin(), col.end());
        double acc = 0.0;
        for (double v : col) acc += v;
        out[i] = acc / static_cast<double>(ng);
    }
}

std::string SymmetrisedComponent::describe() const {
    return "sym" + std::to_string(elems_.size()) + "(" + base_->describe() + ")";
}

double invariance_defect(const Component& f, const VertexGroup& group, std::mt19937_64& rng, int samples,
                         double scale, bool all_elements) {
    const auto& lay = f.layout();
    auto gens = all_elements ? group.elements() : group.generators();
    if (gens.empty()) return 0.0;
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> y(static_cast<std::size_t>(lay.total())), gy(y.size());
    std::vector<double> a(static_cast<std::size_t>(lay.self_dim)), b(a.size());
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        for (auto& v : y) v = u(rng);
        f.eval(y.data(), a.data());
        for (const auto& g : gens) {
            apply_group_element(lay, g, y.data(), gy.data());
            f.eval(gy.data(), b.data());
            for (std::size_t i = 0; i < a.size(); ++i) {
                worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
            }
        }
    }
    return worst;
}

AdmissibleSystem::AdmissibleSystem(Network net, std::vector<int> dims, std::vector<ComponentPtr> components)
    : net_(std::move(net)), dims_(std::move(dims)), components_(std::move(components)) {
    (void)validate_network(net_, dims_);
    classes_ = input_classes(net_);
    class_of_ = input_class_labels(net_);
    if (components_.size() != classes_.size()) {
        throw std::runtime_error("system has " + std::to_string(components_.size()) + " components for " +
                                 std::to_string(classes_.size()) + " input classes");
    }
    offsets_.resize(net_.size());
    for (std::size_t c = 0; c < net_.size(); ++c) {
        offsets_[c] = total_;
        total_ += dims_[c];
    }
    gather_.resize(net_.size());
    for (std::size_t c = 0; c < net_.size(); ++c) {
        const auto& f = component_for_node(c);
        if (!f) throw std::runtime_error("missing component for node " + std::to_string(net_.node_id(c)));
        if (!(f->layout() == layout(c))) {
            throw std::runtime_error("component for node " + std::to_string(net_.node_id(c)) +
                                     " has the wrong argument shape");
        }
        auto& g = gather_[c];
        for (int i = 0; i < dims_[c]; ++i) g.push_back(offsets_[c] + i);
        for (auto t : net_.tails(c)) {
            for (int i = 0; i < dims_[t]; ++i) g.push_back(offsets_[t] + i);
        }
        max_arg_ = std::max(max_arg_, g.size());
    }
}

ComponentLayout AdmissibleSystem::layout(std::size_t c) const {
    ComponentLayout l;
    l.self_dim = dims_.at(c);
    for (auto t : net_.tails(c)) l.input_dims.push_back(dims_[t]);
    return l;
}

void AdmissibleSystem::gather(std::size_t c, const double* x, double* y) const {
    const auto& g = gather_[c];
    for (std::size_t i = 0; i < g.size(); ++i) y[i] = x[g[i]];
}

void AdmissibleSystem::eval(const double* x, double* dx) const {
    double stackbuf[256];
    std::vector<double> heap;
    double* y = stackbuf;
    if (max_arg_ > 256) {
        heap.resize(max_arg_);
        y = heap.data();
    }
    for (std::size_t c = 0; c < net_.size(); ++c) {
        gather(c, x, y);
        component_for_node(c)->eval(y, dx + offsets_[c]);
    }
}

void AdmissibleSystem::eval_node(std::size_t c, const double* y, double* out) const {
    component_for_node(c)->eval(y, out);
}

AdmissibleSystem AdmissibleSystem::with_component(std::size_t k, ComponentPtr f) const {
    auto comps = components_;
    comps.at(k) = std::move(f);
    return AdmissibleSystem(net_, dims_, std::move(comps));
}

AdmissibleSystem perturbed(const AdmissibleSystem& f, const AdmissibleSystem& p, double eps) {
    if (f.num_classes() != p.num_classes() || f.state_dim() != p.state_dim()) {
        throw std::runtime_error("perturbation lives on a different network");
    }
    std::vector<ComponentPtr> comps;
    for (std::size_t k = 0; k < f.num_classes(); ++k) {
        if (dynamic_cast<const ZeroComponent*>(p.component(k).get()) || eps == 0.0) {
            comps.push_back(f.component(k));
        } else {
            comps.push_back(std::make_shared<SumComponent>(f.component(k), p.component(k), eps));
        }
    }
    return AdmissibleSystem(f.network(), f.dims(), std::move(comps));
}

AdmissibleSystem zero_system(const Network& net, const std::vector<int>& dims) {
    auto classes = input_classes(net);
    std::vector<ComponentPtr> comps;
    for (const auto& cls : classes) {
        ComponentLayout l;
        l.self_dim = dims.at(cls.front());
        for (auto t : net.tails(cls.front())) l.input_dims.push_back(dims.at(t));
        comps.push_back(std::make_shared<ZeroComponent>(l));
    }
    return AdmissibleSystem(net, dims, std::move(comps));
}

std::vector<int> resolve_dims(const Network& net, const SystemSpec& spec) {
    std::vector<int> dims(net.size(), 0);
    for (std::size_t c = 0; c < net.size(); ++c) {
        auto it = spec.type_dims.find(net.node(c).type);
        if (it != spec.type_dims.end()) dims[c] = it->second;
        auto jt = spec.node_dims.find(net.node_id(c));
        if (jt != spec.node_dims.end()) dims[c] = jt->second;
        if (dims[c] <= 0) {
            throw std::runtime_error("no dimension given for node " + std::to_string(net.node_id(c)) + " (type '" +
                                     net.node(c).type + "')");
        }
    }
    return dims;
}

AdmissibleSystem build_system(const Network& net, const SystemSpec& spec, std::uint64_t seed) {
    auto dims = resolve_dims(net, spec);
    auto classes = input_classes(net);
    auto lab = input_class_labels(net);
    std::vector<ComponentPtr> comps(classes.size());
    std::mt19937_64 rng(seed);
    for (const auto& [id, sources] : spec.components) {
        auto c = net.index_of(id);
        auto k = static_cast<std::size_t>(lab[c]);
        if (comps[k]) {
            throw std::runtime_error("two components given for input class " + net.format_set(classes[k]));
        }
        ComponentLayout l;
        l.self_dim = dims[c];
        for (auto t : net.tails(c)) l.input_dims.push_back(dims[t]);
        ComponentPtr f = std::make_shared<ExprComponent>(l, sources);
        auto g = vertex_group(net, c);
        if (spec.symmetrise) {
            if (g.order() > 1) f = std::make_shared<SymmetrisedComponent>(f, g);
        } else {
            double d = invariance_defect(*f, g, rng);
            if (d > 1e-9) {
                throw std::runtime_error("component for node " + std::to_string(id) +
                                         " is not invariant under its vertex group (defect " + std::to_string(d) +
                                         ")");
            }
        }
        comps[k] = std::move(f);
    }
    for (std::size_t k = 0; k < classes.size(); ++k) {
        if (!comps[k]) throw std::runtime_error("no component given for input class " + net.format_set(classes[k]));
    }
    return AdmissibleSystem(net, dims, std::move(comps));
}

double c1_norm_estimate(const Component& f, const std::vector<std::vector<double>>& points) {
    const auto& lay = f.layout();
    const int m = lay.total();
    const int k = lay.self_dim;
    std::vector<double> out(static_cast<std::size_t>(k)), op(out.size()), om(out.size());
    std::vector<int> starts{0};
    std::vector<int> widths{lay.self_dim};
    for (std::size_t j = 0; j < lay.input_dims.size(); ++j) {
        starts.push_back(lay.offset(j));
        widths.push_back(lay.input_dims[j]);
    }
    double best = 0.0;
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != m) throw std::runtime_error("grid point has the wrong dimension");
        f.eval(p.data(), out.data());
        double v = 0.0;
        for (double o : out) v += o * o;
        best = std::max(best, std::sqrt(v));
        Eigen::MatrixXd J(k, m);
        auto y = p;
        for (int j = 0; j < m; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(p[static_cast<std::size_t>(j)]));
            y[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j)] + h;
            f.eval(y.data(), op.data());
            y[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j)] - h;
            f.eval(y.data(), om.data());
            y[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j)];
            for (int i = 0; i < k; ++i) {
                J(i, j) = (op[static_cast<std::size_t>(i)] - om[static_cast<std::size_t>(i)]) / (2 * h);
            }
        }
        // operator norm for the max-of-blocks norm on arguments, bounded by the
        // sum of block spectral norms
        double jn = 0.0;
        for (std::size_t b = 0; b < starts.size(); ++b) {
            if (widths[b] == 0) continue;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(J.middleCols(starts[b], widths[b]));
            jn += svd.singularValues()(0);
        }
        best = std::max(best, jn);
    }
    return best;
}

double c1_norm_estimate(const AdmissibleSystem& sys, const std::vector<std::vector<std::vector<double>>>& points) {
    if (points.size() != sys.num_classes()) throw std::runtime_error("need one point set per input class");
    double best = 0.0;
    for (std::size_t k = 0; k < sys.num_classes(); ++k) {
        best = std::max(best, c1_norm_estimate(*sys.component(k), points[k]));
    }
    return best;
}

std::vector<std::vector<double>> sample_points(const ComponentLayout& layout, std::size_t count, std::mt19937_64& rng,
                                               double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<std::vector<double>> pts(count, std::vector<double>(static_cast<std::size_t>(layout.total())));
    for (auto& p : pts)
        for (auto& v : p) v = u(rng);
    return pts;
}

}  // namespace ccn
