#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ccn/expr.hpp"
#include "ccn/network.hpp"

namespace ccn {

/// Shape of a component's argument y = (x_c, x_{t_1}, ..., x_{t_k}) with
/// tails in standard input order.
struct ComponentLayout {
    int self_dim = 0;
    std::vector<int> input_dims;

    [[nodiscard]] int total() const;
    [[nodiscard]] int offset(std::size_t input) const;
    bool operator==(const ComponentLayout& o) const {
        return self_dim == o.self_dim && input_dims == o.input_dims;
    }
};

/// A local map y -> f(y) in R^{self_dim}.
class Component {
public:
    explicit Component(ComponentLayout layout) : layout_(std::move(layout)) {}
    virtual ~Component() = default;

    virtual void eval(const double* y, double* out) const = 0;
    [[nodiscard]] const ComponentLayout& layout() const { return layout_; }
    [[nodiscard]] virtual std::string describe() const { return "component"; }

private:
    ComponentLayout layout_;
};

using ComponentPtr = std::shared_ptr<const Component>;

/// One DSL expression per output coordinate.
class ExprComponent : public Component {
public:
    ExprComponent(ComponentLayout layout, const std::vector<std::string>& sources);
    void eval(const double* y, double* out) const override;
    [[nodiscard]] std::string describe() const override;
    [[nodiscard]] const std::vector<expr::Program>& programs() const { return progs_; }

private:
    std::vector<expr::Program> progs_;
};

class ZeroComponent : public Component {
public:
    using Component::Component;
    void eval(const double* y, double* out) const override;
    [[nodiscard]] std::string describe() const override { return "0"; }
};

/// Wraps an arbitrary callable; used for tests and programmatic fields.
class FunctionComponent : public Component {
public:
    using Fn = std::function<void(const double*, double*)>;
    FunctionComponent(ComponentLayout layout, Fn fn, std::string name = "function")
        : Component(std::move(layout)), fn_(std::move(fn)), name_(std::move(name)) {}
    void eval(const double* y, double* out) const override { fn_(y, out); }
    [[nodiscard]] std::string describe() const override { return name_; }

private:
    Fn fn_;
    std::string name_;
};

/// a + s * b on the same layout.
class SumComponent : public Component {
public:
    SumComponent(ComponentPtr a, ComponentPtr b, double s);
    void eval(const double* y, double* out) const override;
    [[nodiscard]] std::string describe() const override;

private:
    ComponentPtr a_, b_;
    double s_;
};

/// Average of base over the vertex group acting on input slots.
class SymmetrisedComponent : public Component {
public:
    SymmetrisedComponent(ComponentPtr base, const VertexGroup& group, std::uint64_t cap = 720);
    void eval(const double* y, double* out) const override;
    [[nodiscard]] std::string describe() const override;

private:
    /// Moves the input slots of y according to the group element.
    void permute(const std::vector<std::size_t>& g, const double* y, double* dst) const;

    ComponentPtr base_;
    std::vector<std::vector<std::size_t>> elems_;
};

/// γ*y: slot p of the result holds input slot g[p] of y.
void apply_group_element(const ComponentLayout& layout, const std::vector<std::size_t>& g, const double* y, double* dst);

/// Numerical B(c,c)-invariance check on seeded random points in [-scale, scale]^m.
/// Returns the largest observed difference.
double invariance_defect(const Component& f, const VertexGroup& group, std::mt19937_64& rng, int samples = 32,
                         double scale = 2.0, bool all_elements = false);

/// Admissible vector field: one component per input class, shared by class members.
class AdmissibleSystem {
public:
    AdmissibleSystem() = default;

    /// components is keyed by input class index (block order of input_classes()).
    AdmissibleSystem(Network net, std::vector<int> dims, std::vector<ComponentPtr> components);

    [[nodiscard]] const Network& network() const { return net_; }
    [[nodiscard]] const std::vector<int>& dims() const { return dims_; }
    [[nodiscard]] int dim(std::size_t c) const { return dims_.at(c); }
    [[nodiscard]] std::size_t state_dim() const { return static_cast<std::size_t>(total_); }
    [[nodiscard]] int offset(std::size_t c) const { return offsets_.at(c); }
    [[nodiscard]] const std::vector<int>& offsets() const { return offsets_; }

    [[nodiscard]] std::size_t num_classes() const { return components_.size(); }
    [[nodiscard]] const Partition& classes() const { return classes_; }
    [[nodiscard]] int class_of(std::size_t c) const { return class_of_.at(c); }
    [[nodiscard]] const ComponentPtr& component(std::size_t k) const { return components_.at(k); }
    [[nodiscard]] const ComponentPtr& component_for_node(std::size_t c) const {
        return components_.at(static_cast<std::size_t>(class_of_.at(c)));
    }
    [[nodiscard]] ComponentLayout layout(std::size_t c) const;

    /// Packs y_c = (x_c, x_{T(c)}) from a full state.
    void gather(std::size_t c, const double* x, double* y) const;

    /// Full admissible vector field.
    void eval(const double* x, double* dx) const;

    /// f_c(y) for node c at a packed argument.
    void eval_node(std::size_t c, const double* y, double* out) const;

    /// Returns a copy with the component of class k replaced.
    [[nodiscard]] AdmissibleSystem with_component(std::size_t k, ComponentPtr f) const;

private:
    Network net_;
    std::vector<int> dims_;
    std::vector<int> offsets_;
    int total_ = 0;
    Partition classes_;
    std::vector<int> class_of_;
    std::vector<ComponentPtr> components_;
    std::vector<std::vector<int>> gather_;  ///< per node: state indices of y_c
    std::size_t max_arg_ = 0;
};

/// f + eps * p, class by class.
[[nodiscard]] AdmissibleSystem perturbed(const AdmissibleSystem& f, const AdmissibleSystem& p, double eps);

/// Zero field on the same network.
[[nodiscard]] AdmissibleSystem zero_system(const Network& net, const std::vector<int>& dims);

/// Description of a system in terms of DSL sources, as read from JSON.
struct SystemSpec {
    std::map<std::string, int> type_dims;  ///< node type -> dimension
    std::map<int, int> node_dims;          ///< node id -> dimension override
    std::map<int, std::vector<std::string>> components;  ///< any node id of a class -> sources
    bool symmetrise = true;
    std::vector<double> initial;
    double period_guess = 0.0;
};

/// Dimension per node from a spec.
[[nodiscard]] std::vector<int> resolve_dims(const Network& net, const SystemSpec& spec);

/// Builds the system; components are symmetrised, or checked for invariance
/// (tolerance 1e-9) when symmetrise is false.
[[nodiscard]] AdmissibleSystem build_system(const Network& net, const SystemSpec& spec, std::uint64_t seed = 7);

/// C^1 size of a map f: R^m -> R^k on the given points, using the max over
/// argument blocks of Euclidean norms. Jacobians by central differences.
[[nodiscard]] double c1_norm_estimate(const Component& f, const std::vector<std::vector<double>>& points);

/// Largest component estimate over input classes, each on its own points.
[[nodiscard]] double c1_norm_estimate(const AdmissibleSystem& sys, const std::vector<std::vector<std::vector<double>>>& points_per_class);

/// Seeded points in [-scale, scale]^m for a layout.
[[nodiscard]] std::vector<std::vector<double>> sample_points(const ComponentLayout& layout, std::size_t count,
                                                             std::mt19937_64& rng, double scale = 1.5);

}  // namespace ccn
