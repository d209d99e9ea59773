#include <doctest.h>

#include <cmath>
#include <random>

#include "ccn/admissible.hpp"
#include "ccn/bump.hpp"
#include "ccn/expr.hpp"
#include "ccn/library.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ccn;
using testing::col;
using testing::make_net;

namespace {

AdmissibleSystem ring_system(const std::string& f, const std::string& g) {
    auto ring = library::three_ring_mixed();
    SystemSpec spec;
    spec.type_dims["A"] = 1;
    spec.components[1] = {f};
    spec.components[3] = {g};
    return build_system(ring, spec);
}

double sup_norm(const Component& f, const std::vector<std::vector<double>>& pts) {
    double best = 0.0;
    std::vector<double> out(static_cast<std::size_t>(f.layout().self_dim));
    for (const auto& p : pts) {
        f.eval(p.data(), out.data());
        for (double v : out) best = std::max(best, std::abs(v));
    }
    return best;
}

}  // namespace

TEST_CASE("expression parsing") {
    auto e = expr::parse("-x[1] + u[1][1]");
    CHECK(e.max_self_index() == 1);
    REQUIRE(e.max_input_index().size() == 1);
    CHECK(e.max_input_index()[0] == 1);

    try {
        (void)expr::parse("sin(x[1]");
        FAIL("no parse error");
    } catch (const expr::ParseError& err) {
        CHECK(err.position() == 8);
    }
    CHECK_THROWS_AS(expr::parse("x[0]"), expr::ParseError);
    CHECK_THROWS_AS(expr::parse("foo(x[1])"), expr::ParseError);
    CHECK_THROWS_AS(expr::parse("x[1] +"), expr::ParseError);

    // index beyond the single input slot
    CHECK_THROWS_AS(expr::Program(expr::parse("u[2][1]"), 1, {1}), std::runtime_error);
    CHECK_THROWS_AS(expr::Program(expr::parse("x[2]"), 1, {1}), std::runtime_error);
}

TEST_CASE("expression printing round-trips") {
    for (const char* src : {"-x[1] + u[1][1]", "sin(x[1]) * exp(-u[2][1])^2", "(1 - x[1]^2 - x[2]^2)*x[1] - x[2]",
                            "tanh(u[1][2]) / (1 + x[1]*x[1])", "2.5e-3 - -x[1]"}) {
        auto a = expr::parse(src);
        auto b = expr::parse(a.to_string());
        CHECK(expr::structurally_equal(a.root(), b.root()));
    }
}

TEST_CASE("compiled program matches tree evaluation") {
    auto e = expr::parse("sin(x[1]) * exp(-u[2][1])^2 + tanh(u[1][2]) / (1 + x[2]*x[2]) - cos(u[2][2])");
    expr::Program prog(e, 2, {2, 2});
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 0; k < 50; ++k) {
        std::vector<double> y(6);
        for (auto& v : y) v = u(rng);
        double tree = expr::evaluate(e.root(), y.data(), {y.data() + 2, y.data() + 4});
        CHECK(prog(y.data()) == doctest::Approx(tree).epsilon(1e-14));
    }
    expr::Program div(expr::parse("1 / (x[1] - x[1])"), 1, {});
    double y0 = 1.0;
    CHECK_THROWS_AS((void)div(&y0), expr::EvalError);
}

TEST_CASE("admissible evaluation on the mixed ring") {
    auto sys = ring_system("u[1][1]", "-x[1]");
    std::vector<double> x{1, 2, 3}, dx(3);
    sys.eval(x.data(), dx.data());
    CHECK(dx == std::vector<double>{3, 1, -3});

    auto zero = zero_system(sys.network(), sys.dims());
    zero.eval(x.data(), dx.data());
    CHECK(dx == std::vector<double>{0, 0, 0});
}

TEST_CASE("input-equivalent nodes share one component object") {
    auto sys = ring_system("u[1][1]", "-x[1]");
    CHECK(sys.component_for_node(0).get() == sys.component_for_node(1).get());
    CHECK(sys.component_for_node(0).get() != sys.component_for_node(2).get());
}

TEST_CASE("balanced polydiagonals are invariant") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        auto net = oracle::random_network(rng, 4, 2, 3);
        auto sys = testing::random_system(net, rng, 2);
        for (const auto& c : enumerate_balanced(net)) {
            std::vector<double> vals(c.num_colours() * 2);
            for (auto& v : vals) v = u(rng);
            std::vector<double> x(8), dx(8);
            for (std::size_t i = 0; i < 4; ++i)
                for (int k = 0; k < 2; ++k) x[i * 2 + k] = vals[static_cast<std::size_t>(c.colour(i)) * 2 + k];
            sys.eval(x.data(), dx.data());
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = i + 1; j < 4; ++j)
                    if (c.colour(i) == c.colour(j))
                        for (int k = 0; k < 2; ++k) CHECK(std::abs(dx[i * 2 + k] - dx[j * 2 + k]) <= 1e-12);
            ++checked;
        }
    }
    CHECK(checked > 40);
}

TEST_CASE("symmetrisation") {
    auto net = make_net(3, {{2, 1, "s"}, {3, 1, "s"}});
    auto G = vertex_group(net, 0);
    ComponentLayout lay{1, {1, 1}};
    auto base = std::make_shared<ExprComponent>(lay, std::vector<std::string>{"u[1][1]"});
    auto sym = std::make_shared<SymmetrisedComponent>(base, G);
    std::vector<double> y{0.3, 1.0, 5.0};
    double out = 0;
    sym->eval(y.data(), &out);
    CHECK(out == doctest::Approx(3.0));

    std::mt19937_64 rng(2);
    auto pts = sample_points(lay, 64, rng);
    SymmetrisedComponent twice(sym, G);
    for (const auto& p : pts) {
        double a = 0, b = 0;
        sym->eval(p.data(), &a);
        twice.eval(p.data(), &b);
        CHECK(std::abs(a - b) <= 1e-15);
    }
    auto wild = std::make_shared<ExprComponent>(lay, std::vector<std::string>{"u[1][1]^3 - 2*u[2][1] + x[1]"});
    SymmetrisedComponent wsym(wild, G);
    CHECK(sup_norm(wsym, pts) <= sup_norm(*wild, pts) + 1e-14);
    CHECK(invariance_defect(wsym, G, rng) <= 1e-12);
    CHECK(invariance_defect(*wild, G, rng) > 1e-3);
}

TEST_CASE("non-symmetrised components are checked") {
    auto net = make_net(3, {{2, 1, "s"}, {3, 1, "s"}, {1, 2, "t"}, {1, 3, "t"}});
    SystemSpec spec;
    spec.type_dims["A"] = 1;
    spec.components[1] = {"u[1][1] - u[2][1]"};
    spec.components[2] = {"u[1][1]"};
    spec.symmetrise = false;
    CHECK_THROWS_AS(build_system(net, spec), std::runtime_error);
    spec.components[1] = {"u[1][1] * u[2][1]"};
    CHECK_NOTHROW(build_system(net, spec));
    spec.components.erase(2);
    CHECK_THROWS_AS(build_system(net, spec), std::runtime_error);
}

TEST_CASE("bump component") {
    ComponentLayout lay{2, {2}};
    std::vector<double> z{0.1, 0.2, -0.3, 0.4}, w{1.5, -2.0};
    const double delta = 0.05;
    BumpComponent b(lay, z, w, delta);
    std::vector<double> out(2);
    b.eval(z.data(), out.data());
    CHECK(out == w);
    auto far = z;
    far[0] += 3 * delta;
    b.eval(far.data(), out.data());
    CHECK(out == std::vector<double>{0.0, 0.0});
    BumpComponent zero(lay, z, {0.0, 0.0}, delta);
    zero.eval(z.data(), out.data());
    CHECK(out == std::vector<double>{0.0, 0.0});
    CHECK(bump_profile(0.5) == 1.0);
    CHECK(bump_profile(4.0) == 0.0);
    CHECK(bump_profile(2.5) > 0.0);
    CHECK(bump_profile(2.5) < 1.0);
}

TEST_CASE("symmetrised bump") {
    auto net = make_net(3, {{2, 1, "s"}, {3, 1, "s"}});
    auto G = vertex_group(net, 0);
    ComponentLayout lay{1, {1, 1}};
    std::vector<double> z{0.0, 1.0, 2.0}, w{0.7};

    SymmetrisedBumpComponent empty(lay, z, {}, w, 0.1, G);
    CHECK(empty.centres().size() == 2);

    // z itself under the group action
    CHECK_THROWS_AS(SymmetrisedBumpComponent(lay, z, {{0.0, 2.0, 1.0}}, w, 0.1, G), std::runtime_error);

    std::vector<std::vector<double>> avoid{{0.0, 1.0, 1.05}, {0.5, 0.5, 0.5}};
    SymmetrisedBumpComponent sb(lay, z, avoid, w, 0.2, G);
    CHECK(sb.delta() <= 0.2);
    double out = 1;
    for (const auto& a : avoid)
        for (const auto& p : group_orbit(lay, a, G)) {
            sb.eval(p.data(), &out);
            CHECK(out == 0.0);
        }
    for (const auto& p : group_orbit(lay, z, G)) {
        sb.eval(p.data(), &out);
        CHECK(out == 0.7);
    }
    std::mt19937_64 rng(9);
    CHECK(invariance_defect(sb, G, rng, 64, 2.0, true) <= 1e-12);
}

TEST_CASE("C1 norm estimate") {
    ComponentLayout lay{2, {1}};
    std::mt19937_64 rng(4);
    auto pts = sample_points(lay, 20, rng);
    ExprComponent cst(lay, {"3", "4"});
    CHECK(c1_norm_estimate(cst, pts) == doctest::Approx(5.0));

    ExprComponent lin(lay, {"2*x[1] - x[2] + 0.5*u[1][1]", "x[2] + 3*u[1][1]"});
    // column norms: (2,0), (1,1), (0.5,3)
    CHECK(c1_norm_estimate(lin, pts) >= std::hypot(0.5, 3.0) - 1e-6);

    std::vector<double> z{0.2, 0.1, -0.1};
    auto bump = std::make_shared<BumpComponent>(lay, z, std::vector<double>{1.0, 0.5}, 0.3);
    auto zero = std::make_shared<ZeroComponent>(lay);
    auto near = sample_points(lay, 200, rng, 0.7);
    const double base = c1_norm_estimate(*bump, near);
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        SumComponent scaled(zero, bump, eps);
        CHECK(c1_norm_estimate(scaled, near) == doctest::Approx(eps * base).epsilon(0.01));
    }
}

TEST_CASE("dimension resolution") {
    auto net = library::two_source_feedforward();
    SystemSpec spec;
    spec.type_dims = {{"P", 1}, {"Q", 2}, {"R", 3}};
    spec.node_dims[3] = 2;
    CHECK(resolve_dims(net, spec) == std::vector<int>{1, 2, 2});
    spec.type_dims.erase("Q");
    CHECK_THROWS_AS((void)resolve_dims(net, spec), std::runtime_error);
}
