#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "ccn/dynamics.hpp"
#include "ccn/library.hpp"
#include "ccn/orbit.hpp"
#include "ccn/quotient.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ccn;
using testing::col;
using testing::idx;
using testing::make_net;

namespace {

using ArrowSet = std::multiset<std::tuple<int, int, std::string>>;

ArrowSet arrow_set(const Network& net) {
    ArrowSet s;
    for (const auto& a : net.arrows()) s.insert({net.node_id(a.tail), net.node_id(a.head), a.type});
    return s;
}

AdmissibleSystem ring_system(const std::string& f, const std::string& g) {
    auto ring = library::three_ring_mixed();
    SystemSpec spec;
    spec.type_dims["A"] = 1;
    spec.components[1] = {f};
    spec.components[3] = {g};
    return build_system(ring, spec);
}

const char* kF = "2*u[1][1] - x[1]^2 + 0.3";
const char* kG = "sin(x[1]) + u[1][1]*x[1]";

double F(double a, double b) { return 2 * b - a * a + 0.3; }
double G(double a, double b) { return std::sin(a) + b * a; }

}  // namespace

TEST_CASE("quasi-quotients of the mixed ring") {
    auto ring = library::three_ring_mixed();
    auto c = col(ring, "1,2|3");
    auto q13 = quasi_quotient(ring, c, idx(ring, {1, 3}));
    CHECK(arrow_set(q13.net) == ArrowSet{{3, 1, "solid"}, {1, 3, "dashed"}});
    auto q23 = quasi_quotient(ring, c, idx(ring, {2, 3}));
    CHECK(arrow_set(q23.net) == ArrowSet{{2, 2, "solid"}, {2, 3, "dashed"}});
    CHECK(q23.bracket == std::vector<std::size_t>{0, 0, 1});
    CHECK_THROWS_AS(quasi_quotient(ring, c, idx(ring, {1, 2})), std::runtime_error);
    CHECK_THROWS_AS(quasi_quotient(ring, c, idx(ring, {1})), std::runtime_error);
}

TEST_CASE("restricted systems of the mixed ring") {
    auto sys = ring_system(kF, kG);
    auto ring = sys.network();
    auto c = col(ring, "1,2|3");
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);

    auto r13 = restrict_system(sys, quasi_quotient(ring, c, idx(ring, {1, 3})));
    auto r23 = restrict_system(sys, quasi_quotient(ring, c, idx(ring, {2, 3})));
    for (int k = 0; k < 20; ++k) {
        std::vector<double> x{u(rng), u(rng)}, dx(2);
        r13.eval(x.data(), dx.data());
        CHECK(dx[0] == doctest::Approx(F(x[0], x[1])).epsilon(1e-14));
        CHECK(dx[1] == doctest::Approx(G(x[1], x[0])).epsilon(1e-14));
        r23.eval(x.data(), dx.data());
        CHECK(dx[0] == doctest::Approx(F(x[0], x[0])).epsilon(1e-14));
        CHECK(dx[1] == doctest::Approx(G(x[1], x[0])).epsilon(1e-14));
    }
}

TEST_CASE("control quotients are isomorphic") {
    auto net = library::four_node_control();
    auto c = col(net, "1,3|2,4");
    auto a = quasi_quotient(net, c, idx(net, {1, 2}));
    auto b = quasi_quotient(net, c, idx(net, {3, 4}));
    CHECK(find_isomorphism(a.net, b.net).has_value());
}

TEST_CASE("discrete colouring restricts to the original system") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 10; ++trial) {
        auto net = oracle::random_network(rng, 4, 2, 3);
        auto sys = testing::random_system(net, rng, 2);
        auto r = restrict_system(sys, quasi_quotient(net, Colouring::discrete(4)));
        std::vector<double> x(8), a(8), b(8);
        for (auto& v : x) v = u(rng);
        sys.eval(x.data(), a.data());
        r.eval(x.data(), b.data());
        for (int i = 0; i < 8; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-14);
    }
}

TEST_CASE("lift then restrict is the identity") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 40; ++trial) {
        auto net = oracle::random_network(rng, 5, 2, 4);
        auto cols = all_colourings(5);
        const auto& c = cols[std::uniform_int_distribution<std::size_t>(0, cols.size() - 1)(rng)];
        std::vector<std::size_t> reps;
        for (const auto& b : c.blocks()) reps.push_back(b[std::uniform_int_distribution<std::size_t>(0, b.size() - 1)(rng)]);
        auto qq = quasi_quotient(net, c, reps);
        auto g = testing::random_system(qq.net, rng, 1);
        auto lifted = lift_system(g, qq, net);
        auto back = restrict_system(lifted, qq);
        for (int k = 0; k < 20; ++k) {
            std::vector<double> x(qq.net.size()), a(x.size()), b(x.size());
            for (auto& v : x) v = u(rng);
            g.eval(x.data(), a.data());
            back.eval(x.data(), b.data());
            for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
        }
        // classes not meeting R are zero
        std::set<int> meet;
        for (auto r : reps) meet.insert(lifted.class_of(r));
        for (std::size_t k = 0; k < lifted.num_classes(); ++k) {
            if (meet.count(static_cast<int>(k))) continue;
            auto pts = sample_points(lifted.component(k)->layout(), 10, rng);
            std::vector<double> out(1);
            for (const auto& p : pts) {
                lifted.component(k)->eval(p.data(), out.data());
                CHECK(out[0] == 0.0);
            }
        }
    }
}

TEST_CASE("constraint residual") {
    auto same = ring_system(kF, kF);
    auto ring = same.network();
    auto qq = quasi_quotient(ring, Colouring::uniform(3));
    std::vector<std::vector<double>> diag{{0.3, 0.3, 0.3}, {-1, -1, -1}, {0.7, 0.7, 0.7}};
    CHECK(constraint_residual(same, qq, diag).max <= 1e-15);

    auto diff = ring_system(kF, kG);
    double want = 0.0;
    for (const auto& s : diag) want = std::max(want, std::abs(G(s[0], s[0]) - F(s[0], s[0])));
    CHECK(constraint_residual(diff, qq, diag).max == doctest::Approx(want).epsilon(1e-13));

    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        auto net = oracle::random_network(rng, 4, 2, 3);
        auto sys = testing::random_system(net, rng, 1);
        for (const auto& c : enumerate_balanced(net)) {
            std::vector<std::vector<double>> pts(5, std::vector<double>(4));
            for (auto& p : pts)
                for (auto& v : p) v = u(rng);
            CHECK(constraint_residual(sys, quasi_quotient(net, c), pts).max <= 1e-12);
        }
    }
}

TEST_CASE("quotient input classes are inherited") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 40; ++trial) {
        auto net = oracle::random_network(rng, 5, 2, 4);
        auto cols = all_colourings(5);
        const auto& c = cols[std::uniform_int_distribution<std::size_t>(0, cols.size() - 1)(rng)];
        auto qq = quasi_quotient(net, c);
        auto ql = input_class_labels(qq.net);
        auto gl = input_class_labels(net);
        for (std::size_t i = 0; i < qq.reps.size(); ++i)
            for (std::size_t j = 0; j < qq.reps.size(); ++j)
                CHECK((ql[i] == ql[j]) == (gl[qq.reps[i]] == gl[qq.reps[j]]));
    }
}

TEST_CASE("projection onto a polydiagonal") {
    auto sys = ring_system(kF, kG);
    auto p = project_polydiagonal(sys, col(sys.network(), "1,2|3"), {1.0, 3.0, 5.0});
    CHECK(p == std::vector<double>{2.0, 2.0, 5.0});
}

TEST_CASE("good transversals") {
    auto ring = library::three_ring_mixed();
    auto s = good_transversals(ring, col(ring, "1,2|3"));
    CHECK_FALSE(s.good.empty());
    CHECK(s.examined == 2);
}

TEST_CASE("doubled network and system") {
    auto hopf = library::hopf();
    auto net2 = double_network(hopf.system.network());
    CHECK(net2.size() == 2);
    auto d = double_system(hopf.system);
    CHECK(d.state_dim() == 4);

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 20; ++k) {
        std::vector<double> x{u(rng), u(rng), u(rng), u(rng)}, dx(4), a(2), b(2);
        d.eval(x.data(), dx.data());
        hopf.system.eval(x.data(), a.data());
        hopf.system.eval(x.data() + 2, b.data());
        CHECK(dx == std::vector<double>{a[0], a[1], b[0], b[1]});
    }
    auto back = undouble_system(d, hopf.system);
    std::vector<double> x{0.3, -0.2}, a(2), b(2);
    back.eval(x.data(), a.data());
    hopf.system.eval(x.data(), b.data());
    CHECK(a == b);
}

TEST_CASE("sheared Hopf orbit solves the doubled system") {
    auto hopf = library::hopf();
    auto f = as_field(hopf.system);
    auto orbit = find_periodic_orbit(f, hopf.initial, hopf.period_guess);
    auto samples = OrbitSamples::sample(f, orbit, 1e-3, 256);
    auto f2 = as_field(double_system(hopf.system));

    auto zero = samples.shear(f2, 0.0);
    for (const auto& s : zero.states()) {
        CHECK(s[0] == doctest::Approx(s[2]).epsilon(1e-12));
        CHECK(s[1] == doctest::Approx(s[3]).epsilon(1e-12));
    }
    auto q = samples.shear(f2, 0.25);
    for (std::size_t k : {0u, 37u, 128u}) {
        auto x = q.state(k);
        auto tr = integrate(f2, x, 0.5, {1e-4});
        auto want = q.at(q.time(k) + 0.5);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(tr.x.back()[static_cast<std::size_t>(i)] - want[static_cast<std::size_t>(i)]) <= 1e-6);
    }
    // a quarter period ahead on the unit circle is a rotation by a right angle
    auto s = q.state(0);
    CHECK(std::abs(s[2] + s[1]) <= 1e-6);
    CHECK(std::abs(s[3] - s[0]) <= 1e-6);
}
