#include "ccn/library.hpp"

#include <stdexcept>

namespace ccn::library {

namespace {

const char* kR = "(1 - x[1]^2 - x[2]^2)";

std::string hx() { return std::string(kR) + "*x[1] - x[2]"; }
std::string hy() { return std::string(kR) + "*x[2] + x[1]"; }

/// Hopf plus a coupling term given per coordinate.
std::vector<std::string> hopf_plus(const std::string& cx, const std::string& cy) {
    return {hx() + " + " + cx, hy() + " + " + cy};
}

Example make(std::string name, const Network& net, std::map<int, std::vector<std::string>> comps,
             std::vector<double> x0) {
    SystemSpec spec;
    for (const auto& t : net.node_types()) spec.type_dims[t] = 2;
    spec.components = std::move(comps);
    Example e{std::move(name), build_system(net, spec), std::move(x0)};
    return e;
}

}  // namespace

Network three_ring_mixed() {
    Network n;
    for (int i = 1; i <= 3; ++i) n.add_node(i, "A");
    n.add_arrow(3, 1, "solid");
    n.add_arrow(1, 2, "solid");
    n.add_arrow(2, 3, "dashed");
    return n;
}

Network three_ring_uniform() {
    Network n;
    for (int i = 1; i <= 3; ++i) n.add_node(i, "A");
    n.add_arrow(3, 1, "solid");
    n.add_arrow(1, 2, "solid");
    n.add_arrow(2, 3, "solid");
    return n;
}

Network two_source_feedforward() {
    Network n;
    n.add_node(1, "P");
    n.add_node(2, "Q");
    n.add_node(3, "R");
    n.add_arrow(1, 3, "a");
    n.add_arrow(2, 3, "b");
    return n;
}

Network symmetric_pair() {
    Network n;
    n.add_node(1, "A");
    n.add_node(2, "A");
    n.add_arrow(1, 2, "solid");
    n.add_arrow(2, 1, "solid");
    return n;
}

Network symmetric_pair_with_loops() {
    Network n = symmetric_pair();
    n.add_arrow(1, 1, "dashed");
    n.add_arrow(2, 2, "dashed");
    return n;
}

Network four_node_control() {
    Network n;
    for (int i = 1; i <= 4; ++i) n.add_node(i, "A");
    n.add_arrow(2, 1, "solid");
    n.add_arrow(1, 2, "solid");
    n.add_arrow(4, 3, "solid");
    n.add_arrow(3, 4, "solid");
    n.add_arrow(3, 1, "dashed");
    n.add_arrow(1, 3, "dashed");
    return n;
}

Network single_node() {
    Network n;
    n.add_node(1, "A");
    return n;
}

Network forced_pair() {
    Network n;
    for (int i = 1; i <= 4; ++i) n.add_node(i, "A");
    n.add_arrow(3, 1, "solid");
    n.add_arrow(4, 2, "solid");
    return n;
}

std::vector<std::string> hopf_sources() { return {hx(), hy()}; }

Example hopf() { return make("hopf", single_node(), {{1, hopf_sources()}}, {1.0, 0.0}); }

Example ring_case(char which) {
    const auto net = three_ring_mixed();
    switch (which) {
        case 'A':
            // diffusive coupling vanishing on the diagonal
            return make("ring-A", net,
                        {{1, hopf_plus("0.5*(u[1][1] - x[1])", "0.5*(u[1][2] - x[2])")},
                         {3, hopf_plus("0.8*(u[1][1] - x[1])", "0.8*(u[1][2] - x[2])")}},
                        {1, 0, 1, 0, 1, 0});
        case 'B': {
            // f pulls toward its input but is switched off when the input is a
            // quarter turn ahead; g locks a quarter turn ahead of its input
            const std::string gate = "((u[1][1] + x[2])^2 + (u[1][2] - x[1])^2)";
            return make("ring-B", net,
                        {{1, hopf_plus("0.5*" + gate + "*(u[1][1] - x[1])", "0.5*" + gate + "*(u[1][2] - x[2])")},
                         {3, hopf_plus("0.8*(-u[1][2] - x[1])", "0.8*(u[1][1] - x[2])")}},
                        {1, 0, 1, 0, 0, 1});
        }
        case 'C': {
            // f locks a quarter turn ahead of its input, switched off on the
            // diagonal; g locks a quarter turn behind
            const std::string gate = "((u[1][1] - x[1])^2 + (u[1][2] - x[2])^2)";
            return make("ring-C", net,
                        {{1, hopf_plus("0.5*" + gate + "*(-u[1][2] - x[1])", "0.5*" + gate + "*(u[1][1] - x[2])")},
                         {3, hopf_plus("0.8*(u[1][2] - x[1])", "0.8*(-u[1][1] - x[2])")}},
                        {1, 0, 0, 1, 1, 0});
        }
        case 'D':
            // f locks in antiphase, g in phase
            return make("ring-D", net,
                        {{1, hopf_plus("0.5*(-u[1][1] - x[1])", "0.5*(-u[1][2] - x[2])")},
                         {3, hopf_plus("0.8*(u[1][1] - x[1])", "0.8*(u[1][2] - x[2])")}},
                        {1, 0, -1, 0, -1, 0});
        default: break;
    }
    throw std::runtime_error(std::string("unknown ring case '") + which + "'");
}

namespace {
// rotation by -120 degrees applied to the input
const char* kWaveX = "0.5*(-0.5*u[1][1] + 0.8660254037844386*u[1][2] - x[1])";
const char* kWaveY = "0.5*(-0.8660254037844386*u[1][1] - 0.5*u[1][2] - x[2])";
const std::vector<double> kWaveSeed{1.0, 0.0, -0.5, -0.8660254037844386, -0.5, 0.8660254037844386};
}  // namespace

Example rotating_wave() {
    return make("rotating-wave", three_ring_uniform(), {{1, hopf_plus(kWaveX, kWaveY)}}, kWaveSeed);
}

Example mixed_ring_wave() {
    return make("mixed-ring-wave", three_ring_mixed(),
                {{1, hopf_plus(kWaveX, kWaveY)}, {3, hopf_plus(kWaveX, kWaveY)}}, kWaveSeed);
}

namespace {
const std::vector<std::string> kFollower{"-x[1] + u[1][1]*u[2][1]", "-x[2] + u[1][2]*u[2][2] + 0.5*u[2][1]"};
}

Example double_oscillator() {
    return make("double-oscillator", two_source_feedforward(), {{1, hopf_sources()}, {2, hopf_sources()}, {3, kFollower}},
                {1, 0, 0, 1, 0, 0});
}

Example steady_source() {
    return make("steady-source", two_source_feedforward(),
                {{1, {"-(x[1] - 0.5)", "-(x[2] + 0.25)"}}, {2, hopf_sources()}, {3, kFollower}},
                {0.5, -0.25, 1, 0, 0, 0});
}

Example steady_pair_driving_oscillator() {
    return make("steady-pair", two_source_feedforward(),
                {{1, {"-(x[1] - 0.5)", "-(x[2] + 0.25)"}},
                 {2, {"-(x[1] + 0.3)", "-(x[2] - 0.1)"}},
                 {3, hopf_plus("0.1*u[1][1]*u[2][1]", "0.1*u[1][2]")}},
                {0.5, -0.25, -0.3, 0.1, 1, 0});
}

Example control_pair() {
    // x1 = x3 = v, x2 = x4 = R v with R a quarter turn
    return make("control-pair", four_node_control(),
                {{1, hopf_plus("0.5*(u[1][1] - x[1]) + 0.5*(u[2][2] - x[1])",
                               "0.5*(u[1][2] - x[2]) + 0.5*(-u[2][1] - x[2])")},
                 {2, hopf_plus("0.8*(-u[1][2] - x[1])", "0.8*(u[1][1] - x[2])")}},
                {1, 0, 0, 1, 1, 0, 0, 1});
}

Example antiphase_pair() {
    return make("antiphase-pair", symmetric_pair(), {{1, hopf_plus("0.5*(-u[1][1] - x[1])", "0.5*(-u[1][2] - x[2])")}},
                {1, 0, -1, 0});
}

std::vector<std::string> example_names() {
    return {"hopf",         "ring-A",        "ring-B",         "ring-C",      "ring-D",
            "rotating-wave", "mixed-ring-wave", "double-oscillator", "steady-source", "steady-pair",
            "control-pair", "antiphase-pair"};
}

Example example(const std::string& name) {
    if (name == "hopf") return hopf();
    if (name.size() == 6 && name.rfind("ring-", 0) == 0) return ring_case(name[5]);
    if (name == "rotating-wave") return rotating_wave();
    if (name == "mixed-ring-wave") return mixed_ring_wave();
    if (name == "double-oscillator") return double_oscillator();
    if (name == "steady-source") return steady_source();
    if (name == "steady-pair") return steady_pair_driving_oscillator();
    if (name == "control-pair") return control_pair();
    if (name == "antiphase-pair") return antiphase_pair();
    throw std::runtime_error("unknown built-in system '" + name + "'");
}

std::vector<std::string> network_names() {
    return {"three-ring-mixed", "three-ring-uniform", "two-source", "symmetric-pair", "symmetric-pair-loops",
            "four-node-control", "single-node", "forced-pair"};
}

Network network(const std::string& name) {
    if (name == "three-ring-mixed") return three_ring_mixed();
    if (name == "three-ring-uniform") return three_ring_uniform();
    if (name == "two-source") return two_source_feedforward();
    if (name == "symmetric-pair") return symmetric_pair();
    if (name == "symmetric-pair-loops") return symmetric_pair_with_loops();
    if (name == "four-node-control") return four_node_control();
    if (name == "single-node") return single_node();
    if (name == "forced-pair") return forced_pair();
    throw std::runtime_error("unknown built-in network '" + name + "'");
}

}  // namespace ccn::library
