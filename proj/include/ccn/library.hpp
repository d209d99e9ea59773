#pragma once

#include <string>
#include <vector>

#include "ccn/admissible.hpp"
#include "ccn/network.hpp"

namespace ccn::library {

/// 3 -> 1 and 1 -> 2 solid, 2 -> 3 dashed; all nodes of one type.
[[nodiscard]] Network three_ring_mixed();
/// 3 -> 1 -> 2 -> 3, one arrow type.
[[nodiscard]] Network three_ring_uniform();
/// Independent sources 1 and 2 (distinct types) both driving node 3.
[[nodiscard]] Network two_source_feedforward();
/// 1 <-> 2, one arrow type.
[[nodiscard]] Network symmetric_pair();
/// symmetric_pair plus a dashed self-loop on each node.
[[nodiscard]] Network symmetric_pair_with_loops();
/// Two solid 2-rings {1,2}, {3,4} joined by dashed 1 <-> 3.
[[nodiscard]] Network four_node_control();
/// Single node, no arrows.
[[nodiscard]] Network single_node();
/// Nodes 1, 2 fed by 3 and 4 respectively.
[[nodiscard]] Network forced_pair();

/// Planar Hopf normal form with unit frequency, as DSL sources.
[[nodiscard]] std::vector<std::string> hopf_sources();

/// A built-in system with its seed state.
struct Example {
    std::string name;
    AdmissibleSystem system;
    std::vector<double> initial;
    double period_guess = 6.283185307179586;
};

[[nodiscard]] Example hopf();

/// Mixed ring with an orbit whose synchrony pattern is
/// "A" {{1,2,3}}, "B" {{1,2},{3}}, "C" {{1,3},{2}} or "D" {{2,3},{1}}.
[[nodiscard]] Example ring_case(char which);

/// Uniform ring with a rotating wave, x_1(t) = x_2(t + T/3).
[[nodiscard]] Example rotating_wave();

/// Mixed ring given the same component on both input classes, so the
/// rotating wave still exists.
[[nodiscard]] Example mixed_ring_wave();

/// Both sources oscillate with equal frequency.
[[nodiscard]] Example double_oscillator();

/// Source 1 sits at an equilibrium, source 2 oscillates, node 3 follows.
[[nodiscard]] Example steady_source();

/// Both sources at equilibria, node 3 oscillates on its own.
[[nodiscard]] Example steady_pair_driving_oscillator();

/// Four-node network with a synchronous orbit {{1,3},{2,4}}.
[[nodiscard]] Example control_pair();

/// Symmetric two-node ring with an antiphase orbit.
[[nodiscard]] Example antiphase_pair();

[[nodiscard]] std::vector<std::string> example_names();
[[nodiscard]] Example example(const std::string& name);
[[nodiscard]] Network network(const std::string& name);
[[nodiscard]] std::vector<std::string> network_names();

}  // namespace ccn::library
