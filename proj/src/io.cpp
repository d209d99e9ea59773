#include "ccn/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ccn::io {

Network network_from_json(const json& j) {
    if (!j.contains("nodes") || !j["nodes"].is_array()) throw std::runtime_error("network JSON needs a 'nodes' array");
    std::vector<std::pair<int, std::string>> nodes;
    for (const auto& n : j["nodes"]) {
        if (n.is_number_integer()) {
            nodes.emplace_back(n.get<int>(), "A");
        } else {
            nodes.emplace_back(n.at("id").get<int>(), n.value("type", std::string("A")));
        }
    }
    std::sort(nodes.begin(), nodes.end());
    Network net;
    for (auto& [id, type] : nodes) net.add_node(id, type);
    if (j.contains("arrows")) {
        for (const auto& a : j["arrows"]) {
            net.add_arrow(a.at("tail").get<int>(), a.at("head").get<int>(), a.value("type", std::string("solid")),
                          a.value("id", -1));
        }
    }
    return net;
}

json network_to_json(const Network& net) {
    json j;
    j["nodes"] = json::array();
    for (const auto& n : net.nodes()) j["nodes"].push_back({{"id", n.id}, {"type", n.type}});
    j["arrows"] = json::array();
    for (const auto& a : net.arrows()) {
        j["arrows"].push_back(
            {{"id", a.id}, {"tail", net.node_id(a.tail)}, {"head", net.node_id(a.head)}, {"type", a.type}});
    }
    return j;
}

Colouring colouring_from_json(const Network& net, const json& j) {
    if (j.is_object() && j.contains("colours")) {
        // {"colours": {"<node id>": <colour>, ...}}
        std::vector<int> lab(net.size(), -1);
        for (const auto& [k, v] : j["colours"].items()) lab[net.index_of(std::stoi(k))] = v.get<int>();
        for (std::size_t c = 0; c < net.size(); ++c) {
            if (lab[c] == -1) throw std::runtime_error("node " + std::to_string(net.node_id(c)) + " has no colour");
        }
        return Colouring(lab);
    }
    const json& arr = j.is_object() ? j.at("colouring") : j;
    std::vector<int> lab(net.size(), -1);
    int k = 0;
    for (const auto& block : arr) {
        for (const auto& id : block) {
            auto c = net.index_of(id.get<int>());
            if (lab[c] != -1) throw std::runtime_error("node " + std::to_string(id.get<int>()) + " coloured twice");
            lab[c] = k;
        }
        ++k;
    }
    for (std::size_t c = 0; c < net.size(); ++c) {
        if (lab[c] == -1) throw std::runtime_error("node " + std::to_string(net.node_id(c)) + " has no colour");
    }
    return Colouring(lab);
}

json colouring_to_json(const Network& net, const Colouring& col) {
    json j = json::array();
    for (const auto& b : col.blocks()) j.push_back(ids(net, b));
    return j;
}

Colouring parse_colouring(const Network& net, const std::string& text) {
    json arr = json::array();
    std::stringstream ss(text);
    std::string block;
    while (std::getline(ss, block, '|')) {
        json b = json::array();
        std::stringstream bs(block);
        std::string id;
        while (std::getline(bs, id, ',')) {
            if (id.find_first_not_of(" \t") == std::string::npos) continue;
            try {
                b.push_back(std::stoi(id));
            } catch (const std::exception&) {
                throw std::runtime_error("bad node id '" + id + "' in colouring");
            }
        }
        arr.push_back(b);
    }
    return colouring_from_json(net, arr);
}

SystemSpec system_spec_from_json(const json& j) {
    SystemSpec s;
    if (j.contains("dims")) {
        for (const auto& [k, v] : j["dims"].items()) s.type_dims[k] = v.get<int>();
    }
    if (j.contains("node_dims")) {
        for (const auto& [k, v] : j["node_dims"].items()) s.node_dims[std::stoi(k)] = v.get<int>();
    }
    if (!j.contains("components")) throw std::runtime_error("system JSON needs 'components'");
    for (const auto& [k, v] : j["components"].items()) {
        std::vector<std::string> src;
        if (v.is_string()) src.push_back(v.get<std::string>());
        else
            for (const auto& e : v) src.push_back(e.get<std::string>());
        std::string key = k;
        // accept "classRep3" style keys as well as bare ids
        auto pos = key.find_first_of("0123456789");
        if (pos == std::string::npos) throw std::runtime_error("component key '" + k + "' names no node");
        s.components[std::stoi(key.substr(pos))] = src;
    }
    s.symmetrise = j.value("symmetrise", true);
    if (j.contains("initial")) s.initial = j["initial"].get<std::vector<double>>();
    s.period_guess = j.value("period_guess", 0.0);
    return s;
}

json system_spec_to_json(const SystemSpec& s) {
    json j;
    j["dims"] = json::object();
    for (const auto& [k, v] : s.type_dims) j["dims"][k] = v;
    if (!s.node_dims.empty()) {
        j["node_dims"] = json::object();
        for (const auto& [k, v] : s.node_dims) j["node_dims"][std::to_string(k)] = v;
    }
    j["components"] = json::object();
    for (const auto& [k, v] : s.components) j["components"][std::to_string(k)] = v;
    j["symmetrise"] = s.symmetrise;
    if (!s.initial.empty()) j["initial"] = s.initial;
    if (s.period_guess > 0) j["period_guess"] = s.period_guess;
    return j;
}

json orbit_to_json(const PeriodicOrbit& orbit) {
    json j;
    j["anchor"] = orbit.anchor;
    j["period"] = orbit.period;
    j["section_point"] = orbit.section_point;
    j["section_normal"] = orbit.section_normal;
    j["iterations"] = orbit.iterations;
    j["residual"] = orbit.residual;
    j["multipliers"] = json::array();
    for (const auto& m : orbit.multipliers) j["multipliers"].push_back({m.real(), m.imag()});
    return j;
}

PeriodicOrbit orbit_from_json(const json& j) {
    PeriodicOrbit o;
    o.anchor = j.at("anchor").get<std::vector<double>>();
    o.period = j.at("period").get<double>();
    if (j.contains("section_point")) o.section_point = j["section_point"].get<std::vector<double>>();
    if (j.contains("section_normal")) o.section_normal = j["section_normal"].get<std::vector<double>>();
    o.iterations = j.value("iterations", 0);
    o.residual = j.value("residual", 0.0);
    if (j.contains("multipliers")) {
        for (const auto& m : j["multipliers"]) o.multipliers.emplace_back(m.at(0).get<double>(), m.at(1).get<double>());
    }
    return o;
}

json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << '\n';
}

json ids(const Network& net, const std::vector<std::size_t>& nodes) {
    json a = json::array();
    for (auto c : nodes) a.push_back(net.node_id(c));
    return a;
}

}  // namespace ccn::io
