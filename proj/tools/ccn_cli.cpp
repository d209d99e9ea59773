#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccn/admissible.hpp"
#include "ccn/colouring.hpp"
#include "ccn/dynamics.hpp"
#include "ccn/io.hpp"
#include "ccn/library.hpp"
#include "ccn/network.hpp"
#include "ccn/odeequiv.hpp"
#include "ccn/orbit.hpp"
#include "ccn/patterns.hpp"
#include "ccn/quotient.hpp"
#include "ccn/rigidity.hpp"

namespace {

using ccn::io::json;

constexpr const char* kBuiltin = "builtin:";

struct Options {
    std::string net, net2, sys, col, reps, eps, dims;
    std::string out, csv;
    std::size_t ensemble = 16;
    std::uint64_t seed = 1;
    double tol_sync = 1e-8, tol_steady = 1e-8, tol_triv = 1e-5, tol_hyp = 1e-3, tol_phase = 1e-6;
    double h = 1e-3, t_end = 20.0, theta = 0.0, period = 0.0;
    std::size_t samples = 1024;
    unsigned workers = 0;
};

bool is_builtin(const std::string& s) { return s.rfind(kBuiltin, 0) == 0; }

ccn::Network load_network(const std::string& arg) {
    if (arg.empty()) throw std::runtime_error("--net is required");
    if (is_builtin(arg)) return ccn::library::network(arg.substr(std::string(kBuiltin).size()));
    return ccn::io::network_from_json(ccn::io::read_json_file(arg));
}

struct LoadedSystem {
    ccn::AdmissibleSystem system;
    std::vector<double> initial;
    double period_guess = 6.283185307179586;
};

/// --sys FILE (with --net, or a "network" key inside) or --sys builtin:NAME.
LoadedSystem load_system(const Options& o) {
    if (o.sys.empty()) throw std::runtime_error("--sys is required");
    LoadedSystem ls;
    if (is_builtin(o.sys)) {
        auto ex = ccn::library::example(o.sys.substr(std::string(kBuiltin).size()));
        ls.system = ex.system;
        ls.initial = ex.initial;
        ls.period_guess = ex.period_guess;
    } else {
        auto j = ccn::io::read_json_file(o.sys);
        ccn::Network net = j.contains("network") ? ccn::io::network_from_json(j["network"]) : load_network(o.net);
        auto spec = ccn::io::system_spec_from_json(j);
        ls.system = ccn::build_system(net, spec, o.seed);
        ls.initial = spec.initial;
        if (spec.period_guess > 0) ls.period_guess = spec.period_guess;
    }
    if (o.period > 0) ls.period_guess = o.period;
    if (ls.initial.empty()) throw std::runtime_error("the system gives no initial state");
    if (ls.initial.size() != ls.system.state_dim()) throw std::runtime_error("initial state has the wrong dimension");
    return ls;
}

ccn::Colouring load_colouring(const ccn::Network& net, const std::string& arg) {
    if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json") {
        return ccn::io::colouring_from_json(net, ccn::io::read_json_file(arg));
    }
    return ccn::io::parse_colouring(net, arg);
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw std::runtime_error("bad number '" + item + "'");
        }
    }
    return v;
}

std::vector<std::size_t> parse_reps(const ccn::Network& net, const std::string& s) {
    std::vector<std::size_t> r;
    for (double d : parse_doubles(s)) r.push_back(net.index_of(static_cast<int>(d)));
    return r;
}

/// dims per node from "A=2,B=1" (default 1 per type).
std::vector<int> parse_dims(const ccn::Network& net, const std::string& s) {
    std::map<std::string, int> by_type;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::runtime_error("bad --dims entry '" + item + "'");
        by_type[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
    }
    std::vector<int> d;
    for (const auto& n : net.nodes()) d.push_back(by_type.count(n.type) ? by_type[n.type] : 1);
    return d;
}

void emit(const Options& o, const json& j) {
    std::cout << j.dump(2) << '\n';
    if (!o.out.empty()) ccn::io::write_json_file(o.out, j);
}

json partition_json(const ccn::Network& net, const ccn::Partition& p) {
    json a = json::array();
    for (const auto& b : p) a.push_back(ccn::io::ids(net, b));
    return a;
}

ccn::ProbeConfig probe_config(const Options& o, const LoadedSystem& ls) {
    ccn::ProbeConfig cfg;
    cfg.system = ls.system;
    cfg.initial = ls.initial;
    cfg.period_guess = ls.period_guess;
    if (!o.eps.empty()) cfg.eps = parse_doubles(o.eps);
    cfg.ensemble = o.ensemble;
    cfg.seed = o.seed;
    cfg.sync.rel = o.tol_sync;
    cfg.sync.steady = o.tol_steady;
    cfg.tol_steady = o.tol_steady;
    cfg.tol_triv = o.tol_triv;
    cfg.tol_hyp = o.tol_hyp;
    cfg.orbit.h = o.h;
    cfg.samples = o.samples;
    cfg.workers = o.workers;
    return cfg;
}

ccn::PeriodicOrbit solve_orbit(const Options& o, const LoadedSystem& ls) {
    ccn::OrbitOptions oo;
    oo.h = o.h;
    return ccn::find_periodic_orbit(ccn::as_field(ls.system), ls.initial, ls.period_guess, oo);
}

void write_samples_csv(const ccn::OrbitSamples& s, const std::string& path) {
    ccn::Trajectory tr;
    tr.dim = s.dim();
    for (std::size_t k = 0; k < s.size(); ++k) {
        tr.t.push_back(s.time(k));
        tr.x.push_back(s.state(k));
    }
    ccn::write_csv(tr, path);
}

int run(const std::string& cmd, const Options& o) {
    if (cmd == "validate") {
        auto net = load_network(o.net);
        auto dims = o.sys.empty() ? parse_dims(net, o.dims) : load_system(o).system.dims();
        auto r = ccn::validate_network(net, dims);
        emit(o, {{"valid", true},
                 {"state_classes", partition_json(net, r.state_classes)},
                 {"input_classes", partition_json(net, r.input_classes)},
                 {"warnings", r.warnings}});
        return 0;
    }
    if (cmd == "classes") {
        auto net = load_network(o.net);
        json groups = json::array();
        for (std::size_t c = 0; c < net.size(); ++c) {
            auto g = ccn::vertex_group(net, c);
            json blocks = json::array();
            for (const auto& b : g.blocks) blocks.push_back({{"type", b.type}, {"begin", b.begin}, {"size", b.size}});
            groups.push_back({{"node", net.node_id(c)}, {"order", g.order()}, {"blocks", blocks}});
        }
        auto dag = ccn::transitive_components(net);
        json maximal = json::array();
        for (auto k : dag.maximal) maximal.push_back(ccn::io::ids(net, dag.components[k]));
        emit(o, {{"input_classes", partition_json(net, ccn::input_classes(net))},
                 {"state_classes", partition_json(net, ccn::state_equivalence(net))},
                 {"vertex_groups", groups},
                 {"transitive_components", partition_json(net, dag.components)},
                 {"maximal_components", maximal},
                 {"transitive", ccn::is_transitive(net)}});
        return 0;
    }
    if (cmd == "balanced" || cmd == "refine") {
        auto net = load_network(o.net);
        if (o.col.empty()) throw std::runtime_error("--col is required");
        auto col = load_colouring(net, o.col);
        ccn::check_colouring(net, col);
        json j{{"colouring", ccn::io::colouring_to_json(net, col)}, {"balanced", ccn::is_balanced(net, col)}};
        json pairs = json::array();
        for (auto [c, d] : ccn::unbalanced_pairs(net, col)) pairs.push_back({net.node_id(c), net.node_id(d)});
        j["unbalanced_pairs"] = pairs;
        if (cmd == "refine") {
            j["refinement"] = ccn::io::colouring_to_json(net, ccn::coarsest_balanced_refinement(net, col));
        }
        emit(o, j);
        return 0;
    }
    if (cmd == "enumerate") {
        auto net = load_network(o.net);
        json a = json::array();
        for (const auto& c : ccn::enumerate_balanced(net)) a.push_back(ccn::io::colouring_to_json(net, c));
        emit(o, {{"count", a.size()}, {"balanced", a}});
        return 0;
    }
    if (cmd == "qq") {
        auto net = load_network(o.net);
        if (o.col.empty()) throw std::runtime_error("--col is required");
        auto col = load_colouring(net, o.col);
        ccn::check_colouring(net, col);
        auto qq = o.reps.empty() ? ccn::quasi_quotient(net, col) : ccn::quasi_quotient(net, col, parse_reps(net, o.reps));
        auto search = ccn::good_transversals(net, col);
        json good = json::array();
        for (const auto& g : search.good) good.push_back(ccn::io::ids(net, g));
        emit(o, {{"reps", ccn::io::ids(net, qq.reps)},
                 {"quotient", ccn::io::network_to_json(qq.net)},
                 {"good_transversals", good},
                 {"transversals_examined", search.examined},
                 {"truncated", search.truncated}});
        return 0;
    }
    if (cmd == "odeequiv") {
        auto a = load_network(o.net);
        auto b = load_network(o.net2);
        emit(o, {{"linearly_equivalent", ccn::linearly_equivalent(a, b)}, {"ode_equivalent", ccn::ode_equivalent(a, b)}});
        return 0;
    }
    if (cmd == "classify2") {
        auto net = load_network(o.net);
        auto c = ccn::classify_2node(net);
        emit(o, {{"class", c.cls}, {"p", c.p}, {"q", c.q}, {"swapped", c.swapped}, {"description", c.description}});
        return 0;
    }
    if (cmd == "simulate") {
        auto ls = load_system(o);
        ccn::IntegratorOptions io;
        io.h = o.h;
        auto tr = ccn::integrate(ccn::as_field(ls.system), ls.initial, o.t_end, io);
        if (!o.csv.empty()) ccn::write_csv(tr, o.csv);
        emit(o, {{"t_end", tr.t.back()}, {"steps", tr.steps}, {"final", tr.x.back()},
                 {"max_local_error", tr.max_local_error}});
        return 0;
    }
    if (cmd == "orbit" || cmd == "floquet") {
        auto ls = load_system(o);
        auto f = ccn::as_field(ls.system);
        auto orbit = solve_orbit(o, ls);
        auto samples = ccn::OrbitSamples::sample(f, orbit, o.h, o.samples);
        if (!o.csv.empty()) write_samples_csv(samples, o.csv);
        json j = ccn::io::orbit_to_json(orbit);
        j["closure_error"] = samples.closure_error();
        if (cmd == "floquet") {
            ccn::floquet(f, orbit, o.h);
            j = ccn::io::orbit_to_json(orbit);
            auto hr = ccn::classify_multipliers(orbit.multipliers, o.tol_triv, o.tol_hyp);
            auto lay = ccn::node_layout(ls.system);
            auto amps = ccn::node_amplitudes(lay, samples.states());
            hr.structural_warning = ccn::structural_degeneracy(ls.system.network(), amps, o.tol_steady);
            if (hr.structural_warning) {
                hr.notes.push_back("several maximal transitive components oscillate; extra unit multipliers are "
                                   "forced by the network, not by the field");
            }
            j["hyperbolicity"] = ccn::to_json(hr);
        }
        emit(o, j);
        return 0;
    }
    if (cmd == "probe" || cmd == "phase-probe") {
        auto ls = load_system(o);
        auto cfg = probe_config(o, ls);
        const auto& net = ls.system.network();
        ccn::Network det = cmd == "probe" ? net : ccn::double_network(net);
        if (!o.col.empty()) cfg.colouring = load_colouring(det, o.col);
        if (!o.reps.empty()) cfg.reps = parse_reps(det, o.reps);
        auto r = cmd == "probe" ? ccn::rigidity_probe(cfg) : ccn::phase_probe(cfg, o.theta);
        emit(o, ccn::to_json(r));
        if (r.aborted) std::cerr << "probe aborted: " << r.abort_reason << '\n';
        return r.conjecture_candidate ? 2 : 0;
    }
    if (cmd == "fullosc") {
        auto ls = load_system(o);
        auto r = ccn::full_oscillation_probe(probe_config(o, ls));
        emit(o, ccn::to_json(r));
        return r.conjecture_candidate ? 2 : 0;
    }
    if (cmd == "hk") {
        auto ls = load_system(o);
        const auto& net = ls.system.network();
        auto col = o.col.empty() ? ccn::Colouring::discrete(net.size()) : load_colouring(net, o.col);
        auto f = ccn::as_field(ls.system);
        auto orbit = solve_orbit(o, ls);
        auto samples = ccn::OrbitSamples::sample(f, orbit, o.h, o.samples);
        auto lay = ccn::node_layout(ls.system);
        auto phases = ccn::phase_pattern(samples, lay, col.min_representatives(), o.tol_phase, o.tol_steady);
        emit(o, ccn::to_json(ccn::hk_report(net, col, phases)));
        return 0;
    }
    if (cmd == "case3ring") {
        ccn::ProbeConfig base;
        if (!o.eps.empty()) base.eps = parse_doubles(o.eps);
        base.ensemble = o.ensemble;
        base.seed = o.seed;
        base.sync.rel = o.tol_sync;
        base.sync.steady = o.tol_steady;
        base.orbit.h = o.h;
        base.samples = o.samples;
        base.workers = o.workers;
        auto cases = ccn::case_study_3ring(base);
        auto control = ccn::control_study(base);
        json j = json::array();
        bool candidate = control.conjecture_candidate;
        for (const auto& r : cases) {
            j.push_back(ccn::to_json(r));
            candidate = candidate || r.conjecture_candidate;
        }
        j.push_back(ccn::to_json(control));
        emit(o, {{"cases", j}});
        for (const auto& r : cases) std::cerr << r.name << ": " << ccn::to_string(r.classification) << '\n';
        std::cerr << control.name << ": " << ccn::to_string(control.classification) << '\n';
        return candidate ? 2 : 0;
    }
    throw std::runtime_error("unknown subcommand " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled cell network analysis and rigidity probes"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::pair<std::string, std::string>> cmds{
        {"validate", "check state dimensions and report redundancy warnings"},
        {"classes", "input classes, state classes, components, automorphisms"},
        {"balanced", "test whether a colouring is balanced"},
        {"refine", "coarsest balanced refinement of a colouring"},
        {"enumerate", "all balanced colourings"},
        {"qq", "quasi-quotient for a colouring and representatives"},
        {"odeequiv", "ODE-equivalence of two networks"},
        {"classify2", "ODE class of a two-node network"},
        {"simulate", "integrate a system"},
        {"orbit", "find a periodic orbit"},
        {"floquet", "periodic orbit with multipliers and hyperbolicity"},
        {"probe", "rigidity probe of a synchrony pattern"},
        {"phase-probe", "rigidity probe of a phase pattern"},
        {"fullosc", "full-oscillation probe"},
        {"hk", "phase shifts against the quotient symmetry group"},
        {"case3ring", "three-ring case study with its balanced control"},
    };
    const std::string net_help = "network JSON file, or builtin:NAME";
    for (const auto& [name, help] : cmds) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--net", o.net, net_help);
        sub->add_option("--net2", o.net2, "second network (odeequiv)");
        sub->add_option("--sys", o.sys, "system JSON file, or builtin:NAME");
        sub->add_option("--col", o.col, "colouring '1,2|3' or JSON file");
        sub->add_option("--reps", o.reps, "representative node ids, comma separated");
        sub->add_option("--dims", o.dims, "node dimensions per type, 'A=2,B=1'");
        sub->add_option("--eps", o.eps, "decreasing eps schedule, comma separated");
        sub->add_option("--ensemble", o.ensemble, "ensemble size");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--tol-sync", o.tol_sync, "relative synchrony tolerance");
        sub->add_option("--tol-steady", o.tol_steady, "absolute steady-node tolerance");
        sub->add_option("--tol-triv", o.tol_triv, "trivial multiplier tolerance");
        sub->add_option("--tol-hyp", o.tol_hyp, "hyperbolicity margin");
        sub->add_option("--tol-phase", o.tol_phase, "phase residual tolerance");
        sub->add_option("--step", o.h, "integrator step");
        sub->add_option("--t-end", o.t_end, "simulation length");
        sub->add_option("--theta", o.theta, "phase shift as a fraction of the period");
        sub->add_option("--period", o.period, "period guess override");
        sub->add_option("--samples", o.samples, "orbit grid size");
        sub->add_option("--workers", o.workers, "worker threads (0 = all cores)");
        sub->add_option("--out", o.out, "write the JSON report here");
        sub->add_option("--csv", o.csv, "write a time series here");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    try {
        return run(app.get_subcommands().front()->get_name(), o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
