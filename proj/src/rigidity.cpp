#include "ccn/rigidity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "ccn/bump.hpp"
#include "ccn/library.hpp"
#include "ccn/quotient.hpp"

namespace ccn {

void ProbeConfig::check() const {
    if (eps.empty()) throw std::runtime_error("empty eps schedule");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw std::runtime_error("eps values must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw std::runtime_error("eps values must be strictly decreasing");
    }
    if (ensemble == 0) throw std::runtime_error("ensemble must have at least one member");
    if (samples < 64) throw std::runtime_error("at least 64 orbit samples are needed");
    if (!(delta_max > 0.0) || !(delta_floor > 0.0)) throw std::runtime_error("bump radii must be positive");
    if (!(sync.rel > 0.0) || !(sync.steady > 0.0)) throw std::runtime_error("sync tolerances must be positive");
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::PatternBalancedPersists: return "pattern-balanced-persists";
        case Classification::PatternBroken: return "pattern-broken";
        case Classification::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string to_string(ConflictCase c) {
    switch (c) {
        case ConflictCase::NotInputEquivalent: return "a";
        case ConflictCase::OtherRepresentative: return "b";
        case ConflictCase::OwnRepresentative: return "c";
    }
    return "?";
}

namespace {

/// Runs fn(0..n-1) on a few threads; results are written by index so order
/// does not depend on scheduling.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::mt19937_64 member_rng(std::uint64_t seed, std::size_t member) {
    std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(member), 0x9e3779b9u};
    return std::mt19937_64(s);
}

std::vector<double> random_unit(std::size_t d, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    std::vector<double> w(d);
    double s = 0.0;
    do {
        s = 0.0;
        for (auto& v : w) {
            v = nd(rng);
            s += v * v;
        }
    } while (s < 1e-12);
    s = std::sqrt(s);
    for (auto& v : w) v /= s;
    return w;
}

std::vector<double> tuple_of(const AdmissibleSystem& sys, std::size_t c, const std::vector<double>& x) {
    std::vector<double> y(static_cast<std::size_t>(sys.layout(c).total()));
    sys.gather(c, x.data(), y.data());
    return y;
}

double inf_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<double> unit_normal(const VectorField& f, const std::vector<double>& x) {
    std::vector<double> n(f.dim);
    f(x.data(), n.data());
    double s = 0.0;
    for (double v : n) s += v * v;
    s = std::sqrt(s);
    if (s == 0.0) throw std::runtime_error("orbit point is an equilibrium");
    for (auto& v : n) v /= s;
    return n;
}

/// Smallest non-representative in an unbalanced pair with its representative.
std::optional<Conflict> find_conflict(const Network& net, const Colouring& col, const std::vector<std::size_t>& reps) {
    auto qq = quasi_quotient(net, col, reps);
    std::vector<bool> is_rep(net.size(), false);
    for (auto r : qq.reps) is_rep[r] = true;
    const auto inputs = input_class_labels(net);
    const auto bad = unbalanced_pairs(net, col);
    auto unbalanced_with = [&](std::size_t c, std::size_t r) {
        for (auto [a, b] : bad) {
            if ((a == c && b == r) || (a == r && b == c)) return true;
        }
        return false;
    };
    for (std::size_t c = 0; c < net.size(); ++c) {
        if (is_rep[c]) continue;
        const auto r = qq.reps[qq.bracket[c]];
        if (!unbalanced_with(c, r)) continue;
        Conflict k;
        k.node = c;
        k.representative = r;
        k.bump_class = static_cast<std::size_t>(inputs[c]);
        bool own = inputs[r] == inputs[c];
        bool other = false;
        for (auto s : qq.reps) other = other || (s != r && inputs[s] == inputs[c]);
        k.kind = other ? ConflictCase::OtherRepresentative
                       : (own ? ConflictCase::OwnRepresentative : ConflictCase::NotInputEquivalent);
        return k;
    }
    return std::nullopt;
}

std::vector<std::size_t> choose_reps(const Network& net, const Colouring& col, const ProbeConfig& cfg,
                                     std::vector<std::string>& notes) {
    if (cfg.reps) {
        (void)quasi_quotient(net, col, *cfg.reps);  // validates
        return *cfg.reps;
    }
    auto search = good_transversals(net, col, 4096);
    if (!search.good.empty()) return search.good.front();
    notes.push_back("no transversal gives a quasi-quotient with a single maximal component; using smallest nodes");
    return col.min_representatives();
}

/// Per-class random symmetrised bumps centred on random orbit points.
AdmissibleSystem random_perturbation(const AdmissibleSystem& sys, const OrbitSamples& orbit, std::mt19937_64& rng,
                                     double delta) {
    auto p = zero_system(sys.network(), sys.dims());
    const auto& classes = sys.classes();
    std::uniform_int_distribution<std::size_t> pick_t(0, orbit.size() - 1);
    for (std::size_t k = 0; k < classes.size(); ++k) {
        std::uniform_int_distribution<std::size_t> pick_c(0, classes[k].size() - 1);
        const auto c = classes[k][pick_c(rng)];
        const auto& x = orbit.state(pick_t(rng));
        auto lay = sys.layout(c);
        auto w = random_unit(static_cast<std::size_t>(lay.self_dim), rng);
        auto g = vertex_group(sys.network(), c);
        p = p.with_component(k, std::make_shared<SymmetrisedBumpComponent>(lay, tuple_of(sys, c, x),
                                                                            std::vector<std::vector<double>>{}, w,
                                                                            delta, g));
    }
    return p;
}

struct Perturbation {
    AdmissibleSystem field;  ///< on the detection network
    bool proof_style = false;
    double delta = 0.0;
};

/// Base system together with the view used for detection (itself, or the
/// doubled network with a sheared orbit).
struct View {
    const AdmissibleSystem* base = nullptr;
    AdmissibleSystem det;
    std::optional<double> theta;
    VectorField det_field;

    OrbitSamples lift(const OrbitSamples& s) const { return theta ? s.shear(det_field, *theta) : s; }
    AdmissibleSystem to_base(const AdmissibleSystem& p) const { return theta ? undouble_system(p, *base) : p; }
};

ProbeReport probe_impl(const ProbeConfig& cfg, std::optional<double> theta) {
    cfg.check();
    ProbeReport rep;
    const AdmissibleSystem& G = cfg.system;
    const auto gfield = as_field(G);
    View view;
    view.base = &G;
    view.theta = theta;
    view.det = theta ? double_system(G) : G;
    view.det_field = as_field(view.det);
    const AdmissibleSystem& D = view.det;
    const Network& net = D.network();
    rep.network = net;
    const auto lay = node_layout(D);
    const double h = cfg.orbit.h;

    if (cfg.initial.size() != G.state_dim()) throw std::runtime_error("initial state has the wrong dimension");

    // (1) orbit
    PeriodicOrbit orbit;
    try {
        OrbitOptions oo = cfg.orbit;
        oo.chord_jacobian.reset();
        orbit = find_periodic_orbit(gfield, cfg.initial, cfg.period_guess, oo);
    } catch (const std::exception& e) {
        rep.aborted = true;
        rep.abort_reason = std::string("no orbit: ") + e.what();
        return rep;
    }
    rep.period = orbit.period;
    const auto S = OrbitSamples::sample(gfield, orbit, h, cfg.samples);
    const auto SD = view.lift(S);

    // (2) pattern, representatives and conflict
    const auto amps0 = node_amplitudes(lay, SD.states());
    Colouring pattern = detect_synchrony(lay, SD.states(), cfg.sync, &amps0);
    if (cfg.colouring) {
        check_colouring(net, *cfg.colouring);
        if (*cfg.colouring != pattern) {
            rep.pattern = pattern;
            rep.aborted = true;
            rep.abort_reason = "orbit shows " + format_colouring(net, pattern) + ", not the requested " +
                               format_colouring(net, *cfg.colouring);
            return rep;
        }
    }
    rep.balanced = is_balanced(net, pattern);
    rep.reps = choose_reps(net, pattern, cfg, rep.notes);
    if (!rep.balanced) rep.conflict = find_conflict(net, pattern, rep.reps);
    if (!rep.balanced && !rep.conflict) {
        rep.aborted = true;
        rep.abort_reason = "unbalanced pattern without a conflicting non-representative";
        return rep;
    }

    // generic time: representatives and the bump centre well separated
    auto rep_sep = [&](const std::vector<double>& x) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rep.reps.size(); ++i) {
            for (std::size_t j = i + 1; j < rep.reps.size(); ++j) {
                auto a = rep.reps[i], b = rep.reps[j];
                if (lay.dims[a] != lay.dims[b]) continue;
                bool same_class = false;
                for (const auto& cls : lay.state_classes) {
                    same_class = same_class || (std::find(cls.begin(), cls.end(), a) != cls.end() &&
                                                std::find(cls.begin(), cls.end(), b) != cls.end());
                }
                if (!same_class) continue;
                double s = 0.0;
                for (int q = 0; q < lay.dims[a]; ++q) {
                    double d = x[static_cast<std::size_t>(lay.offsets[a] + q)] - x[static_cast<std::size_t>(lay.offsets[b] + q)];
                    s += d * d;
                }
                double scale = std::max({amps0[a], amps0[b], cfg.sync.steady});
                m = std::min(m, std::sqrt(s) / scale);
            }
        }
        return m;
    };
    std::vector<std::size_t> avoid_nodes;
    VertexGroup group;
    if (rep.conflict) {
        for (auto r : rep.reps) {
            if (static_cast<std::size_t>(D.class_of(r)) == rep.conflict->bump_class) avoid_nodes.push_back(r);
        }
        group = vertex_group(net, rep.conflict->node);
    }
    auto bump_sep = [&](const std::vector<double>& x) {
        double m = std::numeric_limits<double>::infinity();
        if (!rep.conflict) return m;
        const auto lc = D.layout(rep.conflict->node);
        const auto oz = group_orbit(lc, tuple_of(D, rep.conflict->node, x), group);
        for (auto r : avoid_nodes) {
            for (const auto& a : group_orbit(lc, tuple_of(D, r, x), group))
                for (const auto& z : oz) m = std::min(m, euclidean_distance(a, z));
        }
        return m;
    };
    const std::size_t k0 = SD.argmax([&](const std::vector<double>& x) {
        double s = std::min(rep_sep(x), bump_sep(x));
        return std::isfinite(s) ? s : 0.0;
    });
    rep.t0 = SD.time(k0);
    rep.separation = rep_sep(SD.state(k0));
    if (rep.separation <= 10.0 * cfg.sync.rel) {
        rep.aborted = true;
        rep.abort_reason = "representatives are not separated at any sampled time";
        return rep;
    }

    // re-anchor at t0 and check hyperbolicity there
    PeriodicOrbit at0 = orbit;
    at0.anchor = S.state(k0);
    at0.section_point = at0.anchor;
    at0.section_normal = unit_normal(gfield, at0.anchor);
    Eigen::MatrixXd M;
    floquet(gfield, at0, h, cfg.orbit.fd_step, &M);
    rep.multipliers = at0.multipliers;
    rep.hyperbolicity = classify_multipliers(at0.multipliers, cfg.tol_triv, cfg.tol_hyp);
    if (theta) {
        auto doubled = at0.multipliers;
        doubled.insert(doubled.end(), at0.multipliers.begin(), at0.multipliers.end());
        std::stable_sort(doubled.begin(), doubled.end(),
                         [](const auto& a, const auto& b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
        auto q = classify_multipliers(doubled, cfg.tol_triv, cfg.tol_hyp);
        if (!q.quasi_hyperbolic) {
            rep.aborted = true;
            rep.abort_reason = "sheared orbit is not quasi-hyperbolic on the doubled network";
            return rep;
        }
    }
    if (rep.hyperbolicity.verdict == Verdict::NonHyperbolic) {
        rep.aborted = true;
        rep.abort_reason = "orbit not hyperbolic";
        return rep;
    }
    if (rep.hyperbolicity.verdict == Verdict::Borderline) rep.notes.push_back("orbit is only borderline hyperbolic");
    const auto X = OrbitSamples::sample(gfield, at0, h, cfg.samples);
    rep.closure_error = X.closure_error();
    const auto XD = view.lift(X);
    std::vector<double> fx0(G.state_dim());
    gfield(at0.anchor.data(), fx0.data());
    const Eigen::MatrixXd J0 = shooting_jacobian(M, fx0, at0.section_normal);

    // local pattern on J
    const double half = orbit.period / 32.0;
    const auto ampsX = node_amplitudes(lay, XD.states());
    const auto W = XD.window(0.0, half);
    rep.pattern = detect_synchrony(lay, W, cfg.sync, &ampsX);
    rep.pattern_at_t0 = detect_synchrony(lay, {XD.state(0)}, cfg.sync, &ampsX);
    if (rep.pattern != pattern) {
        rep.notes.push_back("pattern on J " + format_colouring(net, rep.pattern) + " differs from the global pattern " +
                            format_colouring(net, pattern));
        rep.balanced = is_balanced(net, rep.pattern);
        rep.reps = rep.pattern.min_representatives();
        rep.conflict.reset();
        if (!rep.balanced) rep.conflict = find_conflict(net, rep.pattern, rep.reps);
        if (!rep.balanced && !rep.conflict) {
            rep.aborted = true;
            rep.abort_reason = "unbalanced local pattern without a conflicting non-representative";
            return rep;
        }
        avoid_nodes.clear();
        if (rep.conflict) {
            for (auto r : rep.reps)
                if (static_cast<std::size_t>(D.class_of(r)) == rep.conflict->bump_class) avoid_nodes.push_back(r);
            group = vertex_group(net, rep.conflict->node);
        }
    }
    const auto qq = quasi_quotient(net, rep.pattern, rep.reps);

    // (5) proof-style perturbation data at t0
    const auto& x0D = XD.state(0);
    std::vector<double> z;
    std::vector<std::vector<double>> avoid;
    ComponentLayout bump_layout;
    double delta = cfg.delta_max;
    if (rep.conflict) {
        const auto c = rep.conflict->node;
        bump_layout = D.layout(c);
        z = tuple_of(D, c, x0D);
        for (auto r : avoid_nodes) avoid.push_back(tuple_of(D, r, x0D));
        double d = std::numeric_limits<double>::infinity();
        const auto oz = group_orbit(bump_layout, z, group);
        for (const auto& a : avoid)
            for (const auto& oa : group_orbit(bump_layout, a, group))
                for (const auto& b : oz) d = std::min(d, euclidean_distance(oa, b));
        if (std::isfinite(d)) delta = std::min(delta, 0.5 * d);
        if (delta < cfg.delta_floor) {
            rep.aborted = true;
            rep.abort_reason = "no valid bump radius: orbits at t0 closer than the resolution";
            return rep;
        }
    }

    std::vector<Perturbation> members(cfg.ensemble);
    for (std::size_t m = 0; m < cfg.ensemble; ++m) {
        auto rng = member_rng(cfg.seed, m);
        Perturbation& P = members[m];
        const bool proof = rep.conflict && (m == 0 || m % 2 == 1);
        if (proof) {
            std::vector<double> w;
            if (m == 0) {
                w.assign(static_cast<std::size_t>(bump_layout.self_dim),
                         1.0 / std::sqrt(static_cast<double>(bump_layout.self_dim)));
            } else {
                w = random_unit(static_cast<std::size_t>(bump_layout.self_dim), rng);
            }
            auto b = std::make_shared<SymmetrisedBumpComponent>(bump_layout, z, avoid, w, delta, group);
            P.field = zero_system(net, D.dims()).with_component(rep.conflict->bump_class, b);
            P.proof_style = true;
            P.delta = b->delta();
            if (m == 0) {
                rep.bump_delta = b->delta();
                std::mt19937_64 chk(cfg.seed ^ 0x5bd1e995u);
                rep.invariance_defect = invariance_defect(*b, group, chk, 32, 2.0, true);
                std::vector<double> out(static_cast<std::size_t>(bump_layout.self_dim));
                for (const auto& a : avoid) {
                    for (const auto& oa : group_orbit(bump_layout, a, group)) {
                        b->eval(oa.data(), out.data());
                        for (double v : out) rep.avoid_value = std::max(rep.avoid_value, std::abs(v));
                    }
                }
            }
        } else {
            P.field = random_perturbation(D, XD, rng, cfg.delta_max);
            P.delta = cfg.delta_max;
        }
    }
    if (rep.invariance_defect > 1e-12) {
        rep.aborted = true;
        rep.abort_reason = "perturbation failed the admissibility check";
        return rep;
    }
    if (rep.avoid_value != 0.0) {
        rep.aborted = true;
        rep.abort_reason = "perturbation does not vanish on the representative tuples";
        return rep;
    }

    // (6) ensemble at every eps
    rep.outcomes.resize(cfg.eps.size());
    for (std::size_t e = 0; e < cfg.eps.size(); ++e) {
        rep.outcomes[e].eps = cfg.eps[e];
        rep.outcomes[e].members.resize(cfg.ensemble);
    }
    parallel_for(cfg.eps.size() * cfg.ensemble, cfg.workers, [&](std::size_t task) {
        const std::size_t e = task / cfg.ensemble, m = task % cfg.ensemble;
        const double eps = cfg.eps[e];
        MemberOutcome& out = rep.outcomes[e].members[m];
        out.member = m;
        out.proof_style = members[m].proof_style;
        out.bump_delta = members[m].delta;
        try {
            const auto pG = view.to_base(members[m].field);
            const auto g = perturbed(G, pG, eps);
            const auto gf = as_field(g);
            OrbitOptions oo = cfg.orbit;
            oo.section_point = at0.anchor;
            oo.section_normal = at0.section_normal;
            oo.chord_jacobian = J0;
            auto po = find_periodic_orbit(gf, at0.anchor, at0.period, oo);
            auto Y = OrbitSamples::sample(gf, po, h, cfg.samples);
            auto YD = view.lift(Y);
            auto ampsY = node_amplitudes(lay, YD.states());
            auto WY = YD.window(0.0, po.period / 32.0);
            out.colouring = detect_synchrony(lay, WY, cfg.sync, &ampsY);
            out.order = compare(out.colouring, rep.pattern);
            out.gap = synchrony_gap(lay, WY, rep.pattern, ampsY, cfg.sync);
            out.residual = constraint_residual(perturbed(D, members[m].field, eps), qq, {YD.state(0)}).max;
            out.displacement = inf_dist(po.anchor, at0.anchor);
            out.period = po.period;
            out.found = true;
        } catch (const std::exception& ex) {
            out.found = false;
            out.error = ex.what();
        }
    });

    // (7) verdict
    bool all_kept = true;
    for (auto& o : rep.outcomes) {
        o.kept = true;
        for (const auto& m : o.members) {
            if (m.found && m.order == LatticeOrder::Finer) o.broken = true;
            if (!m.found || m.order != LatticeOrder::Equal) o.kept = false;
            if (m.found) o.max_gap = std::max(o.max_gap, m.gap);
        }
        if (!o.members.empty() && o.members[0].found) o.proof_displacement = o.members[0].displacement;
        all_kept = all_kept && o.kept;
    }
    const std::size_t ne = rep.outcomes.size();
    bool broken_small = rep.outcomes[ne - 1].broken && (ne < 2 || rep.outcomes[ne - 2].broken);
    if (broken_small) {
        rep.classification = Classification::PatternBroken;
        if (rep.balanced) rep.notes.push_back("balanced pattern broke: flow invariance violated numerically");
    } else if (all_kept && rep.balanced) {
        rep.classification = Classification::PatternBalancedPersists;
    } else {
        rep.classification = Classification::Inconclusive;
        if (all_kept && !rep.balanced) {
            rep.conjecture_candidate = true;
            rep.notes.push_back("unbalanced pattern persisted under every member at every eps");
        }
    }
    return rep;
}

}  // namespace

ProbeReport rigidity_probe(const ProbeConfig& cfg) { return probe_impl(cfg, std::nullopt); }

ProbeReport phase_probe(const ProbeConfig& cfg, double theta) {
    if (!(theta >= 0.0 && theta < 1.0)) throw std::runtime_error("theta must lie in [0, 1)");
    return probe_impl(cfg, theta);
}

std::vector<ProbeReport> case_study_3ring(const ProbeConfig& base) {
    const char* cases = "ABCD";
    const char* cols[] = {"1,2,3", "1,2|3", "1,3|2", "2,3|1"};
    std::vector<ProbeReport> out;
    for (int i = 0; i < 4; ++i) {
        std::string name = std::string("ring-") + cases[i];
        try {
            auto ex = library::ring_case(cases[i]);
            ProbeConfig cfg = base;
            cfg.system = ex.system;
            cfg.initial = ex.initial;
            cfg.period_guess = ex.period_guess;
            cfg.colouring = io::parse_colouring(ex.system.network(), cols[i]);
            cfg.reps.reset();
            auto r = rigidity_probe(cfg);
            r.name = name;
            out.push_back(std::move(r));
        } catch (const std::exception& e) {
            ProbeReport r;
            r.name = name;
            r.aborted = true;
            r.abort_reason = e.what();
            out.push_back(std::move(r));
        }
    }
    return out;
}

ProbeReport control_study(const ProbeConfig& base) {
    auto ex = library::control_pair();
    ProbeConfig cfg = base;
    cfg.system = ex.system;
    cfg.initial = ex.initial;
    cfg.period_guess = ex.period_guess;
    cfg.colouring = io::parse_colouring(ex.system.network(), "1,3|2,4");
    cfg.reps.reset();
    auto r = rigidity_probe(cfg);
    r.name = "control";
    return r;
}

FullOscillationReport full_oscillation_probe(const ProbeConfig& cfg) {
    cfg.check();
    FullOscillationReport rep;
    const auto& G = cfg.system;
    const auto& net = G.network();
    rep.network = net;
    rep.transitive = is_transitive(net);
    const auto gf = as_field(G);
    const auto lay = node_layout(G);
    const double h = cfg.orbit.h;
    PeriodicOrbit orbit;
    try {
        OrbitOptions oo = cfg.orbit;
        oo.chord_jacobian.reset();
        orbit = find_periodic_orbit(gf, cfg.initial, cfg.period_guess, oo);
    } catch (const std::exception& e) {
        rep.aborted = true;
        rep.abort_reason = std::string("no orbit: ") + e.what();
        return rep;
    }
    rep.period = orbit.period;
    orbit.section_point = orbit.anchor;
    orbit.section_normal = unit_normal(gf, orbit.anchor);
    Eigen::MatrixXd M;
    floquet(gf, orbit, h, cfg.orbit.fd_step, &M);
    std::vector<double> fx(G.state_dim());
    gf(orbit.anchor.data(), fx.data());
    const Eigen::MatrixXd J0 = shooting_jacobian(M, fx, orbit.section_normal);
    const auto S = OrbitSamples::sample(gf, orbit, h, cfg.samples);
    rep.steady = detect_steady_nodes(lay, S.states(), cfg.tol_steady);

    std::vector<AdmissibleSystem> members;
    for (std::size_t m = 0; m < cfg.ensemble; ++m) {
        auto rng = member_rng(cfg.seed, m);
        members.push_back(random_perturbation(G, S, rng, cfg.delta_max));
    }
    const std::size_t tasks = cfg.eps.size() * cfg.ensemble;
    std::vector<std::optional<std::vector<std::size_t>>> steady(tasks);
    std::vector<std::string> errors(tasks);
    parallel_for(tasks, cfg.workers, [&](std::size_t t) {
        const std::size_t e = t / cfg.ensemble, m = t % cfg.ensemble;
        try {
            auto g = perturbed(G, members[m], cfg.eps[e]);
            auto f = as_field(g);
            OrbitOptions oo = cfg.orbit;
            oo.section_point = orbit.anchor;
            oo.section_normal = orbit.section_normal;
            oo.chord_jacobian = J0;
            auto po = find_periodic_orbit(f, orbit.anchor, orbit.period, oo);
            auto Y = OrbitSamples::sample(f, po, h, cfg.samples);
            steady[t] = detect_steady_nodes(lay, Y.states(), cfg.tol_steady);
        } catch (const std::exception& ex) {
            errors[t] = ex.what();
        }
    });
    std::vector<bool> in(net.size(), true);
    for (std::size_t t = 0; t < tasks; ++t) {
        if (!steady[t]) {
            ++rep.members_failed;
            continue;
        }
        ++rep.members_run;
        std::vector<bool> s(net.size(), false);
        for (auto c : *steady[t]) s[c] = true;
        for (std::size_t c = 0; c < net.size(); ++c) in[c] = in[c] && s[c];
    }
    if (rep.members_failed > 0) {
        rep.notes.push_back(std::to_string(rep.members_failed) + " ensemble members failed to converge; first error: " +
                            *std::find_if(errors.begin(), errors.end(), [](const std::string& s) { return !s.empty(); }));
    }
    if (rep.members_run == 0) {
        rep.aborted = true;
        rep.abort_reason = "no ensemble member converged";
        return rep;
    }
    for (std::size_t c = 0; c < net.size(); ++c)
        if (in[c]) rep.rigidly_steady.push_back(c);
    rep.closure = upstream_closure(net, rep.rigidly_steady);
    rep.closed_upstream = rep.closure == rep.rigidly_steady;
    if (!rep.closed_upstream) rep.notes.push_back("rigidly steady set is not closed upstream");
    rep.conjecture_candidate = rep.transitive && !rep.rigidly_steady.empty();
    return rep;
}

std::vector<PhaseEntry> phase_pattern(const OrbitSamples& orbit, const NodeLayout& lay,
                                      const std::vector<std::size_t>& nodes, double tol, double steady_tol) {
    std::vector<PhaseEntry> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i; j < nodes.size(); ++j) {
            auto ps = detect_phase(orbit, lay, nodes[i], nodes[j], tol, steady_tol);
            if (ps.thetas.empty() && !ps.full_circle) continue;
            PhaseEntry e{nodes[i], nodes[j], ps.thetas};
            out.push_back(std::move(e));
        }
    }
    return out;
}

HKReport hk_report(const Network& net, const Colouring& col, const std::vector<PhaseEntry>& phases, double tol,
                   std::size_t cap) {
    check_colouring(net, col);
    if (!is_balanced(net, col)) throw std::runtime_error("hk report needs a balanced colouring");
    HKReport rep;
    rep.colouring = col;
    rep.network = net;
    auto qq = quasi_quotient(net, col);
    rep.reps = qq.reps;
    rep.quotient = qq.net;
    rep.phases = phases;
    auto autos = automorphisms(qq.net, cap);
    rep.group_order = autos.size();
    const std::size_t n = qq.net.size();
    for (const auto& g : autos) {
        std::size_t order = 1;
        Permutation p = g;
        Permutation id(n);
        for (std::size_t i = 0; i < n; ++i) id[i] = i;
        while (p != id) {
            Permutation q(n);
            for (std::size_t i = 0; i < n; ++i) q[i] = g[p[i]];
            p = std::move(q);
            ++order;
        }
        if (order == rep.group_order) {
            rep.cyclic = true;
            rep.generator = g;
            break;
        }
    }
    const double k = static_cast<double>(rep.group_order);
    rep.consistent = true;
    for (const auto& e : phases) {
        for (double th : e.thetas) {
            double m = th * k;
            if (std::abs(m - std::round(m)) > tol * k) {
                rep.consistent = false;
                rep.mismatches.push_back("theta(" + std::to_string(net.node_id(e.c)) + "," +
                                         std::to_string(net.node_id(e.d)) + ") = " + std::to_string(th) +
                                         " is not a multiple of 1/" + std::to_string(rep.group_order));
            }
        }
    }
    if (!rep.cyclic) rep.consistent = false;
    return rep;
}

namespace {

io::json multipliers_json(const std::vector<std::complex<double>>& mu) {
    io::json a = io::json::array();
    for (const auto& m : mu) a.push_back({m.real(), m.imag()});
    return a;
}

}  // namespace

io::json to_json(const HyperbolicityReport& r) {
    return {{"verdict", to_string(r.verdict)},     {"trivial_distance", r.trivial_distance},
            {"min_gap", r.min_gap},                {"near_one", r.near_one},
            {"quasi_hyperbolic", r.quasi_hyperbolic}, {"structural_warning", r.structural_warning},
            {"notes", r.notes}};
}

io::json to_json(const ProbeReport& r) {
    const auto& net = r.network;
    io::json j;
    j["name"] = r.name;
    j["aborted"] = r.aborted;
    if (r.aborted) j["abort_reason"] = r.abort_reason;
    j["orbit"] = {{"period", r.period},
                  {"multipliers", multipliers_json(r.multipliers)},
                  {"closure_error", r.closure_error},
                  {"hyperbolicity", to_json(r.hyperbolicity)}};
    j["t0"] = r.t0;
    j["separation"] = r.separation;
    if (r.pattern.size() == net.size() && net.size() > 0) {
        j["pattern"] = io::colouring_to_json(net, r.pattern);
        if (r.pattern_at_t0.size() == net.size()) j["pattern_at_t0"] = io::colouring_to_json(net, r.pattern_at_t0);
    }
    j["balanced"] = r.balanced;
    j["reps"] = io::ids(net, r.reps);
    if (r.conflict) {
        j["conflict"] = {{"node", net.node_id(r.conflict->node)},
                         {"representative", net.node_id(r.conflict->representative)},
                         {"case", to_string(r.conflict->kind)},
                         {"bump_class", r.conflict->bump_class}};
    }
    j["bump_delta"] = r.bump_delta;
    j["invariance_defect"] = r.invariance_defect;
    j["avoid_value"] = r.avoid_value;
    j["outcomes"] = io::json::array();
    for (const auto& o : r.outcomes) {
        io::json oj{{"eps", o.eps},
                    {"broken", o.broken},
                    {"kept", o.kept},
                    {"max_gap", o.max_gap},
                    {"proof_displacement", o.proof_displacement}};
        oj["members"] = io::json::array();
        for (const auto& m : o.members) {
            io::json mj{{"member", m.member}, {"proof_style", m.proof_style}, {"found", m.found}};
            if (m.found) {
                mj["colouring"] = io::colouring_to_json(net, m.colouring);
                mj["order"] = to_string(m.order);
                mj["gap"] = m.gap;
                mj["residual"] = m.residual;
                mj["displacement"] = m.displacement;
                mj["period"] = m.period;
                mj["bump_delta"] = m.bump_delta;
            } else {
                mj["error"] = m.error;
            }
            oj["members"].push_back(std::move(mj));
        }
        j["outcomes"].push_back(std::move(oj));
    }
    j["classification"] = to_string(r.classification);
    j["conjecture_candidate"] = r.conjecture_candidate;
    j["notes"] = r.notes;
    return j;
}

io::json to_json(const FullOscillationReport& r) {
    const auto& net = r.network;
    io::json j{{"aborted", r.aborted}, {"period", r.period}, {"transitive", r.transitive},
               {"closed_upstream", r.closed_upstream}, {"conjecture_candidate", r.conjecture_candidate},
               {"members_run", r.members_run}, {"members_failed", r.members_failed}, {"notes", r.notes}};
    if (r.aborted) j["abort_reason"] = r.abort_reason;
    j["steady"] = io::ids(net, r.steady);
    j["rigidly_steady"] = io::ids(net, r.rigidly_steady);
    j["upstream_closure"] = io::ids(net, r.closure);
    return j;
}

io::json to_json(const HKReport& r) {
    io::json j;
    j["colouring"] = io::colouring_to_json(r.network, r.colouring);
    j["quotient"] = io::network_to_json(r.quotient);
    j["group_order"] = r.group_order;
    j["cyclic"] = r.cyclic;
    if (r.generator) {
        io::json g = io::json::array();
        for (auto v : *r.generator) g.push_back(r.quotient.node_id(v));
        j["generator"] = g;
    }
    j["consistent"] = r.consistent;
    j["mismatches"] = r.mismatches;
    j["phases"] = io::json::array();
    for (const auto& e : r.phases) j["phases"].push_back({{"c", r.network.node_id(e.c)}, {"d", r.network.node_id(e.d)}, {"thetas", e.thetas}});
    return j;
}

}  // namespace ccn
