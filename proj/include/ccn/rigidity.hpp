#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccn/admissible.hpp"
#include "ccn/colouring.hpp"
#include "ccn/io.hpp"
#include "ccn/orbit.hpp"
#include "ccn/patterns.hpp"

namespace ccn {

/// Everything a probe needs. eps must be positive and strictly decreasing.
struct ProbeConfig {
    AdmissibleSystem system;
    std::vector<double> initial;
    double period_guess = 6.283185307179586;
    std::optional<Colouring> colouring;             ///< expected pattern; detected when absent
    std::optional<std::vector<std::size_t>> reps;   ///< node indices, one per colour
    std::vector<double> eps{1e-2, 1e-3, 1e-4};
    std::size_t ensemble = 16;
    std::uint64_t seed = 1;
    SyncTolerance sync{};
    double tol_triv = 1e-5;
    double tol_hyp = 1e-3;
    double tol_steady = 1e-8;
    OrbitOptions orbit{};
    std::size_t samples = 1024;
    double delta_max = 0.25;
    double delta_floor = 1e-6;
    unsigned workers = 0;  ///< 0: one per hardware thread

    /// Throws on an empty or non-decreasing schedule and other bad values.
    void check() const;
};

enum class Classification { PatternBalancedPersists, PatternBroken, Inconclusive };

[[nodiscard]] std::string to_string(Classification c);

/// Which proof case the conflicting node falls into.
enum class ConflictCase {
    NotInputEquivalent,  ///< (a) input equivalent to no representative
    OtherRepresentative, ///< (b) input equivalent to a representative of another colour
    OwnRepresentative,   ///< (c) input equivalent to its own representative
};

[[nodiscard]] std::string to_string(ConflictCase c);

struct Conflict {
    std::size_t node = 0;            ///< non-representative c
    std::size_t representative = 0;  ///< representative of c's colour
    ConflictCase kind = ConflictCase::NotInputEquivalent;
    std::size_t bump_class = 0;      ///< input class carrying the bump
};

/// One ensemble member at one eps.
struct MemberOutcome {
    std::size_t member = 0;
    bool proof_style = false;
    bool found = false;
    std::string error;
    Colouring colouring;        ///< detected on J for the perturbed orbit
    LatticeOrder order = LatticeOrder::Incomparable;  ///< relative to the unperturbed pattern
    double gap = 0.0;           ///< max normalised sup distance over pattern pairs on J
    double residual = 0.0;      ///< constraint residual at t0
    double displacement = 0.0;  ///< |x_eps(t0) - x(t0)|_inf on the fixed section
    double period = 0.0;
    double bump_delta = 0.0;
};

struct EpsOutcome {
    double eps = 0.0;
    std::vector<MemberOutcome> members;
    bool broken = false;  ///< some member gives a strictly finer pattern
    bool kept = false;    ///< every member found and kept the pattern
    double max_gap = 0.0;
    double proof_displacement = 0.0;  ///< member 0
};

struct ProbeReport {
    std::string name;
    bool aborted = false;
    std::string abort_reason;

    // orbit summary
    double period = 0.0;
    std::vector<std::complex<double>> multipliers;
    HyperbolicityReport hyperbolicity;
    double closure_error = 0.0;

    double t0 = 0.0;
    double separation = 0.0;           ///< min normalised rep separation at t0
    Colouring pattern_at_t0;           ///< pointwise colouring of x(t0)
    Colouring pattern;                 ///< detected on J = [t0 - T/32, t0 + T/32]
    bool balanced = false;
    std::vector<std::size_t> reps;
    std::optional<Conflict> conflict;
    double bump_delta = 0.0;
    double invariance_defect = 0.0;    ///< of the proof-style perturbation
    double avoid_value = 0.0;          ///< max |p| on the avoided tuples (should be exactly 0)

    std::vector<EpsOutcome> outcomes;
    Classification classification = Classification::Inconclusive;
    /// An unbalanced pattern survived every member at every eps.
    bool conjecture_candidate = false;
    std::vector<std::string> notes;

    /// Network the patterns refer to (G, or 2G for phase probes).
    Network network;
};

/// Orbit, pattern, conflict, proof-style perturbation, ensemble, verdict.
[[nodiscard]] ProbeReport rigidity_probe(const ProbeConfig& cfg);

/// The four colourings of the mixed 3-ring, each with a built-in engineered
/// system. eps and ensemble come from base (system fields ignored).
[[nodiscard]] std::vector<ProbeReport> case_study_3ring(const ProbeConfig& base = {});

/// Balanced control {{1,3},{2,4}} on the four-node network.
[[nodiscard]] ProbeReport control_study(const ProbeConfig& base = {});

/// Phase probe on the doubled network with the orbit sheared by theta
/// (fraction of the period). cfg.colouring/reps refer to 2G when given.
[[nodiscard]] ProbeReport phase_probe(const ProbeConfig& cfg, double theta);

struct FullOscillationReport {
    bool aborted = false;
    std::string abort_reason;
    double period = 0.0;
    std::vector<std::size_t> steady;          ///< unperturbed
    std::vector<std::size_t> rigidly_steady;  ///< steady under every successful member
    std::vector<std::size_t> closure;         ///< upstream closure of rigidly_steady
    bool closed_upstream = false;
    bool transitive = false;
    bool conjecture_candidate = false;
    std::size_t members_run = 0;
    std::size_t members_failed = 0;
    std::vector<std::string> notes;
    Network network;
};

[[nodiscard]] FullOscillationReport full_oscillation_probe(const ProbeConfig& cfg);

/// Phase shifts theta(c,d) for nodes of the quotient, as detected.
struct PhaseEntry {
    std::size_t c = 0, d = 0;  ///< node indices in G
    std::vector<double> thetas;
};

struct HKReport {
    Colouring colouring;
    std::vector<std::size_t> reps;
    std::size_t group_order = 0;
    bool cyclic = false;
    std::optional<Permutation> generator;  ///< on quotient nodes, when cyclic
    bool consistent = false;               ///< every theta is m/k within tol
    std::vector<std::string> mismatches;
    std::vector<PhaseEntry> phases;
    Network quotient;
    Network network;
};

/// Requires a balanced colouring. Throws when the quotient exceeds cap nodes.
[[nodiscard]] HKReport hk_report(const Network& net, const Colouring& col, const std::vector<PhaseEntry>& phases,
                                 double tol = 1e-4, std::size_t cap = 8);

/// All pairwise phase sets between the given nodes of an orbit.
[[nodiscard]] std::vector<PhaseEntry> phase_pattern(const OrbitSamples& orbit, const NodeLayout& lay,
                                                    const std::vector<std::size_t>& nodes, double tol = 1e-6,
                                                    double steady_tol = 1e-8);

[[nodiscard]] io::json to_json(const ProbeReport& r);
[[nodiscard]] io::json to_json(const FullOscillationReport& r);
[[nodiscard]] io::json to_json(const HKReport& r);
[[nodiscard]] io::json to_json(const HyperbolicityReport& r);

}  // namespace ccn
