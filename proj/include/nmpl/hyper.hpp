#pragma once

// Hyperproperty checkers over finite sets of classified runs.
//
// Two-trace properties are checked per observer down-set D, four-trace
// properties per attacker (P, T). Divergent runs are lassos, so the checkers
// reason about their full infinite traces; runs that are unknown or stuck
// make the tuples they appear in inconclusive.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "nmpl/interp.hpp"
#include "nmpl/labels.hpp"
#include "nmpl/observe.hpp"

namespace nmpl {

enum class Property { PSNI, PINI, LFP, PSRD, PIRD, RPL, PSTE, PITE, TPC, PSNMIF, PINMIF, NMPL };

const char* property_name(Property p);
std::optional<Property> parse_property(std::string_view name);
/// PSNI, PINI, and LFP; everything else quantifies over attackers.
bool is_two_trace(Property p);
/// Component properties of a conjunction, in evaluation order.
std::vector<Property> components_of(Property p);
/// Whether p is evaluated with P and T exchanged.
bool is_dual(Property p);

enum class Outcome { Holds, Violated, Inconclusive };

const char* outcome_name(Outcome o);

/// Run indices and prefix lengths (raw event counts) exhibiting a violation.
/// Two-trace: runs {t1, t2}. Four-trace: runs {t11, t12, t21, t22} in the
/// role frame of `property`, prefixes {p, p12[, p22]}.
struct Witness {
    Property property = Property::PSNI;
    std::vector<std::size_t> runs;
    std::vector<std::size_t> prefixes;
};

struct Verdict {
    Outcome outcome = Outcome::Holds;
    std::optional<Witness> witness;
    std::size_t unknown_count = 0;
};

/// Violated dominates inconclusive dominates holds; the first witness wins.
Verdict combine(const std::vector<Verdict>& parts);

struct Quad {
    std::size_t t11, t12, t21, t22;
    bool operator==(const Quad&) const = default;
};

/// Every ordered 4-tuple with in11 ≈P in21, in12 ≈P in22, in11 ≈T in12,
/// in21 ≈T in22.
std::vector<Quad> enumerate_quads(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);
std::vector<Quad> enumerate_quads(const std::vector<Run>& runs, const Ctx& ctx, const LabelModel& m,
                                  const Attacker& a);

Verdict check_psni(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& d);
Verdict check_pini(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& d);
Verdict check_lfp(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& d);

Verdict check_psrd(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);
Verdict check_pird(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);
Verdict check_rpl(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);
Verdict check_pste(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);
Verdict check_pite(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);
Verdict check_tpc(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);
Verdict check_psnmif(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);
Verdict check_pinmif(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);
Verdict check_nmpl(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);

/// Any property at one component: a down-set for two-trace properties, an
/// attacker's (P, T) otherwise.
Verdict check_at(Property prop, const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);
Verdict check_at(Property prop, const std::vector<Run>& runs, const Ctx& ctx, const LabelModel& m,
                 const Attacker& a);

struct ComponentVerdict {
    std::string component;
    Verdict verdict;
};

struct Report {
    Property property = Property::PSNI;
    Verdict overall;
    std::vector<ComponentVerdict> components;
    /// Index into components of the witness's origin.
    std::optional<std::size_t> witness_component;
};

/// The property at every down-set or attacker of m. Components run in
/// parallel.
Report check_all(const std::vector<Run>& runs, const Ctx& ctx, Property prop, const LabelModel& m);
/// Sequential reference for check_all.
Report check_all_serial(const std::vector<Run>& runs, const Ctx& ctx, Property prop, const LabelModel& m);

std::string describe(const DownSet& d, const LabelModel& m);

nlohmann::json witness_to_json(const Witness& w, const std::vector<Run>& runs, const LabelModel& m);
nlohmann::json report_to_json(const Report& r, const std::vector<Run>& runs, const LabelModel& m);

namespace reference {

/// Direct evaluation of the quantified definitions over concrete prefixes.
/// Universal prefix quantifiers range over a window of each run long enough
/// to expose every visible-stream disagreement among the given runs;
/// existential ones search each run exactly. Slow: for tests only.
Verdict check_at(Property prop, const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);

/// Re-evaluates the raw definition at the witness tuple. `p` and `t` are the
/// attacker's sets in the un-swapped frame (p alone for two-trace witnesses).
bool replay(const Witness& w, const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t);

}  // namespace reference

}  // namespace nmpl
