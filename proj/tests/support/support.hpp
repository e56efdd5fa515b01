#pragma once

// Shared test helpers: a random program generator and oracles that restate
// definitions independently of the library's algorithms.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nmpl/hyper.hpp"
#include "nmpl/interp.hpp"
#include "nmpl/labels.hpp"
#include "nmpl/lang.hpp"

namespace nmpl::testing {

using Rng = std::mt19937_64;

/// a:(Pub,Unt) b:(Pub,Trd) y:(Sec,Trd) s:(Sec,Unt) in the four-point model.
Ctx standard_ctx(const LabelModel& m);

/// Conf L<M<H and integ T<M<U with order-reversing voice and view.
LabelModel three_level_model();

inline const std::vector<std::uint64_t> kDomain{0, 1, 2};

struct GenOptions {
    std::size_t max_size = 10;
    bool pdown = false;
    std::vector<std::string> vars{"a", "b", "y", "s"};
    std::uint64_t max_lit = 2;
};

ExprPtr random_expr(Rng& rng, const GenOptions& opts, std::size_t budget);
/// A command whose size (command plus expression nodes) is at most budget.
CmdPtr random_cmd(Rng& rng, const LabelModel& m, const GenOptions& opts, std::size_t budget);
/// Budget drawn uniformly from [2, opts.max_size].
CmdPtr random_program(Rng& rng, const LabelModel& m, const GenOptions& opts);

/// Draws programs until one typechecks at pc (and, when `non_compromised`,
/// with a non-compromised least nt).
CmdPtr random_well_typed(Rng& rng, const LabelModel& m, const Ctx& ctx, Label pc, const GenOptions& opts,
                         bool non_compromised = false);

/// Every (pc, nt) pair derivable for c, computed bottom-up from the typing
/// rules with explicit Variance closure. Indexed [index(pc)][index(nt)].
std::vector<std::vector<char>> derivable(const LabelModel& m, const Ctx& ctx, const Cmd& c);

/// Event-sequence equivalence by the four inductive rules, searched directly.
bool tequiv_rules(const Ctx& ctx, const DownSet& d, const std::vector<Event>& s1, const std::vector<Event>& s2);

/// Counterexamples to Matching Bridge Step for a program typed at pc: for
/// every down-set and every pair of equivalent inputs, bridges from the first
/// memory are matched by the second, following up to `depth` bridges.
/// `first` receives a description of the first counterexample.
std::size_t bridge_failures(const LabelModel& m, const Ctx& ctx, Label pc, const CmdPtr& c,
                            const std::vector<std::uint64_t>& domain, std::size_t depth, std::string* first);

/// Counterexamples to Containment: for every down-set D with pc outside it,
/// each of the first `steps` steps of every run keeps memories D-equivalent
/// and emits a silent event or stp.
std::size_t containment_failures(const LabelModel& m, const Ctx& ctx, Label pc, const CmdPtr& c,
                                 const std::vector<std::uint64_t>& domain, std::size_t steps, std::string* first);

/// Whether every run in the set has a classified trace.
bool fully_classified(const std::vector<Run>& runs);

bool holds(const Verdict& v);
bool violated(const Verdict& v);

}  // namespace nmpl::testing
