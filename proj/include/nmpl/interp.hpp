#pragma once

// Small-step semantics with events, classified runs, behaviors over a finite
// input domain, and bridge steps.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmpl/labels.hpp"
#include "nmpl/lang.hpp"

namespace nmpl {

using Mem = std::map<std::string, std::uint64_t>;

struct Event {
    enum class Kind { Silent, Stp, Assign, PDown };

    Kind kind = Kind::Silent;
    std::string var;         // Assign
    std::uint64_t value = 0;  // Assign
    Label label;             // PDown

    static Event silent() { return {}; }
    static Event stp() { return {Kind::Stp, {}, 0, {}}; }
    static Event assign(std::string x, std::uint64_t n) { return {Kind::Assign, std::move(x), n, {}}; }
    static Event pd(Label l) { return {Kind::PDown, {}, 0, l}; }

    bool operator==(const Event&) const = default;
};

std::string to_string(const Event& e, const LabelModel& m);

class EvalError : public std::runtime_error {
  public:
    enum class Kind { Unbound, Overflow };
    EvalError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

/// Throws EvalError on unbound variables or arithmetic overflow.
std::uint64_t eval_expr(const Expr& e, const Mem& mem);

struct StepResult {
    enum class Status { Stepped, Stuck, Overflow };

    Status status = Status::Stepped;
    Event event;
    CmdPtr next;
    std::string detail;
};

/// One deterministic step; `mem` is updated in place on success.
StepResult step(const CmdPtr& c, Mem& mem);

enum class RunStatus { Terminated, SilentDivergent, ProductiveDivergent, Unknown, Stuck };

const char* status_name(RunStatus s);

constexpr std::size_t kDefaultFuel = 10000;

/// A classified execution. Divergent runs are lassos: events[0, cycle_start)
/// then events[cycle_start, end) repeated forever.
struct Run {
    Mem input;
    std::vector<Event> events;
    RunStatus status = RunStatus::Unknown;
    std::optional<std::size_t> cycle_start;
    std::string detail;

    bool divergent() const {
        return status == RunStatus::SilentDivergent || status == RunStatus::ProductiveDivergent;
    }
    /// Whether the full (possibly infinite) trace is known.
    bool classified() const { return status == RunStatus::Terminated || divergent(); }
    std::size_t loop_length() const { return divergent() ? events.size() - *cycle_start : 0; }
    /// Event k of the full trace; k must be below events.size() unless the run
    /// is divergent.
    const Event& event_at(std::size_t k) const;
    /// First k events of the full trace.
    std::vector<Event> prefix(std::size_t k) const;
};

Run run(const CmdPtr& c, const Mem& input, std::size_t fuel = kDefaultFuel);

/// All memories assigning dom(ctx) values from `domain`, lexicographic with the
/// last variable varying fastest.
std::vector<Mem> enumerate_memories(const Ctx& ctx, const std::vector<std::uint64_t>& domain);

/// One run per memory of enumerate_memories, in that order. Parallel.
std::vector<Run> behav(const CmdPtr& c, const Ctx& ctx, const std::vector<std::uint64_t>& domain,
                       std::size_t fuel = kDefaultFuel);
/// Sequential reference for behav.
std::vector<Run> behav_serial(const CmdPtr& c, const Ctx& ctx, const std::vector<std::uint64_t>& domain,
                              std::size_t fuel = kDefaultFuel);

struct BridgeResult {
    enum class Kind { Bridged, SilentlyDiverges, Unknown, Stuck };

    Kind kind = Kind::Unknown;
    Event event;
    CmdPtr next;
    Mem mem;
    std::size_t steps = 0;
};

/// Steps until the first event visible at `d`, or classifies the remainder.
BridgeResult bridge_step(const CmdPtr& c, const Mem& mem, const Ctx& ctx, const DownSet& d,
                         std::size_t fuel = kDefaultFuel);

/// `input x=0 y=1`, one line per event, then `status ...`.
std::string dump_run(const Run& r, const LabelModel& m);

}  // namespace nmpl
