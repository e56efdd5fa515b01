#pragma once

// Algorithmic checking for the progress-aware security type system: least
// nontermination-label synthesis with the Variance rule folded in.

#include <string>
#include <utility>
#include <variant>

#include "nmpl/labels.hpp"
#include "nmpl/lang.hpp"

namespace nmpl {

struct TypeError {
    enum class Kind {
        ExplicitFlow,
        ImplicitFlow,
        SeqProgress,
        WhileGuard,
        PDownPc,
        PDownCompromised,
        StopInProgram,
        UnboundVariable,
    };

    Kind kind;
    SourceSpan span;
    // The violated flow `from` ⊑ `to`, when the premise is a flow.
    Label from;
    Label to;
    std::string detail;
};

const char* kind_name(TypeError::Kind k);
std::string describe(const TypeError& e, const LabelModel& m);

/// Either a value or the TypeError explaining why none exists.
template <class T>
class Checked {
  public:
    Checked(T value) : v_(std::move(value)) {}
    Checked(TypeError err) : v_(std::move(err)) {}

    bool ok() const { return v_.index() == 0; }
    explicit operator bool() const { return ok(); }
    const T& value() const { return std::get<0>(v_); }
    const TypeError& error() const { return std::get<1>(v_); }

  private:
    std::variant<T, TypeError> v_;
};

/// Least label of `e`: literals are bottom, variables their context label,
/// operators the join of their operands.
Checked<Label> type_expr(const LabelModel& m, const Ctx& ctx, const Expr& e);

/// Least nt with ctx; pc ⊢ c ◇ nt, or the leftmost-innermost violated premise.
Checked<Label> synth_nt(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c);

/// Whether ctx; pc ⊢ c ◇ nt is derivable.
Checked<bool> check(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c, Label nt);

/// Whether the least derivation is D-downgrade free: every pdown_ℓ c' has
/// ℓ ∉ D or the body's synthesized nt in D.
Checked<bool> is_downgrade_free(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c, const DownSet& d);

}  // namespace nmpl
