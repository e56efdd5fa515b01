#pragma once

// Progress-downgrade inference: placement of pdown nodes with bound labels,
// then label setting from the program counter.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "nmpl/labels.hpp"
#include "nmpl/lang.hpp"

namespace nmpl {

struct PartialCmd;
using PartialPtr = std::shared_ptr<const PartialCmd>;

/// A command whose pdown nodes are not yet labeled. `aux` is the pc increase
/// for the second seq component, the while body, or both if branches.
struct PartialCmd {
    CmdKind kind = CmdKind::Skip;
    std::string var;
    ExprPtr expr;
    PartialPtr first, second;
    Label aux;
    SourceSpan span;
};

std::size_t node_count(const PartialCmd& c);
std::string to_string(const PartialCmd& c, const LabelModel& m);

struct InferError {
    enum class Kind { UnboundVariable, AssignFlow, WhileCompromised, PDownInInput, StopInInput };

    Kind kind;
    SourceSpan span;
    Label from;
    Label to;
    std::string detail;
};

const char* kind_name(InferError::Kind k);
std::string describe(const InferError& e, const LabelModel& m);

template <class T>
class Inferred {
  public:
    Inferred(T value) : v_(std::move(value)) {}
    Inferred(InferError err) : v_(std::move(err)) {}

    bool ok() const { return v_.index() == 0; }
    explicit operator bool() const { return ok(); }
    const T& value() const { return std::get<0>(v_); }
    const InferError& error() const { return std::get<1>(v_); }

  private:
    std::variant<T, InferError> v_;
};

struct PlaceResult {
    PartialPtr partial;
    Label bound;
    Label nt;
};

/// Node visits, for checking that each pass is linear.
struct PassStats {
    std::size_t visits = 0;
};

Inferred<Label> elab(const Ctx& ctx, const Expr& e, const LabelModel& m);

Inferred<PlaceResult> pd_place(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c,
                               PassStats* stats = nullptr);
CmdPtr pd_lab_set(const LabelModel& m, Label pc, const PartialCmd& c, PassStats* stats = nullptr);

struct InferResult {
    CmdPtr cmd;
    Label nt;
};

Inferred<InferResult> pd_inf(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c);

/// Whether [l ⊑ b] agrees with [pd_place at pc ⊔ l succeeds], b being the
/// bound at pc. Requires pd_place at pc to succeed.
bool bound_validity_oracle(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c, Label l);

constexpr std::size_t kMinimalityCutoff = 8;

/// For an inference output `c`: whether no structure strictly below c (fewer
/// or the same pdown nodes up to ≡PD, but not ≡PD) typechecks at pc with a
/// non-compromised nt under any labeling of its pdown nodes. Empty when
/// c.size exceeds `cutoff`.
std::optional<bool> minimality_oracle(const LabelModel& m, const Ctx& ctx, Label pc, const CmdPtr& c,
                                      std::size_t cutoff = kMinimalityCutoff);

/// Whether every relabeling of c's pdown nodes that typechecks at pc has a
/// synthesized nt above `nt`.
bool least_nt_oracle(const LabelModel& m, const Ctx& ctx, Label pc, const CmdPtr& c, Label nt);

}  // namespace nmpl
