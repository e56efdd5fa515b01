#pragma once

// Abstract syntax of the while-language with progress downgrades, plus the
// parser, printer, typing contexts, and the pdown-structure relations.

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nmpl/labels.hpp"

namespace nmpl {

struct SourceSpan {
    int line = 0;
    int col = 0;
};

enum class BinOp { Add, Monus, Mul, Eq, Lt, And, Or };

const char* op_symbol(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Lit, Var, Bin };

    Kind kind = Kind::Lit;
    std::uint64_t value = 0;  // Lit
    std::string name;         // Var
    BinOp op = BinOp::Add;    // Bin
    ExprPtr lhs, rhs;         // Bin
    SourceSpan span;
    std::size_t hash = 0;
    std::size_t size = 1;

    static ExprPtr lit(std::uint64_t n, SourceSpan span = {});
    static ExprPtr var(std::string name, SourceSpan span = {});
    static ExprPtr bin(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span = {});
};

struct Cmd;
using CmdPtr = std::shared_ptr<const Cmd>;

enum class CmdKind { Skip, Assign, Seq, If, While, PDown, Stop };

struct Cmd {
    CmdKind kind = CmdKind::Skip;
    std::string var;  // Assign
    ExprPtr expr;     // Assign value, If/While guard
    CmdPtr first;     // Seq left, If then-branch, While/PDown body
    CmdPtr second;    // Seq right, If else-branch
    Label label;      // PDown
    SourceSpan span;
    std::size_t hash = 0;
    // Command plus expression nodes.
    std::size_t size = 1;

    static CmdPtr skip(SourceSpan span = {});
    static CmdPtr stop();
    static CmdPtr assign(std::string x, ExprPtr e, SourceSpan span = {});
    static CmdPtr seq(CmdPtr a, CmdPtr b, SourceSpan span = {});
    static CmdPtr ite(ExprPtr guard, CmdPtr then_c, CmdPtr else_c, SourceSpan span = {});
    static CmdPtr loop(ExprPtr guard, CmdPtr body, SourceSpan span = {});
    static CmdPtr pdown(Label l, CmdPtr body, SourceSpan span = {});
};

/// Structural equality; spans are ignored.
bool equal(const Expr& a, const Expr& b);
bool equal(const Cmd& a, const Cmd& b);
inline bool equal(const CmdPtr& a, const CmdPtr& b) { return a == b || (a && b && equal(*a, *b)); }

/// Number of command nodes (expressions excluded).
std::size_t cmd_node_count(const Cmd& c);
bool contains_pdown(const Cmd& c);
bool contains_stop(const Cmd& c);

using Ctx = std::map<std::string, Label>;

Ctx ctx_from_json(const nlohmann::json& doc, const LabelModel& m);
Ctx load_ctx(const std::string& path, const LabelModel& m);
nlohmann::json ctx_to_json(const Ctx& ctx, const LabelModel& m);

class ParseError : public std::runtime_error {
  public:
    enum class Kind { Syntax, UnknownLabel, Stop };

    ParseError(Kind kind, int line, int col, const std::string& msg);

    Kind kind() const { return kind_; }
    int line() const { return line_; }
    int col() const { return col_; }

  private:
    Kind kind_;
    int line_, col_;
};

CmdPtr parse_program(std::string_view text, const LabelModel& m);
ExprPtr parse_expr(std::string_view text);
CmdPtr load_program(const std::string& path, const LabelModel& m);

std::string to_string(const Expr& e);
std::string to_string(const Cmd& c, const LabelModel& m);

/// Removes every pdown wrapper.
CmdPtr erase(const CmdPtr& c);

/// a is obtained from b by deleting and/or relabeling pdown nodes.
bool pd_refines(const Cmd& a, const Cmd& b);
/// Equal up to pdown labels.
bool pd_equiv(const Cmd& a, const Cmd& b);

/// Every structure a with a pd_refines c, one per pd_equiv class, with
/// retained pdown nodes labeled `canonical`. The all-dropped choice comes
/// first at every pdown chain.
std::vector<CmdPtr> enumerate_pd_smaller(const CmdPtr& c, Label canonical);

/// Pdown nodes in pre-order.
std::vector<const Cmd*> pdown_nodes(const Cmd& c);
/// Replaces the labels of the pdown nodes (pre-order) with `labels`.
CmdPtr relabel_pdowns(const CmdPtr& c, const std::vector<Label>& labels);

}  // namespace nmpl
