#include "support.hpp"

#include <functional>
#include <map>

#include "nmpl/observe.hpp"
#include "nmpl/typecheck.hpp"

namespace nmpl::testing {

Ctx standard_ctx(const LabelModel& m) {
    return {{"a", m.label("Pub", "Unt")},
            {"b", m.label("Pub", "Trd")},
            {"y", m.label("Sec", "Trd")},
            {"s", m.label("Sec", "Unt")}};
}

LabelModel three_level_model() {
    ModelSpec s;
    s.conf_elems = {"L", "M", "H"};
    s.conf_order = {{"L", "M"}, {"M", "H"}};
    s.integ_elems = {"T", "M", "U"};
    s.integ_order = {{"T", "M"}, {"M", "U"}};
    s.voice = {{"L", "U"}, {"M", "M"}, {"H", "T"}};
    s.view = {{"T", "H"}, {"M", "M"}, {"U", "L"}};
    return LabelModel::from_spec(s);
}

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace

ExprPtr random_expr(Rng& rng, const GenOptions& opts, std::size_t budget) {
    if (budget < 3 || pick(rng, 0, 2) == 0) {
        if (opts.vars.empty() || pick(rng, 0, 2) == 0) return Expr::lit(pick(rng, 0, opts.max_lit));
        return Expr::var(opts.vars[pick(rng, 0, opts.vars.size() - 1)]);
    }
    static const BinOp ops[] = {BinOp::Add, BinOp::Monus, BinOp::Mul, BinOp::Eq, BinOp::Lt, BinOp::And, BinOp::Or};
    BinOp op = ops[pick(rng, 0, std::size(ops) - 1)];
    std::size_t left = pick(rng, 1, budget - 2);
    auto lhs = random_expr(rng, opts, left);
    auto rhs = random_expr(rng, opts, budget - 1 - left);
    return Expr::bin(op, lhs, rhs);
}

CmdPtr random_cmd(Rng& rng, const LabelModel& m, const GenOptions& opts, std::size_t budget) {
    enum Kind { Skip, Assign, Seq, If, While, PDown };
    std::vector<Kind> kinds{Skip};
    if (budget >= 2 && !opts.vars.empty()) kinds.insert(kinds.end(), {Assign, Assign, Assign});
    if (budget >= 3) kinds.insert(kinds.end(), {Seq, Seq, Seq, While, While});
    if (budget >= 4) kinds.insert(kinds.end(), {If, If});
    if (budget >= 2 && opts.pdown) kinds.push_back(PDown);
    switch (kinds[pick(rng, 0, kinds.size() - 1)]) {
        case Skip: return Cmd::skip();
        case Assign: {
            const auto& x = opts.vars[pick(rng, 0, opts.vars.size() - 1)];
            return Cmd::assign(x, random_expr(rng, opts, std::min<std::size_t>(budget - 1, 3)));
        }
        case Seq: {
            std::size_t left = pick(rng, 1, budget - 2);
            auto a = random_cmd(rng, m, opts, left);
            auto b = random_cmd(rng, m, opts, budget - 1 - left);
            return Cmd::seq(a, b);
        }
        case If: {
            std::size_t g = pick(rng, 1, std::min<std::size_t>(3, budget - 3));
            std::size_t rest = budget - 1 - g;
            std::size_t left = pick(rng, 1, rest - 1);
            auto guard = random_expr(rng, opts, g);
            auto a = random_cmd(rng, m, opts, left);
            auto b = random_cmd(rng, m, opts, rest - left);
            return Cmd::ite(guard, a, b);
        }
        case While: {
            std::size_t g = pick(rng, 1, std::min<std::size_t>(3, budget - 2));
            auto guard = random_expr(rng, opts, g);
            return Cmd::loop(guard, random_cmd(rng, m, opts, budget - 1 - g));
        }
        case PDown: {
            auto labels = m.labels();
            Label l = labels[pick(rng, 0, labels.size() - 1)];
            return Cmd::pdown(l, random_cmd(rng, m, opts, budget - 1));
        }
    }
    return Cmd::skip();
}

CmdPtr random_program(Rng& rng, const LabelModel& m, const GenOptions& opts) {
    return random_cmd(rng, m, opts, pick(rng, 2, std::max<std::size_t>(2, opts.max_size)));
}

CmdPtr random_well_typed(Rng& rng, const LabelModel& m, const Ctx& ctx, Label pc, const GenOptions& opts,
                         bool non_compromised) {
    while (true) {
        auto c = random_program(rng, m, opts);
        auto nt = synth_nt(m, ctx, pc, *c);
        if (!nt) continue;
        if (non_compromised && !m.is_non_compromised(nt.value())) continue;
        return c;
    }
}

namespace {

using Table = std::vector<std::vector<char>>;

// Least label of e by the expression rules; operators join their operands.
Label expr_label(const LabelModel& m, const Ctx& ctx, const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Lit: return m.bottom();
        case Expr::Kind::Var: return ctx.at(e.name);
        case Expr::Kind::Bin: return m.join(expr_label(m, ctx, *e.lhs), expr_label(m, ctx, *e.rhs));
    }
    return m.bottom();
}

// Variance: from pc' ⊢ c ◇ nt' conclude pc ⊢ c ◇ nt for pc ⊑ pc', nt' ⊑ nt.
void close_variance(const LabelModel& m, Table& t) {
    auto ls = m.labels();
    Table out(ls.size(), std::vector<char>(ls.size(), 0));
    for (Label pc2 : ls)
        for (Label nt2 : ls) {
            if (!t[m.index(pc2)][m.index(nt2)]) continue;
            for (Label pc : ls)
                for (Label nt : ls)
                    if (m.flows_to(pc, pc2) && m.flows_to(nt2, nt)) out[m.index(pc)][m.index(nt)] = 1;
        }
    t = std::move(out);
}

}  // namespace

Table derivable(const LabelModel& m, const Ctx& ctx, const Cmd& c) {
    auto ls = m.labels();
    const std::size_t n = ls.size();
    Table t(n, std::vector<char>(n, 0));
    auto set = [&](Label pc, Label nt) { t[m.index(pc)][m.index(nt)] = 1; };
    switch (c.kind) {
        case CmdKind::Stop: return t;
        case CmdKind::Skip:
            for (Label pc : ls)
                for (Label nt : ls) set(pc, nt);
            break;
        case CmdKind::Assign: {
            if (!ctx.count(c.var)) return t;
            Label x = ctx.at(c.var);
            if (!m.flows_to(expr_label(m, ctx, *c.expr), x)) return t;
            for (Label nt : ls) set(x, nt);
            break;
        }
        case CmdKind::If: {
            Label g = expr_label(m, ctx, *c.expr);
            auto a = derivable(m, ctx, *c.first), b = derivable(m, ctx, *c.second);
            for (Label pc : ls)
                for (Label nt : ls)
                    if (m.flows_to(g, pc) && a[m.index(pc)][m.index(nt)] && b[m.index(pc)][m.index(nt)]) set(pc, nt);
            break;
        }
        case CmdKind::Seq: {
            auto a = derivable(m, ctx, *c.first), b = derivable(m, ctx, *c.second);
            for (Label pc1 : ls)
                for (Label nt1 : ls) {
                    if (!a[m.index(pc1)][m.index(nt1)]) continue;
                    for (Label pc2 : ls)
                        for (Label nt2 : ls)
                            if (b[m.index(pc2)][m.index(nt2)] && m.flows_to(pc1, pc2) && m.flows_to(nt1, pc2) &&
                                m.flows_to(nt1, nt2))
                                set(pc1, nt2);
                }
            break;
        }
        case CmdKind::While: {
            Label g = expr_label(m, ctx, *c.expr);
            auto body = derivable(m, ctx, *c.first);
            for (Label pc : ls)
                if (m.flows_to(g, pc) && body[m.index(pc)][m.index(pc)]) set(pc, pc);
            break;
        }
        case CmdKind::PDown: {
            auto body = derivable(m, ctx, *c.first);
            for (Label pc : ls)
                for (Label nt : ls)
                    if (body[m.index(pc)][m.index(nt)] && m.is_non_compromised(nt) && m.flows_to(pc, c.label))
                        set(pc, c.label);
            break;
        }
    }
    close_variance(m, t);
    return t;
}

bool tequiv_rules(const Ctx& ctx, const DownSet& d, const std::vector<Event>& s1, const std::vector<Event>& s2) {
    // Memoized search over suffix pairs (i, j).
    std::map<std::pair<std::size_t, std::size_t>, bool> memo;
    std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> bool {
        if (i == s1.size() && j == s2.size()) return true;
        auto key = std::make_pair(i, j);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        bool r = false;
        if (i < s1.size() && j < s2.size() && s1[i] == s2[j] && go(i + 1, j + 1)) r = true;
        if (!r && i < s1.size() && is_silent(ctx, d, s1[i]) && go(i + 1, j)) r = true;
        if (!r && j < s2.size() && is_silent(ctx, d, s2[j]) && go(i, j + 1)) r = true;
        memo[key] = r;
        return r;
    };
    return go(0, 0);
}

namespace {

void note(std::string* first, std::size_t& failures, const std::string& what) {
    if (failures++ == 0 && first) *first = what;
}

std::string mem_text(const Mem& mem) {
    std::string s;
    for (const auto& [x, v] : mem) s += (s.empty() ? "" : " ") + x + "=" + std::to_string(v);
    return s;
}

}  // namespace

std::size_t bridge_failures(const LabelModel& m, const Ctx& ctx, Label pc, const CmdPtr& c,
                            const std::vector<std::uint64_t>& domain, std::size_t depth, std::string* first) {
    std::size_t failures = 0;
    auto mems = enumerate_memories(ctx, domain);
    for (const auto& d : m.enumerate_downsets()) {
        for (const auto& s1 : mems)
            for (const auto& s2 : mems) {
                if (!mem_equiv(ctx, d, s1, s2)) continue;
                CmdPtr cur = c;
                Mem m1 = s1, m2 = s2;
                for (std::size_t k = 0; k < depth && cur->kind != CmdKind::Stop; ++k) {
                    auto nt = synth_nt(m, ctx, pc, *cur);
                    std::string where = to_string(*c, m) + " | D=" + describe(d, m) + " | " + mem_text(s1) +
                                        " vs " + mem_text(s2) + " | bridge " + std::to_string(k);
                    if (!nt) {
                        note(first, failures, "residual not typable: " + where);
                        break;
                    }
                    auto b1 = bridge_step(cur, m1, ctx, d);
                    if (b1.kind != BridgeResult::Kind::Bridged) break;
                    auto b2 = bridge_step(cur, m2, ctx, d);
                    if (b2.kind == BridgeResult::Kind::Unknown) break;
                    if (b2.kind == BridgeResult::Kind::Bridged) {
                        if (!(b1.event == b2.event) || !equal(b1.next, b2.next) || !mem_equiv(ctx, d, b1.mem, b2.mem)) {
                            note(first, failures, "mismatched bridge: " + where);
                            break;
                        }
                        cur = b1.next;
                        m1 = b1.mem;
                        m2 = b2.mem;
                        continue;
                    }
                    bool excused = b2.kind == BridgeResult::Kind::SilentlyDiverges &&
                                   (b1.event.kind == Event::Kind::PDown ||
                                    (b1.event.kind == Event::Kind::Stp && !d.contains(nt.value())));
                    if (!excused) note(first, failures, "unexcused divergence or stuck run: " + where);
                    break;
                }
            }
    }
    return failures;
}

std::size_t containment_failures(const LabelModel& m, const Ctx& ctx, Label pc, const CmdPtr& c,
                                 const std::vector<std::uint64_t>& domain, std::size_t steps, std::string* first) {
    std::size_t failures = 0;
    for (const auto& d : m.enumerate_downsets()) {
        if (d.contains(pc)) continue;
        for (const auto& s : enumerate_memories(ctx, domain)) {
            CmdPtr cur = c;
            Mem mem = s;
            for (std::size_t k = 0; k < steps && cur->kind != CmdKind::Stop; ++k) {
                Mem before = mem;
                auto r = step(cur, mem);
                if (r.status != StepResult::Status::Stepped) break;
                bool ok = mem_equiv(ctx, d, before, mem) &&
                          (r.event.kind == Event::Kind::Stp || is_silent(ctx, d, r.event));
                if (!ok) {
                    note(first, failures,
                         to_string(*c, m) + " | D=" + describe(d, m) + " | " + mem_text(s) + " | step " +
                             std::to_string(k));
                    break;
                }
                cur = r.next;
            }
        }
    }
    return failures;
}

bool fully_classified(const std::vector<Run>& runs) {
    for (const auto& r : runs)
        if (!r.classified()) return false;
    return true;
}

bool holds(const Verdict& v) { return v.outcome == Outcome::Holds; }
bool violated(const Verdict& v) { return v.outcome == Outcome::Violated; }

}  // namespace nmpl::testing
