#include "nmpl/typecheck.hpp"

#include <functional>

namespace nmpl {

const char* kind_name(TypeError::Kind k) {
    switch (k) {
        case TypeError::Kind::ExplicitFlow: return "explicit-flow";
        case TypeError::Kind::ImplicitFlow: return "implicit-flow";
        case TypeError::Kind::SeqProgress: return "seq-progress";
        case TypeError::Kind::WhileGuard: return "while-guard";
        case TypeError::Kind::PDownPc: return "pdown-pc";
        case TypeError::Kind::PDownCompromised: return "pdown-compromised";
        case TypeError::Kind::StopInProgram: return "stop-in-program";
        case TypeError::Kind::UnboundVariable: return "unbound-variable";
    }
    return "?";
}

std::string describe(const TypeError& e, const LabelModel& m) {
    std::string s = std::to_string(e.span.line) + ":" + std::to_string(e.span.col) + ": " + kind_name(e.kind);
    if (!e.detail.empty()) s += ": " + e.detail;
    switch (e.kind) {
        case TypeError::Kind::StopInProgram:
        case TypeError::Kind::UnboundVariable: break;
        case TypeError::Kind::PDownCompromised:
            s += " (no non-compromised label above " + m.name(e.from) + ")";
            break;
        default: s += " (" + m.name(e.from) + " does not flow to " + m.name(e.to) + ")";
    }
    return s;
}

Checked<Label> type_expr(const LabelModel& m, const Ctx& ctx, const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Lit: return m.bottom();
        case Expr::Kind::Var: {
            auto it = ctx.find(e.name);
            if (it == ctx.end())
                return TypeError{TypeError::Kind::UnboundVariable, e.span, {}, {}, "variable '" + e.name + "'"};
            return it->second;
        }
        case Expr::Kind::Bin: {
            auto a = type_expr(m, ctx, *e.lhs);
            if (!a) return a;
            auto b = type_expr(m, ctx, *e.rhs);
            if (!b) return b;
            return m.join(a.value(), b.value());
        }
    }
    return m.bottom();
}

namespace {

enum class Origin { Entry, IfGuard, WhileGuard, Progress };

// The pc as a stack of tagged contributions so a failed assignment can name
// the construct that raised the pc too far.
struct PcStack {
    std::vector<std::pair<Label, Origin>> parts;
    std::vector<Label> joined;

    Label top() const { return joined.back(); }
};

class PcScope {
  public:
    PcScope(const LabelModel& m, PcStack& s, Label l, Origin o) : s_(s) {
        s_.parts.emplace_back(l, o);
        s_.joined.push_back(m.join(s_.joined.back(), l));
    }
    ~PcScope() {
        s_.parts.pop_back();
        s_.joined.pop_back();
    }
    PcScope(const PcScope&) = delete;
    PcScope& operator=(const PcScope&) = delete;

  private:
    PcStack& s_;
};

using PDownObserver = std::function<void(const Cmd& node, Label body_nt)>;

class Synth {
  public:
    Synth(const LabelModel& m, const Ctx& ctx, const PDownObserver* obs) : m_(m), ctx_(ctx), obs_(obs) {}

    Checked<Label> run(PcStack& pc, const Cmd& c) {
        switch (c.kind) {
            case CmdKind::Skip: return m_.bottom();
            case CmdKind::Stop:
                return TypeError{TypeError::Kind::StopInProgram, c.span, {}, {}, "stop is never well-typed"};
            case CmdKind::Assign: return assign(pc, c);
            case CmdKind::Seq: {
                auto nt1 = run(pc, *c.first);
                if (!nt1) return nt1;
                PcScope scope(m_, pc, nt1.value(), Origin::Progress);
                auto nt2 = run(pc, *c.second);
                if (!nt2) return nt2;
                return m_.join(nt1.value(), nt2.value());
            }
            case CmdKind::If: {
                auto g = type_expr(m_, ctx_, *c.expr);
                if (!g) return g;
                PcScope scope(m_, pc, g.value(), Origin::IfGuard);
                auto a = run(pc, *c.first);
                if (!a) return a;
                auto b = run(pc, *c.second);
                if (!b) return b;
                return m_.join(a.value(), b.value());
            }
            case CmdKind::While: return loop(pc, c);
            case CmdKind::PDown: return pdown(pc, c);
        }
        return m_.bottom();
    }

  private:
    Checked<Label> assign(PcStack& pc, const Cmd& c) {
        auto it = ctx_.find(c.var);
        if (it == ctx_.end())
            return TypeError{TypeError::Kind::UnboundVariable, c.span, {}, {}, "variable '" + c.var + "'"};
        Label target = it->second;
        auto e = type_expr(m_, ctx_, *c.expr);
        if (!e) return e;
        if (!m_.flows_to(e.value(), target))
            return TypeError{TypeError::Kind::ExplicitFlow, c.span, e.value(), target,
                             "assignment to '" + c.var + "'"};
        if (m_.flows_to(pc.top(), target)) return m_.bottom();
        for (std::size_t i = pc.parts.size(); i-- > 0;) {
            auto [l, origin] = pc.parts[i];
            if (m_.flows_to(l, target)) continue;
            TypeError::Kind k = TypeError::Kind::ImplicitFlow;
            if (origin == Origin::WhileGuard) k = TypeError::Kind::WhileGuard;
            if (origin == Origin::Progress) k = TypeError::Kind::SeqProgress;
            return TypeError{k, c.span, l, target, "assignment to '" + c.var + "'"};
        }
        // Every part flows but the join does not: the combination is at fault.
        return TypeError{TypeError::Kind::ImplicitFlow, c.span, pc.top(), target, "assignment to '" + c.var + "'"};
    }

    Checked<Label> loop(PcStack& pc, const Cmd& c) {
        auto g = type_expr(m_, ctx_, *c.expr);
        if (!g) return g;
        PcScope guard(m_, pc, g.value(), Origin::WhileGuard);
        // Least p above pc ⊔ guard with synth(p, body) ⊑ p.
        Label p = pc.top();
        Label feedback = m_.bottom();
        const PDownObserver* saved = obs_;
        obs_ = nullptr;
        while (true) {
            PcScope fb(m_, pc, feedback, Origin::Progress);
            auto nt = run(pc, *c.first);
            if (!nt) {
                obs_ = saved;
                return nt;
            }
            if (m_.flows_to(nt.value(), p)) break;
            feedback = m_.join(feedback, nt.value());
            p = m_.join(p, nt.value());
        }
        obs_ = saved;
        if (obs_) {
            PcScope fb(m_, pc, feedback, Origin::Progress);
            run(pc, *c.first);
        }
        return p;
    }

    Checked<Label> pdown(PcStack& pc, const Cmd& c) {
        auto nt = run(pc, *c.first);
        if (!nt) return nt;
        bool found = false;
        for (Label l : m_.labels())
            if (m_.flows_to(nt.value(), l) && m_.is_non_compromised(l)) {
                found = true;
                break;
            }
        if (!found)
            return TypeError{TypeError::Kind::PDownCompromised, c.span, nt.value(), nt.value(),
                             "body termination label is compromised"};
        if (!m_.flows_to(pc.top(), c.label))
            return TypeError{TypeError::Kind::PDownPc, c.span, pc.top(), c.label, "pc above downgrade target"};
        if (obs_) (*obs_)(c, nt.value());
        return c.label;
    }

    const LabelModel& m_;
    const Ctx& ctx_;
    const PDownObserver* obs_;
};

Checked<Label> synth_with(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c, const PDownObserver* obs) {
    PcStack stack;
    stack.parts.emplace_back(pc, Origin::Entry);
    stack.joined.push_back(pc);
    Synth s(m, ctx, obs);
    return s.run(stack, c);
}

}  // namespace

Checked<Label> synth_nt(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c) {
    return synth_with(m, ctx, pc, c, nullptr);
}

Checked<bool> check(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c, Label nt) {
    auto r = synth_nt(m, ctx, pc, c);
    if (!r) return r.error();
    return m.flows_to(r.value(), nt);
}

Checked<bool> is_downgrade_free(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c, const DownSet& d) {
    bool free = true;
    PDownObserver obs = [&](const Cmd& node, Label body_nt) {
        if (d.contains(node.label) && !d.contains(body_nt)) free = false;
    };
    auto r = synth_with(m, ctx, pc, c, &obs);
    if (!r) return r.error();
    return free;
}

}  // namespace nmpl
