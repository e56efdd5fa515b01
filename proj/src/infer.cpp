#include "nmpl/infer.hpp"

#include "nmpl/typecheck.hpp"

namespace nmpl {

std::size_t node_count(const PartialCmd& c) {
    std::size_t n = 1;
    if (c.first) n += node_count(*c.first);
    if (c.second) n += node_count(*c.second);
    return n;
}

std::string to_string(const PartialCmd& c, const LabelModel& m) {
    switch (c.kind) {
        case CmdKind::Skip: return "skip";
        case CmdKind::Stop: return "stop";
        case CmdKind::Assign: return c.var + " := " + to_string(*c.expr);
        case CmdKind::Seq:
            return "{ " + to_string(*c.first, m) + " };" + m.name(c.aux) + " { " + to_string(*c.second, m) + " }";
        case CmdKind::If:
            return "if" + m.name(c.aux) + " " + to_string(*c.expr) + " { " + to_string(*c.first, m) + " } else { " +
                   to_string(*c.second, m) + " }";
        case CmdKind::While:
            return "while" + m.name(c.aux) + " " + to_string(*c.expr) + " { " + to_string(*c.first, m) + " }";
        case CmdKind::PDown: return "pdown { " + to_string(*c.first, m) + " }";
    }
    return "?";
}

const char* kind_name(InferError::Kind k) {
    switch (k) {
        case InferError::Kind::UnboundVariable: return "unbound-variable";
        case InferError::Kind::AssignFlow: return "assign-flow";
        case InferError::Kind::WhileCompromised: return "while-compromised";
        case InferError::Kind::PDownInInput: return "pdown-in-input";
        case InferError::Kind::StopInInput: return "stop-in-input";
    }
    return "?";
}

std::string describe(const InferError& e, const LabelModel& m) {
    std::string s = std::to_string(e.span.line) + ":" + std::to_string(e.span.col) + ": " + kind_name(e.kind);
    if (!e.detail.empty()) s += ": " + e.detail;
    if (e.kind == InferError::Kind::AssignFlow || e.kind == InferError::Kind::WhileCompromised)
        s += " (" + m.name(e.from) + " does not flow to " + m.name(e.to) + ")";
    return s;
}

Inferred<Label> elab(const Ctx& ctx, const Expr& e, const LabelModel& m) {
    auto r = type_expr(m, ctx, e);
    if (!r) return InferError{InferError::Kind::UnboundVariable, r.error().span, {}, {}, r.error().detail};
    return r.value();
}

namespace {

PartialPtr make(CmdKind kind, const Cmd& src, PartialPtr first = nullptr, PartialPtr second = nullptr,
                Label aux = {}) {
    auto p = std::make_shared<PartialCmd>();
    p->kind = kind;
    p->var = src.var;
    p->expr = src.expr;
    p->first = std::move(first);
    p->second = std::move(second);
    p->aux = aux;
    p->span = src.span;
    return p;
}

PartialPtr wrap(const PartialPtr& body) {
    auto p = std::make_shared<PartialCmd>();
    p->kind = CmdKind::PDown;
    p->first = body;
    p->span = body->span;
    return p;
}

class Placer {
  public:
    Placer(const LabelModel& m, const Ctx& ctx, PassStats* stats) : m_(m), ctx_(ctx), stats_(stats) {}

    Inferred<PlaceResult> place(Label pc, const Cmd& c) {
        if (stats_) ++stats_->visits;
        switch (c.kind) {
            case CmdKind::Skip: return PlaceResult{make(CmdKind::Skip, c), m_.top(), m_.bottom()};
            case CmdKind::Stop:
                return InferError{InferError::Kind::StopInInput, c.span, {}, {}, "stop cannot be inferred"};
            case CmdKind::PDown:
                return InferError{InferError::Kind::PDownInInput, c.span, {}, {}, "erase downgrades before inference"};
            case CmdKind::Assign: {
                auto l = elab(ctx_, *c.expr, m_);
                if (!l) return l.error();
                auto it = ctx_.find(c.var);
                if (it == ctx_.end())
                    return InferError{InferError::Kind::UnboundVariable, c.span, {}, {}, "variable '" + c.var + "'"};
                Label lhs = m_.join(pc, l.value());
                if (!m_.flows_to(lhs, it->second))
                    return InferError{InferError::Kind::AssignFlow, c.span, lhs, it->second,
                                      "assignment to '" + c.var + "'"};
                return PlaceResult{make(CmdKind::Assign, c), it->second, m_.bottom()};
            }
            case CmdKind::If: {
                auto l = elab(ctx_, *c.expr, m_);
                if (!l) return l.error();
                Label inner = m_.join(pc, l.value());
                auto r1 = place(inner, *c.first);
                if (!r1) return r1;
                auto r2 = place(inner, *c.second);
                if (!r2) return r2;
                const auto &a = r1.value(), &b = r2.value();
                Label bound = m_.meet(a.bound, b.bound);
                Label joined = m_.join(a.nt, b.nt);
                if (m_.is_non_compromised(joined))
                    return PlaceResult{make(CmdKind::If, c, a.partial, b.partial, l.value()), bound, joined};
                return PlaceResult{make(CmdKind::If, c, wrap(a.partial), b.partial, l.value()), bound, b.nt};
            }
            case CmdKind::Seq: {
                auto r1 = place(pc, *c.first);
                if (!r1) return r1;
                auto r2 = place(pc, *c.second);
                if (!r2) return r2;
                const auto &a = r1.value(), &b = r2.value();
                Label bound = m_.meet(a.bound, b.bound);
                if (m_.flows_to(a.nt, b.bound))
                    return PlaceResult{make(CmdKind::Seq, c, a.partial, b.partial, a.nt), bound, m_.join(a.nt, b.nt)};
                return PlaceResult{make(CmdKind::Seq, c, wrap(a.partial), b.partial, m_.bottom()), bound,
                                   m_.join(pc, b.nt)};
            }
            case CmdKind::While: {
                auto l = elab(ctx_, *c.expr, m_);
                if (!l) return l.error();
                Label inner = m_.join(pc, l.value());
                Label mirror = m_.reflect(inner);
                if (!m_.flows_to(inner, mirror))
                    return InferError{InferError::Kind::WhileCompromised, c.span, inner, mirror,
                                      "loop guard makes the pc compromised"};
                auto r = place(inner, *c.first);
                if (!r) return r;
                const auto& body = r.value();
                Label bound = m_.meet(body.bound, mirror);
                if (m_.flows_to(body.nt, body.bound))
                    return PlaceResult{make(CmdKind::While, c, body.partial, nullptr, m_.join(l.value(), body.nt)),
                                       bound, m_.join(body.nt, inner)};
                return PlaceResult{make(CmdKind::While, c, wrap(body.partial), nullptr, l.value()), bound, inner};
            }
        }
        return InferError{InferError::Kind::StopInInput, c.span, {}, {}, "unreachable"};
    }

  private:
    const LabelModel& m_;
    const Ctx& ctx_;
    PassStats* stats_;
};

}  // namespace

Inferred<PlaceResult> pd_place(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c, PassStats* stats) {
    return Placer(m, ctx, stats).place(pc, c);
}

CmdPtr pd_lab_set(const LabelModel& m, Label pc, const PartialCmd& c, PassStats* stats) {
    if (stats) ++stats->visits;
    switch (c.kind) {
        case CmdKind::Skip: return Cmd::skip(c.span);
        case CmdKind::Stop: return Cmd::stop();
        case CmdKind::Assign: return Cmd::assign(c.var, c.expr, c.span);
        case CmdKind::If: {
            Label inner = m.join(pc, c.aux);
            auto a = pd_lab_set(m, inner, *c.first, stats);
            auto b = pd_lab_set(m, inner, *c.second, stats);
            return Cmd::ite(c.expr, a, b, c.span);
        }
        case CmdKind::Seq: {
            auto a = pd_lab_set(m, pc, *c.first, stats);
            auto b = pd_lab_set(m, m.join(pc, c.aux), *c.second, stats);
            return Cmd::seq(a, b, c.span);
        }
        case CmdKind::While: return Cmd::loop(c.expr, pd_lab_set(m, m.join(pc, c.aux), *c.first, stats), c.span);
        case CmdKind::PDown: return Cmd::pdown(pc, pd_lab_set(m, pc, *c.first, stats), c.span);
    }
    return Cmd::skip(c.span);
}

Inferred<InferResult> pd_inf(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c) {
    auto placed = pd_place(m, ctx, pc, c);
    if (!placed) return placed.error();
    return InferResult{pd_lab_set(m, pc, *placed.value().partial), placed.value().nt};
}

bool bound_validity_oracle(const LabelModel& m, const Ctx& ctx, Label pc, const Cmd& c, Label l) {
    auto at_pc = pd_place(m, ctx, pc, c);
    if (!at_pc) throw std::invalid_argument("bound_validity_oracle: pd_place fails at pc");
    bool below = m.flows_to(l, at_pc.value().bound);
    bool defined = pd_place(m, ctx, m.join(pc, l), c).ok();
    return below == defined;
}

namespace {

// Calls f on every assignment of model labels to k slots; stops when f
// returns true and reports whether it did.
template <class F>
bool any_labeling(const LabelModel& m, std::size_t k, F&& f) {
    auto all = m.labels();
    std::vector<std::size_t> digits(k, 0);
    std::vector<Label> labels(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) labels[i] = all[digits[i]];
        if (f(labels)) return true;
        std::size_t i = k;
        while (true) {
            if (i == 0) return false;
            --i;
            if (++digits[i] < all.size()) break;
            digits[i] = 0;
        }
    }
}

}  // namespace

std::optional<bool> minimality_oracle(const LabelModel& m, const Ctx& ctx, Label pc, const CmdPtr& c,
                                      std::size_t cutoff) {
    if (c->size > cutoff) return std::nullopt;
    for (const auto& smaller : enumerate_pd_smaller(c, m.bottom())) {
        if (pd_equiv(*smaller, *c)) continue;
        std::size_t k = pdown_nodes(*smaller).size();
        bool typed = any_labeling(m, k, [&](const std::vector<Label>& labels) {
            auto candidate = relabel_pdowns(smaller, labels);
            auto nt = synth_nt(m, ctx, pc, *candidate);
            return nt.ok() && m.is_non_compromised(nt.value());
        });
        if (typed) return false;
    }
    return true;
}

bool least_nt_oracle(const LabelModel& m, const Ctx& ctx, Label pc, const CmdPtr& c, Label nt) {
    std::size_t k = pdown_nodes(*c).size();
    bool counterexample = any_labeling(m, k, [&](const std::vector<Label>& labels) {
        auto synth = synth_nt(m, ctx, pc, *relabel_pdowns(c, labels));
        return synth.ok() && !m.flows_to(nt, synth.value());
    });
    return !counterexample;
}

}  // namespace nmpl
