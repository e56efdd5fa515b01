#include "nmpl/interp.hpp"

#include <limits>
#include <sstream>
#include <unordered_map>

#include "nmpl/observe.hpp"

namespace nmpl {

std::string to_string(const Event& e, const LabelModel& m) {
    switch (e.kind) {
        case Event::Kind::Silent: return ".";
        case Event::Kind::Stp: return "stp";
        case Event::Kind::Assign: return "a " + e.var + " " + std::to_string(e.value);
        case Event::Kind::PDown: return "pd " + m.name(e.label);
    }
    return "?";
}

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

}  // namespace

std::uint64_t eval_expr(const Expr& e, const Mem& mem) {
    switch (e.kind) {
        case Expr::Kind::Lit: return e.value;
        case Expr::Kind::Var: {
            auto it = mem.find(e.name);
            if (it == mem.end()) throw EvalError(EvalError::Kind::Unbound, "unbound variable '" + e.name + "'");
            return it->second;
        }
        case Expr::Kind::Bin: break;
    }
    std::uint64_t a = eval_expr(*e.lhs, mem);
    std::uint64_t b = eval_expr(*e.rhs, mem);
    switch (e.op) {
        case BinOp::Add:
            if (a > kMax - b) throw EvalError(EvalError::Kind::Overflow, "addition overflow");
            return a + b;
        case BinOp::Monus: return a > b ? a - b : 0;
        case BinOp::Mul:
            if (a != 0 && b > kMax / a) throw EvalError(EvalError::Kind::Overflow, "multiplication overflow");
            return a * b;
        case BinOp::Eq: return a == b ? 1 : 0;
        case BinOp::Lt: return a < b ? 1 : 0;
        case BinOp::And: return (a != 0 && b != 0) ? 1 : 0;
        case BinOp::Or: return (a != 0 || b != 0) ? 1 : 0;
    }
    return 0;
}

namespace {

StepResult failed(const EvalError& err) {
    StepResult r;
    r.status = err.kind() == EvalError::Kind::Overflow ? StepResult::Status::Overflow : StepResult::Status::Stuck;
    r.detail = err.what();
    return r;
}

StepResult stepped(Event e, CmdPtr next) {
    StepResult r;
    r.event = std::move(e);
    r.next = std::move(next);
    return r;
}

}  // namespace

StepResult step(const CmdPtr& c, Mem& mem) {
    switch (c->kind) {
        case CmdKind::Stop: {
            StepResult r;
            r.status = StepResult::Status::Stuck;
            r.detail = "stop has no successor";
            return r;
        }
        case CmdKind::Skip: return stepped(Event::stp(), Cmd::stop());
        case CmdKind::Assign: {
            std::uint64_t n = 0;
            try {
                n = eval_expr(*c->expr, mem);
            } catch (const EvalError& err) {
                return failed(err);
            }
            mem[c->var] = n;
            return stepped(Event::assign(c->var, n), Cmd::skip(c->span));
        }
        case CmdKind::Seq: {
            if (c->first->kind == CmdKind::Skip) return stepped(Event::silent(), c->second);
            StepResult inner = step(c->first, mem);
            if (inner.status != StepResult::Status::Stepped) return inner;
            inner.next = Cmd::seq(inner.next, c->second, c->span);
            return inner;
        }
        case CmdKind::PDown: {
            if (c->first->kind == CmdKind::Skip) return stepped(Event::pd(c->label), c->first);
            StepResult inner = step(c->first, mem);
            if (inner.status != StepResult::Status::Stepped) return inner;
            inner.next = Cmd::pdown(c->label, inner.next, c->span);
            return inner;
        }
        case CmdKind::If: {
            std::uint64_t g = 0;
            try {
                g = eval_expr(*c->expr, mem);
            } catch (const EvalError& err) {
                return failed(err);
            }
            return stepped(Event::silent(), g != 0 ? c->first : c->second);
        }
        case CmdKind::While: {
            auto unfolded = Cmd::ite(c->expr, Cmd::seq(c->first, c, c->span), Cmd::skip(c->span), c->span);
            return stepped(Event::silent(), unfolded);
        }
    }
    return {};
}

const char* status_name(RunStatus s) {
    switch (s) {
        case RunStatus::Terminated: return "terminated";
        case RunStatus::SilentDivergent: return "silent-divergent";
        case RunStatus::ProductiveDivergent: return "productive-divergent";
        case RunStatus::Unknown: return "unknown";
        case RunStatus::Stuck: return "stuck";
    }
    return "?";
}

const Event& Run::event_at(std::size_t k) const {
    if (k < events.size()) return events[k];
    if (!divergent() || loop_length() == 0) throw std::out_of_range("event index beyond a finite run");
    std::size_t cs = *cycle_start;
    return events[cs + (k - cs) % loop_length()];
}

std::vector<Event> Run::prefix(std::size_t k) const {
    std::vector<Event> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(event_at(i));
    return out;
}

namespace {

// A configuration compared structurally, for cycle detection.
struct Config {
    CmdPtr cmd;
    Mem mem;

    bool operator==(const Config& o) const { return mem == o.mem && equal(cmd, o.cmd); }
};

struct ConfigHash {
    std::size_t operator()(const Config& c) const {
        std::size_t h = c.cmd->hash;
        std::hash<std::string> hs;
        for (const auto& [k, v] : c.mem) {
            h ^= hs(k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

}  // namespace

Run run(const CmdPtr& c, const Mem& input, std::size_t fuel) {
    Run r;
    r.input = input;
    CmdPtr cur = c;
    Mem mem = input;
    std::unordered_map<Config, std::size_t, ConfigHash> seen;
    for (std::size_t i = 0; i < fuel; ++i) {
        if (cur->kind == CmdKind::Stop) {
            r.status = RunStatus::Terminated;
            return r;
        }
        auto [it, fresh] = seen.emplace(Config{cur, mem}, r.events.size());
        if (!fresh) {
            r.cycle_start = it->second;
            bool silent = true;
            for (std::size_t k = it->second; k < r.events.size(); ++k)
                if (r.events[k].kind != Event::Kind::Silent) silent = false;
            r.status = silent ? RunStatus::SilentDivergent : RunStatus::ProductiveDivergent;
            return r;
        }
        StepResult s = step(cur, mem);
        if (s.status == StepResult::Status::Stuck) {
            r.status = RunStatus::Stuck;
            r.detail = s.detail;
            return r;
        }
        if (s.status == StepResult::Status::Overflow) {
            r.status = RunStatus::Unknown;
            r.detail = s.detail;
            return r;
        }
        r.events.push_back(std::move(s.event));
        cur = std::move(s.next);
    }
    if (cur->kind == CmdKind::Stop) {
        r.status = RunStatus::Terminated;
        return r;
    }
    r.status = RunStatus::Unknown;
    r.detail = "fuel exhausted";
    return r;
}

std::vector<Mem> enumerate_memories(const Ctx& ctx, const std::vector<std::uint64_t>& domain) {
    std::vector<Mem> out;
    if (domain.empty()) return out;
    std::vector<std::string> vars;
    for (const auto& [x, l] : ctx) vars.push_back(x);
    std::vector<std::size_t> digits(vars.size(), 0);
    while (true) {
        Mem m;
        for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = domain[digits[i]];
        out.push_back(std::move(m));
        std::size_t i = vars.size();
        while (i > 0) {
            --i;
            if (++digits[i] < domain.size()) break;
            digits[i] = 0;
            if (i == 0) return out;
        }
        if (vars.empty()) return out;
    }
}

std::vector<Run> behav(const CmdPtr& c, const Ctx& ctx, const std::vector<std::uint64_t>& domain, std::size_t fuel) {
    auto inputs = enumerate_memories(ctx, domain);
    std::vector<Run> out(inputs.size());
    const auto n = static_cast<std::int64_t>(inputs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = run(c, inputs[static_cast<std::size_t>(i)], fuel);
    return out;
}

std::vector<Run> behav_serial(const CmdPtr& c, const Ctx& ctx, const std::vector<std::uint64_t>& domain,
                              std::size_t fuel) {
    std::vector<Run> out;
    for (const auto& in : enumerate_memories(ctx, domain)) out.push_back(run(c, in, fuel));
    return out;
}

BridgeResult bridge_step(const CmdPtr& c, const Mem& mem, const Ctx& ctx, const DownSet& d, std::size_t fuel) {
    BridgeResult b;
    CmdPtr cur = c;
    Mem m = mem;
    std::unordered_map<Config, std::size_t, ConfigHash> seen;
    for (std::size_t i = 0; i < fuel; ++i) {
        if (cur->kind == CmdKind::Stop) {
            b.kind = BridgeResult::Kind::Stuck;
            break;
        }
        if (!seen.emplace(Config{cur, m}, i).second) {
            b.kind = BridgeResult::Kind::SilentlyDiverges;
            break;
        }
        StepResult s = step(cur, m);
        if (s.status != StepResult::Status::Stepped) {
            b.kind = s.status == StepResult::Status::Stuck ? BridgeResult::Kind::Stuck : BridgeResult::Kind::Unknown;
            break;
        }
        b.steps = i + 1;
        cur = s.next;
        if (!is_silent(ctx, d, s.event)) {
            b.kind = BridgeResult::Kind::Bridged;
            b.event = s.event;
            break;
        }
    }
    b.next = cur;
    b.mem = std::move(m);
    return b;
}

std::string dump_run(const Run& r, const LabelModel& m) {
    std::ostringstream os;
    os << "input";
    for (const auto& [x, v] : r.input) os << ' ' << x << '=' << v;
    os << '\n';
    for (std::size_t k = 0; k < r.events.size(); ++k) {
        if (r.cycle_start && *r.cycle_start == k) os << "cycle\n";
        os << to_string(r.events[k], m) << '\n';
    }
    os << "status " << status_name(r.status);
    if (r.cycle_start) os << " cycle-start " << *r.cycle_start;
    if (!r.detail.empty()) os << " (" << r.detail << ')';
    os << '\n';
    return os.str();
}

}  // namespace nmpl
