#include "nmpl/observe.hpp"

namespace nmpl {

Prefix prefix_of(const Run& r, std::size_t n) { return {r.input, r.prefix(n)}; }

Tri tri_and(Tri a, Tri b) {
    if (a == Tri::False || b == Tri::False) return Tri::False;
    if (a == Tri::True && b == Tri::True) return Tri::True;
    return Tri::Unknown;
}

Tri tri_or(Tri a, Tri b) {
    if (a == Tri::True || b == Tri::True) return Tri::True;
    if (a == Tri::False && b == Tri::False) return Tri::False;
    return Tri::Unknown;
}

Tri tri_not(Tri a) {
    if (a == Tri::Unknown) return a;
    return a == Tri::True ? Tri::False : Tri::True;
}

const char* tri_name(Tri t) {
    switch (t) {
        case Tri::False: return "false";
        case Tri::Unknown: return "unknown";
        case Tri::True: return "true";
    }
    return "?";
}

bool mem_equiv(const Ctx& ctx, const DownSet& d, const Mem& a, const Mem& b) {
    for (const auto& [x, l] : ctx) {
        if (!d.contains(l)) continue;
        auto ia = a.find(x), ib = b.find(x);
        if (ia == a.end() || ib == b.end()) {
            if (ia != ib && (ia == a.end()) != (ib == b.end())) return false;
            continue;
        }
        if (ia->second != ib->second) return false;
    }
    return true;
}

bool is_silent(const Ctx& ctx, const DownSet& d, const Event& e) {
    switch (e.kind) {
        case Event::Kind::Silent: return true;
        case Event::Kind::Stp: return false;
        case Event::Kind::PDown: return !d.contains(e.label);
        case Event::Kind::Assign: {
            auto it = ctx.find(e.var);
            if (it == ctx.end()) throw ModelError("assignment event for unbound variable '" + e.var + "'");
            return !d.contains(it->second);
        }
    }
    return true;
}

std::vector<Event> visible_events(const Ctx& ctx, const DownSet& d, const std::vector<Event>& events) {
    std::vector<Event> out;
    for (const auto& e : events)
        if (!is_silent(ctx, d, e)) out.push_back(e);
    return out;
}

bool events_equiv(const Ctx& ctx, const DownSet& d, const std::vector<Event>& a, const std::vector<Event>& b) {
    return visible_events(ctx, d, a) == visible_events(ctx, d, b);
}

bool prefix_equiv(const Ctx& ctx, const DownSet& d, const Prefix& a, const Prefix& b) {
    return mem_equiv(ctx, d, a.input, b.input) && events_equiv(ctx, d, a.events, b.events);
}

bool prefix_leq(const Ctx& ctx, const DownSet& d, const Prefix& a, const Prefix& b) {
    if (!mem_equiv(ctx, d, a.input, b.input)) return false;
    auto va = visible_events(ctx, d, a.events);
    auto vb = visible_events(ctx, d, b.events);
    return va.size() <= vb.size() && std::equal(va.begin(), va.end(), vb.begin());
}

bool prefix_lt(const Ctx& ctx, const DownSet& d, const Prefix& a, const Prefix& b) {
    if (!mem_equiv(ctx, d, a.input, b.input)) return false;
    auto va = visible_events(ctx, d, a.events);
    auto vb = visible_events(ctx, d, b.events);
    return va.size() < vb.size() && std::equal(va.begin(), va.end(), vb.begin());
}

Tri prog(const Ctx& ctx, const DownSet& d, const Prefix& p, const Run& r) {
    if (!mem_equiv(ctx, d, p.input, r.input)) return Tri::False;
    auto vp = visible_events(ctx, d, p.events);
    // Visible events of r in order; one pass over a divergent run's loop
    // shows whether the visible stream is infinite.
    std::vector<Event> vr = visible_events(ctx, d, r.events);
    bool infinite = false;
    if (r.divergent()) {
        for (std::size_t k = *r.cycle_start; k < r.events.size(); ++k)
            if (!is_silent(ctx, d, r.events[k])) infinite = true;
        if (infinite) {
            // Unroll loops until the stream is longer than p's.
            std::size_t k = r.events.size();
            while (vr.size() <= vp.size()) {
                const Event& e = r.event_at(k++);
                if (!is_silent(ctx, d, e)) vr.push_back(e);
            }
        }
    }
    std::size_t common = std::min(vp.size(), vr.size());
    if (!std::equal(vp.begin(), vp.begin() + static_cast<std::ptrdiff_t>(common), vr.begin())) return Tri::False;
    if (vr.size() > vp.size()) return Tri::True;
    if (r.classified()) return Tri::False;
    return Tri::Unknown;
}

}  // namespace nmpl
