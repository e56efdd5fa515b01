#include "nmpl/hyper.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace nmpl {

const char* property_name(Property p) {
    switch (p) {
        case Property::PSNI: return "psni";
        case Property::PINI: return "pini";
        case Property::LFP: return "lfp";
        case Property::PSRD: return "psrd";
        case Property::PIRD: return "pird";
        case Property::RPL: return "rpl";
        case Property::PSTE: return "pste";
        case Property::PITE: return "pite";
        case Property::TPC: return "tpc";
        case Property::PSNMIF: return "psnmif";
        case Property::PINMIF: return "pinmif";
        case Property::NMPL: return "nmpl";
    }
    return "?";
}

std::optional<Property> parse_property(std::string_view name) {
    for (int i = 0; i <= static_cast<int>(Property::NMPL); ++i) {
        auto p = static_cast<Property>(i);
        if (name == property_name(p)) return p;
    }
    return std::nullopt;
}

bool is_two_trace(Property p) { return p == Property::PSNI || p == Property::PINI || p == Property::LFP; }

bool is_dual(Property p) { return p == Property::PSTE || p == Property::PITE || p == Property::TPC; }

std::vector<Property> components_of(Property p) {
    switch (p) {
        case Property::PSNMIF: return {Property::PSRD, Property::PSTE};
        case Property::PINMIF: return {Property::PIRD, Property::PITE};
        case Property::NMPL: return {Property::RPL, Property::TPC};
        default: return {p};
    }
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Holds: return "holds";
        case Outcome::Violated: return "violated";
        case Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

Verdict combine(const std::vector<Verdict>& parts) {
    Verdict out;
    for (const auto& v : parts) {
        out.unknown_count += v.unknown_count;
        if (v.outcome == Outcome::Violated && out.outcome != Outcome::Violated) {
            out.outcome = Outcome::Violated;
            out.witness = v.witness;
        } else if (v.outcome == Outcome::Inconclusive && out.outcome == Outcome::Holds) {
            out.outcome = Outcome::Inconclusive;
        }
    }
    if (out.outcome == Outcome::Holds && out.unknown_count > 0) out.outcome = Outcome::Inconclusive;
    return out;
}

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

// Inputs as the tuple of values an observer can see, for grouping runs into
// equivalence classes.
std::vector<std::uint64_t> observed_key(const Mem& in, const Ctx& ctx, const DownSet& d) {
    std::vector<std::uint64_t> key;
    for (const auto& [x, l] : ctx) {
        if (!d.contains(l)) continue;
        auto it = in.find(x);
        key.push_back(it == in.end() ? std::numeric_limits<std::uint64_t>::max() : it->second);
    }
    return key;
}

std::vector<std::size_t> class_ids(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& d) {
    std::map<std::vector<std::uint64_t>, std::size_t> ids;
    std::vector<std::size_t> out;
    for (const auto& r : runs) out.push_back(ids.emplace(observed_key(r.input, ctx, d), ids.size()).first->second);
    return out;
}

template <class F>
void for_each_quad(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t, F&& f) {
    auto pid = class_ids(runs, ctx, p);
    auto tid = class_ids(runs, ctx, t);
    std::map<std::size_t, std::vector<std::size_t>> by_p, by_t;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> by_pt;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        by_p[pid[i]].push_back(i);
        by_t[tid[i]].push_back(i);
        by_pt[{pid[i], tid[i]}].push_back(i);
    }
    for (std::size_t t11 = 0; t11 < runs.size(); ++t11)
        for (std::size_t t21 : by_p[pid[t11]])
            for (std::size_t t12 : by_t[tid[t11]]) {
                auto it = by_pt.find({pid[t12], tid[t21]});
                if (it == by_pt.end()) continue;
                for (std::size_t t22 : it->second)
                    if (!f(Quad{t11, t12, t21, t22})) return;
            }
}

// A run's visible-event stream at one observer. Divergent runs repeat
// events[cs, end) forever, so positions and counts extend periodically.
struct Stream {
    const Run* run = nullptr;
    bool known = false;
    std::vector<std::size_t> pos;  // raw indices of visible recorded events
    std::vector<std::size_t> cnt;  // cnt[n]: visible among the first n recorded events
    std::size_t stem_vis = 0, loop_vis = 0, cs = 0, loop_len = 0;

    std::size_t length() const { return loop_vis > 0 ? kInf : pos.size(); }

    // Raw index of visible event k; k < length().
    std::size_t pos_of(std::size_t k) const {
        if (k < pos.size()) return pos[k];
        std::size_t kk = k - stem_vis;
        return pos[stem_vis + kk % loop_vis] + (kk / loop_vis) * loop_len;
    }

    // Visible events among the first n raw events.
    std::size_t count_before(std::size_t n) const {
        if (n < cnt.size()) return cnt[n];
        std::size_t q = (n - cs) / loop_len, rem = (n - cs) % loop_len;
        return stem_vis + q * loop_vis + (cnt[cs + rem] - cnt[cs]);
    }

    const Event& vis(std::size_t k) const { return run->event_at(pos_of(k)); }

    // Shortest raw prefix holding k visible events.
    std::size_t shortest_with(std::size_t k) const { return k == 0 ? 0 : pos_of(k - 1) + 1; }
};

Stream make_stream(const Run& r, const Ctx& ctx, const DownSet& d) {
    Stream s;
    s.run = &r;
    s.known = r.classified();
    s.cnt.assign(r.events.size() + 1, 0);
    for (std::size_t k = 0; k < r.events.size(); ++k) {
        bool visible = !is_silent(ctx, d, r.events[k]);
        if (visible) s.pos.push_back(k);
        s.cnt[k + 1] = s.cnt[k] + (visible ? 1 : 0);
    }
    if (r.divergent()) {
        s.cs = *r.cycle_start;
        s.loop_len = r.loop_length();
        s.stem_vis = s.cnt[s.cs];
        s.loop_vis = s.cnt.back() - s.stem_vis;
    } else {
        s.stem_vis = s.pos.size();
    }
    return s;
}

// Streams of every run at one observer plus a memo of pairwise
// longest-common-prefix lengths.
class Observer {
  public:
    Observer(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& d) : n_(runs.size()) {
        for (const auto& r : runs) streams_.push_back(make_stream(r, ctx, d));
        lcp_.assign(n_ * n_, kUnset);
    }

    const Stream& operator[](std::size_t i) const { return streams_[i]; }

    std::size_t lcp(std::size_t i, std::size_t j) {
        std::size_t& slot = lcp_[i * n_ + j];
        if (slot == kUnset) slot = lcp_[j * n_ + i] = compute(streams_[i], streams_[j]);
        return slot;
    }

  private:
    static constexpr std::size_t kUnset = kInf - 1;

    static std::size_t compute(const Stream& a, const Stream& b) {
        std::size_t la = a.length(), lb = b.length();
        std::size_t limit;
        if (la == kInf && lb == kInf)
            limit = std::max(a.stem_vis, b.stem_vis) + std::lcm(a.loop_vis, b.loop_vis);
        else
            limit = std::min(la, lb);
        for (std::size_t k = 0; k < limit; ++k)
            if (!(a.vis(k) == b.vis(k))) return k;
        // Eventually periodic streams agreeing this far agree forever.
        return (la == kInf && lb == kInf) ? kInf : limit;
    }

    std::size_t n_;
    std::vector<Stream> streams_;
    std::vector<std::size_t> lcp_;
};

Verdict finish(Verdict v) {
    if (v.outcome == Outcome::Holds && v.unknown_count > 0) v.outcome = Outcome::Inconclusive;
    return v;
}

Verdict violated(Property p, std::vector<std::size_t> runs, std::vector<std::size_t> prefixes, std::size_t unknown) {
    Verdict v;
    v.outcome = Outcome::Violated;
    v.witness = Witness{p, std::move(runs), std::move(prefixes)};
    v.unknown_count = unknown;
    return v;
}

// PSNI, PINI, LFP over all ordered D-equivalent pairs.
//
// Writing L for the common-prefix length of the visible streams v1, v2:
// PSNI fails iff |v1| > L, PINI iff |v1| > L and |v2| > L, LFP iff |v1| = L
// and |v2| > L.
Verdict check_two(Property prop, const std::vector<Run>& runs, const Ctx& ctx, const DownSet& d) {
    Observer obs(runs, ctx, d);
    auto ids = class_ids(runs, ctx, d);
    Verdict v;
    for (std::size_t i = 0; i < runs.size(); ++i)
        for (std::size_t j = 0; j < runs.size(); ++j) {
            if (ids[i] != ids[j]) continue;
            const Stream &s1 = obs[i], &s2 = obs[j];
            if (!s1.known || !s2.known) {
                ++v.unknown_count;
                continue;
            }
            std::size_t l = obs.lcp(i, j);
            if (l == kInf) continue;
            std::size_t n1 = s1.length(), n2 = s2.length();
            switch (prop) {
                case Property::PSNI:
                    if (n1 > l) return violated(prop, {i, j}, {s1.shortest_with(l + 1)}, v.unknown_count);
                    break;
                case Property::PINI:
                    if (n1 > l && n2 > l)
                        return violated(prop, {i, j}, {s1.shortest_with(l + 1), s2.shortest_with(l + 1)},
                                        v.unknown_count);
                    break;
                case Property::LFP:
                    if (n1 == l && n2 > l)
                        return violated(prop, {i, j}, {s1.shortest_with(l), s2.shortest_with(l + 1)},
                                        v.unknown_count);
                    break;
                default: break;
            }
        }
    return finish(v);
}

// PSRD, PIRD, RPL for one attacker frame (P, T).
//
// For a quad, let B be the P-common prefix of t12 and t22. A conclusion can
// only fail for a p12 showing more than B P-events; the first such prefix
// fixes the T-count j0 that p must share with it. The premise at j0 needs
// every t11 prefix with T-count j0 to stay within the P-common prefix A of
// t11 and t21. PIRD further needs t22 to diverge from t12 visibly, RPL needs
// t22 to stop exactly at B.
Verdict check_rd(Property prop, Property label, const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p,
                 const DownSet& t) {
    Observer op(runs, ctx, p), ot(runs, ctx, t);
    Verdict v;
    std::optional<Verdict> hit;
    for_each_quad(runs, ctx, p, t, [&](const Quad& q) {
        if (!op[q.t11].known || !op[q.t12].known || !op[q.t21].known || !op[q.t22].known) {
            ++v.unknown_count;
            return true;
        }
        std::size_t b_lcp = op.lcp(q.t12, q.t22);
        if (b_lcp == kInf) return true;
        const Stream& p12 = op[q.t12];
        if (p12.length() <= b_lcp) return true;
        std::size_t n1 = p12.pos_of(b_lcp) + 1;
        std::size_t j0 = ot[q.t12].count_before(n1);
        std::size_t lt = ot.lcp(q.t11, q.t12);
        if (lt != kInf && j0 > lt) return true;
        const Stream& t11 = ot[q.t11];
        std::size_t reach = t11.length() > j0 ? op[q.t11].count_before(t11.pos_of(j0)) : op[q.t11].length();
        std::size_t a_lcp = op.lcp(q.t11, q.t21);
        if (a_lcp != kInf && reach > a_lcp) return true;

        std::size_t pfx = t11.shortest_with(j0);
        std::vector<std::size_t> quad{q.t11, q.t12, q.t21, q.t22};
        const Stream& p22 = op[q.t22];
        switch (prop) {
            case Property::PSRD: hit = violated(label, quad, {pfx, n1}, 0); break;
            case Property::PIRD:
                if (p22.length() > b_lcp) hit = violated(label, quad, {pfx, n1, p22.shortest_with(b_lcp + 1)}, 0);
                break;
            case Property::RPL:
                if (p22.length() == b_lcp) hit = violated(label, quad, {pfx, n1, p22.shortest_with(b_lcp)}, 0);
                break;
            default: break;
        }
        return !hit;
    });
    if (hit) {
        hit->unknown_count = v.unknown_count;
        return *hit;
    }
    return finish(v);
}

Property rd_of(Property dual) {
    switch (dual) {
        case Property::PSTE: return Property::PSRD;
        case Property::PITE: return Property::PIRD;
        case Property::TPC: return Property::RPL;
        default: return dual;
    }
}

}  // namespace

std::vector<Quad> enumerate_quads(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    std::vector<Quad> out;
    for_each_quad(runs, ctx, p, t, [&](const Quad& q) {
        out.push_back(q);
        return true;
    });
    return out;
}

std::vector<Quad> enumerate_quads(const std::vector<Run>& runs, const Ctx& ctx, const LabelModel& m,
                                  const Attacker& a) {
    return enumerate_quads(runs, ctx, a.public_set(m), a.trusted_set(m));
}

Verdict check_psni(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& d) {
    return check_two(Property::PSNI, runs, ctx, d);
}
Verdict check_pini(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& d) {
    return check_two(Property::PINI, runs, ctx, d);
}
Verdict check_lfp(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& d) {
    return check_two(Property::LFP, runs, ctx, d);
}

Verdict check_psrd(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    return check_rd(Property::PSRD, Property::PSRD, runs, ctx, p, t);
}
Verdict check_pird(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    return check_rd(Property::PIRD, Property::PIRD, runs, ctx, p, t);
}
Verdict check_rpl(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    return check_rd(Property::RPL, Property::RPL, runs, ctx, p, t);
}
Verdict check_pste(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    return check_rd(Property::PSRD, Property::PSTE, runs, ctx, t, p);
}
Verdict check_pite(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    return check_rd(Property::PIRD, Property::PITE, runs, ctx, t, p);
}
Verdict check_tpc(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    return check_rd(Property::RPL, Property::TPC, runs, ctx, t, p);
}
Verdict check_psnmif(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    return combine({check_psrd(runs, ctx, p, t), check_pste(runs, ctx, p, t)});
}
Verdict check_pinmif(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    return combine({check_pird(runs, ctx, p, t), check_pite(runs, ctx, p, t)});
}
Verdict check_nmpl(const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    return combine({check_rpl(runs, ctx, p, t), check_tpc(runs, ctx, p, t)});
}

Verdict check_at(Property prop, const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    switch (prop) {
        case Property::PSNI: return check_psni(runs, ctx, p);
        case Property::PINI: return check_pini(runs, ctx, p);
        case Property::LFP: return check_lfp(runs, ctx, p);
        case Property::PSRD: return check_psrd(runs, ctx, p, t);
        case Property::PIRD: return check_pird(runs, ctx, p, t);
        case Property::RPL: return check_rpl(runs, ctx, p, t);
        case Property::PSTE: return check_pste(runs, ctx, p, t);
        case Property::PITE: return check_pite(runs, ctx, p, t);
        case Property::TPC: return check_tpc(runs, ctx, p, t);
        case Property::PSNMIF: return check_psnmif(runs, ctx, p, t);
        case Property::PINMIF: return check_pinmif(runs, ctx, p, t);
        case Property::NMPL: return check_nmpl(runs, ctx, p, t);
    }
    return {};
}

Verdict check_at(Property prop, const std::vector<Run>& runs, const Ctx& ctx, const LabelModel& m,
                 const Attacker& a) {
    return check_at(prop, runs, ctx, a.public_set(m), a.trusted_set(m));
}

std::string describe(const DownSet& d, const LabelModel& m) {
    std::string s = "{";
    bool first = true;
    for (Label l : d.labels()) {
        if (!first) s += ",";
        first = false;
        s += m.name(l);
    }
    return s + "}";
}

namespace {

struct Component {
    std::string name;
    DownSet p, t;
};

std::vector<Component> components(Property prop, const LabelModel& m) {
    std::vector<Component> out;
    if (is_two_trace(prop)) {
        for (const auto& d : m.enumerate_downsets()) out.push_back({describe(d, m), d, d});
    } else {
        for (const auto& a : m.enumerate_attackers()) out.push_back({a.describe(m), a.public_set(m), a.trusted_set(m)});
    }
    return out;
}

Report assemble(Property prop, const std::vector<Component>& comps, std::vector<Verdict> verdicts) {
    Report r;
    r.property = prop;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (verdicts[i].outcome == Outcome::Violated && !r.witness_component) r.witness_component = i;
        r.components.push_back({comps[i].name, verdicts[i]});
    }
    r.overall = combine(verdicts);
    return r;
}

}  // namespace

Report check_all(const std::vector<Run>& runs, const Ctx& ctx, Property prop, const LabelModel& m) {
    auto comps = components(prop, m);
    std::vector<Verdict> verdicts(comps.size());
    const auto n = static_cast<std::int64_t>(comps.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& c = comps[static_cast<std::size_t>(i)];
        verdicts[static_cast<std::size_t>(i)] = check_at(prop, runs, ctx, c.p, c.t);
    }
    return assemble(prop, comps, std::move(verdicts));
}

Report check_all_serial(const std::vector<Run>& runs, const Ctx& ctx, Property prop, const LabelModel& m) {
    auto comps = components(prop, m);
    std::vector<Verdict> verdicts;
    for (const auto& c : comps) verdicts.push_back(check_at(prop, runs, ctx, c.p, c.t));
    return assemble(prop, comps, std::move(verdicts));
}

nlohmann::json witness_to_json(const Witness& w, const std::vector<Run>& runs, const LabelModel& m) {
    static const char* const two_runs[] = {"t1", "t2"};
    static const char* const four_runs[] = {"t11", "t12", "t21", "t22"};
    bool two = is_two_trace(w.property);
    nlohmann::json j;
    j["property"] = property_name(w.property);
    if (is_dual(w.property)) j["frame"] = "P and T exchanged";
    j["runs"] = nlohmann::json::array();
    for (std::size_t k = 0; k < w.runs.size(); ++k) {
        const Run& r = runs.at(w.runs[k]);
        nlohmann::json in = nlohmann::json::object();
        for (const auto& [x, v] : r.input) in[x] = v;
        j["runs"].push_back({{"role", two ? two_runs[k] : four_runs[k]},
                             {"index", w.runs[k]},
                             {"input", in},
                             {"status", status_name(r.status)}});
    }
    // Which run each prefix is cut from.
    std::vector<std::pair<const char*, std::size_t>> roles;
    if (two)
        roles = {{"p1", 0}, {"p2", 1}};
    else
        roles = {{"p", 0}, {"p12", 1}, {"p22", 3}};
    j["prefixes"] = nlohmann::json::array();
    for (std::size_t k = 0; k < w.prefixes.size(); ++k) {
        const Run& r = runs.at(w.runs[roles[k].second]);
        nlohmann::json events = nlohmann::json::array();
        for (const auto& e : r.prefix(w.prefixes[k])) events.push_back(to_string(e, m));
        j["prefixes"].push_back({{"role", roles[k].first},
                                 {"run", two ? two_runs[roles[k].second] : four_runs[roles[k].second]},
                                 {"length", w.prefixes[k]},
                                 {"events", events}});
    }
    return j;
}

nlohmann::json report_to_json(const Report& r, const std::vector<Run>& runs, const LabelModel& m) {
    nlohmann::json j;
    j["property"] = property_name(r.property);
    j["outcome"] = outcome_name(r.overall.outcome);
    j["unknown_count"] = r.overall.unknown_count;
    j["components"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.components.size(); ++i) {
        const auto& c = r.components[i];
        nlohmann::json cj{{"index", i},
                          {"component", c.component},
                          {"outcome", outcome_name(c.verdict.outcome)},
                          {"unknown_count", c.verdict.unknown_count}};
        if (c.verdict.witness) cj["witness"] = witness_to_json(*c.verdict.witness, runs, m);
        j["components"].push_back(cj);
    }
    if (r.witness_component) {
        j["witness_component"] = *r.witness_component;
        j["witness"] = witness_to_json(*r.overall.witness, runs, m);
    }
    return j;
}

namespace reference {

namespace {

// A run's visible events at one observer, unrolled far enough for the
// window, plus the visible count of each raw prefix in the window.
struct View {
    std::vector<Event> vis;
    std::size_t length = 0;  // kInf when infinite
    std::vector<std::size_t> count_at;
};

// A prefix named by run and raw length.
struct Pfx {
    std::size_t run;
    std::size_t len;
};

struct Frame {
    const std::vector<Run>& runs;
    const Ctx& ctx;
    std::vector<DownSet> observers;
    std::vector<std::size_t> window;           // per run
    std::vector<std::vector<View>> views;      // [observer][run]
};

std::size_t visible_in(const Ctx& ctx, const DownSet& d, const Run& r, std::size_t from, std::size_t to) {
    std::size_t n = 0;
    for (std::size_t k = from; k < to; ++k) n += is_silent(ctx, d, r.events[k]) ? 0 : 1;
    return n;
}

Frame make_frame(const std::vector<Run>& runs, const Ctx& ctx, std::vector<DownSet> observers,
                 const std::vector<Pfx>& at_least = {}) {
    Frame f{runs, ctx, std::move(observers), {}, {}};
    f.window.assign(runs.size(), 0);
    for (std::size_t i = 0; i < runs.size(); ++i) f.window[i] = runs[i].events.size();
    for (const auto& d : f.observers) {
        std::size_t stem = 0, period = 1;
        for (const auto& r : runs) {
            if (!r.classified()) continue;
            std::size_t cs = r.divergent() ? *r.cycle_start : r.events.size();
            stem = std::max(stem, visible_in(ctx, d, r, 0, cs));
            if (r.divergent()) {
                std::size_t lv = visible_in(ctx, d, r, cs, r.events.size());
                if (lv > 0) period = std::min<std::size_t>(std::lcm(period, lv), 4096);
            }
        }
        std::size_t target = stem + 2 * period + 1;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const Run& r = runs[i];
            if (!r.divergent()) continue;
            std::size_t cs = *r.cycle_start;
            std::size_t sv = visible_in(ctx, d, r, 0, cs), lv = visible_in(ctx, d, r, cs, r.events.size());
            std::size_t k = 1;
            if (lv > 0 && target > sv) k = (target - sv + lv - 1) / lv + 1;
            f.window[i] = std::max(f.window[i], cs + k * r.loop_length());
        }
    }
    for (const auto& pf : at_least) f.window[pf.run] = std::max(f.window[pf.run], pf.len);
    for (const auto& d : f.observers) {
        std::vector<View> vs(runs.size());
        std::size_t cap = 0;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            View& v = vs[i];
            const Run& r = runs[i];
            v.count_at.assign(f.window[i] + 1, 0);
            for (std::size_t n = 0; n < f.window[i]; ++n) {
                const Event& e = r.event_at(n);
                bool visible = !is_silent(ctx, d, e);
                if (visible) v.vis.push_back(e);
                v.count_at[n + 1] = v.count_at[n] + (visible ? 1 : 0);
            }
            bool infinite = r.divergent() && visible_in(ctx, d, r, *r.cycle_start, r.events.size()) > 0;
            v.length = infinite ? kInf : v.vis.size();
            cap = std::max(cap, v.vis.size());
        }
        // Infinite streams get one event beyond anything a window can show.
        for (std::size_t i = 0; i < runs.size(); ++i) {
            View& v = vs[i];
            if (v.length != kInf) continue;
            for (std::size_t n = f.window[i]; v.vis.size() <= cap; ++n) {
                const Event& e = runs[i].event_at(n);
                if (!is_silent(ctx, d, e)) v.vis.push_back(e);
            }
        }
        f.views.push_back(std::move(vs));
    }
    return f;
}

class Rel {
  public:
    Rel(const Frame& f, std::size_t obs) : f_(f), obs_(obs) {}

    std::size_t count(Pfx p) const { return view(p.run).count_at.at(p.len); }

    bool inputs(std::size_t a, std::size_t b) const {
        return mem_equiv(f_.ctx, f_.observers[obs_], f_.runs[a].input, f_.runs[b].input);
    }

    // Visible lists of two prefixes given by counts agree on the first k.
    bool agree(std::size_t ra, std::size_t rb, std::size_t k) const {
        const auto& va = view(ra).vis;
        const auto& vb = view(rb).vis;
        return std::equal(va.begin(), va.begin() + static_cast<std::ptrdiff_t>(k), vb.begin());
    }

    bool equiv_counts(std::size_t ra, std::size_t ca, std::size_t rb, std::size_t cb) const {
        return inputs(ra, rb) && ca == cb && agree(ra, rb, ca);
    }
    bool equiv(Pfx a, Pfx b) const { return equiv_counts(a.run, count(a), b.run, count(b)); }
    bool leq(Pfx a, Pfx b) const {
        std::size_t ca = count(a), cb = count(b);
        return inputs(a.run, b.run) && ca <= cb && agree(a.run, b.run, ca);
    }
    bool lt(Pfx a, Pfx b) const { return leq(a, b) && count(a) < count(b); }

    // ∃ p' ≤ t. a ≈ p', searching every visible count t can reach.
    bool exists_equiv(Pfx a, std::size_t t) const {
        std::size_t ca = count(a);
        if (ca > view(t).length) return false;
        return equiv_counts(a.run, ca, t, ca);
    }

    Tri progress(Pfx a) const {
        return prog(f_.ctx, f_.observers[obs_], prefix_of(f_.runs[a.run], a.len), f_.runs[a.run]);
    }

  private:
    const View& view(std::size_t run) const { return f_.views[obs_][run]; }

    const Frame& f_;
    std::size_t obs_;
};

std::vector<std::size_t> lengths(const Frame& f, std::size_t run) {
    std::vector<std::size_t> out(f.window[run] + 1);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
}

// Raw prefixes of a run with distinct visible counts at every observer;
// prefixes with equal counts are related identically.
std::vector<std::size_t> distinct_lengths(const Frame& f, std::size_t run) {
    std::vector<std::size_t> out;
    std::vector<std::size_t> last;
    for (std::size_t n : lengths(f, run)) {
        std::vector<std::size_t> key;
        for (const auto& vs : f.views) key.push_back(vs[run].count_at[n]);
        if (key != last) out.push_back(n);
        last = std::move(key);
    }
    return out;
}

enum class Res { Holds, Violated, Unknown };

// Two-trace definitions at a fixed pair and prefix(es).
Res two_at(Property prop, const Rel& rel, std::size_t t1, std::size_t t2, std::size_t n1, std::size_t n2) {
    Pfx p1{t1, n1}, p2{t2, n2};
    switch (prop) {
        case Property::PSNI: return rel.exists_equiv(p1, t2) ? Res::Holds : Res::Violated;
        case Property::PINI: return (rel.leq(p1, p2) || rel.leq(p2, p1)) ? Res::Holds : Res::Violated;
        case Property::LFP: {
            if (!rel.lt(p1, p2)) return Res::Holds;
            Tri pr = rel.progress(p1);
            if (pr == Tri::Unknown) return Res::Unknown;
            return pr == Tri::True ? Res::Holds : Res::Violated;
        }
        default: return Res::Holds;
    }
}

bool premise(const Frame& f, const Rel& rp, const Rel& rt, const Quad& q, std::size_t n) {
    for (std::size_t n11 : distinct_lengths(f, q.t11)) {
        if (!rt.equiv({q.t11, n11}, {q.t11, n})) continue;
        if (!rp.exists_equiv({q.t11, n11}, q.t21)) return false;
    }
    return true;
}

// Conclusion for one p12 (and p22 when the property quantifies over it).
Res rd_conclusion(Property prop, const Rel& rp, const Quad& q, std::size_t n12, std::size_t n22) {
    Pfx p12{q.t12, n12}, p22{q.t22, n22};
    switch (prop) {
        case Property::PSRD: return rp.exists_equiv(p12, q.t22) ? Res::Holds : Res::Violated;
        case Property::PIRD: return (rp.leq(p12, p22) || rp.leq(p22, p12)) ? Res::Holds : Res::Violated;
        case Property::RPL: {
            if (!rp.lt(p22, p12)) return Res::Holds;
            Tri pr = rp.progress(p22);
            if (pr == Tri::Unknown) return Res::Unknown;
            return pr == Tri::True ? Res::Holds : Res::Violated;
        }
        default: return Res::Holds;
    }
}

Verdict rd(Property prop, Property label, const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p,
           const DownSet& t) {
    Frame f = make_frame(runs, ctx, {p, t});
    Rel rp(f, 0), rt(f, 1);
    Verdict v;
    std::optional<Verdict> hit;
    for_each_quad(runs, ctx, p, t, [&](const Quad& q) {
        if (!runs[q.t11].classified() || !runs[q.t12].classified() || !runs[q.t21].classified() ||
            !runs[q.t22].classified()) {
            ++v.unknown_count;
            return true;
        }
        for (std::size_t n : distinct_lengths(f, q.t11)) {
            if (!premise(f, rp, rt, q, n)) continue;
            for (std::size_t n12 : distinct_lengths(f, q.t12)) {
                if (!rt.equiv({q.t12, n12}, {q.t11, n})) continue;
                std::vector<std::size_t> n22s{0};
                if (prop != Property::PSRD) n22s = distinct_lengths(f, q.t22);
                for (std::size_t n22 : n22s) {
                    Res r = rd_conclusion(prop, rp, q, n12, n22);
                    if (r == Res::Unknown) ++v.unknown_count;
                    if (r != Res::Violated) continue;
                    std::vector<std::size_t> pre{n, n12};
                    if (prop != Property::PSRD) pre.push_back(n22);
                    hit = violated(label, {q.t11, q.t12, q.t21, q.t22}, pre, 0);
                    return false;
                }
            }
        }
        return true;
    });
    if (hit) {
        hit->unknown_count = v.unknown_count;
        return *hit;
    }
    return finish(v);
}

Verdict two(Property prop, const std::vector<Run>& runs, const Ctx& ctx, const DownSet& d) {
    Frame f = make_frame(runs, ctx, {d});
    Rel rel(f, 0);
    Verdict v;
    for (std::size_t i = 0; i < runs.size(); ++i)
        for (std::size_t j = 0; j < runs.size(); ++j) {
            if (!rel.inputs(i, j)) continue;
            if (!runs[i].classified() || !runs[j].classified()) {
                ++v.unknown_count;
                continue;
            }
            for (std::size_t n1 : distinct_lengths(f, i)) {
                std::vector<std::size_t> n2s{0};
                if (prop != Property::PSNI) n2s = distinct_lengths(f, j);
                for (std::size_t n2 : n2s) {
                    Res r = two_at(prop, rel, i, j, n1, n2);
                    if (r == Res::Unknown) ++v.unknown_count;
                    if (r != Res::Violated) continue;
                    std::vector<std::size_t> pre{n1};
                    if (prop != Property::PSNI) pre.push_back(n2);
                    return violated(prop, {i, j}, pre, v.unknown_count);
                }
            }
        }
    return finish(v);
}

}  // namespace

Verdict check_at(Property prop, const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    if (is_two_trace(prop)) return two(prop, runs, ctx, p);
    std::vector<Verdict> parts;
    for (Property c : components_of(prop)) {
        if (is_dual(c))
            parts.push_back(rd(rd_of(c), c, runs, ctx, t, p));
        else
            parts.push_back(rd(c, c, runs, ctx, p, t));
    }
    return combine(parts);
}

bool replay(const Witness& w, const std::vector<Run>& runs, const Ctx& ctx, const DownSet& p, const DownSet& t) {
    if (is_two_trace(w.property)) {
        if (w.runs.size() != 2 || w.prefixes.empty()) return false;
        std::size_t t1 = w.runs[0], t2 = w.runs[1];
        std::vector<Pfx> need{{t1, w.prefixes[0]}};
        if (w.prefixes.size() > 1) need.push_back({t2, w.prefixes[1]});
        Frame f = make_frame(runs, ctx, {p}, need);
        Rel rel(f, 0);
        if (!rel.inputs(t1, t2)) return false;
        if (w.prefixes[0] > f.window[t1]) return false;
        std::size_t n2 = w.prefixes.size() > 1 ? w.prefixes[1] : 0;
        if (n2 > f.window[t2]) return false;
        return two_at(w.property, rel, t1, t2, w.prefixes[0], n2) == Res::Violated;
    }
    if (w.runs.size() != 4 || w.prefixes.size() < 2) return false;
    Property base = rd_of(w.property);
    const DownSet& fp = is_dual(w.property) ? t : p;
    const DownSet& ft = is_dual(w.property) ? p : t;
    Quad q{w.runs[0], w.runs[1], w.runs[2], w.runs[3]};
    std::vector<Pfx> need{{q.t11, w.prefixes[0]}, {q.t12, w.prefixes[1]}};
    if (w.prefixes.size() > 2) need.push_back({q.t22, w.prefixes[2]});
    Frame f = make_frame(runs, ctx, {fp, ft}, need);
    Rel rp(f, 0), rt(f, 1);
    if (!rp.inputs(q.t11, q.t21) || !rp.inputs(q.t12, q.t22) || !rt.inputs(q.t11, q.t12) ||
        !rt.inputs(q.t21, q.t22))
        return false;
    std::size_t n = w.prefixes[0], n12 = w.prefixes[1];
    std::size_t n22 = w.prefixes.size() > 2 ? w.prefixes[2] : 0;
    if (n > f.window[q.t11] || n12 > f.window[q.t12] || n22 > f.window[q.t22]) return false;
    if (!premise(f, rp, rt, q, n)) return false;
    if (!rt.equiv({q.t12, n12}, {q.t11, n})) return false;
    return rd_conclusion(base, rp, q, n12, n22) == Res::Violated;
}

}  // namespace reference

}  // namespace nmpl
