#include "nmpl/labels.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace nmpl {

namespace {

constexpr std::uint16_t kMissing = 0xFFFF;

std::uint16_t find_index(const std::vector<std::string>& names, std::string_view name, const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<std::uint16_t>(i);
    throw ModelError(std::string("unknown ") + what + " element '" + std::string(name) + "'");
}

std::vector<char> order_matrix(const std::vector<std::string>& names,
                               const std::vector<std::pair<std::string, std::string>>& pairs, bool close,
                               const char* what) {
    std::size_t n = names.size();
    std::vector<char> leq(n * n, 0);
    for (const auto& [lo, hi] : pairs) leq[find_index(names, lo, what) * n + find_index(names, hi, what)] = 1;
    if (close) {
        for (std::size_t i = 0; i < n; ++i) leq[i * n + i] = 1;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                if (leq[i * n + k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (leq[k * n + j]) leq[i * n + j] = 1;
    }
    return leq;
}

// Least element of `cands` under `leq`, or -1.
int least_of(std::size_t n, const std::vector<char>& leq, const std::vector<std::size_t>& cands) {
    for (std::size_t u : cands) {
        bool least = true;
        for (std::size_t v : cands)
            if (!leq[u * n + v]) {
                least = false;
                break;
            }
        if (least) return static_cast<int>(u);
    }
    return -1;
}

int greatest_of(std::size_t n, const std::vector<char>& leq, const std::vector<std::size_t>& cands) {
    for (std::size_t u : cands) {
        bool greatest = true;
        for (std::size_t v : cands)
            if (!leq[v * n + u]) {
                greatest = false;
                break;
            }
        if (greatest) return static_cast<int>(u);
    }
    return -1;
}

void bound_tables(std::size_t n, const std::vector<char>& leq, std::vector<int>& joins, std::vector<int>& meets,
                  int& bot, int& top) {
    joins.assign(n * n, -1);
    meets.assign(n * n, -1);
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            std::vector<std::size_t> ups, downs;
            for (std::size_t c = 0; c < n; ++c) {
                if (leq[a * n + c] && leq[b * n + c]) ups.push_back(c);
                if (leq[c * n + a] && leq[c * n + b]) downs.push_back(c);
            }
            joins[a * n + b] = least_of(n, leq, ups);
            meets[a * n + b] = greatest_of(n, leq, downs);
        }
    bot = least_of(n, leq, all);
    top = greatest_of(n, leq, all);
}

void check_order(const std::string& comp, const std::vector<std::string>& names, const std::vector<char>& leq,
                 const std::vector<int>& joins, const std::vector<int>& meets, int bot, int top,
                 ValidationReport& out) {
    std::size_t n = names.size();
    for (std::size_t a = 0; a < n; ++a)
        if (!leq[a * n + a]) out.push_back({"reflexivity", comp + " order lacks " + names[a] + " <= " + names[a]});
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (leq[a * n + b] && leq[b * n + a])
                out.push_back({"antisymmetry", comp + " order has " + names[a] + " and " + names[b] + " equivalent"});
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (leq[a * n + b] && leq[b * n + c] && !leq[a * n + c])
                    out.push_back({"transitivity", comp + " order has " + names[a] + " <= " + names[b] + " <= " +
                                                       names[c] + " but not " + names[a] + " <= " + names[c]});
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            if (joins[a * n + b] < 0)
                out.push_back({"join-existence", comp + " elements " + names[a] + ", " + names[b] + " lack a join"});
            if (meets[a * n + b] < 0)
                out.push_back({"meet-existence", comp + " elements " + names[a] + ", " + names[b] + " lack a meet"});
        }
    if (n == 0) out.push_back({"nonempty", comp + " has no elements"});
    if (n > 0 && bot < 0) out.push_back({"bottom", comp + " order has no least element"});
    if (n > 0 && top < 0) out.push_back({"top", comp + " order has no greatest element"});
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

LabelModel LabelModel::from_spec(const ModelSpec& spec, bool close_orders) {
    LabelModel m;
    m.conf_names_ = spec.conf_elems;
    m.integ_names_ = spec.integ_elems;
    auto dupes = [](std::vector<std::string> v, const char* what) {
        std::sort(v.begin(), v.end());
        auto it = std::adjacent_find(v.begin(), v.end());
        if (it != v.end()) throw ModelError(std::string("duplicate ") + what + " element '" + *it + "'");
    };
    dupes(m.conf_names_, "confidentiality");
    dupes(m.integ_names_, "integrity");
    if (m.conf_names_.size() >= kMissing || m.integ_names_.size() >= kMissing) throw ModelError("model too large");

    m.conf_leq_ = order_matrix(m.conf_names_, spec.conf_order, close_orders, "confidentiality");
    m.integ_leq_ = order_matrix(m.integ_names_, spec.integ_order, close_orders, "integrity");

    m.voice_.assign(m.conf_names_.size(), kMissing);
    for (const auto& [c, i] : spec.voice)
        m.voice_[find_index(m.conf_names_, c, "confidentiality")] = find_index(m.integ_names_, i, "integrity");
    m.view_.assign(m.integ_names_.size(), kMissing);
    for (const auto& [i, c] : spec.view)
        m.view_[find_index(m.integ_names_, i, "integrity")] = find_index(m.conf_names_, c, "confidentiality");

    m.build_bounds();
    return m;
}

void LabelModel::build_bounds() {
    bound_tables(conf_count(), conf_leq_, conf_join_, conf_meet_, conf_bot_, conf_top_);
    bound_tables(integ_count(), integ_leq_, integ_join_, integ_meet_, integ_bot_, integ_top_);
}

LabelModel LabelModel::from_json(const nlohmann::json& doc) {
    ModelSpec spec;
    try {
        spec.conf_elems = doc.at("conf_elems").get<std::vector<std::string>>();
        spec.integ_elems = doc.at("integ_elems").get<std::vector<std::string>>();
        for (const auto& p : doc.value("conf_order", nlohmann::json::array()))
            spec.conf_order.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
        for (const auto& p : doc.value("integ_order", nlohmann::json::array()))
            spec.integ_order.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
        spec.voice = doc.at("voice").get<std::map<std::string, std::string>>();
        spec.view = doc.at("view").get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("malformed model config: ") + e.what());
    }
    LabelModel m = from_spec(spec, true);
    auto report = m.validate();
    if (!report.empty()) {
        std::string msg = "invalid label model:";
        for (const auto& v : report) msg += "\n  " + v.law + ": " + v.detail;
        throw ModelError(msg);
    }
    return m;
}

LabelModel LabelModel::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ModelError("cannot parse model file '" + path + "': " + e.what());
    }
    return from_json(doc);
}

LabelModel LabelModel::four_point() {
    ModelSpec s;
    s.conf_elems = {"Pub", "Sec"};
    s.conf_order = {{"Pub", "Sec"}};
    s.integ_elems = {"Trd", "Unt"};
    s.integ_order = {{"Trd", "Unt"}};
    s.voice = {{"Pub", "Unt"}, {"Sec", "Trd"}};
    s.view = {{"Trd", "Sec"}, {"Unt", "Pub"}};
    return from_spec(s);
}

LabelModel LabelModel::principal_powerset(const std::vector<std::string>& principals) {
    std::size_t n = principals.size();
    if (n > 8) throw ModelError("principal_powerset supports at most 8 principals");
    std::size_t count = std::size_t{1} << n;
    std::size_t full = count - 1;
    auto set_name = [&](const char* prefix, std::size_t mask) {
        std::string s = prefix;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) s += "_" + principals[i];
        if (mask == 0) s += "_";
        return s;
    };
    // Confidentiality element k has readers full^k, so index 0 is the most
    // public; integrity element k has writers k, so index 0 is fully trusted.
    ModelSpec s;
    for (std::size_t k = 0; k < count; ++k) s.conf_elems.push_back(set_name("r", full ^ k));
    for (std::size_t k = 0; k < count; ++k) s.integ_elems.push_back(set_name("w", k));
    for (std::size_t a = 0; a < count; ++a)
        for (std::size_t b = 0; b < count; ++b)
            if ((a & b) == a) {
                s.conf_order.emplace_back(s.conf_elems[a], s.conf_elems[b]);
                s.integ_order.emplace_back(s.integ_elems[a], s.integ_elems[b]);
            }
    for (std::size_t k = 0; k < count; ++k) {
        s.voice[s.conf_elems[k]] = s.integ_elems[full ^ k];
        s.view[s.integ_elems[k]] = s.conf_elems[full ^ k];
    }
    return from_spec(s);
}

ValidationReport LabelModel::validate() const {
    ValidationReport out;
    check_order("confidentiality", conf_names_, conf_leq_, conf_join_, conf_meet_, conf_bot_, conf_top_, out);
    check_order("integrity", integ_names_, integ_leq_, integ_join_, integ_meet_, integ_bot_, integ_top_, out);

    bool total = true;
    for (std::size_t c = 0; c < conf_count(); ++c)
        if (voice_[c] == kMissing) {
            out.push_back({"voice-total", "voice undefined on " + conf_names_[c]});
            total = false;
        }
    for (std::size_t i = 0; i < integ_count(); ++i)
        if (view_[i] == kMissing) {
            out.push_back({"view-total", "view undefined on " + integ_names_[i]});
            total = false;
        }
    if (!total) return out;

    for (std::uint16_t a = 0; a < conf_count(); ++a)
        for (std::uint16_t b = 0; b < conf_count(); ++b)
            if (conf_leq(a, b) && !integ_leq(voice_[b], voice_[a]))
                out.push_back({"voice-antitone", conf_names_[a] + " <= " + conf_names_[b] + " but voice(" +
                                                     conf_names_[b] + ") !<= voice(" + conf_names_[a] + ")"});
    for (std::uint16_t a = 0; a < integ_count(); ++a)
        for (std::uint16_t b = 0; b < integ_count(); ++b)
            if (integ_leq(a, b) && !conf_leq(view_[b], view_[a]))
                out.push_back({"view-antitone", integ_names_[a] + " <= " + integ_names_[b] + " but view(" +
                                                    integ_names_[b] + ") !<= view(" + integ_names_[a] + ")"});
    for (std::uint16_t c = 0; c < conf_count(); ++c)
        for (std::uint16_t i = 0; i < integ_count(); ++i)
            if (integ_leq(i, voice_[c]) != conf_leq(c, view_[i]))
                out.push_back({"galois", "c=" + conf_names_[c] + ", i=" + integ_names_[i] + ": i <= voice(c) is " +
                                             (integ_leq(i, voice_[c]) ? "true" : "false") + ", c <= view(i) is " +
                                             (conf_leq(c, view_[i]) ? "true" : "false")});
    return out;
}

std::uint16_t LabelModel::conf_index(std::string_view name) const {
    return find_index(conf_names_, name, "confidentiality");
}

std::uint16_t LabelModel::integ_index(std::string_view name) const {
    return find_index(integ_names_, name, "integrity");
}

void LabelModel::require(Label l) const {
    if (!contains(l)) throw ModelError("label outside model");
}

bool LabelModel::flows_to(Label a, Label b) const {
    require(a);
    require(b);
    return conf_leq(a.conf, b.conf) && integ_leq(a.integ, b.integ);
}

Label LabelModel::join(Label a, Label b) const {
    require(a);
    require(b);
    int c = conf_join_[a.conf * conf_count() + b.conf];
    int i = integ_join_[a.integ * integ_count() + b.integ];
    if (c < 0 || i < 0) throw ModelError("join undefined");
    return {static_cast<std::uint16_t>(c), static_cast<std::uint16_t>(i)};
}

Label LabelModel::meet(Label a, Label b) const {
    require(a);
    require(b);
    int c = conf_meet_[a.conf * conf_count() + b.conf];
    int i = integ_meet_[a.integ * integ_count() + b.integ];
    if (c < 0 || i < 0) throw ModelError("meet undefined");
    return {static_cast<std::uint16_t>(c), static_cast<std::uint16_t>(i)};
}

Label LabelModel::reflect(Label l) const {
    require(l);
    std::uint16_t c = view_[l.integ];
    std::uint16_t i = voice_[l.conf];
    if (c == kMissing || i == kMissing) throw ModelError("voice/view undefined");
    return {c, i};
}

Label LabelModel::bottom() const {
    if (conf_bot_ < 0 || integ_bot_ < 0) throw ModelError("model has no bottom");
    return {static_cast<std::uint16_t>(conf_bot_), static_cast<std::uint16_t>(integ_bot_)};
}

Label LabelModel::top() const {
    if (conf_top_ < 0 || integ_top_ < 0) throw ModelError("model has no top");
    return {static_cast<std::uint16_t>(conf_top_), static_cast<std::uint16_t>(integ_top_)};
}

Label LabelModel::at(std::size_t index) const {
    if (index >= label_count()) throw ModelError("label index out of range");
    return {static_cast<std::uint16_t>(index / integ_count()), static_cast<std::uint16_t>(index % integ_count())};
}

std::vector<Label> LabelModel::labels() const {
    std::vector<Label> out;
    out.reserve(label_count());
    for (std::size_t k = 0; k < label_count(); ++k) out.push_back(at(k));
    return out;
}

Label LabelModel::label(std::string_view conf, std::string_view integ) const {
    return {conf_index(conf), integ_index(integ)};
}

Label LabelModel::parse_label(std::string_view text) const {
    auto t = trim(text);
    if (t.size() < 2 || t.front() != '(' || t.back() != ')')
        throw ModelError("label literal must look like (Conf,Integ): '" + std::string(text) + "'");
    t = t.substr(1, t.size() - 2);
    auto comma = t.find(',');
    if (comma == std::string_view::npos || t.find(',', comma + 1) != std::string_view::npos)
        throw ModelError("label literal must look like (Conf,Integ): '" + std::string(text) + "'");
    return label(trim(t.substr(0, comma)), trim(t.substr(comma + 1)));
}

std::string LabelModel::name(Label l) const {
    require(l);
    return "(" + conf_names_[l.conf] + "," + integ_names_[l.integ] + ")";
}

std::vector<std::vector<char>> enumerate_down_closed(std::size_t n, const std::vector<char>& leq,
                                                     std::size_t limit) {
    // 0 = undecided, 1 = in, 2 = out. Deciding the highest index first and
    // trying "out" before "in" yields ascending bitmask order.
    std::vector<std::vector<char>> result;
    std::vector<char> state(n, 0);
    auto rec = [&](auto& self, std::size_t remaining) -> void {
        if (remaining == 0) {
            std::vector<char> members(n);
            for (std::size_t i = 0; i < n; ++i) members[i] = state[i] == 1;
            if (result.size() >= limit) throw ModelError("too many down-sets to enumerate");
            result.push_back(std::move(members));
            return;
        }
        std::size_t k = remaining - 1;
        if (state[k] != 0) {
            self(self, k);
            return;
        }
        for (char choice : {char{2}, char{1}}) {
            std::vector<char> saved = state;
            bool ok = true;
            for (std::size_t j = 0; j < n && ok; ++j) {
                bool forced = choice == 1 ? leq[j * n + k] != 0 : leq[k * n + j] != 0;
                if (!forced) continue;
                if (state[j] != 0 && state[j] != choice) ok = false;
                else state[j] = choice;
            }
            if (ok) self(self, k);
            state = std::move(saved);
        }
    };
    rec(rec, n);
    return result;
}

std::vector<DownSet> LabelModel::enumerate_downsets() const {
    std::size_t n = label_count();
    std::vector<char> leq(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) leq[a * n + b] = flows_to(at(a), at(b));
    std::vector<DownSet> out;
    for (auto& members : enumerate_down_closed(n, leq)) out.emplace_back(std::move(members), integ_count());
    return out;
}

std::vector<Attacker> LabelModel::enumerate_attackers() const {
    auto conf_sets = enumerate_down_closed(conf_count(), conf_leq_);
    auto integ_sets = enumerate_down_closed(integ_count(), integ_leq_);
    std::vector<Attacker> out;
    for (const auto& t : integ_sets)
        for (const auto& p : conf_sets) {
            bool ok = true;
            for (std::uint16_t i = 0; i < integ_count() && ok; ++i)
                if (!t[i] && !p[view_[i]]) ok = false;
            if (ok) out.emplace_back(p, t);
        }
    return out;
}

DownSet DownSet::below(const LabelModel& m, Label top) {
    std::vector<char> members(m.label_count(), 0);
    for (std::size_t k = 0; k < m.label_count(); ++k) members[k] = m.flows_to(m.at(k), top);
    return {std::move(members), m.integ_count()};
}

std::size_t DownSet::size() const {
    return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), char{1}));
}

std::vector<Label> DownSet::labels() const {
    std::vector<Label> out;
    for (std::size_t k = 0; k < members_.size(); ++k)
        if (members_[k])
            out.push_back({static_cast<std::uint16_t>(k / integ_count_), static_cast<std::uint16_t>(k % integ_count_)});
    return out;
}

bool DownSet::is_downward_closed(const LabelModel& m) const {
    if (members_.size() != m.label_count()) return false;
    for (std::size_t a = 0; a < members_.size(); ++a)
        if (members_[a])
            for (std::size_t b = 0; b < members_.size(); ++b)
                if (!members_[b] && m.flows_to(m.at(b), m.at(a))) return false;
    return true;
}

bool DownSet::subset_of(const DownSet& other) const {
    for (std::size_t k = 0; k < members_.size(); ++k)
        if (members_[k] && !other.members_.at(k)) return false;
    return true;
}

DownSet Attacker::public_set(const LabelModel& m) const {
    std::vector<char> members(m.label_count(), 0);
    for (std::size_t k = 0; k < m.label_count(); ++k) members[k] = is_public(m.at(k));
    return {std::move(members), m.integ_count()};
}

DownSet Attacker::trusted_set(const LabelModel& m) const {
    std::vector<char> members(m.label_count(), 0);
    for (std::size_t k = 0; k < m.label_count(); ++k) members[k] = is_trusted(m.at(k));
    return {std::move(members), m.integ_count()};
}

std::string Attacker::describe(const LabelModel& m) const {
    auto set = [](const std::vector<char>& bits, auto&& name) {
        std::string s = "{";
        bool first = true;
        for (std::size_t k = 0; k < bits.size(); ++k)
            if (bits[k]) {
                if (!first) s += ",";
                s += name(static_cast<std::uint16_t>(k));
                first = false;
            }
        return s + "}";
    };
    return "(" + set(public_conf_, [&](std::uint16_t c) { return m.conf_name(c); }) + "," +
           set(trusted_integ_, [&](std::uint16_t i) { return m.integ_name(i); }) + ")";
}

}  // namespace nmpl
