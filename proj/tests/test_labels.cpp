#include <algorithm>

#include "doctest.h"
#include "nmpl/labels.hpp"

using namespace nmpl;

namespace {

bool names_law(const ValidationReport& r, const std::string& law) {
    return std::any_of(r.begin(), r.end(), [&](const Violation& v) { return v.law == law; });
}

ModelSpec four_point_spec() {
    ModelSpec s;
    s.conf_elems = {"Pub", "Sec"};
    s.conf_order = {{"Pub", "Pub"}, {"Sec", "Sec"}, {"Pub", "Sec"}};
    s.integ_elems = {"Trd", "Unt"};
    s.integ_order = {{"Trd", "Trd"}, {"Unt", "Unt"}, {"Trd", "Unt"}};
    s.voice = {{"Pub", "Unt"}, {"Sec", "Trd"}};
    s.view = {{"Trd", "Sec"}, {"Unt", "Pub"}};
    return s;
}

}  // namespace

TEST_SUITE("labels") {

TEST_CASE("four-point flows, joins and meets") {
    auto m = LabelModel::four_point();
    Label PT = m.label("Pub", "Trd"), PU = m.label("Pub", "Unt"), ST = m.label("Sec", "Trd"),
          SU = m.label("Sec", "Unt");
    CHECK(m.flows_to(PT, SU));
    CHECK_FALSE(m.flows_to(PU, ST));
    CHECK(m.flows_to(ST, ST));
    CHECK(m.join(PU, ST) == SU);
    CHECK(m.meet(PU, ST) == PT);
    for (Label x : m.labels()) CHECK(m.join(PT, x) == x);
    CHECK(m.bottom() == PT);
    CHECK(m.top() == SU);
}

TEST_CASE("reflection and compromise") {
    auto m = LabelModel::four_point();
    Label PT = m.label("Pub", "Trd"), PU = m.label("Pub", "Unt"), ST = m.label("Sec", "Trd"),
          SU = m.label("Sec", "Unt");
    CHECK(m.reflect(SU) == PT);
    CHECK(m.reflect(PU) == PU);
    for (Label l : m.labels()) CHECK(m.reflect(m.reflect(m.reflect(l))) == m.reflect(l));
    CHECK_FALSE(m.is_non_compromised(SU));
    CHECK(m.is_non_compromised(PT));
    CHECK(m.is_non_compromised(ST));
    CHECK(m.is_non_compromised(PU));
}

TEST_CASE("label literal round trip") {
    auto m = LabelModel::four_point();
    for (Label l : m.labels()) CHECK(m.parse_label(m.name(l)) == l);
    CHECK(m.parse_label("  (Sec, Unt) ") == m.top());
    CHECK_THROWS_AS(m.parse_label("(Top,Trd)"), ModelError);
    CHECK_THROWS_AS(m.parse_label("Pub,Trd"), ModelError);
}

TEST_CASE("built-in models are valid") {
    CHECK(LabelModel::four_point().validate().empty());
    CHECK(LabelModel::principal_powerset({"alice"}).validate().empty());
    CHECK(LabelModel::principal_powerset({"alice", "bob"}).validate().empty());
    CHECK(LabelModel::principal_powerset({"a", "b", "c"}).validate().empty());
}

TEST_CASE("corrupted models name the broken law") {
    SUBCASE("voice(Pub) altered to Trd breaks the Galois law") {
        auto s = four_point_spec();
        s.voice["Pub"] = "Trd";
        CHECK(names_law(LabelModel::from_spec(s).validate(), "galois"));
    }
    SUBCASE("missing reflexive pair") {
        auto s = four_point_spec();
        s.conf_order.erase(s.conf_order.begin());
        CHECK(names_law(LabelModel::from_spec(s, false).validate(), "reflexivity"));
    }
    SUBCASE("two incomparable elements lack a join") {
        auto s = four_point_spec();
        s.integ_elems.push_back("Mid");
        s.integ_order.push_back({"Mid", "Mid"});
        s.view["Mid"] = "Pub";
        auto r = LabelModel::from_spec(s).validate();
        CHECK(names_law(r, "join-existence"));
    }
    SUBCASE("from_json rejects invalid models") {
        auto doc = nlohmann::json::parse(R"({
            "conf_elems": ["Pub", "Sec"], "conf_order": [["Pub", "Sec"]],
            "integ_elems": ["Trd", "Unt"], "integ_order": [["Trd", "Unt"]],
            "voice": {"Pub": "Trd", "Sec": "Trd"}, "view": {"Trd": "Sec", "Unt": "Pub"}})");
        CHECK_THROWS_WITH_AS(LabelModel::from_json(doc), doctest::Contains("galois"), ModelError);
    }
    SUBCASE("unknown element names") {
        auto s = four_point_spec();
        s.voice["Top"] = "Trd";
        CHECK_THROWS_AS(LabelModel::from_spec(s), ModelError);
    }
}

TEST_CASE("four-point down-sets") {
    auto m = LabelModel::four_point();
    auto ds = m.enumerate_downsets();
    REQUIRE(ds.size() == 6);
    std::vector<std::size_t> sizes;
    for (const auto& d : ds) {
        CHECK(d.is_downward_closed(m));
        sizes.push_back(d.size());
    }
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{0, 1, 2, 2, 3, 4});
}

TEST_CASE("single-label model has two down-sets") {
    ModelSpec s;
    s.conf_elems = {"C"};
    s.integ_elems = {"I"};
    s.voice = {{"C", "I"}};
    s.view = {{"I", "C"}};
    auto m = LabelModel::from_spec(s);
    CHECK(m.validate().empty());
    CHECK(m.enumerate_downsets().size() == 2);
}

TEST_CASE("four-point attackers") {
    auto m = LabelModel::four_point();
    auto as = m.enumerate_attackers();
    REQUIRE(as.size() == 6);
    std::vector<std::string> names;
    for (const auto& a : as) names.push_back(a.describe(m));
    std::sort(names.begin(), names.end());
    std::vector<std::string> expect{"({Pub,Sec},{})",    "({Pub},{Trd})", "({Pub,Sec},{Trd})",
                                    "({},{Trd,Unt})",    "({Pub},{Trd,Unt})", "({Pub,Sec},{Trd,Unt})"};
    std::sort(expect.begin(), expect.end());
    CHECK(names == expect);
}

TEST_CASE("lattice and Galois laws hold exhaustively") {
    for (const auto& m : {LabelModel::four_point(), LabelModel::principal_powerset({"a", "b"})}) {
        auto ls = m.labels();
        for (Label a : ls)
            for (Label b : ls) {
                CHECK(m.join(a, b) == m.join(b, a));
                CHECK(m.meet(a, b) == m.meet(b, a));
                CHECK(m.join(a, m.meet(a, b)) == a);
                CHECK(m.meet(a, m.join(a, b)) == a);
                CHECK(m.flows_to(a, m.reflect(b)) == m.flows_to(b, m.reflect(a)));
                if (m.flows_to(a, b)) CHECK(m.flows_to(m.reflect(b), m.reflect(a)));
                for (Label c : ls) CHECK(m.join(a, m.join(b, c)) == m.join(m.join(a, b), c));
            }
        for (std::uint16_t c = 0; c < m.conf_count(); ++c)
            for (std::uint16_t i = 0; i < m.integ_count(); ++i)
                CHECK(m.integ_leq(i, m.voice(c)) == m.conf_leq(c, m.view(i)));
    }
}

TEST_CASE("every attacker covers the non-compromised labels") {
    for (const auto& m : {LabelModel::four_point(), LabelModel::principal_powerset({"a", "b"})}) {
        for (const auto& a : m.enumerate_attackers()) {
            auto p = a.public_set(m), t = a.trusted_set(m);
            CHECK(p.is_downward_closed(m));
            CHECK(t.is_downward_closed(m));
            for (Label l : m.labels())
                if (m.is_non_compromised(l)) CHECK((p.contains(l) || t.contains(l)));
        }
    }
}

}  // TEST_SUITE
