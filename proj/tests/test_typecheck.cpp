#include <algorithm>

#include "doctest.h"
#include "nmpl/typecheck.hpp"
#include "support.hpp"

using namespace nmpl;
using namespace nmpl::testing;

namespace {

struct Fixture {
    LabelModel m = LabelModel::four_point();
    Label PT = m.label("Pub", "Trd"), PU = m.label("Pub", "Unt"), ST = m.label("Sec", "Trd"),
          SU = m.label("Sec", "Unt");
    CmdPtr parse(const char* text) const { return parse_program(text, m); }
};

}  // namespace

TEST_SUITE("typecheck") {

TEST_CASE_FIXTURE(Fixture, "expression labels") {
    CHECK(type_expr(m, {{"y", ST}}, *parse_expr("y + 1")).value() == ST);
    CHECK(type_expr(m, {}, *parse_expr("7")).value() == PT);
    CHECK(type_expr(m, {{"a", PU}, {"y", ST}}, *parse_expr("a = y")).value() == SU);
    auto bad = type_expr(m, {}, *parse_expr("z"));
    REQUIRE_FALSE(bad.ok());
    CHECK(bad.error().kind == TypeError::Kind::UnboundVariable);
}

TEST_CASE_FIXTURE(Fixture, "synthesized nontermination labels") {
    Ctx xy{{"y", ST}, {"x", PT}};
    auto implicit = synth_nt(m, xy, PT, *parse("if y { x := 0 } else { x := 1 }"));
    REQUIRE_FALSE(implicit.ok());
    CHECK(implicit.error().kind == TypeError::Kind::ImplicitFlow);

    CHECK(synth_nt(m, {{"y", ST}}, PT, *parse("while y { skip }")).value() == ST);

    auto control = synth_nt(m, {{"a", PU}, {"y", ST}, {"b", PT}}, PT, *parse("while (a = y) { skip }; b := 0"));
    REQUIRE_FALSE(control.ok());
    CHECK(control.error().kind == TypeError::Kind::SeqProgress);

    CHECK(synth_nt(m, xy, PT, *parse("pdown(Pub,Trd) { while y { skip } }; x := 5")).value() == PT);
    CHECK(synth_nt(m, xy, PT, *parse("skip")).value() == PT);
}

TEST_CASE_FIXTURE(Fixture, "error kinds") {
    Ctx ctx{{"x", PT}, {"y", ST}, {"s", SU}};
    auto kind = [&](const char* text, Label pc) { return synth_nt(m, ctx, pc, *parse(text)).error().kind; };
    CHECK(kind("x := y", PT) == TypeError::Kind::ExplicitFlow);
    CHECK(kind("x := 1", ST) == TypeError::Kind::ImplicitFlow);
    CHECK(kind("pdown(Pub,Trd) { skip }", ST) == TypeError::Kind::PDownPc);
    CHECK(kind("pdown(Pub,Trd) { while s { skip } }", PT) == TypeError::Kind::PDownCompromised);
    CHECK(kind("z := 1", PT) == TypeError::Kind::UnboundVariable);
    auto stop = synth_nt(m, ctx, PT, *Cmd::stop());
    REQUIRE_FALSE(stop.ok());
    CHECK(stop.error().kind == TypeError::Kind::StopInProgram);
    CHECK_FALSE(check(m, ctx, PT, *Cmd::stop(), SU).ok());
}

TEST_CASE_FIXTURE(Fixture, "check respects Variance on nt") {
    Ctx ctx{{"y", ST}};
    auto c = parse("while y { skip }");
    CHECK(check(m, ctx, PT, *c, SU).value());
    CHECK_FALSE(check(m, ctx, PT, *c, PT).value());
    CHECK(check(m, ctx, PT, *c, ST).value());
}

TEST_CASE_FIXTURE(Fixture, "downgrade-free derivations") {
    Ctx ctx{{"y", ST}};
    auto d_low = DownSet::below(m, PU);
    CHECK_FALSE(is_downgrade_free(m, ctx, PT, *parse("pdown(Pub,Trd) { while y { skip } }"), d_low).value());
    CHECK(is_downgrade_free(m, ctx, PT, *parse("while y { skip }"), d_low).value());
    CHECK(is_downgrade_free(m, ctx, PT, *parse("pdown(Sec,Unt) { while y { skip } }"), DownSet::below(m, PT))
              .value());
}

TEST_CASE_FIXTURE(Fixture, "synthesis agrees with the declarative rules") {
    Ctx ctx = standard_ctx(m);
    Rng rng(21);
    GenOptions opts;
    opts.pdown = true;
    opts.max_size = 12;
    int typed = 0;
    for (int k = 0; k < 600; ++k) {
        auto c = random_program(rng, m, opts);
        auto table = derivable(m, ctx, *c);
        for (Label pc : m.labels()) {
            auto nt = synth_nt(m, ctx, pc, *c);
            const auto& row = table[m.index(pc)];
            INFO(to_string(*c, m), " at pc ", m.name(pc));
            bool any = std::find(row.begin(), row.end(), 1) != row.end();
            REQUIRE(nt.ok() == any);
            if (!nt.ok()) continue;
            ++typed;
            // Least: derivable, and below every derivable nt.
            CHECK(row[m.index(nt.value())]);
            for (Label l : m.labels()) {
                CHECK(static_cast<bool>(row[m.index(l)]) == m.flows_to(nt.value(), l));
                CHECK(check(m, ctx, pc, *c, l).value() == static_cast<bool>(row[m.index(l)]));
            }
        }
    }
    CHECK(typed > 200);
}

TEST_CASE("three-level model agrees with the declarative rules") {
    auto tm = three_level_model();
    REQUIRE(tm.validate().empty());
    auto ls = tm.labels();
    Ctx ctx{{"a", tm.label("M", "U")}, {"b", tm.label("L", "T")}, {"y", tm.label("H", "M")}, {"s", tm.top()}};
    Rng rng(22);
    GenOptions opts;
    opts.pdown = true;
    opts.max_size = 10;
    for (int k = 0; k < 200; ++k) {
        auto c = random_program(rng, tm, opts);
        auto table = derivable(tm, ctx, *c);
        for (Label pc : ls) {
            auto nt = synth_nt(tm, ctx, pc, *c);
            const auto& row = table[tm.index(pc)];
            bool any = std::find(row.begin(), row.end(), 1) != row.end();
            REQUIRE(nt.ok() == any);
            if (nt.ok())
                for (Label l : ls) CHECK(static_cast<bool>(row[tm.index(l)]) == tm.flows_to(nt.value(), l));
        }
    }
}

}  // TEST_SUITE
