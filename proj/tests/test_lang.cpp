#include "doctest.h"
#include "nmpl/lang.hpp"
#include "support.hpp"

using namespace nmpl;
using namespace nmpl::testing;

TEST_SUITE("lang") {

TEST_CASE("parser builds the expected trees") {
    auto m = LabelModel::four_point();
    Label PT = m.bottom();
    CHECK(equal(parse_program("skip", m), Cmd::skip()));
    CHECK(equal(parse_program("while y { skip }; x := 5", m),
                Cmd::seq(Cmd::loop(Expr::var("y"), Cmd::skip()), Cmd::assign("x", Expr::lit(5)))));
    CHECK(equal(parse_program("pdown(Pub,Trd) { while y { skip } }", m),
                Cmd::pdown(PT, Cmd::loop(Expr::var("y"), Cmd::skip()))));
    CHECK(equal(parse_program("if a = y { x := 0 } else { x := 1 }", m),
                Cmd::ite(Expr::bin(BinOp::Eq, Expr::var("a"), Expr::var("y")), Cmd::assign("x", Expr::lit(0)),
                         Cmd::assign("x", Expr::lit(1)))));
}

TEST_CASE("parser rejects bad input with positions") {
    auto m = LabelModel::four_point();
    try {
        parse_program("skip;\n  x := ", m);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::Syntax);
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_program("stop", m), ParseError);
    CHECK_THROWS_AS(parse_program("pdown(Top,Trd) { skip }", m), ParseError);
    CHECK_THROWS_AS(parse_program("while y skip", m), ParseError);
}

TEST_CASE("print and parse round trip") {
    auto m = LabelModel::four_point();
    Rng rng(11);
    GenOptions opts;
    opts.pdown = true;
    opts.max_size = 25;
    for (int k = 0; k < 300; ++k) {
        auto c = random_program(rng, m, opts);
        auto text = to_string(*c, m);
        INFO(text);
        CHECK(equal(parse_program(text, m), c));
    }
}

TEST_CASE("erasure") {
    auto m = LabelModel::four_point();
    Label PT = m.bottom();
    CHECK(equal(erase(Cmd::pdown(PT, Cmd::skip())), Cmd::skip()));
    auto loop = Cmd::loop(Expr::var("y"), Cmd::skip());
    auto x5 = Cmd::assign("x", Expr::lit(5));
    CHECK(equal(erase(Cmd::seq(Cmd::pdown(PT, loop), x5)), Cmd::seq(loop, x5)));
    Rng rng(12);
    GenOptions opts;
    opts.pdown = true;
    for (int k = 0; k < 200; ++k) {
        auto c = random_program(rng, m, opts);
        auto e = erase(c);
        CHECK(equal(erase(e), e));
        CHECK_FALSE(contains_pdown(*e));
        CHECK(pd_refines(*e, *c));
    }
}

TEST_CASE("pdown refinement and equivalence") {
    auto m = LabelModel::four_point();
    Label PT = m.bottom(), SU = m.top();
    auto pd_pt = Cmd::pdown(PT, Cmd::skip()), pd_su = Cmd::pdown(SU, Cmd::skip());
    CHECK(pd_refines(*Cmd::skip(), *pd_pt));
    CHECK(pd_refines(*pd_su, *pd_pt));
    CHECK_FALSE(pd_refines(*Cmd::assign("x", Expr::lit(1)), *Cmd::skip()));
    CHECK_FALSE(pd_refines(*pd_pt, *Cmd::skip()));
    CHECK(pd_equiv(*pd_pt, *pd_su));
    CHECK_FALSE(pd_equiv(*pd_pt, *Cmd::skip()));
}

TEST_CASE("refinement laws on random commands") {
    auto m = LabelModel::four_point();
    Rng rng(13);
    GenOptions opts;
    opts.pdown = true;
    opts.max_size = 8;
    for (int k = 0; k < 150; ++k) {
        auto c = random_program(rng, m, opts);
        CHECK(pd_refines(*c, *c));
        CHECK(pd_equiv(*c, *c));
        // b ranges over structures below c and a over structures below b.
        for (const auto& b : enumerate_pd_smaller(c, m.top())) {
            CHECK(pd_refines(*b, *c));
            for (const auto& a : enumerate_pd_smaller(b, m.bottom())) {
                CHECK(pd_refines(*a, *b));
                CHECK(pd_refines(*a, *c));
                if (pd_equiv(*a, *b)) CHECK(pd_refines(*b, *a));
            }
        }
    }
}

TEST_CASE("enumerate_pd_smaller") {
    auto m = LabelModel::four_point();
    Label PT = m.bottom();
    auto one = enumerate_pd_smaller(Cmd::pdown(PT, Cmd::skip()), PT);
    REQUIRE(one.size() == 2);
    CHECK(equal(one[0], Cmd::skip()));
    CHECK(equal(one[1], Cmd::pdown(PT, Cmd::skip())));
    CHECK(enumerate_pd_smaller(Cmd::skip(), PT).size() == 1);

    auto pd = [&] { return Cmd::pdown(m.top(), Cmd::assign("x", Expr::lit(1))); };
    auto three = Cmd::seq(pd(), Cmd::seq(pd(), pd()));
    auto all = enumerate_pd_smaller(three, PT);
    CHECK(all.size() == 8);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) CHECK_FALSE(pd_equiv(*all[i], *all[j]));
}

TEST_CASE("relabel_pdowns and pdown_nodes") {
    auto m = LabelModel::four_point();
    auto c = parse_program("pdown(Pub,Trd) { pdown(Sec,Trd) { skip } }; pdown(Pub,Unt) { skip }", m);
    auto nodes = pdown_nodes(*c);
    REQUIRE(nodes.size() == 3);
    CHECK(nodes[0]->label == m.label("Pub", "Trd"));
    CHECK(nodes[1]->label == m.label("Sec", "Trd"));
    auto r = relabel_pdowns(c, {m.top(), m.top(), m.top()});
    CHECK(pd_equiv(*r, *c));
    for (const Cmd* n : pdown_nodes(*r)) CHECK(n->label == m.top());
}

TEST_CASE("context files") {
    auto m = LabelModel::four_point();
    auto ctx = ctx_from_json(nlohmann::json{{"x", "(Pub,Trd)"}, {"y", "(Sec,Unt)"}}, m);
    CHECK(ctx.at("x") == m.bottom());
    CHECK(ctx.at("y") == m.top());
    CHECK(ctx_from_json(ctx_to_json(ctx, m), m) == ctx);
    CHECK_THROWS(ctx_from_json(nlohmann::json{{"x", "(Top,Trd)"}}, m));
}

}  // TEST_SUITE
