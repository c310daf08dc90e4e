#include <doctest.h>

#include "pfalab/cost_model.hpp"
#include "pfalab/error.hpp"

using namespace pfalab;
using namespace pfalab::cost;

TEST_CASE("default profile")
{
    const auto w = WeightProfile::unit_default();
    CHECK(w[Op::Mix] == Rational(6));
    CHECK(w[Op::Key] == Rational(3, 2));
    CHECK_NOTHROW(w.validate());
}

TEST_CASE("scheme costs under the default profile")
{
    const auto w = WeightProfile::unit_default();
    // hand-evaluated: 11 + 10 + 10 + 9*6 + 10*1.5
    CHECK(evaluate(cost_of(Scheme::Ori), w).lower == Rational(100));
    CHECK(evaluate(cost_of(Scheme::Dmr), w).lower == Rational(200));
    CHECK(evaluate(cost_of(Scheme::Bs), w).upper == Rational(200));
    const auto algo = evaluate(cost_of(Scheme::Algo), w);
    CHECK(algo.lower == Rational(481, 4));
    CHECK(algo.upper == Rational(184));
    CHECK(to_decimal(algo.lower) == "120.25");
    CHECK(savings_ratio(cost_of(Scheme::Algo), cost_of(Scheme::Dmr), w) == Rational(319, 800));
    CHECK(to_decimal(savings_ratio(cost_of(Scheme::Algo), cost_of(Scheme::Dmr), w)) == "0.39875");
    CHECK(cost_of(Scheme::Ori).is_point());
    CHECK_FALSE(cost_of(Scheme::Correct).is_point());
}

TEST_CASE("expressions are linear")
{
    const CostExpr a(1, 2, 3, 4, 5);
    const CostExpr b = CostExpr::of(Op::Mix, 2);
    CHECK((a + b)[Op::Mix] == Rational(6));
    CHECK((Rational(2) * a)[Op::Key] == Rational(10));
    CHECK(CostExpr::of(Op::Sub, 20).to_string() == "20T_Sub");
    CHECK(CostExpr().to_string() == "0");

    WeightProfile w = WeightProfile::unit_default();
    w.weight[static_cast<std::size_t>(Op::Mix)] = Rational(10);
    CHECK(evaluate(a + b, w) == evaluate(a, w) + evaluate(b, w));
}

TEST_CASE("invalid weights and zero reference")
{
    WeightProfile w = WeightProfile::unit_default();
    w.weight[0] = Rational(0);
    CHECK_THROWS_AS(w.validate(), Error);
    const CostRange zero = CostRange::point(CostExpr());
    CHECK_THROWS_AS(savings_ratio(cost_of(Scheme::Ori), zero, WeightProfile::unit_default()), Error);
}

TEST_CASE("decimal rendering")
{
    CHECK(to_decimal(Rational(1, 3)) == "1/3");
    CHECK(to_decimal(Rational(-5, 4)) == "-1.25");
    CHECK(to_decimal(Rational(7)) == "7");
}

TEST_CASE("savings ratio endpoints")
{
    const auto w = WeightProfile::unit_default();
    CHECK(savings_ratio(cost_of(Scheme::Ori), cost_of(Scheme::Ori), w) == Rational(0));
    const CostRange algo_worst = CostRange::point(cost_of(Scheme::Algo).upper);
    CHECK(to_decimal(savings_ratio(algo_worst, cost_of(Scheme::Dmr), w)) == "0.08");
    CHECK(cost_of(Scheme::Detect).lower == CostExpr::of(Op::Sub, 20));
    CHECK(cost_of(Scheme::Correct).lower == CostExpr::of(Op::Add, Rational(1, 4)));
    CHECK(cost_of(Scheme::Correct).upper == CostExpr::of(Op::Add, 64));
}
