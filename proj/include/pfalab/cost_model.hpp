#ifndef PFALAB_COST_MODEL_HPP
#define PFALAB_COST_MODEL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace pfalab::cost {

using Rational = boost::rational<std::int64_t>;

/* Basis of the cost algebra: the five AES operations. */
enum class Op { Add, Sub, Shift, Mix, Key };
inline constexpr std::size_t kOps = 5;

std::string_view to_string(Op op);

/// Non-negative rational combination of the operation costs.
class CostExpr {
public:
    CostExpr() { coeffs_.fill(Rational(0)); }
    CostExpr(Rational add, Rational sub, Rational shift, Rational mix, Rational key)
        : coeffs_{add, sub, shift, mix, key}
    {
    }

    static CostExpr of(Op op, Rational coeff = 1);

    const Rational& operator[](Op op) const noexcept { return coeffs_[static_cast<std::size_t>(op)]; }

    CostExpr& operator+=(const CostExpr& rhs);
    friend CostExpr operator+(CostExpr lhs, const CostExpr& rhs) { return lhs += rhs; }
    friend CostExpr operator*(Rational k, CostExpr e);

    friend bool operator==(const CostExpr&, const CostExpr&) = default;

    std::string to_string() const;

private:
    std::array<Rational, kOps> coeffs_;
};

/* [lower, upper]; a point cost has lower == upper. */
struct CostRange {
    CostExpr lower;
    CostExpr upper;

    static CostRange point(const CostExpr& e) { return {e, e}; }
    bool is_point() const { return lower == upper; }
};

/// Positive weight per operation. The default profile follows the serial
/// narrative with T_Add = T_Unit: Add = Sub = Shift = 1, Mix = 2 * (1+1+1),
/// Key = Mix / 4.
struct WeightProfile {
    std::array<Rational, kOps> weight;

    static WeightProfile unit_default();
    /* Throws Error{Config} unless every weight is > 0. */
    void validate() const;

    const Rational& operator[](Op op) const noexcept { return weight[static_cast<std::size_t>(op)]; }
};

enum class Scheme { Ori, Detect, Correct, Algo, Dmr, Bs };
std::string_view to_string(Scheme s);

CostRange cost_of(Scheme scheme);

struct Interval {
    Rational lower;
    Rational upper;
};

Rational evaluate(const CostExpr& expr, const WeightProfile& weights);
Interval evaluate(const CostRange& range, const WeightProfile& weights);

/// 1 - cost(a) / cost(b), using the lower endpoint of each range.
/// Throws Error{DivisionByZero} when cost(b) is zero.
Rational savings_ratio(const CostRange& a, const CostRange& b, const WeightProfile& weights);

/* Exact decimal when the denominator has only factors 2 and 5, else "p/q". */
std::string to_decimal(const Rational& r);

} // namespace pfalab::cost

#endif
