#include "pfalab/cost_model.hpp"

#include <sstream>

#include "pfalab/error.hpp"

namespace pfalab::cost {

std::string_view to_string(Op op)
{
    switch (op) {
    case Op::Add: return "T_Add";
    case Op::Sub: return "T_Sub";
    case Op::Shift: return "T_Shift";
    case Op::Mix: return "T_Mix";
    case Op::Key: return "T_Key";
    }
    return "?";
}

std::string_view to_string(Scheme s)
{
    switch (s) {
    case Scheme::Ori: return "Ori-AES";
    case Scheme::Detect: return "Detect";
    case Scheme::Correct: return "Correct";
    case Scheme::Algo: return "D&C-AES";
    case Scheme::Dmr: return "DMR-AES";
    case Scheme::Bs: return "BS-AES";
    }
    return "?";
}

CostExpr CostExpr::of(Op op, Rational coeff)
{
    CostExpr e;
    e.coeffs_[static_cast<std::size_t>(op)] = coeff;
    return e;
}

CostExpr& CostExpr::operator+=(const CostExpr& rhs)
{
    for (std::size_t i = 0; i < kOps; ++i)
        coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

CostExpr operator*(Rational k, CostExpr e)
{
    for (auto& c : e.coeffs_)
        c *= k;
    return e;
}

std::string CostExpr::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < kOps; ++i) {
        if (coeffs_[i] == Rational(0))
            continue;
        if (!out.empty())
            out += " + ";
        out += to_decimal(coeffs_[i]);
        out += std::string(cost::to_string(static_cast<Op>(i)));
    }
    return out.empty() ? "0" : out;
}

WeightProfile WeightProfile::unit_default()
{
    const Rational add(1), sub(1), shift(1);
    const Rational mix = Rational(2) * (add + sub + shift);
    const Rational key = mix / Rational(4);
    return {{add, sub, shift, mix, key}};
}

void WeightProfile::validate() const
{
    for (std::size_t i = 0; i < kOps; ++i)
        if (weight[i] <= Rational(0))
            throw Error(ErrorKind::Config,
                        std::string(to_string(static_cast<Op>(i))) + " weight must be positive");
}

CostRange cost_of(Scheme scheme)
{
    // original encryption: 11 AddRoundKey, 10 SubBytes, 10 ShiftRows,
    // 9 MixColumns, 10 key-schedule rounds
    const CostExpr ori(11, 10, 10, 9, 10);
    const CostExpr detect = CostExpr::of(Op::Sub, 20);
    // one entry (4 XORs) up to the whole table (1024 XORs); 16 XORs = 1 T_Add
    const CostRange correct{CostExpr::of(Op::Add, Rational(1, 4)), CostExpr::of(Op::Add, 64)};

    switch (scheme) {
    case Scheme::Ori: return CostRange::point(ori);
    case Scheme::Detect: return CostRange::point(detect);
    case Scheme::Correct: return correct;
    case Scheme::Algo: return {ori + detect + correct.lower, ori + detect + correct.upper};
    case Scheme::Dmr:
    case Scheme::Bs: return CostRange::point(Rational(2) * ori);
    }
    return {};
}

Rational evaluate(const CostExpr& expr, const WeightProfile& weights)
{
    Rational total(0);
    for (std::size_t i = 0; i < kOps; ++i)
        total += expr[static_cast<Op>(i)] * weights.weight[i];
    return total;
}

Interval evaluate(const CostRange& range, const WeightProfile& weights)
{
    return {evaluate(range.lower, weights), evaluate(range.upper, weights)};
}

Rational savings_ratio(const CostRange& a, const CostRange& b, const WeightProfile& weights)
{
    const Rational denom = evaluate(b.lower, weights);
    if (denom == Rational(0))
        throw Error(ErrorKind::DivisionByZero, "reference cost evaluates to zero");
    return Rational(1) - evaluate(a.lower, weights) / denom;
}

std::string to_decimal(const Rational& r)
{
    std::int64_t den = r.denominator();
    int twos = 0, fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    std::ostringstream os;
    if (den != 1) {
        os << r.numerator() << '/' << r.denominator();
        return os.str();
    }
    const int digits = std::max(twos, fives);
    std::int64_t scale = 1;
    for (int i = 0; i < digits; ++i)
        scale *= 10;
    const std::int64_t scaled = r.numerator() * (scale / r.denominator());
    const bool negative = scaled < 0;
    const std::int64_t mag = negative ? -scaled : scaled;
    os << (negative ? "-" : "") << mag / scale;
    if (digits > 0) {
        std::string frac = std::to_string(mag % scale);
        frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
        os << '.' << frac;
    }
    return os.str();
}

} // namespace pfalab::cost
