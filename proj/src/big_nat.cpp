#include "halrates/big_nat.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace halrates {

namespace mp = boost::multiprecision;

BigInt floor_rat(const BigRat& r) {
    BigInt num = mp::numerator(r);
    BigInt den = mp::denominator(r); // canonical: den > 0
    BigInt q = num / den;            // truncates toward zero
    if (num < 0 && q * den != num) --q;
    return q;
}

BigInt ceil_rat(const BigRat& r) {
    return -floor_rat(-r);
}

BigInt ceil_div(const BigInt& num, const BigInt& den) {
    if (den <= 0) throw DomainError("ceil_div: denominator must be positive");
    return ceil_rat(BigRat(num, den));
}

BigRat rat_from_double(double d) {
    if (!std::isfinite(d)) throw DomainError("rat_from_double: value is not finite");
    return BigRat(d); // boost converts the exact binary value
}

BigRat rat_from_decimal(std::string_view text) {
    auto fail = [&]() -> BigRat {
        throw DomainError("rat_from_decimal: malformed decimal literal '" + std::string(text) + "'");
    };
    std::size_t i = 0;
    const std::size_t n = text.size();
    bool neg = false;
    if (i < n && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
    }
    BigInt digits = 0;
    long frac = 0;
    bool any = false, in_frac = false;
    for (; i < n; ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            digits = digits * 10 + (c - '0');
            if (in_frac) ++frac;
            any = true;
        } else if (c == '.') {
            if (in_frac) return fail();
            in_frac = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            return fail();
        }
    }
    if (!any) return fail();
    long exp10 = 0;
    if (i < n) { // exponent part
        ++i; // skip 'e'
        bool eneg = false;
        if (i < n && (text[i] == '+' || text[i] == '-')) {
            eneg = text[i] == '-';
            ++i;
        }
        if (i >= n) return fail();
        long ev = 0;
        for (; i < n; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) return fail();
            ev = ev * 10 + (text[i] - '0');
            if (ev > 100000) return fail(); // keep pow10 sane
        }
        exp10 = eneg ? -ev : ev;
    }
    BigRat value(digits, 1);
    long net = exp10 - frac;
    if (net > 0)
        value *= BigRat(mp::pow(BigInt(10), static_cast<unsigned>(net)), 1);
    else if (net < 0)
        value /= BigRat(mp::pow(BigInt(10), static_cast<unsigned>(-net)), 1);
    if (neg) value = -value;
    return value;
}

namespace {

// v > 0 as t * 2^s with t exactly representable in double. When truncation
// dropped low bits the true value lies in (t*2^s, (t+1)*2^s).
struct Split {
    double t;
    long s;
    bool exact;
};

Split split_big(const BigInt& v) {
    unsigned bits = static_cast<unsigned>(mp::msb(v)) + 1;
    if (bits <= 53) return {v.convert_to<double>(), 0, true};
    long shift = static_cast<long>(bits) - 53;
    BigInt top = v >> shift;
    return {top.convert_to<double>(), shift, (top << shift) == v};
}

double nudge_up(double x, int ulps) {
    for (int k = 0; k < ulps; ++k) x = std::nextafter(x, std::numeric_limits<double>::infinity());
    return x;
}

constexpr double kLn2Hi = 0.6931471805599453; // double nearest ln 2, error < 1e-16 relative

} // namespace

BigInt ceil_ln_upper(const BigRat& x) {
    if (x <= 0) throw DomainError("ceil_ln_upper: argument must be positive");
    BigInt p = mp::numerator(x);
    BigInt q = mp::denominator(x);
    Split sp = split_big(p);
    Split sq = split_big(q);
    // ln x <= ln(tp [+1 if truncated]) + sp ln2 - (ln tq + sq ln2): numerator
    // truncation errs upward via tp+1, denominator truncation already errs
    // upward by dropping to tq. Exact splits need no compensation, which
    // keeps the bound tight for small arguments.
    double a = std::log(sp.exact ? sp.t : sp.t + 1.0);
    double b = std::log(sq.t);
    double c = static_cast<double>(sp.s - sq.s) * kLn2Hi;
    double up = a - b + c;
    // Absorb double rounding (each term is accurate to ~1 ulp of its own
    // magnitude) with an absolute slack; overshooting the true ln by 1e-12
    // can only push the ceiling up, which keeps the bound valid.
    double slack = 1e-12 + 1e-15 * (std::abs(a) + std::abs(b) + std::abs(c));
    return ceil_rat(rat_from_double(up + slack));
}

BigInt ceil_double_upper(double x) {
    if (!std::isfinite(x)) throw NumericBlowupError("ceil_double_upper: value is not finite");
    if (x < 0) throw DomainError("ceil_double_upper: value must be nonnegative");
    return ceil_rat(rat_from_double(nudge_up(x, 2)));
}

double log10_of(const BigInt& v) {
    if (v <= 0) throw DomainError("log10_of: argument must be positive");
    Split s = split_big(v);
    return std::log10(s.t) + static_cast<double>(s.s) * 0.30102999566398119521; // log10(2)
}

BoundIndex::BoundIndex(BigInt v) : value_(std::move(v)) {
    if (value_ < 1) throw DomainError("BoundIndex: index must be >= 1");
}

bool BoundIndex::fits_u64() const {
    return value_ <= BigInt(std::numeric_limits<std::uint64_t>::max());
}

std::uint64_t BoundIndex::as_u64() const {
    if (!fits_u64())
        throw NumericBlowupError("BoundIndex: value " + decimal() + " does not fit in 64 bits");
    return value_.convert_to<std::uint64_t>();
}

} // namespace halrates
