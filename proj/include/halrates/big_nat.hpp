#pragma once

// Exact arithmetic core. Certified iteration bounds routinely exceed 2^64
// (the harmonic rate is 4^(16M/eps+3)), so indices are arbitrary-precision
// naturals and all epsilon arithmetic is done on exact rationals. Doubles
// only ever appear in *views* of these values, never in their computation.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <string_view>

#include "halrates/errors.hpp"

namespace halrates {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// floor/ceil of an exact rational, exact.
BigInt floor_rat(const BigRat& r);
BigInt ceil_rat(const BigRat& r);

// ceil(num/den) for integers, den > 0.
BigInt ceil_div(const BigInt& num, const BigInt& den);

// The exact rational equal to the given double (which is a binary rational).
// Throws DomainError on NaN/inf.
BigRat rat_from_double(double d);

// Parse a decimal literal ("0.25", "1", "2.5e-3", ".5") to the exact rational
// it denotes. This is how eps crosses the CLI/config boundary: "0.1" means
// 1/10, not the nearest double. Throws DomainError on malformed input.
BigRat rat_from_decimal(std::string_view text);

// Sound upper bound on ceil(ln x) for rational x > 0: evaluate ln in double,
// nudge the result up a few ulps to absorb rounding, then ceil. Values too
// large for double are split as t*2^s with the truncation erring upward.
BigInt ceil_ln_upper(const BigRat& x);

// Round a nonnegative double *up* to an integer, compensating for the
// possibility that the double itself under-represents the true value by a
// few ulps. Used for empirical bounds where soundness means "not too small".
BigInt ceil_double_upper(double x);

// log10 of a positive BigInt, accurate to well under 1e-6.
double log10_of(const BigInt& v);

// A certified iteration index: an arbitrary-precision natural >= 1.
// Operations that need a machine index can ask whether it fits in 64 bits.
class BoundIndex {
public:
    explicit BoundIndex(BigInt v);
    static BoundIndex from_u64(std::uint64_t v) { return BoundIndex(BigInt(v)); }

    const BigInt& value() const { return value_; }
    std::string decimal() const { return value_.str(); }
    double log10_view() const { return log10_of(value_); }

    bool fits_u64() const;
    std::uint64_t as_u64() const; // throws NumericBlowupError if !fits_u64()

    friend bool operator==(const BoundIndex& a, const BoundIndex& b) { return a.value_ == b.value_; }
    friend bool operator!=(const BoundIndex& a, const BoundIndex& b) { return a.value_ != b.value_; }
    friend bool operator<(const BoundIndex& a, const BoundIndex& b) { return a.value_ < b.value_; }
    friend bool operator<=(const BoundIndex& a, const BoundIndex& b) { return a.value_ <= b.value_; }
    friend bool operator>(const BoundIndex& a, const BoundIndex& b) { return a.value_ > b.value_; }
    friend bool operator>=(const BoundIndex& a, const BoundIndex& b) { return a.value_ >= b.value_; }

private:
    BigInt value_;
};

inline const BoundIndex& max_bound(const BoundIndex& a, const BoundIndex& b) {
    return a >= b ? a : b;
}

} // namespace halrates
