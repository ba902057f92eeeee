#pragma once

// Data-parallel scan kernels used by the verification and sampling layers.
// Every parallel kernel has a serial reference twin, and the parallel one is
// built so its result is *bit-identical* regardless of thread count: work is
// cut into fixed-size blocks, each block is reduced with compensated
// summation, and block results are combined in index order on one thread.
// That property is what lets the CLI promise byte-identical output files.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <omp.h>
#include <optional>
#include <utility>
#include <vector>

namespace halrates::kernels {

// Neumaier variant of Kahan summation: the compensation also catches the
// case where the addend dominates the running sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

inline constexpr std::uint64_t kBlockSize = std::uint64_t{1} << 16;

// ---- serial references -----------------------------------------------------

// Sum of f(i) for i in [lo, hi] inclusive; empty if hi < lo.
template <class F>
double sum_range_serial(F&& f, std::uint64_t lo, std::uint64_t hi) {
    CompensatedSum acc;
    if (hi < lo) return 0.0;
    for (std::uint64_t i = lo;; ++i) {
        acc.add(f(i));
        if (i == hi) break; // guard u64 wrap at hi == max
    }
    return acc.value();
}

// Partial sums of f over [lo, c] for each checkpoint c (ascending, >= lo).
template <class F>
std::vector<double> prefix_sums_serial(F&& f, std::uint64_t lo,
                                       const std::vector<std::uint64_t>& checkpoints) {
    std::vector<double> out;
    out.reserve(checkpoints.size());
    CompensatedSum acc;
    std::uint64_t next = lo;
    for (std::uint64_t c : checkpoints) {
        for (; next <= c; ++next) acc.add(f(next));
        out.push_back(acc.value());
    }
    return out;
}

// Maximum of f over [lo, hi] and the first index attaining it.
template <class F>
std::pair<double, std::uint64_t> max_range_serial(F&& f, std::uint64_t lo, std::uint64_t hi) {
    double best = f(lo);
    std::uint64_t arg = lo;
    for (std::uint64_t i = lo + 1; i <= hi && i != 0; ++i) {
        double v = f(i);
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    return {best, arg};
}

// First index in [lo, hi] where pred holds, if any.
template <class P>
std::optional<std::uint64_t> first_where_serial(P&& pred, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i <= hi; ++i) {
        if (pred(i)) return i;
        if (i == hi) break;
    }
    return std::nullopt;
}

// ---- deterministic parallel versions --------------------------------------

namespace detail {

inline std::uint64_t block_count(std::uint64_t lo, std::uint64_t hi) {
    return (hi - lo) / kBlockSize + 1;
}

} // namespace detail

template <class F>
double sum_range(F&& f, std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) return 0.0;
    const std::uint64_t nblocks = detail::block_count(lo, hi);
    std::vector<CompensatedSum> partial(nblocks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        const std::uint64_t start = lo + static_cast<std::uint64_t>(b) * kBlockSize;
        const std::uint64_t stop = std::min(hi, start + kBlockSize - 1);
        CompensatedSum acc;
        for (std::uint64_t i = start; i <= stop; ++i) {
            acc.add(f(i));
            if (i == stop) break;
        }
        partial[static_cast<std::size_t>(b)] = acc;
    }
    CompensatedSum total;
    for (const auto& p : partial) {
        total.add(p.sum);
        total.add(p.comp);
    }
    return total.value();
}

// Parallel block sums, then one ordered pass that replays only the partial
// block containing each checkpoint. Identical combination order for any
// thread count.
template <class F>
std::vector<double> prefix_sums(F&& f, std::uint64_t lo,
                                const std::vector<std::uint64_t>& checkpoints) {
    std::vector<double> out(checkpoints.size());
    if (checkpoints.empty()) return out;
    const std::uint64_t hi = checkpoints.back();
    const std::uint64_t nblocks = detail::block_count(lo, hi);
    std::vector<CompensatedSum> partial(nblocks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        const std::uint64_t start = lo + static_cast<std::uint64_t>(b) * kBlockSize;
        const std::uint64_t stop = std::min(hi, start + kBlockSize - 1);
        CompensatedSum acc;
        for (std::uint64_t i = start; i <= stop; ++i) acc.add(f(i));
        partial[static_cast<std::size_t>(b)] = acc;
    }
    CompensatedSum running; // everything before the current block
    std::size_t ci = 0;
    for (std::uint64_t b = 0; b < nblocks && ci < checkpoints.size(); ++b) {
        const std::uint64_t start = lo + b * kBlockSize;
        const std::uint64_t stop = std::min(hi, start + kBlockSize - 1);
        if (checkpoints[ci] <= stop) {
            // Walk this block once, emitting every checkpoint it contains.
            CompensatedSum upto = running;
            for (std::uint64_t i = start; i <= stop; ++i) {
                upto.add(f(i));
                while (ci < checkpoints.size() && checkpoints[ci] == i)
                    out[ci++] = upto.value();
            }
        }
        running.add(partial[static_cast<std::size_t>(b)].sum);
        running.add(partial[static_cast<std::size_t>(b)].comp);
    }
    return out;
}

template <class F>
std::pair<double, std::uint64_t> max_range(F&& f, std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t nblocks = detail::block_count(lo, hi);
    std::vector<std::pair<double, std::uint64_t>> partial(nblocks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        const std::uint64_t start = lo + static_cast<std::uint64_t>(b) * kBlockSize;
        const std::uint64_t stop = std::min(hi, start + kBlockSize - 1);
        partial[static_cast<std::size_t>(b)] = max_range_serial(f, start, stop);
    }
    auto best = partial[0];
    for (std::size_t b = 1; b < partial.size(); ++b)
        if (partial[b].first > best.first) best = partial[b]; // strict: keep first arg
    return best;
}

// Early-exiting parallel search: sweep groups of blocks, each block records
// its own first hit, groups are resolved in order.
template <class P>
std::optional<std::uint64_t> first_where(P&& pred, std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) return std::nullopt;
    const std::uint64_t nblocks = detail::block_count(lo, hi);
    const std::uint64_t group = 64;
    for (std::uint64_t g = 0; g < nblocks; g += group) {
        const std::uint64_t gend = std::min(nblocks, g + group);
        std::vector<std::optional<std::uint64_t>> hits(gend - g);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t b = static_cast<std::int64_t>(g); b < static_cast<std::int64_t>(gend); ++b) {
            const std::uint64_t start = lo + static_cast<std::uint64_t>(b) * kBlockSize;
            const std::uint64_t stop = std::min(hi, start + kBlockSize - 1);
            hits[static_cast<std::size_t>(b - g)] = first_where_serial(pred, start, stop);
        }
        for (const auto& h : hits)
            if (h) return h;
    }
    return std::nullopt;
}

} // namespace halrates::kernels
