// Timing harness for the verification kernels: OpenMP-parallel versions vs
// the serial references they must agree with. Prints one line per kernel with
// both timings and confirms the results are bit-identical (the parallel
// versions use a fixed block decomposition precisely so that they are).

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <vector>

#include <omp.h>

#include "halrates/kernels.hpp"
#include "halrates/rng.hpp"

using namespace halrates;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <class F> double timed(F&& f, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t0 = now_ms();
        f();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-14s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "bit-identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const std::uint64_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : (1ull << 26);
    std::printf("kernels benchmark: n = %" PRIu64 ", omp_get_max_threads = %d\n", n,
                omp_get_max_threads());

    // Harmonic-flavored terms with some seeded jitter, indexed from 1.
    std::vector<double> terms(n + 1, 0.0);
    SmallRng rng(42);
    for (std::uint64_t i = 1; i <= n; ++i) terms[i] = 1.0 / double(i) + 1e-12 * rng.next_unit();
    auto term_at = [&terms](std::uint64_t i) { return terms[i]; };

    bool all_ok = true;

    {
        double ss = 0, ps = 0;
        double ts = timed([&] { ss = kernels::sum_range_serial(term_at, 1, n); });
        double tp = timed([&] { ps = kernels::sum_range(term_at, 1, n); });
        bool ok = ss == ps;
        all_ok &= ok;
        report("sum_range", ts, tp, ok);
    }
    {
        std::vector<std::uint64_t> checkpoints;
        for (std::uint64_t c = n / 64; c <= n; c += n / 64) checkpoints.push_back(c);
        std::vector<double> rs, rp;
        double ts = timed([&] { rs = kernels::prefix_sums_serial(term_at, 1, checkpoints); });
        double tp = timed([&] { rp = kernels::prefix_sums(term_at, 1, checkpoints); });
        bool ok = rs == rp;
        all_ok &= ok;
        report("prefix_sums", ts, tp, ok);
    }
    {
        std::pair<double, std::uint64_t> ms, mp;
        double ts = timed([&] { ms = kernels::max_range_serial(term_at, 1, n); });
        double tp = timed([&] { mp = kernels::max_range(term_at, 1, n); });
        bool ok = ms == mp;
        all_ok &= ok;
        report("max_range", ts, tp, ok);
    }
    {
        // Predicate true only deep into the range, so both sides scan far.
        auto pred = [&terms, n](std::uint64_t i) { return terms[i] < 1.2 / double(n); };
        std::optional<std::uint64_t> fs, fp;
        double ts = timed([&] { fs = kernels::first_where_serial(pred, 1, n); });
        double tp = timed([&] { fp = kernels::first_where(pred, 1, n); });
        bool ok = fs == fp;
        all_ok &= ok;
        report("first_where", ts, tp, ok);
    }

    if (!all_ok) {
        std::printf("FAILURE: parallel kernels disagree with serial references\n");
        return 1;
    }
    return 0;
}
