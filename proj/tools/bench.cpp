// Benchmark: OpenMP-parallel kernels against their serial reference
// implementations (triangle counting and exhaustive STS counting).
#include <chrono>
#include <cstdio>

#include "tridec/counting.hpp"
#include "tridec/graph.hpp"
#include "tridec/rng.hpp"

using namespace tridec;

namespace {

template <class F>
double time_of(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
    Rng rng(20260826);

    std::printf("%-34s %10s %10s %8s\n", "kernel", "serial(s)", "parallel", "speedup");

    for (int n : {1000, 2000}) {
        const Graph g = random_graph(n, 0.4, rng);
        std::int64_t a = 0, b = 0;
        const double ts = time_of([&] { a = count_triangles_serial(g); });
        const double tp = time_of([&] { b = count_triangles(g); });
        if (a != b) {
            std::printf("triangle count mismatch: %lld vs %lld\n",
                        static_cast<long long>(a), static_cast<long long>(b));
            return 1;
        }
        std::printf("triangle-count G(%d,0.4)%*s %10.4f %10.4f %7.2fx\n", n,
                    n < 10000 ? 9 : 8, "", ts, tp, ts / tp);
    }

    {
        std::uint64_t a = 0, b = 0;
        const double ts = time_of([&] { a = brute_force_count_sts_serial(9); });
        const double tp = time_of([&] { b = brute_force_count_sts(9); });
        if (a != b || a != 840) {
            std::printf("STS(9) mismatch: %llu vs %llu\n",
                        static_cast<unsigned long long>(a),
                        static_cast<unsigned long long>(b));
            return 1;
        }
        std::printf("%-34s %10.4f %10.4f %7.2fx\n", "STS(9) exhaustive count", ts, tp,
                    ts / tp);
    }
    {
        std::uint64_t a = 0, b = 0;
        const double ts = time_of([&] { a = brute_force_count_sts_serial(13, true); });
        const double tp = time_of([&] { b = brute_force_count_sts(13, true); });
        if (a != b || a != 1197504000ull) {
            std::printf("STS(13) mismatch: %llu vs %llu\n",
                        static_cast<unsigned long long>(a),
                        static_cast<unsigned long long>(b));
            return 1;
        }
        std::printf("%-34s %10.4f %10.4f %7.2fx\n", "STS(13) symmetry-reduced count",
                    ts, tp, ts / tp);
    }
    return 0;
}
