#include "maskagent/edt.hpp"

#include <algorithm>

#include <omp.h>

namespace maskagent {

namespace {

// Below this many pixels a parallel region costs more than it saves.
constexpr std::size_t kParallelThreshold = 1 << 16;

// Squared distance to the nearest zero along one column, with virtual zeros
// just above the first and just below the last row.
void column_pass(const BitMask& region, int x, std::int32_t* out, std::int32_t* scratch) {
    const int h = region.height();
    const int w = region.width();
    std::int32_t run = 0;
    for (int y = 0; y < h; ++y) {
        run = region.at(x, y) ? run + 1 : 0;
        scratch[y] = run;
    }
    run = 0;
    for (int y = h - 1; y >= 0; --y) {
        run = region.at(x, y) ? run + 1 : 0;
        const std::int32_t d = std::min(scratch[y], run);
        out[static_cast<std::size_t>(y) * w + x] = d * d;
    }
}

// Exact lower envelope of parabolas (q - i)^2 + f[i] over n sample positions.
// Breakpoints are kept as fractions so every comparison is exact.
struct Envelope {
    std::vector<std::int64_t> f;
    std::vector<int> v;
    std::vector<std::int64_t> zn;  // breakpoint numerators
    std::vector<std::int64_t> zd;  // breakpoint denominators (> 0)
    std::vector<std::int64_t> d;

    explicit Envelope(int n) : f(n), v(n), zn(n + 1), zd(n + 1), d(n) {}

    void run(int n) {
        const auto numer = [&](int a, int b) {
            return (f[b] + std::int64_t{b} * b) - (f[a] + std::int64_t{a} * a);
        };
        int k = 0;
        v[0] = 0;
        for (int q = 1; q < n; ++q) {
            std::int64_t sn = numer(v[k], q);
            std::int64_t sd = 2 * std::int64_t{q - v[k]};
            // z[0] is -infinity, so the envelope's first parabola is never compared.
            while (k > 0 && sn * zd[k] <= zn[k] * sd) {
                --k;
                sn = numer(v[k], q);
                sd = 2 * std::int64_t{q - v[k]};
            }
            ++k;
            v[k] = q;
            zn[k] = sn;
            zd[k] = sd;
        }
        const int last = k;
        k = 0;
        for (int q = 0; q < n; ++q) {
            while (k < last && zn[k + 1] < std::int64_t{q} * zd[k + 1]) ++k;
            const std::int64_t dq = q - v[k];
            d[q] = dq * dq + f[v[k]];
        }
    }
};

// Row pass in place; samples 0 and w+1 are the virtual out-of-bounds zeros.
void row_pass(std::int32_t* row, int w, Envelope& env) {
    const int n = w + 2;
    env.f[0] = 0;
    env.f[n - 1] = 0;
    for (int x = 0; x < w; ++x) env.f[x + 1] = row[x];
    env.run(n);
    for (int x = 0; x < w; ++x) row[x] = static_cast<std::int32_t>(env.d[x + 1]);
}

}  // namespace

DistanceField edt_sq_serial(const BitMask& region) {
    const int w = region.width();
    const int h = region.height();
    DistanceField field{w, h, std::vector<std::int32_t>(region.size(), 0)};
    std::vector<std::int32_t> scratch(h);
    for (int x = 0; x < w; ++x) column_pass(region, x, field.values.data(), scratch.data());
    Envelope env(w + 2);
    for (int y = 0; y < h; ++y) row_pass(field.values.data() + static_cast<std::size_t>(y) * w, w, env);
    return field;
}

DistanceField edt_sq(const BitMask& region) {
    const int w = region.width();
    const int h = region.height();
    DistanceField field{w, h, std::vector<std::int32_t>(region.size(), 0)};
    const bool parallel = region.size() >= kParallelThreshold;
#pragma omp parallel if (parallel)
    {
        std::vector<std::int32_t> scratch(h);
#pragma omp for schedule(static)
        for (int x = 0; x < w; ++x) column_pass(region, x, field.values.data(), scratch.data());

        Envelope env(w + 2);
#pragma omp for schedule(static)
        for (int y = 0; y < h; ++y)
            row_pass(field.values.data() + static_cast<std::size_t>(y) * w, w, env);
    }
    return field;
}

FieldMax argmax_point(const DistanceField& field) {
    FieldMax best{{0, 0}, field.values.empty() ? 0 : field.values.front()};
    for (int y = 0; y < field.height; ++y) {
        for (int x = 0; x < field.width; ++x) {
            const auto v = field.at(x, y);
            if (v > best.value) best = {{x, y}, v};
        }
    }
    return best;
}

}  // namespace maskagent
