#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rlaif::par {

// Execution mode for the chunked Monte Carlo kernels. `parallel` runs chunks
// under OpenMP; `serial` is the reference implementation kept for testing and
// benchmarking. Both modes produce bit-identical results: work is split into
// fixed-size chunks seeded independently of the thread count, and chunk
// summaries are folded in chunk order.
enum class ExecMode { serial, parallel };

ExecMode exec_mode();
void set_exec_mode(ExecMode mode);
bool openmp_enabled();

// Fixed chunk size. Part of the determinism contract: changing it changes
// every seeded result, so treat it like a format version.
inline constexpr std::int64_t kChunkSize = 4096;

struct ChunkRange {
    std::int64_t index;
    std::int64_t begin;
    std::int64_t end;
    std::int64_t count() const { return end - begin; }
};

inline std::int64_t chunk_count(std::int64_t total) {
    return total <= 0 ? 0 : (total + kChunkSize - 1) / kChunkSize;
}

inline ChunkRange chunk_range(std::int64_t total, std::int64_t index) {
    const std::int64_t begin = index * kChunkSize;
    const std::int64_t end = std::min(begin + kChunkSize, total);
    return {index, begin, end};
}

namespace detail {
void run_chunks(std::int64_t n_chunks, ExecMode mode, void* ctx, void (*body)(void*, std::int64_t));
}

// Evaluates body(range) for every chunk of [0, total) and returns the
// summaries indexed by chunk. The caller folds them in order.
template <typename T, typename Body>
std::vector<T> map_chunks(std::int64_t total, Body&& body, ExecMode mode = exec_mode()) {
    const std::int64_t k = chunk_count(total);
    std::vector<T> out(static_cast<std::size_t>(k));
    struct Ctx {
        std::vector<T>* out;
        Body* body;
        std::int64_t total;
    } ctx{&out, &body, total};
    detail::run_chunks(k, mode, &ctx, [](void* p, std::int64_t c) {
        auto* s = static_cast<Ctx*>(p);
        (*s->out)[static_cast<std::size_t>(c)] = (*s->body)(chunk_range(s->total, c));
    });
    return out;
}

// Streaming mean/variance accumulator (Welford) with deterministic pairwise
// merging, so chunk summaries combine in a fixed order.
struct MeanVar {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const MeanVar& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.n) / total;
        m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }

    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double std_error() const {
        return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : std::numeric_limits<double>::quiet_NaN();
    }
};

// Log-stabilized accumulator for self-normalized importance weighting.
// Tracks the running maximum exponent and sums of exp(e - max) powers, so
// arbitrarily large exponents merge without overflow and the resulting
// estimate is invariant to adding a constant to every exponent.
struct TiltAccumulator {
    std::int64_t n = 0;
    double max_exp = -std::numeric_limits<double>::infinity();
    double w = 0.0;        // sum exp(e - max_exp)
    double wphi = 0.0;     // sum phi * exp(e - max_exp)
    double w2 = 0.0;       // sum exp(2(e - max_exp))
    double w2phi = 0.0;    // sum phi * exp(2(e - max_exp))
    double w2phi2 = 0.0;   // sum phi^2 * exp(2(e - max_exp))

    void add(double exponent, double phi) {
        ++n;
        if (exponent > max_exp) {
            rescale(exponent);
        }
        const double s = std::exp(exponent - max_exp);
        const double s2 = s * s;
        w += s;
        wphi += phi * s;
        w2 += s2;
        w2phi += phi * s2;
        w2phi2 += phi * phi * s2;
    }

    void merge(const TiltAccumulator& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        TiltAccumulator other = o;
        if (other.max_exp > max_exp) {
            rescale(other.max_exp);
        } else {
            other.rescale(max_exp);
        }
        n += other.n;
        w += other.w;
        wphi += other.wphi;
        w2 += other.w2;
        w2phi += other.w2phi;
        w2phi2 += other.w2phi2;
    }

    double estimate() const { return wphi / w; }

    // Delta-method standard error of the self-normalized ratio:
    // sqrt(sum w_i^2 (phi_i - R)^2) / sum w_i.
    double std_error() const {
        const double r = estimate();
        const double num = w2phi2 - 2.0 * r * w2phi + r * r * w2;
        return std::sqrt(std::max(num, 0.0)) / w;
    }

private:
    void rescale(double new_max) {
        const double f = std::exp(max_exp - new_max);
        w *= f;
        wphi *= f;
        w2 *= f * f;
        w2phi *= f * f;
        w2phi2 *= f * f;
        max_exp = new_max;
    }
};

// Standard error of a statistic from per-chunk replicas (batch means).
inline double batch_means_std_error(const std::vector<double>& chunk_stats) {
    const std::size_t k = chunk_stats.size();
    if (k < 2) throw std::invalid_argument("batch_means_std_error: need at least 2 chunks");
    MeanVar mv;
    for (double s : chunk_stats) mv.add(s);
    return mv.std_error();
}

}  // namespace rlaif::par
