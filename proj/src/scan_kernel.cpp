#include <algorithm>
#include <cmath>
#include <cstring>

#include "hbeta/errors.hpp"
#include "hbeta/logistic.hpp"

namespace hbeta::logistic {

namespace {

// softplus(z) = max(z, 0) + log(1 + min(e^z, e^-z)). Along an equally spaced
// candidate run, e^z and e^-z are geometric in the candidate index, so each
// row carries two running products reseeded once per window. Rows are
// processed in L1-sized chunks; the log terms of a chunk are folded into
// per-lane products of factors in [1, 2] and logged once.
constexpr std::size_t kWindow = 256;
constexpr std::size_t kChunk = 512;
static_assert(kChunk < 1000);
constexpr std::size_t kWidth = 8;
constexpr std::size_t kLanes = 2 * kWidth;
constexpr double kDirectThreshold = 650.0;

using Vec = double __attribute__((vector_size(kWidth * sizeof(double))));

inline Vec load(const double* p) {
    Vec v;
    std::memcpy(&v, p, sizeof(Vec));
    return v;
}

inline void store(double* p, Vec v) { std::memcpy(p, &v, sizeof(Vec)); }

// Factors lie in [1, 2] and a chunk has at most kChunk of them, so the full
// product stays below 2^kChunk and one log per chunk suffices.
inline double log_product(Vec prod) {
    double p = 1.0;
    for (std::size_t l = 0; l < kWidth; ++l) p *= prod[l];
    return std::log(p);
}

inline double horizontal_sum(Vec v) {
    double s = 0.0;
    for (std::size_t l = 0; l < kWidth; ++l) s += v[l];
    return s;
}

// One candidate over one chunk: returns sum of max(z, 0) and the log of the
// product of 1 + min(t, u), advancing the running products by one step.
inline double chunk_sum(const double* __restrict cb, const double* __restrict cx, const double* __restrict cu,
                        const double* __restrict cd, double* __restrict tt, double* __restrict uu,
                        std::size_t len, double bk) {
    const Vec zero = {};
    const Vec one = zero + 1.0;
    Vec lin0 = zero, lin1 = zero, prod0 = one, prod1 = one;
    for (std::size_t r = 0; r < len; r += kLanes) {
        const Vec z0 = load(cb + r) + load(cx + r) * bk;
        const Vec z1 = load(cb + r + kWidth) + load(cx + r + kWidth) * bk;
        const Vec t0 = load(tt + r), t1 = load(tt + r + kWidth);
        const Vec u0 = load(uu + r), u1 = load(uu + r + kWidth);
        lin0 += z0 > zero ? z0 : zero;
        lin1 += z1 > zero ? z1 : zero;
        prod0 *= one + (t0 < u0 ? t0 : u0);
        prod1 *= one + (t1 < u1 ? t1 : u1);
        store(tt + r, t0 * load(cu + r));
        store(tt + r + kWidth, t1 * load(cu + r + kWidth));
        store(uu + r, u0 * load(cd + r));
        store(uu + r + kWidth, u1 * load(cd + r + kWidth));
    }
    return horizontal_sum(lin0 + lin1) + log_product(prod0 * prod1);
}

void direct_sums(std::span<const double> base, std::span<const double> x, std::span<const double> cand,
                 std::span<double> out) {
    for (std::size_t k = 0; k < cand.size(); ++k) {
        double s = 0.0;
        for (std::size_t r = 0; r < base.size(); ++r) s += softplus(base[r] + x[r] * cand[k]);
        out[k] = s;
    }
}

}  // namespace

void softplus_sums(std::span<const double> base, std::span<const double> x, const CandidateSet& candidates,
                   std::span<double> out) {
    if (base.size() != x.size() || out.size() != candidates.size()) {
        throw InvalidArgument("softplus_sums: size mismatch");
    }
    const std::size_t n = base.size();
    const std::size_t K = candidates.size();
    if (!candidates.equally_spaced() || n < kLanes) {
        direct_sums(base, x, candidates.values(), out);
        return;
    }

    // Padding rows have z = 0 and zero running products, so they add nothing.
    const std::size_t padded = (n + kLanes - 1) / kLanes * kLanes;
    std::vector<double> b0(padded, 0.0), xs(padded, 0.0), up(padded, 1.0), down(padded, 1.0);
    std::copy(base.begin(), base.end(), b0.begin());
    std::copy(x.begin(), x.end(), xs.begin());
    const double step = candidates.step();
    for (std::size_t r = 0; r < n; ++r) {
        up[r] = std::exp(xs[r] * step);
        down[r] = 1.0 / up[r];
    }
    std::vector<double> t(kChunk), u(kChunk);
    std::vector<std::size_t> direct_rows;
    std::fill(out.begin(), out.end(), 0.0);

    for (std::size_t k0 = 0; k0 < K; k0 += kWindow) {
        const std::size_t k1 = std::min(K, k0 + kWindow);
        const double first = candidates[k0];
        const double last = candidates[k1 - 1];
        for (std::size_t c0 = 0; c0 < padded; c0 += kChunk) {
            const std::size_t len = std::min(padded, c0 + kChunk) - c0;
            const double* __restrict cb = b0.data() + c0;
            const double* __restrict cx = xs.data() + c0;
            const double* __restrict cu = up.data() + c0;
            const double* __restrict cd = down.data() + c0;
            double* __restrict tt = t.data();
            double* __restrict uu = u.data();
            direct_rows.clear();
            for (std::size_t r = 0; r < len; ++r) {
                const double z0 = cb[r] + cx[r] * first;
                const double z1 = cb[r] + cx[r] * last;
                if (c0 + r >= n) {
                    tt[r] = uu[r] = 0.0;
                } else if (std::max(std::abs(z0), std::abs(z1)) > kDirectThreshold) {
                    tt[r] = uu[r] = 0.0;
                    direct_rows.push_back(c0 + r);
                } else {
                    tt[r] = std::exp(z0);
                    uu[r] = 1.0 / tt[r];
                }
            }

            for (std::size_t k = k0; k < k1; ++k) {
                const double bk = candidates[k];
                double total = chunk_sum(cb, cx, cu, cd, tt, uu, len, bk);
                for (std::size_t r : direct_rows) {
                    total += std::log1p(std::exp(-std::abs(b0[r] + xs[r] * bk)));
                }
                out[k] += total;
            }
        }
    }
}

}  // namespace hbeta::logistic
