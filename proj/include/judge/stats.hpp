#pragma once

// Inferential toolkit: Mann-Whitney U, Bonferroni, one-sided exact binomial
// tail, Lorenz curve / Gini, 2x2 chi-square with phi, odds-ratio percents.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace judge::stats {

// Upper tail of the standard normal.
inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Mid-ranks (1-based) of values; ties share the mean of their rank block.
inline std::vector<double> fractional_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
        i = j + 1;
    }
    return ranks;
}

struct MWResult {
    double u = 0;                    // U for xs: #(x > y) + 0.5 #(x == y)
    double u_y = 0;
    double z = 0;                    // signed, positive when xs tend larger
    double p_two_tailed = 1;
    double effect_rank_biserial = 0;
    double effect_cles = 0.5;
    bool exact = false;
};

inline constexpr std::size_t kMannWhitneyExactMax = 12;

inline MWResult mann_whitney(std::span<const double> xs, std::span<const double> ys) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("mann_whitney: empty sample");
    const std::size_t n1 = xs.size(), n2 = ys.size(), n = n1 + n2;
    std::vector<double> pooled(xs.begin(), xs.end());
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    const auto ranks = fractional_ranks(pooled);

    const double rank_sum_x = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n1), 0.0);
    const double n1d = static_cast<double>(n1), n2d = static_cast<double>(n2);
    MWResult r;
    r.u = rank_sum_x - n1d * (n1d + 1) / 2;
    r.u_y = n1d * n2d - r.u;
    r.effect_cles = r.u / (n1d * n2d);
    r.effect_rank_biserial = 2 * r.effect_cles - 1;

    const double mean = n1d * n2d / 2;
    double tie_term = 0;
    {
        std::vector<double> sorted = pooled;
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
    }
    const double nd = static_cast<double>(n);
    const double var = n1d * n2d / 12.0 * ((nd + 1) - tie_term / (nd * (nd - 1)));
    const double dev = r.u - mean;
    if (var > 0) {
        const double corrected = std::max(std::abs(dev) - 0.5, 0.0);
        r.z = std::copysign(corrected / std::sqrt(var), dev);
    }

    if (n <= kMannWhitneyExactMax) {
        // Enumerate every assignment of n1 pooled positions to the x sample.
        const double observed = std::abs(dev);
        const double base = n1d * (n1d + 1) / 2;
        std::uint64_t extreme = 0, total = 0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != n1) continue;
            double rs = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (mask & (1u << k)) rs += ranks[k];
            }
            ++total;
            if (std::abs(rs - base - mean) >= observed - 1e-9) ++extreme;
        }
        r.p_two_tailed = static_cast<double>(extreme) / static_cast<double>(total);
        r.exact = true;
    } else {
        r.p_two_tailed = var > 0 ? std::min(1.0, 2 * normal_sf(std::abs(r.z))) : 1.0;
    }
    return r;
}

inline std::vector<double> bonferroni(std::span<const double> pvals, std::size_t m) {
    std::vector<double> out;
    out.reserve(pvals.size());
    for (double p : pvals) out.push_back(std::min(1.0, static_cast<double>(m) * p));
    return out;
}

inline std::vector<double> bonferroni(std::span<const double> pvals) {
    return bonferroni(pvals, pvals.size());
}

inline double log_binomial_pmf(std::uint64_t k, std::uint64_t n, double p) {
    const double kd = static_cast<double>(k), nd = static_cast<double>(n);
    return std::lgamma(nd + 1) - std::lgamma(kd + 1) - std::lgamma(nd - kd + 1) +
           kd * std::log(p) + (nd - kd) * std::log1p(-p);
}

// P(X >= k_neg) for X ~ Binomial(n, p0), summed in log space.
inline double binomial_test_one_sided(std::int64_t k_neg, std::int64_t n, double p0) {
    if (n < 0 || k_neg > n) throw std::invalid_argument("binomial_test_one_sided: need k <= n");
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("binomial_test_one_sided: p0 outside [0,1]");
    if (k_neg <= 0) return 1.0;
    if (p0 == 0.0) return 0.0;
    if (p0 == 1.0) return 1.0;
    const auto un = static_cast<std::uint64_t>(n), uk = static_cast<std::uint64_t>(k_neg);
    const auto mode = static_cast<std::uint64_t>(std::floor((static_cast<double>(n) + 1) * p0));
    const std::uint64_t peak = std::clamp(mode, uk, un);
    const double lmax = log_binomial_pmf(peak, un, p0);
    double acc = 0;
    for (std::uint64_t i = uk; i <= un; ++i) {
        const double term = std::exp(log_binomial_pmf(i, un, p0) - lmax);
        acc += term;
        if (i > peak && term < 1e-18 * acc) break;
    }
    return std::min(1.0, std::exp(lmax + std::log(acc)));
}

struct LorenzResult {
    std::vector<std::pair<double, double>> points;  // (population share, quantity share)
    double gini = 0;           // 1 - 2 * trapezoidal area
    double gini_pairwise = 0;  // sum |xi - xj| / (2 n^2 mean)
};

inline LorenzResult lorenz_gini(std::span<const double> quantities) {
    if (quantities.empty()) throw std::invalid_argument("lorenz_gini: empty input");
    std::vector<double> xs(quantities.begin(), quantities.end());
    for (double x : xs) {
        if (!(x >= 0) || !std::isfinite(x)) throw std::invalid_argument("lorenz_gini: negative or non-finite quantity");
    }
    std::sort(xs.begin(), xs.end());
    const double total = std::accumulate(xs.begin(), xs.end(), 0.0);
    if (!(total > 0)) throw std::invalid_argument("lorenz_gini: all quantities are zero");
    const auto n = xs.size();
    const double nd = static_cast<double>(n);

    LorenzResult r;
    r.points.reserve(n + 1);
    r.points.emplace_back(0.0, 0.0);
    double cum = 0, area = 0, prev = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cum += xs[i];
        const double share = i + 1 == n ? 1.0 : cum / total;
        area += (prev + share) / (2 * nd);
        r.points.emplace_back(static_cast<double>(i + 1) / nd, share);
        prev = share;
    }
    r.gini = 1 - 2 * area;

    // Sum over i<j of (x_j - x_i) for sorted x equals sum x_i (2i - n + 1).
    double pair_sum = 0;
    for (std::size_t i = 0; i < n; ++i) pair_sum += xs[i] * (2.0 * static_cast<double>(i) - nd + 1);
    r.gini_pairwise = 2 * pair_sum / (2 * nd * nd * (total / nd));
    return r;
}

struct Chi2Result {
    double chi2 = 0;
    int dof = 1;
    double p = 1;
    double phi = 0;
    std::uint64_t n = 0;
};

// Upper tail of chi-square with one degree of freedom.
inline double chi2_sf_dof1(double x) { return x <= 0 ? 1.0 : std::erfc(std::sqrt(x / 2)); }

// table[row][col]; no continuity correction.
inline Chi2Result chi_square_phi(const std::array<std::array<std::uint64_t, 2>, 2>& table) {
    const double a = static_cast<double>(table[0][0]), b = static_cast<double>(table[0][1]);
    const double c = static_cast<double>(table[1][0]), d = static_cast<double>(table[1][1]);
    const double r0 = a + b, r1 = c + d, c0 = a + c, c1 = b + d;
    if (r0 == 0 || r1 == 0 || c0 == 0 || c1 == 0) {
        throw std::invalid_argument("chi_square_phi: zero marginal");
    }
    Chi2Result r;
    r.n = table[0][0] + table[0][1] + table[1][0] + table[1][1];
    const double nd = static_cast<double>(r.n);
    const double cross = a * d - b * c;
    r.chi2 = nd * cross * cross / (r0 * r1 * c0 * c1);
    r.p = chi2_sf_dof1(r.chi2);
    r.phi = std::sqrt(r.chi2 / nd);
    return r;
}

inline double odds_ratio_percent(double coefficient) { return 100.0 * std::expm1(coefficient); }

} // namespace judge::stats
