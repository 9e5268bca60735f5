#pragma once

// Rank-turbulence divergence between two Zipfian term distributions.
//
// Each type tau gets a (fractional) rank in both systems. Types missing from
// one system share that system's tied-last rank, N_types + (N_missing + 1)/2.
// The per-type divergence is
//
//     delta(tau) = | r1^-alpha - r2^-alpha |^(1 / (alpha + 1))
//
// and contributions are delta / N, where N is the same sum evaluated as if
// the two systems shared no types at all. The (alpha + 1)/alpha prefactor of
// the usual definition cancels in that ratio. A contribution is positive when
// the type ranks higher (numerically smaller rank) in system 1.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "judge/text.hpp"

namespace judge {

inline constexpr double kDefaultRtdAlpha = 1.0 / 3.0;

struct RankedTerm {
    std::uint64_t count = 0;
    double rank = 0;
};

struct RankedDistribution {
    std::map<std::string, RankedTerm, std::less<>> terms;
    std::size_t n_types = 0;
};

inline RankedDistribution rank_terms(const TermDistribution& dist) {
    std::vector<std::pair<std::string_view, std::uint64_t>> order;
    order.reserve(dist.counts.size());
    for (const auto& [t, c] : dist.counts) order.emplace_back(t, c);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    RankedDistribution r;
    r.n_types = order.size();
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && order[j + 1].second == order[i].second) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            r.terms.emplace(std::string(order[k].first), RankedTerm{order[k].second, rank});
        }
        i = j + 1;
    }
    return r;
}

struct RTDTerm {
    std::string term;
    std::uint64_t count1 = 0, count2 = 0;
    double rank1 = 0, rank2 = 0;
    double raw = 0;           // delta(tau), unnormalised
    double contribution = 0;  // signed, normalised
};

struct RTDResult {
    double alpha = kDefaultRtdAlpha;
    std::vector<RTDTerm> terms;  // lexicographic by term
    double normalization = 0;
    double total = 0;
};

inline double rtd_delta(double r1, double r2, double alpha) {
    return std::pow(std::abs(std::pow(r1, -alpha) - std::pow(r2, -alpha)), 1.0 / (alpha + 1.0));
}

inline RTDResult rtd_contributions(const TermDistribution& d1, const TermDistribution& d2,
                                   double alpha = kDefaultRtdAlpha) {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw std::invalid_argument("rtd: alpha must be > 0");
    if (d1.empty() || d2.empty()) throw std::invalid_argument("rtd: both distributions must be nonempty");

    const auto r1 = rank_terms(d1);
    const auto r2 = rank_terms(d2);
    std::size_t only1 = 0, only2 = 0;
    for (const auto& [t, _] : r1.terms) only1 += !r2.terms.contains(t);
    for (const auto& [t, _] : r2.terms) only2 += !r1.terms.contains(t);
    const double n1 = static_cast<double>(r1.n_types), n2 = static_cast<double>(r2.n_types);
    const double missing_rank1 = n1 + (static_cast<double>(only2) + 1) / 2;  // in system 1
    const double missing_rank2 = n2 + (static_cast<double>(only1) + 1) / 2;  // in system 2

    RTDResult res;
    res.alpha = alpha;
    auto it1 = r1.terms.begin();
    auto it2 = r2.terms.begin();
    while (it1 != r1.terms.end() || it2 != r2.terms.end()) {
        RTDTerm t;
        if (it2 == r2.terms.end() || (it1 != r1.terms.end() && it1->first < it2->first)) {
            t.term = it1->first;
            t.count1 = it1->second.count;
            t.rank1 = it1->second.rank;
            t.rank2 = missing_rank2;
            ++it1;
        } else if (it1 == r1.terms.end() || it2->first < it1->first) {
            t.term = it2->first;
            t.count2 = it2->second.count;
            t.rank1 = missing_rank1;
            t.rank2 = it2->second.rank;
            ++it2;
        } else {
            t.term = it1->first;
            t.count1 = it1->second.count;
            t.count2 = it2->second.count;
            t.rank1 = it1->second.rank;
            t.rank2 = it2->second.rank;
            ++it1;
            ++it2;
        }
        t.raw = rtd_delta(t.rank1, t.rank2, alpha);
        res.terms.push_back(std::move(t));
    }

    // Disjoint systems: every type of one sits tied-last in the other.
    const double disjoint_rank1 = n1 + (n2 + 1) / 2;
    const double disjoint_rank2 = n2 + (n1 + 1) / 2;
    double norm = 0;
    for (const auto& [_, rt] : r1.terms) norm += rtd_delta(rt.rank, disjoint_rank2, alpha);
    for (const auto& [_, rt] : r2.terms) norm += rtd_delta(disjoint_rank1, rt.rank, alpha);
    res.normalization = norm;

    for (auto& t : res.terms) {
        const double magnitude = t.raw / norm;
        t.contribution = t.rank1 < t.rank2 ? magnitude : (t.rank1 > t.rank2 ? -magnitude : 0.0);
        res.total += magnitude;
    }
    return res;
}

enum class Side { Corpus1, Corpus2 };

inline std::vector<RTDTerm> top_divergent_terms(const RTDResult& result, std::size_t k, Side side) {
    if (k < 1) throw std::invalid_argument("top_divergent_terms: k must be >= 1");
    std::vector<RTDTerm> out;
    for (const auto& t : result.terms) {
        if ((side == Side::Corpus1 && t.contribution > 0) || (side == Side::Corpus2 && t.contribution < 0)) {
            out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end(), [](const RTDTerm& a, const RTDTerm& b) {
        const double ma = std::abs(a.contribution), mb = std::abs(b.contribution);
        if (ma != mb) return ma > mb;
        return a.term < b.term;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

} // namespace judge
