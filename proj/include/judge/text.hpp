#pragma once

// Tokenisation, vocabularies, count vectors and 1-gram term distributions.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace judge {

using TokenSequence = std::vector<std::string>;

namespace detail {

// Decodes one UTF-8 code point at s[i], advancing i. Invalid bytes decode to
// U+FFFD and consume a single byte.
inline char32_t next_code_point(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + static_cast<std::size_t>(len) > s.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += static_cast<std::size_t>(len);
    return cp;
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Non-ASCII code points in punctuation, symbol and emoji blocks separate
// tokens; everything else at or above U+00C0 is treated as a letter.
inline bool is_word_code_point(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
    }
    if (cp < 0xC0 || cp == 0xD7 || cp == 0xF7) return false;
    if (cp >= 0x2000 && cp <= 0x2BFF) return false;
    if (cp >= 0x3000 && cp <= 0x303F) return false;
    if (cp >= 0xFE00 && cp <= 0xFE0F) return false;
    if (cp >= 0xFFF0 && cp <= 0xFFFF) return false;
    if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;
    return true;
}

inline char32_t fold_case(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
    return cp;
}

} // namespace detail

inline TokenSequence tokenize(std::string_view text) {
    TokenSequence tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        const char32_t cp = detail::next_code_point(text, i);
        if (detail::is_word_code_point(cp)) {
            detail::append_utf8(current, detail::fold_case(cp));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

// Term -> count, ordered by term for deterministic iteration.
struct TermDistribution {
    std::map<std::string, std::uint64_t, std::less<>> counts;
    std::uint64_t total_count = 0;

    void add(std::string_view term, std::uint64_t n = 1) {
        if (n == 0) return;
        auto it = counts.find(term);
        if (it == counts.end()) {
            counts.emplace(std::string(term), n);
        } else {
            it->second += n;
        }
        total_count += n;
    }

    void merge(const TermDistribution& other) {
        for (const auto& [t, n] : other.counts) add(t, n);
    }

    std::size_t size() const { return counts.size(); }
    bool empty() const { return counts.empty(); }
    bool operator==(const TermDistribution&) const = default;
};

inline TermDistribution term_distribution(std::span<const TokenSequence> documents) {
    TermDistribution d;
    for (const auto& doc : documents) {
        for (const auto& tok : doc) d.add(tok);
    }
    return d;
}

class Vocabulary {
public:
    Vocabulary() = default;

    // Terms are indexed in lexicographic order of the distinct input terms.
    template <typename Range>
    static Vocabulary from_documents(const Range& documents) {
        std::vector<std::string> terms;
        for (const auto& doc : documents) {
            terms.insert(terms.end(), doc.begin(), doc.end());
        }
        return from_terms(std::move(terms));
    }

    static Vocabulary from_terms(std::vector<std::string> terms) {
        std::sort(terms.begin(), terms.end());
        terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
        Vocabulary v;
        v.terms_ = std::move(terms);
        v.index_.reserve(v.terms_.size());
        for (std::size_t i = 0; i < v.terms_.size(); ++i) v.index_.emplace(v.terms_[i], i);
        return v;
    }

    std::optional<std::size_t> index_of(const std::string& term) const {
        auto it = index_.find(term);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& term(std::size_t i) const { return terms_.at(i); }
    const std::vector<std::string>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline std::vector<std::uint32_t> count_vector(const TokenSequence& tokens, const Vocabulary& vocab) {
    std::vector<std::uint32_t> counts(vocab.size(), 0);
    for (const auto& tok : tokens) {
        if (auto i = vocab.index_of(tok)) ++counts[*i];
    }
    return counts;
}

} // namespace judge
