#pragma once

#include "modheat/errors.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace modheat {

/// ceil(n/2) with the usual mathematical convention for negative n.
constexpr std::int64_t ceil_half(std::int64_t n) { return n >= 0 ? (n + 1) / 2 : n / 2; }
/// floor(n/2).
constexpr std::int64_t floor_half(std::int64_t n) { return n >= 0 ? n / 2 : (n - 1) / 2; }

/// Generators of C2*C3 = <a,b | a^2 = 1, b^3 = 1>. B2 denotes b^2 = b^{-1},
/// stored as its own symbol so reduced words are canonical as plain sequences.
enum class Letter : unsigned char { A, B, B2 };

constexpr Letter inverse_of(Letter l) {
    switch (l) {
        case Letter::A: return Letter::A;
        case Letter::B: return Letter::B2;
        default: return Letter::B;
    }
}

constexpr bool is_b_type(Letter l) { return l != Letter::A; }

constexpr char letter_char(Letter l) {
    switch (l) {
        case Letter::A: return 'a';
        case Letter::B: return 'b';
        default: return 'c';  // serialization of b^2
    }
}

/// A group element of C2*C3 in reduced form: an alternating sequence in which
/// no two consecutive letters are A and no two consecutive letters are b-type.
/// Immutable after construction; the word length is the sequence length.
class ReducedWord {
public:
    ReducedWord() = default;

    static ReducedWord identity() { return ReducedWord{}; }
    static ReducedWord generator(Letter l) {
        ReducedWord w;
        w.letters_.push_back(l);
        return w;
    }

    /// Parses the ASCII serialization over {a,b,c} with c = b^2. The identity
    /// serializes as the empty string; "e" is accepted as an input alias since
    /// an empty token is unusable in line-oriented files.
    static std::optional<ReducedWord> parse(std::string_view text) {
        if (text == "e") return identity();
        ReducedWord w;
        for (char c : text) {
            Letter l;
            switch (c) {
                case 'a': l = Letter::A; break;
                case 'b': l = Letter::B; break;
                case 'c': l = Letter::B2; break;
                default: return std::nullopt;
            }
            if (!w.letters_.empty() && is_b_type(w.letters_.back()) == is_b_type(l)) {
                return std::nullopt;  // not in reduced form
            }
            w.letters_.push_back(l);
        }
        return w;
    }

    bool is_identity() const { return letters_.empty(); }
    std::int64_t length() const { return static_cast<std::int64_t>(letters_.size()); }
    const std::vector<Letter>& letters() const { return letters_; }

    /// Right multiplication by a generator, reducing at the seam. O(1).
    ReducedWord times(Letter l) const {
        ReducedWord w = *this;
        w.append(l);
        return w;
    }

    friend ReducedWord operator*(const ReducedWord& u, const ReducedWord& v) {
        ReducedWord w = u;
        for (Letter l : v.letters_) w.append(l);
        return w;
    }

    ReducedWord inverse() const {
        ReducedWord w;
        w.letters_.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
            w.letters_.push_back(inverse_of(*it));
        }
        return w;
    }

    /// The Chung--Yau projection to the line: 0 for e, +|x| for words starting
    /// with b or b^2, -|x| for words starting with a.
    std::int64_t pi() const {
        if (letters_.empty()) return 0;
        return is_b_type(letters_.front()) ? length() : -length();
    }

    std::string str() const {
        std::string s;
        s.reserve(letters_.size());
        for (Letter l : letters_) s.push_back(letter_char(l));
        return s;
    }

    friend bool operator==(const ReducedWord& u, const ReducedWord& v) = default;
    friend std::strong_ordering operator<=>(const ReducedWord& u, const ReducedWord& v) {
        if (auto c = u.letters_.size() <=> v.letters_.size(); c != 0) return c;
        return u.letters_ <=> v.letters_;
    }

    struct Hash {
        std::size_t operator()(const ReducedWord& w) const {
            std::size_t h = 0xcbf29ce484222325ull;
            for (Letter l : w.letters_) {
                h ^= static_cast<std::size_t>(l) + 1;
                h *= 0x100000001b3ull;
            }
            return h;
        }
    };

private:
    void append(Letter l) {
        if (letters_.empty()) {
            letters_.push_back(l);
            return;
        }
        Letter last = letters_.back();
        if (last == Letter::A) {
            if (l == Letter::A) {
                letters_.pop_back();  // a*a = e
            } else {
                letters_.push_back(l);
            }
            return;
        }
        if (!is_b_type(l)) {
            letters_.push_back(l);
            return;
        }
        if (last == l) {
            letters_.back() = (l == Letter::B) ? Letter::B2 : Letter::B;  // b*b = b^2
        } else {
            letters_.pop_back();  // b*b^2 = e
        }
    }

    std::vector<Letter> letters_;
};

/// |pi^{-1}(n)|. For n >= 0 this is 2^{ceil(n/2)}; for n < 0 direct enumeration
/// of the a-side words gives 2^{floor(|n|/2)} (the two agree only at n in {0,-1}).
inline std::int64_t fiber_size(std::int64_t n) {
    const std::int64_t e = n >= 0 ? ceil_half(n) : floor_half(-n);
    return std::int64_t{1} << e;
}

/// Number of reduced words of length exactly n (n >= 1): 2^{ceil(n/2)} + 2^{floor(n/2)}.
inline std::int64_t sphere_size(std::int64_t n) {
    if (n == 0) return 1;
    return fiber_size(n) + fiber_size(-n);
}

inline std::int64_t ball_size(std::int64_t radius) {
    std::int64_t total = 0;
    for (std::int64_t n = 0; n <= radius; ++n) total += sphere_size(n);
    return total;
}

/// All reduced words of length <= radius, in breadth-first order (level by
/// level, lexicographic within a level). Deterministic.
inline std::vector<ReducedWord> ball(int radius, std::size_t vertex_budget = 4'000'000) {
    if (radius < 0) throw std::invalid_argument("ball: radius must be >= 0");
    if (static_cast<std::uint64_t>(ball_size(radius)) > vertex_budget) {
        throw ResourceLimitError("ball: radius " + std::to_string(radius) +
                                 " exceeds vertex budget " + std::to_string(vertex_budget));
    }
    std::vector<ReducedWord> words{ReducedWord::identity()};
    std::size_t level_begin = 0;
    for (int r = 1; r <= radius; ++r) {
        const std::size_t level_end = words.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            const ReducedWord& w = words[i];
            for (Letter l : {Letter::A, Letter::B, Letter::B2}) {
                ReducedWord next = w.times(l);
                if (next.length() == r) words.push_back(next);
            }
        }
        // Every length-r word arises from exactly one length-(r-1) prefix, so no
        // dedup is needed; sort the level for a canonical enumeration order.
        std::sort(words.begin() + static_cast<std::ptrdiff_t>(level_end), words.end());
        level_begin = level_end;
    }
    return words;
}

}  // namespace modheat
