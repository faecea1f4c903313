#pragma once

#include "modheat/errors.hpp"
#include "modheat/word_group.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace modheat {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

/// An element of PSL2(F_p): a determinant-one 2x2 matrix mod p, stored with the
/// canonical sign representative. For p > 2 the first nonzero entry in row-major
/// order lies in {1, ..., (p-1)/2}; for p = 2 the matrix is its own negative.
class PslElement {
public:
    PslElement(std::uint32_t p, std::array<std::uint32_t, 4> entries) : p_(p), m_(entries) {
        for (auto& e : m_) e %= p_;
        const std::uint64_t det =
            (std::uint64_t(m_[0]) * m_[3] % p_ + std::uint64_t(p_) - std::uint64_t(m_[1]) * m_[2] % p_) % p_;
        if (det != 1) throw std::invalid_argument("PslElement: determinant is not 1 mod p");
        canonicalize();
    }

    static PslElement identity(std::uint32_t p) { return PslElement(p, {1, 0, 0, 1}); }
    /// Image of the generator a = (0 -1; 1 0).
    static PslElement generator_a(std::uint32_t p) { return PslElement(p, {0, p - 1, 1, 0}); }
    /// Image of the generator b = (0 -1; 1 1).
    static PslElement generator_b(std::uint32_t p) { return PslElement(p, {0, p - 1, 1, 1}); }

    std::uint32_t modulus() const { return p_; }
    const std::array<std::uint32_t, 4>& entries() const { return m_; }

    friend PslElement operator*(const PslElement& x, const PslElement& y) {
        if (x.p_ != y.p_) throw std::invalid_argument("PslElement: mixed moduli");
        const std::uint64_t p = x.p_;
        const auto& a = x.m_;
        const auto& b = y.m_;
        std::array<std::uint32_t, 4> r{
            static_cast<std::uint32_t>((std::uint64_t(a[0]) * b[0] + std::uint64_t(a[1]) * b[2]) % p),
            static_cast<std::uint32_t>((std::uint64_t(a[0]) * b[1] + std::uint64_t(a[1]) * b[3]) % p),
            static_cast<std::uint32_t>((std::uint64_t(a[2]) * b[0] + std::uint64_t(a[3]) * b[2]) % p),
            static_cast<std::uint32_t>((std::uint64_t(a[2]) * b[1] + std::uint64_t(a[3]) * b[3]) % p)};
        return PslElement(x.p_, r);
    }

    friend bool operator==(const PslElement& x, const PslElement& y) = default;

    std::string str() const {
        return std::to_string(m_[0]) + "," + std::to_string(m_[1]) + ";" + std::to_string(m_[2]) +
               "," + std::to_string(m_[3]);
    }

    struct Hash {
        std::size_t operator()(const PslElement& e) const {
            std::size_t h = e.p_;
            for (auto v : e.m_) h = h * 1000003u + v;
            return h;
        }
    };

private:
    void canonicalize() {
        if (p_ == 2) return;
        for (auto e : m_) {
            if (e == 0) continue;
            if (e > (p_ - 1) / 2) {
                for (auto& x : m_) x = (p_ - x) % p_;
            }
            return;
        }
    }

    std::uint32_t p_;
    std::array<std::uint32_t, 4> m_;
};

/// Image of a reduced word under the reduction map PSL2(Z) -> PSL2(F_p).
inline PslElement psl_image(const ReducedWord& w, std::uint32_t p) {
    if (!is_prime(p)) throw std::invalid_argument("psl_image: p must be prime");
    PslElement r = PslElement::identity(p);
    const PslElement a = PslElement::generator_a(p);
    const PslElement b = PslElement::generator_b(p);
    const PslElement b2 = b * b;
    for (Letter l : w.letters()) {
        switch (l) {
            case Letter::A: r = r * a; break;
            case Letter::B: r = r * b; break;
            case Letter::B2: r = r * b2; break;
        }
    }
    return r;
}

/// |PSL2(F_p)|: p(p^2-1)/2 for odd p; 6 for p = 2 (where -I = I, so the
/// division by two does not apply).
inline std::int64_t psl_group_order(std::uint32_t p) {
    const std::int64_t pp = p;
    return p == 2 ? 6 : pp * (pp * pp - 1) / 2;
}

/// The full group as the closure of {a, b} under right multiplication,
/// in deterministic breadth-first discovery order.
inline std::vector<PslElement> enumerate_psl(std::uint32_t p, std::size_t vertex_budget = 2'000'000) {
    if (!is_prime(p)) throw std::invalid_argument("enumerate_psl: p must be prime");
    if (static_cast<std::uint64_t>(psl_group_order(p)) > vertex_budget) {
        throw ResourceLimitError("enumerate_psl: group order exceeds vertex budget");
    }
    const PslElement a = PslElement::generator_a(p);
    const PslElement b = PslElement::generator_b(p);
    const PslElement b2 = b * b;

    std::vector<PslElement> elements{PslElement::identity(p)};
    std::unordered_set<PslElement, PslElement::Hash> seen{elements.front()};
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const PslElement x = elements[i];
        for (const PslElement* g : {&a, &b, &b2}) {
            PslElement y = x * *g;
            if (seen.insert(y).second) elements.push_back(y);
        }
    }
    return elements;
}

/// Genus of the surface complex underlying the Cayley graph of PSL2(F_p), p > 2:
/// (p-5)(p-3)(p+2)/24, always an integer for odd primes.
inline std::int64_t genus(std::uint32_t p) {
    if (!is_prime(p) || p == 2) throw std::invalid_argument("genus: p must be an odd prime");
    const std::int64_t q = p;
    const std::int64_t num = (q - 5) * (q - 3) * (q + 2);
    if (num % 24 != 0) throw NumericError("genus: formula did not yield an integer");
    return num / 24;
}

}  // namespace modheat
