#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <vector>

namespace minans {

using AtomId = std::uint32_t;

// Dense set of atom ids over a fixed-size language.
// All binary operations require operands of the same universe size.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t universe() const { return n_; }

    bool test(AtomId i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(AtomId i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(AtomId i) { w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }

    bool none() const {
        for (auto w : w_)
            if (w) return false;
        return true;
    }
    bool any() const { return !none(); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    Bits& operator|=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    Bits& operator&=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    Bits& operator-=(const Bits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }

    friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
    friend Bits operator&(Bits a, const Bits& b) { return a &= b; }
    friend Bits operator-(Bits a, const Bits& b) { return a -= b; }

    Bits complement() const {
        Bits r(n_);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
        r.trim();
        return r;
    }

    bool intersects(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }
    bool subset_of(const Bits& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const Bits& o) const { return !(*this == o); }

    // Order matching lexicographic comparison of the sorted element lists
    // ({} < {0} < {0,1} < {1} < ...). Used for canonical output ordering.
    int compare(const Bits& o) const {
        AtomId a = first(), b = o.first();
        while (a < n_ || b < o.n_) {
            if (a != b) return a < b ? -1 : 1;
            a = next(a);
            b = o.next(b);
        }
        return 0;
    }

    // First element, or universe() when empty.
    AtomId first() const { return next_from(0); }
    // Successor of i, or universe() when exhausted.
    AtomId next(AtomId i) const { return next_from(i + 1); }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t wi = 0; wi < w_.size(); ++wi) {
            std::uint64_t w = w_[wi];
            while (w) {
                unsigned b = static_cast<unsigned>(__builtin_ctzll(w));
                f(static_cast<AtomId>(wi * 64 + b));
                w &= w - 1;
            }
        }
    }

    std::vector<AtomId> to_vector() const {
        std::vector<AtomId> v;
        v.reserve(count());
        for_each([&](AtomId a) { v.push_back(a); });
        return v;
    }

    // Copy into a larger universe (n >= universe()).
    Bits resized(std::size_t n) const {
        Bits r(n);
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i];
        return r;
    }

    std::size_t hash() const {
        std::uint64_t h = 1469598103934665603ull;
        for (auto w : w_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h ^ n_);
    }

private:
    AtomId next_from(AtomId i) const {
        while (i < n_) {
            std::uint64_t w = w_[i >> 6] >> (i & 63);
            if (w) return i + static_cast<AtomId>(__builtin_ctzll(w));
            i = static_cast<AtomId>(((i >> 6) + 1) * 64);
        }
        return static_cast<AtomId>(n_);
    }
    void trim() {
        if (n_ & 63) w_.back() &= (std::uint64_t(1) << (n_ & 63)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct BitsHash {
    std::size_t operator()(const Bits& b) const { return b.hash(); }
};

} // namespace minans
