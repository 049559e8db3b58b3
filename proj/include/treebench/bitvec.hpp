#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace treebench {

/// Fixed-length bit vector over 64-bit words. Instance subsets and feature
/// columns are stored this way so that subset intersection and counting are
/// word-parallel.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(int size) : size_(size), words_((size + 63) / 64, 0) {}

    static BitVec ones(int size) {
        BitVec v(size);
        for (auto& w : v.words_) w = ~std::uint64_t{0};
        v.clear_tail();
        return v;
    }

    int size() const { return size_; }
    bool empty_domain() const { return size_ == 0; }

    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void flip(int i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    /// popcount(a & b) without materializing the intersection.
    static int count_and(const BitVec& a, const BitVec& b) {
        int c = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            c += std::popcount(a.words_[i] & b.words_[i]);
        return c;
    }

    /// popcount(a & b & c).
    static int count_and3(const BitVec& a, const BitVec& b, const BitVec& c) {
        int n = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            n += std::popcount(a.words_[i] & b.words_[i] & c.words_[i]);
        return n;
    }

    BitVec operator&(const BitVec& o) const {
        BitVec r(size_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
        return r;
    }

    /// this & ~o (restricted to the domain).
    BitVec and_not(const BitVec& o) const {
        BitVec r(size_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & ~o.words_[i];
        return r;
    }

    BitVec operator|(const BitVec& o) const {
        BitVec r(size_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | o.words_[i];
        return r;
    }

    bool operator==(const BitVec& o) const { return size_ == o.size_ && words_ == o.words_; }

    bool none() const {
        for (auto w : words_) if (w) return false;
        return true;
    }

    bool all() const { return count() == size_; }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                int b = std::countr_zero(w);
                fn(static_cast<int>(wi * 64 + b));
                w &= w - 1;
            }
        }
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    /// 128-bit mixing hash over the words plus a salt, for cache keys.
    void hash128(std::uint64_t salt, std::uint64_t& h1, std::uint64_t& h2) const {
        h1 = 0x9e3779b97f4a7c15ULL ^ salt;
        h2 = 0xc2b2ae3d27d4eb4fULL + salt;
        for (auto w : words_) {
            h1 = mix(h1 ^ w);
            h2 = mix(h2 + w + 0x165667b19e3779f9ULL);
        }
        h1 = mix(h1 ^ static_cast<std::uint64_t>(size_));
        h2 = mix(h2 ^ (h1 >> 32));
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27; x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    void clear_tail() {
        int tail = size_ & 63;
        if (tail != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << tail) - 1;
    }

    int size_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace treebench
