#include "luniv/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace luniv {

std::uint64_t integer_sqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<char> sieve_segment_serial(std::uint64_t lo, std::uint64_t hi,
                                       const std::vector<std::uint64_t>& base) {
    std::vector<char> flags(hi - lo + 1, 1);
    if (lo == 0) flags[0] = 0;
    if (lo <= 1 && hi >= 1) flags[1 - lo] = 0;
    for (std::uint64_t p : base) {
        if (p * p > hi) break;
        std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
        for (std::uint64_t j = start; j <= hi; j += p) flags[j - lo] = 0;
    }
    return flags;
}

std::vector<char> sieve_segment_parallel(std::uint64_t lo, std::uint64_t hi,
                                         const std::vector<std::uint64_t>& base) {
    std::vector<char> flags(hi - lo + 1, 1);
    if (lo == 0) flags[0] = 0;
    if (lo <= 1 && hi >= 1) flags[1 - lo] = 0;
    const std::uint64_t seg = 1 << 18;
    const auto nseg = static_cast<std::int64_t>((hi - lo) / seg + 1);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t si = 0; si < nseg; ++si) {
        const std::uint64_t a = lo + static_cast<std::uint64_t>(si) * seg;
        const std::uint64_t b = std::min(hi, a + seg - 1);
        for (std::uint64_t p : base) {
            if (p * p > b) break;
            std::uint64_t start = std::max(p * p, ((a + p - 1) / p) * p);
            for (std::uint64_t j = start; j <= b; j += p) flags[j - lo] = 0;
        }
    }
    return flags;
}

namespace {

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
    std::vector<char> mark(limit + 1, 1);
    std::vector<std::uint64_t> primes;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!mark[i]) continue;
        primes.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) mark[j] = 0;
    }
    return primes;
}

}  // namespace

PrimeSieve::PrimeSieve(std::uint64_t limit) : limit_(std::max<std::uint64_t>(limit, 100)) {
    const auto base = small_primes(integer_sqrt(limit_));
    const auto flags = sieve_segment_parallel(0, limit_, base);
    for (std::uint64_t i = 2; i <= limit_; ++i)
        if (flags[i]) primes_.push_back(i);
    // prefix counts every 4096 integers for pi(n) queries
    const std::uint64_t stride = 4096;
    count_prefix_.assign(limit_ / stride + 2, 0);
    std::uint64_t c = 0, next = stride, slot = 1;
    for (std::uint64_t p : primes_) {
        while (p > next) {
            count_prefix_[slot++] = c;
            next += stride;
        }
        ++c;
    }
    for (; slot < count_prefix_.size(); ++slot) count_prefix_[slot] = c;
}

const PrimeSieve& PrimeSieve::instance() {
    static const PrimeSieve sieve;
    return sieve;
}

std::vector<std::uint64_t> PrimeSieve::primes_up_to(std::uint64_t n) const {
    if (n > limit_) throw std::out_of_range("PrimeSieve: n above sieve limit");
    auto it = std::upper_bound(primes_.begin(), primes_.end(), n);
    return {primes_.begin(), it};
}

std::vector<std::uint64_t> PrimeSieve::primes_in(std::uint64_t lo, std::uint64_t hi) const {
    if (hi <= lo) return {};
    if (hi <= limit_) {
        auto first = std::upper_bound(primes_.begin(), primes_.end(), lo);
        auto last = std::upper_bound(primes_.begin(), primes_.end(), hi);
        return {first, last};
    }
    if (integer_sqrt(hi) > limit_) throw std::out_of_range("PrimeSieve: interval above limit^2");
    const auto flags = sieve_segment_serial(lo + 1, hi, primes_);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < flags.size(); ++i)
        if (flags[i]) out.push_back(lo + 1 + i);
    return out;
}

std::uint64_t PrimeSieve::count_up_to(std::uint64_t n) const {
    if (n > limit_) throw std::out_of_range("PrimeSieve: n above sieve limit");
    if (n < 2) return 0;
    const std::uint64_t stride = 4096;
    std::uint64_t slot = n / stride;
    std::uint64_t c = count_prefix_[slot];
    auto it = std::lower_bound(primes_.begin() + c, primes_.end(), slot * stride);
    while (it != primes_.end() && *it <= n) {
        ++c;
        ++it;
    }
    return c;
}

bool PrimeSieve::is_prime(std::uint64_t n) const {
    if (n <= limit_)
        return std::binary_search(primes_.begin(), primes_.end(), n);
    if (integer_sqrt(n) > limit_) throw std::out_of_range("PrimeSieve: n above limit^2");
    for (std::uint64_t p : primes_) {
        if (p * p > n) break;
        if (n % p == 0) return false;
    }
    return true;
}

}  // namespace luniv
