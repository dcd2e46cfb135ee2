#pragma once

#include <cstdint>
#include <vector>

namespace luniv {

// Segmented sieve of Eratosthenes. The shared instance is built once (default
// limit 1e7) and read-only afterwards; interval queries above the cached
// range run a fresh segmented pass against the base primes.
class PrimeSieve {
public:
    static constexpr std::uint64_t kDefaultLimit = 10'000'000;

    explicit PrimeSieve(std::uint64_t limit = kDefaultLimit);

    std::uint64_t limit() const { return limit_; }

    // All primes p <= n, n <= limit().
    std::vector<std::uint64_t> primes_up_to(std::uint64_t n) const;

    // Primes in the half-open interval (lo, hi]; requires hi <= limit()^2.
    std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) const;

    std::uint64_t count_up_to(std::uint64_t n) const;  // pi(n)

    bool is_prime(std::uint64_t n) const;

    // Shared read-only instance.
    static const PrimeSieve& instance();

private:
    std::uint64_t limit_;
    std::vector<std::uint64_t> primes_;       // all primes <= limit_
    std::vector<std::uint64_t> count_prefix_; // pi at block boundaries
};

// Flags for [lo, hi], flat sieve against the supplied base primes
// (base must cover sqrt(hi)). Serial reference implementation.
std::vector<char> sieve_segment_serial(std::uint64_t lo, std::uint64_t hi,
                                       const std::vector<std::uint64_t>& base);

// Same contract, segments striped across OpenMP threads. Output is
// bit-identical to the serial version.
std::vector<char> sieve_segment_parallel(std::uint64_t lo, std::uint64_t hi,
                                         const std::vector<std::uint64_t>& base);

std::uint64_t integer_sqrt(std::uint64_t n);

}  // namespace luniv
