#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace luniv {

// Map prime -> phase in [0,1). Missing primes read as phase 0.
class PhaseAssignment {
public:
    double at(std::uint64_t p) const;
    void set(std::uint64_t p, double theta);
    std::size_t size() const { return entries_.size(); }
    const std::vector<std::pair<std::uint64_t, double>>& entries() const { return entries_; }

    std::string to_json() const;  // [[prime, phase], ...], 17 significant digits
    static PhaseAssignment from_json(const std::string& text);

private:
    std::vector<std::pair<std::uint64_t, double>> entries_;  // sorted by prime
};

// e^{-2 pi i theta}, exact at quarter-integer phases so that half-turn
// rotations stay real.
std::complex<double> unit_phase(double theta);

}  // namespace luniv
