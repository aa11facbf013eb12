#ifndef GSTMAR_RNG_HPP
#define GSTMAR_RNG_HPP

#include <cstdint>
#include <vector>

namespace gstmar {

// Deterministic random source. All variate algorithms are implemented here
// rather than taken from <random> so that a fixed seed produces identical
// streams on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Independent stream derived from (seed, index); used to hand one
    // stream per simulation path or estimation round.
    static Rng derive(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    double uniform();                      // (0, 1)
    double uniform(double a, double b);    // (a, b)
    double normal();                       // N(0, 1)
    double gamma(double shape, double scale);
    double chi_square(double dof);
    double student_t(double dof);          // classical t, unit scale
    // Index drawn according to the (nonnegative, not necessarily
    // normalized) weight vector.
    std::size_t categorical(const std::vector<double>& weights);

private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

} // namespace gstmar

#endif
