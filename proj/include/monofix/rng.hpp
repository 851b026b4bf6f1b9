#ifndef MONOFIX_RNG_HPP
#define MONOFIX_RNG_HPP

#include <cstdint>

namespace monofix {

// splitmix64: tiny deterministic generator. We avoid std::mt19937 +
// std::uniform_int_distribution because distribution output is not pinned by
// the standard and byte-identical reports across toolchains matter here.
class Rng {
public:
    explicit Rng(uint64_t seed = 0x9e3779b97f4a7c15ull) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, n), n > 0; simple modulo (bias is irrelevant here)
    uint64_t below(uint64_t n) { return next() % n; }

    // uniform in [lo, hi] inclusive
    long range(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    // derive an independent stream, e.g. per (class, trial) pair
    Rng fork(uint64_t tag) {
        Rng r(state_ ^ (tag * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
        r.next();
        return r;
    }

private:
    uint64_t state_;
};

} // namespace monofix

#endif
