#include "dislab/sampling.hpp"

#include <cstdlib>

namespace dislab {

DislocationSystem sample_disk_system(std::mt19937_64& rng, int n_min, int n_max) {
    std::uniform_int_distribution<int> count(n_min, n_max);
    std::uniform_real_distribution<double> radius(0.0, 0.7);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    std::uniform_real_distribution<double> modulus(0.5, 2.0);
    std::uniform_int_distribution<int> sign(0, 1);

    const int n = count(rng);
    std::vector<Dislocation> ds;
    int guard = 1000;
    while (static_cast<int>(ds.size()) < n && guard-- > 0) {
        double r = radius(rng), a = angle(rng);
        Vec2 z{r * std::cos(a), r * std::sin(a)};
        bool ok = true;
        for (const auto& d : ds)
            if (norm(d.position - z) < 0.28) ok = false;
        if (!ok) continue;
        double b = modulus(rng) * (sign(rng) ? 1.0 : -1.0);
        ds.emplace_back(z, b);
    }
    // Separations >= 0.28 and clearance >= 0.3 leave room for epsilon0 = 0.1.
    return DislocationSystem(std::move(ds), 0.1);
}

std::uint64_t env_seed() {
    if (const char* s = std::getenv("DISLAB_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end && *end == '\0') return static_cast<std::uint64_t>(v);
    }
    return 0x5d151ab0ULL;
}

}  // namespace dislab
