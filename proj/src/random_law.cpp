#include <algorithm>
#include <random>

#include "causal/law.hpp"

namespace causal {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

namespace {

std::vector<double> draw_row(std::mt19937_64& rng, std::size_t k, double concentration, double epsilon) {
    std::gamma_distribution<double> gamma(concentration, 1.0);
    std::vector<double> row(k);
    double total = 0;
    for (auto& x : row) {
        x = gamma(rng);
        total += x;
    }
    if (total <= 0) {
        std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(k));
    } else {
        for (auto& x : row) x /= total;
    }
    if (k == 1 || epsilon <= 0) return row;

    for (int iter = 0; iter < 200; ++iter) {
        bool inside = true;
        double sum = 0;
        for (auto& x : row) {
            if (x < epsilon || x > 1 - epsilon) inside = false;
            x = std::clamp(x, epsilon, 1 - epsilon);
            sum += x;
        }
        for (auto& x : row) x /= sum;
        if (inside) return row;
    }
    // The clamp iteration settles long before this for any feasible band; the
    // mixture below is an exact fallback.
    for (auto& x : row) x = epsilon + (1 - epsilon * static_cast<double>(k)) * x;
    return row;
}

}  // namespace

DiscreteLaw random_law(const Dag& g, const RandomLawSpec& spec) {
    for (const auto& [name, values] : spec.supports) g.index(name);
    std::vector<std::vector<double>> supports(g.size());
    for (Vertex v = 0; v < g.size(); ++v) {
        auto it = spec.supports.find(g.name(v));
        supports[v] = it == spec.supports.end() ? std::vector<double>{0.0, 1.0} : it->second;
        if (spec.epsilon * static_cast<double>(supports[v].size()) > 1) {
            throw CausalError(ErrorKind::InvalidArgument,
                              "epsilon is too large for the support of '" + g.name(v) + "'", {g.name(v)});
        }
    }
    std::mt19937_64 rng(spec.seed);
    std::vector<DiscreteLaw::Table> cpts(g.size());
    for (Vertex v = 0; v < g.size(); ++v) {
        std::size_t configs = 1;
        for (Vertex p : g.parent_ids(v)) configs *= supports[p].size();
        for (std::size_t c = 0; c < configs; ++c) {
            cpts[v].push_back(draw_row(rng, supports[v].size(), spec.concentration, spec.epsilon));
        }
    }
    return DiscreteLaw(g, std::move(supports), std::move(cpts), spec.epsilon);
}

}  // namespace causal
