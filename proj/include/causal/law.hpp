#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "causal/dag.hpp"

namespace causal {

inline constexpr double kDefaultEpsilon = 0.05;
inline constexpr std::size_t kDefaultStateGuard = std::size_t{1} << 20;

// A function of the joint configuration, one value per joint state.
using RandomVariable = std::vector<double>;

// Finite-support law factorizing along a Dag.
//
// Configurations of the parents of a vertex are numbered in mixed radix over
// the parents in index order, the first parent varying slowest. Joint states
// are numbered the same way over all vertices.
class DiscreteLaw {
public:
    using Table = std::vector<std::vector<double>>;  // [configuration][value]

    // Throws InvalidLaw on malformed tables, probabilities outside
    // [epsilon, 1 - epsilon] or rows not summing to one, and GuardExceeded when
    // the joint state space is larger than `guard`.
    DiscreteLaw(Dag g, std::vector<std::vector<double>> supports, std::vector<Table> cpts,
                double epsilon = kDefaultEpsilon, std::size_t guard = kDefaultStateGuard);

    const Dag& graph() const noexcept { return g_; }
    double epsilon() const noexcept { return epsilon_; }
    const std::vector<double>& support(Vertex v) const { return supports_.at(v); }
    const std::vector<double>& support(std::string_view name) const { return support(g_.index(name)); }
    const Table& cpt(Vertex v) const { return cpts_.at(v); }
    std::size_t config_count(Vertex v) const { return cpts_.at(v).size(); }
    // Position of `value` in the support of v; throws InvalidArgument.
    std::size_t level_index(Vertex v, double value) const;

    std::size_t state_count() const noexcept { return joint_.size(); }
    const std::vector<double>& probabilities() const noexcept { return joint_; }
    std::size_t value_index(std::size_t state, Vertex v) const {
        return (state / strides_[v]) % supports_[v].size();
    }
    double value(std::size_t state, Vertex v) const { return supports_[v][value_index(state, v)]; }
    std::size_t config_of(std::size_t state, Vertex v) const;

    RandomVariable variable(std::string_view name) const;
    RandomVariable indicator(std::string_view name, double level) const;
    RandomVariable constant(double c) const { return RandomVariable(state_count(), c); }

    double expectation(const RandomVariable& f) const;
    double variance(const RandomVariable& f) const;
    double covariance(const RandomVariable& f, const RandomVariable& h) const;
    // E[f | given] as a function of the state. States in a conditioning group
    // of probability zero get 0.
    RandomVariable cond_expectation(const RandomVariable& f, const VertexSet& given) const;
    RandomVariable cond_variance(const RandomVariable& f, const VertexSet& given) const;
    RandomVariable cond_covariance(const RandomVariable& f, const RandomVariable& h,
                                   const VertexSet& given) const;

    // Copy with one CPT row replaced and epsilon set to 0, so rows can be
    // perturbed across the positivity band.
    DiscreteLaw with_row(Vertex v, std::size_t config, std::vector<double> row) const;

private:
    Dag g_;
    std::vector<std::vector<double>> supports_;
    std::vector<Table> cpts_;
    double epsilon_;
    std::size_t guard_;
    std::vector<std::size_t> strides_;
    std::vector<double> joint_;
};

// Pointwise helpers on random variables.
RandomVariable operator+(const RandomVariable& a, const RandomVariable& b);
RandomVariable operator-(const RandomVariable& a, const RandomVariable& b);
RandomVariable operator*(const RandomVariable& a, const RandomVariable& b);
RandomVariable operator*(double c, const RandomVariable& a);
// Quotient with 0/0 = 0 so functions evaluated off a null conditioning group
// stay finite.
RandomVariable safe_divide(const RandomVariable& a, const RandomVariable& b);
RandomVariable operator-(const RandomVariable& a, double c);
// Largest |a - b| over states of positive probability.
double max_abs_difference(const DiscreteLaw& law, const RandomVariable& a, const RandomVariable& b);

// JSON form: {"V": {"support": [...], "cpt": {"<key>": [...]}}} where <key>
// joins the parent values, in parent declaration order, with commas. Root
// vertices use the empty key.
DiscreteLaw parse_law(const Dag& g, std::string_view json_text, double epsilon = kDefaultEpsilon);
std::string format_law(const DiscreteLaw& law);
std::string format_value(double x);

struct RandomLawSpec {
    RandomLawSpec(std::uint64_t seed_ = 0, double epsilon_ = kDefaultEpsilon) : seed(seed_), epsilon(epsilon_) {}

    std::uint64_t seed = 0;
    double epsilon = kDefaultEpsilon;
    // Support per vertex; vertices not listed are binary {0, 1}.
    std::map<std::string, std::vector<double>> supports;
    double concentration = 1.0;  // symmetric Dirichlet parameter
};

// Each CPT row is a symmetric Dirichlet draw, clamped to [epsilon, 1 - epsilon]
// and renormalized until it stays inside the band.
DiscreteLaw random_law(const Dag& g, const RandomLawSpec& spec);

// Seed for trial i of a search started from `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i);

}  // namespace causal
