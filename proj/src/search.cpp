#include <algorithm>
#include <cmath>

#include "causal/oracle.hpp"

namespace causal {

std::optional<Witness> search_witness(const Dag& g, const RandomLawSpec& spec,
                                      const std::function<bool(const DiscreteLaw&)>& predicate,
                                      std::size_t max_trials) {
    for (std::size_t i = 0; i < max_trials; ++i) {
        RandomLawSpec s = spec;
        s.seed = derive_seed(spec.seed, i);
        DiscreteLaw law = random_law(g, s);
        if (predicate(law)) return Witness{i, s.seed, std::move(law)};
    }
    return std::nullopt;
}

DiscreteLaw are_law(const Dag& g, double alpha) {
    for (const char* v : {"O1", "O2", "A", "Y"}) g.index(v);
    const std::vector<std::string> expected_parents_y = {"O1", "O2", "A"};
    if (g.size() != 4 || parents(g, {"A"}) != VertexSet{"O1", "O2"} ||
        parents(g, {"Y"}) != to_set(expected_parents_y) || !parents(g, {"O1"}).empty() ||
        !parents(g, {"O2"}).empty()) {
        throw CausalError(ErrorKind::InvalidArgument,
                          "the ARE family needs the graph O1 -> A, O2 -> A, A -> Y, O1 -> Y, O2 -> Y");
    }
    auto mean_of = [&](double o1, double o2) { return o1 + o2 + alpha * o1 * o2; };
    const std::vector<double> pm = {-1.0, 1.0};

    std::vector<double> y_support;
    for (double o1 : pm) {
        for (double o2 : pm) {
            for (double d : pm) y_support.push_back(mean_of(o1, o2) + d);
        }
    }
    std::sort(y_support.begin(), y_support.end());
    y_support.erase(std::unique(y_support.begin(), y_support.end()), y_support.end());

    std::vector<std::vector<double>> supports(g.size());
    std::vector<DiscreteLaw::Table> cpts(g.size());
    const Vertex o1v = g.index("O1"), o2v = g.index("O2"), av = g.index("A"), yv = g.index("Y");
    supports[o1v] = pm;
    supports[o2v] = pm;
    supports[av] = {0.0, 1.0};
    supports[yv] = y_support;
    cpts[o1v] = {{0.5, 0.5}};
    cpts[o2v] = {{0.5, 0.5}};

    // Parent configurations enumerate parents in index order, first slowest.
    auto value_of = [&](Vertex parent, std::size_t idx) { return supports[parent][idx]; };
    const auto& pa_a = g.parent_ids(av);
    for (std::size_t c = 0; c < 4; ++c) {
        double vals[2] = {value_of(pa_a[0], c / 2), value_of(pa_a[1], c % 2)};
        double o1 = pa_a[0] == o1v ? vals[0] : vals[1];
        double o2 = pa_a[0] == o1v ? vals[1] : vals[0];
        double p1 = 0.5 + 0.2 * o1 - 0.1 * o2;
        cpts[av].push_back({1 - p1, p1});
    }
    const auto& pa_y = g.parent_ids(yv);
    for (std::size_t c = 0; c < 8; ++c) {
        std::size_t rest = c;
        double o1 = 0, o2 = 0;
        for (std::size_t i = pa_y.size(); i-- > 0;) {
            double v = value_of(pa_y[i], rest % 2);
            rest /= 2;
            if (pa_y[i] == o1v) o1 = v;
            if (pa_y[i] == o2v) o2 = v;
        }
        std::vector<double> row(y_support.size(), 0.0);
        for (double d : pm) {
            auto it = std::find(y_support.begin(), y_support.end(), mean_of(o1, o2) + d);
            row[static_cast<std::size_t>(it - y_support.begin())] += 0.5;
        }
        cpts[yv].push_back(std::move(row));
    }
    return DiscreteLaw(g, std::move(supports), std::move(cpts), 0.0);
}

}  // namespace causal
