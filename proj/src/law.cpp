#include "causal/law.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace causal {

namespace {

constexpr double kRowTolerance = 1e-9;
constexpr double kBandSlack = 1e-12;

void validate_row(const std::string& vertex, std::size_t config, const std::vector<double>& row,
                  std::size_t expected, double epsilon) {
    auto where = [&] { return "vertex '" + vertex + "', configuration " + std::to_string(config); };
    if (row.size() != expected) {
        throw CausalError(ErrorKind::InvalidLaw,
                          where() + ": expected " + std::to_string(expected) + " probabilities, got " +
                              std::to_string(row.size()),
                          {vertex});
    }
    double sum = 0;
    for (double p : row) {
        bool bad = p < epsilon - kBandSlack || p > 1 - epsilon + kBandSlack;
        if (bad || !std::isfinite(p)) {
            throw CausalError(ErrorKind::InvalidLaw,
                              where() + ": probability " + format_value(p) + " outside [" +
                                  format_value(epsilon) + ", " + format_value(1 - epsilon) + "]",
                              {vertex});
        }
        sum += p;
    }
    if (std::abs(sum - 1) > kRowTolerance) {
        throw CausalError(ErrorKind::InvalidLaw, where() + ": probabilities sum to " + format_value(sum),
                          {vertex});
    }
}

}  // namespace

DiscreteLaw::DiscreteLaw(Dag g, std::vector<std::vector<double>> supports, std::vector<Table> cpts,
                         double epsilon, std::size_t guard)
    : g_(std::move(g)),
      supports_(std::move(supports)),
      cpts_(std::move(cpts)),
      epsilon_(epsilon),
      guard_(guard) {
    const std::size_t n = g_.size();
    if (supports_.size() != n || cpts_.size() != n) {
        throw CausalError(ErrorKind::InvalidLaw, "law must give a support and a table for every vertex");
    }
    if (!(epsilon_ >= 0 && epsilon_ < 0.5)) {
        throw CausalError(ErrorKind::InvalidLaw, "epsilon must lie in [0, 0.5)");
    }
    std::size_t states = 1;
    for (Vertex v = 0; v < n; ++v) {
        const auto& s = supports_[v];
        if (s.empty()) {
            throw CausalError(ErrorKind::InvalidLaw, "empty support for '" + g_.name(v) + "'", {g_.name(v)});
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (s[i] == s[j]) {
                    throw CausalError(ErrorKind::InvalidLaw,
                                      "repeated support value " + format_value(s[i]) + " for '" +
                                          g_.name(v) + "'",
                                      {g_.name(v)});
                }
            }
        }
        if (states > guard_ / s.size()) {
            throw CausalError(ErrorKind::GuardExceeded,
                              "joint state space exceeds the limit of " + std::to_string(guard_) + " states");
        }
        states *= s.size();
    }
    for (Vertex v = 0; v < n; ++v) {
        std::size_t configs = 1;
        for (Vertex p : g_.parent_ids(v)) configs *= supports_[p].size();
        if (cpts_[v].size() != configs) {
            throw CausalError(ErrorKind::InvalidLaw,
                              "vertex '" + g_.name(v) + "' needs " + std::to_string(configs) +
                                  " parent configurations, got " + std::to_string(cpts_[v].size()),
                              {g_.name(v)});
        }
        for (std::size_t c = 0; c < configs; ++c) {
            validate_row(g_.name(v), c, cpts_[v][c], supports_[v].size(), epsilon_);
        }
    }

    strides_.assign(n, 1);
    for (std::size_t v = n; v-- > 1;) strides_[v - 1] = strides_[v] * supports_[v].size();

    joint_.assign(states, 1.0);
    for (std::size_t s = 0; s < states; ++s) {
        double p = 1;
        for (Vertex v = 0; v < n; ++v) p *= cpts_[v][config_of(s, v)][value_index(s, v)];
        joint_[s] = p;
    }
}

std::size_t DiscreteLaw::level_index(Vertex v, double value) const {
    const auto& s = supports_.at(v);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == value) return i;
    }
    throw CausalError(ErrorKind::InvalidArgument,
                      "value " + format_value(value) + " is not in the support of '" + g_.name(v) + "'",
                      {g_.name(v)});
}

std::size_t DiscreteLaw::config_of(std::size_t state, Vertex v) const {
    std::size_t c = 0;
    for (Vertex p : g_.parent_ids(v)) c = c * supports_[p].size() + value_index(state, p);
    return c;
}

RandomVariable DiscreteLaw::variable(std::string_view name) const {
    Vertex v = g_.index(name);
    RandomVariable out(state_count());
    for (std::size_t s = 0; s < out.size(); ++s) out[s] = value(s, v);
    return out;
}

RandomVariable DiscreteLaw::indicator(std::string_view name, double level) const {
    Vertex v = g_.index(name);
    std::size_t idx = level_index(v, level);
    RandomVariable out(state_count());
    for (std::size_t s = 0; s < out.size(); ++s) out[s] = value_index(s, v) == idx ? 1.0 : 0.0;
    return out;
}

double DiscreteLaw::expectation(const RandomVariable& f) const {
    double total = 0;
    for (std::size_t s = 0; s < joint_.size(); ++s) total += joint_[s] * f[s];
    return total;
}

double DiscreteLaw::variance(const RandomVariable& f) const {
    return covariance(f, f);
}

double DiscreteLaw::covariance(const RandomVariable& f, const RandomVariable& h) const {
    double mf = expectation(f);
    double mh = expectation(h);
    double total = 0;
    for (std::size_t s = 0; s < joint_.size(); ++s) total += joint_[s] * (f[s] - mf) * (h[s] - mh);
    return total;
}

RandomVariable DiscreteLaw::cond_expectation(const RandomVariable& f, const VertexSet& given) const {
    std::vector<Vertex> vs;
    for (const auto& name : given) vs.push_back(g_.index(name));
    std::size_t groups = 1;
    for (Vertex v : vs) groups *= supports_[v].size();
    auto key = [&](std::size_t s) {
        std::size_t k = 0;
        for (Vertex v : vs) k = k * supports_[v].size() + value_index(s, v);
        return k;
    };
    std::vector<double> num(groups, 0.0), den(groups, 0.0);
    std::vector<std::size_t> keys(state_count());
    for (std::size_t s = 0; s < state_count(); ++s) {
        keys[s] = key(s);
        num[keys[s]] += joint_[s] * f[s];
        den[keys[s]] += joint_[s];
    }
    RandomVariable out(state_count());
    for (std::size_t s = 0; s < state_count(); ++s) {
        out[s] = den[keys[s]] > 0 ? num[keys[s]] / den[keys[s]] : 0.0;
    }
    return out;
}

RandomVariable DiscreteLaw::cond_variance(const RandomVariable& f, const VertexSet& given) const {
    return cond_covariance(f, f, given);
}

RandomVariable DiscreteLaw::cond_covariance(const RandomVariable& f, const RandomVariable& h,
                                            const VertexSet& given) const {
    RandomVariable mf = cond_expectation(f, given);
    RandomVariable mh = cond_expectation(h, given);
    return cond_expectation((f - mf) * (h - mh), given);
}

DiscreteLaw DiscreteLaw::with_row(Vertex v, std::size_t config, std::vector<double> row) const {
    auto cpts = cpts_;
    cpts.at(v).at(config) = std::move(row);
    return DiscreteLaw(g_, supports_, std::move(cpts), 0.0, guard_);
}

RandomVariable operator+(const RandomVariable& a, const RandomVariable& b) {
    RandomVariable out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

RandomVariable operator-(const RandomVariable& a, const RandomVariable& b) {
    RandomVariable out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

RandomVariable operator*(const RandomVariable& a, const RandomVariable& b) {
    RandomVariable out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

RandomVariable operator*(double c, const RandomVariable& a) {
    RandomVariable out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
    return out;
}

RandomVariable operator-(const RandomVariable& a, double c) {
    RandomVariable out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - c;
    return out;
}

RandomVariable safe_divide(const RandomVariable& a, const RandomVariable& b) {
    RandomVariable out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = b[i] != 0 ? a[i] / b[i] : 0.0;
    return out;
}

double max_abs_difference(const DiscreteLaw& law, const RandomVariable& a, const RandomVariable& b) {
    double worst = 0;
    const auto& p = law.probabilities();
    for (std::size_t s = 0; s < p.size(); ++s) {
        if (p[s] > 0) worst = std::max(worst, std::abs(a[s] - b[s]));
    }
    return worst;
}

std::string format_value(double x) {
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e15) {
        return std::to_string(static_cast<long long>(x));
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

namespace {

using nlohmann::json;

std::vector<std::string> split_key(const std::string& key) {
    std::vector<std::string> out;
    if (key.empty()) return out;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(part);
    if (key.back() == ',') out.push_back("");
    return out;
}

double parse_number(const std::string& text, const std::string& vertex) {
    std::size_t b = text.find_first_not_of(" \t");
    std::size_t e = text.find_last_not_of(" \t");
    std::string trimmed = b == std::string::npos ? "" : text.substr(b, e - b + 1);
    double x = 0;
    auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), x);
    if (trimmed.empty() || ec != std::errc() || ptr != trimmed.data() + trimmed.size()) {
        throw CausalError(ErrorKind::InvalidLaw,
                          "vertex '" + vertex + "': '" + text + "' is not a number in a configuration key",
                          {vertex});
    }
    return x;
}

}  // namespace

DiscreteLaw parse_law(const Dag& g, std::string_view json_text, double epsilon) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw CausalError(ErrorKind::InvalidLaw, std::string("malformed law JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CausalError(ErrorKind::InvalidLaw, "law JSON must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!g.contains(it.key())) {
            throw CausalError(ErrorKind::InvalidLaw, "law mentions unknown vertex '" + it.key() + "'",
                              {it.key()});
        }
    }

    const std::size_t n = g.size();
    std::vector<std::vector<double>> supports(n);
    for (Vertex v = 0; v < n; ++v) {
        const auto& name = g.name(v);
        if (!doc.contains(name)) {
            throw CausalError(ErrorKind::InvalidLaw, "law has no entry for vertex '" + name + "'", {name});
        }
        const auto& entry = doc[name];
        if (!entry.is_object() || !entry.contains("support") || !entry["support"].is_array() ||
            !entry.contains("cpt") || !entry["cpt"].is_object()) {
            throw CausalError(ErrorKind::InvalidLaw,
                              "entry for '" + name + "' needs a \"support\" array and a \"cpt\" object", {name});
        }
        for (const auto& x : entry["support"]) {
            if (!x.is_number()) {
                throw CausalError(ErrorKind::InvalidLaw, "support of '" + name + "' must be numeric", {name});
            }
            supports[v].push_back(x.get<double>());
        }
    }

    std::vector<DiscreteLaw::Table> cpts(n);
    for (Vertex v = 0; v < n; ++v) {
        const auto& name = g.name(v);
        const auto& pa = g.parent_ids(v);
        std::size_t configs = 1;
        for (Vertex p : pa) configs *= supports[p].size();
        cpts[v].assign(configs, {});
        std::vector<char> seen(configs, 0);
        for (auto it = doc[name]["cpt"].begin(); it != doc[name]["cpt"].end(); ++it) {
            auto parts = split_key(it.key());
            if (parts.size() != pa.size()) {
                throw CausalError(ErrorKind::InvalidLaw,
                                  "vertex '" + name + "': key '" + it.key() + "' should list " +
                                      std::to_string(pa.size()) + " parent values",
                                  {name});
            }
            std::size_t c = 0;
            for (std::size_t i = 0; i < pa.size(); ++i) {
                double x = parse_number(parts[i], name);
                std::size_t idx = supports[pa[i]].size();
                for (std::size_t j = 0; j < supports[pa[i]].size(); ++j) {
                    if (supports[pa[i]][j] == x) idx = j;
                }
                if (idx == supports[pa[i]].size()) {
                    throw CausalError(ErrorKind::InvalidLaw,
                                      "vertex '" + name + "': key '" + it.key() + "' uses a value outside the support of '" +
                                          g.name(pa[i]) + "'",
                                      {name});
                }
                c = c * supports[pa[i]].size() + idx;
            }
            if (seen[c]) {
                throw CausalError(ErrorKind::InvalidLaw,
                                  "vertex '" + name + "': configuration '" + it.key() + "' given twice", {name});
            }
            seen[c] = 1;
            if (!it.value().is_array()) {
                throw CausalError(ErrorKind::InvalidLaw,
                                  "vertex '" + name + "': row '" + it.key() + "' must be an array", {name});
            }
            for (const auto& p : it.value()) {
                if (!p.is_number()) {
                    throw CausalError(ErrorKind::InvalidLaw,
                                      "vertex '" + name + "': row '" + it.key() + "' must be numeric", {name});
                }
                cpts[v][c].push_back(p.get<double>());
            }
        }
        for (std::size_t c = 0; c < configs; ++c) {
            if (!seen[c]) {
                throw CausalError(ErrorKind::InvalidLaw,
                                  "vertex '" + name + "' is missing parent configuration " + std::to_string(c),
                                  {name});
            }
        }
    }
    return DiscreteLaw(g, std::move(supports), std::move(cpts), epsilon);
}

std::string format_law(const DiscreteLaw& law) {
    const Dag& g = law.graph();
    json doc = json::object();
    for (Vertex v = 0; v < g.size(); ++v) {
        json entry;
        entry["support"] = law.support(v);
        json cpt = json::object();
        const auto& pa = g.parent_ids(v);
        for (std::size_t c = 0; c < law.config_count(v); ++c) {
            std::vector<std::string> parts(pa.size());
            std::size_t rest = c;
            for (std::size_t i = pa.size(); i-- > 0;) {
                const auto& s = law.support(pa[i]);
                parts[i] = format_value(s[rest % s.size()]);
                rest /= s.size();
            }
            std::string key;
            for (std::size_t i = 0; i < parts.size(); ++i) key += (i ? "," : "") + parts[i];
            cpt[key] = law.cpt(v)[c];
        }
        entry["cpt"] = std::move(cpt);
        doc[g.name(v)] = std::move(entry);
    }
    return doc.dump(2);
}

}  // namespace causal
