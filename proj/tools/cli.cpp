#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "render.hpp"

namespace causal::cli {

const std::string& formats_help() {
    static const std::string text = R"(DAG file format:
  One statement per line; '#' starts a comment.
    node X        declare vertex X
    edge X Y      edge from X to Y
    X -> Y        edge from X to Y
  Edges declare their endpoints implicitly. Declaring a vertex twice, a cycle,
  or any other line is an error that reports the line and column.

Law file format (JSON):
  {"V": {"support": [v0, v1, ...],
         "cpt": {"<parent-config-key>": [p0, p1, ...], ...}}, ...}
  Every vertex has an entry. <parent-config-key> joins the values of the
  parents of V, in the order the parents were declared, with commas; root
  vertices use the empty key "". Each row lists P(V = v_i | parents) in
  support order and must sum to 1, with every probability in
  [epsilon, 1 - epsilon].

Sets are comma-separated vertex names ("O1,O2"); "", "-" and "{}" denote the
empty set. Time dependent sets give one --block per treatment in temporal
order, e.g. --block L0 --block L1,U, with "-" for an empty block.
)";
    return text;
}

namespace {

struct Options {
    std::string dag;
    std::vector<std::string> treatments;
    std::string outcome;
    std::string format = "json";
    std::optional<std::string> set, set1, set2, observables;
    std::vector<std::string> block, block1, block2;
    std::optional<std::string> law;
    std::string identity;
    std::string predicate;
    std::uint64_t seed = 0;
    std::size_t trials = 500;
    std::size_t oracle_trials = 0;
    std::optional<std::size_t> max_vertices;
    std::optional<double> level;
    double epsilon = kDefaultEpsilon;
    bool with_law = false;
};

struct Output {
    json data;
    std::string text;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CausalError(ErrorKind::InvalidArgument, "cannot read file '" + path + "'", {path});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, sep)) out.push_back(part);
    if (!s.empty() && s.back() == sep) out.push_back("");
    if (s.empty()) out.push_back("");
    return out;
}

VertexSet parse_set(const Dag& g, std::string text) {
    text = trim(text);
    if (text.size() >= 2 && text.front() == '{' && text.back() == '}') text = text.substr(1, text.size() - 2);
    VertexSet out;
    if (trim(text).empty() || trim(text) == "-") return out;
    for (const auto& raw : split(text, ',')) {
        std::string name = trim(raw);
        if (name.empty()) throw CausalError(ErrorKind::InvalidArgument, "empty vertex name in set '" + text + "'");
        g.index(name);
        out.insert(name);
    }
    return out;
}

TimeDepSet parse_blocks(const Dag& g, const std::vector<std::string>& blocks) {
    TimeDepSet z;
    for (const auto& block : blocks) z.blocks.push_back(trim(block) == "-" ? VertexSet{} : parse_set(g, block));
    return z;
}

const std::vector<std::string>& required(const std::vector<std::string>& v, const char* flag) {
    if (v.empty()) throw CausalError(ErrorKind::InvalidArgument, std::string("missing required option ") + flag);
    return v;
}

const std::string& required(const std::optional<std::string>& v, const char* flag) {
    if (!v) throw CausalError(ErrorKind::InvalidArgument, std::string("missing required option ") + flag);
    return *v;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Syntax:
        case ErrorKind::DuplicateVertex:
        case ErrorKind::UnknownVertex:
        case ErrorKind::Cycle:
        case ErrorKind::InvalidArgument:
        case ErrorKind::InvalidLaw: return kExitUsage;
        case ErrorKind::InvalidSet:
        case ErrorKind::NoAdjustmentSet:
        case ErrorKind::GuardExceeded:
        case ErrorKind::Unsupported:
        case ErrorKind::HypothesisFailed: return kExitDomain;
    }
    return kExitDomain;
}

class Context {
public:
    explicit Context(const Options& o) : opt(o), g(parse_dag(read_file(o.dag))), q(make_query(g, o.treatments, o.outcome)) {}

    const Options& opt;
    Dag g;
    Query q;

    VertexSet candidates() const { return opt.observables ? parse_set(g, *opt.observables) : VertexSet{}; }

    DiscreteLaw law() const {
        if (opt.law) return parse_law(g, read_file(*opt.law), opt.epsilon);
        RandomLawSpec spec;
        spec.seed = opt.seed;
        spec.epsilon = opt.epsilon;
        return random_law(g, spec);
    }

    RandomLawSpec spec() const {
        RandomLawSpec s;
        s.seed = opt.seed;
        s.epsilon = opt.epsilon;
        return s;
    }

    double level(const DiscreteLaw& l) const {
        if (!q.point()) throw CausalError(ErrorKind::Unsupported, "this command needs a single treatment");
        return opt.level ? *opt.level : l.support(q.treatment()).back();
    }
};

std::string list_text(const std::vector<VertexSet>& sets) {
    std::string out;
    for (const auto& s : sets) out += format_set(s) + "\n";
    return out;
}

Output adjust_check(const Context& c) {
    auto r = is_minimal_adjustment(c.g, c.q, parse_set(c.g, required(c.opt.set, "--set")));
    return {to_json(r), to_text(r)};
}

Output adjust_optimal(const Context& c) {
    VertexSet o = optimal_set(c.g, c.q);
    json data = {{"O", to_json(o)}};
    std::string text = "O = " + format_set(o) + "\n";
    if (c.q.point()) {
        VertexSet omin = optimal_minimal_set(c.g, c.q);
        data["O_min"] = to_json(omin);
        text += "O_min = " + format_set(omin) + "\n";
    }
    return {data, text};
}

Output adjust_enumerate(const Context& c) {
    std::size_t guard = c.opt.max_vertices.value_or(kDefaultAdjustmentGuard);
    auto sets = enumerate_adjustment_sets(c.g, c.q, guard, c.candidates());
    json arr = json::array();
    for (const auto& s : sets) arr.push_back(to_json(s));
    json data = {{"sets", arr}, {"count", sets.size()}};
    std::string text = list_text(sets);
    if (sets.empty()) {
        data["note"] = "no time independent adjustment set exists";
        text = "no time independent adjustment set exists\n";
    }
    return {data, text};
}

Output adjust_compare(const Context& c) {
    auto v = compare_theorem1(c.g, c.q, parse_set(c.g, required(c.opt.set1, "--set1")),
                              parse_set(c.g, required(c.opt.set2, "--set2")));
    return {to_json(v), to_text(v)};
}

Output adjust_prune(const Context& c) {
    VertexSet z = parse_set(c.g, required(c.opt.set, "--set"));
    if (!is_valid_adjustment(c.g, c.q, z).valid) {
        throw CausalError(ErrorKind::InvalidSet, format_set(z) + " is not a valid adjustment set", to_vector(z));
    }
    VertexSet pruned = prune_adjustment(c.g, c.q, z);
    return {{{"set", to_json(z)}, {"pruned", to_json(pruned)}}, "pruned = " + format_set(pruned) + "\n"};
}

Output timedep_check(const Context& c) {
    TimeDepSet z = parse_blocks(c.g, required(c.opt.block, "--block"));
    auto r = is_valid_time_dep(c.g, c.q, z);
    if (c.opt.oracle_trials > 0) r.oracle = falsify_time_dep(c.g, c.q, z, c.spec(), c.opt.oracle_trials);
    json data = to_json(r);
    data["blocks"] = to_json(z)["blocks"];
    return {data, to_text(r, z)};
}

Output timedep_enumerate(const Context& c) {
    std::size_t guard = c.opt.max_vertices.value_or(kDefaultTimeDepGuard);
    auto sets = enumerate_time_dep(c.g, c.q, guard, c.candidates());
    json arr = json::array();
    std::string text;
    for (const auto& z : sets) {
        arr.push_back(to_json(z));
        text += format_blocks(z) + "\n";
    }
    return {{{"sets", arr}, {"count", sets.size()}}, text};
}

Output timedep_compare(const Context& c) {
    auto v = compare_theorem5(c.g, c.q, parse_blocks(c.g, required(c.opt.block1, "--block1")),
                              parse_blocks(c.g, required(c.opt.block2, "--block2")));
    return {to_json(v), to_text(v)};
}

Output eff_check(const Context& c) {
    auto r = check_efficient(c.g, c.q);
    return {to_json(r), to_text(r)};
}

Output eff_prune(const Context& c) {
    if (!c.q.point()) throw CausalError(ErrorKind::Unsupported, "pruning needs a single treatment");
    if (!ancestors(c.g, {c.q.outcome}).count(c.q.treatment())) {
        throw CausalError(ErrorKind::InvalidArgument, "the treatment is not an ancestor of the outcome");
    }
    Dag pruned = prune(c.g, c.q);
    json data = {{"pruned_dag", to_json(pruned)},
                 {"indirect", to_json(indirect_nodes(c.g, c.q))},
                 {"irrelevant", to_json(irrelevant_nodes(c.g, c.q))}};
    return {data, format_dag(pruned)};
}

IdentityArgs identity_args(const Context& c) {
    IdentityArgs a;
    if (c.opt.set1) a.g = parse_set(c.g, *c.opt.set1);
    if (c.opt.set2) a.b = parse_set(c.g, *c.opt.set2);
    if (!c.opt.block1.empty()) a.g_blocks = parse_blocks(c.g, c.opt.block1);
    if (!c.opt.block2.empty()) a.b_blocks = parse_blocks(c.g, c.opt.block2);
    if (!c.opt.block.empty() && c.opt.block1.empty()) a.g_blocks = parse_blocks(c.g, c.opt.block);
    return a;
}

Output oracle_verify(const Context& c) {
    Identity id = parse_identity(c.opt.identity);
    DiscreteLaw law = c.law();
    auto r = verify_identity(law, c.q, id, identity_args(c));
    json data = to_json(r);
    if (!c.opt.law) data["seed"] = c.opt.seed;
    return {data, to_text(r)};
}

json witness_json(const std::optional<Witness>& w, bool with_law, const std::function<json(const DiscreteLaw&)>& extra) {
    if (!w) return {{"found", false}};
    json out = {{"found", true}, {"trial", w->trial}, {"seed", w->seed}};
    json fields = extra(w->law);
    for (auto& [k, v] : fields.items()) out[k] = v;
    if (with_law) out["law"] = json::parse(format_law(w->law));
    return out;
}

std::string witness_text(const std::string& label, const json& w) {
    if (!w["found"].get<bool>()) return label + ": not found\n";
    std::ostringstream os;
    os << label << ": trial " << w["trial"].get<std::size_t>() << ", seed " << w["seed"].get<std::uint64_t>();
    for (const char* key : {"ratio", "gap", "mean"}) {
        if (w.contains(key)) os << ", " << key << " " << w[key].get<double>();
    }
    os << "\n";
    return os.str();
}

Output oracle_search(const Context& c) {
    const std::string& p = c.opt.predicate;
    const RandomLawSpec spec = c.spec();
    const std::size_t trials = c.opt.trials;
    json data = {{"predicate", p}, {"trials", trials}, {"seed", c.opt.seed}};
    std::string text;

    if (p == "variance-reversal") {
        std::function<std::pair<double, double>(const DiscreteLaw&)> variances;
        if (!c.opt.block1.empty() || !c.opt.block2.empty()) {
            TimeDepSet z1 = parse_blocks(c.g, required(c.opt.block1, "--block1"));
            TimeDepSet z2 = parse_blocks(c.g, required(c.opt.block2, "--block2"));
            variances = [&c, z1, z2](const DiscreteLaw& law) {
                Levels a = default_levels(law, c.q);
                return std::pair{law.variance(psi_td(law, c.q, a, z1)), law.variance(psi_td(law, c.q, a, z2))};
            };
        } else {
            VertexSet z1 = parse_set(c.g, required(c.opt.set1, "--set1"));
            VertexSet z2 = parse_set(c.g, required(c.opt.set2, "--set2"));
            variances = [&c, z1, z2](const DiscreteLaw& law) {
                double a = c.level(law);
                return std::pair{law.variance(psi_ti(law, c.q, a, z1)), law.variance(psi_ti(law, c.q, a, z2))};
            };
        }
        auto ratio = [&](const DiscreteLaw& law) {
            auto [v1, v2] = variances(law);
            return json{{"ratio", v1 / v2}, {"variance1", v1}, {"variance2", v2}};
        };
        auto smaller = search_witness(c.g, spec, [&](const DiscreteLaw& law) {
            auto [v1, v2] = variances(law);
            return v1 < v2 - kIdentityTolerance;
        }, trials);
        auto larger = search_witness(c.g, spec, [&](const DiscreteLaw& law) {
            auto [v1, v2] = variances(law);
            return v1 > v2 + kIdentityTolerance;
        }, trials);
        data["first_smaller"] = witness_json(smaller, c.opt.with_law, ratio);
        data["first_larger"] = witness_json(larger, c.opt.with_law, ratio);
        text = witness_text("first smaller", data["first_smaller"]) + witness_text("first larger", data["first_larger"]);
    } else if (p == "eif-gap") {
        auto report = check_efficient(c.g, c.q);
        auto gap = [&](const DiscreteLaw& law) {
            double a = c.level(law);
            return max_abs_difference(law, eval_eif(law, c.q, a, report.eif), psi_ti(law, c.q, a, report.O));
        };
        auto w = search_witness(c.g, spec, [&](const DiscreteLaw& law) { return gap(law) > kIdentityTolerance; }, trials);
        data["witness"] = witness_json(w, c.opt.with_law, [&](const DiscreteLaw& law) { return json{{"gap", gap(law)}}; });
        text = witness_text("eif differs from psi(O)", data["witness"]);
    } else if (p == "nonzero-mean") {
        VertexSet z = parse_set(c.g, required(c.opt.set1, "--set1"));
        auto mean = [&](const DiscreteLaw& law) { return law.expectation(psi_ti(law, c.q, c.level(law), z)); };
        auto w = search_witness(c.g, spec, [&](const DiscreteLaw& law) { return std::abs(mean(law)) > 1e-10; }, trials);
        data["witness"] = witness_json(w, c.opt.with_law, [&](const DiscreteLaw& law) { return json{{"mean", mean(law)}}; });
        text = witness_text("nonzero mean", data["witness"]);
    } else {
        throw CausalError(ErrorKind::InvalidArgument,
                          "unknown predicate '" + p + "' (known: variance-reversal, eif-gap, nonzero-mean)");
    }
    return {data, text};
}

using Handler = Output (*)(const Context&);

void emit_error(const CausalError& e, const Options& opt, std::ostream& out, std::ostream& err) {
    if (opt.format == "text") {
        err << "error: " << e.what() << "\n";
    } else {
        out << to_json(e).dump(2) << "\n";
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Causal adjustment and efficiency analysis on DAGs", "causaldag"};
    app.footer(formats_help());
    app.require_subcommand(1, 1);

    std::map<CLI::App*, Handler> handlers;
    auto add = [&](const char* name, const char* description, Handler h) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--dag", opt.dag, "DAG file")->required();
        sub->add_option("-A,--treatment", opt.treatments, "treatment, repeat in temporal order")->required();
        sub->add_option("-Y,--outcome", opt.outcome, "outcome")->required();
        sub->add_option("--format", opt.format, "json or text")->check(CLI::IsMember({"json", "text"}));
        sub->footer(formats_help());
        handlers[sub] = h;
        return sub;
    };

    add("adjust-check", "check validity and minimality of an adjustment set", adjust_check)
        ->add_option("--set", opt.set, "adjustment set");
    add("adjust-optimal", "optimal and optimal minimal adjustment sets", adjust_optimal);
    auto* enumerate = add("adjust-enumerate", "all valid adjustment sets", adjust_enumerate);
    enumerate->add_option("--observables", opt.observables, "candidate vertices (default: all)");
    enumerate->add_option("--max-vertices", opt.max_vertices, "candidate pool limit");
    auto* compare = add("adjust-compare", "compare two adjustment sets graphically", adjust_compare);
    compare->add_option("--set1", opt.set1, "first set");
    compare->add_option("--set2", opt.set2, "second set");
    add("adjust-prune", "drop members that do not help predict the outcome", adjust_prune)
        ->add_option("--set", opt.set, "adjustment set");

    auto* tcheck = add("timedep-check", "time dependent sufficient criterion", timedep_check);
    tcheck->add_option("--block", opt.block, "one block per treatment, repeated in order (\"-\" for an empty block)");
    tcheck->add_option("--oracle-trials", opt.oracle_trials, "random laws for the identity check (0 skips it)");
    tcheck->add_option("--seed", opt.seed, "seed for the random laws");
    tcheck->add_option("--epsilon", opt.epsilon, "positivity bound of random laws");
    auto* tenum = add("timedep-enumerate", "all time dependent sets passing the criterion", timedep_enumerate);
    tenum->add_option("--observables", opt.observables, "candidate vertices (default: all)");
    tenum->add_option("--max-vertices", opt.max_vertices, "candidate pool limit");
    auto* tcompare = add("timedep-compare", "compare two time dependent sets graphically", timedep_compare);
    tcompare->add_option("--block1", opt.block1, "blocks of the first set, repeated");
    tcompare->add_option("--block2", opt.block2, "blocks of the second set, repeated");

    add("eff-check", "is the optimally adjusted estimator efficient", eff_check);
    add("eff-prune", "remove vertices irrelevant for efficient estimation", eff_prune);

    auto* verify = add("oracle-verify", "verify a variance identity on a law", oracle_verify);
    verify->add_option("--identity", opt.identity, "identity name")->required();
    verify->add_option("--law", opt.law, "law file (default: random law from --seed)");
    verify->add_option("--seed", opt.seed, "seed of the random law");
    verify->add_option("--epsilon", opt.epsilon, "positivity bound");
    verify->add_option("--set1", opt.set1, "G, or Z1 for inv_pi");
    verify->add_option("--set2", opt.set2, "B, or Z2 for inv_pi");
    verify->add_option("--block", opt.block, "blocks for definition1, repeated");
    verify->add_option("--block1", opt.block1, "G blocks, repeated");
    verify->add_option("--block2", opt.block2, "B blocks, repeated");

    auto* search = add("oracle-search", "search random laws for a witness", oracle_search);
    search->add_option("--predicate", opt.predicate, "variance-reversal, eif-gap or nonzero-mean")->required();
    search->add_option("--set1", opt.set1, "first set");
    search->add_option("--set2", opt.set2, "second set");
    search->add_option("--block1", opt.block1, "blocks of the first set, repeated");
    search->add_option("--block2", opt.block2, "blocks of the second set, repeated");
    search->add_option("--seed", opt.seed, "search seed");
    search->add_option("--trials", opt.trials, "maximum number of laws");
    search->add_option("--epsilon", opt.epsilon, "positivity bound");
    search->add_option("--level", opt.level, "treatment level");
    search->add_flag("--with-law", opt.with_law, "include witness laws in the output");

    // "eff check" is accepted as a spelling of "eff-check".
    std::vector<std::string> joined = args;
    if (joined.size() >= 2) {
        std::string candidate = joined[0] + "-" + joined[1];
        for (const auto& [sub, h] : handlers) {
            if (sub->get_name() == candidate) {
                joined.erase(joined.begin());
                joined[0] = candidate;
                break;
            }
        }
    }
    std::vector<std::string> reversed(joined.rbegin(), joined.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\nRun with --help for usage.\n";
        json j = {{"error", {{"kind", "usage"}, {"message", e.what()}, {"detail", json::array()}}}};
        out << j.dump(2) << "\n";
        return kExitUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    try {
        Context ctx(opt);
        Output o = handlers.at(chosen)(ctx);
        if (opt.format == "text") {
            out << o.text;
        } else {
            out << o.data.dump(2) << "\n";
        }
        return kExitOk;
    } catch (const CausalError& e) {
        emit_error(e, opt, out, err);
        return exit_code(e.kind());
    }
}

}  // namespace causal::cli
