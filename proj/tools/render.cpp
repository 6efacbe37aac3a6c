#include "render.hpp"

#include <sstream>

namespace causal::cli {

json to_json(const VertexSet& s) {
    return json(to_vector(s));
}

json to_json(const TimeDepSet& z) {
    json blocks = json::array();
    for (const auto& b : z.blocks) blocks.push_back(to_json(b));
    return {{"blocks", blocks}};
}

json to_json(const Dag& g) {
    json edges = json::array();
    for (const auto& [t, h] : g.edges()) edges.push_back({t, h});
    return {{"vertices", g.vertices()}, {"edges", edges}};
}

json to_json(const AdjustmentReport& r) {
    return {{"set", to_json(r.set)},
            {"valid", r.valid},
            {"minimal", r.minimal},
            {"reason", {{"kind", to_string(r.reason.kind)}, {"witness", r.reason.witness}}}};
}

json to_json(const Verdict& v) {
    json conditions = json::array();
    for (const auto& c : v.conditions) conditions.push_back({{"dsep", c.statement}, {"holds", c.holds}});
    return {{"verdict", to_string(v.kind)}, {"conditions", conditions}};
}

json to_json(const TimeDepReport& r) {
    return {{"sufficient_criterion", r.sufficient_criterion},
            {"failed_block", r.failed_block ? json(*r.failed_block) : json(nullptr)},
            {"failure", r.failure},
            {"oracle", to_string(r.oracle)}};
}

json to_json(const EifExpr& e) {
    json terms = json::array();
    for (const auto& st : e.terms()) {
        terms.push_back({{"coefficient", st.coefficient}, {"kind", to_string(st.term.kind)}, {"set", to_json(st.term.set)}});
    }
    return {{"text", e.to_text()}, {"terms", terms}};
}

json to_json(const EfficiencyReport& r) {
    return {{"efficient", r.efficient},
            {"efficient_nondesc", r.efficient_nondesc},
            {"efficient_desc", r.efficient_desc},
            {"offenders_nondesc", r.offenders_nondesc},
            {"offenders_desc", r.offenders_desc},
            {"eif", to_json(r.eif)},
            {"uninformative", to_json(r.uninformative)},
            {"pruned_dag", to_json(r.pruned_graph)},
            {"partition",
             {{"W", r.partition.W}, {"A", r.partition.A}, {"M", r.partition.M}, {"Y", r.partition.Y}}},
            {"O", to_json(r.O)},
            {"O_min", to_json(r.O_min)}};
}

json to_json(const IdentityReport& r) {
    json hypotheses = json::array();
    for (const auto& c : r.hypotheses) hypotheses.push_back({{"statement", c.statement}, {"holds", c.holds}});
    return {{"identity", to_string(r.identity)},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"discrepancy", r.discrepancy},
            {"pass", r.pass},
            {"hypotheses", hypotheses}};
}

json to_json(const CausalError& e) {
    json err = {{"kind", to_string(e.kind())}, {"message", e.what()}, {"detail", e.detail()}};
    if (e.line() > 0) {
        err["line"] = e.line();
        err["column"] = e.column();
    }
    return {{"error", err}};
}

namespace {

const char* yes_no(bool b) {
    return b ? "yes" : "no";
}

void conditions_text(std::ostringstream& os, const std::vector<Condition>& conditions) {
    for (const auto& c : conditions) os << "  [" << (c.holds ? "holds" : "fails") << "] " << c.statement << "\n";
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
    return out;
}

}  // namespace

std::string to_text(const AdjustmentReport& r) {
    std::ostringstream os;
    os << "set " << format_set(r.set) << "\n";
    os << "valid: " << yes_no(r.valid) << "\nminimal: " << yes_no(r.minimal) << "\n";
    switch (r.reason.kind) {
        case AdjustmentReason::Kind::Ok: break;
        case AdjustmentReason::Kind::ForbiddenHit:
            os << "contains forbidden vertices: " << join(r.reason.witness) << "\n";
            break;
        case AdjustmentReason::Kind::OpenPath: {
            std::string path;
            for (std::size_t i = 0; i < r.reason.witness.size(); ++i) path += (i ? " - " : "") + r.reason.witness[i];
            os << "open non-causal path: " << path << "\n";
            break;
        }
        case AdjustmentReason::Kind::Removable:
            os << "can drop: " << join(r.reason.witness) << "\n";
            break;
    }
    return os.str();
}

std::string to_text(const Verdict& v) {
    std::ostringstream os;
    os << "verdict: " << to_string(v.kind) << "\n";
    conditions_text(os, v.conditions);
    return os.str();
}

std::string to_text(const TimeDepReport& r, const TimeDepSet& z) {
    std::ostringstream os;
    os << "blocks " << format_blocks(z) << "\n";
    os << "sufficient criterion: " << yes_no(r.sufficient_criterion) << "\n";
    if (!r.failure.empty()) os << "failure: " << r.failure << "\n";
    if (r.oracle != Falsification::NotRun) os << "oracle: " << to_string(r.oracle) << "\n";
    return os.str();
}

std::string to_text(const EfficiencyReport& r) {
    std::ostringstream os;
    auto indices = [](const std::set<int>& s) {
        std::string out = "{";
        bool first = true;
        for (int i : s) {
            out += (first ? "" : ",") + std::to_string(i);
            first = false;
        }
        return out + "}";
    };
    os << "efficient: " << yes_no(r.efficient) << " (non-descendants: " << yes_no(r.efficient_nondesc)
       << ", mediators: " << yes_no(r.efficient_desc) << ")\n";
    os << "W = (" << join(r.partition.W) << "), M = (" << join(r.partition.M) << ")\n";
    os << "O = " << format_set(r.O) << ", O_min = " << format_set(r.O_min) << "\n";
    os << "offenders: non-descendants " << indices(r.offenders_nondesc) << ", mediators "
       << indices(r.offenders_desc) << "\n";
    os << "eif = " << r.eif.to_text() << "\n";
    os << "uninformative: " << format_set(r.uninformative) << "\n";
    return os.str();
}

std::string to_text(const IdentityReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << to_string(r.identity) << ": " << (r.pass ? "pass" : "FAIL") << "\n";
    os << "  lhs " << r.lhs << "\n  rhs " << r.rhs << "\n  |lhs - rhs| " << r.discrepancy << "\n";
    conditions_text(os, r.hypotheses);
    return os.str();
}

}  // namespace causal::cli
