#include <algorithm>
#include <map>

#include "causal/efficiency.hpp"

namespace causal {

const char* to_string(TermKind kind) {
    switch (kind) {
        case TermKind::BAtom: return "BAtom";
        case TermKind::Chi: return "Chi";
        case TermKind::BCond: return "BCond";
        case TermKind::TCond: return "TCond";
        case TermKind::IPWY: return "IPWY";
        case TermKind::IPWB: return "IPWB";
        case TermKind::IPWResidual: return "IPWResidual";
        case TermKind::Zero: return "Zero";
    }
    return "unknown";
}

EifExpr EifExpr::canonical(std::string treatment, std::string outcome, VertexSet O,
                           VertexSet O_min, const std::vector<SignedTerm>& terms) {
    EifExpr e;
    e.treatment = std::move(treatment);
    e.outcome = std::move(outcome);
    e.O = std::move(O);
    e.O_min = std::move(O_min);

    std::map<Term, int> merged;
    for (const auto& st : terms) {
        Term t = st.term;
        if (t.kind == TermKind::Zero) continue;
        if (t.kind != TermKind::BCond && t.kind != TermKind::TCond) t.set.clear();
        if (t.kind == TermKind::BCond && t.set.empty()) t = {TermKind::Chi, {}};
        if (t.kind == TermKind::BCond && is_subset(e.O, t.set)) t = {TermKind::BAtom, {}};
        if (t.kind == TermKind::TCond && t.set.empty()) t = {TermKind::Chi, {}};
        merged[t] += st.coefficient;
    }
    for (const auto& [t, c] : merged) {
        if (c != 0) e.terms_.push_back({c, t});
    }
    if (e.terms_.empty()) e.terms_.push_back({1, {TermKind::Zero, {}}});
    return e;
}

bool EifExpr::is_zero() const {
    return terms_.size() == 1 && terms_.front().term.kind == TermKind::Zero;
}

VertexSet EifExpr::mentioned() const {
    VertexSet out;
    auto add = [&](const VertexSet& s) { out.insert(s.begin(), s.end()); };
    for (const auto& st : terms_) {
        switch (st.term.kind) {
            case TermKind::BAtom: add(O); break;
            case TermKind::BCond:
            case TermKind::TCond: add(st.term.set); break;
            case TermKind::IPWY:
                add(O_min);
                add({treatment, outcome});
                break;
            case TermKind::IPWB:
                add(O);
                add(O_min);
                add({treatment});
                break;
            case TermKind::IPWResidual:
                add(O);
                add(O_min);
                add({treatment, outcome});
                break;
            case TermKind::Chi:
            case TermKind::Zero: break;
        }
    }
    return out;
}

namespace {

std::string symbol(const Term& t) {
    switch (t.kind) {
        case TermKind::BAtom: return "b";
        case TermKind::Chi: return "chi";
        case TermKind::BCond: return "E[b|" + format_set(t.set) + "]";
        case TermKind::TCond: return "E[T|" + format_set(t.set) + "]";
        case TermKind::IPWY: return "IPW*Y";
        case TermKind::IPWB: return "IPW*b";
        case TermKind::IPWResidual: return "IPW*(Y - b)";
        case TermKind::Zero: return "0";
    }
    return "?";
}

}  // namespace

std::string EifExpr::to_text() const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& st : terms_) {
        int c = st.coefficient;
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        int magnitude = c < 0 ? -c : c;
        if (magnitude != 1) out += std::to_string(magnitude) + "*";
        out += symbol(st.term);
        first = false;
    }
    return out;
}

EifExpr EifExpr::operator+(const EifExpr& other) const {
    std::vector<SignedTerm> all = terms_;
    all.insert(all.end(), other.terms_.begin(), other.terms_.end());
    return canonical(treatment, outcome, O, O_min, all);
}

bool EifExpr::operator==(const EifExpr& other) const {
    return treatment == other.treatment && outcome == other.outcome && O == other.O &&
           O_min == other.O_min && terms_ == other.terms_;
}

EifExpr psi_canonical(const std::string& treatment, const std::string& outcome,
                      const VertexSet& O, const VertexSet& O_min) {
    return EifExpr::canonical(treatment, outcome, O, O_min,
                              {{1, {TermKind::BAtom, {}}},
                               {-1, {TermKind::Chi, {}}},
                               {1, {TermKind::IPWResidual, {}}}});
}

}  // namespace causal
