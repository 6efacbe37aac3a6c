#include "causal/vertex_set.hpp"

#include <algorithm>
#include <iterator>

#include "causal/error.hpp"

namespace causal {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Syntax: return "syntax";
        case ErrorKind::DuplicateVertex: return "duplicate_vertex";
        case ErrorKind::UnknownVertex: return "unknown_vertex";
        case ErrorKind::Cycle: return "cycle";
        case ErrorKind::InvalidArgument: return "invalid_argument";
        case ErrorKind::InvalidSet: return "invalid_set";
        case ErrorKind::NoAdjustmentSet: return "no_adjustment_set";
        case ErrorKind::GuardExceeded: return "guard_exceeded";
        case ErrorKind::Unsupported: return "unsupported";
        case ErrorKind::HypothesisFailed: return "hypothesis_failed";
        case ErrorKind::InvalidLaw: return "invalid_law";
    }
    return "unknown";
}

CausalError::CausalError(ErrorKind kind, const std::string& message,
                         std::vector<std::string> detail, int line, int column)
    : std::runtime_error(message),
      kind_(kind),
      detail_(std::move(detail)),
      line_(line),
      column_(column) {}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.end()));
    return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
    return out;
}

VertexSet set_symmetric_difference(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::inserter(out, out.end()));
    return out;
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool disjoint(const VertexSet& a, const VertexSet& b) {
    return set_intersection(a, b).empty();
}

VertexSet with(VertexSet s, const std::string& v) {
    s.insert(v);
    return s;
}

VertexSet without(VertexSet s, const std::string& v) {
    s.erase(v);
    return s;
}

VertexSet to_set(const std::vector<std::string>& names) {
    return VertexSet(names.begin(), names.end());
}

std::vector<std::string> to_vector(const VertexSet& s) {
    return std::vector<std::string>(s.begin(), s.end());
}

std::string format_set(const VertexSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& v : s) {
        if (!first) out += ",";
        out += v;
        first = false;
    }
    return out + "}";
}

}  // namespace causal
