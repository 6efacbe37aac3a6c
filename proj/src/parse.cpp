#include <cctype>
#include <sstream>

#include "causal/dag.hpp"

namespace causal {

namespace {

struct Token {
    std::string text;
    int column;
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::string word = line.substr(start, i - start);
        // "A->B" is split into three tokens so arrows need no surrounding spaces.
        std::size_t pos = 0;
        while (true) {
            std::size_t arrow = word.find("->", pos);
            if (arrow == std::string::npos) {
                if (pos < word.size()) {
                    out.push_back({word.substr(pos), static_cast<int>(start + pos + 1)});
                }
                break;
            }
            if (arrow > pos) {
                out.push_back({word.substr(pos, arrow - pos), static_cast<int>(start + pos + 1)});
            }
            out.push_back({"->", static_cast<int>(start + arrow + 1)});
            pos = arrow + 2;
        }
    }
    return out;
}

}  // namespace

Dag parse_dag(std::string_view text) {
    std::vector<std::string> names;
    VertexSet declared;
    std::vector<Edge> edges;

    auto declare = [&](const std::string& name) {
        if (declared.insert(name).second) names.push_back(name);
    };
    auto syntax = [](const std::string& msg, int line, int col) {
        return CausalError(ErrorKind::Syntax,
                           "line " + std::to_string(line) + ", column " + std::to_string(col) +
                               ": " + msg,
                           {}, line, col);
    };

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto tokens = tokenize(line);
        if (tokens.empty()) continue;

        const auto& head = tokens.front();
        if (head.text == "node") {
            if (tokens.size() != 2) {
                int col = tokens.size() < 2 ? static_cast<int>(line.size()) + 1 : tokens[2].column;
                throw syntax("expected 'node <name>'", lineno, col);
            }
            const auto& name = tokens[1];
            if (name.text == "->") throw syntax("expected a vertex name", lineno, name.column);
            if (declared.count(name.text)) {
                throw CausalError(ErrorKind::DuplicateVertex,
                                  "line " + std::to_string(lineno) + ", column " +
                                      std::to_string(name.column) + ": duplicate vertex '" +
                                      name.text + "'",
                                  {name.text}, lineno, name.column);
            }
            declare(name.text);
        } else if (head.text == "edge") {
            if (tokens.size() != 3) {
                int col = tokens.size() < 3 ? static_cast<int>(line.size()) + 1 : tokens[3].column;
                throw syntax("expected 'edge <tail> <head>'", lineno, col);
            }
            for (std::size_t k = 1; k < 3; ++k) {
                if (tokens[k].text == "->") throw syntax("expected a vertex name", lineno, tokens[k].column);
            }
            declare(tokens[1].text);
            declare(tokens[2].text);
            edges.emplace_back(tokens[1].text, tokens[2].text);
        } else if (tokens.size() >= 2 && tokens[1].text == "->") {
            if (tokens.size() != 3) {
                int col = tokens.size() < 3 ? static_cast<int>(line.size()) + 1 : tokens[3].column;
                throw syntax("expected '<tail> -> <head>'", lineno, col);
            }
            if (head.text == "->") throw syntax("expected a vertex name", lineno, head.column);
            if (tokens[2].text == "->") throw syntax("expected a vertex name", lineno, tokens[2].column);
            declare(head.text);
            declare(tokens[2].text);
            edges.emplace_back(head.text, tokens[2].text);
        } else {
            int col = tokens.size() >= 2 ? tokens[1].column : head.column;
            throw syntax("expected 'node X', 'edge X Y' or 'X -> Y'", lineno, col);
        }
    }
    return Dag(std::move(names), edges);
}

std::string format_dag(const Dag& g) {
    std::string out;
    for (const auto& name : g.vertices()) out += "node " + name + "\n";
    for (const auto& [t, h] : g.edges()) out += t + " -> " + h + "\n";
    return out;
}

}  // namespace causal
