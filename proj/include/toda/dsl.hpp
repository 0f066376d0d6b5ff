#pragma once

#include "toda/chain.hpp"
#include "toda/lie.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace toda {

// ---------------------------------------------------------------------------
// Presentation DSL
//
//   file   := item* ; item := dgl | chain | map
//   dgl    := "dgl" ID "{" ( "gen" ID ":" INT ";" | "d" ID "=" lie ";"
//                          | "truncate" INT ";" )* "}"
//   lie    := term (("+"|"-") term)* ; term := RAT? factor
//   factor := ID | "[" lie "," lie "]" | "0"
//   chain  := "chain" ID "over" ("Z"|"Q"|"F" INT)
//             "{" ( "deg" INT "rank" INT ";" | "boundary" INT "=" matrix ";" )* "}"
//   map    := "map" ID ":" ID "->" ID ("shift" INT)?
//             "{" ( "deg" INT "=" matrix ";" )* "}"
//   matrix := "[" row (";" row)* "]" ; row := scalar ("," scalar)*
// ---------------------------------------------------------------------------

enum class ParseErrorKind { Lexical, Syntax, Semantic };

struct ParseError {
    ParseErrorKind kind;
    int line = 1, col = 1;
    std::string message;

    std::string code() const {
        switch (kind) {
            case ParseErrorKind::Lexical: return "lexical";
            case ParseErrorKind::Syntax: return "syntax";
            case ParseErrorKind::Semantic: return "semantic";
        }
        return "?";
    }
    std::string to_string() const {
        return code() + " error at " + std::to_string(line) + ":" + std::to_string(col) + ": " +
               message;
    }
};

struct MapItem {
    std::string name, src, dst;
    int shift = 0;
    std::map<int, Mat> comp;
};

struct PresentationFile {
    std::vector<std::string> order;  // item names in file order
    std::map<std::string, FreeDGL> dgls;
    std::map<std::string, FreeChainComplex> chains;
    std::map<std::string, MapItem> maps;
};

struct ParseResult {
    std::optional<PresentationFile> file;
    std::optional<ParseError> error;
    bool ok() const { return file.has_value(); }
};

ParseResult parse(const std::string& text);

// Canonical printer; print . parse . print == print.
std::string print(const PresentationFile& f);

// Resolve a map item against the parsed complexes (dimension checks included).
GradedMap resolve_map(const PresentationFile& f, const MapItem& m);

// Parse a Lie expression against a specific algebra (used by --class flags).
struct LieParseResult {
    std::optional<LieExpr> expr;
    std::optional<ParseError> error;
};
LieParseResult parse_lie(const FreeDGL& D, const std::string& text);

std::string print_lie(const FreeDGL& D, const LieExpr& e);

}  // namespace toda
