#pragma once

#include "toda/chain.hpp"
#include "toda/examples.hpp"
#include "toda/polytope.hpp"

#include "json.hpp"

#include <string>

namespace toda {

using Json = nlohmann::json;

// Canonical report envelope: command echo, status (ok | obstruction | invalid),
// payload. Keys are emitted sorted; all scalars are exact strings.
struct Report {
    std::string command;
    std::string status = "ok";
    Json payload = Json::object();

    Json to_json() const;
    std::string emit() const;  // canonical text form
    int exit_code() const {
        if (status == "ok") return 0;
        if (status == "obstruction") return 2;
        return 1;
    }
};

Json rat_json(const Rat& r);
Json vec_json(const std::vector<Rat>& v);
// Coset payload: {"representative", "indeterminacy", "contains_zero"}; rank-1
// ambient groups flatten to scalar strings.
Json coset_json(const BracketCoset& bc);
Json group_json(const GroupInfo& g);
Json polytope_json(const PolytopeReport& rep);

}  // namespace toda
