#include "toda/report.hpp"

namespace toda {

Json Report::to_json() const {
    Json j;
    j["command"] = command;
    j["status"] = status;
    j["payload"] = payload;
    return j;
}

std::string Report::emit() const { return to_json().dump(2) + "\n"; }

Json rat_json(const Rat& r) { return r.get_str(); }

Json vec_json(const std::vector<Rat>& v) {
    Json a = Json::array();
    for (auto& x : v) a.push_back(rat_json(x));
    return a;
}

Json coset_json(const BracketCoset& bc) {
    Json j;
    j["ambient"] = bc.ambient;
    bool scalar = bc.rep.size() == 1;
    if (scalar) {
        j["representative"] = rat_json(bc.rep[0]);
        Json ind = Json::array();
        for (auto& g : bc.indeterminacy)
            if (!(g.size() == 1 && g[0] == 0)) ind.push_back(rat_json(g[0]));
        j["indeterminacy"] = ind;
    } else {
        j["representative"] = vec_json(bc.rep);
        Json ind = Json::array();
        for (auto& g : bc.indeterminacy) {
            bool zero = true;
            for (auto& c : g) zero &= (c == 0);
            if (!zero) ind.push_back(vec_json(g));
        }
        j["indeterminacy"] = ind;
    }
    j["contains_zero"] = bc.contains_zero;
    return j;
}

Json group_json(const GroupInfo& g) {
    Json j;
    j["text"] = g.text;
    j["free_rank"] = g.free_rank;
    Json tor = Json::array();
    for (auto& t : g.torsion) tor.push_back(t.get_str());
    j["torsion"] = tor;
    return j;
}

Json polytope_json(const PolytopeReport& rep) {
    Json j;
    j["n"] = rep.n;
    j["modified"] = rep.modified;
    j["f_vector"] = rep.f_vector;
    j["euler_characteristic"] = rep.euler;
    auto lines = [](const std::vector<HomologyLine>& ls) {
        Json o = Json::object();
        for (auto& l : ls) o[std::to_string(l.degree)] = l.group;
        return o;
    };
    j["reduced_homology"] = lines(rep.reduced_total);
    j["boundary_reduced_homology"] = lines(rep.reduced_boundary);
    if (!rep.modified) j["edge_reduced_homology"] = lines(rep.reduced_edge);
    j["relative_homology"] = lines(rep.relative);
    j["ball_like"] = rep.ball_like;
    j["boundary_is_sphere"] = rep.boundary_sphere;
    if (!rep.modified) j["edge_acyclic"] = rep.edge_acyclic;
    j["relative_is_ball_sphere_pair"] = rep.relative_ball_sphere;
    return j;
}

}  // namespace toda
