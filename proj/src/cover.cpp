#include "mvss/cover.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mvss {

void Cover::validate() const {
    if (!parent) throw invariant_error("cover without parent");
    if (names.size() != sets.size()) throw invariant_error("cover names/sets mismatch");
    std::vector<bool> covered(parent->size(), false);
    for (const auto& s : sets) {
        SubComplex sub{parent, s};
        sub.validate();
        for (int id : s) covered[id] = true;
    }
    for (int i = 0; i < parent->size(); ++i)
        if (!covered[i]) throw invariant_error("cover does not contain cell " + std::to_string(i));
}

std::vector<int> Cover::set_at(int i, int t) const {
    std::vector<int> out;
    for (int id : sets[i])
        if (parent->cells[id].birth <= t) out.push_back(id);
    return out;
}

Cover make_cover(const FilteredComplex& parent, std::vector<std::string> names,
                 std::vector<std::vector<int>> sets, bool auto_close) {
    Cover c;
    c.parent = &parent;
    c.names = std::move(names);
    for (auto& s : sets) {
        if (auto_close) s = closure(parent, s).members;
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        c.sets.push_back(std::move(s));
    }
    c.validate();
    return c;
}

std::vector<int> intersection_cells(const Cover& cover, const std::vector<int>& set_indices) {
    if (set_indices.empty()) throw input_error("intersection of no sets");
    std::vector<int> acc = cover.sets[set_indices[0]];
    for (size_t k = 1; k < set_indices.size(); ++k) {
        const std::vector<int>& s = cover.sets[set_indices[k]];
        std::vector<int> out;
        std::set_intersection(acc.begin(), acc.end(), s.begin(), s.end(), std::back_inserter(out));
        acc = std::move(out);
    }
    return acc;
}

NerveResult nerve(const Cover& cover) {
    int m = cover.size();
    const FilteredComplex& X = *cover.parent;
    // enumerate subsets with nonempty intersection, breadth-first by cardinality
    std::map<std::vector<int>, std::pair<int, std::vector<int>>> found;  // subset -> (birth, piece cells)
    std::vector<std::vector<int>> frontier;
    for (int i = 0; i < m; ++i) {
        std::vector<int> cells = cover.sets[i];
        if (cells.empty()) continue;
        int b = X.grid.size();
        for (int id : cells) b = std::min(b, X.cells[id].birth);
        found[{i}] = {b, cells};
        frontier.push_back({i});
    }
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (const auto& setidx : frontier) {
            for (int j = setidx.back() + 1; j < m; ++j) {
                std::vector<int> bigger = setidx;
                bigger.push_back(j);
                if (found.count(bigger)) continue;
                const std::vector<int>& prev = found.at(setidx).second;
                std::vector<int> cells;
                std::set_intersection(prev.begin(), prev.end(), cover.sets[j].begin(), cover.sets[j].end(),
                                      std::back_inserter(cells));
                if (cells.empty()) continue;
                int b = X.grid.size();
                for (int id : cells) b = std::min(b, X.cells[id].birth);
                found[bigger] = {b, cells};
                next.push_back(bigger);
            }
        }
        frontier = std::move(next);
    }
    // build the nerve as a simplicial complex on set indices
    std::vector<std::pair<std::vector<int>, double>> simplices;
    for (const auto& [verts, info] : found) simplices.push_back({verts, X.grid[info.first]});
    NerveResult out;
    out.nerve = build_simplicial(simplices, X.field, X.grid, false);
    out.members.resize(out.nerve.size());
    out.piece_cells.resize(out.nerve.size());
    for (int i = 0; i < out.nerve.size(); ++i) {
        out.members[i] = out.nerve.cells[i].label.verts;
        out.piece_cells[i] = found.at(out.members[i]).second;
    }
    return out;
}

Restriction piece(const Cover& cover, const std::vector<int>& set_indices) {
    return restrict_complex(*cover.parent, intersection_cells(cover, set_indices));
}

std::vector<std::vector<int>> refinement_candidates(const Cover& V, const Cover& U) {
    if (V.parent != U.parent) throw input_error("covers of different complexes");
    std::vector<std::vector<int>> out(V.size());
    for (int i = 0; i < V.size(); ++i)
        for (int j = 0; j < U.size(); ++j)
            if (std::includes(U.sets[j].begin(), U.sets[j].end(), V.sets[i].begin(), V.sets[i].end()))
                out[i].push_back(j);
    return out;
}

RefinementMap find_refinement(const Cover& V, const Cover& U) {
    RefinementMap rm;
    auto cand = refinement_candidates(V, U);
    for (int i = 0; i < V.size(); ++i) {
        if (cand[i].empty()) {
            rm.offenders.push_back(i);
            rm.target.push_back(-1);
        } else {
            rm.target.push_back(cand[i].front());
        }
    }
    return rm;
}

Cover common_refinement(const Cover& U, const Cover& V) {
    if (U.parent != V.parent) throw input_error("covers of different complexes");
    struct Piece {
        std::string name;
        std::vector<int> cells;
    };
    std::vector<Piece> pieces;
    for (int i = 0; i < U.size(); ++i)
        for (int j = 0; j < V.size(); ++j) {
            std::vector<int> cells;
            std::set_intersection(U.sets[i].begin(), U.sets[i].end(), V.sets[j].begin(), V.sets[j].end(),
                                  std::back_inserter(cells));
            if (cells.empty()) continue;
            pieces.push_back({U.names[i] + "&" + V.names[j], cells});
        }
    // keep maximal pieces only; on ties keep the first name
    std::vector<bool> drop(pieces.size(), false);
    for (size_t a = 0; a < pieces.size(); ++a)
        for (size_t b = 0; b < pieces.size(); ++b) {
            if (a == b || drop[a] || drop[b]) continue;
            if (pieces[a].cells == pieces[b].cells) {
                if (a < b) drop[b] = true;
                continue;
            }
            if (std::includes(pieces[b].cells.begin(), pieces[b].cells.end(), pieces[a].cells.begin(),
                              pieces[a].cells.end()))
                drop[a] = true;
        }
    Cover out;
    out.parent = U.parent;
    for (size_t k = 0; k < pieces.size(); ++k) {
        if (drop[k]) continue;
        out.names.push_back(pieces[k].name);
        out.sets.push_back(pieces[k].cells);
    }
    out.validate();
    return out;
}

Cover interpolation(const Cover& W, const Cover& U, int r) {
    if (r < 0) throw input_error("interpolation step must be >= 0");
    RefinementMap rm = find_refinement(W, U);
    if (!rm.valid()) throw hypothesis_error("interpolation requires W to refine U");
    Cover out;
    out.parent = W.parent;
    out.names = W.names;
    out.sets = W.sets;
    NerveResult nu = nerve(U);
    for (int i = 0; i < nu.nerve.size(); ++i) {
        if (nu.nerve.cells[i].dim != r) continue;
        std::string nm = "U[";
        for (size_t k = 0; k < nu.members[i].size(); ++k)
            nm += (k ? "," : "") + U.names[nu.members[i][k]];
        nm += "]";
        std::vector<int> cells = nu.piece_cells[i];
        // skip duplicates of existing sets
        bool dup = false;
        for (const auto& s : out.sets)
            if (s == cells) dup = true;
        if (!dup) {
            out.names.push_back(nm);
            out.sets.push_back(cells);
        }
    }
    out.validate();
    return out;
}

Cover restrict_cover(const Cover& cover, const Restriction& sub) {
    Cover out;
    out.parent = &sub.cx;
    for (int i = 0; i < cover.size(); ++i) {
        std::vector<int> cells;
        for (int id : cover.sets[i])
            if (sub.into[id] >= 0) cells.push_back(sub.into[id]);
        if (cells.empty()) continue;
        std::sort(cells.begin(), cells.end());
        out.names.push_back(cover.names[i]);
        out.sets.push_back(std::move(cells));
    }
    out.validate();
    return out;
}

} // namespace mvss
