#pragma once

#include "mvss/complex.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mvss {

// A cover of a filtered complex by named face-closed subcomplexes whose union
// is the whole complex.
struct Cover {
    const FilteredComplex* parent = nullptr;
    std::vector<std::string> names;
    std::vector<std::vector<int>> sets;  // sorted cell ids, face-closed

    int size() const { return int(sets.size()); }
    void validate() const;
    // cells of set i born by t
    std::vector<int> set_at(int i, int t) const;
};

Cover make_cover(const FilteredComplex& parent, std::vector<std::string> names,
                 std::vector<std::vector<int>> sets, bool auto_close = true);

// Filtered nerve: one vertex per cover set, a simplex per intersection that is
// nonempty at some grid value, born at the first such value. The returned
// complex is simplicial with label.verts = sorted set indices.
struct NerveResult {
    FilteredComplex nerve;
    // members[cell id of nerve] = sorted set indices of the simplex
    std::vector<std::vector<int>> members;
    // cell ids (in parent) of each intersection piece
    std::vector<std::vector<int>> piece_cells;
};
NerveResult nerve(const Cover& cover);

// Intersection of the named sets, as sorted parent cell ids (possibly empty).
std::vector<int> intersection_cells(const Cover& cover, const std::vector<int>& set_indices);

// The piece indexed by a nerve simplex, extracted as a standalone complex.
Restriction piece(const Cover& cover, const std::vector<int>& set_indices);

// Vertex assignment rho with V_i ⊆ U_{rho(i)}; lexicographically first
// containing set by set order.
struct RefinementMap {
    std::vector<int> target;  // per V-set index, a U-set index
    // V-sets with no containing U-set (empty iff the map is valid)
    std::vector<int> offenders;

    bool valid() const { return offenders.empty(); }
};
RefinementMap find_refinement(const Cover& V, const Cover& U);

// All admissible targets per V-set (every U-set containing it); used for
// refinement-independence checks.
std::vector<std::vector<int>> refinement_candidates(const Cover& V, const Cover& U);

// Common refinement {U_i ∩ V_j}: empty intersections dropped, duplicate cell
// sets dropped, and sets contained in another kept set dropped (keeping
// lexicographically-first pair names), so the result lists maximal pieces.
Cover common_refinement(const Cover& U, const Cover& V);

// (r,W,U)-interpolation: W ∪ {U_tau : tau an r-dimensional nerve simplex of U}.
// Requires W ≺ U.
Cover interpolation(const Cover& W, const Cover& U, int r);

// Restrict a cover to a face-closed subcomplex of its parent: sets S ∩ piece,
// nonempty ones only, as a cover of the restricted complex.
Cover restrict_cover(const Cover& cover, const Restriction& sub);

} // namespace mvss
