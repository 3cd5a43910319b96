#pragma once

#include "mvss/cover.hpp"
#include "mvss/persistence.hpp"

#include <map>
#include <string>
#include <vector>

namespace mvss {

// A contravariant diagram of filtered complexes over a simplicial index
// complex: one fiber per index cell, chain-level face maps per codimension-1
// relation. Face maps are stored as full-complex matrices per dimension;
// restriction to a grid index is by birth. All fibers are fully filtered
// (structure maps are inclusions of sublevel complexes).
struct Diagram {
    FilteredComplex index;                 // simplicial; label.verts = sorted vertex ids
    std::vector<FilteredComplex> fiber;    // per index cell id
    // face_maps[sigma][i][d] : C_d(fiber[sigma]) -> C_d(fiber[face_i(sigma)]),
    // i = position of the deleted vertex in sigma's sorted vertex list
    std::vector<std::vector<std::vector<Mat>>> face_maps;

    int face_id(int sigma, int i) const;   // index cell id of the i-th face
    // composed chain map fiber[sigma] -> fiber[tau] along any descending path
    Mat chain_map(int sigma_from, int tau_to, int d) const;
    int max_fiber_dim() const;
    // functoriality, birth compatibility, commutation with fiber boundaries
    void validate() const;

  private:
    std::map<std::vector<int>, int> vert_index_;
    friend Diagram finalize_diagram(Diagram d);
};

Diagram finalize_diagram(Diagram d);

// Diagram of the pieces of a cover over its filtered nerve; face maps are the
// piece inclusions.
struct CoverDiagram {
    Diagram diagram;
    NerveResult nerve;
    std::vector<Restriction> pieces;  // per nerve cell id, aligned with diagram.fiber
};
CoverDiagram cover_diagram(const FilteredComplex& X, const Cover& U);

// Join diagram of a filtered simplicial complex K (fixed vertex set) and a
// partition P of its vertices: fibers are prodsimplicial complexes indexed by
// the simplex on the blocks, with coordinate projections as face maps.
struct JoinDiagram {
    Diagram diagram;
    // per index cell sigma, per fiber cell: the K-simplex it came from
    std::vector<std::vector<int>> k_cell_of;
};
JoinDiagram join_diagram(const FilteredComplex& K, const std::vector<std::vector<int>>& partition);

// Geometric realization (blowup complex): cells sigma x c with the boundary
//   sum_i (-1)^i (sigma_i x image of c) + (-1)^{dim sigma} (sigma x boundary of c),
// birth = max(birth(sigma), birth(c)), and the auxiliary column filtration by
// dim(sigma) recorded in the labels.
struct Realization {
    FilteredComplex cx;
    // per blowup cell: (sigma, fiber cell)
    std::vector<std::pair<int, int>> parts;
    std::map<std::pair<int, int>, int> id_of;
};
Realization realization(const Diagram& D);

// --- double complex of a diagram -------------------------------------------

// Bigraded family over the grid with anticommuting differentials and
// per-index shift maps. slot (p,q): dv lowers q, dh lowers p.
struct DoubleComplexFamily {
    FiltrationGrid grid;
    FieldSpec field;
    int maxp = 0, maxq = 0;
    // dims[t][p][q]
    std::vector<std::vector<std::vector<int>>> dims;
    // dv[t][p][q] : (p,q) -> (p,q-1); dh[t][p][q] : (p,q) -> (p-1,q)
    std::vector<std::vector<std::vector<Mat>>> dv, dh;
    // shift[t][p][q] : block at t -> block at t+1
    std::vector<std::vector<std::vector<Mat>>> shift;
    // block owners for bridging: segments[t][p][q] = list of (owner, offset, size)
    struct Segment {
        int owner = -1;
        int offset = 0;
        int size = 0;
    };
    std::vector<std::vector<std::vector<std::vector<Segment>>>> segments;

    int dim(int t, int p, int q) const;
    const Mat& dv_at(int t, int p, int q) const;
    const Mat& dh_at(int t, int p, int q) const;
    void validate() const;  // d^2 = 0 both ways, anticommutation, shifts commute
};

// C_{p,q} = ⊕_{sigma in K^p} C_q(D(sigma)); dv = (-1)^p fiber boundary,
// dh = Cech alternating sum of face maps. Owners in segments are index cells.
DoubleComplexFamily double_complex(const Diagram& D);

// Verifies that (sigma x c) -> (c)_sigma intertwines the realization boundary
// with dv + dh at every grid index and preserves the column filtration.
struct TotalCheckReport {
    bool ok = false;
    std::string detail;  // empty when ok, else the failing identity
    int checked_indices = 0;
};
TotalCheckReport total_complex_check(const Diagram& D);

// --- pi0 and multinerve ------------------------------------------------------

// Fiberwise connected components per grid index, with merge maps across grid
// indices and component maps along face relations.
struct Pi0Diagram {
    const Diagram* D = nullptr;
    // comp_of[sigma][t][local cell] = component index (-1 if unborn)
    std::vector<std::vector<std::vector<int>>> comp_of;
    std::vector<std::vector<int>> ncomp;                    // [sigma][t]
    std::vector<std::vector<std::vector<int>>> merge;       // [sigma][t][comp] -> comp at t+1
    // face_comp[sigma][i][t][comp] -> comp in face fiber
    std::vector<std::vector<std::vector<std::vector<int>>>> face_comp;
};
Pi0Diagram pi0_diagram(const Diagram& D);

// Realization of the pi0 diagram, as a regularly filtered chain family
// (component cells can merge, so this is not a filtered complex).
ChainFamily multinerve(const Diagram& D);
ChainFamily multinerve(const Diagram& D, const Pi0Diagram& pi0);

} // namespace mvss
