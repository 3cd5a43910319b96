#pragma once

#include "mvss/persistence.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mvss {

// A carrier X ⇉ Y[eps]: per source cell (and, when time-varying, per grid
// index) a face-closed set of target cells; the assignment at grid index t is
// read inside Y at snap(grid[t] + eps). For a full-simplex structural carrier
// the assignment is the set of simplices spanned by a vertex set, which
// certifies acyclicity without a homology run.
struct Carrier {
    const FilteredComplex* src = nullptr;
    const FilteredComplex* dst = nullptr;
    double eps = 0;

    // constant assignment per source cell (face-closed target cell ids)
    std::vector<std::vector<int>> assign;
    // when set, assignment per grid index per cell (overrides `assign`)
    std::vector<std::vector<std::vector<int>>> assign_t;

    // structural certificate: assignment = all target simplices spanned by a
    // vertex set (target must be simplicial); acyclic by construction
    bool full_simplex = false;
    std::vector<std::vector<int>> vertex_sets;  // per source cell, target vertex ids

    // explicit per-t target indices (set on composites, where two snapped
    // shifts are realized); default is snap(grid[t] + eps)
    std::vector<int> targets;

    bool time_varying() const { return !assign_t.empty(); }
    // assignment at grid index t intersected with the born part of Y
    std::vector<int> eval(int cell, int t) const;
    std::vector<int> eval_at_index(int cell, int t, int u) const;
    int target_index(int t) const {
        return targets.empty() ? dst->grid.shift_index(t, eps) : targets.at(t);
    }
};

// carrier sending every cell to the closure of its image under a cell map
// (identity map: closure carrier, carries the eps-shift)
Carrier closure_carrier(const FilteredComplex& X, const FilteredComplex& Y, double eps,
                        const std::vector<int>& cell_map);

struct AcyclicityReport {
    bool ok = true;
    // first failure: (cell, grid index, degree); degree -1 flags emptiness
    int cell = -1, t = -1, degree = -1;
    std::string detail;
};

// reduced homology of every assigned subcomplex vanishes (checked at the grid
// indices where the evaluated assignment changes); max_deg < 0 checks all
// degrees present
AcyclicityReport check_acyclic(const Carrier& F, int max_deg = -1);
std::optional<std::string> check_semicontinuous(const Carrier& F);
std::optional<std::string> check_time_coherent(const Carrier& F);

// union-of-images composition; acyclicity is not preserved in general
Carrier compose(const Carrier& F, const Carrier& G);

// whether F(c) ⊆ G(c) for every cell and grid index
std::optional<std::string> carrier_contained(const Carrier& F, const Carrier& G);

// A family of chain maps f_t : C_*(X_t) -> C_*(Y_{snap(t+eps)}) carried by a
// carrier; images are fixed at the birth index of each cell, so the family
// commutes with the inclusions.
struct ChainMapFamily {
    const FilteredComplex* src = nullptr;
    const FilteredComplex* dst = nullptr;
    double eps = 0;
    // per source cell: target chain (full-complex coordinates)
    std::vector<std::vector<std::pair<int, int>>> image;

    // matrix C_d(X_t) -> C_d(Y_{snap(t+eps)})
    Mat matrix(int d, int t) const;
    // matrix of the map induced on H_d
    Mat induced(int d, int t, const HomologyBasis& hx, const HomologyBasis& hy) const;
};

// Existence half of the acyclic carrier theorem, filtered version: build a
// carried chain map by induction on birth and dimension, solving
// ∂h = f(∂c) inside the carrier of c. rng_salt permutes solution choices so
// distinct syntheses of the same carrier can be produced.
ChainMapFamily synthesize_chain_map(const Carrier& F, unsigned rng_salt = 0);

// Equivalence half: a carried chain homotopy h with ∂h + h∂ = g - f.
struct HomotopyFamily {
    const FilteredComplex* src = nullptr;
    const FilteredComplex* dst = nullptr;
    double eps = 0;
    std::vector<std::vector<std::pair<int, int>>> image;  // per source cell, degree dim+1 chain
    Mat matrix(int d, int t) const;                       // C_d(X_t) -> C_{d+1}(Y_{snap(t+eps)})
};
HomotopyFamily synthesize_homotopy(const Carrier& F, const ChainMapFamily& f, const ChainMapFamily& g);

// verify ∂h + h∂ = g - f at every grid index (matrix identity)
std::optional<std::string> check_homotopy(const HomotopyFamily& h, const ChainMapFamily& f,
                                          const ChainMapFamily& g);

// verify ∂f = f∂ and carried-ness
std::optional<std::string> check_chain_map(const ChainMapFamily& f, const Carrier& F);

// --- equivalence packs -------------------------------------------------------

struct EquivalencePack {
    // complexes owned by the pack so carriers can point at them
    std::shared_ptr<FilteredComplex> X, Y;
    Carrier F, G, IX, IY;
    double eps = 0;
};

// Vietoris-Rips carriers between two point clouds with eps = 2 d_H: each
// simplex goes to the full simplex on the target vertices within eps/2 of its
// vertex set.
EquivalencePack vr_carrier(const std::vector<std::vector<double>>& Xpts,
                           const std::vector<std::vector<double>>& Ypts, int max_dim,
                           FieldSpec field = FieldSpec(2));

double hausdorff(const std::vector<std::vector<double>>& A, const std::vector<std::vector<double>>& B);

// Cubical lattice carriers between C(Z^N) and C(rZ^N + l) filtered by the
// sampled function values (lower-star); eps is the measured birth shift of
// the two carriers, snapped to the common grid.
EquivalencePack lattice_carrier(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& r, const std::vector<double>& l,
                                const std::vector<double>& window_min, const std::vector<double>& window_max,
                                FieldSpec field = FieldSpec(2));

struct EquivalenceCertificate {
    bool valid = false;
    double eps = 0;
    double snapped_eps = 0;
    std::string failure;
    std::vector<double> bottlenecks;  // per homology degree
    bool bottleneck_ok = true;
};

// checks the four containments and acyclicity, synthesizes both chain maps,
// and asserts bottleneck(PH_k(X), PH_k(Y)) <= eps for k = 0..max_dim
EquivalenceCertificate verify_equivalence(const EquivalencePack& pack, int max_dim);

} // namespace mvss
