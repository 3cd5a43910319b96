#pragma once

#include "mvss/complex.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mvss {

// Right-open interval [birth, death), death possibly +inf.
struct Bar {
    double birth = 0;
    double death = 0;
    bool infinite = false;

    double length() const;
    bool operator==(const Bar& o) const;
    bool operator<(const Bar& o) const;
};

struct Barcode {
    int dim = 0;
    std::vector<Bar> bars;  // kept sorted by (birth, death)

    void normalize();
    int dim_at(double t) const;
    bool operator==(const Barcode& o) const { return dim == o.dim && bars == o.bars; }
};

Barcode make_barcode(int dim, std::vector<std::pair<double, double>> finite,
                     std::vector<double> infinite = {});

// every bar has length <= eps (infinite bars never qualify)
bool is_eps_trivial(const Barcode& b, double eps);
double max_bar_length(const Barcode& b);  // 0 for empty, inf if any infinite bar

// --- rank functions --------------------------------------------------------

// rank(s,t) of the composite M_s -> M_t for s <= t, on a grid of size G.
struct RankFunction {
    int G = 0;
    std::vector<std::vector<int>> rk;  // rk[s][t], t >= s

    int operator()(int s, int t) const;
    void validate() const;  // monotonicity
};

// Interval multiplicities by inclusion-exclusion; throws invariant_error on a
// negative multiplicity (non-monotone input).
Barcode barcode_from_rank(const RankFunction& rf, const FiltrationGrid& grid, int dim);
RankFunction rank_of_barcode(const Barcode& b, const FiltrationGrid& grid);

// --- persistence modules ----------------------------------------------------

// Pointwise finite-dimensional module on a grid: dims per index and a matrix
// per consecutive pair.
struct PersistenceModule {
    FiltrationGrid grid;
    FieldSpec field;
    std::vector<int> dims;
    std::vector<Mat> maps;  // maps[t] : M_t -> M_{t+1}

    void validate() const;
    Mat composite(int s, int t) const;  // M_s -> M_t, s <= t
    RankFunction rank_function() const;
    Barcode barcode(int dim_tag = 0) const;
    bool is_zero() const;
};

PersistenceModule module_direct_sum(const std::vector<PersistenceModule>& parts);

// A morphism A -> B[shift]: matrices f[t] : A_t -> B_{target(t)}. By default
// target(t) snaps grid[t]+eps up to the grid; an explicit target table
// overrides that (used when a composite of snapped shifts is realized).
struct ModuleMorphism {
    const PersistenceModule* A = nullptr;
    const PersistenceModule* B = nullptr;
    double eps = 0;
    std::vector<Mat> f;       // per source grid index
    std::vector<int> targets; // optional explicit target indices

    int target_index(int t) const {
        return targets.empty() ? A->grid.shift_index(t, eps) : targets.at(t);
    }
    // naturality: B(t->t') f_t = f_{t'} A(t->t') for consecutive t
    std::optional<std::string> check_natural() const;
};

PersistenceModule module_kernel(const ModuleMorphism& m, std::vector<Mat>* basis = nullptr);
PersistenceModule module_cokernel(const ModuleMorphism& m, std::vector<Mat>* reps = nullptr);

// --- interleavings ----------------------------------------------------------

struct InterleavingCertificate {
    bool valid = false;
    double eps = 0;            // certified shift (as requested)
    double snapped_eps = 0;    // largest grid shift actually realized
    std::string failure;       // empty when valid
};

// Lem. on left/right interleavings: f : A ->> B with eps-trivial kernel,
// g : B -> C injective with eps-trivial cokernel. Returns Phi = g∘f (0-shift)
// and Psi : C -> A[2eps] built by linear solves, with the verified identities
// Psi∘Phi = Sigma^{2eps}_A and Phi[2eps]∘Psi = Sigma^{2eps}_C.
struct LRResult {
    ModuleMorphism Phi;
    ModuleMorphism Psi;
    InterleavingCertificate cert;
};
LRResult compose_left_right(const PersistenceModule& A, const PersistenceModule& B,
                            const PersistenceModule& C, const ModuleMorphism& f,
                            const ModuleMorphism& g, double eps);

// Given f : A -> B at shift 0, build Psi : B -> A[2eps] by linear solves
// (Psi = Sigma^eps_A ∘ f^{-1} ∘ Sigma^eps_B) and verify naturality and both
// triangle identities. Returns nullopt with a diagnostic if a solve or a
// verification fails (the interleaving hypotheses do not hold at eps).
std::optional<ModuleMorphism> approximate_inverse(const PersistenceModule& A, const PersistenceModule& B,
                                                  const ModuleMorphism& f, double eps, std::string* err = nullptr);

// exact bottleneck distance between barcodes (infinity-norm matching with the
// diagonal allowed)
double bottleneck(const Barcode& b1, const Barcode& b2);

// --- homology of chain complexes ---------------------------------------------

// Cycle/boundary/representative bases of a chain complex at one snapshot.
// boundary[d] : C_d -> C_{d-1}.
struct HomologyBasis {
    int p = 2;
    std::vector<int> chain_dims;          // per degree
    std::vector<Mat> cycles;              // per degree: basis of ker ∂_d (columns)
    std::vector<Mat> bnds;                // per degree: basis of im ∂_{d+1}
    std::vector<Mat> reps;                // per degree: homology representatives
    int h_dim(int d) const;
    // homology coordinates of a cycle (throws if not a cycle of the span)
    std::vector<int> express(int d, const Mat& chain_col) const;
};

HomologyBasis homology_basis(const std::vector<int>& chain_dims, const std::vector<Mat>& boundary, int p);

// Matrix of the map induced on degree-d homology by a chain map given in
// chain coordinates (chain_map[d] : C_d(src) -> C_d(dst)).
Mat induced_on_homology(const HomologyBasis& src, const HomologyBasis& dst, int d, const Mat& chain_map_d);

// --- regularly filtered chain complexes -------------------------------------

// One chain complex per grid index plus transition chain maps; the standard
// reduction does not apply here, so persistence is read off rank functions.
struct ChainFamily {
    FiltrationGrid grid;
    FieldSpec field;
    // per t: dims per degree and boundary matrices per degree
    std::vector<std::vector<int>> dims;      // dims[t][d]
    std::vector<std::vector<Mat>> boundary;  // boundary[t][d] : C_d -> C_{d-1}
    // transition[t][d] : C_d(t) -> C_d(t+1)
    std::vector<std::vector<Mat>> transition;

    int max_deg() const;
    void validate() const;
};

ChainFamily family_of_complex(const FilteredComplex& cx);

// Homology of a chain family in degree d, as a persistence module (with the
// per-t bases returned when requested).
PersistenceModule homology_module(const ChainFamily& fam, int d,
                                  std::vector<HomologyBasis>* bases = nullptr);

std::vector<Barcode> ph_of_family(const ChainFamily& fam, int max_dim);

// --- persistent homology of filtered complexes -------------------------------

// Standard column reduction over F_p.
std::vector<Barcode> compute_ph(const FilteredComplex& cx, int max_dim);

// Pointwise homology dimension of a complex at grid index t (dense ranks).
int homology_dim_at(const FilteredComplex& cx, int deg, int t);

// reduced homology ranks at one grid index (H~_0 = H_0 - 1 when nonempty)
std::vector<int> reduced_homology_dims(const FilteredComplex& cx, int t, int max_deg);

} // namespace mvss
