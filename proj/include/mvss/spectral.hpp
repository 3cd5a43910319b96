#pragma once

#include "mvss/diagram.hpp"

#include <map>
#include <tuple>

namespace mvss {

// Which bigrading index carries the filtration: P gives the standard
// (first-index) spectral sequence of the double complex, Q the transposed one.
enum class FilterBy { P, Q };

// Pages of the filtered total complex of a DoubleComplexFamily, per grid
// index, with explicit subquotient bases:
//   Z^r_m = { x in F^m Tot : dx in F^{m-r} Tot },
//   E^r_m = Z^r_m / ( Z^{r-1}_{m-1} + d Z^{r-1}_{m+r-1} ).
// Entries are addressed with the paper's (p,q) labels regardless of the
// filtration choice. Pages are computed for r = 0..r_stab and are constant
// from r_stab on.
class SpectralEngine {
  public:
    SpectralEngine(const DoubleComplexFamily& family, FilterBy fb);

    struct PageEntry {
        Mat reps;   // columns: Tot_n-coordinate representatives
        Mat denom;  // columns spanning the denominator subspace
    };

    const DoubleComplexFamily& family() const { return *fam_; }
    FilterBy filter() const { return fb_; }
    const FiltrationGrid& grid() const { return fam_->grid; }
    int maxp() const { return fam_->maxp; }
    int maxq() const { return fam_->maxq; }
    int maxn() const { return fam_->maxp + fam_->maxq; }
    int r_stab() const { return r_stab_; }

    int dim(int r, int p, int q, int t) const;
    const PageEntry& entry(int r, int p, int q, int t) const;
    // where d_r leaving (p,q) lands
    std::pair<int, int> d_target(int r, int p, int q) const;
    Mat d_matrix(int r, int p, int q, int t) const;
    // E^r_{p,q}(t) -> E^r_{p,q}(t+1), induced by the family shift maps
    Mat page_shift(int r, int p, int q, int t) const;
    Mat page_shift_composite(int r, int p, int q, int t0, int t1) const;

    PersistenceModule entry_module(int r, int p, int q) const;
    Barcode entry_barcode(int r, int p, int q) const;

    // page-class coordinates of a Tot_n(t)-coordinate vector
    std::vector<int> express(int r, int p, int q, int t, const Mat& tot_col) const;

    // total complex bookkeeping
    int tot_dim(int t, int n) const;
    const Mat& tot_d(int t, int n) const;      // Tot_n -> Tot_{n-1}
    const Mat& tot_shift(int t, int n) const;  // Tot_n(t) -> Tot_n(t+1)
    int block_offset(int t, int n, int p, int q) const;

    // homology of the total complex in degree n, with per-t bases in Tot
    // coordinates (the common convergence target of both filtrations)
    PersistenceModule total_homology(int n, std::vector<HomologyBasis>* bases = nullptr) const;

    // dim E^{r+1} = dim ker d_r - dim im d_r at every entry (consistency)
    void check_page_recursion() const;
    // sum over p+q=n of dim E^{r_stab} equals dim H_n(Tot) at every t
    void check_convergence() const;

  private:
    const DoubleComplexFamily* fam_;
    FilterBy fb_;
    int r_stab_ = 1;
    int maxm_ = 0;

    // per t, per n
    std::vector<std::vector<int>> tot_dims_;
    std::vector<std::vector<std::vector<int>>> fil_;  // filtration degree per basis element
    std::vector<std::vector<Mat>> d_;
    std::vector<std::vector<Mat>> shift_;
    std::vector<std::vector<std::map<std::pair<int, int>, int>>> offsets_;

    // pages_[r][t][n][m]
    std::vector<std::vector<std::vector<std::vector<PageEntry>>>> pages_;

    mutable std::map<std::tuple<int, int, int>, PersistenceModule> module_cache_;

    std::pair<int, int> internal(int p, int q) const;  // -> (m, n)
    Mat z_subspace(int t, int n, int m, int r) const;
    const PageEntry& entry_internal(int r, int t, int n, int m) const;
};

// A family of chain maps between the total complexes of two engines,
// shifted by eps on the grid: mats[t][n] : Tot_n^A(t) -> Tot_n^B(tmap[t]).
struct TotChainMap {
    const SpectralEngine* A = nullptr;
    const SpectralEngine* B = nullptr;
    double eps = 0;
    std::vector<int> tmap;
    std::vector<std::vector<Mat>> mats;

    // chain map, filtration preserving, commutes with the shift maps
    std::optional<std::string> verify() const;
};

// assemble a TotChainMap from per-(p,q) block maps (block-diagonal in the
// bigrading); blocks[t] maps block (p,q) of A at t to block (p,q) of B at tmap[t]
TotChainMap tot_chain_map_from_blocks(const SpectralEngine& A, const SpectralEngine& B, double eps,
                                      const std::vector<int>& tmap,
                                      const std::vector<std::map<std::pair<int, int>, Mat>>& blocks);

// Morphism of spectral sequences defined from a page: matrices per (r,p,q,t).
struct PageMorphism {
    const SpectralEngine* A = nullptr;
    const SpectralEngine* B = nullptr;
    int from_page = 0;
    double eps = 0;
    std::vector<int> tmap;
    std::map<std::tuple<int, int, int>, std::vector<Mat>> mats;  // (r,p,q) -> per t

    Mat mat(int r, int p, int q, int t) const;
};

// induced on every page r >= from_page by lift-project of a verified chain map
PageMorphism page_morphism_from_chain(const TotChainMap& f, int from_page = 0);

// given entry matrices at one page, induce upward to all stable pages;
// throws hypothesis_error if the matrices do not commute with d_r or do not
// descend to the next page
PageMorphism page_morphism_from_entries(const SpectralEngine& A, const SpectralEngine& B, int page,
                                        const std::map<std::pair<int, int>, std::vector<Mat>>& entries,
                                        double eps, std::vector<int> tmap = {});

struct CheckResult {
    bool ok = true;
    std::string failure;
    int stabilized_at = 0;
};

// Verifies that (psi, phi) is an (eps, n)-interleaving: both commute with d_r
// and the grid shifts on every page r >= n up to stabilization, and both
// composites equal the 2eps shift.
CheckResult check_page_interleaving(const SpectralEngine& A, const SpectralEngine& B, const PageMorphism& psi,
                                    const PageMorphism& phi, double eps, int n);

} // namespace mvss
