#include "mvss/spectral.hpp"

#include <algorithm>

namespace mvss {

std::pair<int, int> SpectralEngine::internal(int p, int q) const {
    int m = (fb_ == FilterBy::P) ? p : q;
    return {m, p + q};
}

SpectralEngine::SpectralEngine(const DoubleComplexFamily& family, FilterBy fb) : fam_(&family), fb_(fb) {
    int G = fam_->grid.size();
    int N = maxn();
    maxm_ = (fb_ == FilterBy::P) ? fam_->maxp : fam_->maxq;
    r_stab_ = maxm_ + 1;
    int p_field = fam_->field.p;

    tot_dims_.assign(G, std::vector<int>(N + 1, 0));
    fil_.assign(G, std::vector<std::vector<int>>(N + 1));
    d_.assign(G, std::vector<Mat>(N + 1));
    offsets_.assign(G, std::vector<std::map<std::pair<int, int>, int>>(N + 1));
    shift_.assign(std::max(0, G - 1), std::vector<Mat>(N + 1));

    for (int t = 0; t < G; ++t) {
        for (int n = 0; n <= N; ++n) {
            int off = 0;
            for (int p = 0; p <= fam_->maxp; ++p) {
                int q = n - p;
                if (q < 0 || q > fam_->maxq) continue;
                offsets_[t][n][{p, q}] = off;
                int sz = fam_->dim(t, p, q);
                int m = (fb_ == FilterBy::P) ? p : q;
                for (int k = 0; k < sz; ++k) fil_[t][n].push_back(m);
                off += sz;
            }
            tot_dims_[t][n] = off;
        }
        for (int n = 0; n <= N; ++n) {
            Mat d(n > 0 ? tot_dims_[t][n - 1] : 0, tot_dims_[t][n], p_field);
            if (n > 0) {
                for (int p = 0; p <= fam_->maxp; ++p) {
                    int q = n - p;
                    if (q < 0 || q > fam_->maxq) continue;
                    int co = offsets_[t][n].at({p, q});
                    int sz = fam_->dim(t, p, q);
                    if (sz == 0) continue;
                    if (q > 0) {
                        const Mat& dv = fam_->dv_at(t, p, q);
                        int ro = offsets_[t][n - 1].at({p, q - 1});
                        for (int i = 0; i < dv.rows(); ++i)
                            for (int j = 0; j < sz; ++j)
                                if (dv.at(i, j)) d.at(ro + i, co + j) = dv.at(i, j);
                    }
                    if (p > 0) {
                        const Mat& dh = fam_->dh_at(t, p, q);
                        int ro = offsets_[t][n - 1].at({p - 1, q});
                        for (int i = 0; i < dh.rows(); ++i)
                            for (int j = 0; j < sz; ++j)
                                if (dh.at(i, j)) d.at(ro + i, co + j) = fam_->field.add(d.at(ro + i, co + j), dh.at(i, j));
                    }
                }
            }
            d_[t][n] = std::move(d);
        }
    }
    for (int t = 0; t + 1 < G; ++t)
        for (int n = 0; n <= N; ++n) {
            Mat s(tot_dims_[t + 1][n], tot_dims_[t][n], p_field);
            for (int p = 0; p <= fam_->maxp; ++p) {
                int q = n - p;
                if (q < 0 || q > fam_->maxq) continue;
                const Mat& blk = fam_->shift[t][p][q];
                int ro = offsets_[t + 1][n].at({p, q});
                int co = offsets_[t][n].at({p, q});
                for (int i = 0; i < blk.rows(); ++i)
                    for (int j = 0; j < blk.cols(); ++j)
                        if (blk.at(i, j)) s.at(ro + i, co + j) = blk.at(i, j);
            }
            shift_[t][n] = std::move(s);
        }

    // pages
    pages_.assign(r_stab_ + 1, std::vector<std::vector<std::vector<PageEntry>>>(
                                   G, std::vector<std::vector<PageEntry>>(N + 1, std::vector<PageEntry>(maxm_ + 1))));
    for (int r = 0; r <= r_stab_; ++r)
        for (int t = 0; t < G; ++t)
            for (int n = 0; n <= N; ++n)
                for (int m = 0; m <= maxm_; ++m) {
                    Mat Z = z_subspace(t, n, m, r);
                    Mat den1 = z_subspace(t, n, m - 1, r - 1);
                    Mat den2;
                    {
                        Mat Zup = z_subspace(t, n + 1, m + r - 1, r - 1);
                        den2 = (n + 1 <= N) ? d_[t][n + 1] * Zup : Mat::zero(tot_dims_[t][n], 0, p_field);
                    }
                    Mat denom = Mat::hstack(den1, den2);
                    std::vector<int> picked = extend_basis(denom, Z);
                    PageEntry& e = pages_[r][t][n][m];
                    e.reps = Z.cols_subset(picked);
                    e.denom = std::move(denom);
                }
}

Mat SpectralEngine::z_subspace(int t, int n, int m, int r) const {
    int p_field = fam_->field.p;
    if (n < 0 || n > maxn() || m < 0) return Mat::zero(std::max(0, (n >= 0 && n <= maxn()) ? tot_dims_[t][n] : 0), 0, p_field);
    int full = tot_dims_[t][n];
    if (m > maxm_) m = maxm_;
    // columns with filtration <= m
    std::vector<int> cols;
    for (int j = 0; j < full; ++j)
        if (fil_[t][n][j] <= m) cols.push_back(j);
    if (r <= 0) {
        // whole F^m
        Mat out(full, int(cols.size()), p_field);
        for (int k = 0; k < int(cols.size()); ++k) out.at(cols[k], k) = 1;
        return out;
    }
    // constraint rows: target filtration > m - r
    Mat dsub = (n > 0) ? d_[t][n].cols_subset(cols) : Mat::zero(0, int(cols.size()), p_field);
    std::vector<int> bad_rows;
    if (n > 0)
        for (int i = 0; i < tot_dims_[t][n - 1]; ++i)
            if (fil_[t][n - 1][i] > m - r) bad_rows.push_back(i);
    Mat constr = dsub.rows_subset(bad_rows);
    Mat ker = constr.nullspace();  // in cols-coordinates
    Mat out(full, ker.cols(), p_field);
    for (int k = 0; k < ker.cols(); ++k)
        for (int j = 0; j < int(cols.size()); ++j)
            if (ker.at(j, k)) out.at(cols[j], k) = ker.at(j, k);
    return out;
}

int SpectralEngine::dim(int r, int p, int q, int t) const {
    if (p < 0 || q < 0 || p > maxp() || q > maxq()) return 0;
    return entry(r, p, q, t).reps.cols();
}

const SpectralEngine::PageEntry& SpectralEngine::entry(int r, int p, int q, int t) const {
    auto [m, n] = internal(p, q);
    return entry_internal(r, t, n, m);
}

const SpectralEngine::PageEntry& SpectralEngine::entry_internal(int r, int t, int n, int m) const {
    static const PageEntry empty{};
    if (r > r_stab_) r = r_stab_;
    if (r < 0 || n < 0 || n > maxn() || m < 0 || m > maxm_) return empty;
    return pages_[r][t][n][m];
}

std::pair<int, int> SpectralEngine::d_target(int r, int p, int q) const {
    if (fb_ == FilterBy::P) return {p - r, q + r - 1};
    return {p + r - 1, q - r};
}

Mat SpectralEngine::d_matrix(int r, int p, int q, int t) const {
    auto [m, n] = internal(p, q);
    auto [tp, tq] = d_target(r, p, q);
    int src = dim(r, p, q, t);
    int dst = dim(r, tp, tq, t);
    Mat out(dst, src, fam_->field.p);
    if (src == 0 || dst == 0) return out;
    const PageEntry& e = entry(r, p, q, t);
    for (int j = 0; j < src; ++j) {
        Mat img = d_[t][n] * e.reps.col(j);
        std::vector<int> c = express(r, tp, tq, t, img);
        for (int i = 0; i < dst; ++i) out.at(i, j) = c[i];
    }
    return out;
}

Mat SpectralEngine::page_shift(int r, int p, int q, int t) const {
    auto [m, n] = internal(p, q);
    (void)m;
    int src = dim(r, p, q, t);
    int dst = dim(r, p, q, t + 1);
    Mat out(dst, src, fam_->field.p);
    if (src == 0) return out;
    const PageEntry& e = entry(r, p, q, t);
    for (int j = 0; j < src; ++j) {
        Mat img = shift_[t][n] * e.reps.col(j);
        std::vector<int> c = express(r, p, q, t + 1, img);
        for (int i = 0; i < dst; ++i) out.at(i, j) = c[i];
    }
    return out;
}

Mat SpectralEngine::page_shift_composite(int r, int p, int q, int t0, int t1) const {
    Mat m = Mat::identity(dim(r, p, q, t0), fam_->field.p);
    for (int t = t0; t < t1; ++t) m = page_shift(r, p, q, t) * m;
    return m;
}

PersistenceModule SpectralEngine::entry_module(int r, int p, int q) const {
    auto key = std::make_tuple(std::min(r, r_stab_), p, q);
    auto it = module_cache_.find(key);
    if (it != module_cache_.end()) return it->second;
    PersistenceModule mod;
    mod.grid = fam_->grid;
    mod.field = fam_->field;
    for (int t = 0; t < fam_->grid.size(); ++t) mod.dims.push_back(dim(r, p, q, t));
    for (int t = 0; t + 1 < fam_->grid.size(); ++t) mod.maps.push_back(page_shift(r, p, q, t));
    mod.validate();
    module_cache_[key] = mod;
    return mod;
}

Barcode SpectralEngine::entry_barcode(int r, int p, int q) const { return entry_module(r, p, q).barcode(); }

std::vector<int> SpectralEngine::express(int r, int p, int q, int t, const Mat& tot_col) const {
    const PageEntry& e = entry(r, p, q, t);
    return subquotient_coords(e.denom, e.reps, tot_col);
}

int SpectralEngine::tot_dim(int t, int n) const {
    if (n < 0 || n > maxn()) return 0;
    return tot_dims_[t][n];
}
const Mat& SpectralEngine::tot_d(int t, int n) const { return d_[t][n]; }
const Mat& SpectralEngine::tot_shift(int t, int n) const { return shift_[t][n]; }

int SpectralEngine::block_offset(int t, int n, int p, int q) const {
    auto it = offsets_[t][n].find({p, q});
    if (it == offsets_[t][n].end()) throw invariant_error("block_offset: no such block");
    return it->second;
}

PersistenceModule SpectralEngine::total_homology(int n, std::vector<HomologyBasis>* bases_out) const {
    int G = fam_->grid.size();
    std::vector<HomologyBasis> bases;
    for (int t = 0; t < G; ++t) {
        std::vector<int> cd;
        std::vector<Mat> bd;
        for (int k = 0; k <= maxn(); ++k) {
            cd.push_back(tot_dims_[t][k]);
            bd.push_back(d_[t][k]);
        }
        bases.push_back(homology_basis(cd, bd, fam_->field.p));
    }
    PersistenceModule mod;
    mod.grid = fam_->grid;
    mod.field = fam_->field;
    for (int t = 0; t < G; ++t) mod.dims.push_back(bases[t].h_dim(n));
    for (int t = 0; t + 1 < G; ++t)
        mod.maps.push_back(induced_on_homology(bases[t], bases[t + 1], n, shift_[t][n]));
    if (bases_out) *bases_out = std::move(bases);
    return mod;
}

void SpectralEngine::check_page_recursion() const {
    for (int r = 1; r < r_stab_; ++r)
        for (int t = 0; t < fam_->grid.size(); ++t)
            for (int p = 0; p <= maxp(); ++p)
                for (int q = 0; q <= maxq(); ++q) {
                    Mat dout = d_matrix(r, p, q, t);
                    auto [sp, sq] = (fb_ == FilterBy::P) ? std::pair<int, int>{p + r, q - r + 1}
                                                         : std::pair<int, int>{p - r + 1, q + r};
                    Mat din = d_matrix(r, sp, sq, t);
                    int expect = dim(r, p, q, t) - dout.rank() - din.rank();
                    if (expect != dim(r + 1, p, q, t))
                        throw invariant_error("page recursion mismatch at r=" + std::to_string(r));
                }
}

void SpectralEngine::check_convergence() const {
    for (int t = 0; t < fam_->grid.size(); ++t) {
        std::vector<HomologyBasis> bases;
        for (int n = 0; n <= maxn(); ++n) {
            int sum = 0;
            for (int p = 0; p <= maxp(); ++p) {
                int q = n - p;
                if (q < 0 || q > maxq()) continue;
                sum += dim(r_stab_, p, q, t);
            }
            std::vector<int> cd;
            std::vector<Mat> bd;
            for (int k = 0; k <= maxn(); ++k) {
                cd.push_back(tot_dims_[t][k]);
                bd.push_back(d_[t][k]);
            }
            HomologyBasis hb = homology_basis(cd, bd, fam_->field.p);
            if (sum != hb.h_dim(n))
                throw invariant_error("E^infinity dimensions do not sum to the total homology");
        }
        (void)bases;
    }
}

// --- morphisms -----------------------------------------------------------------

std::optional<std::string> TotChainMap::verify() const {
    int G = A->grid().size();
    for (int t = 0; t < G; ++t) {
        int u = tmap[t];
        for (int n = 0; n <= A->maxn(); ++n) {
            if (mats[t][n].cols() != A->tot_dim(t, n) || mats[t][n].rows() != B->tot_dim(u, n))
                return "chain map shape mismatch at t=" + std::to_string(t) + ", n=" + std::to_string(n);
            if (n > 0) {
                Mat lhs = mats[t][n - 1] * A->tot_d(t, n);
                Mat rhs = (n <= B->maxn()) ? B->tot_d(u, n) * mats[t][n]
                                           : Mat::zero(B->tot_dim(u, n - 1), A->tot_dim(t, n), A->family().field.p);
                if (!(lhs == rhs)) return "not a chain map at t=" + std::to_string(t) + ", n=" + std::to_string(n);
            }
        }
    }
    for (int t = 0; t + 1 < G; ++t) {
        int u0 = tmap[t], u1 = tmap[t + 1];
        for (int n = 0; n <= std::min(A->maxn(), B->maxn()); ++n) {
            Mat up = Mat::identity(B->tot_dim(u0, n), B->family().field.p);
            for (int v = u0; v < u1; ++v) up = B->tot_shift(v, n) * up;
            Mat lhs = up * mats[t][n];
            Mat rhs = mats[t + 1][n] * A->tot_shift(t, n);
            if (!(lhs == rhs)) return "chain map not natural in the grid at t=" + std::to_string(t);
        }
    }
    return std::nullopt;
}

TotChainMap tot_chain_map_from_blocks(const SpectralEngine& A, const SpectralEngine& B, double eps,
                                      const std::vector<int>& tmap,
                                      const std::vector<std::map<std::pair<int, int>, Mat>>& blocks) {
    TotChainMap f;
    f.A = &A;
    f.B = &B;
    f.eps = eps;
    f.tmap = tmap.empty() ? [&] {
        std::vector<int> tm;
        for (int t = 0; t < A.grid().size(); ++t) tm.push_back(A.grid().shift_index(t, eps));
        return tm;
    }()
                          : tmap;
    int G = A.grid().size();
    f.mats.resize(G);
    for (int t = 0; t < G; ++t) {
        int u = f.tmap[t];
        for (int n = 0; n <= A.maxn(); ++n) {
            Mat m(B.tot_dim(u, n), A.tot_dim(t, n), A.family().field.p);
            for (int p = 0; p <= std::max(A.maxp(), B.maxp()); ++p) {
                int q = n - p;
                if (q < 0) continue;
                auto it = blocks[t].find({p, q});
                if (it == blocks[t].end()) continue;
                const Mat& blk = it->second;
                if (blk.cols() == 0 || blk.rows() == 0) continue;
                int co = A.block_offset(t, n, p, q);
                int ro = B.block_offset(u, n, p, q);
                for (int i = 0; i < blk.rows(); ++i)
                    for (int j = 0; j < blk.cols(); ++j)
                        if (blk.at(i, j)) m.at(ro + i, co + j) = blk.at(i, j);
            }
            f.mats[t].push_back(std::move(m));
        }
    }
    if (auto err = f.verify()) throw hypothesis_error("tot_chain_map_from_blocks: " + *err);
    return f;
}

Mat PageMorphism::mat(int r, int p, int q, int t) const {
    auto it = mats.find({std::min(r, std::max(A->r_stab(), B->r_stab())), p, q});
    if (it == mats.end()) return Mat::zero(B->dim(r, p, q, tmap[t]), A->dim(r, p, q, t), A->family().field.p);
    return it->second[t];
}

PageMorphism page_morphism_from_chain(const TotChainMap& f, int from_page) {
    PageMorphism pm;
    pm.A = f.A;
    pm.B = f.B;
    pm.from_page = from_page;
    pm.eps = f.eps;
    pm.tmap = f.tmap;
    const SpectralEngine &A = *f.A, &B = *f.B;
    int rmax = std::max(A.r_stab(), B.r_stab());
    int G = A.grid().size();
    for (int r = from_page; r <= rmax; ++r)
        for (int p = 0; p <= std::max(A.maxp(), B.maxp()); ++p)
            for (int q = 0; q <= std::max(A.maxq(), B.maxq()); ++q) {
                std::vector<Mat> per_t;
                for (int t = 0; t < G; ++t) {
                    int u = f.tmap[t];
                    int n = p + q;
                    int srcd = A.dim(r, p, q, t), dstd = B.dim(r, p, q, u);
                    Mat m(dstd, srcd, A.family().field.p);
                    if (srcd > 0 && n <= A.maxn()) {
                        const auto& e = A.entry(r, p, q, t);
                        for (int j = 0; j < srcd; ++j) {
                            Mat img = f.mats[t][n] * e.reps.col(j);
                            std::vector<int> c = B.express(r, p, q, u, img);
                            for (int i = 0; i < dstd; ++i) m.at(i, j) = c[i];
                        }
                    }
                    per_t.push_back(std::move(m));
                }
                pm.mats[{r, p, q}] = std::move(per_t);
            }
    return pm;
}

PageMorphism page_morphism_from_entries(const SpectralEngine& A, const SpectralEngine& B, int page,
                                        const std::map<std::pair<int, int>, std::vector<Mat>>& entries,
                                        double eps, std::vector<int> tmap) {
    PageMorphism pm;
    pm.A = &A;
    pm.B = &B;
    pm.from_page = page;
    pm.eps = eps;
    if (tmap.empty())
        for (int t = 0; t < A.grid().size(); ++t) tmap.push_back(A.grid().shift_index(t, eps));
    pm.tmap = tmap;
    int G = A.grid().size();
    int rmax = std::max(A.r_stab(), B.r_stab());
    int P = std::max(A.maxp(), B.maxp()), Q = std::max(A.maxq(), B.maxq());
    auto get_entry = [&](int p, int q, int t) -> Mat {
        auto it = entries.find({p, q});
        if (it != entries.end()) return it->second[t];
        return Mat::zero(B.dim(page, p, q, tmap[t]), A.dim(page, p, q, t), A.family().field.p);
    };
    for (int p = 0; p <= P; ++p)
        for (int q = 0; q <= Q; ++q) {
            std::vector<Mat> per_t;
            for (int t = 0; t < G; ++t) per_t.push_back(get_entry(p, q, t));
            pm.mats[{page, p, q}] = std::move(per_t);
        }
    // induce upward
    for (int r = page; r < rmax; ++r)
        for (int p = 0; p <= P; ++p)
            for (int q = 0; q <= Q; ++q) {
                std::vector<Mat> per_t;
                for (int t = 0; t < G; ++t) {
                    int u = tmap[t];
                    int srcd = A.dim(r + 1, p, q, t), dstd = B.dim(r + 1, p, q, u);
                    Mat m(dstd, srcd, A.family().field.p);
                    if (srcd > 0) {
                        // page-(r+1) reps of A expressed at page r
                        const auto& e1 = A.entry(r + 1, p, q, t);
                        // incoming d_r of B at this entry
                        auto [sp, sq] = (B.filter() == FilterBy::P) ? std::pair<int, int>{p + r, q - r + 1}
                                                                    : std::pair<int, int>{p - r + 1, q + r};
                        Mat din = B.d_matrix(r, sp, sq, u);
                        const auto& eB1 = B.entry(r + 1, p, q, u);
                        // page-r coordinates of B's page-(r+1) reps
                        Mat iB(B.dim(r, p, q, u), B.dim(r + 1, p, q, u), A.family().field.p);
                        for (int j = 0; j < iB.cols(); ++j) {
                            std::vector<int> c = B.express(r, p, q, u, eB1.reps.col(j));
                            for (int i = 0; i < iB.rows(); ++i) iB.at(i, j) = c[i];
                        }
                        for (int j = 0; j < srcd; ++j) {
                            std::vector<int> vr = A.express(r, p, q, t, e1.reps.col(j));
                            Mat v(int(vr.size()), 1, A.family().field.p);
                            for (int i = 0; i < int(vr.size()); ++i) v.at(i, 0) = vr[i];
                            Mat w = pm.mats.at({r, p, q})[t] * v;
                            auto sol = Mat::hstack(iB, din).solve(w);
                            if (!sol)
                                throw hypothesis_error("page morphism does not descend to page " +
                                                       std::to_string(r + 1));
                            for (int i = 0; i < dstd; ++i) m.at(i, j) = sol->at(i, 0);
                        }
                    }
                    per_t.push_back(std::move(m));
                }
                pm.mats[{r + 1, p, q}] = std::move(per_t);
            }
    return pm;
}

CheckResult check_page_interleaving(const SpectralEngine& A, const SpectralEngine& B, const PageMorphism& psi,
                                    const PageMorphism& phi, double eps, int n) {
    CheckResult res;
    int rmax = std::max(A.r_stab(), B.r_stab());
    res.stabilized_at = rmax;
    int G = A.grid().size();
    int P = std::max(A.maxp(), B.maxp()), Q = std::max(A.maxq(), B.maxq());
    auto fail = [&](const std::string& msg) {
        res.ok = false;
        if (res.failure.empty()) res.failure = msg;
    };
    try {
        for (int r = n; r <= rmax && res.ok; ++r)
            for (int p = 0; p <= P && res.ok; ++p)
                for (int q = 0; q <= Q && res.ok; ++q) {
                    for (int t = 0; t < G; ++t) {
                        std::string at = " at (r,p,q,t)=(" + std::to_string(r) + "," + std::to_string(p) + "," +
                                         std::to_string(q) + "," + std::to_string(t) + ")";
                        Mat f = psi.mat(r, p, q, t);
                        Mat g = phi.mat(r, p, q, t);
                        // shapes
                        if (f.cols() != A.dim(r, p, q, t) || f.rows() != B.dim(r, p, q, psi.tmap[t])) {
                            fail("psi shape mismatch" + at);
                            break;
                        }
                        if (g.cols() != B.dim(r, p, q, t) || g.rows() != A.dim(r, p, q, phi.tmap[t])) {
                            fail("phi shape mismatch" + at);
                            break;
                        }
                        // naturality in the grid
                        if (t + 1 < G) {
                            Mat lhs = B.page_shift_composite(r, p, q, psi.tmap[t], psi.tmap[t + 1]) * f;
                            Mat rhs = psi.mat(r, p, q, t + 1) * A.page_shift(r, p, q, t);
                            if (!(lhs == rhs)) {
                                fail("psi does not commute with the grid shifts" + at);
                                break;
                            }
                            Mat lhs2 = A.page_shift_composite(r, p, q, phi.tmap[t], phi.tmap[t + 1]) * g;
                            Mat rhs2 = phi.mat(r, p, q, t + 1) * B.page_shift(r, p, q, t);
                            if (!(lhs2 == rhs2)) {
                                fail("phi does not commute with the grid shifts" + at);
                                break;
                            }
                        }
                        // d_r commutation
                        auto [tp, tq] = A.d_target(r, p, q);
                        if (tp >= 0 && tq >= 0) {
                            Mat lhs = psi.mat(r, tp, tq, t) * A.d_matrix(r, p, q, t);
                            Mat rhs = B.d_matrix(r, p, q, psi.tmap[t]) * f;
                            if (!(lhs == rhs)) {
                                fail("psi does not commute with d_r" + at);
                                break;
                            }
                            Mat lhs2 = phi.mat(r, tp, tq, t) * B.d_matrix(r, p, q, t);
                            Mat rhs2 = A.d_matrix(r, p, q, phi.tmap[t]) * g;
                            if (!(lhs2 == rhs2)) {
                                fail("phi does not commute with d_r" + at);
                                break;
                            }
                        }
                        // triangles
                        int u = psi.tmap[t], w = phi.tmap[u];
                        Mat tri = phi.mat(r, p, q, u) * f;
                        Mat sig = A.page_shift_composite(r, p, q, t, w);
                        if (!(tri == sig)) {
                            fail("phi[eps]∘psi != Sigma^{2eps} A" + at);
                            break;
                        }
                        int u2 = phi.tmap[t], w2 = psi.tmap[u2];
                        Mat tri2 = psi.mat(r, p, q, u2) * g;
                        Mat sig2 = B.page_shift_composite(r, p, q, t, w2);
                        if (!(tri2 == sig2)) {
                            fail("psi[eps]∘phi != Sigma^{2eps} B" + at);
                            break;
                        }
                    }
                }
    } catch (const std::exception& e) {
        fail(std::string("structural failure: ") + e.what());
    }
    (void)eps;
    return res;
}

} // namespace mvss
