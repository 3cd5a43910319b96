#include "mvss/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace mvss {

namespace {
constexpr double INF = std::numeric_limits<double>::infinity();
bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }
} // namespace

double Bar::length() const { return infinite ? INF : death - birth; }

bool Bar::operator==(const Bar& o) const {
    if (infinite != o.infinite) return false;
    return close(birth, o.birth) && (infinite || close(death, o.death));
}

bool Bar::operator<(const Bar& o) const {
    if (!close(birth, o.birth)) return birth < o.birth;
    if (infinite != o.infinite) return !infinite;  // finite deaths first
    if (infinite) return false;
    return death < o.death;
}

void Barcode::normalize() { std::sort(bars.begin(), bars.end()); }

int Barcode::dim_at(double t) const {
    int n = 0;
    for (const Bar& b : bars)
        if (b.birth <= t + 1e-12 && (b.infinite || t < b.death - 1e-12)) ++n;
    return n;
}

Barcode make_barcode(int dim, std::vector<std::pair<double, double>> finite, std::vector<double> infinite) {
    Barcode b;
    b.dim = dim;
    for (auto [x, y] : finite) b.bars.push_back({x, y, false});
    for (double x : infinite) b.bars.push_back({x, 0, true});
    b.normalize();
    return b;
}

bool is_eps_trivial(const Barcode& b, double eps) {
    if (eps < 0) throw input_error("eps must be >= 0");
    for (const Bar& bar : b.bars)
        if (bar.infinite || bar.length() > eps + 1e-9) return false;
    return true;
}

double max_bar_length(const Barcode& b) {
    double m = 0;
    for (const Bar& bar : b.bars) m = std::max(m, bar.length());
    return m;
}

int RankFunction::operator()(int s, int t) const {
    if (s > t) throw input_error("rank function queried with s > t");
    if (s < 0 || t >= G) throw input_error("rank function index out of range");
    return rk[s][t];
}

void RankFunction::validate() const {
    for (int s = 0; s < G; ++s)
        for (int t = s; t < G; ++t) {
            if (s + 1 <= t && rk[s][t] > rk[s + 1 > t ? t : s + 1][t])
                throw invariant_error("rank function not monotone in s");
            if (t - 1 >= s && rk[s][t] > rk[s][t - 1]) throw invariant_error("rank function not monotone in t");
        }
}

Barcode barcode_from_rank(const RankFunction& rf, const FiltrationGrid& grid, int dim) {
    int G = rf.G;
    if (G != grid.size()) throw input_error("rank function grid size mismatch");
    auto r = [&](int s, int t) -> int {
        if (s < 0) return 0;
        return rf.rk[s][t];
    };
    Barcode out;
    out.dim = dim;
    for (int b = 0; b < G; ++b) {
        for (int d = b + 1; d < G; ++d) {
            int mu = r(b, d - 1) - r(b - 1, d - 1) - r(b, d) + r(b - 1, d);
            if (mu < 0) throw invariant_error("negative interval multiplicity: corrupted rank input");
            for (int k = 0; k < mu; ++k) out.bars.push_back({grid[b], grid[d], false});
        }
        int mu_inf = r(b, G - 1) - r(b - 1, G - 1);
        if (mu_inf < 0) throw invariant_error("negative interval multiplicity: corrupted rank input");
        for (int k = 0; k < mu_inf; ++k) out.bars.push_back({grid[b], 0, true});
    }
    out.normalize();
    return out;
}

RankFunction rank_of_barcode(const Barcode& b, const FiltrationGrid& grid) {
    RankFunction rf;
    rf.G = grid.size();
    rf.rk.assign(rf.G, std::vector<int>(rf.G, 0));
    for (const Bar& bar : b.bars) {
        int bi = grid.index_of(bar.birth);
        int di = bar.infinite ? rf.G : grid.index_of(bar.death);
        for (int s = bi; s < di && s < rf.G; ++s)
            for (int t = s; t < di && t < rf.G; ++t) ++rf.rk[s][t];
    }
    return rf;
}

void PersistenceModule::validate() const {
    if (int(dims.size()) != grid.size()) throw invariant_error("module dims/grid mismatch");
    if (int(maps.size()) != std::max(0, grid.size() - 1)) throw invariant_error("module map count mismatch");
    for (int t = 0; t + 1 < grid.size(); ++t)
        if (maps[t].rows() != dims[t + 1] || maps[t].cols() != dims[t])
            throw invariant_error("module map shape mismatch at t=" + std::to_string(t));
}

Mat PersistenceModule::composite(int s, int t) const {
    if (s > t) throw input_error("composite with s > t");
    Mat m = Mat::identity(dims[s], field.p);
    for (int i = s; i < t; ++i) m = maps[i] * m;
    return m;
}

RankFunction PersistenceModule::rank_function() const {
    RankFunction rf;
    rf.G = grid.size();
    rf.rk.assign(rf.G, std::vector<int>(rf.G, 0));
    for (int s = 0; s < rf.G; ++s) {
        Mat m = Mat::identity(dims[s], field.p);
        rf.rk[s][s] = dims[s];
        for (int t = s + 1; t < rf.G; ++t) {
            m = maps[t - 1] * m;
            rf.rk[s][t] = m.rank();
        }
    }
    return rf;
}

Barcode PersistenceModule::barcode(int dim_tag) const { return barcode_from_rank(rank_function(), grid, dim_tag); }

bool PersistenceModule::is_zero() const {
    for (int d : dims)
        if (d) return false;
    return true;
}

PersistenceModule module_direct_sum(const std::vector<PersistenceModule>& parts) {
    if (parts.empty()) throw input_error("direct sum of nothing");
    PersistenceModule out;
    out.grid = parts[0].grid;
    out.field = parts[0].field;
    int G = out.grid.size();
    out.dims.assign(G, 0);
    for (const auto& m : parts)
        for (int t = 0; t < G; ++t) out.dims[t] += m.dims[t];
    for (int t = 0; t + 1 < G; ++t) {
        Mat blk(out.dims[t + 1], out.dims[t], out.field.p);
        int ro = 0, co = 0;
        for (const auto& m : parts) {
            for (int i = 0; i < m.dims[t + 1]; ++i)
                for (int j = 0; j < m.dims[t]; ++j) blk.at(ro + i, co + j) = m.maps[t].at(i, j);
            ro += m.dims[t + 1];
            co += m.dims[t];
        }
        out.maps.push_back(std::move(blk));
    }
    return out;
}

std::optional<std::string> ModuleMorphism::check_natural() const {
    for (int t = 0; t + 1 < A->grid.size(); ++t) {
        int u = target_index(t), v = target_index(t + 1);
        Mat lhs = B->composite(u, v) * f[t];
        Mat rhs = f[t + 1] * A->maps[t];
        if (!(lhs == rhs)) return "naturality fails between grid indices " + std::to_string(t) + " and " + std::to_string(t + 1);
    }
    return std::nullopt;
}

PersistenceModule module_kernel(const ModuleMorphism& m, std::vector<Mat>* basis_out) {
    const PersistenceModule& A = *m.A;
    PersistenceModule out;
    out.grid = A.grid;
    out.field = A.field;
    std::vector<Mat> basis;
    for (int t = 0; t < A.grid.size(); ++t) {
        Mat k = m.f[t].nullspace();
        out.dims.push_back(k.cols());
        basis.push_back(k);
    }
    for (int t = 0; t + 1 < A.grid.size(); ++t) {
        Mat img = A.maps[t] * basis[t];
        auto sol = basis[t + 1].solve(img);
        if (!sol) throw invariant_error("kernel not preserved by structure maps (morphism not natural)");
        out.maps.push_back(*sol);
    }
    if (basis_out) *basis_out = std::move(basis);
    return out;
}

PersistenceModule module_cokernel(const ModuleMorphism& m, std::vector<Mat>* reps_out) {
    const PersistenceModule& B = *m.B;
    // pointwise: reps of B_t / im(f at indices mapping onto t)
    int G = B.grid.size();
    std::vector<Mat> images(G);
    for (int t = 0; t < G; ++t) images[t] = Mat::zero(B.dims[t], 0, B.field.p);
    for (int s = 0; s < m.A->grid.size(); ++s) {
        int t = m.target_index(s);
        images[t] = Mat::hstack(images[t], m.f[s]);
    }
    // propagate images forward: im at t includes structure-map images of im at t-1
    for (int t = 1; t < G; ++t) images[t] = Mat::hstack(images[t], B.maps[t - 1] * images[t - 1]);
    PersistenceModule out;
    out.grid = B.grid;
    out.field = B.field;
    std::vector<Mat> reps(G);
    for (int t = 0; t < G; ++t) {
        Mat id = Mat::identity(B.dims[t], B.field.p);
        std::vector<int> picked = extend_basis(images[t], id);
        reps[t] = id.cols_subset(picked);
        out.dims.push_back(int(picked.size()));
    }
    for (int t = 0; t + 1 < G; ++t) {
        Mat img = B.maps[t] * reps[t];
        Mat mt(out.dims[t + 1], out.dims[t], B.field.p);
        for (int j = 0; j < out.dims[t]; ++j) {
            std::vector<int> c = subquotient_coords(images[t + 1], reps[t + 1], img.col(j));
            for (int i = 0; i < out.dims[t + 1]; ++i) mt.at(i, j) = c[i];
        }
        out.maps.push_back(std::move(mt));
    }
    if (reps_out) *reps_out = std::move(reps);
    return out;
}

std::optional<ModuleMorphism> approximate_inverse(const PersistenceModule& A, const PersistenceModule& B,
                                                  const ModuleMorphism& f, double eps, std::string* err) {
    auto bail = [&](const std::string& msg) {
        if (err) *err = msg;
        return std::nullopt;
    };
    int G = A.grid.size();
    ModuleMorphism psi;
    psi.A = &B;
    psi.B = &A;
    psi.eps = 2 * eps;
    for (int t = 0; t < G; ++t) {
        int u = B.grid.shift_index(t, eps);
        int w = B.grid.snap_up(B.grid[u] + eps);
        psi.targets.push_back(w);
        auto x = f.f[u].solve(B.composite(t, u));
        if (!x) return bail("Sigma^eps does not factor through f at grid index " + std::to_string(t));
        psi.f.push_back(A.composite(u, w) * (*x));
    }
    if (auto nerr = psi.check_natural()) return bail("Psi " + *nerr);
    for (int t = 0; t < G; ++t) {
        int w = psi.targets[t];
        if (!(psi.f[t] * f.f[t] == A.composite(t, w)))
            return bail("Psi∘f != Sigma^{2eps} at grid index " + std::to_string(t));
        if (!(f.f[w] * psi.f[t] == B.composite(t, w)))
            return bail("f∘Psi != Sigma^{2eps} at grid index " + std::to_string(t));
    }
    return psi;
}

LRResult compose_left_right(const PersistenceModule& A, const PersistenceModule& B, const PersistenceModule& C,
                            const ModuleMorphism& f, const ModuleMorphism& g, double eps) {
    LRResult res;
    res.cert.eps = 2 * eps;
    int G = A.grid.size();
    // hypotheses: f epi with eps-trivial kernel, g mono with eps-trivial cokernel
    for (int t = 0; t < G; ++t) {
        if (f.f[t].rank() != B.dims[t]) {
            res.cert.failure = "f not surjective at grid index " + std::to_string(t);
            return res;
        }
        if (g.f[t].rank() != B.dims[t]) {
            res.cert.failure = "g not injective at grid index " + std::to_string(t);
            return res;
        }
    }
    if (!is_eps_trivial(module_kernel(f).barcode(), eps)) {
        res.cert.failure = "kernel of f is not eps-trivial";
        return res;
    }
    if (!is_eps_trivial(module_cokernel(g).barcode(), eps)) {
        res.cert.failure = "cokernel of g is not eps-trivial";
        return res;
    }
    res.Phi.A = &A;
    res.Phi.B = &C;
    res.Phi.eps = 0;
    for (int t = 0; t < G; ++t) res.Phi.f.push_back(g.f[t] * f.f[t]);

    std::string err;
    auto psi = approximate_inverse(A, C, res.Phi, eps, &err);
    if (!psi) {
        res.cert.failure = err;
        return res;
    }
    res.Psi = *psi;
    res.cert.valid = true;
    res.cert.snapped_eps = 0;
    for (int t = 0; t < G; ++t)
        res.cert.snapped_eps = std::max(res.cert.snapped_eps, A.grid[res.Psi.targets[t]] - A.grid[t]);
    return res;
}

// --- bottleneck ---------------------------------------------------------------

namespace {

// Hopcroft-Karp style augmenting matching on a boolean adjacency.
int max_matching(const std::vector<std::vector<int>>& adj, int nr) {
    int nl = int(adj.size());
    std::vector<int> ml(nl, -1), mr(nr, -1);
    int matched = 0;
    for (int u = 0; u < nl; ++u) {
        std::vector<bool> seen(nr, false);
        std::function<bool(int)> tryk = [&](int x) -> bool {
            for (int v : adj[x]) {
                if (seen[v]) continue;
                seen[v] = true;
                if (mr[v] < 0 || tryk(mr[v])) {
                    ml[x] = v;
                    mr[v] = x;
                    return true;
                }
            }
            return false;
        };
        if (tryk(u)) ++matched;
    }
    return matched;
}

double pair_cost(const Bar& a, const Bar& b) {
    if (a.infinite != b.infinite) return INF;
    if (a.infinite) return std::abs(a.birth - b.birth);
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

double diag_cost(const Bar& a) { return a.infinite ? INF : (a.death - a.birth) / 2.0; }

bool feasible(const std::vector<Bar>& x, const std::vector<Bar>& y, double lambda) {
    // match every x-bar to a y-bar or its diagonal, injectively on y
    int nx = int(x.size()), ny = int(y.size());
    // left nodes: x bars; right nodes: y bars plus one diagonal slot per x bar.
    std::vector<std::vector<int>> adj(nx + ny);
    double tol = 1e-9;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j)
            if (pair_cost(x[i], y[j]) <= lambda + tol) adj[i].push_back(j);
        if (diag_cost(x[i]) <= lambda + tol) adj[i].push_back(ny + i);
    }
    // y bars must also be matched (to x or their own diagonal): model the
    // standard reduction by adding y-side "diagonal" left nodes that can absorb
    // unmatched y bars.
    for (int j = 0; j < ny; ++j) {
        if (diag_cost(y[j]) <= lambda + tol) adj[nx + j].push_back(j);
        // y-diagonal node can also pair with any x-diagonal slot (both unused)
        for (int i = 0; i < nx; ++i) adj[nx + j].push_back(ny + i);
    }
    // perfect matching of all nx + ny left nodes into ny + nx right nodes
    return max_matching(adj, ny + nx) == nx + ny;
}

} // namespace

double bottleneck(const Barcode& b1, const Barcode& b2) {
    const std::vector<Bar>&x = b1.bars, &y = b2.bars;
    std::set<double> cand{0.0};
    for (const Bar& a : x) {
        if (!a.infinite) cand.insert(diag_cost(a));
        for (const Bar& b : y) {
            double c = pair_cost(a, b);
            if (std::isfinite(c)) cand.insert(c);
        }
    }
    for (const Bar& b : y)
        if (!b.infinite) cand.insert(diag_cost(b));
    // infinite bars must pair up
    int inf1 = 0, inf2 = 0;
    for (const Bar& a : x) inf1 += a.infinite;
    for (const Bar& b : y) inf2 += b.infinite;
    if (inf1 != inf2) return INF;
    for (double lambda : cand)
        if (feasible(x, y, lambda)) return lambda;
    return INF;
}

// --- homology bases -------------------------------------------------------------

int HomologyBasis::h_dim(int d) const {
    if (d < 0 || d >= int(reps.size())) return 0;
    return reps[d].cols();
}

std::vector<int> HomologyBasis::express(int d, const Mat& chain_col) const {
    return subquotient_coords(bnds[d], reps[d], chain_col);
}

HomologyBasis homology_basis(const std::vector<int>& chain_dims, const std::vector<Mat>& boundary, int p) {
    HomologyBasis hb;
    hb.p = p;
    hb.chain_dims = chain_dims;
    int D = int(chain_dims.size());
    hb.cycles.resize(D);
    hb.bnds.resize(D);
    hb.reps.resize(D);
    for (int d = 0; d < D; ++d) {
        if (d == 0) {
            hb.cycles[d] = Mat::identity(chain_dims[0], p);
        } else {
            hb.cycles[d] = boundary[d].nullspace();
        }
        if (d + 1 < D && chain_dims[d + 1] > 0) {
            Mat im = boundary[d + 1];
            std::vector<int> basis = im.column_basis();
            hb.bnds[d] = im.cols_subset(basis);
        } else {
            hb.bnds[d] = Mat::zero(chain_dims[d], 0, p);
        }
        std::vector<int> picked = extend_basis(hb.bnds[d], hb.cycles[d]);
        hb.reps[d] = hb.cycles[d].cols_subset(picked);
    }
    return hb;
}

Mat induced_on_homology(const HomologyBasis& src, const HomologyBasis& dst, int d, const Mat& chain_map_d) {
    int n = src.h_dim(d), m = dst.h_dim(d);
    Mat out(m, n, src.p);
    for (int j = 0; j < n; ++j) {
        Mat img = chain_map_d * src.reps[d].col(j);
        std::vector<int> c = dst.express(d, img);
        for (int i = 0; i < m; ++i) out.at(i, j) = c[i];
    }
    return out;
}

// --- chain families -------------------------------------------------------------

int ChainFamily::max_deg() const {
    int m = 0;
    for (const auto& ds : dims) m = std::max(m, int(ds.size()) - 1);
    return m;
}

void ChainFamily::validate() const {
    int G = grid.size();
    if (int(dims.size()) != G || int(boundary.size()) != G) throw invariant_error("chain family sizes mismatch");
    for (int t = 0; t < G; ++t) {
        int D = int(dims[t].size());
        for (int d = 2; d < D; ++d)
            if (dims[t][d] > 0 && !(boundary[t][d - 1] * boundary[t][d]).is_zero())
                throw invariant_error("chain family d∘d != 0");
    }
    for (int t = 0; t + 1 < G; ++t) {
        int D = int(dims[t].size());
        for (int d = 1; d < D; ++d) {
            if (dims[t][d] == 0) continue;
            Mat lhs = transition[t][d - 1] * boundary[t][d];
            Mat rhs = boundary[t + 1][d] * transition[t][d];
            if (!(lhs == rhs)) throw invariant_error("chain family transitions do not commute with boundaries");
        }
    }
}

ChainFamily family_of_complex(const FilteredComplex& cx) {
    ChainFamily fam;
    fam.grid = cx.grid;
    fam.field = cx.field;
    int G = cx.grid.size();
    int D = cx.dim() + 1;
    fam.dims.resize(G);
    fam.boundary.resize(G);
    fam.transition.assign(std::max(0, G - 1), {});
    std::vector<std::vector<std::vector<int>>> ids(G);  // ids[t][d]
    for (int t = 0; t < G; ++t) {
        fam.dims[t].resize(std::max(D, 1), 0);
        fam.boundary[t].resize(std::max(D, 1));
        ids[t].resize(std::max(D, 1));
        for (int d = 0; d < std::max(D, 1); ++d) {
            std::vector<int> rows, cols;
            Mat m = cx.boundary_matrix(d, t, rows, cols);
            fam.dims[t][d] = int(cols.size());
            fam.boundary[t][d] = m;
            ids[t][d] = cols;
        }
    }
    for (int t = 0; t + 1 < G; ++t) {
        fam.transition[t].resize(std::max(D, 1));
        for (int d = 0; d < std::max(D, 1); ++d) {
            Mat m(fam.dims[t + 1][d], fam.dims[t][d], cx.field.p);
            std::map<int, int> pos;
            for (int i = 0; i < int(ids[t + 1][d].size()); ++i) pos[ids[t + 1][d][i]] = i;
            for (int j = 0; j < int(ids[t][d].size()); ++j) m.at(pos.at(ids[t][d][j]), j) = 1;
            fam.transition[t][d] = m;
        }
    }
    return fam;
}

PersistenceModule homology_module(const ChainFamily& fam, int d, std::vector<HomologyBasis>* bases_out) {
    int G = fam.grid.size();
    std::vector<HomologyBasis> bases;
    for (int t = 0; t < G; ++t) bases.push_back(homology_basis(fam.dims[t], fam.boundary[t], fam.field.p));
    PersistenceModule out;
    out.grid = fam.grid;
    out.field = fam.field;
    for (int t = 0; t < G; ++t) out.dims.push_back(bases[t].h_dim(d));
    for (int t = 0; t + 1 < G; ++t) {
        Mat cm = (d < int(fam.transition[t].size())) ? fam.transition[t][d]
                                                     : Mat::zero(0, 0, fam.field.p);
        if (out.dims[t] == 0 || out.dims[t + 1] == 0) {
            out.maps.push_back(Mat::zero(out.dims[t + 1], out.dims[t], fam.field.p));
        } else {
            out.maps.push_back(induced_on_homology(bases[t], bases[t + 1], d, cm));
        }
    }
    if (bases_out) *bases_out = std::move(bases);
    return out;
}

std::vector<Barcode> ph_of_family(const ChainFamily& fam, int max_dim) {
    std::vector<Barcode> out;
    for (int d = 0; d <= max_dim; ++d) {
        PersistenceModule m = homology_module(fam, d);
        Barcode b = m.barcode(d);
        b.dim = d;
        out.push_back(std::move(b));
    }
    return out;
}

// --- column reduction ------------------------------------------------------------

std::vector<Barcode> compute_ph(const FilteredComplex& cx, int max_dim) {
    FieldSpec f = cx.field;
    int n = cx.size();
    // order cells by (birth, dim, id)
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Cell &ca = cx.cells[a], &cb = cx.cells[b];
        if (ca.birth != cb.birth) return ca.birth < cb.birth;
        if (ca.dim != cb.dim) return ca.dim < cb.dim;
        return ca.id < cb.id;
    });
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;

    // sparse columns: map row position -> coefficient
    std::vector<std::map<int, int>> col(n);
    for (int j = 0; j < n; ++j)
        for (auto [face, coeff] : cx.cells[order[j]].boundary) col[j][pos[face]] = coeff;

    std::vector<int> low_of(n, -1);  // pivot row -> column using it
    std::vector<int> partner(n, -1);
    for (int j = 0; j < n; ++j) {
        while (!col[j].empty()) {
            int low = col[j].rbegin()->first;
            int other = low_of[low];
            if (other < 0) break;
            int c = f.mul(col[j].rbegin()->second, f.inv(col[other].rbegin()->second));
            for (auto [r, v] : col[other]) {
                auto it = col[j].find(r);
                int nv = f.sub(it == col[j].end() ? 0 : it->second, f.mul(c, v));
                if (nv == 0) {
                    if (it != col[j].end()) col[j].erase(it);
                } else {
                    col[j][r] = nv;
                }
            }
        }
        if (!col[j].empty()) {
            int low = col[j].rbegin()->first;
            low_of[low] = j;
            partner[low] = j;
            partner[j] = low;
        }
    }

    std::vector<Barcode> out(max_dim + 1);
    for (int d = 0; d <= max_dim; ++d) out[d].dim = d;
    for (int i = 0; i < n; ++i) {
        const Cell& c = cx.cells[order[i]];
        if (c.dim > max_dim) continue;
        if (partner[i] >= 0 && partner[i] < i) continue;  // i is the killing column
        if (!col[i].empty()) continue;                    // negative column, kills a class below
        if (partner[i] < 0) {
            out[c.dim].bars.push_back({cx.grid[c.birth], 0, true});
        } else {
            int death = cx.cells[order[partner[i]]].birth;
            if (death > c.birth) out[c.dim].bars.push_back({cx.grid[c.birth], cx.grid[death], false});
        }
    }
    for (auto& b : out) b.normalize();
    return out;
}

int homology_dim_at(const FilteredComplex& cx, int deg, int t) {
    Mat dk = cx.boundary_matrix(deg, t);
    Mat dk1 = cx.boundary_matrix(deg + 1, t);
    return dk.cols() - dk.rank() - dk1.rank();
}

std::vector<int> reduced_homology_dims(const FilteredComplex& cx, int t, int max_deg) {
    std::vector<int> out(max_deg + 1, 0);
    bool nonempty = !cx.cells_at(0, t).empty();
    for (int d = 0; d <= max_deg; ++d) {
        int h = homology_dim_at(cx, d, t);
        if (d == 0 && nonempty) h -= 1;
        out[d] = h;
    }
    return out;
}

} // namespace mvss
