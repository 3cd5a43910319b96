#include "mvss/carrier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace mvss {

std::vector<int> Carrier::eval(int cell, int t) const { return eval_at_index(cell, t, target_index(t)); }

std::vector<int> Carrier::eval_at_index(int cell, int t, int u) const {
    const std::vector<int>& base = time_varying() ? assign_t[t][cell] : assign[cell];
    std::vector<int> out;
    for (int id : base)
        if (dst->cells[id].birth <= u) out.push_back(id);
    return out;
}

Carrier closure_carrier(const FilteredComplex& X, const FilteredComplex& Y, double eps,
                        const std::vector<int>& cell_map) {
    Carrier c;
    c.src = &X;
    c.dst = &Y;
    c.eps = eps;
    for (int i = 0; i < X.size(); ++i) c.assign.push_back(Y.cell_closure(cell_map[i]));
    return c;
}

AcyclicityReport check_acyclic(const Carrier& F, int max_deg) {
    AcyclicityReport rep;
    int G = F.src->grid.size();
    for (int cell = 0; cell < F.src->size(); ++cell) {
        int birth = F.src->cells[cell].birth;
        if (F.full_simplex) {
            // the assignment is spanned by a vertex set; nonempty full
            // simplices are acyclic in every degree present
            for (int t = birth; t < G; ++t) {
                std::vector<int> cur = F.eval(cell, t);
                bool has_vertex = false;
                int u = F.target_index(t);
                for (int v : F.vertex_sets[cell])
                    if (F.dst->cells[v].birth <= u) has_vertex = true;
                if (cur.empty() || !has_vertex) {
                    rep = {false, cell, t, -1, "empty assignment"};
                    return rep;
                }
                // all pairwise edges must be present for the span to be a full simplex
                std::vector<int> verts;
                for (int id : cur)
                    if (F.dst->cells[id].dim == 0) verts.push_back(id);
                std::set<std::pair<int, int>> edges;
                for (int id : cur)
                    if (F.dst->cells[id].dim == 1) {
                        auto vs = F.dst->closure_vertices(id);
                        edges.insert({vs[0], vs[1]});
                    }
                for (size_t a = 0; a < verts.size(); ++a)
                    for (size_t b = a + 1; b < verts.size(); ++b)
                        if (!edges.count({std::min(verts[a], verts[b]), std::max(verts[a], verts[b])})) {
                            rep = {false, cell, t, 1, "vertex span is not a full simplex"};
                            return rep;
                        }
            }
            continue;
        }
        // generic: recheck only where the evaluated assignment changes
        std::vector<int> prev;
        for (int t = birth; t < G; ++t) {
            std::vector<int> cur = F.eval(cell, t);
            if (t > birth && cur == prev) continue;
            prev = cur;
            if (cur.empty()) {
                rep = {false, cell, t, -1, "empty assignment"};
                return rep;
            }
            Restriction sub = restrict_complex(*F.dst, cur);
            int topdeg = (max_deg >= 0) ? std::min(max_deg, sub.cx.dim()) : sub.cx.dim();
            std::vector<int> red = reduced_homology_dims(sub.cx, F.dst->grid.size() - 1, topdeg);
            for (int d = 0; d <= topdeg; ++d)
                if (red[d] != 0) {
                    rep = {false, cell, t, d, "reduced homology nonzero"};
                    return rep;
                }
        }
    }
    return rep;
}

std::optional<std::string> check_semicontinuous(const Carrier& F) {
    auto reach = F.src->incidence_closure();
    int G = F.src->grid.size();
    for (int c = 0; c < F.src->size(); ++c)
        for (int tau : reach[c]) {
            if (tau == c) continue;
            for (int t = F.src->cells[c].birth; t < G; ++t) {
                std::vector<int> fc = F.eval(c, t);
                std::vector<int> ft = F.eval(tau, t);
                if (!std::includes(fc.begin(), fc.end(), ft.begin(), ft.end()))
                    return "F(" + std::to_string(tau) + ") is not contained in F(" + std::to_string(c) +
                           ") at grid index " + std::to_string(t);
            }
        }
    return std::nullopt;
}

std::optional<std::string> check_time_coherent(const Carrier& F) {
    int G = F.src->grid.size();
    for (int c = 0; c < F.src->size(); ++c)
        for (int t = F.src->cells[c].birth; t + 1 < G; ++t) {
            std::vector<int> now = F.eval(c, t);
            std::vector<int> later = F.eval(c, t + 1);
            if (!std::includes(later.begin(), later.end(), now.begin(), now.end()))
                return "carrier of cell " + std::to_string(c) + " shrinks after grid index " + std::to_string(t);
        }
    return std::nullopt;
}

Carrier compose(const Carrier& F, const Carrier& G) {
    if (F.dst != G.src) throw input_error("carrier composition shape mismatch");
    Carrier H;
    H.src = F.src;
    H.dst = G.dst;
    H.eps = F.eps + G.eps;
    int Gn = F.src->grid.size();
    H.assign_t.assign(Gn, std::vector<std::vector<int>>(F.src->size()));
    for (int t = 0; t < Gn; ++t) {
        int u = F.target_index(t);
        H.targets.push_back(G.target_index(u));
        for (int c = 0; c < F.src->size(); ++c) {
            if (F.src->cells[c].birth > t) continue;
            std::set<int> acc;
            for (int mid : F.eval(c, t))
                for (int out : G.eval(mid, u)) acc.insert(out);
            H.assign_t[t][c].assign(acc.begin(), acc.end());
        }
    }
    return H;
}

std::optional<std::string> carrier_contained(const Carrier& F, const Carrier& G) {
    if (F.src != G.src || F.dst != G.dst) return "carriers do not share endpoints";
    int Gn = F.src->grid.size();
    for (int c = 0; c < F.src->size(); ++c)
        for (int t = F.src->cells[c].birth; t < Gn; ++t) {
            // compare at the later of the two evaluation indices (snapping a
            // composite twice can land past a single 2eps snap)
            int u = std::max(F.target_index(t), G.target_index(t));
            std::vector<int> a = F.eval_at_index(c, t, u);
            std::vector<int> b = G.eval_at_index(c, t, u);
            if (!std::includes(b.begin(), b.end(), a.begin(), a.end()))
                return "containment fails at cell " + std::to_string(c) + ", grid index " + std::to_string(t);
        }
    return std::nullopt;
}

Mat ChainMapFamily::matrix(int d, int t) const {
    int u = src->grid.shift_index(t, eps);
    std::vector<int> cols = src->cells_at(d, t);
    std::vector<int> rows = dst->cells_at(d, u);
    std::map<int, int> rpos;
    for (int i = 0; i < int(rows.size()); ++i) rpos[rows[i]] = i;
    Mat m(int(rows.size()), int(cols.size()), src->field.p);
    for (int j = 0; j < int(cols.size()); ++j)
        for (auto [id, coeff] : image[cols[j]]) {
            auto it = rpos.find(id);
            if (it == rpos.end()) throw invariant_error("chain map image not born at the shifted index");
            m.at(it->second, j) = coeff;
        }
    return m;
}

Mat ChainMapFamily::induced(int d, int t, const HomologyBasis& hx, const HomologyBasis& hy) const {
    return induced_on_homology(hx, hy, d, matrix(d, t));
}

namespace {

// sparse chain helpers over full-complex coordinates
using Chain = std::map<int, int>;

void chain_add(Chain& a, int id, int coeff, const FieldSpec& f) {
    int v = f.add(a.count(id) ? a[id] : 0, coeff);
    if (v == 0)
        a.erase(id);
    else
        a[id] = v;
}

Chain boundary_of_chain(const FilteredComplex& cx, const Chain& c) {
    Chain out;
    for (auto [id, coeff] : c)
        for (auto [face, fc] : cx.cells[id].boundary) chain_add(out, face, cx.field.mul(coeff, fc), cx.field);
    return out;
}

// solve ∂x = target inside the subcomplex given by `allowed` (sorted ids),
// with x supported in degree deg; returns sparse solution or nothing
std::optional<Chain> solve_boundary(const FilteredComplex& cx, const std::vector<int>& allowed, int deg,
                                    const Chain& target, unsigned salt) {
    std::vector<int> xs, ys;
    for (int id : allowed) {
        if (cx.cells[id].dim == deg) xs.push_back(id);
        if (cx.cells[id].dim == deg - 1) ys.push_back(id);
    }
    // permute candidate columns by the salt for alternative syntheses
    if (salt) {
        std::vector<int> perm(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) perm[i] = int(i);
        unsigned state = salt;
        for (size_t i = xs.size(); i > 1; --i) {
            state = state * 1664525u + 1013904223u;
            std::swap(perm[i - 1], perm[state % i]);
        }
        std::vector<int> xs2(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) xs2[i] = xs[perm[i]];
        xs = xs2;
    }
    std::map<int, int> ypos;
    for (int i = 0; i < int(ys.size()); ++i) ypos[ys[i]] = i;
    Mat A(int(ys.size()), int(xs.size()), cx.field.p);
    for (int j = 0; j < int(xs.size()); ++j)
        for (auto [face, coeff] : cx.cells[xs[j]].boundary) {
            auto it = ypos.find(face);
            if (it == ypos.end()) return std::nullopt;  // boundary leaves the subcomplex
            A.at(it->second, j) = coeff;
        }
    Mat b(int(ys.size()), 1, cx.field.p);
    for (auto [id, coeff] : target) {
        auto it = ypos.find(id);
        if (it == ypos.end()) return std::nullopt;
        b.at(it->second, 0) = coeff;
    }
    auto sol = A.solve(b);
    if (!sol) return std::nullopt;
    Chain out;
    for (int j = 0; j < int(xs.size()); ++j)
        if (sol->at(j, 0)) out[xs[j]] = sol->at(j, 0);
    return out;
}

} // namespace

ChainMapFamily synthesize_chain_map(const Carrier& F, unsigned rng_salt) {
    const FilteredComplex& X = *F.src;
    const FilteredComplex& Y = *F.dst;
    ChainMapFamily out;
    out.src = F.src;
    out.dst = F.dst;
    out.eps = F.eps;
    out.image.resize(X.size());
    // cells in (birth, dim, id) order; each image is fixed at the birth index
    std::vector<int> order(X.size());
    for (int i = 0; i < X.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Cell &ca = X.cells[a], &cb = X.cells[b];
        if (ca.birth != cb.birth) return ca.birth < cb.birth;
        if (ca.dim != cb.dim) return ca.dim < cb.dim;
        return a < b;
    });
    for (int id : order) {
        const Cell& c = X.cells[id];
        int t = c.birth;
        std::vector<int> carrier_cells = F.eval(id, t);
        if (c.dim == 0) {
            // any vertex of the carrier; the salt rotates the choice
            std::vector<int> verts;
            for (int y : carrier_cells)
                if (Y.cells[y].dim == 0) verts.push_back(y);
            if (verts.empty())
                throw hypothesis_error("carrier of vertex " + std::to_string(id) + " has no vertices");
            out.image[id] = {{verts[rng_salt % verts.size()], 1}};
            continue;
        }
        // f(∂c): a cycle in the carrier of c
        Chain fdc;
        for (auto [face, coeff] : c.boundary)
            for (auto [y, v] : out.image[face]) chain_add(fdc, y, X.field.mul(coeff, v), X.field);
        auto sol = solve_boundary(Y, carrier_cells, c.dim, fdc, rng_salt);
        if (!sol)
            throw hypothesis_error("carrier is not acyclic: no chain with the required boundary for cell " +
                                   std::to_string(id));
        out.image[id].assign(sol->begin(), sol->end());
    }
    return out;
}

Mat HomotopyFamily::matrix(int d, int t) const {
    int u = src->grid.shift_index(t, eps);
    std::vector<int> cols = src->cells_at(d, t);
    std::vector<int> rows = dst->cells_at(d + 1, u);
    std::map<int, int> rpos;
    for (int i = 0; i < int(rows.size()); ++i) rpos[rows[i]] = i;
    Mat m(int(rows.size()), int(cols.size()), src->field.p);
    for (int j = 0; j < int(cols.size()); ++j)
        for (auto [id, coeff] : image[cols[j]]) {
            auto it = rpos.find(id);
            if (it == rpos.end()) throw invariant_error("homotopy image not born at the shifted index");
            m.at(it->second, j) = coeff;
        }
    return m;
}

HomotopyFamily synthesize_homotopy(const Carrier& F, const ChainMapFamily& f, const ChainMapFamily& g) {
    const FilteredComplex& X = *F.src;
    const FilteredComplex& Y = *F.dst;
    HomotopyFamily out;
    out.src = F.src;
    out.dst = F.dst;
    out.eps = F.eps;
    out.image.resize(X.size());
    std::vector<int> order(X.size());
    for (int i = 0; i < X.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Cell &ca = X.cells[a], &cb = X.cells[b];
        if (ca.birth != cb.birth) return ca.birth < cb.birth;
        if (ca.dim != cb.dim) return ca.dim < cb.dim;
        return a < b;
    });
    for (int id : order) {
        const Cell& c = X.cells[id];
        int t = c.birth;
        std::vector<int> carrier_cells = F.eval(id, t);
        // z = g(c) - f(c) - h(∂c), a degree-(dim) cycle inside F(c)
        Chain z;
        for (auto [y, v] : g.image[id]) chain_add(z, y, v, X.field);
        for (auto [y, v] : f.image[id]) chain_add(z, y, X.field.neg(v), X.field);
        for (auto [face, coeff] : c.boundary)
            for (auto [y, v] : out.image[face]) chain_add(z, y, X.field.neg(X.field.mul(coeff, v)), X.field);
        auto sol = solve_boundary(Y, carrier_cells, c.dim + 1, z, 0);
        if (!sol)
            throw hypothesis_error("carrier is not acyclic: homotopy solve failed at cell " + std::to_string(id));
        out.image[id].assign(sol->begin(), sol->end());
    }
    return out;
}

std::optional<std::string> check_homotopy(const HomotopyFamily& h, const ChainMapFamily& f,
                                          const ChainMapFamily& g) {
    const FilteredComplex& X = *h.src;
    const FilteredComplex& Y = *h.dst;
    for (int t = 0; t < X.grid.size(); ++t) {
        int u = X.grid.shift_index(t, h.eps);
        for (int d = 0; d <= X.dim(); ++d) {
            Mat hd = h.matrix(d, t);
            Mat dh = Y.boundary_matrix(d + 1, u) * hd;
            Mat hd1 = (d > 0) ? h.matrix(d - 1, t) * X.boundary_matrix(d, t)
                              : Mat::zero(dh.rows(), dh.cols(), X.field.p);
            Mat rhs = g.matrix(d, t) - f.matrix(d, t);
            if (!(dh + hd1 == rhs))
                return "∂h + h∂ != g - f at grid index " + std::to_string(t) + ", degree " + std::to_string(d);
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_chain_map(const ChainMapFamily& f, const Carrier& F) {
    const FilteredComplex& X = *f.src;
    const FilteredComplex& Y = *f.dst;
    for (int t = 0; t < X.grid.size(); ++t) {
        int u = X.grid.shift_index(t, f.eps);
        for (int d = 1; d <= X.dim(); ++d) {
            Mat lhs = f.matrix(d - 1, t) * X.boundary_matrix(d, t);
            Mat rhs = Y.boundary_matrix(d, u) * f.matrix(d, t);
            if (!(lhs == rhs)) return "∂f != f∂ at grid index " + std::to_string(t) + ", degree " + std::to_string(d);
        }
    }
    // carried-ness: support of f(c) inside F(c) at every index
    for (int c = 0; c < X.size(); ++c)
        for (int t = X.cells[c].birth; t < X.grid.size(); ++t) {
            std::vector<int> allowed = F.eval(c, t);
            for (auto [y, v] : f.image[c]) {
                (void)v;
                if (!std::binary_search(allowed.begin(), allowed.end(), y))
                    return "image of cell " + std::to_string(c) + " leaves its carrier at grid index " +
                           std::to_string(t);
            }
        }
    return std::nullopt;
}

// --- example packs --------------------------------------------------------------

double hausdorff(const std::vector<std::vector<double>>& A, const std::vector<std::vector<double>>& B) {
    double h = 0;
    for (const auto& a : A) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : B) best = std::min(best, euclidean(a, b));
        h = std::max(h, best);
    }
    for (const auto& b : B) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : A) best = std::min(best, euclidean(a, b));
        h = std::max(h, best);
    }
    return h;
}

namespace {

// full-simplex carrier VR(A) ⇉ VR(B)[eps]: sigma -> span of target vertices
// within radius of the source vertex set
Carrier vr_one_side(const FilteredComplex& X, const FilteredComplex& Y,
                    const std::vector<std::vector<double>>& Xpts, const std::vector<std::vector<double>>& Ypts,
                    double eps, double radius) {
    Carrier F;
    F.src = &X;
    F.dst = &Y;
    F.eps = eps;
    F.full_simplex = true;
    F.assign.resize(X.size());
    F.vertex_sets.resize(X.size());
    // target vertex cell ids by point index (vertices are the 0-cells in point order)
    std::vector<int> yvert;
    for (const Cell& c : Y.cells)
        if (c.dim == 0) yvert.push_back(c.id);
    std::vector<int> xpt_of_vert(X.size(), -1);
    {
        int k = 0;
        for (const Cell& c : X.cells)
            if (c.dim == 0) xpt_of_vert[c.id] = k++;
    }
    for (int c = 0; c < X.size(); ++c) {
        std::vector<int> srcpts;
        for (int v : X.closure_vertices(c)) srcpts.push_back(xpt_of_vert[v]);
        std::vector<int> span;
        for (int j = 0; j < int(Ypts.size()); ++j) {
            bool near = false;
            for (int i : srcpts)
                if (euclidean(Xpts[i], Ypts[j]) <= radius + 1e-9) near = true;
            if (near) span.push_back(yvert[j]);
        }
        F.vertex_sets[c] = span;
        // all simplices of Y spanned by `span`
        std::set<int> sset(span.begin(), span.end());
        std::vector<int> cells;
        for (const Cell& yc : Y.cells) {
            bool inside = true;
            for (int v : Y.closure_vertices(yc.id))
                if (!sset.count(v)) inside = false;
            if (inside) cells.push_back(yc.id);
        }
        F.assign[c] = cells;
    }
    return F;
}

} // namespace

EquivalencePack vr_carrier(const std::vector<std::vector<double>>& Xpts,
                           const std::vector<std::vector<double>>& Ypts, int max_dim, FieldSpec field) {
    EquivalencePack pack;
    double dh = hausdorff(Xpts, Ypts);
    pack.eps = 2 * dh;
    FiltrationGrid grid = vr_grid(Xpts, Ypts);
    pack.X = std::make_shared<FilteredComplex>(build_vietoris_rips(Xpts, max_dim, grid, field));
    pack.Y = std::make_shared<FilteredComplex>(build_vietoris_rips(Ypts, max_dim, grid, field));
    pack.F = vr_one_side(*pack.X, *pack.Y, Xpts, Ypts, pack.eps, pack.eps / 2);
    pack.G = vr_one_side(*pack.Y, *pack.X, Ypts, Xpts, pack.eps, pack.eps / 2);
    pack.IX = vr_one_side(*pack.X, *pack.X, Xpts, Xpts, 2 * pack.eps, pack.eps);
    pack.IY = vr_one_side(*pack.Y, *pack.Y, Ypts, Ypts, 2 * pack.eps, pack.eps);
    return pack;
}

namespace {

std::vector<std::vector<double>> lattice_points(const std::vector<double>& spacing, const std::vector<double>& offset,
                                                const std::vector<double>& lo, const std::vector<double>& hi) {
    size_t N = spacing.size();
    // per-axis coordinates covering [lo, hi] with one extra step on each side
    std::vector<std::vector<double>> axes(N);
    for (size_t i = 0; i < N; ++i) {
        double start = offset[i] + spacing[i] * std::floor((lo[i] - offset[i]) / spacing[i]);
        for (double x = start; x <= hi[i] + spacing[i] + 1e-12; x += spacing[i]) axes[i].push_back(x);
    }
    std::vector<std::vector<double>> pts{{}};
    for (size_t i = 0; i < N; ++i) {
        std::vector<std::vector<double>> next;
        for (const auto& p : pts)
            for (double x : axes[i]) {
                auto q = p;
                q.push_back(x);
                next.push_back(q);
            }
        pts = std::move(next);
    }
    return pts;
}

} // namespace

EquivalencePack lattice_carrier(const std::function<double(const std::vector<double>&)>& f,
                                const std::vector<double>& r, const std::vector<double>& l,
                                const std::vector<double>& window_min, const std::vector<double>& window_max,
                                FieldSpec field) {
    size_t N = r.size();
    for (double ri : r)
        if (!(ri > 0 && ri <= 1)) throw input_error("lattice spacings must satisfy 0 < r_i <= 1");
    if (l.size() != N || window_min.size() != N || window_max.size() != N)
        throw input_error("lattice carrier: window mismatch");
    std::vector<double> ones(N, 1.0), zeros(N, 0.0);
    auto xpts = lattice_points(ones, zeros, window_min, window_max);
    auto ypts = lattice_points(r, l, window_min, window_max);

    // collect sampled values into a shared grid
    std::set<double> vals;
    for (auto& p : xpts) vals.insert(f(p));
    for (auto& p : ypts) vals.insert(f(p));
    std::vector<double> gv;
    for (double v : vals)
        if (gv.empty() || v - gv.back() > 1e-9) gv.push_back(v);
    FiltrationGrid grid{gv};

    auto build = [&](const std::vector<std::vector<double>>& pts, const std::vector<double>& spacing) {
        std::vector<std::pair<std::vector<std::array<double, 2>>, double>> tops;
        // top cells: all boxes with side spacing_i on consecutive lattice points;
        // lower-star filtration from the vertex values
        std::map<std::vector<double>, double> val;
        for (auto& p : pts) val[p] = f(p);
        for (auto& p : pts) {
            // box anchored at p in every subset of axes
            for (unsigned mask = 0; mask < (1u << N); ++mask) {
                std::vector<std::array<double, 2>> box(N);
                double birth = val[p];
                bool ok = true;
                for (size_t i = 0; i < N; ++i) {
                    if (mask & (1u << i)) {
                        std::vector<double> q = p;
                        q[i] += spacing[i];
                        box[i] = {p[i], p[i] + spacing[i]};
                        if (!val.count(q)) ok = false;
                    } else {
                        box[i] = {p[i], p[i]};
                    }
                }
                if (!ok) continue;
                // birth = max over the box's vertices
                for (unsigned sub = 0; sub < (1u << N); ++sub) {
                    if ((sub & mask) != sub) continue;
                    std::vector<double> q = p;
                    for (size_t i = 0; i < N; ++i)
                        if (sub & (1u << i)) q[i] += spacing[i];
                    birth = std::max(birth, val.at(q));
                }
                tops.push_back({box, birth});
            }
        }
        return build_cubical(tops, field, grid);
    };
    EquivalencePack pack;
    pack.X = std::make_shared<FilteredComplex>(build(xpts, ones));
    pack.Y = std::make_shared<FilteredComplex>(build(ypts, r));

    auto boxes_meet = [](const CellLabel& a, const CellLabel& b) {
        for (size_t i = 0; i < a.intervals.size(); ++i)
            if (a.intervals[i][1] < b.intervals[i][0] - 1e-9 || b.intervals[i][1] < a.intervals[i][0] - 1e-9)
                return false;
        return true;
    };
    auto one_side = [&](const FilteredComplex& A, const FilteredComplex& B) {
        Carrier c;
        c.src = &A;
        c.dst = &B;
        c.assign.resize(A.size());
        double shift = 0;
        for (int i = 0; i < A.size(); ++i) {
            std::vector<int> seeds;
            for (int j = 0; j < B.size(); ++j)
                if (boxes_meet(A.cells[i].label, B.cells[j].label)) seeds.push_back(j);
            c.assign[i] = closure(B, seeds).members;
            for (int j : c.assign[i])
                shift = std::max(shift, B.grid[B.cells[j].birth] - A.grid[A.cells[i].birth]);
        }
        c.eps = shift;
        return c;
    };
    pack.F = one_side(*pack.X, *pack.Y);
    pack.G = one_side(*pack.Y, *pack.X);
    pack.eps = std::max(pack.F.eps, pack.G.eps);
    pack.F.eps = pack.G.eps = pack.eps;
    pack.IX = compose(pack.F, pack.G);
    pack.IY = compose(pack.G, pack.F);
    return pack;
}

EquivalenceCertificate verify_equivalence(const EquivalencePack& pack, int max_dim) {
    EquivalenceCertificate cert;
    cert.eps = pack.eps;
    auto fail = [&](const std::string& msg) {
        cert.failure = msg;
        return cert;
    };
    // carriers must be semicontinuous, time coherent, acyclic
    struct Named {
        const char* name;
        const Carrier* c;
    };
    for (auto [name, c] : {Named{"F", &pack.F}, Named{"G", &pack.G}, Named{"IX", &pack.IX}, Named{"IY", &pack.IY}}) {
        if (auto err = check_semicontinuous(*c)) return fail(std::string(name) + ": " + *err);
        if (auto err = check_time_coherent(*c)) return fail(std::string(name) + ": " + *err);
        AcyclicityReport rep = check_acyclic(*c, max_dim);
        if (!rep.ok)
            return fail(std::string(name) + ": not acyclic (cell " + std::to_string(rep.cell) + ", grid index " +
                        std::to_string(rep.t) + ", degree " + std::to_string(rep.degree) + ")");
    }
    // the two composite containments
    Carrier GF = compose(pack.F, pack.G);
    Carrier FG = compose(pack.G, pack.F);
    if (auto err = carrier_contained(GF, pack.IX)) return fail("G∘F ⊄ I_X: " + *err);
    if (auto err = carrier_contained(FG, pack.IY)) return fail("F∘G ⊄ I_Y: " + *err);
    // synthesize carried chain maps (certifies solvability) and compare barcodes
    ChainMapFamily fmap = synthesize_chain_map(pack.F);
    ChainMapFamily gmap = synthesize_chain_map(pack.G);
    if (auto err = check_chain_map(fmap, pack.F)) return fail("f: " + *err);
    if (auto err = check_chain_map(gmap, pack.G)) return fail("g: " + *err);
    auto phx = compute_ph(*pack.X, max_dim);
    auto phy = compute_ph(*pack.Y, max_dim);
    for (int k = 0; k <= max_dim; ++k) {
        double d = bottleneck(phx[k], phy[k]);
        cert.bottlenecks.push_back(d);
        if (d > pack.eps + 1e-9) cert.bottleneck_ok = false;
    }
    if (!cert.bottleneck_ok) return fail("bottleneck distance exceeds the certified eps");
    cert.valid = true;
    cert.snapped_eps = 0;
    const FiltrationGrid& g = pack.X->grid;
    for (int t = 0; t < g.size(); ++t)
        cert.snapped_eps = std::max(cert.snapped_eps, g[g.shift_index(t, pack.eps)] - g[t]);
    return cert;
}

} // namespace mvss
