#include "mvss/complex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace mvss {

FiltrationGrid::FiltrationGrid(std::vector<double> v) : values(std::move(v)) {
    if (values.empty()) throw input_error("filtration grid must have at least one value");
    for (size_t i = 1; i < values.size(); ++i)
        if (!(values[i - 1] < values[i])) throw input_error("filtration grid must be strictly increasing");
}

int FiltrationGrid::index_of(double v) const {
    for (int i = 0; i < size(); ++i)
        if (std::abs(values[i] - v) <= 1e-9 * std::max(1.0, std::abs(v))) return i;
    throw input_error("value " + std::to_string(v) + " is not on the filtration grid");
}

int FiltrationGrid::snap_up(double v) const {
    double tol = 1e-9 * std::max(1.0, std::abs(v));
    for (int i = 0; i < size(); ++i)
        if (values[i] >= v - tol) return i;
    return size() - 1;
}

FilteredComplex::FilteredComplex(FieldSpec f, FiltrationGrid g, std::vector<Cell> cs)
    : field(f), grid(std::move(g)), cells(std::move(cs)) {
    validate();
}

int FilteredComplex::dim() const {
    int d = -1;
    for (const Cell& c : cells) d = std::max(d, c.dim);
    return d;
}

int FilteredComplex::max_birth() const {
    int b = 0;
    for (const Cell& c : cells) b = std::max(b, c.birth);
    return b;
}

std::vector<int> FilteredComplex::cells_at(int dim, int t) const {
    std::vector<int> out;
    for (const Cell& c : cells)
        if (c.dim == dim && c.birth <= t) out.push_back(c.id);
    return out;
}

Mat FilteredComplex::boundary_matrix(int dim, int t) const {
    std::vector<int> r, c;
    return boundary_matrix(dim, t, r, c);
}

Mat FilteredComplex::boundary_matrix(int dim, int t, std::vector<int>& row_ids, std::vector<int>& col_ids) const {
    if (dim < 0) throw input_error("boundary_matrix: negative dimension");
    if (t < 0 || t >= grid.size()) throw input_error("boundary_matrix: grid index out of range");
    row_ids = cells_at(dim - 1, t);
    col_ids = cells_at(dim, t);
    std::map<int, int> row_pos;
    for (int i = 0; i < int(row_ids.size()); ++i) row_pos[row_ids[i]] = i;
    Mat m(int(row_ids.size()), int(col_ids.size()), field.p);
    for (int j = 0; j < int(col_ids.size()); ++j)
        for (auto [face, coeff] : cells[col_ids[j]].boundary) m.at(row_pos.at(face), j) = coeff;
    return m;
}

void FilteredComplex::validate() const {
    for (int i = 0; i < int(cells.size()); ++i) {
        const Cell& c = cells[i];
        if (c.id != i) throw invariant_error("cell ids must be 0..n-1 in order");
        if (c.birth < 0 || c.birth >= grid.size()) throw invariant_error("cell birth off the grid");
        std::set<int> seen;
        for (auto [face, coeff] : c.boundary) {
            if (face < 0 || face >= i) throw invariant_error("faces must precede cofaces");
            if (!seen.insert(face).second) throw invariant_error("duplicate face id in boundary");
            if (coeff % field.p == 0) throw invariant_error("zero coefficient stored in boundary");
            if (cells[face].dim != c.dim - 1) throw invariant_error("boundary entry with wrong dimension");
            if (cells[face].birth > c.birth) throw invariant_error("face born after coface");
        }
        if (c.dim == 0 && !c.boundary.empty()) throw invariant_error("0-cell with nonempty boundary");
    }
    // d∘d = 0 once over the full complex; restriction to sublevels follows
    // from birth monotonicity.
    int t = grid.size() - 1;
    for (int d = 2; d <= dim(); ++d) {
        Mat a = boundary_matrix(d - 1, t);
        Mat b = boundary_matrix(d, t);
        if (!(a * b).is_zero()) throw invariant_error("d∘d != 0 in dimension " + std::to_string(d));
    }
}

std::vector<std::vector<int>> FilteredComplex::incidence_closure() const {
    std::vector<std::vector<int>> out(cells.size());
    for (int i = 0; i < int(cells.size()); ++i) {
        std::set<int> acc{i};
        for (auto [face, coeff] : cells[i].boundary) {
            (void)coeff;
            acc.insert(out[face].begin(), out[face].end());
        }
        out[i].assign(acc.begin(), acc.end());
    }
    return out;
}

std::vector<int> FilteredComplex::cell_closure(int id) const {
    if (id < 0 || id >= size()) throw input_error("unknown cell id " + std::to_string(id));
    std::set<int> acc;
    std::vector<int> stack{id};
    while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        if (!acc.insert(c).second) continue;
        for (auto [face, coeff] : cells[c].boundary) {
            (void)coeff;
            stack.push_back(face);
        }
    }
    return std::vector<int>(acc.begin(), acc.end());
}

std::vector<int> FilteredComplex::closure_vertices(int id) const {
    std::vector<int> out;
    for (int c : cell_closure(id))
        if (cells[c].dim == 0) out.push_back(c);
    return out;
}

bool FilteredComplex::operator==(const FilteredComplex& o) const {
    if (!(field == o.field) || !(grid == o.grid) || cells.size() != o.cells.size()) return false;
    for (size_t i = 0; i < cells.size(); ++i) {
        const Cell &a = cells[i], &b = o.cells[i];
        if (a.dim != b.dim || a.birth != b.birth || a.boundary != b.boundary) return false;
    }
    return true;
}

void SubComplex::validate() const {
    if (!parent) throw invariant_error("subcomplex without parent");
    std::set<int> mem(members.begin(), members.end());
    for (int id : members) {
        if (id < 0 || id >= parent->size()) throw input_error("unknown cell id " + std::to_string(id));
        for (auto [face, coeff] : parent->cells[id].boundary) {
            (void)coeff;
            if (!mem.count(face)) throw invariant_error("subcomplex not face-closed at cell " + std::to_string(id));
        }
    }
}

SubComplex closure(const FilteredComplex& cx, const std::vector<int>& seeds) {
    std::set<int> acc;
    for (int s : seeds)
        for (int c : cx.cell_closure(s)) acc.insert(c);
    SubComplex sub;
    sub.parent = &cx;
    sub.members.assign(acc.begin(), acc.end());
    return sub;
}

Restriction restrict_complex(const FilteredComplex& cx, const std::vector<int>& members) {
    Restriction r;
    r.parent_of = members;
    std::sort(r.parent_of.begin(), r.parent_of.end());
    r.into.assign(cx.size(), -1);
    for (int i = 0; i < int(r.parent_of.size()); ++i) r.into[r.parent_of[i]] = i;
    std::vector<Cell> cs;
    for (int i = 0; i < int(r.parent_of.size()); ++i) {
        Cell c = cx.cells[r.parent_of[i]];
        c.id = i;
        for (auto& [face, coeff] : c.boundary) {
            (void)coeff;
            if (r.into[face] < 0) throw invariant_error("restriction set is not face-closed");
            face = r.into[face];
        }
        cs.push_back(std::move(c));
    }
    r.cx = FilteredComplex(cx.field, cx.grid, std::move(cs));
    return r;
}

// --- Builders ------------------------------------------------------------

namespace {

struct SimplexKeyLess {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

} // namespace

FilteredComplex build_simplicial(const std::vector<std::pair<std::vector<int>, double>>& simplices,
                                 FieldSpec field, FiltrationGrid grid, bool autocomplete) {
    std::map<std::vector<int>, int, SimplexKeyLess> birth;  // simplex -> grid index
    for (const auto& [verts, bval] : simplices) {
        if (verts.empty()) throw input_error("empty vertex list");
        for (size_t i = 1; i < verts.size(); ++i)
            if (!(verts[i - 1] < verts[i])) throw input_error("vertex lists must be sorted and duplicate-free");
        int b = grid.index_of(bval);
        auto it = birth.find(verts);
        if (it == birth.end() || it->second > b) birth[verts] = b;
    }
    // close under faces
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::pair<std::vector<int>, int>> add;
        for (const auto& [verts, b] : birth) {
            if (verts.size() == 1) continue;
            for (size_t i = 0; i < verts.size(); ++i) {
                std::vector<int> face = verts;
                face.erase(face.begin() + i);
                auto it = birth.find(face);
                if (it == birth.end()) {
                    if (!autocomplete)
                        throw input_error("missing face of a listed simplex (auto-completion disabled)");
                    add.push_back({face, b});
                } else if (it->second > b) {
                    if (!autocomplete) throw input_error("face born after coface (auto-completion disabled)");
                    add.push_back({face, b});
                }
            }
        }
        for (auto& [f, b] : add) {
            auto it = birth.find(f);
            if (it == birth.end() || it->second > b) {
                birth[f] = b;
                grew = true;
            }
        }
    }
    // sorted by (dim, verts) -> ids; faces precede cofaces
    std::vector<Cell> cells;
    std::map<std::vector<int>, int, SimplexKeyLess> ids;
    for (const auto& [verts, b] : birth) {
        Cell c;
        c.id = int(cells.size());
        c.dim = int(verts.size()) - 1;
        c.birth = b;
        c.label.kind = CellLabel::Simplex;
        c.label.verts = verts;
        if (verts.size() > 1) {
            int sign = 1;
            for (size_t i = 0; i < verts.size(); ++i) {
                std::vector<int> face = verts;
                face.erase(face.begin() + i);
                int coeff = (i % 2 == 0) ? 1 : field.p - 1;
                c.boundary.push_back({ids.at(face), coeff});
                (void)sign;
            }
            std::sort(c.boundary.begin(), c.boundary.end());
        }
        ids[verts] = c.id;
        cells.push_back(std::move(c));
    }
    return FilteredComplex(field, grid, std::move(cells));
}

namespace {

using Box = std::vector<std::array<double, 2>>;

struct BoxLess {
    bool operator()(const Box& a, const Box& b) const {
        int da = 0, db = 0;
        for (auto& iv : a) da += iv[0] != iv[1];
        for (auto& iv : b) db += iv[0] != iv[1];
        if (da != db) return da < db;
        return a < b;
    }
};

} // namespace

FilteredComplex build_cubical(const std::vector<std::pair<Box, double>>& top_cells, FieldSpec field,
                              FiltrationGrid grid) {
    if (top_cells.empty()) throw input_error("no cubical cells given");
    size_t N = top_cells.front().first.size();
    std::map<Box, int, BoxLess> birth;
    auto note = [&](const Box& b, int t) {
        auto it = birth.find(b);
        if (it == birth.end() || it->second > t) birth[b] = t;
    };
    for (const auto& [box, bval] : top_cells) {
        if (box.size() != N) throw input_error("cubical cells must share the ambient dimension");
        note(box, grid.index_of(bval));
    }
    // close under faces: replace a nondegenerate interval by one endpoint
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::pair<Box, int>> add;
        for (const auto& [box, t] : birth)
            for (size_t ax = 0; ax < N; ++ax) {
                if (box[ax][0] == box[ax][1]) continue;
                for (int side = 0; side < 2; ++side) {
                    Box f = box;
                    f[ax] = {box[ax][side], box[ax][side]};
                    auto it = birth.find(f);
                    if (it == birth.end() || it->second > t) add.push_back({f, t});
                }
            }
        for (auto& [f, t] : add) {
            auto it = birth.find(f);
            if (it == birth.end() || it->second > t) {
                birth[f] = t;
                grew = true;
            }
        }
    }
    std::vector<Cell> cells;
    std::map<Box, int, BoxLess> ids;
    for (const auto& [box, t] : birth) {
        Cell c;
        c.id = int(cells.size());
        c.dim = 0;
        for (auto& iv : box) c.dim += iv[0] != iv[1];
        c.birth = t;
        c.label.kind = CellLabel::Cube;
        c.label.intervals = box;
        // Leibniz signs: axis j contributes (-1)^(number of earlier nondegenerate axes),
        // top face minus bottom face.
        int before = 0;
        for (size_t ax = 0; ax < N; ++ax) {
            if (box[ax][0] == box[ax][1]) continue;
            int sgn = (before % 2 == 0) ? 1 : -1;
            for (int side = 0; side < 2; ++side) {
                Box f = box;
                f[ax] = {box[ax][side], box[ax][side]};
                int coeff = (side == 1 ? sgn : -sgn);
                c.boundary.push_back({ids.at(f), ((coeff % field.p) + field.p) % field.p});
            }
            ++before;
        }
        std::sort(c.boundary.begin(), c.boundary.end());
        ids[box] = c.id;
        cells.push_back(std::move(c));
    }
    return FilteredComplex(field, grid, std::move(cells));
}

double euclidean(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
}

FiltrationGrid vr_grid(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
    std::set<double> vals{0.0};
    auto addall = [&](const std::vector<std::vector<double>>& pts) {
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j) vals.insert(euclidean(pts[i], pts[j]));
    };
    addall(a);
    addall(b);
    std::vector<double> v(vals.begin(), vals.end());
    // drop near-duplicates from floating noise
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > 1e-9) out.push_back(x);
    return FiltrationGrid(out);
}

FilteredComplex build_vietoris_rips(const std::vector<std::vector<double>>& points, int max_dim,
                                    FiltrationGrid grid, FieldSpec field) {
    if (points.empty()) throw input_error("empty point set");
    if (max_dim < 0) throw input_error("max_dim must be >= 0");
    int n = int(points.size());
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = euclidean(points[i], points[j]);

    std::vector<std::pair<std::vector<int>, double>> simplices;
    // enumerate cliques up to max_dim+1 vertices; birth = max pairwise distance
    std::vector<std::pair<std::vector<int>, double>> frontier;
    for (int i = 0; i < n; ++i) {
        simplices.push_back({{i}, grid[0]});
        frontier.push_back({{i}, 0.0});
    }
    for (int k = 1; k <= max_dim; ++k) {
        std::vector<std::pair<std::vector<int>, double>> next;
        for (auto& [verts, diam] : frontier)
            for (int v = verts.back() + 1; v < n; ++v) {
                double nd = diam;
                for (int u : verts) nd = std::max(nd, d[u][v]);
                std::vector<int> nv = verts;
                nv.push_back(v);
                double snapped = grid[grid.snap_up(nd)];
                if (snapped + 1e-12 < nd)
                    throw input_error("grid does not cover a pairwise distance needed by the VR complex");
                next.push_back({nv, nd});
                simplices.push_back({nv, snapped});
            }
        frontier = std::move(next);
    }
    return build_simplicial(simplices, field, grid, true);
}

} // namespace mvss
