#include "mvss/diagram.hpp"

#include <algorithm>
#include <set>

namespace mvss {

Diagram finalize_diagram(Diagram d) {
    d.vert_index_.clear();
    for (const Cell& c : d.index.cells) {
        if (c.label.kind != CellLabel::Simplex) throw invariant_error("index complex cells must carry vertex lists");
        d.vert_index_[c.label.verts] = c.id;
    }
    d.validate();
    return d;
}

int Diagram::face_id(int sigma, int i) const {
    const std::vector<int>& verts = index.cells[sigma].label.verts;
    std::vector<int> face = verts;
    face.erase(face.begin() + i);
    auto it = vert_index_.find(face);
    if (it == vert_index_.end()) throw invariant_error("index complex is missing a face");
    return it->second;
}

Mat Diagram::chain_map(int sigma_from, int tau_to, int d) const {
    if (sigma_from == tau_to) {
        int n = (d <= fiber[sigma_from].dim()) ? int(fiber[sigma_from].cells_at(d, fiber[sigma_from].grid.size() - 1).size()) : 0;
        return Mat::identity(n, index.field.p);
    }
    const std::vector<int>& sv = index.cells[sigma_from].label.verts;
    const std::vector<int>& tv = index.cells[tau_to].label.verts;
    if (!std::includes(sv.begin(), sv.end(), tv.begin(), tv.end()))
        throw input_error("chain_map: target is not a face of source");
    // peel off the first vertex of sv missing from tv
    for (int i = 0; i < int(sv.size()); ++i) {
        if (std::binary_search(tv.begin(), tv.end(), sv[i])) continue;
        int mid = face_id(sigma_from, i);
        int dmax = std::max(0, d);
        Mat first = face_maps[sigma_from][i][dmax];
        Mat rest = chain_map(mid, tau_to, d);
        return rest * first;
    }
    throw invariant_error("chain_map: unreachable");
}

int Diagram::max_fiber_dim() const {
    int m = 0;
    for (const auto& f : fiber) m = std::max(m, f.dim());
    return m;
}

void Diagram::validate() const {
    if (int(fiber.size()) != index.size()) throw invariant_error("diagram fiber count mismatch");
    int D = max_fiber_dim();
    for (int s = 0; s < index.size(); ++s) {
        const Cell& sc = index.cells[s];
        if (int(face_maps[s].size()) != (sc.dim == 0 ? 0 : sc.dim + 1))
            throw invariant_error("diagram face map arity mismatch at index cell " + std::to_string(s));
        for (int i = 0; i < int(face_maps[s].size()); ++i) {
            int f = face_id(s, i);
            for (int d = 0; d <= D; ++d) {
                const Mat& m = face_maps[s][i].at(d);
                auto src_cells = fiber[s].cells_at(d, fiber[s].grid.size() - 1);
                auto dst_cells = fiber[f].cells_at(d, fiber[f].grid.size() - 1);
                if (m.cols() != int(src_cells.size()) || m.rows() != int(dst_cells.size()))
                    throw invariant_error("face map shape mismatch");
                // birth compatibility: image of a born cell is born
                for (int j = 0; j < m.cols(); ++j)
                    for (int r = 0; r < m.rows(); ++r)
                        if (m.at(r, j) != 0 &&
                            fiber[f].cells[dst_cells[r]].birth > fiber[s].cells[src_cells[j]].birth)
                            throw invariant_error("face map does not respect births");
            }
            // chain map property at full level
            for (int d = 1; d <= D; ++d) {
                Mat bs = fiber[s].boundary_matrix(d, fiber[s].grid.size() - 1);
                Mat bf = fiber[f].boundary_matrix(d, fiber[f].grid.size() - 1);
                if (!(face_maps[s][i].at(d - 1) * bs == bf * face_maps[s][i].at(d)))
                    throw invariant_error("face map does not commute with fiber boundary");
            }
        }
        // functoriality: both orders of dropping two vertices agree
        if (sc.dim >= 2) {
            for (int i = 0; i < sc.dim + 1; ++i)
                for (int j = i + 1; j < sc.dim + 1; ++j) {
                    int fi = face_id(s, i), fj = face_id(s, j);
                    for (int d = 0; d <= D; ++d) {
                        // in face_i the vertex originally at j sits at j-1
                        Mat a = face_maps[fi][j - 1].at(d) * face_maps[s][i].at(d);
                        Mat b = face_maps[fj][i].at(d) * face_maps[s][j].at(d);
                        if (!(a == b))
                            throw invariant_error("diagram functoriality fails at index cell " + std::to_string(s) +
                                                  " faces " + std::to_string(i) + "," + std::to_string(j) +
                                                  " dim " + std::to_string(d));
                    }
                }
        }
    }
}

namespace {

// full-complex cell positions per dimension
std::vector<std::vector<int>> cells_by_dim(const FilteredComplex& cx) {
    std::vector<std::vector<int>> out(cx.dim() + 1);
    for (const Cell& c : cx.cells) out[c.dim].push_back(c.id);
    return out;
}

} // namespace

CoverDiagram cover_diagram(const FilteredComplex& X, const Cover& U) {
    CoverDiagram out;
    out.nerve = nerve(U);
    Diagram D;
    D.index = out.nerve.nerve;
    for (int s = 0; s < D.index.size(); ++s) out.pieces.push_back(restrict_complex(X, out.nerve.piece_cells[s]));
    for (auto& r : out.pieces) D.fiber.push_back(r.cx);
    D.face_maps.resize(D.index.size());
    int maxd = 0;
    for (const auto& f : D.fiber) maxd = std::max(maxd, f.dim());
    for (int s = 0; s < D.index.size(); ++s) {
        const Cell& sc = D.index.cells[s];
        if (sc.dim == 0) continue;
        D.face_maps[s].resize(sc.dim + 1);
        for (int i = 0; i <= sc.dim; ++i) {
            std::vector<int> fverts = sc.label.verts;
            fverts.erase(fverts.begin() + i);
            int f = -1;
            for (int k = 0; k < D.index.size(); ++k)
                if (D.index.cells[k].label.verts == fverts) f = k;
            if (f < 0) throw invariant_error("nerve not downward closed");
            auto src_by_dim = cells_by_dim(D.fiber[s]);
            auto dst_by_dim = cells_by_dim(D.fiber[f]);
            for (int d = 0; d <= maxd; ++d) {
                int nc = d < int(src_by_dim.size()) ? int(src_by_dim[d].size()) : 0;
                int nr = d < int(dst_by_dim.size()) ? int(dst_by_dim[d].size()) : 0;
                Mat m(nr, nc, X.field.p);
                for (int j = 0; j < nc; ++j) {
                    int parent = out.pieces[s].parent_of[src_by_dim[d][j]];
                    int local = out.pieces[f].into[parent];
                    if (local < 0) throw invariant_error("piece inclusion missing a cell");
                    int r = int(std::lower_bound(dst_by_dim[d].begin(), dst_by_dim[d].end(), local) -
                                dst_by_dim[d].begin());
                    m.at(r, j) = 1;
                }
                D.face_maps[s][i].push_back(std::move(m));
            }
        }
    }
    out.diagram = finalize_diagram(std::move(D));
    return out;
}

JoinDiagram join_diagram(const FilteredComplex& K, const std::vector<std::vector<int>>& partition) {
    // checks: simplicial K, fixed vertex set, P a partition of the vertices
    std::vector<int> verts;
    for (const Cell& c : K.cells) {
        if (c.label.kind != CellLabel::Simplex) throw input_error("join diagram needs a simplicial complex");
        if (c.dim == 0) {
            if (c.birth != 0) throw input_error("vertex set must be constant across the grid");
            verts.push_back(c.label.verts[0]);
        }
    }
    std::sort(verts.begin(), verts.end());
    std::map<int, int> block_of;
    for (int b = 0; b < int(partition.size()); ++b)
        for (int v : partition[b]) {
            if (block_of.count(v)) throw input_error("partition blocks overlap");
            block_of[v] = b;
        }
    for (int v : verts)
        if (!block_of.count(v)) throw input_error("partition does not cover vertex " + std::to_string(v));

    int m = int(partition.size());
    // index complex: full simplex on the blocks
    std::vector<std::pair<std::vector<int>, double>> simp{{std::vector<int>{}, 0}};
    simp.clear();
    std::vector<int> all(m);
    for (int b = 0; b < m; ++b) all[b] = b;
    simp.push_back({all, K.grid[0]});
    Diagram D;
    D.index = build_simplicial(simp, K.field, K.grid, true);

    // fiber cells of sigma: K-simplices c with block support exactly sigma
    auto support = [&](const std::vector<int>& vs) {
        std::set<int> s;
        for (int v : vs) s.insert(block_of.at(v));
        return std::vector<int>(s.begin(), s.end());
    };
    JoinDiagram out;
    out.k_cell_of.resize(D.index.size());
    std::vector<std::map<int, int>> local_of(D.index.size());  // K-cell id -> fiber cell id
    D.fiber.resize(D.index.size());
    for (int s = 0; s < D.index.size(); ++s) {
        const std::vector<int>& sigma = D.index.cells[s].label.verts;
        struct FC {
            int kcell;
            int dim;
        };
        std::vector<FC> fcs;
        for (const Cell& kc : K.cells)
            if (support(kc.label.verts) == sigma)
                fcs.push_back({kc.id, kc.dim + 1 - int(sigma.size())});
        std::sort(fcs.begin(), fcs.end(), [](const FC& a, const FC& b) {
            if (a.dim != b.dim) return a.dim < b.dim;
            return a.kcell < b.kcell;
        });
        std::vector<Cell> cells;
        for (int i = 0; i < int(fcs.size()); ++i) {
            local_of[s][fcs[i].kcell] = i;
            out.k_cell_of[s].push_back(fcs[i].kcell);
        }
        for (int i = 0; i < int(fcs.size()); ++i) {
            const Cell& kc = K.cells[fcs[i].kcell];
            Cell c;
            c.id = i;
            c.dim = fcs[i].dim;
            c.birth = kc.birth;
            c.label.kind = CellLabel::Simplex;
            c.label.verts = kc.label.verts;
            // Leibniz boundary within blocks: remove one vertex from a block
            // component of size >= 2
            int offset = 0;
            for (int b : sigma) {
                std::vector<int> cb;
                for (int v : kc.label.verts)
                    if (block_of.at(v) == b) cb.push_back(v);
                if (int(cb.size()) >= 2) {
                    for (int i2 = 0; i2 < int(cb.size()); ++i2) {
                        std::vector<int> fverts = kc.label.verts;
                        fverts.erase(std::find(fverts.begin(), fverts.end(), cb[i2]));
                        // locate the face simplex in K
                        int kface = -1;
                        for (const Cell& kcc : K.cells)
                            if (kcc.label.verts == fverts) kface = kcc.id;
                        if (kface < 0) throw invariant_error("K not closed under faces");
                        int sgn = ((offset + i2) % 2 == 0) ? 1 : K.field.p - 1;
                        c.boundary.push_back({local_of[s].at(kface), sgn});
                    }
                }
                offset += int(cb.size()) - 1;
            }
            std::sort(c.boundary.begin(), c.boundary.end());
            cells.push_back(std::move(c));
        }
        D.fiber[s] = FilteredComplex(K.field, K.grid, std::move(cells));
    }
    // face maps: coordinate projections
    D.face_maps.resize(D.index.size());
    int maxd = 0;
    for (const auto& f : D.fiber) maxd = std::max(maxd, f.dim());
    for (int s = 0; s < D.index.size(); ++s) {
        const Cell& sc = D.index.cells[s];
        if (sc.dim == 0) continue;
        D.face_maps[s].resize(sc.dim + 1);
        const std::vector<int>& sigma = sc.label.verts;
        for (int i = 0; i <= sc.dim; ++i) {
            int dropped = sigma[i];
            std::vector<int> tau = sigma;
            tau.erase(tau.begin() + i);
            int f = -1;
            for (int k = 0; k < D.index.size(); ++k)
                if (D.index.cells[k].label.verts == tau) f = k;
            auto src_by_dim = cells_by_dim(D.fiber[s]);
            auto dst_by_dim = cells_by_dim(D.fiber[f]);
            for (int d = 0; d <= maxd; ++d) {
                int nc = d < int(src_by_dim.size()) ? int(src_by_dim[d].size()) : 0;
                int nr = d < int(dst_by_dim.size()) ? int(dst_by_dim[d].size()) : 0;
                Mat mm(nr, nc, K.field.p);
                for (int j = 0; j < nc; ++j) {
                    int kcell = out.k_cell_of[s][src_by_dim[d][j]];
                    const std::vector<int>& kverts = K.cells[kcell].label.verts;
                    std::vector<int> in_dropped, rest;
                    for (int v : kverts)
                        (block_of.at(v) == dropped ? in_dropped : rest).push_back(v);
                    if (int(in_dropped.size()) != 1) continue;  // dimension drops: zero
                    int ktarget = -1;
                    for (const Cell& kcc : K.cells)
                        if (kcc.label.verts == rest) ktarget = kcc.id;
                    int local = local_of[f].at(ktarget);
                    int r = int(std::lower_bound(dst_by_dim[d].begin(), dst_by_dim[d].end(), local) -
                                dst_by_dim[d].begin());
                    mm.at(r, j) = 1;
                }
                D.face_maps[s][i].push_back(std::move(mm));
            }
        }
    }
    out.diagram = finalize_diagram(std::move(D));
    return out;
}

Realization realization(const Diagram& D) {
    Realization out;
    const FilteredComplex& K = D.index;
    struct BC {
        int sigma, c, dim, birth;
    };
    std::vector<BC> bcs;
    for (int s = 0; s < K.size(); ++s)
        for (const Cell& c : D.fiber[s].cells)
            bcs.push_back({s, c.id, K.cells[s].dim + c.dim, std::max(K.cells[s].birth, c.birth)});
    std::sort(bcs.begin(), bcs.end(), [](const BC& a, const BC& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        if (a.sigma != b.sigma) return a.sigma < b.sigma;
        return a.c < b.c;
    });
    for (int i = 0; i < int(bcs.size()); ++i) {
        out.parts.push_back({bcs[i].sigma, bcs[i].c});
        out.id_of[{bcs[i].sigma, bcs[i].c}] = i;
    }
    FieldSpec field = K.field;
    std::vector<Cell> cells;
    for (int i = 0; i < int(bcs.size()); ++i) {
        const BC& bc = bcs[i];
        Cell cell;
        cell.id = i;
        cell.dim = bc.dim;
        cell.birth = bc.birth;
        cell.label.kind = CellLabel::Blowup;
        cell.label.sigma = bc.sigma;
        cell.label.fiber_cell = bc.c;
        std::map<int, int> acc;  // face blowup id -> coefficient
        const Cell& sc = K.cells[bc.sigma];
        const Cell& fc = D.fiber[bc.sigma].cells[bc.c];
        // Cech part: faces of sigma with alternating signs, cells of the image chain
        for (int ii = 0; ii <= sc.dim && sc.dim > 0; ++ii) {
            int f = -1;
            {
                std::vector<int> fv = sc.label.verts;
                fv.erase(fv.begin() + ii);
                for (int k = 0; k < K.size(); ++k)
                    if (K.cells[k].label.verts == fv) f = k;
            }
            auto src_by_dim = cells_by_dim(D.fiber[bc.sigma]);
            auto dst_by_dim = cells_by_dim(D.fiber[f]);
            const Mat& m = D.face_maps[bc.sigma][ii][fc.dim];
            int j = int(std::lower_bound(src_by_dim[fc.dim].begin(), src_by_dim[fc.dim].end(), bc.c) -
                        src_by_dim[fc.dim].begin());
            int sgn = (ii % 2 == 0) ? 1 : field.p - 1;
            for (int r = 0; r < m.rows(); ++r) {
                if (m.at(r, j) == 0) continue;
                int a = dst_by_dim[fc.dim][r];
                int target = out.id_of.at({f, a});
                acc[target] = field.add(acc[target], field.mul(sgn, m.at(r, j)));
            }
        }
        // fiber part: (-1)^{dim sigma} boundary of c
        int fsgn = (sc.dim % 2 == 0) ? 1 : field.p - 1;
        for (auto [face, coeff] : fc.boundary) {
            int target = out.id_of.at({bc.sigma, face});
            acc[target] = field.add(acc[target], field.mul(fsgn, coeff));
        }
        for (auto [tid, coeff] : acc)
            if (coeff != 0) cell.boundary.push_back({tid, coeff});
        cells.push_back(std::move(cell));
    }
    out.cx = FilteredComplex(field, K.grid, std::move(cells));
    return out;
}

int DoubleComplexFamily::dim(int t, int p, int q) const {
    if (p < 0 || q < 0 || p > maxp || q > maxq) return 0;
    return dims[t][p][q];
}

const Mat& DoubleComplexFamily::dv_at(int t, int p, int q) const { return dv[t][p][q]; }
const Mat& DoubleComplexFamily::dh_at(int t, int p, int q) const { return dh[t][p][q]; }

void DoubleComplexFamily::validate() const {
    int G = grid.size();
    for (int t = 0; t < G; ++t)
        for (int p = 0; p <= maxp; ++p)
            for (int q = 0; q <= maxq; ++q) {
                if (dim(t, p, q) == 0) continue;
                if (q >= 2 && dim(t, p, q - 1) > 0)
                    if (!(dv[t][p][q - 1] * dv[t][p][q]).is_zero()) throw invariant_error("dv∘dv != 0");
                if (p >= 2 && dim(t, p - 1, q) > 0)
                    if (!(dh[t][p - 1][q] * dh[t][p][q]).is_zero()) throw invariant_error("dh∘dh != 0");
                if (p >= 1 && q >= 1) {
                    Mat a = dv[t][p - 1][q] * dh[t][p][q];
                    Mat b = dh[t][p][q - 1] * dv[t][p][q];
                    if (!(a == (b.scaled(field.p - 1))))
                        throw invariant_error("dv/dh do not anticommute at (p,q)=(" + std::to_string(p) + "," +
                                              std::to_string(q) + ")");
                }
            }
    for (int t = 0; t + 1 < G; ++t)
        for (int p = 0; p <= maxp; ++p)
            for (int q = 0; q <= maxq; ++q) {
                if (q >= 1) {
                    Mat a = shift[t][p][q - 1] * dv[t][p][q];
                    Mat b = dv[t + 1][p][q] * shift[t][p][q];
                    if (!(a == b)) throw invariant_error("shift maps do not commute with dv");
                }
                if (p >= 1) {
                    Mat a = shift[t][p - 1][q] * dh[t][p][q];
                    Mat b = dh[t + 1][p][q] * shift[t][p][q];
                    if (!(a == b)) throw invariant_error("shift maps do not commute with dh");
                }
            }
}

DoubleComplexFamily double_complex(const Diagram& D) {
    const FilteredComplex& K = D.index;
    DoubleComplexFamily F;
    F.grid = K.grid;
    F.field = K.field;
    F.maxp = K.dim();
    F.maxq = D.max_fiber_dim();
    int G = F.grid.size();
    int P = F.maxp + 1, Q = F.maxq + 1;

    // block contents per t: for (p,q): per sigma of dim p: fiber cells of dim q born <= t,
    // with sigma itself born <= t
    std::vector<std::vector<int>> sigmas_of_p(P);
    for (const Cell& c : K.cells) sigmas_of_p[c.dim].push_back(c.id);

    F.dims.assign(G, std::vector<std::vector<int>>(P, std::vector<int>(Q, 0)));
    F.dv.assign(G, std::vector<std::vector<Mat>>(P, std::vector<Mat>(Q)));
    F.dh.assign(G, std::vector<std::vector<Mat>>(P, std::vector<Mat>(Q)));
    F.shift.assign(std::max(0, G - 1), std::vector<std::vector<Mat>>(P, std::vector<Mat>(Q)));
    F.segments.assign(G, std::vector<std::vector<std::vector<DoubleComplexFamily::Segment>>>(
                             P, std::vector<std::vector<DoubleComplexFamily::Segment>>(Q)));

    // cell lists per t,p,q and per sigma
    // entry key: (sigma, fiber cell id); ordered by (sigma, cell)
    std::vector<std::vector<std::vector<std::vector<std::pair<int, int>>>>> items(
        G, std::vector<std::vector<std::vector<std::pair<int, int>>>>(P,
                                                                      std::vector<std::vector<std::pair<int, int>>>(Q)));
    for (int t = 0; t < G; ++t)
        for (int p = 0; p < P; ++p)
            for (int q = 0; q < Q; ++q) {
                auto& list = items[t][p][q];
                for (int s : sigmas_of_p[p]) {
                    if (K.cells[s].birth > t) continue;
                    int off = int(list.size());
                    for (int c : D.fiber[s].cells_at(q, t)) list.push_back({s, c});
                    if (int(list.size()) > off) F.segments[t][p][q].push_back({s, off, int(list.size()) - off});
                }
                F.dims[t][p][q] = int(list.size());
            }

    auto pos_in = [&](int t, int p, int q, int sigma, int cell) {
        const auto& list = items[t][p][q];
        auto it = std::lower_bound(list.begin(), list.end(), std::make_pair(sigma, cell));
        if (it == list.end() || *it != std::make_pair(sigma, cell))
            throw invariant_error("double complex item lookup failed");
        return int(it - list.begin());
    };

    for (int t = 0; t < G; ++t)
        for (int p = 0; p < P; ++p)
            for (int q = 0; q < Q; ++q) {
                const auto& list = items[t][p][q];
                // dv: (-1)^p fiber boundary
                Mat dv(q > 0 ? F.dims[t][p][q - 1] : 0, F.dims[t][p][q], F.field.p);
                if (q > 0) {
                    int sgn = (p % 2 == 0) ? 1 : F.field.p - 1;
                    for (int j = 0; j < int(list.size()); ++j) {
                        auto [s, c] = list[j];
                        for (auto [face, coeff] : D.fiber[s].cells[c].boundary)
                            dv.at(pos_in(t, p, q - 1, s, face), j) = F.field.mul(sgn, coeff);
                    }
                }
                F.dv[t][p][q] = std::move(dv);
                // dh: Cech alternating sum of face maps
                Mat dh(p > 0 ? F.dims[t][p - 1][q] : 0, F.dims[t][p][q], F.field.p);
                if (p > 0) {
                    for (int j = 0; j < int(list.size()); ++j) {
                        auto [s, c] = list[j];
                        auto src_by_dim = cells_by_dim(D.fiber[s]);
                        int jj = int(std::lower_bound(src_by_dim[q].begin(), src_by_dim[q].end(), c) -
                                     src_by_dim[q].begin());
                        for (int i = 0; i <= p; ++i) {
                            int f = D.face_id(s, i);
                            if (K.cells[f].birth > t) throw invariant_error("nerve births not monotone");
                            const Mat& m = D.face_maps[s][i][q];
                            auto dst_by_dim = cells_by_dim(D.fiber[f]);
                            int sgn = (i % 2 == 0) ? 1 : F.field.p - 1;
                            for (int r = 0; r < m.rows(); ++r) {
                                if (m.at(r, jj) == 0) continue;
                                int a = dst_by_dim[q][r];
                                int pos = pos_in(t, p - 1, q, f, a);
                                dh.at(pos, j) = F.field.add(dh.at(pos, j), F.field.mul(sgn, m.at(r, jj)));
                            }
                        }
                    }
                }
                F.dh[t][p][q] = std::move(dh);
            }
    for (int t = 0; t + 1 < G; ++t)
        for (int p = 0; p < P; ++p)
            for (int q = 0; q < Q; ++q) {
                Mat s(F.dims[t + 1][p][q], F.dims[t][p][q], F.field.p);
                for (int j = 0; j < F.dims[t][p][q]; ++j) {
                    auto [sg, c] = items[t][p][q][j];
                    s.at(pos_in(t + 1, p, q, sg, c), j) = 1;
                }
                F.shift[t][p][q] = std::move(s);
            }
    F.validate();
    return F;
}

TotalCheckReport total_complex_check(const Diagram& D) {
    TotalCheckReport rep;
    Realization R = realization(D);
    DoubleComplexFamily F = double_complex(D);
    const FilteredComplex& K = D.index;
    int G = K.grid.size();
    // per t: map blowup cell -> (p, q, position) and compare boundaries
    for (int t = 0; t < G; ++t) {
        // rebuild item positions the same way double_complex does
        std::vector<std::vector<std::vector<std::pair<int, int>>>> items(
            F.maxp + 1, std::vector<std::vector<std::pair<int, int>>>(F.maxq + 1));
        for (int p = 0; p <= F.maxp; ++p)
            for (int q = 0; q <= F.maxq; ++q)
                for (const Cell& sc : K.cells) {
                    if (sc.dim != p || sc.birth > t) continue;
                    for (int c : D.fiber[sc.id].cells_at(q, t)) items[p][q].push_back({sc.id, c});
                }
        auto find_pos = [&](int p, int q, int sigma, int cell) {
            const auto& l = items[p][q];
            auto it = std::lower_bound(l.begin(), l.end(), std::make_pair(sigma, cell));
            return int(it - l.begin());
        };
        for (const Cell& bc : R.cx.cells) {
            if (bc.birth > t) continue;
            auto [sigma, c] = R.parts[bc.id];
            int p = K.cells[sigma].dim, q = D.fiber[sigma].cells[c].dim;
            int j = find_pos(p, q, sigma, c);
            // realization boundary, pushed through psi
            std::map<std::tuple<int, int, int>, int> lhs;  // (p', q', pos) -> coeff
            for (auto [face, coeff] : bc.boundary) {
                auto [fs, fc] = R.parts[face];
                int fp = K.cells[fs].dim, fq = D.fiber[fs].cells[fc].dim;
                if (fp > p) {
                    rep.detail = "boundary raises the column filtration";
                    return rep;
                }
                lhs[{fp, fq, find_pos(fp, fq, fs, fc)}] = coeff;
            }
            // dv + dh applied to the unit vector at (p,q,j)
            std::map<std::tuple<int, int, int>, int> rhs;
            if (q > 0) {
                const Mat& dv = F.dv[t][p][q];
                for (int r = 0; r < dv.rows(); ++r)
                    if (dv.at(r, j) != 0) rhs[{p, q - 1, r}] = dv.at(r, j);
            }
            if (p > 0) {
                const Mat& dh = F.dh[t][p][q];
                for (int r = 0; r < dh.rows(); ++r)
                    if (dh.at(r, j) != 0) {
                        auto key = std::make_tuple(p - 1, q, r);
                        rhs[key] = F.field.add(rhs.count(key) ? rhs[key] : 0, dh.at(r, j));
                    }
            }
            if (lhs != rhs) {
                rep.detail = "delta^Delta != dv + dh at grid index " + std::to_string(t) + ", cell (sigma=" +
                             std::to_string(sigma) + ", c=" + std::to_string(c) + ")";
                return rep;
            }
        }
        ++rep.checked_indices;
    }
    rep.ok = true;
    return rep;
}

// --- pi0 / multinerve ---------------------------------------------------------

namespace {

struct UnionFind {
    std::vector<int> up;
    explicit UnionFind(int n) : up(n) {
        for (int i = 0; i < n; ++i) up[i] = i;
    }
    int find(int x) {
        while (up[x] != x) x = up[x] = up[up[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) up[std::max(a, b)] = std::min(a, b);
    }
};

// component index per cell at one grid index; components numbered by their
// minimal vertex id
std::pair<std::vector<int>, int> components_at(const FilteredComplex& cx, int t) {
    UnionFind uf(cx.size());
    for (const Cell& c : cx.cells) {
        if (c.birth > t) continue;
        if (c.dim == 1)
            for (auto [face, coeff] : c.boundary) {
                (void)coeff;
                uf.unite(c.boundary.front().first, face);
            }
    }
    // root of a cell: root of its first vertex (descend through boundaries)
    std::vector<int> comp(cx.size(), -1);
    std::vector<int> roots;
    for (const Cell& c : cx.cells) {
        if (c.birth > t || c.dim != 0) continue;
        int r = uf.find(c.id);
        if (comp[r] < 0) {
            comp[r] = int(roots.size());
            roots.push_back(r);
        }
    }
    std::vector<int> out(cx.size(), -1);
    for (const Cell& c : cx.cells) {
        if (c.birth > t) continue;
        int v = c.id;
        while (cx.cells[v].dim > 0) v = cx.cells[v].boundary.front().first;
        out[c.id] = comp[uf.find(v)];
    }
    return {out, int(roots.size())};
}

} // namespace

Pi0Diagram pi0_diagram(const Diagram& D) {
    Pi0Diagram P;
    P.D = &D;
    int n = D.index.size();
    int G = D.index.grid.size();
    P.comp_of.resize(n);
    P.ncomp.assign(n, std::vector<int>(G, 0));
    P.merge.resize(n);
    P.face_comp.resize(n);
    for (int s = 0; s < n; ++s) {
        P.comp_of[s].resize(G);
        for (int t = 0; t < G; ++t) {
            auto [comp, k] = components_at(D.fiber[s], t);
            P.comp_of[s][t] = comp;
            P.ncomp[s][t] = k;
        }
        P.merge[s].resize(std::max(0, G - 1));
        for (int t = 0; t + 1 < G; ++t) {
            P.merge[s][t].assign(P.ncomp[s][t], -1);
            for (int c = 0; c < D.fiber[s].size(); ++c)
                if (P.comp_of[s][t][c] >= 0) P.merge[s][t][P.comp_of[s][t][c]] = P.comp_of[s][t + 1][c];
        }
    }
    for (int s = 0; s < n; ++s) {
        int sd = D.index.cells[s].dim;
        P.face_comp[s].resize(sd == 0 ? 0 : sd + 1);
        for (int i = 0; i < int(P.face_comp[s].size()); ++i) {
            int f = D.face_id(s, i);
            P.face_comp[s][i].resize(G);
            auto src_by_dim = cells_by_dim(D.fiber[s]);
            auto dst_by_dim = cells_by_dim(D.fiber[f]);
            const Mat& m0 = D.face_maps[s][i][0];
            for (int t = 0; t < G; ++t) {
                P.face_comp[s][i][t].assign(P.ncomp[s][t], -1);
                if (src_by_dim.empty()) continue;
                for (int j = 0; j < int(src_by_dim[0].size()); ++j) {
                    int v = src_by_dim[0][j];
                    if (D.fiber[s].cells[v].birth > t) continue;
                    int img = -1;
                    for (int r = 0; r < m0.rows(); ++r)
                        if (m0.at(r, j) != 0) img = dst_by_dim[0][r];
                    if (img < 0) throw invariant_error("pi0: face map kills a vertex");
                    P.face_comp[s][i][t][P.comp_of[s][t][v]] = P.comp_of[f][t][img];
                }
            }
        }
    }
    return P;
}

ChainFamily multinerve(const Diagram& D) { return multinerve(D, pi0_diagram(D)); }

ChainFamily multinerve(const Diagram& D, const Pi0Diagram& P) {
    const FilteredComplex& K = D.index;
    int G = K.grid.size();
    int DD = K.dim() + 1;
    ChainFamily fam;
    fam.grid = K.grid;
    fam.field = K.field;
    fam.dims.assign(G, std::vector<int>(DD, 0));
    fam.boundary.assign(G, std::vector<Mat>(DD));
    fam.transition.assign(std::max(0, G - 1), std::vector<Mat>(DD));
    // cells per t per degree: (sigma, comp)
    std::vector<std::vector<std::vector<std::pair<int, int>>>> items(G,
                                                                     std::vector<std::vector<std::pair<int, int>>>(DD));
    for (int t = 0; t < G; ++t)
        for (int d = 0; d < DD; ++d) {
            for (const Cell& sc : K.cells) {
                if (sc.dim != d || sc.birth > t) continue;
                for (int k = 0; k < P.ncomp[sc.id][t]; ++k) items[t][d].push_back({sc.id, k});
            }
            fam.dims[t][d] = int(items[t][d].size());
        }
    auto pos_in = [&](int t, int d, int sigma, int comp) {
        const auto& l = items[t][d];
        auto it = std::lower_bound(l.begin(), l.end(), std::make_pair(sigma, comp));
        if (it == l.end() || *it != std::make_pair(sigma, comp)) throw invariant_error("multinerve lookup failed");
        return int(it - l.begin());
    };
    for (int t = 0; t < G; ++t)
        for (int d = 0; d < DD; ++d) {
            Mat b(d > 0 ? fam.dims[t][d - 1] : 0, fam.dims[t][d], fam.field.p);
            if (d > 0)
                for (int j = 0; j < fam.dims[t][d]; ++j) {
                    auto [s, k] = items[t][d][j];
                    for (int i = 0; i <= d; ++i) {
                        int f = D.face_id(s, i);
                        int kk = P.face_comp[s][i][t][k];
                        if (kk < 0) throw invariant_error("multinerve: missing face component");
                        int sgn = (i % 2 == 0) ? 1 : fam.field.p - 1;
                        int r = pos_in(t, d - 1, f, kk);
                        b.at(r, j) = fam.field.add(b.at(r, j), sgn);
                    }
                }
            fam.boundary[t][d] = std::move(b);
        }
    for (int t = 0; t + 1 < G; ++t)
        for (int d = 0; d < DD; ++d) {
            Mat s(fam.dims[t + 1][d], fam.dims[t][d], fam.field.p);
            for (int j = 0; j < fam.dims[t][d]; ++j) {
                auto [sg, k] = items[t][d][j];
                s.at(pos_in(t + 1, d, sg, P.merge[sg][t][k]), j) = 1;
            }
            fam.transition[t][d] = std::move(s);
        }
    fam.validate();
    return fam;
}

} // namespace mvss
