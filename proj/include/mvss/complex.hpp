#pragma once

#include "mvss/field.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mvss {

// Finite strictly increasing grid of filtration values. Births are stored as
// indices into this grid; real values only enter through shifts and output.
struct FiltrationGrid {
    std::vector<double> values;

    FiltrationGrid() = default;
    explicit FiltrationGrid(std::vector<double> v);

    int size() const { return int(values.size()); }
    double operator[](int i) const { return values.at(i); }
    // Index of the given value; throws input_error if absent.
    int index_of(double v) const;
    // Smallest index whose value is >= v (tolerance 1e-9). Values past the
    // last grid point clamp to the last index: tame modules are constant there.
    int snap_up(double v) const;
    // Index reached from index t by shifting eps upward.
    int shift_index(int t, double eps) const { return snap_up(values.at(t) + eps); }
    bool operator==(const FiltrationGrid& o) const { return values == o.values; }
};

struct CellLabel {
    enum Kind { None, Simplex, Cube, Blowup, Component } kind = None;
    std::vector<int> verts;                        // Simplex: sorted vertex ids
    std::vector<std::array<double, 2>> intervals;  // Cube: per-axis [a, b], b-a in {0, cell side}
    int sigma = -1;                                // Blowup: index-complex cell id
    int fiber_cell = -1;                           // Blowup: cell id in the fiber / Component: class rep
};

struct Cell {
    int id = 0;
    int dim = 0;
    int birth = 0;                                // grid index
    std::vector<std::pair<int, int>> boundary;    // (face id, coefficient in F_p)
    CellLabel label;
};

// A tame filtered regular cell complex with exact boundary data over F_p.
// Immutable after construction; all queries are const.
class FilteredComplex {
  public:
    FieldSpec field;
    FiltrationGrid grid;
    std::vector<Cell> cells;

    FilteredComplex() = default;
    FilteredComplex(FieldSpec f, FiltrationGrid g, std::vector<Cell> cs);

    int size() const { return int(cells.size()); }
    int dim() const;
    int max_birth() const;

    // ids of dim-cells with birth <= t, sorted ascending
    std::vector<int> cells_at(int dim, int t) const;
    // columns: dim-cells born <= t, rows: (dim-1)-cells born <= t
    Mat boundary_matrix(int dim, int t) const;
    // boundary matrix with explicit row/col cell id lists
    Mat boundary_matrix(int dim, int t, std::vector<int>& row_ids, std::vector<int>& col_ids) const;

    // ∂∘∂ = 0, monotone births, sorted faces-before-cofaces, clean coefficients.
    void validate() const;

    // Transitive closure of nonzero incidence, as a relation "tau <= sigma".
    // reachable[c] = sorted ids of all cells reachable by descending incidence,
    // including c itself (the closure of c).
    std::vector<std::vector<int>> incidence_closure() const;
    std::vector<int> cell_closure(int id) const;

    // vertices (0-cells) in the closure of a cell
    std::vector<int> closure_vertices(int id) const;

    bool operator==(const FilteredComplex& o) const;
};

// Face-closed set of cells of a parent complex.
struct SubComplex {
    const FilteredComplex* parent = nullptr;
    std::vector<int> members;  // sorted cell ids

    void validate() const;
};

// Smallest face-closed superset of the seed cells.
SubComplex closure(const FilteredComplex& cx, const std::vector<int>& seeds);

// Extraction of a face-closed cell set as a standalone complex. parent_of maps
// new ids to parent ids; into maps parent ids to new ids (-1 if absent).
struct Restriction {
    FilteredComplex cx;
    std::vector<int> parent_of;
    std::vector<int> into;
};
Restriction restrict_complex(const FilteredComplex& cx, const std::vector<int>& members);

// --- Builders ------------------------------------------------------------

// Simplices given as (sorted duplicate-free vertex list, birth value on grid).
// Missing faces are auto-completed with birth = min over listed cofaces when
// autocomplete is set; otherwise they are an error.
FilteredComplex build_simplicial(const std::vector<std::pair<std::vector<int>, double>>& simplices,
                                 FieldSpec field, FiltrationGrid grid, bool autocomplete = true);

// Top cells as products of degenerate/unit integer-anchored intervals
// ([a,a] or [a,a+s] per axis with a fixed side s, default 1). Faces are
// auto-completed with birth = min over containing listed cells.
FilteredComplex build_cubical(const std::vector<std::pair<std::vector<std::array<double, 2>>, double>>& top_cells,
                              FieldSpec field, FiltrationGrid grid);

// Vietoris-Rips complex: simplex birth = max pairwise distance among its
// vertices, snapped up to the grid; vertices born at grid minimum.
FilteredComplex build_vietoris_rips(const std::vector<std::vector<double>>& points, int max_dim,
                                    FiltrationGrid grid, FieldSpec field = FieldSpec(2));

// grid consisting of 0 and all pairwise distances of the given clouds
FiltrationGrid vr_grid(const std::vector<std::vector<double>>& a,
                       const std::vector<std::vector<double>>& b = {});

double euclidean(const std::vector<double>& x, const std::vector<double>& y);

} // namespace mvss
