#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvss {

struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct hypothesis_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_prime(int n);

// Prime field context. All matrix arithmetic in the library is exact mod p.
struct FieldSpec {
    int p = 2;

    FieldSpec() = default;
    explicit FieldSpec(int characteristic) : p(characteristic) {
        if (p < 2 || !is_prime(p)) throw input_error("field characteristic must be prime, got " + std::to_string(p));
    }

    int add(int a, int b) const { return (a + b) % p; }
    int sub(int a, int b) const { return ((a - b) % p + p) % p; }
    int mul(int a, int b) const { return int((int64_t(a) * b) % p); }
    int neg(int a) const { return (p - a % p) % p; }
    int norm(int64_t a) const { return int(((a % p) + p) % p); }
    int inv(int a) const;

    bool operator==(const FieldSpec& o) const { return p == o.p; }
};

// Dense matrix over F_p. Sizes in this library are small (a few hundred);
// everything is exact Gaussian elimination.
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols, int p) : rows_(rows), cols_(cols), p_(p), a_(size_t(rows) * cols, 0) {}

    static Mat zero(int rows, int cols, int p) { return Mat(rows, cols, p); }
    static Mat identity(int n, int p);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int p() const { return p_; }

    int& at(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    int at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }
    void set(int i, int j, int64_t v) { a_[size_t(i) * cols_ + j] = int(((v % p_) + p_) % p_); }

    bool is_zero() const;
    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat scaled(int c) const;

    Mat transpose() const;
    Mat col(int j) const;
    Mat cols_subset(const std::vector<int>& idx) const;
    Mat rows_subset(const std::vector<int>& idx) const;
    static Mat hstack(const Mat& a, const Mat& b);
    static Mat vstack(const Mat& a, const Mat& b);

    int rank() const;
    // Basis of the kernel, as columns.
    Mat nullspace() const;
    // Any solution X of (*this) X = B, or nullopt if inconsistent.
    std::optional<Mat> solve(const Mat& B) const;
    // Inverse of a square invertible matrix; throws otherwise.
    Mat inverse() const;
    // Indices of a maximal independent subset of columns.
    std::vector<int> column_basis() const;

    std::string str() const;

  private:
    int rows_ = 0, cols_ = 0, p_ = 2;
    std::vector<int> a_;
};

// Incremental Gaussian eliminator: maintains a row-echelon basis of the
// span of the vectors fed to it. Vectors are length-n columns.
class Elim {
  public:
    Elim(int n, int p) : n_(n), p_(p), field_(p) {}

    // Returns true if v was independent of the current span (rank grew).
    bool add(std::vector<int> v);
    // Reduces v against the basis; returns the residual. If coeffs is
    // non-null it receives the coefficients of the eliminated part in terms
    // of the vectors previously *added* (only those that grew the rank).
    std::vector<int> reduce(std::vector<int> v, std::vector<int>* coeffs = nullptr) const;
    bool contains(const std::vector<int>& v) const;
    int rank() const { return int(rows_.size()); }

  private:
    int n_, p_;
    FieldSpec field_;
    std::vector<std::vector<int>> rows_;  // echelon vectors
    std::vector<int> pivot_;              // pivot position per row
    std::vector<std::vector<int>> combo_; // expression of each echelon vector in added vectors
    int added_ = 0;
};

// rank of [A | B] minus rank of A  (dimension B adds on top of A).
int rank_gain(const Mat& A, const Mat& B);

// Columns of `candidates` that extend colspace(base) to colspace([base|candidates]).
std::vector<int> extend_basis(const Mat& base, const Mat& candidates);

// Coordinates of x in the subquotient span(reps) modulo span(denom):
// solves [denom | reps] c = x and returns the reps-part. Throws if x is not
// in span(denom)+span(reps).
std::vector<int> subquotient_coords(const Mat& denom, const Mat& reps, const Mat& x_col);

} // namespace mvss
