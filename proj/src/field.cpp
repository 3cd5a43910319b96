#include "mvss/field.hpp"

#include <sstream>

namespace mvss {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; int64_t(d) * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int FieldSpec::inv(int a) const {
    a = ((a % p) + p) % p;
    if (a == 0) throw invariant_error("division by zero in F_p");
    // extended Euclid
    int t = 0, newt = 1, r = p, newr = a;
    while (newr != 0) {
        int q = r / newr;
        int tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    return ((t % p) + p) % p;
}

Mat Mat::identity(int n, int p) {
    Mat m(n, n, p);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool Mat::is_zero() const {
    for (int v : a_)
        if (v != 0) return false;
    return true;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_ || p_ != o.p_) throw invariant_error("matrix product shape mismatch");
    Mat r(rows_, o.cols_, p_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            int v = at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < o.cols_; ++j) {
                int64_t acc = r.at(i, j) + int64_t(v) * o.at(k, j);
                r.at(i, j) = int(acc % p_);
            }
        }
    return r;
}

Mat Mat::operator+(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw invariant_error("matrix sum shape mismatch");
    Mat r(rows_, cols_, p_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = int((a_[i] + o.a_[i]) % p_);
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw invariant_error("matrix diff shape mismatch");
    Mat r(rows_, cols_, p_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = int(((a_[i] - o.a_[i]) % p_ + p_) % p_);
    return r;
}

Mat Mat::scaled(int c) const {
    Mat r(rows_, cols_, p_);
    c = ((c % p_) + p_) % p_;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = int((int64_t(a_[i]) * c) % p_);
    return r;
}

Mat Mat::transpose() const {
    Mat r(cols_, rows_, p_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

Mat Mat::col(int j) const {
    Mat r(rows_, 1, p_);
    for (int i = 0; i < rows_; ++i) r.at(i, 0) = at(i, j);
    return r;
}

Mat Mat::cols_subset(const std::vector<int>& idx) const {
    Mat r(rows_, int(idx.size()), p_);
    for (int j = 0; j < int(idx.size()); ++j)
        for (int i = 0; i < rows_; ++i) r.at(i, j) = at(i, idx[j]);
    return r;
}

Mat Mat::rows_subset(const std::vector<int>& idx) const {
    Mat r(int(idx.size()), cols_, p_);
    for (int i = 0; i < int(idx.size()); ++i)
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(idx[i], j);
    return r;
}

Mat Mat::hstack(const Mat& a, const Mat& b) {
    if (a.rows_ != b.rows_ || a.p_ != b.p_) throw invariant_error("hstack shape mismatch");
    Mat r(a.rows_, a.cols_ + b.cols_, a.p_);
    for (int i = 0; i < a.rows_; ++i) {
        for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
    }
    return r;
}

Mat Mat::vstack(const Mat& a, const Mat& b) {
    if (a.cols_ != b.cols_ || a.p_ != b.p_) throw invariant_error("vstack shape mismatch");
    Mat r(a.rows_ + b.rows_, a.cols_, a.p_);
    for (int i = 0; i < a.rows_; ++i)
        for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows_; ++i)
        for (int j = 0; j < a.cols_; ++j) r.at(a.rows_ + i, j) = b.at(i, j);
    return r;
}

namespace {

// Row echelon form in place; returns pivot column per used row.
std::vector<int> echelonize(Mat& m) {
    FieldSpec f(m.p() == 2 ? 2 : m.p());
    f.p = m.p();
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int piv = -1;
        for (int i = row; i < m.rows(); ++i)
            if (m.at(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(row, j));
        int ipiv = f.inv(m.at(row, col));
        for (int j = 0; j < m.cols(); ++j) m.at(row, j) = f.mul(m.at(row, j), ipiv);
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row) continue;
            int v = m.at(i, col);
            if (v == 0) continue;
            for (int j = 0; j < m.cols(); ++j) m.at(i, j) = f.sub(m.at(i, j), f.mul(v, m.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace

int Mat::rank() const {
    Mat m = *this;
    return int(echelonize(m).size());
}

Mat Mat::nullspace() const {
    Mat m = *this;
    std::vector<int> pivots = echelonize(m);
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int j = 0; j < cols_; ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    Mat basis(cols_, int(free_cols.size()), p_);
    FieldSpec f;
    f.p = p_;
    for (int k = 0; k < int(free_cols.size()); ++k) {
        int fc = free_cols[k];
        basis.at(fc, k) = 1;
        for (int r = 0; r < int(pivots.size()); ++r) basis.at(pivots[r], k) = f.neg(m.at(r, fc));
    }
    return basis;
}

std::optional<Mat> Mat::solve(const Mat& B) const {
    if (B.rows_ != rows_) throw invariant_error("solve shape mismatch");
    Mat aug = hstack(*this, B);
    std::vector<int> pivots = echelonize(aug);
    for (int c : pivots)
        if (c >= cols_) return std::nullopt;
    Mat X(cols_, B.cols_, p_);
    for (int r = 0; r < int(pivots.size()); ++r)
        for (int j = 0; j < B.cols_; ++j) X.at(pivots[r], j) = aug.at(r, cols_ + j);
    return X;
}

Mat Mat::inverse() const {
    if (rows_ != cols_) throw invariant_error("inverse of non-square matrix");
    auto X = solve(identity(rows_, p_));
    if (!X || ((*this) * *X) != identity(rows_, p_)) throw invariant_error("matrix not invertible");
    return *X;
}

std::vector<int> Mat::column_basis() const {
    Mat m = *this;
    return echelonize(m);
}

std::string Mat::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) os << at(i, j) << (j + 1 == cols_ ? "" : " ");
        os << "\n";
    }
    return os.str();
}

bool Elim::add(std::vector<int> v) {
    std::vector<int> coeffs;
    std::vector<int> res = reduce(std::move(v), &coeffs);
    ++added_;
    int piv = -1;
    for (int i = 0; i < n_; ++i)
        if (res[i] != 0) {
            piv = i;
            break;
        }
    if (piv < 0) return false;
    int ip = field_.inv(res[piv]);
    for (int& x : res) x = field_.mul(x, ip);
    // record combo: res = (added vector - sum coeffs * previous) / res[piv]
    std::vector<int> combo(added_, 0);
    combo[added_ - 1] = ip;
    for (size_t r = 0; r < rows_.size(); ++r) {
        int c = field_.mul(coeffs[r], ip);
        for (size_t k = 0; k < combo_[r].size(); ++k)
            combo[k] = field_.sub(combo[k], field_.mul(c, combo_[r][k]));
    }
    rows_.push_back(std::move(res));
    pivot_.push_back(piv);
    combo_.push_back(std::move(combo));
    return true;
}

std::vector<int> Elim::reduce(std::vector<int> v, std::vector<int>* coeffs) const {
    if (int(v.size()) != n_) throw invariant_error("Elim::reduce length mismatch");
    if (coeffs) coeffs->assign(rows_.size(), 0);
    for (size_t r = 0; r < rows_.size(); ++r) {
        int c = v[pivot_[r]];
        if (c == 0) continue;
        if (coeffs) (*coeffs)[r] = c;
        for (int i = 0; i < n_; ++i) v[i] = field_.sub(v[i], field_.mul(c, rows_[r][i]));
    }
    return v;
}

bool Elim::contains(const std::vector<int>& v) const {
    std::vector<int> res = reduce(v);
    for (int x : res)
        if (x != 0) return false;
    return true;
}

int rank_gain(const Mat& A, const Mat& B) {
    Elim e(A.rows(), A.p());
    for (int j = 0; j < A.cols(); ++j) {
        std::vector<int> v(A.rows());
        for (int i = 0; i < A.rows(); ++i) v[i] = A.at(i, j);
        e.add(std::move(v));
    }
    int base = e.rank();
    for (int j = 0; j < B.cols(); ++j) {
        std::vector<int> v(B.rows());
        for (int i = 0; i < B.rows(); ++i) v[i] = B.at(i, j);
        e.add(std::move(v));
    }
    return e.rank() - base;
}

std::vector<int> extend_basis(const Mat& base, const Mat& candidates) {
    Elim e(base.rows(), base.p());
    for (int j = 0; j < base.cols(); ++j) {
        std::vector<int> v(base.rows());
        for (int i = 0; i < base.rows(); ++i) v[i] = base.at(i, j);
        e.add(std::move(v));
    }
    std::vector<int> picked;
    for (int j = 0; j < candidates.cols(); ++j) {
        std::vector<int> v(candidates.rows());
        for (int i = 0; i < candidates.rows(); ++i) v[i] = candidates.at(i, j);
        if (e.add(std::move(v))) picked.push_back(j);
    }
    return picked;
}

std::vector<int> subquotient_coords(const Mat& denom, const Mat& reps, const Mat& x_col) {
    Mat sys = Mat::hstack(denom, reps);
    auto sol = sys.solve(x_col);
    if (!sol) throw invariant_error("subquotient_coords: vector not in span");
    std::vector<int> out(reps.cols());
    for (int i = 0; i < reps.cols(); ++i) out[i] = sol->at(denom.cols() + i, 0);
    return out;
}

} // namespace mvss
