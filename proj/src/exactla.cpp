#include "tsf/exactla.hpp"

#include <algorithm>

namespace tsf {

std::string to_string(const Q& q) { return q.get_str(); }

Q parse_rational(const std::string& s) {
    Q q;
    if (s.empty() || q.set_str(s, 10) != 0) throw DomainError("bad rational: '" + s + "'");
    if (q.get_den() == 0) throw DomainError("zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
}

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Q& x) { return sgn(x) == 0; });
}

Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a);
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a);
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

Vec operator*(const Q& s, const Vec& v) {
    Vec r(v);
    for (auto& x : r) x *= s;
    return r;
}

Matrix::Matrix(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols) {}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, int cols) {
    Matrix m(static_cast<int>(rows.size()), cols);
    for (int i = 0; i < m.r_; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols, int rows) {
    Matrix m(rows, static_cast<int>(cols.size()));
    for (int j = 0; j < m.c_; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
}

Vec Matrix::row(int i) const {
    return Vec(a_.begin() + static_cast<long>(i) * c_, a_.begin() + static_cast<long>(i + 1) * c_);
}

Vec Matrix::col(int j) const {
    Vec v(r_);
    for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
}

Matrix Matrix::transpose() const {
    Matrix t(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Q& x) { return sgn(x) == 0; });
}

Vec Matrix::apply(const Vec& v) const {
    if (static_cast<int>(v.size()) != c_) throw DomainError("matrix-vector size mismatch");
    Vec r(r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) {
            const Q& x = (*this)(i, j);
            if (sgn(x) != 0 && sgn(v[j]) != 0) r[i] += x * v[j];
        }
    return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw DomainError("matrix product size mismatch");
    Matrix m(a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
        for (int k = 0; k < a.c_; ++k) {
            const Q& x = a(i, k);
            if (sgn(x) == 0) continue;
            for (int j = 0; j < b.c_; ++j)
                if (sgn(b(k, j)) != 0) m(i, j) += x * b(k, j);
        }
    return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw DomainError("matrix sum size mismatch");
    Matrix m(a);
    for (size_t i = 0; i < m.a_.size(); ++i) m.a_[i] += b.a_[i];
    return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw DomainError("matrix difference size mismatch");
    Matrix m(a);
    for (size_t i = 0; i < m.a_.size(); ++i) m.a_[i] -= b.a_[i];
    return m;
}

Matrix operator*(const Q& s, const Matrix& m) {
    Matrix r(m);
    for (auto& x : r.a_) x *= s;
    return r;
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
}

Echelon row_reduce(std::vector<Vec> rows, int cols) {
    Echelon e;
    int r = 0;
    const int nrows = static_cast<int>(rows.size());
    for (int c = 0; c < cols && r < nrows; ++c) {
        int p = -1;
        for (int i = r; i < nrows; ++i)
            if (sgn(rows[i][c]) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(rows[r], rows[p]);
        Q inv = 1 / rows[r][c];
        for (int j = c; j < cols; ++j) rows[r][j] *= inv;
        for (int i = 0; i < nrows; ++i) {
            if (i == r || sgn(rows[i][c]) == 0) continue;
            Q f = rows[i][c];
            for (int j = c; j < cols; ++j)
                if (sgn(rows[r][j]) != 0) rows[i][j] -= f * rows[r][j];
        }
        e.pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    e.rows = std::move(rows);
    return e;
}

int rank(const Matrix& m) {
    std::vector<Vec> rows;
    for (int i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    return static_cast<int>(row_reduce(std::move(rows), m.cols()).pivots.size());
}

Q determinant(const Matrix& m) {
    if (m.rows() != m.cols()) throw DomainError("determinant of a non-square matrix");
    const int n = m.rows();
    Matrix a = m;
    Q det = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && sgn(a(p, c)) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (sgn(a(i, c)) == 0) continue;
            Q f = a(i, c) / a(c, c);
            for (int j = c; j < n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    return det;
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw DomainError("inverse of a non-square matrix");
    const int n = m.rows();
    std::vector<Vec> rows;
    for (int i = 0; i < n; ++i) {
        Vec r = m.row(i);
        r.resize(2 * n);
        r[n + i] = 1;
        rows.push_back(std::move(r));
    }
    auto e = row_reduce(std::move(rows), 2 * n);
    if (static_cast<int>(e.pivots.size()) < n || e.pivots[n - 1] >= n) return std::nullopt;
    Matrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = e.rows[i][n + j];
    return inv;
}

Subspace Subspace::span(int ambient_dim, const std::vector<Vec>& gens) {
    for (const auto& g : gens)
        if (static_cast<int>(g.size()) != ambient_dim) throw DomainError("generator size mismatch");
    Subspace s(ambient_dim);
    auto e = row_reduce(gens, ambient_dim);
    s.basis_ = std::move(e.rows);
    s.pivots_ = std::move(e.pivots);
    return s;
}

Subspace Subspace::full(int ambient_dim) {
    std::vector<Vec> gens;
    for (int i = 0; i < ambient_dim; ++i) {
        Vec v(ambient_dim);
        v[i] = 1;
        gens.push_back(v);
    }
    return span(ambient_dim, gens);
}

Vec Subspace::reduce(const Vec& v) const {
    if (static_cast<int>(v.size()) != n_) throw DomainError("vector size mismatch");
    Vec r(v);
    for (size_t i = 0; i < basis_.size(); ++i) {
        Q f = r[pivots_[i]];
        if (sgn(f) == 0) continue;
        for (int j = 0; j < n_; ++j)
            if (sgn(basis_[i][j]) != 0) r[j] -= f * basis_[i][j];
    }
    return r;
}

bool Subspace::contains(const Vec& v) const { return is_zero(reduce(v)); }

std::optional<Vec> Subspace::coordinates(const Vec& v) const {
    if (!contains(v)) return std::nullopt;
    Vec c(basis_.size());
    for (size_t i = 0; i < basis_.size(); ++i) c[i] = v[pivots_[i]];
    return c;
}

bool Subspace::contains(const Subspace& other) const {
    for (const auto& b : other.basis_)
        if (!contains(b)) return false;
    return true;
}

std::vector<Vec> Subspace::annihilator() const {
    return kernel(Matrix::from_rows(basis_, n_)).basis();
}

bool operator==(const Subspace& a, const Subspace& b) {
    return a.n_ == b.n_ && a.basis_ == b.basis_;
}

Subspace kernel(const Matrix& m) {
    std::vector<Vec> rows;
    for (int i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    auto e = row_reduce(std::move(rows), m.cols());
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : e.pivots) is_pivot[p] = true;
    std::vector<Vec> gens;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vec v(m.cols());
        v[f] = 1;
        for (size_t i = 0; i < e.rows.size(); ++i) v[e.pivots[i]] = -e.rows[i][f];
        gens.push_back(v);
    }
    return Subspace::span(m.cols(), gens);
}

Subspace image(const Matrix& m) {
    std::vector<Vec> cols;
    for (int j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
    return Subspace::span(m.rows(), cols);
}

Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw DomainError("ambient mismatch");
    auto rows = a.annihilator();
    auto rb = b.annihilator();
    rows.insert(rows.end(), rb.begin(), rb.end());
    if (rows.empty()) return Subspace::full(a.ambient_dim());
    return kernel(Matrix::from_rows(rows, a.ambient_dim()));
}

Subspace sum(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw DomainError("ambient mismatch");
    auto gens = a.basis();
    gens.insert(gens.end(), b.basis().begin(), b.basis().end());
    return Subspace::span(a.ambient_dim(), gens);
}

Subspace preimage(const Matrix& m, const Subspace& s) {
    if (m.rows() != s.ambient_dim()) throw DomainError("preimage size mismatch");
    auto ann = s.annihilator();
    if (ann.empty()) return Subspace::full(m.cols());
    return kernel(Matrix::from_rows(ann, m.rows()) * m);
}

Equality subspace_equal(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw DomainError("ambient mismatch");
    Equality e;
    if (a == b) return e;
    e.equal = false;
    for (const auto& v : a.basis())
        if (!b.contains(v)) {
            e.witness = v;
            return e;
        }
    for (const auto& v : b.basis())
        if (!a.contains(v)) {
            e.witness = v;
            return e;
        }
    return e;
}

Quotient quotient(const Subspace& ker, const Subspace& im) {
    if (ker.ambient_dim() != im.ambient_dim()) throw DomainError("ambient mismatch");
    if (!ker.contains(im)) throw DomainError("not a subcomplex: image is not contained in kernel");
    Quotient q;
    Subspace cur = im;
    for (const auto& v : ker.basis()) {
        if (cur.contains(v)) continue;
        q.reps.push_back(v);
        cur = sum(cur, Subspace::span(ker.ambient_dim(), {v}));
    }
    q.dim = static_cast<int>(q.reps.size());
    return q;
}

std::optional<Vec> quotient_coordinates(const Quotient& q, const Subspace& im, const Vec& v) {
    std::vector<Vec> cols = q.reps;
    cols.insert(cols.end(), im.basis().begin(), im.basis().end());
    const int n = im.ambient_dim();
    if (cols.empty()) return is_zero(v) ? std::optional<Vec>(Vec{}) : std::nullopt;
    auto x = solve_least(Matrix::from_columns(cols, n), v);
    if (!x) return std::nullopt;
    return Vec(x->begin(), x->begin() + q.dim);
}

std::optional<Vec> solve_least(const Matrix& a, const Vec& b) {
    if (static_cast<int>(b.size()) != a.rows()) throw DomainError("solve size mismatch");
    const int n = a.cols();
    std::vector<Vec> rows;
    for (int i = 0; i < a.rows(); ++i) {
        Vec r = a.row(i);
        r.push_back(b[i]);
        rows.push_back(std::move(r));
    }
    auto e = row_reduce(std::move(rows), n + 1);
    Vec x(n);
    for (size_t i = 0; i < e.rows.size(); ++i) {
        if (e.pivots[i] == n) return std::nullopt;
        x[e.pivots[i]] = e.rows[i][n];
    }
    return kernel(a).reduce(x);
}

int GradedSpace::dim(int k) const {
    auto it = labels.find(k);
    return it == labels.end() ? 0 : static_cast<int>(it->second.size());
}

std::vector<int> GradedSpace::degrees() const {
    std::vector<int> d;
    for (const auto& [k, v] : labels) d.push_back(k);
    return d;
}

int GradedSpace::total_dim() const {
    int t = 0;
    for (const auto& [k, v] : labels) t += static_cast<int>(v.size());
    return t;
}

LinearOp LinearOp::zero(const GradedSpace& src, const GradedSpace& tgt, int shift) {
    LinearOp op{src, tgt, shift, {}, std::nullopt};
    for (int k : src.degrees()) op.blocks[k] = Matrix(tgt.dim(k + shift), src.dim(k));
    return op;
}

LinearOp LinearOp::identity(const GradedSpace& s) {
    LinearOp op{s, s, 0, {}, std::nullopt};
    for (int k : s.degrees()) op.blocks[k] = Matrix::identity(s.dim(k));
    return op;
}

const Matrix& LinearOp::block(int k) const {
    auto it = blocks.find(k);
    if (it == blocks.end()) throw DomainError("degree " + std::to_string(k) + " absent from operator source");
    return it->second;
}

Vec LinearOp::apply(int k, const Vec& v) const { return block(k).apply(v); }

namespace {

Matrix block_or_zero(const LinearOp& op, int k, int rows, int cols) {
    auto it = op.blocks.find(k);
    if (it == op.blocks.end()) return Matrix(rows, cols);
    return it->second;
}

}  // namespace

LinearOp compose(const LinearOp& a, const LinearOp& b) {
    LinearOp r{b.source, a.target, a.shift + b.shift, {}, std::nullopt};
    if (a.reflect && b.reflect) {
        r.shift = *a.reflect - *b.reflect;
    } else if (a.reflect) {
        r.reflect = *a.reflect - b.shift;
    } else if (b.reflect) {
        r.reflect = *b.reflect + a.shift;
    }
    for (int k : b.source.degrees()) {
        int mid = b.target_of(k);
        Matrix am = block_or_zero(a, mid, a.target.dim(a.target_of(mid)), b.target.dim(mid));
        r.blocks[k] = am * b.block(k);
    }
    return r;
}

LinearOp add(const LinearOp& a, const LinearOp& b, const Q& sb) {
    if (a.shift != b.shift || a.reflect != b.reflect) throw DomainError("adding operators of different degree");
    LinearOp r = a;
    for (auto& [k, m] : r.blocks) {
        auto it = b.blocks.find(k);
        if (it != b.blocks.end()) m = m + sb * it->second;
    }
    return r;
}

LinearOp scale(const Q& s, const LinearOp& a) {
    LinearOp r = a;
    for (auto& [k, m] : r.blocks) m = s * m;
    return r;
}

LinearOp commutator(const LinearOp& a, const LinearOp& b) { return add(compose(a, b), compose(b, a), -1); }

LinearOp anticommutator(const LinearOp& a, const LinearOp& b) { return add(compose(a, b), compose(b, a), 1); }

std::optional<int> first_difference(const LinearOp& a, const LinearOp& b) {
    if (a.shift != b.shift || a.reflect != b.reflect) {
        for (const auto& [k, m] : a.blocks)
            if (!m.is_zero()) return k;
        for (const auto& [k, m] : b.blocks)
            if (!m.is_zero()) return k;
        return std::nullopt;
    }
    for (const auto& [k, m] : a.blocks) {
        auto it = b.blocks.find(k);
        if (it == b.blocks.end()) {
            if (!m.is_zero()) return k;
        } else if (!(m == it->second)) {
            return k;
        }
    }
    for (const auto& [k, m] : b.blocks)
        if (!a.blocks.count(k) && !m.is_zero()) return k;
    return std::nullopt;
}

bool is_zero(const LinearOp& a) {
    for (const auto& [k, m] : a.blocks)
        if (!m.is_zero()) return false;
    return true;
}

Subspace kernel(const LinearOp& op, int degree) {
    if (!op.source.has(degree)) throw DomainError("degree " + std::to_string(degree) + " absent");
    return kernel(op.block(degree));
}

Subspace image(const LinearOp& op, int degree) {
    if (!op.source.has(degree)) throw DomainError("degree " + std::to_string(degree) + " absent");
    return image(op.block(degree));
}

}  // namespace tsf
