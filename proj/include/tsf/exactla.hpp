#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsf {

using Q = mpq_class;
using Vec = std::vector<Q>;

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string to_string(const Q& q);
Q parse_rational(const std::string& s);

bool is_zero(const Vec& v);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const Q& s, const Vec& v);

// Dense row-major matrix over Q.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols);

    static Matrix identity(int n);
    static Matrix from_rows(const std::vector<Vec>& rows, int cols);
    static Matrix from_columns(const std::vector<Vec>& cols, int rows);

    int rows() const { return r_; }
    int cols() const { return c_; }
    Q& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const Q& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    Vec row(int i) const;
    Vec col(int j) const;
    Matrix transpose() const;
    bool is_zero() const;
    Vec apply(const Vec& v) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Q& s, const Matrix& m);
    friend bool operator==(const Matrix& a, const Matrix& b);

private:
    int r_ = 0;
    int c_ = 0;
    std::vector<Q> a_;
};

// Reduced row echelon form; only nonzero rows are kept.
struct Echelon {
    std::vector<Vec> rows;
    std::vector<int> pivots;
};

Echelon row_reduce(std::vector<Vec> rows, int cols);
int rank(const Matrix& m);
Q determinant(const Matrix& m);
// Inverse of a square matrix; nullopt when singular.
std::optional<Matrix> inverse(const Matrix& m);

// A subspace of Q^n stored by its canonical reduced echelon basis.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(int ambient_dim) : n_(ambient_dim) {}

    static Subspace span(int ambient_dim, const std::vector<Vec>& gens);
    static Subspace full(int ambient_dim);

    int ambient_dim() const { return n_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<Vec>& basis() const { return basis_; }
    const std::vector<int>& pivots() const { return pivots_; }

    // Remainder of v after eliminating the pivot coordinates.
    Vec reduce(const Vec& v) const;
    bool contains(const Vec& v) const;
    // Coefficients of v in the echelon basis, if v lies in the subspace.
    std::optional<Vec> coordinates(const Vec& v) const;
    bool contains(const Subspace& other) const;
    // Basis of the annihilator, as row vectors.
    std::vector<Vec> annihilator() const;

    friend bool operator==(const Subspace& a, const Subspace& b);

private:
    int n_ = 0;
    std::vector<Vec> basis_;
    std::vector<int> pivots_;
};

Subspace kernel(const Matrix& m);
Subspace image(const Matrix& m);
Subspace intersect(const Subspace& a, const Subspace& b);
Subspace sum(const Subspace& a, const Subspace& b);
// Preimage under m of a subspace of its target.
Subspace preimage(const Matrix& m, const Subspace& s);

struct Equality {
    bool equal = true;
    std::optional<Vec> witness;  // a vector in one space and not the other
};
Equality subspace_equal(const Subspace& a, const Subspace& b);

struct Quotient {
    int dim = 0;
    std::vector<Vec> reps;
};
// ker/im with representatives chosen by echelon completion of im inside ker.
Quotient quotient(const Subspace& ker, const Subspace& im);
// Coefficients of a vector of ker in the representative basis, modulo im.
std::optional<Vec> quotient_coordinates(const Quotient& q, const Subspace& im, const Vec& v);

// Solution of a x = b reduced modulo ker a (unique canonical choice), if any.
std::optional<Vec> solve_least(const Matrix& a, const Vec& b);

struct GradedSpace {
    std::map<int, std::vector<std::string>> labels;

    int dim(int k) const;
    bool has(int k) const { return labels.count(k) != 0; }
    std::vector<int> degrees() const;
    int total_dim() const;
};

// Operator given by one matrix per source degree. It maps degree k to
// k + shift, or to reflect - k when reflect is set.
struct LinearOp {
    GradedSpace source;
    GradedSpace target;
    int shift = 0;
    std::map<int, Matrix> blocks;
    std::optional<int> reflect;

    int target_of(int k) const { return reflect ? *reflect - k : k + shift; }
    static LinearOp zero(const GradedSpace& src, const GradedSpace& tgt, int shift);
    static LinearOp identity(const GradedSpace& s);
    const Matrix& block(int k) const;
    Vec apply(int k, const Vec& v) const;
};

LinearOp compose(const LinearOp& a, const LinearOp& b);
LinearOp add(const LinearOp& a, const LinearOp& b, const Q& sb = 1);
LinearOp scale(const Q& s, const LinearOp& a);
// a b - b a
LinearOp commutator(const LinearOp& a, const LinearOp& b);
// a b + b a
LinearOp anticommutator(const LinearOp& a, const LinearOp& b);
// First source degree where the two operators differ, if any.
std::optional<int> first_difference(const LinearOp& a, const LinearOp& b);
bool is_zero(const LinearOp& a);

Subspace kernel(const LinearOp& op, int degree);
Subspace image(const LinearOp& op, int degree);

}  // namespace tsf
