#include "ubac/gf2.hpp"

#include <algorithm>
#include <utility>

#include "ubac/errors.hpp"

namespace ubac {

Gf2Matrix::Gf2Matrix(int rows, int cols)
    : rows_(rows), cols_(cols), stride_((cols + 63) / 64),
      words_(static_cast<std::size_t>(rows) * ((cols + 63) / 64), 0) {}

Gf2Matrix Gf2Matrix::identity(int n) {
    Gf2Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

Gf2Matrix Gf2Matrix::random(int rows, int cols, Rng& rng) {
    Gf2Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int w = 0; w < m.stride_; ++w)
            m.words_[static_cast<std::size_t>(r) * m.stride_ + w] = rng.next_u64();
        // clear bits beyond the last column
        const int rem = cols & 63;
        if (rem) m.words_[static_cast<std::size_t>(r) * m.stride_ + m.stride_ - 1] &= (1ull << rem) - 1;
    }
    return m;
}

void Gf2Matrix::xor_rows(int dst, int src) {
    auto* d = &words_[static_cast<std::size_t>(dst) * stride_];
    const auto* s = &words_[static_cast<std::size_t>(src) * stride_];
    for (int w = 0; w < stride_; ++w) d[w] ^= s[w];
}

void Gf2Matrix::swap_rows(int a, int b) {
    if (a == b) return;
    auto* pa = &words_[static_cast<std::size_t>(a) * stride_];
    auto* pb = &words_[static_cast<std::size_t>(b) * stride_];
    for (int w = 0; w < stride_; ++w) std::swap(pa[w], pb[w]);
}

Gf2Matrix Gf2Matrix::select_columns(std::span<const int> columns) const {
    Gf2Matrix m(rows_, static_cast<int>(columns.size()));
    for (int r = 0; r < rows_; ++r)
        for (std::size_t j = 0; j < columns.size(); ++j)
            if (get(r, columns[j])) m.set(r, static_cast<int>(j), true);
    return m;
}

Gf2Matrix Gf2Matrix::stack(const Gf2Matrix& other) const {
    if (cols_ != other.cols_) throw DimensionMismatch("stack: column counts differ");
    Gf2Matrix m(rows_ + other.rows_, cols_);
    std::copy(words_.begin(), words_.end(), m.words_.begin());
    std::copy(other.words_.begin(), other.words_.end(),
              m.words_.begin() + static_cast<std::ptrdiff_t>(rows_) * stride_);
    return m;
}

std::vector<std::uint8_t> Gf2Matrix::multiply(std::span<const std::uint8_t> x) const {
    if (static_cast<int>(x.size()) != cols_) throw DimensionMismatch("multiply: size mismatch");
    std::vector<std::uint64_t> packed(stride_, 0);
    for (int c = 0; c < cols_; ++c)
        if (x[c] & 1) packed[c >> 6] |= 1ull << (c & 63);
    std::vector<std::uint8_t> y(rows_, 0);
    for (int r = 0; r < rows_; ++r) {
        const auto* row = &words_[static_cast<std::size_t>(r) * stride_];
        int parity = 0;
        for (int w = 0; w < stride_; ++w) parity ^= __builtin_popcountll(row[w] & packed[w]) & 1;
        y[r] = static_cast<std::uint8_t>(parity);
    }
    return y;
}

namespace {

// Forward elimination; returns pivot columns. `rhs` (optional) is carried along.
std::vector<int> eliminate(Gf2Matrix& m, std::vector<std::uint8_t>* rhs) {
    std::vector<int> pivot_cols;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int pivot = -1;
        for (int r = row; r < m.rows(); ++r)
            if (m.get(r, col)) { pivot = r; break; }
        if (pivot < 0) continue;
        m.swap_rows(row, pivot);
        if (rhs) std::swap((*rhs)[row], (*rhs)[pivot]);
        for (int r = 0; r < m.rows(); ++r) {
            if (r != row && m.get(r, col)) {
                m.xor_rows(r, row);
                if (rhs) (*rhs)[r] ^= (*rhs)[row];
            }
        }
        pivot_cols.push_back(col);
        ++row;
    }
    return pivot_cols;
}

}  // namespace

int gf2_rank(Gf2Matrix m) { return static_cast<int>(eliminate(m, nullptr).size()); }

Gf2Solution gf2_solve(const Gf2Matrix& m, std::span<const std::uint8_t> b) {
    if (static_cast<int>(b.size()) != m.rows()) throw DimensionMismatch("gf2_solve: rhs size");
    Gf2Matrix work = m;
    std::vector<std::uint8_t> rhs(b.begin(), b.end());
    for (auto& v : rhs) v &= 1;
    const auto pivots = eliminate(work, &rhs);

    Gf2Solution sol;
    sol.rank = static_cast<int>(pivots.size());
    for (int r = sol.rank; r < m.rows(); ++r) {
        if (rhs[r]) {
            sol.kind = SolveKind::inconsistent;
            return sol;
        }
    }

    sol.particular.assign(m.cols(), 0);
    for (int i = 0; i < sol.rank; ++i) sol.particular[pivots[i]] = rhs[i];

    std::vector<std::uint8_t> is_pivot(m.cols(), 0);
    for (int c : pivots) is_pivot[c] = 1;
    for (int free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<std::uint8_t> basis(m.cols(), 0);
        basis[free_col] = 1;
        for (int i = 0; i < sol.rank; ++i)
            if (work.get(i, free_col)) basis[pivots[i]] = 1;
        sol.nullspace.push_back(std::move(basis));
    }

    sol.kind = sol.nullspace.empty() ? SolveKind::unique : SolveKind::underdetermined;
    return sol;
}

std::vector<std::vector<std::uint8_t>> gf2_nullspace(const Gf2Matrix& m) {
    const std::vector<std::uint8_t> zero(m.rows(), 0);
    return gf2_solve(m, zero).nullspace;
}

}  // namespace ubac
