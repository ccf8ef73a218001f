#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ubac/rng.hpp"

namespace ubac {

/// Dense binary matrix, row-major, 64 columns per word.
class Gf2Matrix {
  public:
    Gf2Matrix() = default;
    Gf2Matrix(int rows, int cols);

    static Gf2Matrix identity(int n);
    static Gf2Matrix random(int rows, int cols, Rng& rng);  // Bernoulli(1/2) entries

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool get(int r, int c) const {
        return (words_[static_cast<std::size_t>(r) * stride_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(int r, int c, bool v) {
        auto& w = words_[static_cast<std::size_t>(r) * stride_ + (c >> 6)];
        const std::uint64_t mask = 1ull << (c & 63);
        w = v ? (w | mask) : (w & ~mask);
    }
    void flip(int r, int c) {
        words_[static_cast<std::size_t>(r) * stride_ + (c >> 6)] ^= 1ull << (c & 63);
    }

    void xor_rows(int dst, int src);
    void swap_rows(int a, int b);

    /// Columns picked in the given order (duplicates allowed).
    Gf2Matrix select_columns(std::span<const int> columns) const;

    /// [this; other] stacked vertically; column counts must match.
    Gf2Matrix stack(const Gf2Matrix& other) const;

    std::vector<std::uint8_t> multiply(std::span<const std::uint8_t> x) const;

  private:
    int rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Rank over GF(2) by row elimination; takes a working copy by value.
int gf2_rank(Gf2Matrix m);

enum class SolveKind { unique, underdetermined, inconsistent };

struct Gf2Solution {
    SolveKind kind = SolveKind::inconsistent;
    int rank = 0;
    std::vector<std::uint8_t> particular;               // empty when inconsistent
    std::vector<std::vector<std::uint8_t>> nullspace;   // basis of the homogeneous solutions
};

/// Classifies and solves M x = b. Throws DimensionMismatch.
Gf2Solution gf2_solve(const Gf2Matrix& m, std::span<const std::uint8_t> b);

std::vector<std::vector<std::uint8_t>> gf2_nullspace(const Gf2Matrix& m);

}  // namespace ubac
