#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "veroweb/matrix.hpp"
#include "veroweb/multivector.hpp"

namespace testsup {

using veroweb::Mat;
using veroweb::Rational;
using veroweb::Vec;

// Deterministic across platforms: raw engine output reduced by hand, never
// std::uniform_int_distribution (its mapping is implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    long long intval(long long lo, long long hi) {  // inclusive bounds
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long long>(eng_() % span);
    }
    Rational rational(long long lo = -9, long long hi = 9, long long maxden = 3) {
        return Rational(veroweb::Int(intval(lo, hi)), veroweb::Int(intval(1, maxden)));
    }
    Rational nonzero_rational(long long lo = -9, long long hi = 9) {
        while (true) {
            Rational r = rational(lo, hi);
            if (!r.is_zero()) return r;
        }
    }

    Mat<Rational> matrix(int rows, int cols, long long lo = -5, long long hi = 5) {
        Mat<Rational> m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = Rational(intval(lo, hi));
        return m;
    }

    Vec<Rational> vector(int n, long long lo = -5, long long hi = 5) {
        Vec<Rational> v(n);
        for (int i = 0; i < n; ++i) v[i] = Rational(intval(lo, hi));
        return v;
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

// Independent cofactor-expansion determinant over any commutative ring.
// Intentionally naive: it is the oracle the fast path is checked against.
template <class R>
R cofactor_det(const std::vector<std::vector<R>>& m) {
    size_t n = m.size();
    if (n == 1) return m[0][0];
    R acc = m[0][0];
    acc = acc - acc;  // ring zero
    for (size_t j = 0; j < n; ++j) {
        std::vector<std::vector<R>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<R> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        R term = m[0][j] * cofactor_det(minor);
        if (j % 2 == 0) acc += term; else acc -= term;
    }
    return acc;
}

}  // namespace testsup
