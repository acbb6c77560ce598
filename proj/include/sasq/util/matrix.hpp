#pragma once

#include <cstddef>
#include <vector>

#include "sasq/util/error.hpp"

namespace sasq {

// Dense row-major real matrix. Small sizes only; no BLAS behind it.
struct RealMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    RealMatrix() = default;
    RealMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static RealMatrix identity(int n) {
        RealMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline RealMatrix matmul(const RealMatrix& x, const RealMatrix& y) {
    if (x.cols != y.rows) throw structural_error("matmul: inner dimensions disagree");
    RealMatrix out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const double v = x.at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) out.at(i, j) += v * y.at(k, j);
        }
    return out;
}

}  // namespace sasq
