#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "sasq/qsim/state.hpp"
#include "sasq/util/error.hpp"

namespace sasq::qsim {

// Dense row-major complex matrix for operator-level composition (test oracle,
// fused execution blocks). Not a statevector kernel.
struct CMat {
    std::size_t dim = 0;
    std::vector<cplx> a;

    CMat() = default;
    explicit CMat(std::size_t d) : dim(d), a(d * d, cplx{0.0, 0.0}) {}

    cplx& at(std::size_t r, std::size_t c) { return a[r * dim + c]; }
    cplx at(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

    static CMat identity(std::size_t d) {
        CMat m(d);
        for (std::size_t i = 0; i < d; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

CMat cmat_mul(const CMat& x, const CMat& y);
CMat cmat_kron(const CMat& x, const CMat& y);
CMat cmat_adjoint(const CMat& x);

}  // namespace sasq::qsim
