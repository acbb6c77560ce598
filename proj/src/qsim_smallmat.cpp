#include "sasq/qsim/smallmat.hpp"

namespace sasq::qsim {

CMat cmat_mul(const CMat& x, const CMat& y) {
    if (x.dim != y.dim) throw structural_error("cmat_mul: dimension mismatch");
    CMat out(x.dim);
    for (std::size_t i = 0; i < x.dim; ++i)
        for (std::size_t k = 0; k < x.dim; ++k) {
            const cplx v = x.at(i, k);
            if (v == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < x.dim; ++j) out.at(i, j) += v * y.at(k, j);
        }
    return out;
}

CMat cmat_kron(const CMat& x, const CMat& y) {
    CMat out(x.dim * y.dim);
    for (std::size_t i = 0; i < x.dim; ++i)
        for (std::size_t j = 0; j < x.dim; ++j) {
            const cplx v = x.at(i, j);
            if (v == cplx{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < y.dim; ++k)
                for (std::size_t l = 0; l < y.dim; ++l)
                    out.at(i * y.dim + k, j * y.dim + l) = v * y.at(k, l);
        }
    return out;
}

CMat cmat_adjoint(const CMat& x) {
    CMat out(x.dim);
    for (std::size_t i = 0; i < x.dim; ++i)
        for (std::size_t j = 0; j < x.dim; ++j) out.at(i, j) = std::conj(x.at(j, i));
    return out;
}

}  // namespace sasq::qsim
