#pragma once

// Shared test utilities: deterministic rng draws, independent matrix
// oracles, and a random circuit generator.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "sasq/qsim/apply.hpp"
#include "sasq/qsim/gate.hpp"
#include "sasq/qsim/smallmat.hpp"
#include "sasq/qsim/state.hpp"

namespace testutil {

using sasq::qsim::CMat;
using sasq::qsim::Circuit;
using sasq::qsim::cplx;
using sasq::qsim::Gate;
using sasq::qsim::GateKind;
using sasq::qsim::QuantumState;

constexpr double kPi = 3.14159265358979323846;

inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// exp(M) by scaling-and-squaring Taylor series; independent of any gate
// matrix formulas in the library.
inline CMat expm(const CMat& m) {
    using sasq::qsim::cmat_mul;
    double maxabs = 0.0;
    for (const cplx& v : m.a) maxabs = std::max(maxabs, std::abs(v));
    int squarings = 0;
    while (maxabs > 0.5 && squarings < 40) {
        maxabs /= 2.0;
        ++squarings;
    }
    CMat scaled(m.dim);
    const double f = std::ldexp(1.0, -squarings);
    for (std::size_t i = 0; i < m.a.size(); ++i) scaled.a[i] = m.a[i] * f;

    CMat result = CMat::identity(m.dim);
    CMat term = CMat::identity(m.dim);
    for (int k = 1; k <= 24; ++k) {
        term = cmat_mul(term, scaled);
        for (std::size_t i = 0; i < term.a.size(); ++i) term.a[i] /= double(k);
        for (std::size_t i = 0; i < result.a.size(); ++i) result.a[i] += term.a[i];
    }
    for (int s = 0; s < squarings; ++s) result = cmat_mul(result, result);
    return result;
}

// Unitary DFT matrix with the forward convention F[j][k] = w^{jk}/sqrt(n),
// w = exp(2*pi*i/n).
inline CMat dft_matrix(std::size_t n) {
    CMat f(n);
    const double inv = 1.0 / std::sqrt(double(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const double ang = 2.0 * kPi * double(j * k % n) / double(n);
            f.at(j, k) = cplx{std::cos(ang) * inv, std::sin(ang) * inv};
        }
    return f;
}

inline QuantumState random_state(int num_qubits, std::mt19937_64& rng) {
    QuantumState s = sasq::qsim::init_state(num_qubits);
    double norm2 = 0.0;
    for (cplx& a : s.amplitudes) {
        a = cplx{uniform(rng, -1, 1), uniform(rng, -1, 1)};
        norm2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& a : s.amplitudes) a *= inv;
    return s;
}

// Random circuit over the full gate set; roughly half of the rotation gates
// read their angles from the parameter vector.
inline std::pair<Circuit, std::vector<double>> random_circuit(int num_qubits, int num_gates,
                                                              std::mt19937_64& rng) {
    Circuit c;
    c.num_qubits = num_qubits;
    std::vector<double> params;
    auto qubit = [&] { return int(rng() % std::uint64_t(num_qubits)); };
    auto other = [&](int q) {
        int r = qubit();
        while (r == q) r = qubit();
        return r;
    };
    auto angle = [&] { return uniform(rng, 0, 2 * kPi); };
    for (int i = 0; i < num_gates; ++i) {
        const int kind = int(rng() % 10);
        const bool use_slot = (rng() & 1) != 0;
        const int t = qubit();
        switch (kind) {
            case 0: c.gates.push_back(Gate::h(t)); break;
            case 1:
            case 2:
            case 3: {
                const GateKind k = kind == 1 ? GateKind::RX : kind == 2 ? GateKind::RY : GateKind::RZ;
                Gate g{k, t};
                if (use_slot) {
                    g.param_index = int(params.size());
                    params.push_back(angle());
                } else {
                    g.fixed[0] = angle();
                }
                c.gates.push_back(g);
                break;
            }
            case 4: {
                Gate g{GateKind::RotZYZ, t};
                if (use_slot) {
                    g.param_index = int(params.size());
                    params.push_back(angle());
                    params.push_back(angle());
                    params.push_back(angle());
                } else {
                    g.fixed = {angle(), angle(), angle()};
                }
                c.gates.push_back(g);
                break;
            }
            case 5:
                if (num_qubits < 2) { c.gates.push_back(Gate::h(t)); break; }
                c.gates.push_back(Gate::cnot(other(t), t));
                break;
            case 6:
            case 7: {
                if (num_qubits < 2) { c.gates.push_back(Gate::h(t)); break; }
                const GateKind k = kind == 6 ? GateKind::CRX : GateKind::CRZ;
                Gate g{k, t, -1, other(t)};
                if (use_slot) {
                    g.param_index = int(params.size());
                    params.push_back(angle());
                } else {
                    g.fixed[0] = angle();
                }
                c.gates.push_back(g);
                break;
            }
            case 8:
                if (num_qubits < 2) { c.gates.push_back(Gate::h(t)); break; }
                c.gates.push_back(Gate::cphase(other(t), t, angle()));
                break;
            case 9:
                if (num_qubits < 2) { c.gates.push_back(Gate::h(t)); break; }
                c.gates.push_back(Gate::swap(t, other(t)));
                break;
        }
    }
    c.num_params = int(params.size());
    return {c, params};
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline std::vector<cplx> mat_vec(const CMat& m, const std::vector<cplx>& v) {
    std::vector<cplx> out(m.dim, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < m.dim; ++i)
        for (std::size_t j = 0; j < m.dim; ++j) out[i] += m.at(i, j) * v[j];
    return out;
}

}  // namespace testutil
