#include <cmath>

#include "sasq/qsim/apply.hpp"
#include "sasq/train/train.hpp"

namespace sasq::train {

using model::CompiledModel;
using model::ModelConfig;
using model::ModelParams;
using model::Segment;
using qsim::cplx;
using qsim::Gate;
using qsim::GateKind;
using qsim::Mat2;
using qsim::QuantumState;

namespace {

inline cplx cmul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

using qsim::mat2_adjoint;
using qsim::mat2_mul;

// (-i/2) * P * u for P in {X, Y, Z}
Mat2 half_gen_x(const Mat2& u) {
    // X*u swaps rows; multiply by -i/2: (r,i) -> (i/2, -r/2)
    Mat2 o;
    o.r00 = 0.5 * u.i10; o.i00 = -0.5 * u.r10;
    o.r01 = 0.5 * u.i11; o.i01 = -0.5 * u.r11;
    o.r10 = 0.5 * u.i00; o.i10 = -0.5 * u.r00;
    o.r11 = 0.5 * u.i01; o.i11 = -0.5 * u.r01;
    return o;
}
Mat2 half_gen_y(const Mat2& u) {
    // Y*u = [-i*row1; i*row0]; multiply by -i/2 -> [-row1/2; row0/2]
    Mat2 o;
    o.r00 = -0.5 * u.r10; o.i00 = -0.5 * u.i10;
    o.r01 = -0.5 * u.r11; o.i01 = -0.5 * u.i11;
    o.r10 = 0.5 * u.r00; o.i10 = 0.5 * u.i00;
    o.r11 = 0.5 * u.r01; o.i11 = 0.5 * u.i01;
    return o;
}
Mat2 half_gen_z(const Mat2& u) {
    // Z*u = [row0; -row1]; multiply by -i/2
    Mat2 o;
    o.r00 = 0.5 * u.i00; o.i00 = -0.5 * u.r00;
    o.r01 = 0.5 * u.i01; o.i01 = -0.5 * u.r01;
    o.r10 = -0.5 * u.i10; o.i10 = 0.5 * u.r10;
    o.r11 = -0.5 * u.i11; o.i11 = 0.5 * u.r11;
    return o;
}

// Derivative matrices of a gate's local 2x2 w.r.t. each of its slots.
int local_slot_derivatives(GateKind kind, const std::array<double, 3>& ang, Mat2 out[3]) {
    switch (kind) {
        case GateKind::RX:
        case GateKind::CRX:
            out[0] = half_gen_x(qsim::gate_local_matrix(kind, ang));
            return 1;
        case GateKind::RY:
            out[0] = half_gen_y(qsim::gate_local_matrix(kind, ang));
            return 1;
        case GateKind::RZ:
        case GateKind::CRZ:
            out[0] = half_gen_z(qsim::gate_local_matrix(kind, ang));
            return 1;
        case GateKind::RotZYZ: {
            const Mat2 a = qsim::gate_local_matrix(GateKind::RZ, {ang[0], 0, 0});
            const Mat2 b = qsim::gate_local_matrix(GateKind::RY, {ang[1], 0, 0});
            const Mat2 c = qsim::gate_local_matrix(GateKind::RZ, {ang[2], 0, 0});
            out[0] = half_gen_z(mat2_mul(a, mat2_mul(b, c)));
            out[1] = mat2_mul(a, half_gen_y(mat2_mul(b, c)));
            out[2] = mat2_mul(a, mat2_mul(b, half_gen_z(c)));
            return 3;
        }
        default:
            return 0;
    }
}

inline double* raw(QuantumState& s) { return reinterpret_cast<double*>(s.amplitudes.data()); }

// Fused backward step for an uncontrolled single-qubit gate:
//   ket <- U^dag ket, acc_j += <lam | D_j | ket_new>, lam <- U^dag lam.
void backward_1q(QuantumState& ket, QuantumState& lam, int target, const Mat2& u,
                 const Mat2* derivs, int nslots, cplx* accs, bool undo_lambda) {
    const Mat2 ua = mat2_adjoint(u);
    const std::size_t stride = std::size_t{1} << qsim::bit_position(ket.num_qubits, target);
    const std::size_t n = ket.dim();
    double* kp = raw(ket);
    double* lp = raw(lam);
    for (std::size_t base = 0; base < n; base += stride << 1) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const std::size_t j = i + stride;
            const double ar = kp[2 * i], ai = kp[2 * i + 1], br = kp[2 * j], bi = kp[2 * j + 1];
            const double p0r = ua.r00 * ar - ua.i00 * ai + ua.r01 * br - ua.i01 * bi;
            const double p0i = ua.r00 * ai + ua.i00 * ar + ua.r01 * bi + ua.i01 * br;
            const double p1r = ua.r10 * ar - ua.i10 * ai + ua.r11 * br - ua.i11 * bi;
            const double p1i = ua.r10 * ai + ua.i10 * ar + ua.r11 * bi + ua.i11 * br;
            kp[2 * i] = p0r; kp[2 * i + 1] = p0i;
            kp[2 * j] = p1r; kp[2 * j + 1] = p1i;

            const double l0r = lp[2 * i], l0i = lp[2 * i + 1];
            const double l1r = lp[2 * j], l1i = lp[2 * j + 1];
            for (int s = 0; s < nslots; ++s) {
                const Mat2& d = derivs[s];
                const double t0r = d.r00 * p0r - d.i00 * p0i + d.r01 * p1r - d.i01 * p1i;
                const double t0i = d.r00 * p0i + d.i00 * p0r + d.r01 * p1i + d.i01 * p1r;
                const double t1r = d.r10 * p0r - d.i10 * p0i + d.r11 * p1r - d.i11 * p1i;
                const double t1i = d.r10 * p0i + d.i10 * p0r + d.r11 * p1i + d.i11 * p1r;
                // conj(l) * t
                accs[s] += cplx{l0r * t0r + l0i * t0i + l1r * t1r + l1i * t1i,
                                l0r * t0i - l0i * t0r + l1r * t1i - l1i * t1r};
            }
            if (undo_lambda) {
                lp[2 * i] = ua.r00 * l0r - ua.i00 * l0i + ua.r01 * l1r - ua.i01 * l1i;
                lp[2 * i + 1] = ua.r00 * l0i + ua.i00 * l0r + ua.r01 * l1i + ua.i01 * l1r;
                lp[2 * j] = ua.r10 * l0r - ua.i10 * l0i + ua.r11 * l1r - ua.i11 * l1i;
                lp[2 * j + 1] = ua.r10 * l0i + ua.i10 * l0r + ua.r11 * l1i + ua.i11 * l1r;
            }
        }
    }
}

// Controlled variant: the unitary and its derivative live on the control=1
// subspace.
void backward_c1q(QuantumState& ket, QuantumState& lam, int control, int target, const Mat2& u,
                  const Mat2* derivs, int nslots, cplx* accs, bool undo_lambda) {
    const Mat2 ua = mat2_adjoint(u);
    const std::size_t cmask = std::size_t{1} << qsim::bit_position(ket.num_qubits, control);
    const std::size_t tmask = std::size_t{1} << qsim::bit_position(ket.num_qubits, target);
    const std::size_t n = ket.dim();
    double* kp = raw(ket);
    double* lp = raw(lam);
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & cmask) == 0 || (i & tmask) != 0) continue;
        const std::size_t j = i + tmask;
        const double ar = kp[2 * i], ai = kp[2 * i + 1], br = kp[2 * j], bi = kp[2 * j + 1];
        const double p0r = ua.r00 * ar - ua.i00 * ai + ua.r01 * br - ua.i01 * bi;
        const double p0i = ua.r00 * ai + ua.i00 * ar + ua.r01 * bi + ua.i01 * br;
        const double p1r = ua.r10 * ar - ua.i10 * ai + ua.r11 * br - ua.i11 * bi;
        const double p1i = ua.r10 * ai + ua.i10 * ar + ua.r11 * bi + ua.i11 * br;
        kp[2 * i] = p0r; kp[2 * i + 1] = p0i;
        kp[2 * j] = p1r; kp[2 * j + 1] = p1i;

        const double l0r = lp[2 * i], l0i = lp[2 * i + 1];
        const double l1r = lp[2 * j], l1i = lp[2 * j + 1];
        for (int s = 0; s < nslots; ++s) {
            const Mat2& d = derivs[s];
            const double t0r = d.r00 * p0r - d.i00 * p0i + d.r01 * p1r - d.i01 * p1i;
            const double t0i = d.r00 * p0i + d.i00 * p0r + d.r01 * p1i + d.i01 * p1r;
            const double t1r = d.r10 * p0r - d.i10 * p0i + d.r11 * p1r - d.i11 * p1i;
            const double t1i = d.r10 * p0i + d.i10 * p0r + d.r11 * p1i + d.i11 * p1r;
            accs[s] += cplx{l0r * t0r + l0i * t0i + l1r * t1r + l1i * t1i,
                            l0r * t0i - l0i * t0r + l1r * t1i - l1i * t1r};
        }
        if (undo_lambda) {
            lp[2 * i] = ua.r00 * l0r - ua.i00 * l0i + ua.r01 * l1r - ua.i01 * l1i;
            lp[2 * i + 1] = ua.r00 * l0i + ua.i00 * l0r + ua.r01 * l1i + ua.i01 * l1r;
            lp[2 * j] = ua.r10 * l0r - ua.i10 * l0i + ua.r11 * l1r - ua.i11 * l1i;
            lp[2 * j + 1] = ua.r10 * l0i + ua.i10 * l0r + ua.r11 * l1i + ua.i11 * l1r;
        }
    }
}

// Specialized backward step for one perceptron quad, exploiting its
// block-diagonal structure: the readout (last qubit) sees a plain 2x2 per
// control value, so everything runs over contiguous amplitude pairs.
void backward_quad(QuantumState& ket, QuantumState& lam, int control,
                   std::span<const double> a, cplx accs[4], bool undo_lambda) {
    using qsim::gate_local_matrix;
    const Mat2 rxa = gate_local_matrix(GateKind::RX, {a[0], 0, 0});
    const Mat2 rxb = gate_local_matrix(GateKind::RX, {a[1], 0, 0});
    const Mat2 rzc = gate_local_matrix(GateKind::RZ, {a[2], 0, 0});
    const Mat2 rzd = gate_local_matrix(GateKind::RZ, {a[3], 0, 0});

    const Mat2 ua0 = mat2_adjoint(mat2_mul(rzd, rxb));
    const Mat2 ua1 = mat2_adjoint(mat2_mul(rzd, mat2_mul(rzc, mat2_mul(rxb, rxa))));

    // derivative blocks per slot and control value; slots 0 and 2 vanish on
    // the control=0 side
    Mat2 d0[4], d1[4];
    const bool has0[4] = {false, true, false, true};
    d1[0] = mat2_mul(rzd, mat2_mul(rzc, mat2_mul(rxb, half_gen_x(rxa))));
    d0[1] = mat2_mul(rzd, half_gen_x(rxb));
    d1[1] = mat2_mul(rzd, mat2_mul(rzc, mat2_mul(half_gen_x(rxb), rxa)));
    d1[2] = mat2_mul(rzd, mat2_mul(half_gen_z(rzc), mat2_mul(rxb, rxa)));
    d0[3] = mat2_mul(half_gen_z(rzd), rxb);
    d1[3] = mat2_mul(half_gen_z(rzd), mat2_mul(rzc, mat2_mul(rxb, rxa)));

    const std::size_t cmask = std::size_t{1} << qsim::bit_position(ket.num_qubits, control);
    const std::size_t n = ket.dim();
    double* kp = raw(ket);
    double* lp = raw(lam);
    for (std::size_t i = 0; i < n; i += 2) {
        const bool c1 = (i & cmask) != 0;
        const Mat2& ua = c1 ? ua1 : ua0;
        const double ar = kp[2 * i], ai = kp[2 * i + 1];
        const double br = kp[2 * i + 2], bi = kp[2 * i + 3];
        const double p0r = ua.r00 * ar - ua.i00 * ai + ua.r01 * br - ua.i01 * bi;
        const double p0i = ua.r00 * ai + ua.i00 * ar + ua.r01 * bi + ua.i01 * br;
        const double p1r = ua.r10 * ar - ua.i10 * ai + ua.r11 * br - ua.i11 * bi;
        const double p1i = ua.r10 * ai + ua.i10 * ar + ua.r11 * bi + ua.i11 * br;
        kp[2 * i] = p0r; kp[2 * i + 1] = p0i;
        kp[2 * i + 2] = p1r; kp[2 * i + 3] = p1i;

        const double l0r = lp[2 * i], l0i = lp[2 * i + 1];
        const double l1r = lp[2 * i + 2], l1i = lp[2 * i + 3];
        for (int s = 0; s < 4; ++s) {
            if (!c1 && !has0[s]) continue;
            const Mat2& d = c1 ? d1[s] : d0[s];
            const double t0r = d.r00 * p0r - d.i00 * p0i + d.r01 * p1r - d.i01 * p1i;
            const double t0i = d.r00 * p0i + d.i00 * p0r + d.r01 * p1i + d.i01 * p1r;
            const double t1r = d.r10 * p0r - d.i10 * p0i + d.r11 * p1r - d.i11 * p1i;
            const double t1i = d.r10 * p0i + d.i10 * p0r + d.r11 * p1i + d.i11 * p1r;
            accs[s] += cplx{l0r * t0r + l0i * t0i + l1r * t1r + l1i * t1i,
                            l0r * t0i - l0i * t0r + l1r * t1i - l1i * t1r};
        }
        if (undo_lambda) {
            lp[2 * i] = ua.r00 * l0r - ua.i00 * l0i + ua.r01 * l1r - ua.i01 * l1i;
            lp[2 * i + 1] = ua.r00 * l0i + ua.i00 * l0r + ua.r01 * l1i + ua.i01 * l1r;
            lp[2 * i + 2] = ua.r10 * l0r - ua.i10 * l0i + ua.r11 * l1r - ua.i11 * l1i;
            lp[2 * i + 3] = ua.r10 * l0i + ua.i10 * l0r + ua.r11 * l1i + ua.i11 * l1r;
        }
    }
}

void undo_cphase_pair(QuantumState& ket, QuantumState& lam, const Gate& g,
                      std::span<const double> cp, cplx* acc, bool parameterized,
                      bool undo_lambda) {
    const double theta = g.angles(cp)[0];
    const std::size_t both = (std::size_t{1} << qsim::bit_position(ket.num_qubits, g.control)) |
                             (std::size_t{1} << qsim::bit_position(ket.num_qubits, g.target));
    const double cr = std::cos(theta), ci = std::sin(theta);
    // derivative diag entry on |11>: i * e^{i theta}
    const cplx dphase{-ci, cr};
    const std::size_t n = ket.dim();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & both) != both) continue;
        const cplx kpre = cmul(ket.amplitudes[i], cplx{cr, -ci});
        ket.amplitudes[i] = kpre;
        if (parameterized) *acc += cmul(std::conj(lam.amplitudes[i]), cmul(dphase, kpre));
        if (undo_lambda) lam.amplitudes[i] = cmul(lam.amplitudes[i], cplx{cr, -ci});
    }
}

// de/dtoken for amplitude encoding from lam0 = U^dag Z_r U psi0: contract the
// product state against each register's basis, then differentiate through the
// per-token normalization.
std::vector<double> amplitude_token_grads(const CompiledModel& cm,
                                          const embed::PatchSequence& tokens,
                                          const std::vector<std::vector<double>>& regs,
                                          const QuantumState& lam0) {
    const int n = cm.config.num_patches;
    const int eps = cm.config.embed_dim;
    const int v = cm.config.qubits_per_register();
    const int q_data = cm.config.data_qubits();
    const int readout_bits = cm.config.num_readout;
    std::vector<double> dtok(std::size_t(n) * eps, 0.0);

    for (int s = 0; s < n; ++s) {
        std::vector<double> gs(eps, 0.0);
        const std::size_t data_dim = std::size_t{1} << q_data;
        for (std::size_t k = 0; k < data_dim; ++k) {
            double prod = 1.0;
            for (int j = 0; j < n; ++j) {
                if (j == s) continue;
                const std::size_t kj = (k >> (v * (n - 1 - j))) & ((std::size_t{1} << v) - 1);
                prod *= regs[j][kj];
            }
            const std::size_t ks = (k >> (v * (n - 1 - s))) & ((std::size_t{1} << v) - 1);
            gs[ks] += prod * lam0.amplitudes[k << readout_bits].real();
        }
        double norm2 = 0.0;
        for (int c = 0; c < eps; ++c) {
            const double x = tokens.at(s, c);
            norm2 += x * x;
        }
        const double nrm = std::sqrt(norm2);
        double dot = 0.0;
        for (int c = 0; c < eps; ++c) dot += tokens.at(s, c) * gs[c];
        for (int c = 0; c < eps; ++c)
            dtok[std::size_t(s) * eps + c] =
                2.0 * (gs[c] / nrm - dot * tokens.at(s, c) / (nrm * norm2));
    }
    return dtok;
}

// Shared classical head + embedder chain rule. dtok may be empty when the
// embedder is frozen.
void fill_classical_grads(const CompiledModel& cm, const std::vector<std::vector<double>>& patches,
                          const std::vector<double>& dtok, double dlogit, double expectation,
                          std::vector<double>& grad) {
    const auto& cfg = cm.config;
    const int base = cm.slots.kernel + cm.slots.perceptron;
    grad[base] = dlogit * expectation;  // w
    grad[base + 1] = dlogit;            // b
    if (!cfg.trainable_embedder) return;
    const int eps = cfg.embed_dim;
    const int pp = cfg.patch_size * cfg.patch_size;
    const int proj_off = base + 2;
    const int pos_off = proj_off + pp * eps;
    for (int s = 0; s < cfg.num_patches; ++s)
        for (int j = 0; j < eps; ++j) {
            const double d = dtok[std::size_t(s) * eps + j];
            grad[pos_off + s * eps + j] += d;
            for (int i = 0; i < pp; ++i) grad[proj_off + i * eps + j] += patches[s][i] * d;
        }
}

}  // namespace

SampleGrad grad_adjoint(const CompiledModel& cm, const ModelParams& params,
                        const embed::Image& image, int label, LossKind loss) {
    const auto& cfg = cm.config;
    const auto patches = embed::extract_patches(image, cfg.patch_size);
    const embed::PatchSequence tokens =
        embed::project_patches(patches, model::embedder_view(cfg, params));
    const std::vector<double> cp = model::circuit_params_for(cm, params, tokens);

    std::vector<std::vector<double>> regs;
    QuantumState ket = [&] {
        if (cfg.encoding == model::Encoding::Amplitude) {
            regs = embed::amplitude_encode(tokens);
            return embed::inject_amplitudes(regs, cfg.num_readout);
        }
        return qsim::init_state(cfg.total_qubits());
    }();
    model::run_plan(cm, ket, cp);

    SampleGrad out;
    out.expectation = qsim::expectation_z(ket, cfg.readout_qubit());
    out.logit = params.output_weight * out.expectation + params.output_bias;
    out.loss = loss_value(loss, out.logit, label);
    out.grad.assign(model::parameter_count(cfg), 0.0);

    const double dlogit = loss_dlogit(loss, out.logit, label);
    const double dexp = dlogit * params.output_weight;

    const bool want_tokens = cfg.trainable_embedder;
    const bool need_lambda0 = want_tokens && cfg.encoding == model::Encoding::Amplitude;
    const int quantum_slots = cm.slots.kernel + cm.slots.perceptron;
    const bool sweep = quantum_slots > 0 || want_tokens;

    std::vector<double> dtok;
    std::vector<double> de_dslot(cm.slots.total(), 0.0);
    if (sweep) {
        // lam = Z_r ket
        QuantumState lam = ket;
        {
            const std::size_t rmask =
                std::size_t{1} << qsim::bit_position(lam.num_qubits, cfg.readout_qubit());
            for (std::size_t i = 0; i < lam.dim(); ++i)
                if (i & rmask) lam.amplitudes[i] = -lam.amplitudes[i];
        }

        const int stop = need_lambda0 ? 0 : cm.first_trainable_segment;
        for (int si = int(cm.segments.size()) - 1; si >= stop; --si) {
            const Segment& seg = cm.segments[si];
            const bool undo_lambda = need_lambda0 || si > stop;
            cplx accs[4] = {};
            switch (seg.kind) {
                case Segment::Kind::QuadBlock: {
                    backward_quad(ket, lam, seg.quad_control,
                                  std::span<const double>(cp).subspan(seg.quad_slot, 4), accs,
                                  undo_lambda);
                    for (int s = 0; s < 4; ++s)
                        de_dslot[seg.quad_slot + s] = 2.0 * accs[s].real();
                    break;
                }
                case Segment::Kind::PlainGate: {
                    const Gate& g = seg.gate;
                    const bool differentiate = g.parameterized() &&
                                               (g.param_index < quantum_slots || want_tokens);
                    switch (g.kind) {
                        case GateKind::H:
                            backward_1q(ket, lam, g.target,
                                        qsim::gate_local_matrix(g.kind, g.angles(cp)), nullptr, 0,
                                        accs, undo_lambda);
                            break;
                        case GateKind::CNOT:
                            qsim::apply_cnot(ket, g.control, g.target);
                            if (undo_lambda) qsim::apply_cnot(lam, g.control, g.target);
                            break;
                        case GateKind::SWAP:
                            qsim::apply_swap(ket, g.target, g.target2);
                            if (undo_lambda) qsim::apply_swap(lam, g.target, g.target2);
                            break;
                        case GateKind::CPhase: {
                            cplx acc{};
                            undo_cphase_pair(ket, lam, g, cp, &acc,
                                             differentiate, undo_lambda);
                            if (differentiate)
                                de_dslot[g.param_index] = 2.0 * acc.real();
                            break;
                        }
                        case GateKind::CRX:
                        case GateKind::CRZ: {
                            Mat2 derivs[3];
                            const int nslots =
                                differentiate
                                    ? local_slot_derivatives(g.kind, g.angles(cp), derivs)
                                    : 0;
                            backward_c1q(ket, lam, g.control, g.target,
                                         qsim::gate_local_matrix(g.kind, g.angles(cp)), derivs,
                                         nslots, accs, undo_lambda);
                            for (int s = 0; s < nslots; ++s)
                                de_dslot[g.param_index + s] = 2.0 * accs[s].real();
                            break;
                        }
                        default: {
                            Mat2 derivs[3];
                            const int nslots =
                                differentiate
                                    ? local_slot_derivatives(g.kind, g.angles(cp), derivs)
                                    : 0;
                            backward_1q(ket, lam, g.target,
                                        qsim::gate_local_matrix(g.kind, g.angles(cp)), derivs,
                                        nslots, accs, undo_lambda);
                            for (int s = 0; s < nslots; ++s)
                                de_dslot[g.param_index + s] = 2.0 * accs[s].real();
                            break;
                        }
                    }
                    break;
                }
            }
        }

        if (need_lambda0) dtok = amplitude_token_grads(cm, tokens, regs, lam);
    }

    for (int i = 0; i < quantum_slots; ++i) out.grad[i] = dexp * de_dslot[i];
    if (want_tokens && cfg.encoding == model::Encoding::Angle) {
        dtok.assign(std::size_t(cm.slots.tokens), 0.0);
        for (int t = 0; t < cm.slots.tokens; ++t) dtok[t] = de_dslot[cm.slots.token_base + t];
    }
    if (want_tokens)
        for (double& d : dtok) d *= dexp;
    fill_classical_grads(cm, patches, dtok, dlogit, out.expectation, out.grad);
    return out;
}

namespace {

void apply_gate_adjoint(QuantumState& state, const Gate& g, std::span<const double> cp) {
    Gate inv = g;
    const auto ang = g.angles(cp);
    inv.param_index = -1;
    switch (g.kind) {
        case GateKind::H:
        case GateKind::CNOT:
        case GateKind::SWAP:
            break;
        case GateKind::RotZYZ:
            inv.fixed = {-ang[2], -ang[1], -ang[0]};
            break;
        default:
            inv.fixed = {-ang[0], 0, 0};
            break;
    }
    qsim::apply_gate(state, inv, {});
}

double plain_expectation(const CompiledModel& cm, const QuantumState& psi0,
                         std::span<const double> cp) {
    QuantumState s = psi0;
    qsim::apply_circuit(s, cm.circuit, cp);
    return qsim::expectation_z(s, cm.config.readout_qubit());
}

}  // namespace

SampleGrad grad_parameter_shift(const CompiledModel& cm, const ModelParams& params,
                                const embed::Image& image, int label, LossKind loss) {
    const auto& cfg = cm.config;
    const auto patches = embed::extract_patches(image, cfg.patch_size);
    const embed::PatchSequence tokens =
        embed::project_patches(patches, model::embedder_view(cfg, params));
    std::vector<double> cp = model::circuit_params_for(cm, params, tokens);

    std::vector<std::vector<double>> regs;
    const QuantumState psi0 = [&] {
        if (cfg.encoding == model::Encoding::Amplitude) {
            regs = embed::amplitude_encode(tokens);
            return embed::inject_amplitudes(regs, cfg.num_readout);
        }
        return qsim::init_state(cfg.total_qubits());
    }();

    SampleGrad out;
    out.expectation = plain_expectation(cm, psi0, cp);
    out.logit = params.output_weight * out.expectation + params.output_bias;
    out.loss = loss_value(loss, out.logit, label);
    out.grad.assign(model::parameter_count(cfg), 0.0);

    const double dlogit = loss_dlogit(loss, out.logit, label);
    const double dexp = dlogit * params.output_weight;

    // Shift rule per circuit slot, read off the gate kinds.
    enum class Rule { None, TwoTerm, FourTerm };
    std::vector<Rule> rules(cm.slots.total(), Rule::None);
    for (const Gate& g : cm.circuit.gates) {
        if (!g.parameterized()) continue;
        const int n = qsim::angle_count(g.kind);
        const Rule r = (g.kind == GateKind::CRX || g.kind == GateKind::CRZ) ? Rule::FourTerm
                                                                            : Rule::TwoTerm;
        for (int i = 0; i < n; ++i) rules[g.param_index + i] = r;
    }

    const bool want_tokens = cfg.trainable_embedder;
    const int quantum_slots = cm.slots.kernel + cm.slots.perceptron;
    const int slots_to_shift = quantum_slots + (want_tokens ? cm.slots.tokens : 0);

    constexpr double kHalfPi = 1.57079632679489662;
    const double sq2 = std::sqrt(2.0);
    const double c_plus = (sq2 + 1.0) / (4.0 * sq2);
    const double c_minus = (sq2 - 1.0) / (4.0 * sq2);

    auto shifted = [&](int slot, double delta) {
        const double saved = cp[slot];
        cp[slot] = saved + delta;
        const double e = plain_expectation(cm, psi0, cp);
        cp[slot] = saved;
        return e;
    };

    std::vector<double> de_dslot(cm.slots.total(), 0.0);
    for (int slot = 0; slot < slots_to_shift; ++slot) {
        const int idx = slot < quantum_slots ? slot : cm.slots.token_base + (slot - quantum_slots);
        switch (rules[idx]) {
            case Rule::None:
                break;
            case Rule::TwoTerm:
                de_dslot[idx] = 0.5 * (shifted(idx, kHalfPi) - shifted(idx, -kHalfPi));
                break;
            case Rule::FourTerm:
                de_dslot[idx] = c_plus * (shifted(idx, kHalfPi) - shifted(idx, -kHalfPi)) -
                                c_minus * (shifted(idx, 3 * kHalfPi) - shifted(idx, -3 * kHalfPi));
                break;
        }
    }

    for (int i = 0; i < quantum_slots; ++i) out.grad[i] = dexp * de_dslot[i];

    std::vector<double> dtok;
    if (want_tokens) {
        if (cfg.encoding == model::Encoding::Angle) {
            dtok.assign(std::size_t(cm.slots.tokens), 0.0);
            for (int t = 0; t < cm.slots.tokens; ++t)
                dtok[t] = dexp * de_dslot[cm.slots.token_base + t];
        } else {
            // lam0 = U^dag Z_r U psi0 through the plain gate path
            QuantumState lam = psi0;
            qsim::apply_circuit(lam, cm.circuit, cp);
            const std::size_t rmask =
                std::size_t{1} << qsim::bit_position(lam.num_qubits, cfg.readout_qubit());
            for (std::size_t i = 0; i < lam.dim(); ++i)
                if (i & rmask) lam.amplitudes[i] = -lam.amplitudes[i];
            for (auto it = cm.circuit.gates.rbegin(); it != cm.circuit.gates.rend(); ++it)
                apply_gate_adjoint(lam, *it, cp);
            dtok = amplitude_token_grads(cm, tokens, regs, lam);
            for (double& d : dtok) d *= dexp;
        }
    }
    fill_classical_grads(cm, patches, dtok, dlogit, out.expectation, out.grad);
    return out;
}

SampleGrad grad_finite_difference(const ModelConfig& config, const ModelParams& params,
                                  const embed::Image& image, int label, LossKind loss, double h) {
    if (!(h > 0)) throw structural_error("grad_finite_difference: h must be positive");
    const model::CompiledModel cm = model::compile_model(config);
    std::vector<double> flat = model::to_flat(config, params);
    ModelParams scratch = params;

    auto loss_at = [&] {
        model::apply_flat(config, flat, scratch);
        const model::ForwardResult f = model::forward_compiled(cm, scratch, image);
        return loss_value(loss, f.logit, label);
    };

    SampleGrad out;
    const model::ForwardResult center = model::forward_compiled(cm, params, image);
    out.expectation = center.expectation;
    out.logit = center.logit;
    out.loss = loss_value(loss, center.logit, label);
    out.grad.assign(flat.size(), 0.0);
    for (std::size_t i = 0; i < flat.size(); ++i) {
        const double saved = flat[i];
        flat[i] = saved + h;
        const double lp = loss_at();
        flat[i] = saved - h;
        const double lm = loss_at();
        flat[i] = saved;
        out.grad[i] = (lp - lm) / (2.0 * h);
    }
    return out;
}

SampleGrad grad_adjoint(const ModelConfig& config, const ModelParams& params,
                        const embed::Image& image, int label, LossKind loss) {
    return grad_adjoint(model::compile_model(config), params, image, label, loss);
}

SampleGrad grad_parameter_shift(const ModelConfig& config, const ModelParams& params,
                                const embed::Image& image, int label, LossKind loss) {
    return grad_parameter_shift(model::compile_model(config), params, image, label, loss);
}

}  // namespace sasq::train
