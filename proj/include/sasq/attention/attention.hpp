#pragma once

#include <span>
#include <vector>

#include "sasq/util/matrix.hpp"

namespace sasq::attention {

// Numerically safe softmax (max-subtraction). Output is positive and sums
// to 1. Throws structural_error on an empty input.
std::vector<double> softmax(std::span<const double> z);

// Query/key/value projections, all d x d.
struct AttentionWeightSet {
    RealMatrix wq, wk, wv;
};

// Scaled dot-product self-attention over a sequence x (rows are tokens):
//   a[s][j] = softmax_j( <Wq x_s, Wk x_j> / sqrt(d) ),  y_s = sum_j a[s][j] Wv x_j
RealMatrix self_attention(const RealMatrix& x, const AttentionWeightSet& weights);

// Per-head outputs concatenated along the feature axis, then projected by
// w_o ((h*d) x d).
RealMatrix multi_head_attention(const RealMatrix& x, const std::vector<AttentionWeightSet>& heads,
                                const RealMatrix& w_o);

// Stationary matrix-valued kernel: tap t applies to displacement (s - s') mod N.
struct StationaryKernel {
    std::vector<RealMatrix> taps;  // N taps, each d x d
};

// Direct circular convolution: y_s = sum_{s'} k[(s - s') mod N] x_{s'}.
RealMatrix kernel_attention_direct(const RealMatrix& x, const StationaryKernel& kernel);

// Convolution-theorem route: DFT along the sequence axis, per-frequency
// matrix-vector product, inverse DFT. The imaginary residue is checked
// against 1e-8 (numeric_error above that) and discarded.
RealMatrix kernel_attention_fft(const RealMatrix& x, const StationaryKernel& kernel);

}  // namespace sasq::attention
