#include "sasq/attention/attention.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace sasq::attention {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_weight_set(const AttentionWeightSet& w, int d) {
    for (const RealMatrix* m : {&w.wq, &w.wk, &w.wv})
        if (m->rows != d || m->cols != d)
            throw structural_error("attention weights must be d x d");
}

std::vector<double> project_row(const RealMatrix& w, const RealMatrix& x, int row) {
    // w * x_row for a row vector of x
    std::vector<double> out(w.rows, 0.0);
    for (int i = 0; i < w.rows; ++i) {
        double acc = 0.0;
        for (int j = 0; j < w.cols; ++j) acc += w.at(i, j) * x.at(row, j);
        out[i] = acc;
    }
    return out;
}

}  // namespace

std::vector<double> softmax(std::span<const double> z) {
    if (z.empty()) throw structural_error("softmax: empty input");
    const double zmax = *std::max_element(z.begin(), z.end());
    std::vector<double> out(z.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = std::exp(z[i] - zmax);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

RealMatrix self_attention(const RealMatrix& x, const AttentionWeightSet& weights) {
    const int n = x.rows, d = x.cols;
    if (n < 1 || d < 1) throw structural_error("self_attention: empty sequence");
    check_weight_set(weights, d);
    const double scale = 1.0 / std::sqrt(double(d));

    std::vector<std::vector<double>> q(n), k(n), v(n);
    for (int s = 0; s < n; ++s) {
        q[s] = project_row(weights.wq, x, s);
        k[s] = project_row(weights.wk, x, s);
        v[s] = project_row(weights.wv, x, s);
    }

    RealMatrix y(n, d);
    std::vector<double> scores(n);
    for (int s = 0; s < n; ++s) {
        for (int j = 0; j < n; ++j) {
            double dot = 0.0;
            for (int c = 0; c < d; ++c) dot += q[s][c] * k[j][c];
            scores[j] = dot * scale;
        }
        const std::vector<double> a = softmax(scores);
        for (int j = 0; j < n; ++j)
            for (int c = 0; c < d; ++c) y.at(s, c) += a[j] * v[j][c];
    }
    return y;
}

RealMatrix multi_head_attention(const RealMatrix& x, const std::vector<AttentionWeightSet>& heads,
                                const RealMatrix& w_o) {
    if (heads.empty()) throw structural_error("multi_head_attention: no heads");
    const int n = x.rows, d = x.cols;
    const int h = int(heads.size());
    if (w_o.rows != h * d || w_o.cols != d)
        throw structural_error("multi_head_attention: w_o must be (h*d) x d");

    RealMatrix concat(n, h * d);
    for (int i = 0; i < h; ++i) {
        const RealMatrix yi = self_attention(x, heads[i]);
        for (int s = 0; s < n; ++s)
            for (int c = 0; c < d; ++c) concat.at(s, i * d + c) = yi.at(s, c);
    }
    return matmul(concat, w_o);
}

RealMatrix kernel_attention_direct(const RealMatrix& x, const StationaryKernel& kernel) {
    const int n = x.rows, d = x.cols;
    if (int(kernel.taps.size()) != n)
        throw structural_error("kernel_attention: kernel needs exactly N taps");
    for (const RealMatrix& t : kernel.taps)
        if (t.rows != d || t.cols != d) throw structural_error("kernel tap must be d x d");

    RealMatrix y(n, d);
    for (int s = 0; s < n; ++s)
        for (int sp = 0; sp < n; ++sp) {
            const RealMatrix& tap = kernel.taps[((s - sp) % n + n) % n];
            for (int r = 0; r < d; ++r) {
                double acc = 0.0;
                for (int c = 0; c < d; ++c) acc += tap.at(r, c) * x.at(sp, c);
                y.at(s, r) += acc;
            }
        }
    return y;
}

RealMatrix kernel_attention_fft(const RealMatrix& x, const StationaryKernel& kernel) {
    const int n = x.rows, d = x.cols;
    if (int(kernel.taps.size()) != n)
        throw structural_error("kernel_attention: kernel needs exactly N taps");
    for (const RealMatrix& t : kernel.taps)
        if (t.rows != d || t.cols != d) throw structural_error("kernel tap must be d x d");

    using cd = std::complex<double>;
    auto root = [n](int num) {
        const double ang = -2.0 * kPi * double(num % n) / double(n);
        return cd{std::cos(ang), std::sin(ang)};
    };

    // Forward DFT along the sequence axis (tokens and taps).
    std::vector<std::vector<cd>> xhat(n, std::vector<cd>(d, cd{0, 0}));
    std::vector<std::vector<cd>> khat(n, std::vector<cd>(std::size_t(d) * d, cd{0, 0}));
    for (int f = 0; f < n; ++f)
        for (int s = 0; s < n; ++s) {
            const cd w = root(f * s);
            for (int c = 0; c < d; ++c) xhat[f][c] += w * x.at(s, c);
            const RealMatrix& tap = kernel.taps[s];
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) khat[f][std::size_t(r) * d + c] += w * tap.at(r, c);
        }

    // Matrix-vector product per frequency.
    std::vector<std::vector<cd>> yhat(n, std::vector<cd>(d, cd{0, 0}));
    for (int f = 0; f < n; ++f)
        for (int r = 0; r < d; ++r) {
            cd acc{0, 0};
            for (int c = 0; c < d; ++c) acc += khat[f][std::size_t(r) * d + c] * xhat[f][c];
            yhat[f][r] = acc;
        }

    // Inverse DFT, then verify and drop the imaginary residue.
    RealMatrix y(n, d);
    double residue = 0.0;
    for (int s = 0; s < n; ++s)
        for (int c = 0; c < d; ++c) {
            cd acc{0, 0};
            for (int f = 0; f < n; ++f) acc += std::conj(root(f * s)) * yhat[f][c];
            acc /= double(n);
            residue = std::max(residue, std::abs(acc.imag()));
            y.at(s, c) = acc.real();
        }
    if (residue > 1e-8)
        throw numeric_error("kernel_attention_fft: imaginary residue " + std::to_string(residue));
    return y;
}

}  // namespace sasq::attention
