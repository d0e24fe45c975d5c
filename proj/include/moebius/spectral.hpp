#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "moebius/mu_table.hpp"

namespace moebius {

enum class Window { Rectangular, Hann };

// Welch-averaged one-sided power spectrum.  Power is normalized by the
// window's sum of squares so an i.i.d. unit-variance input yields mean power
// of about 1 in every bin; freqs are cycles per sample in [0, 0.5].
struct PsdEstimate {
    std::int64_t segment_len = 0;  // power of two
    double overlap = 0.0;          // fraction of segment_len
    Window window = Window::Hann;
    std::int64_t n_segments = 0;
    Eigen::VectorXd freqs;  // k / segment_len, k = 0..segment_len/2
    Eigen::VectorXd power;  // segment_len/2 + 1 nonnegative values
};

// In-order radix-2 transforms; the length must be a power of two >= 2.
// ifft(fft(x)) reproduces x to ~1e-12 relative error for lengths up to 2^20.
Eigen::VectorXcd fft(Eigen::VectorXcd x);
Eigen::VectorXcd ifft(Eigen::VectorXcd x);

// Mean-removed (per segment), windowed, overlapped periodogram average over
// a mu table or an arbitrary real signal.  overlap must be 0 or 0.5.
// Per-segment periodograms are independent; with `workers` > 1 they are
// computed in fixed-size groups reduced in index order, so the result is
// bit-identical for any worker count.
PsdEstimate welch_psd(const MuTable& table, std::int64_t segment_len,
                      double overlap, Window window, unsigned workers = 1);
PsdEstimate welch_psd(const Eigen::VectorXd& signal, std::int64_t segment_len,
                      double overlap, Window window, unsigned workers = 1);

// max(power)/mean(power) over the non-DC bins: ~1 for a flat spectrum,
// ~number-of-bins for a single tone.  The quantitative proxy for "no
// distinguished peak".
double peak_ratio(const PsdEstimate& psd);

}  // namespace moebius
