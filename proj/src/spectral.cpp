#include "moebius/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "moebius/parallel.hpp"

namespace moebius {

namespace {

bool is_power_of_two(std::int64_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// Forward twiddles exp(-2*pi*i*k/n), k = 0..n/2-1, computed directly per
// entry so no recurrence drift accumulates.
std::vector<std::complex<double>> make_twiddles(std::int64_t n) {
    std::vector<std::complex<double>> tw(static_cast<std::size_t>(n / 2));
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::int64_t k = 0; k < n / 2; ++k) {
        tw[static_cast<std::size_t>(k)] = std::polar(1.0, step * static_cast<double>(k));
    }
    return tw;
}

// In-place decimation-in-time radix-2 transform, in-order output.
void fft_radix2(std::complex<double>* data, std::int64_t n,
                const std::vector<std::complex<double>>& twiddles) {
    for (std::int64_t i = 1, j = 0; i < n; ++i) {
        std::int64_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j |= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }
    for (std::int64_t len = 2; len <= n; len <<= 1) {
        const std::int64_t half = len / 2;
        const std::int64_t stride = n / len;
        for (std::int64_t base = 0; base < n; base += len) {
            for (std::int64_t j = 0; j < half; ++j) {
                const std::complex<double> w = twiddles[static_cast<std::size_t>(j * stride)];
                const std::complex<double> u = data[base + j];
                const std::complex<double> v = data[base + j + half] * w;
                data[base + j] = u + v;
                data[base + j + half] = u - v;
            }
        }
    }
}

void check_fft_length(Eigen::Index n, const char* what) {
    if (!is_power_of_two(n)) {
        throw std::invalid_argument(std::string(what) +
                                    ": length must be a power of two >= 2");
    }
}

std::vector<double> make_window(Window window, std::int64_t len) {
    std::vector<double> w(static_cast<std::size_t>(len), 1.0);
    if (window == Window::Hann) {
        const double step = 2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::int64_t j = 0; j < len; ++j) {
            w[static_cast<std::size_t>(j)] =
                0.5 * (1.0 - std::cos(step * static_cast<double>(j)));
        }
    }
    return w;
}

// Segments are processed in fixed-size groups; each group accumulates its own
// partial spectrum and the partials are summed in group order, so the result
// does not depend on the worker count.
constexpr std::int64_t kSegmentsPerGroup = 32;

template <typename FillSegment>
PsdEstimate welch_impl(const FillSegment& fill, std::int64_t total_len,
                       std::int64_t segment_len, double overlap, Window window,
                       unsigned workers) {
    if (!is_power_of_two(segment_len)) {
        throw std::invalid_argument("welch_psd: segment length must be a power of two >= 2");
    }
    if (total_len < segment_len) {
        throw std::invalid_argument("welch_psd: segment longer than the signal");
    }
    if (overlap != 0.0 && overlap != 0.5) {
        throw std::invalid_argument("welch_psd: overlap must be 0 or 0.5");
    }
    const std::int64_t hop = overlap == 0.5 ? segment_len / 2 : segment_len;
    const std::int64_t n_segments = (total_len - segment_len) / hop + 1;
    const std::int64_t n_bins = segment_len / 2 + 1;

    const std::vector<double> win = make_window(window, segment_len);
    double window_ss = 0.0;
    for (double w : win) {
        window_ss += w * w;
    }
    const auto twiddles = make_twiddles(segment_len);

    const std::int64_t n_groups =
        (n_segments + kSegmentsPerGroup - 1) / kSegmentsPerGroup;
    std::vector<Eigen::VectorXd> partial(static_cast<std::size_t>(n_groups));

    parallel_chunks(0, n_groups, 1, workers, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<std::complex<double>> buffer(static_cast<std::size_t>(segment_len));
        for (std::int64_t g = lo; g < hi; ++g) {
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(n_bins);
            const std::int64_t seg_end =
                std::min(n_segments, (g + 1) * kSegmentsPerGroup);
            for (std::int64_t s = g * kSegmentsPerGroup; s < seg_end; ++s) {
                fill(s * hop, segment_len, buffer.data());
                double mean = 0.0;
                for (std::int64_t j = 0; j < segment_len; ++j) {
                    mean += buffer[static_cast<std::size_t>(j)].real();
                }
                mean /= static_cast<double>(segment_len);
                for (std::int64_t j = 0; j < segment_len; ++j) {
                    auto& b = buffer[static_cast<std::size_t>(j)];
                    b = {(b.real() - mean) * win[static_cast<std::size_t>(j)], 0.0};
                }
                fft_radix2(buffer.data(), segment_len, twiddles);
                for (std::int64_t k = 0; k < n_bins; ++k) {
                    acc[k] += std::norm(buffer[static_cast<std::size_t>(k)]);
                }
            }
            partial[static_cast<std::size_t>(g)] = std::move(acc);
        }
    });

    PsdEstimate psd;
    psd.segment_len = segment_len;
    psd.overlap = overlap;
    psd.window = window;
    psd.n_segments = n_segments;
    psd.freqs.resize(n_bins);
    for (std::int64_t k = 0; k < n_bins; ++k) {
        psd.freqs[k] = static_cast<double>(k) / static_cast<double>(segment_len);
    }
    psd.power = Eigen::VectorXd::Zero(n_bins);
    for (std::int64_t g = 0; g < n_groups; ++g) {
        psd.power += partial[static_cast<std::size_t>(g)];
    }
    psd.power /= static_cast<double>(n_segments) * window_ss;
    return psd;
}

}  // namespace

Eigen::VectorXcd fft(Eigen::VectorXcd x) {
    check_fft_length(x.size(), "fft");
    const auto twiddles = make_twiddles(x.size());
    fft_radix2(x.data(), x.size(), twiddles);
    return x;
}

Eigen::VectorXcd ifft(Eigen::VectorXcd x) {
    check_fft_length(x.size(), "ifft");
    x = x.conjugate();
    const auto twiddles = make_twiddles(x.size());
    fft_radix2(x.data(), x.size(), twiddles);
    x = x.conjugate() / static_cast<double>(x.size());
    return x;
}

PsdEstimate welch_psd(const MuTable& table, std::int64_t segment_len,
                      double overlap, Window window, unsigned workers) {
    const std::int8_t* values = table.values.data();
    auto fill = [values](std::int64_t start, std::int64_t len,
                         std::complex<double>* dst) {
        for (std::int64_t j = 0; j < len; ++j) {
            dst[j] = {static_cast<double>(values[start + j]), 0.0};
        }
    };
    return welch_impl(fill, table.n_max, segment_len, overlap, window, workers);
}

PsdEstimate welch_psd(const Eigen::VectorXd& signal, std::int64_t segment_len,
                      double overlap, Window window, unsigned workers) {
    const double* values = signal.data();
    auto fill = [values](std::int64_t start, std::int64_t len,
                         std::complex<double>* dst) {
        for (std::int64_t j = 0; j < len; ++j) {
            dst[j] = {values[start + j], 0.0};
        }
    };
    return welch_impl(fill, signal.size(), segment_len, overlap, window, workers);
}

double peak_ratio(const PsdEstimate& psd) {
    if (psd.power.size() < 2) {
        throw std::invalid_argument("peak_ratio: spectrum has no non-DC bins");
    }
    const auto tail = psd.power.tail(psd.power.size() - 1);
    const double mean = tail.mean();
    if (mean <= 0.0) {
        throw std::invalid_argument("peak_ratio: all-zero power spectrum");
    }
    return tail.maxCoeff() / mean;
}

}  // namespace moebius
