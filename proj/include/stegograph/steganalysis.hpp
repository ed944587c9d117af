#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>

#include "stegograph/errors.hpp"
#include "stegograph/image.hpp"
#include "stegograph/lsb.hpp"

namespace stegograph {

struct ChannelHistogram {
    std::array<std::array<std::uint64_t, 256>, 3> channel{}; // R, G, B
    std::array<std::uint64_t, 256> combined{};

    std::uint64_t combined_max() const {
        std::uint64_t m = 0;
        for (std::uint64_t v : combined) m = std::max(m, v);
        return m;
    }
};

inline ChannelHistogram histogram(const RgbImage& image) {
    ChannelHistogram h;
    const std::uint64_t pixels = image.pixel_count();
    for (std::uint64_t p = 0; p < pixels; ++p) {
        ++h.channel[0][image.data[p * 3]];
        ++h.channel[1][image.data[p * 3 + 1]];
        ++h.channel[2][image.data[p * 3 + 2]];
    }
    for (int v = 0; v < 256; ++v)
        h.combined[v] = h.channel[0][v] + h.channel[1][v] + h.channel[2][v];
    return h;
}

// Comb statistic: k-bit LSB replacement can move counts only inside the
// aligned group of 2^k bins that share the same high 8-k bits, so the
// within-group profile is where embedding leaves its trace. Each channel
// contributes a chi-square of its bin counts against their group means,
// summed over groups with nonzero mass. A channel whose whole mass sits in
// a single bin carries no within-group evidence and is excluded.
struct CombReport {
    std::array<double, 3> chi_square{};   // per channel
    std::array<double, 3> gap_fraction{}; // bins under half their group mean
    std::array<bool, 3> channel_degenerate{};
    double aggregate_chi_square = 0.0; // mean over non-degenerate channels
    std::uint64_t combined_max_bin = 0;
    double verdict = 0.0; // [0,1], monotone in aggregate_chi_square
    bool degenerate = false;
    int bits_per_slot = 0;
};

// Verdict squashing: the chi-square excess over its degrees of freedom is
// standardized (z = (x - df) / sqrt(2 df)) and mapped through
// 1 - exp(-z / kVerdictScale). An unsuspicious image sits near z <= 0 and
// scores ~0; heavily combed histograms saturate toward 1.
inline constexpr double kVerdictScale = 8.0;
inline constexpr double kGapThreshold = 0.5; // of the group mean

inline CombReport comb_score(const ChannelHistogram& hist, int k) {
    validate_bits_per_slot(k);
    const int group_size = 1 << k;
    const int group_count = 256 / group_size;

    CombReport report;
    report.bits_per_slot = k;
    report.combined_max_bin = hist.combined_max();

    int live_channels = 0;
    double chi_sum = 0.0;
    std::uint64_t df = 0;
    for (int ch = 0; ch < 3; ++ch) {
        const auto& bins = hist.channel[ch];
        int nonzero = 0;
        for (int v = 0; v < 256; ++v)
            if (bins[v]) ++nonzero;
        if (nonzero <= 1) {
            report.channel_degenerate[ch] = true;
            continue;
        }
        double chi = 0.0;
        std::uint64_t gap_bins = 0, counted_bins = 0;
        for (int g = 0; g < group_count; ++g) {
            std::uint64_t mass = 0;
            for (int i = 0; i < group_size; ++i) mass += bins[g * group_size + i];
            if (!mass) continue;
            const double mean = double(mass) / group_size;
            for (int i = 0; i < group_size; ++i) {
                const double d = double(bins[g * group_size + i]) - mean;
                chi += d * d / mean;
                if (double(bins[g * group_size + i]) < kGapThreshold * mean)
                    ++gap_bins;
                ++counted_bins;
            }
            df += group_size - 1;
        }
        report.chi_square[ch] = chi;
        report.gap_fraction[ch] =
            counted_bins ? double(gap_bins) / double(counted_bins) : 0.0;
        chi_sum += chi;
        ++live_channels;
    }

    if (!live_channels) {
        report.degenerate = true;
        report.verdict = 0.0;
        return report;
    }
    report.aggregate_chi_square = chi_sum / live_channels;
    const double mean_df = double(df) / live_channels;
    if (mean_df > 0) {
        const double z =
            (report.aggregate_chi_square - mean_df) / std::sqrt(2.0 * mean_df);
        report.verdict = z > 0 ? 1.0 - std::exp(-z / kVerdictScale) : 0.0;
    }
    return report;
}

struct CompareReport {
    std::array<std::uint32_t, 3> max_delta{};
    std::array<double, 3> mean_abs_delta{};
    std::uint32_t overall_max_delta = 0;
    double max_bin_ratio = 0.0; // stego combined max / original combined max
};

inline CompareReport compare(const RgbImage& original, const RgbImage& stego) {
    if (original.width != stego.width || original.height != stego.height)
        throw ShapeError("compare needs equal dimensions, got " +
                         std::to_string(original.width) + "x" +
                         std::to_string(original.height) + " vs " +
                         std::to_string(stego.width) + "x" +
                         std::to_string(stego.height));
    CompareReport r;
    std::array<std::uint64_t, 3> abs_sum{};
    const std::uint64_t pixels = original.pixel_count();
    for (std::uint64_t p = 0; p < pixels; ++p) {
        for (int ch = 0; ch < 3; ++ch) {
            const int a = original.data[p * 3 + ch];
            const int b = stego.data[p * 3 + ch];
            const std::uint32_t d = static_cast<std::uint32_t>(a > b ? a - b : b - a);
            abs_sum[ch] += d;
            r.max_delta[ch] = std::max(r.max_delta[ch], d);
        }
    }
    for (int ch = 0; ch < 3; ++ch) {
        r.mean_abs_delta[ch] = double(abs_sum[ch]) / double(pixels);
        r.overall_max_delta = std::max(r.overall_max_delta, r.max_delta[ch]);
    }
    const std::uint64_t om = histogram(original).combined_max();
    const std::uint64_t sm = histogram(stego).combined_max();
    r.max_bin_ratio = om ? double(sm) / double(om) : 0.0;
    return r;
}

// CSV export: one row per intensity value, columns value,red,green,blue,combined.
inline void write_histogram_csv(const ChannelHistogram& hist, std::ostream& out) {
    out << "value,red,green,blue,combined\n";
    for (int v = 0; v < 256; ++v)
        out << v << ',' << hist.channel[0][v] << ',' << hist.channel[1][v] << ','
            << hist.channel[2][v] << ',' << hist.combined[v] << '\n';
}

} // namespace stegograph
