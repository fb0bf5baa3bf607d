#pragma once
// Test-only dense-staircase reference for monotone matching decisions.
// Curves are sampled at evenly spaced parameters, coordinates scaled to
// exact integers, and the classic max-min staircase recurrence is run on
// the sample grid with 64-bit arithmetic.  Because the pointwise distance
// between two straight segments is convex along a matched linear sweep, a
// staircase witness on the samples converts directly into a continuous
// monotone matching of the same radius, so "dense yes" implies "exact yes";
// the converse holds up to half a sample spacing on each curve.

#include <array>
#include <vector>

#include <curvembed/geom.hpp>

namespace refdense {

using IPt = std::array<long long, 2>;

// Evenly spaced samples (samples_per_seg intervals per segment), scaled by
// `scale` to integers.  Fails loudly if a coordinate is not integral at
// that scale.
inline std::vector<IPt> sample_curve_int(const curvembed::PolyCurve& c, int samples_per_seg,
                                         long scale) {
    using curvembed::Rat;
    std::vector<IPt> out;
    auto push = [&](const curvembed::Point& p) {
        Rat x = p.x * scale, y = p.y * scale;
        curvembed::require(x.get_den() == 1 && y.get_den() == 1,
                           "sample coordinate not integral at this scale");
        curvembed::require(x.get_num().fits_slong_p() && y.get_num().fits_slong_p(),
                           "sample coordinate overflows");
        out.push_back({x.get_num().get_si(), y.get_num().get_si()});
    };
    for (int i = 0; i < c.segments(); ++i) {
        curvembed::Segment s = c.seg(i);
        for (int k = 0; k < samples_per_seg; ++k) push(s.eval(curvembed::rat(k, samples_per_seg)));
    }
    push(c.v.back());
    return out;
}

inline long long ipt_dist2(const IPt& a, const IPt& b) {
    long long dx = a[0] - b[0], dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

// Squared max-min staircase value over the sample grid (monotone steps
// +1 in either or both indices, endpoints matched).
inline long long staircase_value2(const std::vector<IPt>& a, const std::vector<IPt>& b) {
    std::size_t na = a.size(), nb = b.size();
    std::vector<long long> prev(nb), cur(nb);
    for (std::size_t j = 0; j < nb; ++j)
        prev[j] = std::max(j ? prev[j - 1] : 0LL, ipt_dist2(a[0], b[j]));
    for (std::size_t i = 1; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            long long best = prev[j];
            if (j) {
                best = std::min(best, cur[j - 1]);
                best = std::min(best, prev[j - 1]);
            }
            cur[j] = std::max(best, ipt_dist2(a[i], b[j]));
        }
        std::swap(prev, cur);
    }
    return prev[nb - 1];
}

}  // namespace refdense
