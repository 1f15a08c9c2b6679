#pragma once

/**
 * @file rigidity.hpp
 * @brief Rigidity analysis of integer-line bijections.
 *
 * Decomposes a bijection as s*x + const + r(x) with minimal sup-residual,
 * profiles images of left rays, checks the displacement window inequality
 * and computes exact Folner ratios over the boxes [-n, n].
 */

#include <algorithm>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lipz/rational.hpp"
#include "lipz/zmap.hpp"

namespace lipz {

class hypothesis_not_met : public std::runtime_error {
public:
    explicit hypothesis_not_met(const std::string& what) : std::runtime_error(what) {}
};

struct RigidityDecomposition {
    int orientation = 1;
    Int constant = 0;       // the additive const, midrange choice
    Rat residual_sup = 0;   // sup |f(x) - orientation*x - constant|
    Rat lipschitz_product = 1;  // C = ||f||_Lip * ||f^-1||_Lip
    bool conforms = true;       // residual_sup <= C
    bool empirical = false;     // true when derived from a finite window
};

/// Exact decomposition; the constant is the midrange of f(x) - s*x (halves
/// rounded toward zero), which minimizes the sup-residual over integer
/// choices of the constant.
inline RigidityDecomposition decompose(const EventuallyAffineMap& f) {
    RigidityDecomposition out;
    out.orientation = f.orientation();
    out.lipschitz_product = lipschitz_profile(f).product;

    auto window = f.widened_support();
    if (!window) {
        out.constant = f.offset();
        out.residual_sup = 0;
    } else {
        // The widened window reaches the affine plateau on both sides, so
        // the displacement range over it is the global range.
        Int dmin, dmax;
        bool first = true;
        for (Int x = window->first; x <= window->second; ++x) {
            Int d = f(x) - f.orientation() * x;
            if (first) { dmin = dmax = d; first = false; }
            else { dmin = std::min(dmin, d); dmax = std::max(dmax, d); }
        }
        out.constant = midrange_toward_zero(dmin, dmax);
        out.residual_sup = Rat(std::max(Int(dmax - out.constant), Int(out.constant - dmin)));
    }
    out.conforms = out.residual_sup <= out.lipschitz_product;
    return out;
}

/// Window-empirical decomposition: the orientation is inferred from the
/// endpoint difference and the bound C can only be understated.
inline RigidityDecomposition decompose_window(const WindowSample& w) {
    if (w.size() < 2) throw degenerate_window();

    RigidityDecomposition out;
    out.empirical = true;
    out.orientation = w.values.back() > w.values.front() ? +1 : -1;
    out.lipschitz_product = window_lipschitz(w).product;

    Int dmin, dmax;
    for (std::size_t i = 0; i < w.values.size(); ++i) {
        Int x = w.start + Int(i);
        Int d = w.values[i] - out.orientation * x;
        if (i == 0) { dmin = dmax = d; }
        else { dmin = std::min(dmin, d); dmax = std::max(dmax, d); }
    }
    out.constant = midrange_toward_zero(dmin, dmax);
    out.residual_sup = Rat(std::max(Int(dmax - out.constant), Int(out.constant - dmin)));
    out.conforms = out.residual_sup <= out.lipschitz_product;
    return out;
}

enum class RayCase { below_ray, above_ray };

/// Exact shape of the image f((-inf, x]): one infinite tail plus a bounded
/// region where the indicator is nonconstant.
struct RayProfile {
    Int x;              // cut point
    Int image_of_cut;   // f(x)
    RayCase ray_case = RayCase::below_ray;
    bool region_empty = true;
    Int region_lo = 0;  // meaningful only when !region_empty
    Int region_hi = 0;
    Int width = 0;      // region_hi - region_lo + 1, or 0
    bool centered = true;  // region inside [f(x) - C/2, f(x) + C/2]
};

inline RayProfile ray_profile(const EventuallyAffineMap& f, const Int& x) {
    RayProfile out;
    out.x = x;
    out.image_of_cut = f(x);
    const int s = f.orientation();
    out.ray_case = s > 0 ? RayCase::below_ray : RayCase::above_ray;

    auto window = f.widened_support();
    if (window) {
        const auto [wlo, whi] = *window;
        // The domain ray splits into the tail A1 = (-inf, min(wlo-1, x)],
        // the far segment A2 = [whi+1, x] (when x > whi) and the window
        // part; A1 and A2 map affinely, the window part is scanned.
        Int a1_hi = std::min(Int(wlo - 1), x);
        bool has_a2 = x > whi;
        Int a2_lo = whi + 1, a2_hi = x;  // domain, only if has_a2

        std::set<Int> points;
        if (x >= wlo)
            for (Int u = wlo; u <= std::min(whi, x); ++u) points.insert(f(u));

        if (s > 0) {
            Int tail_hi = a1_hi + f.offset();  // image tail = (-inf, tail_hi]
            Int seg_lo = a2_lo + f.offset(), seg_hi = a2_hi + f.offset();

            Int max_in = tail_hi;
            if (has_a2) max_in = std::max(max_in, seg_hi);
            if (!points.empty()) max_in = std::max(max_in, *points.rbegin());

            Int first_out = tail_hi + 1;
            while (true) {
                if (has_a2 && first_out >= seg_lo && first_out <= seg_hi) {
                    first_out = seg_hi + 1;
                    continue;
                }
                if (points.count(first_out)) { ++first_out; continue; }
                break;
            }
            out.region_empty = first_out > max_in;
            if (!out.region_empty) { out.region_lo = first_out; out.region_hi = max_in; }
        } else {
            Int tail_lo = -a1_hi + f.offset();  // image tail = [tail_lo, +inf)
            Int seg_lo = -a2_hi + f.offset(), seg_hi = -a2_lo + f.offset();

            Int min_in = tail_lo;
            if (has_a2) min_in = std::min(min_in, seg_lo);
            if (!points.empty()) min_in = std::min(min_in, *points.begin());

            Int last_out = tail_lo - 1;
            while (true) {
                if (has_a2 && last_out >= seg_lo && last_out <= seg_hi) {
                    last_out = seg_lo - 1;
                    continue;
                }
                if (points.count(last_out)) { --last_out; continue; }
                break;
            }
            out.region_empty = min_in > last_out;
            if (!out.region_empty) { out.region_lo = min_in; out.region_hi = last_out; }
        }
    }
    // Affine maps have exact ray images, so the region stays empty.

    if (!out.region_empty) out.width = out.region_hi - out.region_lo + 1;

    if (out.region_empty) {
        out.centered = true;
    } else {
        Rat c = lipschitz_profile(f).product;
        Rat fx(out.image_of_cut);
        out.centered = Rat(out.region_lo) >= fx - c / 2 && Rat(out.region_hi) <= fx + c / 2;
    }
    return out;
}

/// True iff all cut points produce the same ray case and it matches the
/// orientation (+1 <-> below_ray, -1 <-> above_ray).
inline bool ray_dichotomy_consistency(const EventuallyAffineMap& f, std::span<const Int> cuts) {
    RayCase expected = f.orientation() > 0 ? RayCase::below_ray : RayCase::above_ray;
    for (const Int& x : cuts)
        if (ray_profile(f, x).ray_case != expected) return false;
    return true;
}

/// Displacement window inequality for a pair with gap above C.
/// Throws hypothesis_not_met when x2 - x1 <= C.
inline bool displacement_check(const EventuallyAffineMap& f, const Int& x1, const Int& x2) {
    Rat c = lipschitz_profile(f).product;
    if (Rat(x2 - x1) <= c)
        throw hypothesis_not_met("displacement check requires x2 - x1 > C = " + format_rational(c));
    Int image_gap = f.orientation() * (f(x2) - f(x1));
    return Rat(abs_int(image_gap - (x2 - x1))) <= c;
}

struct FolnerReport {
    Int n = 1;
    Int window_size = 3;   // 2n + 1
    Int intersection = 0;  // |f(A_n) cap A_n|
    Rat ratio = 0;         // intersection / (2n + 1)
};

/// Exact |f([-n,n]) cap [-n,n]| without enumerating the box: the affine
/// tail contributes an interval intersection, residual keys are patched
/// pointwise.
inline FolnerReport folner_ratio(const EventuallyAffineMap& f, const Int& n) {
    if (n < 1) throw std::invalid_argument("folner: n must be positive");
    FolnerReport out;
    out.n = n;
    out.window_size = 2 * n + 1;

    const int s = f.orientation();
    // x in [-n, n] with s*x + offset in [-n, n]
    Int ilo = s > 0 ? Int(-n - f.offset()) : Int(f.offset() - n);
    Int ihi = s > 0 ? Int(n - f.offset()) : Int(f.offset() + n);
    ilo = std::max(ilo, Int(-n));
    ihi = std::min(ihi, n);
    Int count = ihi >= ilo ? Int(ihi - ilo + 1) : Int(0);

    for (const auto& [x, r] : f.residual()) {
        if (x < -n || x > n) continue;
        Int affine = s > 0 ? Int(x + f.offset()) : Int(-x + f.offset());
        Int actual = affine + r;
        bool affine_in = affine >= -n && affine <= n;
        bool actual_in = actual >= -n && actual <= n;
        if (actual_in && !affine_in) ++count;
        if (!actual_in && affine_in) --count;
    }

    out.intersection = count;
    out.ratio = Rat(count, out.window_size);
    return out;
}

struct FolnerCurvePoint {
    FolnerReport report;
    Rat lower_bound;   // 1 - 2D/(2n+1), D = residual_sup + |const|
    bool meets_bound = true;
};

inline std::vector<FolnerCurvePoint> folner_curve(const EventuallyAffineMap& f,
                                                  std::span<const Int> ns) {
    auto dec = decompose(f);
    Rat displacement = dec.residual_sup + Rat(abs_int(dec.constant));
    std::vector<FolnerCurvePoint> out;
    out.reserve(ns.size());
    for (const Int& n : ns) {
        FolnerCurvePoint point;
        point.report = folner_ratio(f, n);
        point.lower_bound = 1 - 2 * displacement / Rat(point.report.window_size);
        point.meets_bound = point.report.ratio >= point.lower_bound;
        out.push_back(std::move(point));
    }
    return out;
}

}  // namespace lipz
