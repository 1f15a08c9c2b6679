#pragma once

/**
 * @file zmap.hpp
 * @brief Bijections of the integer line with eventually affine behavior.
 *
 * An EventuallyAffineMap is f(x) = s*x + offset + r(x) where s is +1 or -1
 * and the residual r is a finite table. This family is closed under
 * composition and inversion and admits exact Lipschitz constants, ray
 * images and Folner counts. Construction always validates bijectivity.
 */

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lipz/rational.hpp"

namespace lipz {

using ResidualTable = std::vector<std::pair<Int, Int>>;

/// Unvalidated candidate for an EventuallyAffineMap.
struct MapCandidate {
    int orientation = 1;  // +1 or -1
    Int offset = 0;
    ResidualTable residual;
};

/// Thrown when a candidate fails the bijection check.
class map_defect : public std::runtime_error {
public:
    enum class kind_t { collision, gap };

    static map_defect collision(Int x1, Int x2) {
        if (x2 < x1) std::swap(x1, x2);
        return map_defect(kind_t::collision, x1, x2,
                          "collision: f(" + x1.str() + ") = f(" + x2.str() + ")");
    }
    static map_defect gap(Int y) {
        return map_defect(kind_t::gap, y, 0, "gap: no preimage of " + y.str());
    }

    kind_t kind() const { return kind_; }
    const Int& first_point() const { return a_; }   // x1, or the uncovered y
    const Int& second_point() const { return b_; }  // x2 (collision only)

private:
    map_defect(kind_t k, Int a, Int b, const std::string& what)
        : std::runtime_error(what), kind_(k), a_(std::move(a)), b_(std::move(b)) {}
    kind_t kind_;
    Int a_, b_;
};

class degenerate_window : public std::runtime_error {
public:
    degenerate_window() : std::runtime_error("window has fewer than 2 samples") {}
};

class EventuallyAffineMap {
public:
    /// Canonicalizes and validates a candidate; throws map_defect if the
    /// induced function is not a bijection of the integers.
    static EventuallyAffineMap validate(MapCandidate candidate);

    /// x -> orientation*x + offset (always a bijection).
    static EventuallyAffineMap affine(int orientation, Int offset) {
        return EventuallyAffineMap(orientation, std::move(offset), {});
    }

    static EventuallyAffineMap identity() { return affine(+1, 0); }

    int orientation() const { return orientation_; }
    const Int& offset() const { return offset_; }
    const ResidualTable& residual() const { return residual_; }

    Int operator()(const Int& x) const {
        Int v = orientation_ > 0 ? x : Int(-x);
        v += offset_;
        auto it = std::lower_bound(residual_.begin(), residual_.end(), x,
                                   [](const auto& e, const Int& key) { return e.first < key; });
        if (it != residual_.end() && it->first == x) v += it->second;
        return v;
    }

    /// Max |r(x)| (0 for an affine map).
    Int max_residual_magnitude() const {
        Int m = 0;
        for (const auto& [x, r] : residual_) m = std::max(m, abs_int(r));
        return m;
    }

    /// Convex hull of the residual support, nullopt when the residual is empty.
    std::optional<std::pair<Int, Int>> support_hull() const {
        if (residual_.empty()) return std::nullopt;
        return std::make_pair(residual_.front().first, residual_.back().first);
    }

    /// Support hull widened by max|r|+1 on both sides; the map agrees with
    /// its affine tail outside this interval, and any collision of a
    /// non-bijective candidate lies inside it.
    std::optional<std::pair<Int, Int>> widened_support() const {
        auto hull = support_hull();
        if (!hull) return std::nullopt;
        Int pad = max_residual_magnitude() + 1;
        return std::make_pair(hull->first - pad, hull->second + pad);
    }

    bool operator==(const EventuallyAffineMap&) const = default;

private:
    friend EventuallyAffineMap invert(const EventuallyAffineMap&);
    friend EventuallyAffineMap compose(const EventuallyAffineMap&, const EventuallyAffineMap&);

    // Trusted constructor: canonical table, bijectivity already established.
    EventuallyAffineMap(int orientation, Int offset, ResidualTable residual)
        : orientation_(orientation), offset_(std::move(offset)), residual_(std::move(residual)) {}

    int orientation_;
    Int offset_;
    ResidualTable residual_;
};

inline EventuallyAffineMap EventuallyAffineMap::validate(MapCandidate candidate) {
    if (candidate.orientation != 1 && candidate.orientation != -1)
        throw std::invalid_argument("orientation must be 1 or -1");

    // Canonical form: sorted keys, distinct, zero entries dropped.
    std::sort(candidate.residual.begin(), candidate.residual.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    ResidualTable table;
    table.reserve(candidate.residual.size());
    for (const auto& entry : candidate.residual) {
        if (!table.empty() && table.back().first == entry.first)
            throw std::invalid_argument("residual: duplicate key " + entry.first.str());
        if (entry.second != 0) table.push_back(entry);
    }

    EventuallyAffineMap f(candidate.orientation, candidate.offset, std::move(table));
    auto window = f.widened_support();
    if (!window) return f;  // affine tail only

    const auto [wlo, whi] = *window;
    const int s = f.orientation();

    // Image of the window under the pure affine part; the tails of the map
    // cover exactly the complement of this interval.
    Int jlo = s > 0 ? Int(wlo + f.offset()) : Int(-whi + f.offset());
    Int jhi = s > 0 ? Int(whi + f.offset()) : Int(-wlo + f.offset());

    std::vector<std::pair<Int, Int>> images;  // (f(x), x)
    for (Int x = wlo; x <= whi; ++x) images.emplace_back(f(x), x);
    std::sort(images.begin(), images.end());

    for (std::size_t i = 1; i < images.size(); ++i)
        if (images[i].first == images[i - 1].first)
            throw map_defect::collision(images[i - 1].second, images[i].second);

    for (const auto& [img, x] : images) {
        if (img < jlo || img > jhi) {
            // Same value as the affine tail at its preimage.
            Int tail_x = s > 0 ? Int(img - f.offset()) : Int(f.offset() - img);
            throw map_defect::collision(x, tail_x);
        }
    }

    // Counting makes a gap impossible once the two checks above pass; kept
    // as an explicit surjectivity check onto the image interval.
    Int expected = jlo;
    for (const auto& [img, x] : images) {
        if (img != expected) throw map_defect::gap(expected);
        ++expected;
    }

    return f;
}

/// Spec-level entry point: canonical map, or map_defect on rejection.
inline EventuallyAffineMap validate_bijection(MapCandidate candidate) {
    return EventuallyAffineMap::validate(std::move(candidate));
}

inline Int evaluate(const EventuallyAffineMap& f, const Int& x) { return f(x); }

inline EventuallyAffineMap invert(const EventuallyAffineMap& f) {
    const int s = f.orientation();
    Int inv_offset = -s * f.offset();
    auto window = f.widened_support();
    if (!window) return EventuallyAffineMap(s, std::move(inv_offset), {});

    ResidualTable table;
    for (Int x = window->first; x <= window->second; ++x) {
        Int y = f(x);
        Int r = x - (s > 0 ? Int(y + inv_offset) : Int(-y + inv_offset));
        if (r != 0) table.emplace_back(std::move(y), std::move(r));
    }
    std::sort(table.begin(), table.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return EventuallyAffineMap(s, std::move(inv_offset), std::move(table));
}

/// h(x) = f(g(x)).
inline EventuallyAffineMap compose(const EventuallyAffineMap& f, const EventuallyAffineMap& g) {
    const int s = f.orientation() * g.orientation();
    Int offset = f.orientation() * g.offset() + f.offset();

    // Outside this set g is affine and feeds the affine tail of f, so the
    // composite is affine there with the parameters above.
    std::map<Int, char> domain;
    for (const auto& [x, r] : g.residual()) domain.emplace(x, 0);
    for (const auto& [k, r] : f.residual())
        domain.emplace(g.orientation() * (k - g.offset()), 0);

    ResidualTable table;
    for (const auto& [x, unused] : domain) {
        Int h = f(g(x));
        Int r = h - (s > 0 ? Int(x + offset) : Int(-x + offset));
        if (r != 0) table.emplace_back(x, std::move(r));
    }
    return EventuallyAffineMap(s, std::move(offset), std::move(table));
}

struct LipschitzProfile {
    Rat forward;   // ||f||_Lip
    Rat backward;  // ||f^-1||_Lip
    Rat product;   // forward * backward
    bool empirical = false;  // true when measured through a finite window

    bool operator==(const LipschitzProfile&) const = default;
};

namespace detail {

/// Max |f(x+1) - f(x)|; equals the Lipschitz constant by the triangle
/// inequality on the integer line. Only pairs touching the residual support
/// can differ from 1.
inline Int max_adjacent_gap(const EventuallyAffineMap& f) {
    Int best = 1;
    auto hull = f.support_hull();
    if (!hull) return best;
    for (Int x = hull->first - 1; x <= hull->second; ++x)
        best = std::max(best, abs_int(f(x + 1) - f(x)));
    return best;
}

}  // namespace detail

inline LipschitzProfile lipschitz_profile(const EventuallyAffineMap& f) {
    Rat forward(detail::max_adjacent_gap(f));
    Rat backward(detail::max_adjacent_gap(invert(f)));
    return LipschitzProfile{forward, backward, forward * backward, false};
}

/// Observed images f(start), f(start+1), ... of an unknown bijection.
struct WindowSample {
    Int start;
    std::vector<Int> values;  // pairwise distinct

    static WindowSample checked(Int start, std::vector<Int> values) {
        std::vector<Int> sorted(values);
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i] == sorted[i - 1])
                throw std::invalid_argument("window values: duplicate value " + sorted[i].str());
        return WindowSample{std::move(start), std::move(values)};
    }

    std::size_t size() const { return values.size(); }
};

/// Window-empirical Lipschitz constants: lower bounds for the constants of
/// any bijection extending the sample.
inline LipschitzProfile window_lipschitz(const WindowSample& w) {
    if (w.size() < 2) throw degenerate_window();

    Int forward = 0;
    for (std::size_t i = 0; i + 1 < w.values.size(); ++i)
        forward = std::max(forward, abs_int(w.values[i + 1] - w.values[i]));

    // The inverse is sampled on the image set; consecutive image values
    // dominate all pairs by the mediant inequality.
    std::vector<std::pair<Int, Int>> by_value;  // (value, domain point)
    for (std::size_t i = 0; i < w.values.size(); ++i)
        by_value.emplace_back(w.values[i], w.start + Int(i));
    std::sort(by_value.begin(), by_value.end());

    Rat backward = 0;
    for (std::size_t i = 0; i + 1 < by_value.size(); ++i) {
        Rat ratio(abs_int(by_value[i + 1].second - by_value[i].second),
                  by_value[i + 1].first - by_value[i].first);
        backward = std::max(backward, ratio);
    }

    Rat fwd(forward);
    return LipschitzProfile{fwd, backward, fwd * backward, true};
}

/// A bijection of the interval [0, n).
struct FiniteBijection {
    int size = 0;
    std::vector<int> values;  // permutation of 0..size-1

    static FiniteBijection checked(std::vector<int> values) {
        const int n = static_cast<int>(values.size());
        if (n == 0) throw std::invalid_argument("finite bijection: empty value list");
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        for (int v : values) {
            if (v < 0 || v >= n)
                throw std::invalid_argument("finite bijection: value " + std::to_string(v) +
                                            " outside [0," + std::to_string(n) + ")");
            if (seen[static_cast<std::size_t>(v)])
                throw std::invalid_argument("finite bijection: duplicate value " + std::to_string(v));
            seen[static_cast<std::size_t>(v)] = 1;
        }
        return FiniteBijection{n, std::move(values)};
    }

    bool operator==(const FiniteBijection&) const = default;
};

}  // namespace lipz
